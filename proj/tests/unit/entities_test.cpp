#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "ntn/entities/simulation.hpp"
#include "ntn/metrics/report.hpp"
#include "ntn/scenario/build.hpp"

using namespace ntn;
using entities::GroupStatus;
using entities::Protocol;
using entities::UePhase;
using des::MessageClass;

namespace {

entities::SimulationSetup base_setup(Protocol p, std::vector<geometry::GroundPoint> ues) {
  scenario::ScenarioConfig cfg;
  entities::SimulationSetup s;
  s.protocol = p;
  s.satellites = scenario::place_satellites(cfg);
  s.t_end = scenario::default_t_end(cfg);
  s.ues = std::move(ues);
  return s;
}

// n UEs spread over one 1 km square just east of the origin.
std::vector<geometry::GroundPoint> one_square(std::uint32_t n) {
  std::vector<geometry::GroundPoint> out;
  for (std::uint32_t i = 0; i < n; ++i) {
    out.push_back({0.05 + 0.9 * (i % 5) / 4.0, 0.05 + 0.9 * (i / 5) / 4.0});
  }
  return out;
}

std::vector<std::uint32_t> iota(std::uint32_t n) {
  std::vector<std::uint32_t> v(n);
  for (std::uint32_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

bool all_attached(const entities::RunResult& r) {
  return std::all_of(r.final_phases.begin(), r.final_phases.end(), [](UePhase p) { return p == UePhase::Attached; });
}

std::uint64_t source_received(const entities::RunResult& r) { return r.ledger.satellite(0).total_received(); }

std::uint64_t received(const entities::RunResult& r, MessageClass c) {
  return r.ledger.satellite(0).received[static_cast<std::size_t>(c)];
}

}  // namespace

TEST_CASE("single UE handover timing") {
  entities::Simulation sim(base_setup(Protocol::Ho, {{0.0, 0.0}}));
  const auto r = sim.run();
  const auto& ue = r.ledger.ues()[0];
  REQUIRE(ue.request_sent_at.has_value());
  REQUIRE(ue.config_received_at.has_value());
  // uplink 3.001, source 0.2, ISL 1.001, target 0.3, ISL 1.001, source 0.3,
  // downlink 3.001
  CHECK((*ue.config_received_at - *ue.request_sent_at).us() == 8804);
  CHECK(ue.attached_at.has_value());
  CHECK(source_received(r) == 3);
  CHECK(received(r, MessageClass::UeRequest) == 1);
  CHECK(received(r, MessageClass::InterSatellite) == 1);
  CHECK(received(r, MessageClass::CoreResponse) == 1);
  CHECK(r.ledger.satellite(1).received[static_cast<std::size_t>(MessageClass::AttachRequest)] == 1);
  CHECK(r.ledger.core().total_received() == 1);
  CHECK(r.final_phases[0] == UePhase::Attached);
  CHECK(r.satellites[0].conserved);
}

TEST_CASE("trigger waits for the nearest-satellite test") {
  auto setup = base_setup(Protocol::Ho, {{-10.0, 0.0}, {10.0, 0.0}});
  entities::Simulation sim(setup);
  const auto r = sim.run();
  const auto& a = r.ledger.ues()[0];
  const auto& b = r.ledger.ues()[1];
  REQUIRE(a.request_sent_at.has_value());
  REQUIRE(b.request_sent_at.has_value());
  const auto t_a = geometry::handover_crossing_time({-10.0, 0.0}, setup.satellites[0], setup.satellites[1]);
  CHECK(a.request_sent_at->seconds() >= *t_a);
  CHECK(a.request_sent_at->seconds() < *t_a + 1e-5);
  CHECK((*b.request_sent_at - *a.request_sent_at).seconds() == doctest::Approx(20.0 / 7.56).epsilon(1e-5));
}

TEST_CASE("group of twenty: 2+K_G messages under GHO, 3 N_G under HO") {
  auto gho = base_setup(Protocol::Gho, one_square(20));
  gho.groups = {{protocol::GroupId{"G0:0"}, iota(20)}};
  auto ho = base_setup(Protocol::Ho, one_square(20));

  entities::Simulation gsim(gho);
  const auto g = gsim.run();
  CHECK(source_received(g) == 4);
  CHECK(received(g, MessageClass::GaRequest) == 2);
  CHECK(received(g, MessageClass::InterSatellite) == 1);
  CHECK(received(g, MessageClass::CoreResponse) == 1);
  CHECK(received(g, MessageClass::UeRequest) == 0);
  CHECK(g.group_status[0] == GroupStatus::Configured);
  CHECK(std::count(g.was_aggregator.begin(), g.was_aggregator.end(), true) == 2);
  CHECK(metrics::success_rate(g.ledger).percent == 100.0);
  CHECK(all_attached(g));

  entities::Simulation hsim(ho);
  const auto h = hsim.run();
  CHECK(source_received(h) == 60);
  CHECK(metrics::success_rate(h.ledger).percent == 100.0);
}

TEST_CASE("digest-addressed group requests cost the same") {
  auto gho = base_setup(Protocol::Gho, one_square(20));
  gho.groups = {{protocol::GroupId{"G0:0"}, iota(20)}};
  gho.digest_addressing = true;
  entities::Simulation sim(gho);
  const auto r = sim.run();
  CHECK(source_received(r) == 4);
  CHECK(r.ledger.verification_failures() == 0);
  CHECK(all_attached(r));
}

TEST_CASE("members configured before their own trigger wait zero") {
  auto gho = base_setup(Protocol::Gho, one_square(20));
  gho.groups = {{protocol::GroupId{"G0:0"}, iota(20)}};
  entities::Simulation sim(gho);
  const auto r = sim.run();
  const auto zero = metrics::waiting_times_ms(r.ledger, metrics::WaitOutcome::Success);
  REQUIRE(zero.size() == 20);
  CHECK(std::count(zero.begin(), zero.end(), 0.0) > 0);
  CHECK(std::all_of(zero.begin(), zero.end(), [](double w) { return w >= 0.0; }));
  CHECK(received(r, MessageClass::UeRequest) == 0);
}

// The third member leaves source coverage before its trigger while the group
// is notified. With a minimum group size of 3 the source cancels the group,
// and the remaining two fall back to the per-UE handover.
TEST_CASE("cancelled group falls back to per-UE handover") {
  auto gho = base_setup(Protocol::Gho, {{0.0, 0.0}, {0.5, 0.0}, {0.2, 22.0}});
  gho.groups = {{protocol::GroupId{"G0:0"}, {0, 1, 2}}};
  gho.min_group_size = 3;
  entities::Simulation sim(gho);
  const auto r = sim.run();
  CHECK(r.group_status[0] == GroupStatus::Cancelled);
  CHECK(r.final_phases[0] == UePhase::Attached);
  CHECK(r.final_phases[1] == UePhase::Attached);
  CHECK(received(r, MessageClass::UeRequest) == 2);
  CHECK(received(r, MessageClass::GaRequest) == 0);
  CHECK_FALSE(r.ledger.ues()[2].request_sent_at.has_value());
  CHECK_FALSE(r.ledger.ues()[2].failed_at.has_value());
  CHECK(metrics::success_rate(r.ledger).percent == 100.0);
}

TEST_CASE("overload drops and retransmissions keep conservation") {
  scenario::ScenarioConfig cfg;
  cfg.ue_count = 10'000;
  cfg.queue_capacity = 20;
  cfg.processors = 1;
  auto sim = scenario::build_simulation(cfg);
  const auto r = sim->run();
  const auto report = metrics::make_report(r.ledger);
  CHECK(report.drop_rate > 0.0);
  CHECK(report.total_messages > 3 * report.triggered);
  CHECK(received(r, MessageClass::UeRetransmission) > 0);
  for (const auto& n : r.satellites) {
    CHECK(n.conserved);
    CHECK(n.max_queued <= 20);
  }
  std::uint64_t bucket_sum = 0;
  for (const auto& b : r.ledger.buckets(0)) bucket_sum += b.received;
  CHECK(bucket_sum == r.ledger.satellite(0).total_received());
  // Every UE ends in exactly one terminal state.
  for (const auto& ue : r.ledger.ues()) {
    if (!ue.request_sent_at) continue;
    CHECK(ue.config_received_at.has_value() != ue.failed_at.has_value());
  }
}

TEST_CASE("identical setups give identical runs") {
  scenario::ScenarioConfig cfg;
  cfg.protocol = Protocol::Gho;
  cfg.ue_count = 4000;
  std::vector<des::EventRecord> trace_a;
  std::vector<des::EventRecord> trace_b;
  auto a = scenario::build_simulation(cfg);
  auto b = scenario::build_simulation(cfg);
  a->set_trace([&](const des::EventRecord& e) { trace_a.push_back(e); });
  b->set_trace([&](const des::EventRecord& e) { trace_b.push_back(e); });
  const auto ra = a->run();
  const auto rb = b->run();
  CHECK(ra.ledger == rb.ledger);
  CHECK(trace_a == trace_b);
  CHECK(ra.events_fired == rb.events_fired);
  CHECK_THROWS_AS(a->run(), std::logic_error);
}

TEST_CASE("idle UEs never trigger") {
  auto s = base_setup(Protocol::Ho, {{0.0, 0.0}, {1.0, 0.0}});
  s.idle = {true, false};
  entities::Simulation sim(s);
  const auto r = sim.run();
  CHECK_FALSE(r.ledger.ues()[0].request_sent_at.has_value());
  CHECK(r.ledger.ues()[1].config_received_at.has_value());
  CHECK(source_received(r) == 3);
}

TEST_CASE("invalid setups are rejected") {
  auto s = base_setup(Protocol::Gho, one_square(4));
  s.groups = {{protocol::GroupId{"G0:0"}, {0, 1, 9}}};
  CHECK_THROWS_AS(entities::Simulation{s}, std::invalid_argument);
  s.groups = {{protocol::GroupId{"G0:0"}, {0, 1}}, {protocol::GroupId{"G0:1"}, {1, 2}}};
  CHECK_THROWS_AS(entities::Simulation{s}, std::invalid_argument);
  s.groups.clear();
  s.satellites.resize(1);
  CHECK_THROWS_AS(entities::Simulation{s}, std::invalid_argument);
}

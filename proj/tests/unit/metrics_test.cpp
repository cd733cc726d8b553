#include <doctest.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ntn/entities/simulation.hpp"
#include "ntn/metrics/event_log.hpp"
#include "ntn/metrics/export.hpp"
#include "ntn/scenario/build.hpp"

using namespace ntn;
using namespace ntn::metrics;
using des::Endpoint;
using des::MessageClass;

namespace {

LedgerLabels labels(SimTime t_end = SimTime::from_us(1'000'000)) {
  return LedgerLabels{"ho", 10, 16, 3, t_end, SimTime::from_us(200'000)};
}

MetricRecord rec(std::int64_t us, RecordKind k, Endpoint e, std::optional<MessageClass> c = std::nullopt) {
  return MetricRecord{SimTime::from_us(us), k, e, c};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("success rate") {
  MetricsLedger l(labels());
  CHECK(success_rate(l).no_demand);
  CHECK(success_rate(l).percent == 100.0);
  for (std::uint32_t i = 0; i < 16; ++i) {
    l.record(rec(100, RecordKind::RequestSent, Endpoint::ue(i)));
    l.record(rec(200, i < 13 ? RecordKind::ConfigReceived : RecordKind::Failed, Endpoint::ue(i)));
  }
  CHECK(success_rate(l).percent == doctest::Approx(81.25));
  CHECK_FALSE(success_rate(l).no_demand);
}

TEST_CASE("ledger rejects impossible UE histories") {
  MetricsLedger l(labels());
  l.record(rec(1, RecordKind::RequestSent, Endpoint::ue(0)));
  l.record(rec(2, RecordKind::ConfigReceived, Endpoint::ue(0)));
  CHECK_THROWS_AS(l.record(rec(3, RecordKind::ConfigReceived, Endpoint::ue(0))), std::logic_error);
  CHECK_THROWS_AS(l.record(rec(3, RecordKind::Failed, Endpoint::ue(0))), std::logic_error);
}

TEST_CASE("drop rate") {
  MetricsLedger l(labels());
  CHECK(drop_rate(l, Endpoint::satellite(0)) == 0.0);
  for (int i = 0; i < 100; ++i) {
    l.record(rec(i, RecordKind::Received, Endpoint::satellite(0), MessageClass::UeRequest));
    if (i < 74) l.record(rec(i, RecordKind::Dropped, Endpoint::satellite(0), MessageClass::UeRequest));
  }
  CHECK(drop_rate(l, Endpoint::satellite(0)) == doctest::Approx(74.0));
  CHECK(drop_rate(l, Endpoint::satellite(1)) == 0.0);
}

TEST_CASE("waiting times") {
  MetricsLedger l(labels());
  CHECK_FALSE(waiting_time_stats(l, WaitOutcome::Success).has_value());
  l.record(rec(100'000, RecordKind::RequestSent, Endpoint::ue(0)));
  l.record(rec(109'000, RecordKind::ConfigReceived, Endpoint::ue(0)));
  const auto s = waiting_time_stats(l, WaitOutcome::Success);
  REQUIRE(s.has_value());
  CHECK(s->mean == doctest::Approx(9.0));
  CHECK_FALSE(s->ci.has_value());
  CHECK_FALSE(waiting_time_stats(l, WaitOutcome::Failed).has_value());
}

TEST_CASE("student t interval") {
  // Table values of the two-sided 95% quantile.
  CHECK(t_quantile_95(1) == doctest::Approx(12.706205).epsilon(1e-6));
  CHECK(t_quantile_95(4) == doctest::Approx(2.776445).epsilon(1e-6));
  CHECK(t_quantile_95(30) == doctest::Approx(2.042272).epsilon(1e-6));
  const std::vector<double> same(5, 3.5);
  CHECK(mean_ci(same)->ci == 0.0);
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0};
  const auto m = mean_ci(xs);
  CHECK(m->mean == 3.0);
  CHECK(*m->ci == doctest::Approx(2.776445 * std::sqrt(2.5) / std::sqrt(5.0)).epsilon(1e-6));
}

TEST_CASE("time series buckets and conservation") {
  MetricsLedger l(labels());
  l.record(rec(50'000, RecordKind::Received, Endpoint::satellite(0), MessageClass::UeRequest));
  l.record(rec(150'000, RecordKind::Received, Endpoint::satellite(0), MessageClass::UeRequest));
  l.record(rec(200'000, RecordKind::Received, Endpoint::satellite(0), MessageClass::UeRequest));
  l.record(rec(200'000, RecordKind::Dropped, Endpoint::satellite(0), MessageClass::UeRequest));
  l.record(rec(1'000'000, RecordKind::Received, Endpoint::satellite(1), MessageClass::AttachRequest));
  const auto rows = time_series(l, 0);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].received == 2);
  CHECK(rows[1].received == 1);
  CHECK(rows[1].dropped == 1);
  CHECK(rows[1].t_ms == 200.0);
  CHECK(time_series(l, 1).back().received == 1);
  CHECK(time_series(l, 2)[3].received == 0);
}

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("export headers are stable") {
  const std::vector<RunReport> none;
  CHECK(summary_csv(none) == slurp(NTN_GOLDEN_DIR "/summary_header.csv"));
  const std::vector<AggregateRow> no_rows;
  CHECK(aggregate_csv(no_rows) == slurp(NTN_GOLDEN_DIR "/aggregate_header.csv"));
}

TEST_CASE("absent values render as dashes and null") {
  RunReport r;
  r.protocol = "gho";
  r.ue_count = 10;
  r.seed = 1;
  r.wt_success = MeanCi{12.3456, std::nullopt, 1};
  const std::vector<RunReport> rs = {r};
  const auto csv = summary_csv(rs);
  CHECK(csv.ends_with("gho,10,1,100.00,0,0,0.00,12.346,---,---,---\n"));
  const auto json = summary_json(rs);
  CHECK(json.find("\"wt_failed_ms\": null") != std::string::npos);
}

TEST_CASE("exports of a real run re-parse exactly") {
  scenario::ScenarioConfig cfg;
  cfg.ue_count = 3000;
  cfg.queue_capacity = 30;
  std::vector<RunReport> reports;
  for (auto p : {entities::Protocol::Ho, entities::Protocol::Gho}) {
    for (std::uint64_t seed : {10, 20}) {
      cfg.protocol = p;
      cfg.seed = seed;
      reports.push_back(make_report(scenario::build_simulation(cfg)->run().ledger));
    }
  }
  CHECK(parse_summary_json(summary_json(reports)) == reports);
  const auto rows = aggregate(reports);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].protocol == "gho");
  CHECK(rows[1].runs == 2);
  const auto csv = aggregate_csv(rows);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.find("\n3000,2,") != std::string::npos);
}

TEST_CASE("event log replay reproduces the live ledger") {
  scenario::ScenarioConfig cfg;
  cfg.ue_count = 3000;
  cfg.queue_capacity = 30;
  for (auto p : {entities::Protocol::Ho, entities::Protocol::Gho}) {
    cfg.protocol = p;
    auto sim = scenario::build_simulation(cfg);
    std::stringstream log;
    std::optional<EventLogWriter> writer;
    const auto& s = sim->setup();
    writer.emplace(log, LedgerLabels{std::string(entities::to_string(p)), s.seed, static_cast<std::uint32_t>(s.ues.size()),
                                     static_cast<std::uint32_t>(s.satellites.size()), s.t_end, s.bucket});
    sim->add_record_sink([&](const MetricRecord& r) { writer->write(r); });
    const auto live = sim->run();
    const auto replayed = replay_event_log(log);
    CHECK(replayed == live.ledger);
    CHECK(make_report(replayed) == make_report(live.ledger));
  }
}

TEST_CASE("event log lines") {
  const auto r = rec(1'234'567, RecordKind::Dropped, Endpoint::satellite(0), MessageClass::UeRetransmission);
  CHECK(format_record(r) == "1234.567,SAT1,message,ue-retransmission,dropped");
  CHECK(parse_record(format_record(r)) == r);
  const auto u = rec(5, RecordKind::RequestSent, Endpoint::ue(12));
  CHECK(format_record(u) == "0.005,UE12,ue,-,request-sent");
  CHECK(parse_record(format_record(u)) == u);
  CHECK_THROWS(parse_record("1.0,SAT1,message,-,received"));
  CHECK_THROWS(parse_record("1.000,SAT1,ue,-,received"));
  CHECK_THROWS(parse_record("1.000,MOON,message,-,received"));
}

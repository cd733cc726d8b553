#include "ntn/scenario/build.hpp"

#include <algorithm>
#include <cmath>

#include "ntn/rng.hpp"

namespace ntn::scenario {

std::vector<geometry::SatelliteTrack> place_satellites(const ScenarioConfig& cfg) {
  const double bisector0 = -cfg.region_width_km / 2 - cfg.lead_in_km;
  const double sat1_x = bisector0 + cfg.inter_satellite_distance_km / 2;
  std::vector<geometry::SatelliteTrack> tracks;
  for (std::int64_t k = 0; k < cfg.satellite_count; ++k) {
    geometry::SatelliteTrack t;
    t.id = static_cast<geometry::SatelliteId>(k + 1);
    t.initial_position = {sat1_x - static_cast<double>(k) * cfg.inter_satellite_distance_km, 0.0};
    t.velocity = {cfg.satellite_speed_km_s, 0.0};
    t.footprint_radius_km = cfg.footprint_radius_km;
    tracks.push_back(t);
  }
  return tracks;
}

des::SimTime default_t_end(const ScenarioConfig& cfg) {
  const double sweep_km = cfg.region_width_km + cfg.lead_in_km + cfg.footprint_radius_km -
                          cfg.inter_satellite_distance_km / 2;
  const double retry_s = static_cast<double>(cfg.max_retransmissions + 1) *
                         std::max(cfg.ho_timeout_ms, cfg.gho_timeout_ms) / 1000.0;
  const double t = sweep_km / cfg.satellite_speed_km_s + retry_s;
  return des::SimTime::from_us(static_cast<std::int64_t>(std::ceil(t * 10.0)) * 100'000);
}

des::DelayModel delay_model(const ScenarioConfig& c) {
  des::DelayModel m;
  m.inter_satellite = des::SimTime::from_ms(c.inter_satellite_delay_ms);
  m.ground_satellite = des::SimTime::from_ms(c.ground_satellite_delay_ms);
  m.core_satellite = des::SimTime::from_ms(c.core_satellite_delay_ms);
  m.transmission = des::SimTime::from_us(std::llround(c.transmission_delay_us));
  m.physical = des::SimTime::from_ms(c.physical_ms);
  m.logic = des::SimTime::from_ms(c.logic_ms);
  m.encrypt_decrypt = des::SimTime::from_ms(c.encrypt_decrypt_ms);
  m.sign_verify = des::SimTime::from_ms(c.sign_verify_ms);
  m.hash = des::SimTime::from_ms(c.hash_ms);
  m.batch_hash = des::SimTime::from_ms(c.batch_hash_ms);
  m.ground_broadcast = des::SimTime::from_ms(c.ground_broadcast_delay_ms);
  return m;
}

BuiltScenario build_setup(const ScenarioConfig& cfg) {
  validate(cfg);
  BuiltScenario out;
  auto& s = out.setup;
  s.protocol = cfg.protocol;
  s.seed = cfg.seed;
  s.delays = delay_model(cfg);
  s.propagation = cfg.propagation == "distance" ? des::PropagationMode::Distance : des::PropagationMode::Fixed;
  s.altitude_km = cfg.altitude_km;
  s.queue_capacity = static_cast<std::size_t>(cfg.queue_capacity);
  s.processors = static_cast<std::size_t>(cfg.processors);
  s.priority = cfg.priority_order.empty() ? des::PriorityOrder::defaults() : des::PriorityOrder::parse(cfg.priority_order);
  s.packet_bytes = static_cast<std::uint32_t>(cfg.packet_bytes);
  s.ho_timeout = des::SimTime::from_ms(cfg.ho_timeout_ms);
  s.gho_timeout = des::SimTime::from_ms(cfg.gho_timeout_ms);
  s.max_retransmissions = static_cast<std::uint32_t>(cfg.max_retransmissions);
  s.k_ga = static_cast<std::size_t>(cfg.k_ga);
  s.threshold_fraction = cfg.threshold_fraction;
  s.min_group_size = static_cast<std::size_t>(cfg.min_group_size);
  s.notify_lead_km = cfg.notify_lead_km;
  s.freshness_window = des::SimTime::from_ms(cfg.freshness_window_ms);
  s.share_bytes = static_cast<std::size_t>(cfg.share_bytes);
  s.rand_bytes = static_cast<std::size_t>(cfg.rand_bytes);
  s.digest_addressing = cfg.commitment_addressing == "digest";
  s.satellites = place_satellites(cfg);
  s.t_end = cfg.t_end_ms ? des::SimTime::from_ms(*cfg.t_end_ms) : default_t_end(cfg);
  s.bucket = des::SimTime::from_ms(cfg.bucket_ms);

  const auto n = static_cast<std::uint32_t>(cfg.ue_count);
  s.ues = deploy_ues(n, Region{cfg.region_width_km, cfg.region_height_km, cfg.field_shape, {}}, cfg.seed);
  if (cfg.idle_fraction > 0) {
    Rng rng(mix_seed(cfg.seed, label_hash("idle")));
    s.idle.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) s.idle[i] = rng.uniform01() < cfg.idle_fraction;
  }
  out.grouping = assign_groups(s.ues, cfg.square_width_km, static_cast<std::size_t>(cfg.min_group_size), s.idle);
  if (cfg.protocol == entities::Protocol::Gho) {
    for (const auto& g : out.grouping.groups) s.groups.push_back({g.gid, g.members});
  }
  return out;
}

std::unique_ptr<entities::Simulation> build_simulation(const ScenarioConfig& cfg) {
  return std::make_unique<entities::Simulation>(build_setup(cfg).setup);
}

}  // namespace ntn::scenario

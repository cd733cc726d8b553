#include "ntn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ntn::geometry {
namespace {

double dot(double ax, double ay, double bx, double by) { return ax * bx + ay * by; }

void require_rigid(const SatelliteTrack& a, const SatelliteTrack& b) {
  if (a.velocity != b.velocity) {
    throw std::invalid_argument("satellite tracks must share one velocity");
  }
}

// |u - p_serving(t)|^2 - |u - p_other(t)|^2 = c0 + c1 * t for a rigid pair.
struct LinearGap {
  double c0;
  double c1;
};

LinearGap distance_gap(GroundPoint u, const SatelliteTrack& serving, const SatelliteTrack& other) {
  require_rigid(serving, other);
  const double ax = u.x_km - serving.initial_position.x_km;
  const double ay = u.y_km - serving.initial_position.y_km;
  const double bx = u.x_km - other.initial_position.x_km;
  const double by = u.y_km - other.initial_position.y_km;
  const double c0 = dot(ax, ay, ax, ay) - dot(bx, by, bx, by);
  const double dx = other.initial_position.x_km - serving.initial_position.x_km;
  const double dy = other.initial_position.y_km - serving.initial_position.y_km;
  const double c1 = -2.0 * dot(serving.velocity.vx_km_s, serving.velocity.vy_km_s, dx, dy);
  return {c0, c1};
}

}  // namespace

double distance_km(GroundPoint a, GroundPoint b) { return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km); }

GroundPoint position_at(const SatelliteTrack& track, double t_s) {
  return {track.initial_position.x_km + track.velocity.vx_km_s * t_s,
          track.initial_position.y_km + track.velocity.vy_km_s * t_s};
}

bool in_footprint(GroundPoint ue, const SatelliteTrack& track, double t_s) {
  return distance_km(ue, position_at(track, t_s)) <= track.footprint_radius_km;
}

std::optional<SatelliteId> needs_handover(GroundPoint ue, const SatelliteTrack& serving,
                                          std::span<const SatelliteTrack> others, double t_s) {
  const double serving_distance = distance_km(ue, position_at(serving, t_s));
  std::optional<SatelliteId> best;
  double best_distance = serving_distance;
  for (const auto& other : others) {
    if (other.id == serving.id) continue;
    const double d = distance_km(ue, position_at(other, t_s));
    if (d < best_distance) {
      best_distance = d;
      best = other.id;
    }
  }
  return best;
}

double intersect_area(double cell_radius_km, double moved_km) {
  const double r = cell_radius_km;
  const double d = moved_km;
  if (!(r > 0.0)) throw std::domain_error("cell radius must be positive");
  if (!(d >= 0.0) || d > 2.0 * r) throw std::domain_error("moved distance must lie in [0, 2R]");
  const double half_chord_sq = std::max(0.0, r * r - d * d / 4.0);
  const double ratio = std::min(1.0, d / (2.0 * r));
  return 2.0 * r * r * std::acos(ratio) - d * std::sqrt(half_chord_sq);
}

double handoff_area(double cell_radius_km, double moved_km) {
  const double overlap = intersect_area(cell_radius_km, moved_km);
  return std::numbers::pi * cell_radius_km * cell_radius_km - overlap;
}

double expected_handoffs(const HandoffLoadQuery& q) {
  if (!(q.ue_count > 0.0)) throw std::invalid_argument("ue_count must be positive");
  if (!(q.cell_radius_km > 0.0)) throw std::invalid_argument("cell radius must be positive");
  if (!(q.satellite_speed_km_s >= 0.0)) throw std::invalid_argument("satellite speed must be non-negative");
  if (!(q.window_s >= 0.0)) throw std::invalid_argument("window must be non-negative");
  const double moved = q.satellite_speed_km_s * q.window_s;
  if (moved >= 2.0 * q.cell_radius_km) return q.ue_count;
  const double cell_area = std::numbers::pi * q.cell_radius_km * q.cell_radius_km;
  return q.ue_count * handoff_area(q.cell_radius_km, moved) / cell_area;
}

std::optional<double> handover_crossing_time(GroundPoint ue, const SatelliteTrack& serving,
                                             const SatelliteTrack& other) {
  const auto [c0, c1] = distance_gap(ue, serving, other);
  if (c0 > 0.0) return 0.0;
  if (c1 <= 0.0) return std::nullopt;
  return -c0 / c1;
}

std::optional<double> bisector_approach_time(GroundPoint point, const SatelliteTrack& serving,
                                             const SatelliteTrack& other, double lead_km) {
  const auto [c0, c1] = distance_gap(point, serving, other);
  const double separation = distance_km(serving.initial_position, other.initial_position);
  if (separation == 0.0) return std::nullopt;
  // Signed distance to the bisector is gap / (2 * separation); negative on the serving side.
  const double target_gap = -lead_km * 2.0 * separation;
  if (c0 >= target_gap) return 0.0;
  if (c1 <= 0.0) return std::nullopt;
  return (target_gap - c0) / c1;
}

std::optional<CoverageWindow> footprint_window(GroundPoint ue, const SatelliteTrack& track) {
  const double rx = ue.x_km - track.initial_position.x_km;
  const double ry = ue.y_km - track.initial_position.y_km;
  const double vx = track.velocity.vx_km_s;
  const double vy = track.velocity.vy_km_s;
  const double r2 = track.footprint_radius_km * track.footprint_radius_km;
  const double a = vx * vx + vy * vy;
  const double c = rx * rx + ry * ry - r2;
  if (a == 0.0) {
    if (c > 0.0) return std::nullopt;
    constexpr double inf = std::numeric_limits<double>::infinity();
    return CoverageWindow{-inf, inf};
  }
  // |r - v t|^2 = R^2  ->  a t^2 - 2 (v.r) t + c = 0
  const double b = dot(vx, vy, rx, ry);
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  return CoverageWindow{(b - root) / a, (b + root) / a};
}

}  // namespace ntn::geometry

#pragma once

// Planar satellite/UE geometry and the closed-form handover-load formulas.
//
// Everything lives on a flat 2-D ground plane in kilometres; satellites are
// represented by their sub-satellite point moving linearly. Time arguments are
// in seconds.

#include <cstdint>
#include <optional>
#include <span>

namespace ntn::geometry {

using SatelliteId = std::uint32_t;

struct GroundPoint {
  double x_km = 0.0;
  double y_km = 0.0;

  friend bool operator==(const GroundPoint&, const GroundPoint&) = default;
};

struct Velocity {
  double vx_km_s = 0.0;
  double vy_km_s = 0.0;

  friend bool operator==(const Velocity&, const Velocity&) = default;
};

struct SatelliteTrack {
  SatelliteId id = 0;
  GroundPoint initial_position;
  Velocity velocity;
  double footprint_radius_km = 0.0;
};

struct HandoffLoadQuery {
  double ue_count = 0.0;
  double cell_radius_km = 0.0;
  double satellite_speed_km_s = 0.0;
  double window_s = 0.0;
};

/// Time interval (seconds) during which a fixed ground point is covered.
struct CoverageWindow {
  double enter_s;
  double exit_s;
};

double distance_km(GroundPoint a, GroundPoint b);

GroundPoint position_at(const SatelliteTrack& track, double t_s);

/// Boundary inclusive.
bool in_footprint(GroundPoint ue, const SatelliteTrack& track, double t_s);

/// Nearest non-serving satellite that is strictly closer than the serving one.
/// Ties between candidates go to the earlier entry in `others`; a tie with the
/// serving satellite keeps the UE where it is.
std::optional<SatelliteId> needs_handover(GroundPoint ue, const SatelliteTrack& serving,
                                          std::span<const SatelliteTrack> others, double t_s);

/// Overlap area of two circles of radius `cell_radius` whose centres are
/// `moved` apart. Throws std::domain_error outside 0 <= moved <= 2R.
double intersect_area(double cell_radius_km, double moved_km);

/// pi R^2 minus the overlap: the area that leaves the cell after moving.
double handoff_area(double cell_radius_km, double moved_km);

/// N * A_handoff / A_circle with d = V * dT; all N when d exceeds 2R.
/// Throws std::invalid_argument for non-positive N or R, or negative V or dT.
double expected_handoffs(const HandoffLoadQuery& q);

// Analytic timing helpers. They require the two tracks to share one velocity
// (rigid constellation) and throw std::invalid_argument otherwise.

/// Instant t* after which `other` is strictly closer to `ue` than `serving`.
/// Returns 0 when that already holds at t = 0 and nullopt when it never will.
std::optional<double> handover_crossing_time(GroundPoint ue, const SatelliteTrack& serving,
                                             const SatelliteTrack& other);

/// First t >= 0 at which `point` lies within `lead_km` (signed, on the serving
/// side) of the perpendicular bisector between the two satellites.
std::optional<double> bisector_approach_time(GroundPoint point, const SatelliteTrack& serving,
                                             const SatelliteTrack& other, double lead_km);

/// Coverage window of a fixed point, or nullopt if it is never covered.
/// A stationary satellite covering the point yields an unbounded window.
std::optional<CoverageWindow> footprint_window(GroundPoint ue, const SatelliteTrack& track);

}  // namespace ntn::geometry

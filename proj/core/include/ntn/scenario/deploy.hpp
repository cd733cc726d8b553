#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ntn/geometry.hpp"
#include "ntn/protocol/shares.hpp"
#include "ntn/scenario/config.hpp"

namespace ntn::scenario {

struct Region {
  double width_km = 36.0;
  double height_km = 36.0;
  FieldShape shape = FieldShape::Disc;
  geometry::GroundPoint center;
};

/// n i.i.d. uniform points in the region (the inscribed ellipse for a disc
/// field), reproducible per seed.
std::vector<geometry::GroundPoint> deploy_ues(std::uint32_t n, const Region& region, std::uint64_t seed);

struct GroupAssignment {
  protocol::GroupId gid;
  std::int64_t square_x = 0;
  std::int64_t square_y = 0;
  /// Ascending UE ids.
  std::vector<std::uint32_t> members;
};

struct Grouping {
  /// Ordered by (square_x, square_y).
  std::vector<GroupAssignment> groups;
  /// UEs in squares below min_group_size, plus excluded UEs. Ascending.
  std::vector<std::uint32_t> ungrouped;
};

/// Square index of a point: (floor(x / w), floor(y / w)).
std::pair<std::int64_t, std::int64_t> square_of(geometry::GroundPoint p, double square_width_km);

/// Fixed square groups. `excluded` (may be empty) marks UEs that are never
/// grouped, e.g. idle ones. Throws std::invalid_argument for a non-positive width.
Grouping assign_groups(std::span<const geometry::GroundPoint> ues, double square_width_km,
                       std::size_t min_group_size, const std::vector<bool>& excluded = {});

}  // namespace ntn::scenario

#include "ntn/scenario/deploy.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ntn/rng.hpp"

namespace ntn::scenario {

std::vector<geometry::GroundPoint> deploy_ues(std::uint32_t n, const Region& region, std::uint64_t seed) {
  if (!(region.width_km > 0 && region.height_km > 0)) throw std::invalid_argument("region must have positive size");
  Rng rng(mix_seed(seed, label_hash("deploy")));
  const double hw = region.width_km / 2;
  const double hh = region.height_km / 2;
  std::vector<geometry::GroundPoint> out;
  out.reserve(n);
  while (out.size() < n) {
    const double x = rng.uniform(-hw, hw);
    const double y = rng.uniform(-hh, hh);
    if (region.shape == FieldShape::Disc && (x / hw) * (x / hw) + (y / hh) * (y / hh) > 1.0) continue;
    out.push_back({region.center.x_km + x, region.center.y_km + y});
  }
  return out;
}

std::pair<std::int64_t, std::int64_t> square_of(geometry::GroundPoint p, double w) {
  return {static_cast<std::int64_t>(std::floor(p.x_km / w)), static_cast<std::int64_t>(std::floor(p.y_km / w))};
}

Grouping assign_groups(std::span<const geometry::GroundPoint> ues, double square_width_km,
                       std::size_t min_group_size, const std::vector<bool>& excluded) {
  if (!(square_width_km > 0)) throw std::invalid_argument("square width must be positive");
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::uint32_t>> squares;
  Grouping out;
  for (std::uint32_t i = 0; i < ues.size(); ++i) {
    if (!excluded.empty() && excluded.at(i)) {
      out.ungrouped.push_back(i);
      continue;
    }
    squares[square_of(ues[i], square_width_km)].push_back(i);
  }
  for (auto& [sq, members] : squares) {
    if (members.size() < min_group_size) {
      out.ungrouped.insert(out.ungrouped.end(), members.begin(), members.end());
      continue;
    }
    out.groups.push_back({protocol::GroupId{fmt::format("G{}:{}", sq.first, sq.second)}, sq.first, sq.second,
                          std::move(members)});
  }
  std::sort(out.ungrouped.begin(), out.ungrouped.end());
  return out;
}

}  // namespace ntn::scenario

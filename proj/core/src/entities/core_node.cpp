#include "ntn/entities/simulation.hpp"
#include "payloads.hpp"

namespace ntn::entities {

// The AMF acknowledges every path-switch notice with one response to the
// source: per UE under HO, per group under GHO.
Simulation::Outcome Simulation::core_handle(const des::Message& m) {
  if (m.cls != des::MessageClass::CoreNotify) return {};
  return {{make(des::MessageClass::CoreResponse, des::Endpoint::core(), m.sender, {}, detail::CoreNotice{})}, {}};
}

}  // namespace ntn::entities

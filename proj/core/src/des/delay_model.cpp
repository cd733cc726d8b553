#include "ntn/des/delay_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ntn::des {
namespace {

constexpr double kSpeedOfLightKmPerUs = 299'792.458 / 1'000'000.0;

bool is_pair(EndpointKind a, EndpointKind b, EndpointKind x, EndpointKind y) {
  return (a == x && b == y) || (a == y && b == x);
}

}  // namespace

SimTime link_delay(const DelayModel& model, EndpointKind sender, EndpointKind receiver) {
  using K = EndpointKind;
  if (is_pair(sender, receiver, K::Ue, K::Satellite)) return model.ground_satellite + model.transmission;
  if (is_pair(sender, receiver, K::Satellite, K::Satellite)) return model.inter_satellite + model.transmission;
  if (is_pair(sender, receiver, K::Satellite, K::Core)) return model.core_satellite + model.transmission;
  if (sender == K::Satellite && receiver == K::Group) return model.ground_satellite + model.transmission;
  if (sender == K::Ue && (receiver == K::Ue || receiver == K::Group)) {
    return model.ground_broadcast + model.transmission;
  }
  throw std::invalid_argument("no link between endpoint kinds " +
                              std::to_string(static_cast<int>(sender)) + " and " +
                              std::to_string(static_cast<int>(receiver)));
}

SimTime distance_link_delay(const DelayModel& model, double distance_km) {
  if (!(distance_km >= 0.0)) throw std::invalid_argument("distance must be non-negative");
  return SimTime::from_us(std::llround(distance_km / kSpeedOfLightKmPerUs)) + model.transmission;
}

SimTime crypto_cost(const DelayModel& model, CryptoOp op) {
  switch (op) {
    case CryptoOp::Encrypt:
    case CryptoOp::Decrypt: return model.encrypt_decrypt;
    case CryptoOp::Sign:
    case CryptoOp::Verify: return model.sign_verify;
    case CryptoOp::Hash: return model.hash;
    case CryptoOp::BatchHash: return model.batch_hash;
  }
  return SimTime::zero();
}

SimTime work_time(const DelayModel& model, std::span<const CryptoOp> ops) {
  SimTime total;
  for (auto op : ops) total += crypto_cost(model, op);
  return total;
}

SimTime service_time(const DelayModel& model, const Message& msg) {
  return model.physical + model.logic + work_time(model, msg.crypto_ops);
}

}  // namespace ntn::des

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ntn/entities/types.hpp"

namespace ntn::scenario {

enum class FieldShape : std::uint8_t { Disc, Rectangle };

/// Every experiment parameter. A default-constructed config reproduces the
/// reference settings; units are part of each key name.
struct ScenarioConfig {
  // [scenario]
  entities::Protocol protocol = entities::Protocol::Ho;
  std::int64_t ue_count = 10'000;
  std::uint64_t seed = 10;
  /// Unset: derived from geometry so the source sweep completes.
  std::optional<double> t_end_ms;

  // [geometry]
  double footprint_radius_km = 25.0;
  double inter_satellite_distance_km = 30.0;
  double satellite_speed_km_s = 7.56;
  std::int64_t satellite_count = 3;
  double lead_in_km = 40.0;
  double region_width_km = 36.0;
  double region_height_km = 36.0;
  FieldShape field_shape = FieldShape::Disc;
  std::string propagation = "fixed";
  double altitude_km = 900.0;

  // [groups]
  double square_width_km = 1.0;
  std::int64_t min_group_size = 2;
  double notify_lead_km = 5.0;
  std::int64_t k_ga = 2;
  double threshold_fraction = 0.5;
  double idle_fraction = 0.0;

  // [protocol]
  double ho_timeout_ms = 30.0;
  double gho_timeout_ms = 35.0;
  std::int64_t max_retransmissions = 15;
  double freshness_window_ms = 5000.0;
  std::int64_t share_bytes = 16;
  std::int64_t rand_bytes = 16;
  std::string commitment_addressing = "index";

  // [queue]
  std::int64_t queue_capacity = 500;
  std::int64_t processors = 4;
  std::int64_t packet_bytes = 3000;
  /// Empty: the built-in order.
  std::string priority_order;

  // [delays]
  double inter_satellite_delay_ms = 1.0;
  double ground_satellite_delay_ms = 3.0;
  double core_satellite_delay_ms = 10.0;
  double transmission_delay_us = 1.0;
  double physical_ms = 0.05;
  double logic_ms = 0.05;
  double encrypt_decrypt_ms = 0.1;
  double sign_verify_ms = 0.3;
  double hash_ms = 0.05;
  double batch_hash_ms = 0.1;
  double ground_broadcast_delay_ms = 1.0;

  // [metrics]
  double bucket_ms = 200.0;
};

/// Parse or validation failure. what() joins all messages, one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Known keys, in document order.
std::vector<std::string_view> config_keys();

/// Applies a `key = value` document with optional [section] headers and `#`
/// comments. Strings are double-quoted. Unknown keys, keys under the wrong
/// section and malformed values are errors reported with their line number.
void apply_document(ScenarioConfig& cfg, std::string_view text);

/// Sets one key from an unquoted string (environment or command line).
void set_value(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Applies NTNSIM_<KEY> variables for every known key. `lookup` defaults to
/// std::getenv.
void apply_env(ScenarioConfig& cfg, const std::function<const char*(const char*)>& lookup = {});

std::string env_name(std::string_view key);

std::vector<std::string> validation_errors(const ScenarioConfig& cfg);
void validate(const ScenarioConfig& cfg);

/// Defaults overlaid with `text`, then validated.
ScenarioConfig load_config(std::string_view text);
ScenarioConfig load_config_file(const std::string& path);

/// Effective configuration as a document that apply_document accepts.
std::string to_document(const ScenarioConfig& cfg);

}  // namespace ntn::scenario

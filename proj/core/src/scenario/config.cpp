#include "ntn/scenario/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ntn/des/node_queue.hpp"

namespace ntn::scenario {
namespace {

enum class Origin { File, Raw };

struct Value {
  std::string text;
  bool quoted = false;
  Origin origin = Origin::Raw;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double as_double(const Value& v) {
  if (v.quoted) throw std::invalid_argument("expected a number, got a string");
  double out = 0.0;
  const auto* first = v.text.data();
  const auto* last = first + v.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
    throw std::invalid_argument("expected a number, got '" + v.text + "'");
  }
  return out;
}

std::int64_t as_int(const Value& v) {
  if (v.quoted) throw std::invalid_argument("expected an integer, got a string");
  std::string digits;
  for (char c : v.text) {
    if (c != '_') digits.push_back(c);
  }
  std::int64_t out = 0;
  const auto* first = digits.data();
  const auto* last = first + digits.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw std::invalid_argument("expected an integer, got '" + v.text + "'");
  return out;
}

std::string as_string(const Value& v) {
  if (v.origin == Origin::File && !v.quoted) throw std::invalid_argument("strings must be double-quoted");
  return v.text;
}

std::string choice(const Value& v, std::initializer_list<std::string_view> allowed) {
  auto s = as_string(v);
  if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
    std::string list;
    for (auto a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
    throw std::invalid_argument("expected one of " + list + ", got '" + s + "'");
  }
  return s;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

struct KeyDef {
  std::string_view name;
  std::string_view section;
  std::function<void(ScenarioConfig&, const Value&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename T>
KeyDef number_key(std::string_view name, std::string_view section, T ScenarioConfig::*field) {
  return {name, section,
          [field](ScenarioConfig& c, const Value& v) {
            if constexpr (std::is_same_v<T, double>) {
              c.*field = as_double(v);
            } else {
              c.*field = as_int(v);
            }
          },
          [field](const ScenarioConfig& c) { return fmt::format("{}", c.*field); }};
}

KeyDef string_key(std::string_view name, std::string_view section, std::string ScenarioConfig::*field,
                  std::initializer_list<std::string_view> allowed = {}) {
  std::vector<std::string_view> options(allowed);
  return {name, section,
          [field, options](ScenarioConfig& c, const Value& v) {
            auto s = as_string(v);
            if (!options.empty() && std::find(options.begin(), options.end(), s) == options.end()) {
              std::string list;
              for (auto a : options) list += (list.empty() ? "" : "|") + std::string(a);
              throw std::invalid_argument("expected one of " + list + ", got '" + s + "'");
            }
            c.*field = std::move(s);
          },
          [field](const ScenarioConfig& c) { return quote(c.*field); }};
}

const std::vector<KeyDef>& keys() {
  static const std::vector<KeyDef> table = [] {
    std::vector<KeyDef> k;
    k.push_back({"protocol", "scenario",
                 [](ScenarioConfig& c, const Value& v) {
                   c.protocol = *entities::parse_protocol(choice(v, {"ho", "gho"}));
                 },
                 [](const ScenarioConfig& c) { return quote(entities::to_string(c.protocol)); }});
    k.push_back(number_key("ue_count", "scenario", &ScenarioConfig::ue_count));
    k.push_back({"seed", "scenario",
                 [](ScenarioConfig& c, const Value& v) {
                   const auto s = as_int(v);
                   if (s < 0) throw std::invalid_argument("seed must be non-negative");
                   c.seed = static_cast<std::uint64_t>(s);
                 },
                 [](const ScenarioConfig& c) { return fmt::format("{}", c.seed); }});
    k.push_back({"t_end_ms", "scenario",
                 [](ScenarioConfig& c, const Value& v) {
                   if (v.text == "auto") {
                     c.t_end_ms.reset();
                   } else {
                     c.t_end_ms = as_double(v);
                   }
                 },
                 [](const ScenarioConfig& c) {
                   return c.t_end_ms ? fmt::format("{}", *c.t_end_ms) : std::string("\"auto\"");
                 }});

    k.push_back(number_key("footprint_radius_km", "geometry", &ScenarioConfig::footprint_radius_km));
    k.push_back(number_key("inter_satellite_distance_km", "geometry", &ScenarioConfig::inter_satellite_distance_km));
    k.push_back(number_key("satellite_speed_km_s", "geometry", &ScenarioConfig::satellite_speed_km_s));
    k.push_back(number_key("satellite_count", "geometry", &ScenarioConfig::satellite_count));
    k.push_back(number_key("lead_in_km", "geometry", &ScenarioConfig::lead_in_km));
    k.push_back(number_key("region_width_km", "geometry", &ScenarioConfig::region_width_km));
    k.push_back(number_key("region_height_km", "geometry", &ScenarioConfig::region_height_km));
    k.push_back({"field_shape", "geometry",
                 [](ScenarioConfig& c, const Value& v) {
                   c.field_shape = choice(v, {"disc", "rectangle"}) == "disc" ? FieldShape::Disc
                                                                             : FieldShape::Rectangle;
                 },
                 [](const ScenarioConfig& c) {
                   return quote(c.field_shape == FieldShape::Disc ? "disc" : "rectangle");
                 }});
    k.push_back(string_key("propagation", "geometry", &ScenarioConfig::propagation, {"fixed", "distance"}));
    k.push_back(number_key("altitude_km", "geometry", &ScenarioConfig::altitude_km));

    k.push_back(number_key("square_width_km", "groups", &ScenarioConfig::square_width_km));
    k.push_back(number_key("min_group_size", "groups", &ScenarioConfig::min_group_size));
    k.push_back(number_key("notify_lead_km", "groups", &ScenarioConfig::notify_lead_km));
    k.push_back(number_key("k_ga", "groups", &ScenarioConfig::k_ga));
    k.push_back(number_key("threshold_fraction", "groups", &ScenarioConfig::threshold_fraction));
    k.push_back(number_key("idle_fraction", "groups", &ScenarioConfig::idle_fraction));

    k.push_back(number_key("ho_timeout_ms", "protocol", &ScenarioConfig::ho_timeout_ms));
    k.push_back(number_key("gho_timeout_ms", "protocol", &ScenarioConfig::gho_timeout_ms));
    k.push_back(number_key("max_retransmissions", "protocol", &ScenarioConfig::max_retransmissions));
    k.push_back(number_key("freshness_window_ms", "protocol", &ScenarioConfig::freshness_window_ms));
    k.push_back(number_key("share_bytes", "protocol", &ScenarioConfig::share_bytes));
    k.push_back(number_key("rand_bytes", "protocol", &ScenarioConfig::rand_bytes));
    k.push_back(string_key("commitment_addressing", "protocol", &ScenarioConfig::commitment_addressing,
                           {"index", "digest"}));

    k.push_back(number_key("queue_capacity", "queue", &ScenarioConfig::queue_capacity));
    k.push_back(number_key("processors", "queue", &ScenarioConfig::processors));
    k.push_back(number_key("packet_bytes", "queue", &ScenarioConfig::packet_bytes));
    k.push_back(string_key("priority_order", "queue", &ScenarioConfig::priority_order));

    k.push_back(number_key("inter_satellite_delay_ms", "delays", &ScenarioConfig::inter_satellite_delay_ms));
    k.push_back(number_key("ground_satellite_delay_ms", "delays", &ScenarioConfig::ground_satellite_delay_ms));
    k.push_back(number_key("core_satellite_delay_ms", "delays", &ScenarioConfig::core_satellite_delay_ms));
    k.push_back(number_key("transmission_delay_us", "delays", &ScenarioConfig::transmission_delay_us));
    k.push_back(number_key("physical_ms", "delays", &ScenarioConfig::physical_ms));
    k.push_back(number_key("logic_ms", "delays", &ScenarioConfig::logic_ms));
    k.push_back(number_key("encrypt_decrypt_ms", "delays", &ScenarioConfig::encrypt_decrypt_ms));
    k.push_back(number_key("sign_verify_ms", "delays", &ScenarioConfig::sign_verify_ms));
    k.push_back(number_key("hash_ms", "delays", &ScenarioConfig::hash_ms));
    k.push_back(number_key("batch_hash_ms", "delays", &ScenarioConfig::batch_hash_ms));
    k.push_back(number_key("ground_broadcast_delay_ms", "delays", &ScenarioConfig::ground_broadcast_delay_ms));

    k.push_back(number_key("bucket_ms", "metrics", &ScenarioConfig::bucket_ms));
    return k;
  }();
  return table;
}

const KeyDef* find_key(std::string_view name) {
  for (const auto& k : keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

bool known_section(std::string_view s) {
  return std::any_of(keys().begin(), keys().end(), [s](const KeyDef& k) { return k.section == s; });
}

// Parses the right-hand side of `key = value`, stripping a trailing comment.
Value parse_rhs(std::string_view rhs) {
  rhs = trim(rhs);
  Value v;
  v.origin = Origin::File;
  if (!rhs.empty() && rhs.front() == '"') {
    v.quoted = true;
    std::size_t i = 1;
    bool closed = false;
    for (; i < rhs.size(); ++i) {
      const char c = rhs[i];
      if (c == '\\' && i + 1 < rhs.size()) {
        v.text.push_back(rhs[++i]);
      } else if (c == '"') {
        closed = true;
        ++i;
        break;
      } else {
        v.text.push_back(c);
      }
    }
    if (!closed) throw std::invalid_argument("unterminated string");
    const auto rest = trim(rhs.substr(i));
    if (!rest.empty() && rest.front() != '#') throw std::invalid_argument("unexpected text after string");
    return v;
  }
  if (const auto hash = rhs.find('#'); hash != std::string_view::npos) rhs = trim(rhs.substr(0, hash));
  if (rhs.empty()) throw std::invalid_argument("missing value");
  v.text = std::string(rhs);
  return v;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error([&] {
        std::string msg;
        for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

std::vector<std::string_view> config_keys() {
  std::vector<std::string_view> out;
  for (const auto& k : keys()) out.push_back(k.name);
  return out;
}

void apply_document(ScenarioConfig& cfg, std::string_view text) {
  std::vector<std::string> errors;
  std::vector<std::string_view> seen;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto where = fmt::format("line {}: ", line_no);

    if (line.front() == '[') {
      const auto close = line.find(']');
      const auto rest = close == std::string_view::npos ? std::string_view{} : trim(line.substr(close + 1));
      if (close == std::string_view::npos || (!rest.empty() && rest.front() != '#')) {
        errors.push_back(where + "malformed section header");
        continue;
      }
      section = std::string(trim(line.substr(1, close - 1)));
      if (!known_section(section)) errors.push_back(where + "unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(where + "expected key = value");
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    const auto* def = find_key(key);
    if (def == nullptr) {
      errors.push_back(where + "unknown key '" + std::string(key) + "'");
      continue;
    }
    if (!section.empty() && def->section != section) {
      errors.push_back(where + "key '" + std::string(key) + "' belongs in [" + std::string(def->section) + "]");
      continue;
    }
    if (std::find(seen.begin(), seen.end(), def->name) != seen.end()) {
      errors.push_back(where + "duplicate key '" + std::string(key) + "'");
      continue;
    }
    seen.push_back(def->name);
    try {
      def->set(cfg, parse_rhs(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      errors.push_back(where + std::string(key) + ": " + e.what());
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

void set_value(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  const auto* def = find_key(key);
  if (def == nullptr) throw ConfigError({"unknown key '" + std::string(key) + "'"});
  try {
    def->set(cfg, Value{std::string(trim(value)), false, Origin::Raw});
  } catch (const std::invalid_argument& e) {
    throw ConfigError({std::string(key) + ": " + e.what()});
  }
}

std::string env_name(std::string_view key) {
  std::string out = "NTNSIM_";
  for (char c : key) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

void apply_env(ScenarioConfig& cfg, const std::function<const char*(const char*)>& lookup) {
  std::vector<std::string> errors;
  for (const auto& k : keys()) {
    const auto name = env_name(k.name);
    const char* raw = lookup ? lookup(name.c_str()) : std::getenv(name.c_str());
    if (raw == nullptr) continue;
    try {
      set_value(cfg, k.name, raw);
    } catch (const ConfigError& e) {
      errors.push_back(name + ": " + e.what());
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::vector<std::string> validation_errors(const ScenarioConfig& c) {
  std::vector<std::string> errs;
  const auto require = [&](bool ok, std::string_view msg) {
    if (!ok) errs.emplace_back(msg);
  };
  require(c.ue_count >= 1, "ue_count must be at least 1");
  require(c.footprint_radius_km > 0, "footprint_radius_km must be positive");
  require(c.inter_satellite_distance_km > 0, "inter_satellite_distance_km must be positive");
  require(c.inter_satellite_distance_km < 2 * c.footprint_radius_km,
          "inter_satellite_distance_km must be below twice the footprint radius");
  require(c.satellite_speed_km_s > 0, "satellite_speed_km_s must be positive");
  require(c.satellite_count >= 2, "satellite_count must be at least 2");
  require(c.lead_in_km >= 0, "lead_in_km must be non-negative");
  require(c.region_width_km > 0 && c.region_height_km > 0, "region dimensions must be positive");
  require(c.altitude_km >= 0, "altitude_km must be non-negative");
  require(c.square_width_km > 0, "square_width_km must be positive");
  require(c.min_group_size >= 1, "min_group_size must be at least 1");
  require(c.notify_lead_km >= 0, "notify_lead_km must be non-negative");
  require(c.k_ga >= 1, "k_ga must be at least 1");
  require(c.threshold_fraction > 0 && c.threshold_fraction < 1, "threshold_fraction must lie in (0, 1)");
  require(c.idle_fraction >= 0 && c.idle_fraction < 1, "idle_fraction must lie in [0, 1)");
  require(c.ho_timeout_ms > 0 && c.gho_timeout_ms > 0, "timeouts must be positive");
  require(c.max_retransmissions >= 0, "max_retransmissions must be non-negative");
  require(c.freshness_window_ms >= 0, "freshness_window_ms must be non-negative");
  require(c.share_bytes >= 1 && c.rand_bytes >= 1, "share_bytes and rand_bytes must be positive");
  require(c.queue_capacity >= 0, "queue_capacity must be non-negative");
  require(c.processors >= 1, "processors must be at least 1");
  require(c.packet_bytes >= 1, "packet_bytes must be positive");
  for (double d : {c.inter_satellite_delay_ms, c.ground_satellite_delay_ms, c.core_satellite_delay_ms,
                   c.transmission_delay_us, c.physical_ms, c.logic_ms, c.encrypt_decrypt_ms, c.sign_verify_ms,
                   c.hash_ms, c.batch_hash_ms, c.ground_broadcast_delay_ms}) {
    if (d < 0) {
      errs.emplace_back("delays must be non-negative");
      break;
    }
  }
  require(c.bucket_ms > 0, "bucket_ms must be positive");
  require(!c.t_end_ms || *c.t_end_ms >= 0, "t_end_ms must be non-negative");
  if (!c.priority_order.empty()) {
    try {
      (void)des::PriorityOrder::parse(c.priority_order);
    } catch (const std::invalid_argument& e) {
      errs.emplace_back(std::string("priority_order: ") + e.what());
    }
  }
  // A UE sits on the satellites' bisector when it triggers; it must then be
  // inside both footprints.
  if (c.footprint_radius_km > 0 && c.inter_satellite_distance_km < 2 * c.footprint_radius_km) {
    const double half_d = c.inter_satellite_distance_km / 2;
    const double max_half_height = std::sqrt(c.footprint_radius_km * c.footprint_radius_km - half_d * half_d);
    if (c.region_height_km / 2 > max_half_height + 1e-9) {
      errs.push_back(fmt::format("region outside footprint: region_height_km must be at most {:.3f}",
                                 2 * max_half_height));
    }
  }
  return errs;
}

void validate(const ScenarioConfig& cfg) {
  auto errs = validation_errors(cfg);
  if (!errs.empty()) throw ConfigError(std::move(errs));
}

ScenarioConfig load_config(std::string_view text) {
  ScenarioConfig cfg;
  apply_document(cfg, text);
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::stringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

std::string to_document(const ScenarioConfig& cfg) {
  std::string out;
  std::string_view section;
  for (const auto& k : keys()) {
    if (k.section != section) {
      section = k.section;
      out += fmt::format("{}[{}]\n", out.empty() ? "" : "\n", section);
    }
    out += fmt::format("{} = {}\n", k.name, k.get(cfg));
  }
  return out;
}

}  // namespace ntn::scenario

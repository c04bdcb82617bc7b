#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dephase/hopfield.hpp"
#include "dephase/rabi.hpp"

namespace dephase {

inline constexpr int kConfigSchemaVersion = 1;

enum class Model { Rabi, Hopfield, Oscillator };
std::string to_string(Model m);

struct ChannelSpec {
  Target target;
  double gamma0;
};

struct RunConfig {
  std::string name;
  Model model = Model::Rabi;
  std::vector<double> grid;       // eta or lambda, sorted, unique
  std::vector<double> detunings;  // omega_q - omega_c or omega_x - omega_c
  std::vector<ChannelSpec> channels;
  std::vector<GaugeMode> modes;
  std::optional<Gauge> gauge;     // correct-mode evaluation gauge (Rabi)
  std::vector<std::pair<std::string, std::string>> transitions;
  std::vector<std::string> quantities;  // hopfield: "rates", "frequencies"
  RateLaw rate_law = RateLaw::Squared;
  int cutoff = 0;
  std::uint64_t seed = 1;
  double omega0 = 1.0;  // oscillator
  std::string canonical;  // normalized JSON used for hashing
};

// Parses and validates; ConfigError names the field and the reason.
RunConfig parse_config(const std::string& json_text, const std::string& fallback_name = "config");
RunConfig load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& s);
std::string config_hash(const RunConfig& c);

// Expands {"from", "to", "n", "spacing"} entries and plain numbers.
std::vector<double> expand_grid(const std::string& json_text);

}  // namespace dephase

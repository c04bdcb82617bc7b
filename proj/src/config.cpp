#include "dephase/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dephase/errors.hpp"

namespace dephase {

using json = nlohmann::json;

std::string to_string(Model m) {
  switch (m) {
    case Model::Rabi: return "rabi";
    case Model::Hopfield: return "hopfield";
    case Model::Oscillator: return "oscillator";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& reason) {
  throw ConfigError("config field '" + field + "': " + reason);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

std::vector<double> grid_values(const json& g0, const std::string& field) {
  const json g = g0.is_object() ? json::array({g0}) : g0;
  if (!g.is_array()) fail(field, "expected an array of numbers or range objects");
  std::vector<double> out;
  for (size_t i = 0; i < g.size(); ++i) {
    const auto& e = g[i];
    std::string f = field + "[" + std::to_string(i) + "]";
    if (e.is_number()) {
      out.push_back(number(e, f));
      continue;
    }
    if (!e.is_object()) fail(f, "expected a number or a range object");
    for (auto it = e.begin(); it != e.end(); ++it)
      if (it.key() != "from" && it.key() != "to" && it.key() != "n" && it.key() != "spacing")
        fail(f + "." + it.key(), "unknown key");
    if (!e.contains("from") || !e.contains("to") || !e.contains("n")) fail(f, "range needs from, to, n");
    double a = number(e["from"], f + ".from"), b = number(e["to"], f + ".to");
    if (!e["n"].is_number_integer() || e["n"].get<long>() < 1) fail(f + ".n", "expected a positive integer");
    long n = e["n"].get<long>();
    std::string sp = e.value("spacing", "linear");
    if (sp != "linear" && sp != "log") fail(f + ".spacing", "expected 'linear' or 'log'");
    if (sp == "log" && (a <= 0 || b <= 0)) fail(f, "log spacing needs positive endpoints");
    for (long k = 0; k < n; ++k) {
      double t = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
      double v = sp == "linear" ? a + (b - a) * t : std::exp(std::log(a) + (std::log(b) - std::log(a)) * t);
      if (k == n - 1) v = b;
      out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<double> expand_grid(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("grid is not valid JSON: ") + e.what());
  }
  return grid_values(j, "grid");
}

RunConfig parse_config(const std::string& text, const std::string& fallback_name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("<root>", "expected an object");

  static const std::set<std::string> known{"schema_version", "name",   "description", "model",     "grid",
                                           "detunings",      "channels", "modes",     "gauge",     "transitions",
                                           "quantities",     "rate_law", "cutoff",    "seed",      "omega0"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) fail(it.key(), "unknown field");

  RunConfig c;
  if (!j.contains("schema_version")) fail("schema_version", "missing");
  if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kConfigSchemaVersion)
    fail("schema_version", "expected " + std::to_string(kConfigSchemaVersion));

  c.name = fallback_name;
  if (j.contains("name")) {
    if (!j["name"].is_string() || j["name"].get<std::string>().empty()) fail("name", "expected a non-empty string");
    c.name = j["name"].get<std::string>();
    for (char ch : c.name)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-')) fail("name", "use [A-Za-z0-9_-]");
  }

  if (!j.contains("model") || !j["model"].is_string()) fail("model", "expected 'rabi', 'hopfield' or 'oscillator'");
  std::string m = j["model"];
  if (m == "rabi") c.model = Model::Rabi;
  else if (m == "hopfield") c.model = Model::Hopfield;
  else if (m == "oscillator") c.model = Model::Oscillator;
  else fail("model", "expected 'rabi', 'hopfield' or 'oscillator'");

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }

  if (!j.contains("channels") || !j["channels"].is_array() || j["channels"].empty())
    fail("channels", "expected a non-empty array");
  for (size_t i = 0; i < j["channels"].size(); ++i) {
    const auto& ch = j["channels"][i];
    std::string f = "channels[" + std::to_string(i) + "]";
    if (!ch.is_object() || !ch.contains("target") || !ch["target"].is_string()) fail(f + ".target", "missing");
    ChannelSpec s{};
    try {
      s.target = parse_target(ch["target"]);
    } catch (const InvalidArgument& e) {
      fail(f + ".target", e.what());
    }
    s.gamma0 = ch.contains("gamma0") ? number(ch["gamma0"], f + ".gamma0") : 1.0;
    if (s.gamma0 < 0) fail(f + ".gamma0", "must be >= 0");
    c.channels.push_back(s);
  }

  if (c.model == Model::Oscillator) {
    if (j.contains("omega0")) c.omega0 = number(j["omega0"], "omega0");
    if (!(c.omega0 > 0)) fail("omega0", "must be > 0");
    if (c.channels.size() != 1 || c.channels[0].gamma0 <= 0) fail("channels", "oscillator takes one channel, gamma0 > 0");
  } else {
    if (!j.contains("grid")) fail("grid", "missing");
    c.grid = grid_values(j["grid"], "grid");
    if (c.grid.empty()) fail("grid", "grid is empty");
    for (double g : c.grid)
      if (g < 0) fail("grid", "couplings must be >= 0");

    if (!j.contains("detunings") || !j["detunings"].is_array() || j["detunings"].empty())
      fail("detunings", "expected a non-empty array");
    for (size_t i = 0; i < j["detunings"].size(); ++i) {
      double d = number(j["detunings"][i], "detunings[" + std::to_string(i) + "]");
      if (!(1.0 + d > 0)) fail("detunings", "frequencies must stay positive");
      c.detunings.push_back(d);
    }
    std::sort(c.detunings.begin(), c.detunings.end());
    c.detunings.erase(std::unique(c.detunings.begin(), c.detunings.end()), c.detunings.end());

    if (!j.contains("modes") || !j["modes"].is_array() || j["modes"].empty()) fail("modes", "expected a non-empty array");
    for (const auto& md : j["modes"]) {
      if (!md.is_string()) fail("modes", "expected strings");
      try {
        c.modes.push_back(parse_gauge_mode(md));
      } catch (const InvalidArgument& e) {
        fail("modes", e.what());
      }
    }
    if (j.contains("gauge")) {
      if (!j["gauge"].is_string()) fail("gauge", "expected 'coulomb' or 'dipole'");
      try {
        c.gauge = parse_gauge(j["gauge"]);
      } catch (const InvalidArgument& e) {
        fail("gauge", e.what());
      }
    }
  }

  if (c.model == Model::Rabi) {
    for (const auto& ch : c.channels)
      if (ch.target == Target::Exciton) fail("channels", "the Rabi model has qubit and cavity channels");
    for (auto md : c.modes)
      for (const auto& ch : c.channels) {
        if (md == GaugeMode::NaiveCoulomb && ch.target != Target::Qubit)
          fail("modes", "naive_coulomb applies to the qubit channel");
        if (md == GaugeMode::NaiveDipole && ch.target != Target::Cavity)
          fail("modes", "naive_dipole applies to the cavity channel");
      }
    if (!j.contains("transitions") || !j["transitions"].is_array() || j["transitions"].empty())
      fail("transitions", "expected a non-empty array of [label, label]");
    auto known_labels = default_labels(64);
    for (const auto& t : j["transitions"]) {
      if (!t.is_array() || t.size() != 2 || !t[0].is_string() || !t[1].is_string())
        fail("transitions", "expected [label, label] pairs");
      for (const auto& l : t)
        if (std::find(known_labels.begin(), known_labels.end(), l.get<std::string>()) == known_labels.end())
          fail("transitions", "unknown label '" + l.get<std::string>() + "'");
      c.transitions.push_back({t[0], t[1]});
    }
    if (j.contains("cutoff")) {
      if (!j["cutoff"].is_number_integer() || (j["cutoff"].get<int>() != 0 && j["cutoff"].get<int>() < 2))
        fail("cutoff", "expected 0 (automatic) or an integer >= 2");
      c.cutoff = j["cutoff"].get<int>();
    }
  }

  if (c.model == Model::Hopfield) {
    if (c.channels.size() > 2) fail("channels", "at most one cavity and one exciton channel");
    std::set<Target> seen;
    for (const auto& ch : c.channels) {
      if (ch.target == Target::Qubit) fail("channels", "the Hopfield model has cavity and exciton channels");
      if (!seen.insert(ch.target).second) fail("channels", "duplicate target");
    }
    c.quantities = {"rates"};
    if (j.contains("quantities")) {
      c.quantities.clear();
      if (!j["quantities"].is_array() || j["quantities"].empty()) fail("quantities", "expected a non-empty array");
      for (const auto& q : j["quantities"]) {
        if (!q.is_string() || (q != "rates" && q != "frequencies")) fail("quantities", "expected 'rates' or 'frequencies'");
        c.quantities.push_back(q);
      }
    }
    if (j.contains("rate_law")) {
      if (!j["rate_law"].is_string()) fail("rate_law", "expected 'squared' or 'linear'");
      try {
        c.rate_law = parse_rate_law(j["rate_law"]);
      } catch (const InvalidArgument& e) {
        fail("rate_law", e.what());
      }
    }
  }

  json canon = j;
  canon["name"] = c.name;
  c.canonical = canon.dump();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string stem = path;
  auto slash = stem.find_last_of('/');
  if (slash != std::string::npos) stem = stem.substr(slash + 1);
  auto dot = stem.find_last_of('.');
  if (dot != std::string::npos) stem = stem.substr(0, dot);
  return parse_config(ss.str(), stem);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(c.canonical)));
  return buf;
}

}  // namespace dephase

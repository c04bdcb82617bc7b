#include "dephase/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "dephase/errors.hpp"
#include "dephase/hopfield.hpp"
#include "dephase/lindblad.hpp"
#include "dephase/rabi.hpp"

#ifndef DEPHASE_VERSION
#define DEPHASE_VERSION "unknown"
#endif

namespace dephase {

using json = nlohmann::ordered_json;

std::string format_double(double x) {
  if (x == 0) return "0";  // drops the sign of -0
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

namespace {

// RFC 4180 quoting, only where needed (labels such as 1+,0)
std::string csv_field(const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) return f;
  std::string q = "\"";
  for (char c : f) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

std::string CsvTable::render() const {
  std::string s;
  for (size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + csv_field(columns[i]);
  s += "\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + csv_field(r[i]);
    s += "\n";
  }
  return s;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errs(n);
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

namespace {

std::string channel_name(const ChannelSpec& ch) { return to_string(ch.target); }

SweepData rabi_sweep(const RunConfig& c, int jobs) {
  struct Item {
    double detuning;
    ChannelSpec ch;
    GaugeMode mode;
  };
  std::vector<Item> items;
  for (double d : c.detunings)
    for (const auto& ch : c.channels)
      for (auto m : c.modes) items.push_back({d, ch, m});

  struct Result {
    std::vector<RabiRateRow> rows;
    std::optional<PointFailure> failure;
  };
  std::vector<Result> res(items.size());
  parallel_for(static_cast<int>(items.size()), jobs, [&](int i) {
    const auto& it = items[i];
    std::vector<RabiParams> grid;
    for (double e : c.grid) grid.push_back(rabi_params(it.detuning, e, c.cutoff));
    DephasingChannel ch;
    ch.target = it.ch.target;
    ch.gamma0 = it.ch.gamma0;
    ch.mode = it.mode;
    try {
      res[i].rows = rate_sweep(grid, ch, c.transitions, c.gauge);
    } catch (const Error& e) {
      // tracking broke down somewhere on the grid, usually from a truncation that is far too small
      res[i].failure = PointFailure{it.detuning, c.grid.back(), e.what()};
    }
  });

  SweepData d;
  CsvTable t;
  t.file = c.name + "_rates.csv";
  t.columns = {"detuning", "eta", "transition", "channel", "mode", "gauge", "rate_over_gamma0", "cutoff", "converged"};
  using Key = std::tuple<double, double, std::string, std::string, std::string>;
  std::vector<std::pair<Key, std::vector<std::string>>> rows;
  std::set<int> cutoffs;
  std::set<std::pair<double, double>> bad;
  for (size_t i = 0; i < items.size(); ++i) {
    if (res[i].failure) d.failures.push_back(*res[i].failure);
    for (const auto& r : res[i].rows) {
      cutoffs.insert(r.cutoff);
      if (!r.converged && bad.insert({r.detuning, r.eta}).second)
        d.failures.push_back({r.detuning, r.eta, "eigenvalue drift at cutoff + " + std::to_string(kConvergenceExtra) +
                                                     " exceeds " + format_double(kConvergenceTol)});
      Key k{items[i].detuning, r.eta, r.transition, channel_name(items[i].ch), to_string(r.mode)};
      rows.push_back({k,
                      {format_double(items[i].detuning), format_double(r.eta), r.transition, channel_name(items[i].ch),
                       to_string(r.mode), to_string(r.gauge), format_double(r.rate_over_gamma0),
                       std::to_string(r.cutoff), r.converged ? "true" : "false"}});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& r : rows) t.rows.push_back(std::move(r.second));
  d.tables.push_back(std::move(t));
  d.cutoffs.assign(cutoffs.begin(), cutoffs.end());
  return d;
}

SweepData hopfield_sweep(const RunConfig& c, int jobs) {
  double gc = 0, gx = 0;
  for (const auto& ch : c.channels) (ch.target == Target::Cavity ? gc : gx) = ch.gamma0;

  std::vector<std::pair<double, double>> points;
  for (double d : c.detunings)
    for (double l : c.grid) points.push_back({d, l});
  std::vector<std::vector<HopfieldRow>> res(points.size());
  std::vector<std::optional<PointFailure>> fail(points.size());
  parallel_for(static_cast<int>(points.size()), jobs, [&](int i) {
    try {
      res[i] = dispersion_sweep({hopfield_params(points[i].first, points[i].second)}, gc, gx, c.modes, c.rate_law);
    } catch (const InstabilityError& e) {
      fail[i] = PointFailure{points[i].first, points[i].second, e.what()};
    }
  });

  SweepData d;
  for (auto& f : fail)
    if (f) d.failures.push_back(*f);

  bool want_rates = std::find(c.quantities.begin(), c.quantities.end(), "rates") != c.quantities.end();
  bool want_freq = std::find(c.quantities.begin(), c.quantities.end(), "frequencies") != c.quantities.end();
  if (want_rates) {
    CsvTable t;
    t.file = c.name + "_rates.csv";
    t.columns = {"detuning", "lambda", "mu", "mode", "rate_law", "rate_over_gamma0"};
    using Key = std::tuple<double, double, int, std::string>;
    std::vector<std::pair<Key, std::vector<std::string>>> rows;
    for (const auto& pr : res)
      for (const auto& r : pr)
        rows.push_back({Key{r.detuning, r.lambda, r.mu, to_string(r.mode)},
                        {format_double(r.detuning), format_double(r.lambda), std::to_string(r.mu), to_string(r.mode),
                         to_string(c.rate_law), format_double(r.rate_over_gamma0)}});
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& r : rows) t.rows.push_back(std::move(r.second));
    d.tables.push_back(std::move(t));
  }
  if (want_freq) {
    CsvTable t;
    t.file = c.name + "_frequencies.csv";
    t.columns = {"detuning", "lambda", "mu", "omega_over_omegac"};
    for (size_t i = 0; i < res.size(); ++i) {
      if (res[i].empty()) continue;
      for (int mu = 1; mu <= 2; ++mu) {
        const auto& r = res[i][mu - 1];
        t.rows.push_back({format_double(r.detuning), format_double(r.lambda), std::to_string(mu),
                          format_double(r.omega)});
      }
    }
    d.tables.push_back(std::move(t));
  }
  return d;
}

SweepData oscillator_sweep(const RunConfig& c) {
  auto rep = oscillator_dephasing_check(c.omega0, c.channels[0].gamma0);
  SweepData d;
  CsvTable t;
  t.file = c.name + "_rates.csv";
  t.columns = {"n", "m", "expected_over_gamma0", "measured_over_gamma0", "pass"};
  const double g = c.channels[0].gamma0;
  for (const auto& r : rep.rows)
    t.rows.push_back({std::to_string(r.n), std::to_string(r.m), format_double(r.expected / g),
                      format_double(r.measured / g), r.pass ? "true" : "false"});
  d.tables.push_back(std::move(t));
  d.cutoffs = {6};
  return d;
}

}  // namespace

SweepData compute_sweep(const RunConfig& c, int jobs) {
  switch (c.model) {
    case Model::Rabi: return rabi_sweep(c, jobs);
    case Model::Hopfield: return hopfield_sweep(c, jobs);
    case Model::Oscillator: return oscillator_sweep(c);
  }
  return {};
}

std::string provenance_json(const RunConfig& c, const RunOptions& opt, const SweepData& d) {
  json j;
  j["schema_version"] = kOutputSchemaVersion;
  j["config_name"] = c.name;
  j["config_hash"] = config_hash(c);
  j["code_version"] = DEPHASE_VERSION;
  j["model"] = to_string(c.model);
  j["seed"] = opt.seed.value_or(c.seed);
  json ds = json::array();
  for (const auto& t : d.tables) ds.push_back({{"file", t.file}, {"columns", t.columns}, {"rows", t.rows.size()}});
  j["datasets"] = ds;
  if (c.model == Model::Rabi) {
    j["cutoff_policy"] = c.cutoff > 0 ? "fixed" : "automatic";
    j["convergence_check"] = {{"extra_levels", kConvergenceExtra}, {"tolerance", kConvergenceTol}};
  } else if (c.model == Model::Hopfield) {
    j["cutoff_policy"] = "none";
  } else {
    j["cutoff_policy"] = "fixed";
  }
  j["cutoffs"] = d.cutoffs;
  json fails = json::array();
  for (const auto& f : d.failures)
    fails.push_back({{"detuning", f.detuning}, {"coupling", f.coupling}, {"reason", f.reason}});
  j["convergence"] = {{"status", d.failures.empty() ? "converged" : "partial"}, {"failures", fails}};
  return j.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << s;
}

}  // namespace

RunOutcome run_config(const RunConfig& c, const RunOptions& opt) {
  RunOutcome o;
  SweepData d = compute_sweep(c, opt.jobs);
  std::filesystem::create_directories(opt.out_dir);
  for (const auto& t : d.tables) {
    auto p = std::filesystem::path(opt.out_dir) / t.file;
    write_file(p, t.render());
    o.files.push_back(p.string());
  }
  auto pp = std::filesystem::path(opt.out_dir) / (c.name + "_provenance.json");
  write_file(pp, provenance_json(c, opt, d));
  o.files.push_back(pp.string());
  for (const auto& f : d.failures)
    o.messages.push_back("not converged at detuning = " + format_double(f.detuning) +
                         ", coupling = " + format_double(f.coupling) + ": " + f.reason);
  if (!d.failures.empty() && !opt.allow_partial) o.exit_code = kExitConvergence;
  return o;
}

}  // namespace dephase

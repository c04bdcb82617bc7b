#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "dephase/errors.hpp"
#include "dephase/hopfield.hpp"
#include "dephase/lindblad.hpp"
#include "dephase/rabi.hpp"
#include "dephase/sweep.hpp"

#ifndef DEPHASE_VERSION
#define DEPHASE_VERSION "unknown"
#endif

namespace dephase {

namespace {

constexpr double kSpectrumTol = 1e-8;
constexpr double kRateGaugeTol = 1e-8;
constexpr double kNormTol = 1e-10;
constexpr double kOmegaTol = 1e-9;
constexpr double kAssemblyTol = 1e-9;
constexpr double kDecoupledTol = 1e-12;

PropertyCheck check(std::string name, double d, double g, double measured, double tol) {
  return {std::move(name), d, g, measured, tol, measured <= tol, false};
}

void rabi_checks(const RunConfig& c, std::vector<PropertyCheck>& out) {
  std::vector<std::string> names;
  for (const auto& t : c.transitions) {
    names.push_back(t.first);
    names.push_back(t.second);
  }
  int n_levels = 3;
  auto all = default_labels(64);
  for (const auto& n : names)
    n_levels = std::max(n_levels, static_cast<int>(std::find(all.begin(), all.end(), n) - all.begin()) + 1);
  const int n_spec = std::max(n_levels, 12);

  for (double d : c.detunings) {
    for (double eta : c.grid) {
      RabiParams p = rabi_params(d, eta, c.cutoff);
      const int N = resolved_cutoff(p);
      int n = std::min(n_spec, 2 * N);
      double drift = cutoff_drift(p, Gauge::Dipole, std::min(n_levels, 2 * N));
      PropertyCheck cv = check("cutoff_convergence", d, eta, drift, kConvergenceTol);
      cv.convergence = true;
      out.push_back(cv);

      auto ec = hermitian_eig(build_coulomb_hamiltonian(p)).values;
      auto ed = hermitian_eig(build_dipole_hamiltonian(p)).values;
      double shift = dipole_constant_shift(p), worst = 0;
      for (int i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(ec(i) - (ed(i) + shift)) / std::max(1.0, std::abs(ec(i))));
      out.push_back(check("spectrum_gauge_invariance", d, eta, worst, kSpectrumTol));
    }

    // correct-mode rates must not depend on the gauge they are evaluated in
    std::vector<RabiParams> grid;
    for (double eta : c.grid) grid.push_back(rabi_params(d, eta, c.cutoff));
    for (const auto& cs : c.channels) {
      if (std::find(c.modes.begin(), c.modes.end(), GaugeMode::Correct) == c.modes.end()) continue;
      DephasingChannel ch;
      ch.target = cs.target;
      ch.gamma0 = cs.gamma0;
      try {
        auto rc = rate_sweep(grid, ch, c.transitions, Gauge::Coulomb);
        auto rd = rate_sweep(grid, ch, c.transitions, Gauge::Dipole);
        std::map<double, double> worst;
        for (size_t i = 0; i < rc.size() && i < rd.size(); ++i)
          worst[rc[i].eta] = std::max(worst[rc[i].eta], std::abs(rc[i].rate_over_gamma0 - rd[i].rate_over_gamma0));
        for (auto [eta, w] : worst)
          out.push_back(check("rate_gauge_invariance_" + to_string(cs.target), d, eta, w, kRateGaugeTol));
      } catch (const Error&) {
        PropertyCheck f{"label_tracking_" + to_string(cs.target), d, c.grid.back(), INFINITY, 0, false, true};
        out.push_back(f);
      }
    }
  }
}

void hopfield_checks(const RunConfig& c, std::vector<PropertyCheck>& out) {
  double gc = 0, gx = 0;
  for (const auto& ch : c.channels) (ch.target == Target::Cavity ? gc : gx) = ch.gamma0;
  for (double d : c.detunings) {
    for (double l : c.grid) {
      HopfieldParams p = hopfield_params(d, l);
      PolaritonDecomposition dc, dd;
      try {
        dc = symplectic_diagonalize(p, Gauge::Coulomb);
        dd = symplectic_diagonalize(p, Gauge::Dipole);
      } catch (const InstabilityError&) {
        out.push_back({"stability", d, l, INFINITY, 0, false, true});
        continue;
      }
      double nw = 0, om = 0;
      for (const auto* dec : {&dc, &dd}) {
        auto mapped = gauge_map_coefficients(*dec);
        for (int mu = 0; mu < 2; ++mu) {
          nw = std::max(nw, std::abs(dec->coeffs[mu].normalization() - 1.0));
          nw = std::max(nw, std::abs(mapped.coeffs[mu].normalization() - 1.0));
        }
      }
      for (int mu = 0; mu < 2; ++mu) om = std::max(om, std::abs(dc.omega[mu] - dd.omega[mu]));
      out.push_back(check("bogoliubov_normalization", d, l, nw, kNormTol));
      out.push_back(check("frequency_gauge_invariance", d, l, om, kOmegaTol));

      auto from_c = polariton_dephasing_rates(p, gc, gx, GaugeMode::Correct, c.rate_law, Gauge::Coulomb);
      auto from_d = polariton_dephasing_rates(p, gc, gx, GaugeMode::Correct, c.rate_law, Gauge::Dipole);
      double as = std::max(std::abs(from_c.rate[0] - from_d.rate[0]), std::abs(from_c.rate[1] - from_d.rate[1]));
      out.push_back(check("rate_assembly_consistency", d, l, as, kAssemblyTol));

      if (l == 0.0) {
        double worst = 0;
        for (int mu = 0; mu < 2; ++mu) {
          double expect = dc.coeffs[mu].matter_weight() > 0.5 ? gx : gc;
          worst = std::max(worst, std::abs(from_c.rate[mu] - expect));
        }
        out.push_back(check("decoupled_limit", d, l, worst, kDecoupledTol));
      }
    }
  }
}

void oscillator_checks(const RunConfig& c, std::vector<PropertyCheck>& out) {
  auto rep = oscillator_dephasing_check(c.omega0, c.channels[0].gamma0);
  for (const auto& r : rep.rows) {
    double rel = std::abs(r.measured - r.expected) / std::max(r.expected, 1e-300);
    if (r.expected == 0) rel = std::abs(r.measured);
    PropertyCheck pc = check("fock_dephasing_" + std::to_string(r.n) + "_" + std::to_string(r.m), 0, c.omega0, rel, 1e-6);
    pc.pass = r.pass;
    out.push_back(pc);
  }
  const auto& k = rep.contracts;
  out.push_back(check("lindblad_trace", 0, c.omega0, k.max_trace_error, kTraceTol));
  out.push_back(check("lindblad_hermiticity", 0, c.omega0, k.max_hermiticity_error, kHermTol));
  out.push_back(check("lindblad_positivity", 0, c.omega0, std::max(0.0, -k.min_eigenvalue), -kPositivityTol));
  out.push_back(check("lindblad_population", 0, c.omega0, k.max_population_drift, kPopulationTol));
}

}  // namespace

VerifyOutcome verify_config(const RunConfig& c, const RunOptions& opt) {
  VerifyOutcome v;
  switch (c.model) {
    case Model::Rabi: rabi_checks(c, v.checks); break;
    case Model::Hopfield: hopfield_checks(c, v.checks); break;
    case Model::Oscillator: oscillator_checks(c, v.checks); break;
  }
  bool conv_fail = false, prop_fail = false;
  int failed = 0;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& k : v.checks) {
    if (!k.pass) {
      ++failed;
      (k.convergence ? conv_fail : prop_fail) = true;
    }
    arr.push_back({{"name", k.name},
                   {"detuning", k.detuning},
                   {"coupling", k.coupling},
                   {"measured", std::isfinite(k.measured) ? nlohmann::ordered_json(k.measured) : nullptr},
                   {"tolerance", k.tolerance},
                   {"pass", k.pass}});
  }
  nlohmann::ordered_json j;
  j["schema_version"] = kOutputSchemaVersion;
  j["config_name"] = c.name;
  j["config_hash"] = config_hash(c);
  j["code_version"] = DEPHASE_VERSION;
  j["seed"] = opt.seed.value_or(c.seed);
  j["pass"] = failed == 0;
  j["checks_total"] = v.checks.size();
  j["checks_failed"] = failed;
  j["checks"] = arr;
  v.report = j.dump(2) + "\n";
  v.exit_code = conv_fail ? kExitConvergence : (prop_fail ? kExitProperty : kExitOk);

  std::filesystem::create_directories(opt.out_dir);
  auto p = std::filesystem::path(opt.out_dir) / (c.name + "_verify.json");
  std::ofstream o(p, std::ios::binary);
  if (!o) throw Error("cannot write '" + p.string() + "'");
  o << v.report;
  v.files.push_back(p.string());
  return v;
}

}  // namespace dephase

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dephase/fock.hpp"

namespace dephase {

enum class Gauge { Coulomb, Dipole };
enum class GaugeMode { Correct, NaiveCoulomb, NaiveDipole };
enum class Target { Qubit, Cavity, Exciton };

std::string to_string(Gauge g);
std::string to_string(GaugeMode m);
std::string to_string(Target t);
Gauge parse_gauge(const std::string& s);
GaugeMode parse_gauge_mode(const std::string& s);
Target parse_target(const std::string& s);

using SpectralDensity = std::function<double(double omega)>;

// S(0) = s0, zero at every other frequency.
SpectralDensity low_frequency_density(double s0);

struct DephasingChannel {
  Target target = Target::Qubit;
  double gamma0 = 1.0;
  GaugeMode mode = GaugeMode::Correct;
  SpectralDensity S_f;  // empty: low_frequency_density(gamma0 / 2)

  double density(double omega) const;
};

struct RabiParams {
  double omega_c = 1.0;
  double omega_q = 1.0;
  double eta = 0.0;
  int cutoff = 0;  // 0: default_cutoff(eta)

  double detuning() const { return omega_q - omega_c; }
  void validate() const;
};

RabiParams rabi_params(double detuning, double eta, int cutoff = 0);

int default_cutoff(double eta);
int resolved_cutoff(const RabiParams& p);

inline constexpr int kConvergenceExtra = 8;
inline constexpr double kConvergenceTol = 1e-8;

Operator build_dipole_hamiltonian(const RabiParams& p);
Operator build_coulomb_hamiltonian(const RabiParams& p);
Operator build_rabi_hamiltonian(const RabiParams& p, Gauge g);

// Constant dropped from the dipole-gauge Hamiltonian: E_coulomb = E_dipole + eta^2 omega_c.
double dipole_constant_shift(const RabiParams& p);

Operator gauge_unitary(const RabiParams& p);
Operator rabi_parity(const RabiParams& p);

// Gauge in which a mode evaluates; correct mode uses the requested one.
Gauge evaluation_gauge(GaugeMode mode, std::optional<Gauge> requested);

Operator channel_operator(const DephasingChannel& ch, const RabiParams& p, Gauge g);

struct LabeledSpectrum {
  Gauge gauge = Gauge::Dipole;
  int cutoff = 0;
  RVec energies;
  Mat states;
  std::vector<std::pair<std::string, int>> labels;
  bool converged = true;
  double drift = 0.0;

  int index(const std::string& label) const;
  const std::vector<std::string> label_names() const;
};

// Label names in product-state energy order: "0", "1-", "1+", "2-", ...
std::vector<std::string> default_labels(int n_levels);

struct TrackingOptions {
  double max_step = 0.01;
  double min_step = 1e-7;
  double ambiguity = 1e-6;
  double min_overlap = 0.9;
};

// Relative eigenvalue drift of the lowest n levels between N and N + kConvergenceExtra.
double cutoff_drift(const RabiParams& p, Gauge g, int n_levels);

LabeledSpectrum label_states(const RabiParams& p, int n_levels, Gauge g = Gauge::Dipole,
                             bool throw_on_drift = true, const TrackingOptions& opt = {});

// Follows labels along increasing eta at a fixed cutoff; shared by label_states and sweeps.
class LabelTracker {
 public:
  LabelTracker(RabiParams base, int cutoff, Gauge g, int n_levels, TrackingOptions opt = {});
  LabeledSpectrum advance_to(double eta);
  double eta() const { return eta_; }
  double min_adjacent_overlap() const { return min_overlap_seen_; }

 private:
  struct Sector {
    std::vector<int> basis;  // global indices
    std::vector<std::string> names;
    Mat tracked;             // sector-basis vectors of the tracked labels
  };
  Mat hamiltonian(double eta) const;
  bool try_step(double eta_next, std::vector<Mat>& next, std::vector<std::vector<int>>& picks,
                std::vector<Spectrum>& eigs) const;
  LabeledSpectrum assemble(double eta, const std::vector<Spectrum>& eigs,
                           const std::vector<std::vector<int>>& picks) const;

  RabiParams base_;
  int N_;
  Gauge gauge_;
  TrackingOptions opt_;
  double eta_ = 0.0;
  std::vector<Sector> sectors_;
  Spectrum field_x_;  // eigendecomposition of a + a^dagger, reused for cos/sin
  double min_overlap_seen_ = 1.0;
  LabeledSpectrum current_;
};

double transition_dephasing_rate(const LabeledSpectrum& s, const Operator& O, double gamma0,
                                 const std::string& j, const std::string& k);

double transition_dephasing_rate(const RabiParams& p, const DephasingChannel& ch,
                                 const std::pair<std::string, std::string>& transition,
                                 std::optional<Gauge> gauge = std::nullopt);

struct RabiRateRow {
  double eta;
  double detuning;
  std::string transition;  // "1-,0"
  double rate_over_gamma0;
  GaugeMode mode;
  Gauge gauge;
  int cutoff;
  bool converged;
};

// One row per (eta, transition). Points share a single tracking pass at the largest cutoff.
std::vector<RabiRateRow> rate_sweep(const std::vector<RabiParams>& grid, const DephasingChannel& ch,
                                    const std::vector<std::pair<std::string, std::string>>& transitions,
                                    std::optional<Gauge> gauge = std::nullopt);

}  // namespace dephase

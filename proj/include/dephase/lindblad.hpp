#pragma once

#include <string>
#include <vector>

#include "dephase/fock.hpp"
#include "dephase/rabi.hpp"

namespace dephase {

// Transitions closer than this share one collective jump.
inline constexpr double kClusterTol = 1e-6;

struct OffDiagTerm {
  int j, k;        // jump |j><k|
  double omega;    // E_k - E_j
  double gamma;    // S(omega) |O_jk|^2
};

struct Jump {
  Mat L;
  double omega;
  int members;
};

struct DressedDissipator {
  int n = 0;
  RVec energies;             // dressed energies of the kept levels
  RVec phi;                  // Phi^j = sqrt(S(0)) O_jj
  std::vector<OffDiagTerm> offdiag;
  std::vector<Jump> jumps;   // includes the zero-frequency jump
  std::vector<std::string> warnings;

  bool pure_dephasing() const;  // only a diagonal zero-frequency jump acts
};

// Dressed matrix elements of O over the lowest n_levels eigenvectors.
Mat dressed_matrix(const Mat& states, const Operator& O, int n_levels);

DressedDissipator build_dressed_dissipator(const RVec& energies, const Mat& states, const Operator& O,
                                           const SpectralDensity& S, int n_levels);
DressedDissipator build_dressed_dissipator(const LabeledSpectrum& s, const Operator& O, const SpectralDensity& S,
                                           int n_levels);

struct Contracts {
  double max_trace_error = 0;
  double max_hermiticity_error = 0;  // before re-symmetrisation
  double min_eigenvalue = 1;
  double max_population_drift = 0;
  bool population_checked = false;

  bool ok() const;
  std::string describe() const;
};

inline constexpr double kTraceTol = 1e-8;
inline constexpr double kHermTol = 1e-10;
inline constexpr double kPositivityTol = -1e-8;
inline constexpr double kPopulationTol = 1e-8;

struct Trajectory {
  std::vector<double> times;
  std::vector<Mat> rho;
  Contracts contracts;
};

// Largest dt meeting the step heuristic for H in the dressed basis.
double default_step(const RVec& energies);

// RK4 in the dressed basis, H = diag(energies). dt <= 0 picks default_step.
Trajectory propagate(const Mat& rho0, const RVec& energies, const DressedDissipator& dis, double t_final, double dt,
                     int record_every = 1);

struct DecayFit {
  double rate = 0;       // full width: |rho_jk| ~ exp(-rate t / 2)
  double residual = 0;   // RMS of the log fit
  int points = 0;
};

// weighted: least squares with weights mag^2, the inverse variance of log(mag) under additive noise.
DecayFit fit_log_decay(const std::vector<double>& t, const std::vector<double>& mag, double t_min, double max_residual,
                       bool weighted = false);

DecayFit extract_decay_rate(const Trajectory& tr, int j, int k, double t_min = 0.0, double max_residual = 1e-3);

struct OscillatorRow {
  int n, m;
  double expected, measured;
  bool pass;
};

struct OscillatorReport {
  std::vector<OscillatorRow> rows;
  Contracts contracts;
  bool pass = true;
};

// Single mode H = omega0 a^dagger a, dissipator S(0) = gamma0 / 2 on a^dagger a, n, m <= 4.
OscillatorReport oscillator_dephasing_check(double omega0, double gamma0);

}  // namespace dephase

#pragma once

#include <cstdint>
#include <vector>

#include "dephase/fock.hpp"
#include "dephase/lindblad.hpp"

namespace dephase {

std::uint64_t splitmix64(std::uint64_t x);

struct StochasticOptions {
  int n_traj = 2000;
  double t_final = 100.0;
  double dt = 0.05;
  std::uint64_t seed = 1;
  // Correlation time of the low-pass noise; 0 gives white noise.
  double tau = 0.0;
  int record_every = 20;
  int n_batches = 20;
  int jobs = 1;
};

struct StochasticResult {
  std::vector<double> times;
  std::vector<Mat> rho;                  // ensemble mean per record
  std::vector<std::vector<Mat>> batches; // batch means per record
  double max_norm_drift = 0;
};

// Trajectories of i dpsi/dt = (H + f(t) O) psi in the dressed basis, H = diag(energies).
// f has zero-frequency density S0; with tau > 0 it passes through two unit-gain low-pass stages.
StochasticResult stochastic_oracle(const RVec& energies, const Mat& O, double S0, const Vec& psi0,
                                   const StochasticOptions& opt);

struct StochasticRate {
  double rate = 0;
  double std_error = 0;  // delete-one-batch jackknife
  double residual = 0;
};

StochasticRate stochastic_decay_rate(const StochasticResult& r, int j, int k, double t_min, double max_residual,
                                     bool weighted = false);

}  // namespace dephase

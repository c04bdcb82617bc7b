#include "dephase/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "dephase/errors.hpp"
#include "dephase/kernels.hpp"

namespace dephase {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

const cplx I(0, 1);

struct Propagator {
  int n;
  Mat K;          // W^dagger e^{-i H dt} W
  Mat out;        // e^{+i H dt/2} W, maps chi back to psi
  Mat in;         // W^dagger e^{-i H dt/2}
  RVec o;         // eigenvalues of O
};

struct BatchSum {
  std::vector<Mat> rho;
  double max_norm_drift = 0;
};

BatchSum run_batch(const Propagator& P, const Vec& psi0, double S0, const StochasticOptions& opt, int first,
                   int count, long steps, int n_rec) {
  const int n = P.n;
  BatchSum b;
  b.rho.assign(n_rec, Mat::Zero(n, n));
  const double r = opt.tau > 0 ? std::exp(-opt.dt / opt.tau) : 0.0;
  const double amp = std::sqrt(S0 / opt.dt);
  std::vector<cplx> chi(n), tmp(n), ph(n);
  Vec chi0 = P.in * psi0;

  const std::uint64_t base = splitmix64(opt.seed);
  for (int t = first; t < first + count; ++t) {
    std::mt19937_64 rng(splitmix64(base + static_cast<std::uint64_t>(t)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < n; ++i) chi[i] = chi0(i);
    double g = 0, f = 0;
    int rec = 0;
    auto record = [&]() {
      Vec psi = P.out * Eigen::Map<const Vec>(chi.data(), n);
      b.rho[rec++] += psi * psi.adjoint();
    };
    record();
    for (long s = 1; s <= steps; ++s) {
      double xi = amp * gauss(rng);
      double fm;
      if (opt.tau > 0) {
        g = r * g + (1 - r) * xi;
        double fn = r * f + (1 - r) * g;
        fm = 0.5 * (f + fn);
        f = fn;
      } else {
        fm = xi;
      }
      for (int i = 0; i < n; ++i) {
        double th = fm * P.o(i) * opt.dt;
        ph[i] = cplx(std::cos(th), -std::sin(th));
      }
      kernels::cmul(ph.data(), chi.data(), n);
      kernels::cgemv(P.K.data(), chi.data(), tmp.data(), n);
      std::swap(chi, tmp);
      if (s % opt.record_every == 0) record();
    }
    double norm = Eigen::Map<const Vec>(chi.data(), n).norm();
    b.max_norm_drift = std::max(b.max_norm_drift, std::abs(norm - psi0.norm()));
  }
  return b;
}

}  // namespace

StochasticResult stochastic_oracle(const RVec& energies, const Mat& O, double S0, const Vec& psi0,
                                   const StochasticOptions& opt) {
  const int n = static_cast<int>(energies.size());
  if (O.rows() != n || O.cols() != n || psi0.size() != n) throw ContractViolation("stochastic_oracle: size mismatch");
  if (opt.n_traj < 100) throw InvalidArgument("stochastic_oracle needs n_traj >= 100");
  if (!(opt.dt > 0) || !(opt.t_final > 0)) throw InvalidArgument("stochastic_oracle: dt and t_final must be > 0");
  if (S0 < 0) throw InvalidArgument("S0 must be >= 0");
  if (opt.record_every < 1 || opt.n_batches < 1 || opt.n_batches > opt.n_traj)
    throw InvalidArgument("stochastic_oracle: bad record/batch settings");

  auto es = hermitian_eig(Mat(0.5 * (O + O.adjoint())));
  Propagator P;
  P.n = n;
  P.o = es.values;
  Vec full(n), half(n), back(n);
  for (int i = 0; i < n; ++i) {
    full(i) = std::exp(-I * energies(i) * opt.dt);
    half(i) = std::exp(-I * energies(i) * (0.5 * opt.dt));
    back(i) = std::exp(I * energies(i) * (0.5 * opt.dt));
  }
  const Mat& W = es.vectors;
  P.K = W.adjoint() * full.asDiagonal() * W;
  P.out = back.asDiagonal() * W;
  P.in = W.adjoint() * half.asDiagonal();

  const long steps = static_cast<long>(std::llround(opt.t_final / opt.dt));
  const int n_rec = static_cast<int>(steps / opt.record_every) + 1;

  // fixed trajectory-to-batch assignment keeps sums independent of the worker count
  const int B = opt.n_batches;
  std::vector<int> first(B), count(B);
  for (int b = 0, at = 0; b < B; ++b) {
    count[b] = opt.n_traj / B + (b < opt.n_traj % B ? 1 : 0);
    first[b] = at;
    at += count[b];
  }
  std::vector<BatchSum> sums(B);
  const int jobs = std::max(1, std::min(opt.jobs, B));
  if (jobs == 1) {
    for (int b = 0; b < B; ++b) sums[b] = run_batch(P, psi0, S0, opt, first[b], count[b], steps, n_rec);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&, w]() {
        for (int b = w; b < B; b += jobs) sums[b] = run_batch(P, psi0, S0, opt, first[b], count[b], steps, n_rec);
      });
    for (auto& th : pool) th.join();
  }

  StochasticResult res;
  for (int i = 0; i < n_rec; ++i) res.times.push_back(static_cast<double>(i) * opt.record_every * opt.dt);
  res.rho.assign(n_rec, Mat::Zero(n, n));
  res.batches.assign(B, {});
  for (int b = 0; b < B; ++b) {
    res.max_norm_drift = std::max(res.max_norm_drift, sums[b].max_norm_drift);
    for (int i = 0; i < n_rec; ++i) {
      res.rho[i] += sums[b].rho[i];
      res.batches[b].push_back(sums[b].rho[i] / static_cast<double>(count[b]));
    }
  }
  for (auto& m : res.rho) m /= static_cast<double>(opt.n_traj);
  if (res.max_norm_drift > 1e-6)
    throw StepSizeError("trajectory norm drift " + std::to_string(res.max_norm_drift) + " exceeds 1e-6");
  return res;
}

StochasticRate stochastic_decay_rate(const StochasticResult& r, int j, int k, double t_min, double max_residual,
                                     bool weighted) {
  auto series = [&](const std::vector<Mat>& rho) {
    std::vector<double> m;
    for (const auto& x : rho) m.push_back(std::abs(x(j, k)));
    return m;
  };
  if (std::abs(r.rho.front()(j, k)) <= 1e-3) throw ContractViolation("initial coherence |rho_jk(0)| <= 1e-3");
  auto full = fit_log_decay(r.times, series(r.rho), t_min, max_residual, weighted);
  StochasticRate out{full.rate, 0.0, full.residual};

  const int B = static_cast<int>(r.batches.size());
  if (B < 2) return out;
  // all batches share one size up to a remainder of one trajectory; equal weights are close enough here
  std::vector<double> jk;
  for (int drop = 0; drop < B; ++drop) {
    std::vector<Mat> rho(r.rho.size(), Mat::Zero(r.rho[0].rows(), r.rho[0].cols()));
    for (int b = 0; b < B; ++b) {
      if (b == drop) continue;
      for (size_t i = 0; i < rho.size(); ++i) rho[i] += r.batches[b][i];
    }
    jk.push_back(fit_log_decay(r.times, series(rho), t_min, INFINITY, weighted).rate);
  }
  double mean = 0;
  for (double x : jk) mean += x;
  mean /= B;
  double var = 0;
  for (double x : jk) var += (x - mean) * (x - mean);
  out.std_error = std::sqrt((B - 1.0) / B * var);
  return out;
}

}  // namespace dephase

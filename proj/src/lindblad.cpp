#include "dephase/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dephase/errors.hpp"

namespace dephase {

namespace {
const cplx I(0, 1);

bool is_diagonal(const Mat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != cplx(0)) return false;
  return true;
}
}  // namespace

bool DressedDissipator::pure_dephasing() const {
  for (const auto& j : jumps)
    if (j.omega != 0.0 || !is_diagonal(j.L)) return false;
  return true;
}

Mat dressed_matrix(const Mat& states, const Operator& O, int n_levels) {
  if (n_levels < 1 || n_levels > states.cols()) throw InvalidArgument("n_levels exceeds the spectrum");
  if (O.dim() != states.rows()) throw ContractViolation("operator does not match the spectrum");
  Mat V = states.leftCols(n_levels);
  return V.adjoint() * O.matrix() * V;
}

DressedDissipator build_dressed_dissipator(const RVec& energies, const Mat& states, const Operator& O,
                                           const SpectralDensity& S, int n_levels) {
  if (!S) throw InvalidArgument("spectral density is empty");
  Mat Od = dressed_matrix(states, O, n_levels);
  const int n = n_levels;
  DressedDissipator d;
  d.n = n;
  d.energies = energies.head(n);

  const double s0 = S(0.0);
  if (s0 < 0) throw InvalidArgument("spectral density must be >= 0");
  d.phi.resize(n);
  for (int j = 0; j < n; ++j) d.phi(j) = std::sqrt(s0) * Od(j, j).real();

  struct Tr {
    int j, k;
    double w;
  };
  std::vector<Tr> trs;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j != k) trs.push_back({j, k, d.energies(k) - d.energies(j)});
  std::stable_sort(trs.begin(), trs.end(), [](const Tr& a, const Tr& b) { return a.w < b.w; });

  // zero-frequency cluster always carries the diagonal part
  Mat L0 = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) L0(j, j) = d.phi(j);
  int zero_members = 0;

  size_t i = 0;
  while (i < trs.size()) {
    size_t e = i + 1;
    while (e < trs.size() && trs[e].w - trs[e - 1].w < kClusterTol) ++e;
    double wmid = 0;
    for (size_t q = i; q < e; ++q) wmid += trs[q].w;
    wmid /= static_cast<double>(e - i);
    const bool zero = std::abs(wmid) < kClusterTol;
    Mat L = Mat::Zero(n, n);
    int members = 0;
    for (size_t q = i; q < e; ++q) {
      const auto& t = trs[q];
      double sw = zero ? s0 : S(t.w);
      if (sw < 0) throw InvalidArgument("spectral density must be >= 0");
      double g = sw * std::norm(Od(t.j, t.k));
      if (g <= 0) continue;
      d.offdiag.push_back({t.j, t.k, t.w, g});
      L(t.j, t.k) = std::sqrt(sw) * Od(t.j, t.k);
      ++members;
    }
    if (zero) {
      L0 += L;
      zero_members += members;
    } else if (members > 0) {
      if (members > 1) {
        std::ostringstream os;
        os << "merged " << members << " transitions near omega = " << wmid << " into one collective jump";
        d.warnings.push_back(os.str());
      }
      d.jumps.push_back({L, wmid, members});
    }
    i = e;
  }
  if (zero_members > 0) {
    std::ostringstream os;
    os << "merged " << zero_members << " degenerate transitions into the zero-frequency jump";
    d.warnings.push_back(os.str());
  }
  if (L0.cwiseAbs().maxCoeff() > 0) d.jumps.insert(d.jumps.begin(), {L0, 0.0, 1 + zero_members});
  return d;
}

DressedDissipator build_dressed_dissipator(const LabeledSpectrum& s, const Operator& O, const SpectralDensity& S,
                                           int n_levels) {
  return build_dressed_dissipator(s.energies, s.states, O, S, n_levels);
}

bool Contracts::ok() const {
  return max_trace_error < kTraceTol && max_hermiticity_error < kHermTol && min_eigenvalue > kPositivityTol &&
         (!population_checked || max_population_drift < kPopulationTol);
}

std::string Contracts::describe() const {
  std::ostringstream os;
  os.precision(3);
  os << "trace " << max_trace_error << ", hermiticity " << max_hermiticity_error << ", min eig " << min_eigenvalue;
  if (population_checked) os << ", population drift " << max_population_drift;
  return os.str();
}

double default_step(const RVec& energies) {
  double wmax = energies.maxCoeff() - energies.minCoeff();
  if (wmax <= 0) return 0.01;
  return 0.01 / wmax;
}

Trajectory propagate(const Mat& rho0, const RVec& energies, const DressedDissipator& dis, double t_final, double dt,
                     int record_every) {
  const int n = static_cast<int>(energies.size());
  if (rho0.rows() != n || rho0.cols() != n) throw ContractViolation("rho0 does not match the dressed space");
  if (dis.n != n) throw ContractViolation("dissipator does not match the dressed space");
  if (t_final < 0) throw InvalidArgument("t_final must be >= 0");
  if (record_every < 1) record_every = 1;
  if (dt <= 0) dt = default_step(energies);
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
  dt = t_final > 0 ? t_final / static_cast<double>(steps) : 0.0;

  // diagonal jumps fold into an elementwise generator
  Mat G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = -I * (energies(i) - energies(j));
  struct Dense {
    Mat L, Ld, K;
  };
  std::vector<Dense> dense;
  for (const auto& jp : dis.jumps) {
    if (is_diagonal(jp.L)) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          cplx li = jp.L(i, i), lj = jp.L(j, j);
          G(i, j) += li * std::conj(lj) - 0.5 * (std::norm(li) + std::norm(lj));
        }
    } else {
      Mat Ld = jp.L.adjoint();
      dense.push_back({jp.L, Ld, Ld * jp.L});
    }
  }
  auto deriv = [&](const Mat& r) {
    Mat out = G.cwiseProduct(r);
    for (const auto& d : dense) out += d.L * r * d.Ld - 0.5 * (d.K * r + r * d.K);
    return out;
  };

  Trajectory tr;
  tr.contracts.population_checked = dis.pure_dephasing();
  const RVec pop0 = rho0.diagonal().real();
  Mat rho = 0.5 * (rho0 + rho0.adjoint());

  auto check = [&](const Mat& r, bool full) {
    double te = std::abs(r.trace() - cplx(1.0));
    tr.contracts.max_trace_error = std::max(tr.contracts.max_trace_error, te);
    if (te > 1e-6) throw StepSizeError("trace drift " + std::to_string(te) + " exceeds 1e-6; reduce dt");
    if (!full) return;
    Eigen::SelfAdjointEigenSolver<Mat> es(r, Eigen::EigenvaluesOnly);
    tr.contracts.min_eigenvalue = std::min(tr.contracts.min_eigenvalue, es.eigenvalues().minCoeff());
    if (tr.contracts.population_checked)
      tr.contracts.max_population_drift =
          std::max(tr.contracts.max_population_drift, (r.diagonal().real() - pop0).cwiseAbs().maxCoeff());
  };
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.rho.push_back(rho);
  };

  check(rho, true);
  record(0.0);
  for (long s = 1; s <= steps; ++s) {
    Mat k1 = deriv(rho);
    Mat k2 = deriv(rho + 0.5 * dt * k1);
    Mat k3 = deriv(rho + 0.5 * dt * k2);
    Mat k4 = deriv(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    tr.contracts.max_hermiticity_error = std::max(tr.contracts.max_hermiticity_error, hermiticity_error(rho));
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const bool rec = s % record_every == 0 || s == steps;
    check(rho, rec);
    if (rec) record(static_cast<double>(s) * dt);
  }
  return tr;
}

DecayFit fit_log_decay(const std::vector<double>& t, const std::vector<double>& mag, double t_min,
                       double max_residual, bool weighted) {
  std::vector<double> x, y, w;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_min) continue;
    if (!(mag[i] > 0)) throw FitQualityError("coherence vanished before the fit window ended", INFINITY);
    x.push_back(t[i]);
    y.push_back(std::log(mag[i]));
    w.push_back(weighted ? mag[i] : 1.0);
  }
  if (x.size() < 3) throw InvalidArgument("decay fit needs at least 3 samples");
  Eigen::MatrixXd A(x.size(), 2);
  Eigen::VectorXd b(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    A(i, 0) = w[i];
    A(i, 1) = w[i] * x[i];
    b(i) = w[i] * y[i];
  }
  Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  double rss = 0, wsum = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    double r = c(0) + c(1) * x[i] - y[i];
    rss += w[i] * w[i] * r * r;
    wsum += w[i] * w[i];
  }
  DecayFit f;
  f.rate = -2.0 * c(1);
  f.residual = std::sqrt(rss / wsum);
  f.points = static_cast<int>(x.size());
  if (f.residual > max_residual)
    throw FitQualityError("non-exponential decay, RMS log residual " + std::to_string(f.residual), f.residual);
  return f;
}

DecayFit extract_decay_rate(const Trajectory& tr, int j, int k, double t_min, double max_residual) {
  if (tr.rho.empty()) throw InvalidArgument("empty trajectory");
  const int n = static_cast<int>(tr.rho.front().rows());
  if (j < 0 || k < 0 || j >= n || k >= n) throw InvalidArgument("pair outside the dressed space");
  if (std::abs(tr.rho.front()(j, k)) <= 1e-3) throw ContractViolation("initial coherence |rho_jk(0)| <= 1e-3");
  std::vector<double> mag;
  for (const auto& r : tr.rho) mag.push_back(std::abs(r(j, k)));
  return fit_log_decay(tr.times, mag, t_min, max_residual);
}

OscillatorReport oscillator_dephasing_check(double omega0, double gamma0) {
  const int N = 6, nmax = 4;
  RVec E(N);
  for (int i = 0; i < N; ++i) E(i) = omega0 * i;
  Operator num = number(N);
  DressedDissipator dis =
      build_dressed_dissipator(E, Mat::Identity(N, N), num, low_frequency_density(gamma0 / 2), N);

  Vec psi = Vec::Zero(N);
  for (int i = 0; i <= nmax; ++i) psi(i) = 1.0 / std::sqrt(nmax + 1.0);
  Mat rho0 = psi * psi.adjoint();
  // a few e-folds of the slowest nonzero channel
  const double t_final = gamma0 > 0 ? 4.0 / gamma0 : 10.0;
  auto tr = propagate(rho0, E, dis, t_final, 0.0, 50);

  OscillatorReport rep;
  rep.contracts = tr.contracts;
  for (int n = 0; n <= nmax; ++n)
    for (int m = 0; m <= n; ++m) {
      double expected = 0.5 * gamma0 * (n - m) * (n - m);
      double measured;
      if (n == m) {
        measured = 0;
        for (const auto& r : tr.rho) measured = std::max(measured, std::abs(r(n, n).real() - rho0(n, n).real()));
      } else {
        measured = extract_decay_rate(tr, n, m, 0.0, 1e-6).rate;
      }
      bool pass = std::abs(measured - expected) <= 1e-6 * std::max(1.0, expected);
      rep.rows.push_back({n, m, expected, measured, pass});
      rep.pass = rep.pass && pass;
    }
  rep.pass = rep.pass && rep.contracts.ok();
  return rep;
}

}  // namespace dephase

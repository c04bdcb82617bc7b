#include "dephase/rabi.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dephase/errors.hpp"

namespace dephase {

std::string to_string(Gauge g) { return g == Gauge::Coulomb ? "coulomb" : "dipole"; }

std::string to_string(GaugeMode m) {
  switch (m) {
    case GaugeMode::Correct: return "correct";
    case GaugeMode::NaiveCoulomb: return "naive_coulomb";
    case GaugeMode::NaiveDipole: return "naive_dipole";
  }
  return "?";
}

std::string to_string(Target t) {
  switch (t) {
    case Target::Qubit: return "qubit";
    case Target::Cavity: return "cavity";
    case Target::Exciton: return "exciton";
  }
  return "?";
}

Gauge parse_gauge(const std::string& s) {
  if (s == "coulomb") return Gauge::Coulomb;
  if (s == "dipole") return Gauge::Dipole;
  throw InvalidArgument("unknown gauge '" + s + "'");
}

GaugeMode parse_gauge_mode(const std::string& s) {
  if (s == "correct") return GaugeMode::Correct;
  if (s == "naive_coulomb") return GaugeMode::NaiveCoulomb;
  if (s == "naive_dipole") return GaugeMode::NaiveDipole;
  throw InvalidArgument("unknown gauge mode '" + s + "'");
}

Target parse_target(const std::string& s) {
  if (s == "qubit") return Target::Qubit;
  if (s == "cavity") return Target::Cavity;
  if (s == "exciton") return Target::Exciton;
  throw InvalidArgument("unknown channel target '" + s + "'");
}

SpectralDensity low_frequency_density(double s0) {
  return [s0](double w) { return std::abs(w) < 1e-9 ? s0 : 0.0; };
}

double DephasingChannel::density(double omega) const {
  if (S_f) return S_f(omega);
  return low_frequency_density(gamma0 / 2)(omega);
}

void RabiParams::validate() const {
  if (!(omega_c > 0) || !(omega_q > 0) || !(eta >= 0))
    throw InvalidArgument("RabiParams: need omega_c > 0, omega_q > 0, eta >= 0");
  if (cutoff != 0 && cutoff < 2) throw InvalidArgument("RabiParams: cutoff must be >= 2");
}

RabiParams rabi_params(double detuning, double eta, int cutoff) {
  RabiParams p;
  p.omega_q = 1.0 + detuning;
  p.eta = eta;
  p.cutoff = cutoff;
  return p;
}

int default_cutoff(double eta) {
  return std::max(20, static_cast<int>(std::ceil(10.0 + 10.0 * eta + 16.0 * eta * eta)));
}

int resolved_cutoff(const RabiParams& p) { return p.cutoff > 0 ? p.cutoff : default_cutoff(p.eta); }

namespace {

const cplx I(0, 1);

Mat kron(const Mat& a, const Mat& b) {
  Mat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

SpaceDescriptor rabi_space(int N) { return {{Factor::two_level(), Factor::boson(N)}}; }

Mat sx() { return pauli(Axis::X).matrix(); }
Mat sy() { return pauli(Axis::Y).matrix(); }
Mat sz() { return pauli(Axis::Z).matrix(); }

Mat dipole_matrix(const RabiParams& p, int N) {
  Mat a = annihilation(N).matrix();
  Mat n = number(N).matrix();
  Mat h = kron(Mat::Identity(2, 2), p.omega_c * n) + kron(0.5 * p.omega_q * sz(), Mat::Identity(N, N)) -
          I * p.eta * p.omega_c * kron(sx(), a - a.adjoint());
  return 0.5 * (h + h.adjoint());
}

Mat coulomb_matrix(const RabiParams& p, int N, const Spectrum& xeig) {
  const RVec& x = xeig.values;
  const Mat& V = xeig.vectors;
  Vec c(x.size()), s(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    c(i) = std::cos(2.0 * p.eta * x(i));
    s(i) = std::sin(2.0 * p.eta * x(i));
  }
  Mat cos2a = V * c.asDiagonal() * V.adjoint();
  Mat sin2a = V * s.asDiagonal() * V.adjoint();
  Mat h = kron(Mat::Identity(2, 2), p.omega_c * number(N).matrix()) +
          0.5 * p.omega_q * (kron(sz(), cos2a) + kron(sy(), sin2a));
  return 0.5 * (h + h.adjoint());
}

Spectrum field_quadrature(int N) {
  Mat a = annihilation(N).matrix();
  return hermitian_eig(Mat(a + a.adjoint()));
}

// Lowest n eigenvalues at the resolved cutoff and at cutoff + extra.
RVec low_levels(const RabiParams& p, Gauge g, int N, int n) {
  RabiParams q = p;
  q.cutoff = N;
  Mat h = g == Gauge::Dipole ? dipole_matrix(q, N) : coulomb_matrix(q, N, field_quadrature(N));
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().head(std::min<Eigen::Index>(n, es.eigenvalues().size()));
}

}  // namespace

Operator build_dipole_hamiltonian(const RabiParams& p) {
  p.validate();
  const int N = resolved_cutoff(p);
  return Operator(rabi_space(N), dipole_matrix(p, N), true);
}

Operator build_coulomb_hamiltonian(const RabiParams& p) {
  p.validate();
  const int N = resolved_cutoff(p);
  return Operator(rabi_space(N), coulomb_matrix(p, N, field_quadrature(N)), true);
}

Operator build_rabi_hamiltonian(const RabiParams& p, Gauge g) {
  return g == Gauge::Dipole ? build_dipole_hamiltonian(p) : build_coulomb_hamiltonian(p);
}

double dipole_constant_shift(const RabiParams& p) { return p.eta * p.eta * p.omega_c; }

Operator gauge_unitary(const RabiParams& p) {
  p.validate();
  const int N = resolved_cutoff(p);
  Mat a = annihilation(N).matrix();
  Operator A(Operator({{Factor::boson(N)}}, p.eta * (a + a.adjoint()), true));
  return expm_hermitian_generator(tensor(pauli(Axis::X), A), 1.0);
}

Operator rabi_parity(const RabiParams& p) {
  const int N = resolved_cutoff(p);
  Mat par = Mat::Zero(N, N);
  for (int n = 0; n < N; ++n) par(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return Operator(rabi_space(N), -kron(sz(), par), true);
}

Gauge evaluation_gauge(GaugeMode mode, std::optional<Gauge> requested) {
  Gauge forced = mode == GaugeMode::NaiveCoulomb ? Gauge::Coulomb : Gauge::Dipole;
  if (mode == GaugeMode::Correct) return requested.value_or(Gauge::Dipole);
  if (requested && *requested != forced)
    throw ContractViolation(to_string(mode) + " evaluates only in the " + to_string(forced) + " gauge");
  return forced;
}

Operator channel_operator(const DephasingChannel& ch, const RabiParams& p, Gauge g) {
  p.validate();
  const int N = resolved_cutoff(p);
  Mat a = annihilation(N).matrix();
  Mat id = Mat::Identity(N, N);

  if (ch.target == Target::Exciton) throw ContractViolation("exciton channel is not defined for the Rabi model");

  Mat O;
  switch (ch.mode) {
    case GaugeMode::Correct:
      if (ch.target == Target::Qubit) {
        if (g == Gauge::Dipole) {
          O = kron(sz(), id);
        } else {
          auto xeig = field_quadrature(N);
          Vec c(N), s(N);
          for (int i = 0; i < N; ++i) {
            c(i) = std::cos(2.0 * p.eta * xeig.values(i));
            s(i) = std::sin(2.0 * p.eta * xeig.values(i));
          }
          O = kron(sz(), xeig.vectors * c.asDiagonal() * xeig.vectors.adjoint()) +
              kron(sy(), xeig.vectors * s.asDiagonal() * xeig.vectors.adjoint());
        }
      } else {
        Mat aa = kron(Mat::Identity(2, 2), a);
        if (g == Gauge::Dipole) aa += I * p.eta * kron(sx(), id);
        O = aa.adjoint() * aa;
      }
      break;
    case GaugeMode::NaiveCoulomb:
      if (ch.target != Target::Qubit || g != Gauge::Coulomb)
        throw ContractViolation("naive_coulomb is the bare qubit operator in the Coulomb gauge");
      O = kron(sz(), id);
      break;
    case GaugeMode::NaiveDipole:
      if (ch.target != Target::Cavity || g != Gauge::Dipole)
        throw ContractViolation("naive_dipole is the bare photon number in the dipole gauge");
      O = kron(Mat::Identity(2, 2), a.adjoint() * a);
      break;
  }
  return Operator(rabi_space(N), 0.5 * (O + O.adjoint()), true);
}

int LabeledSpectrum::index(const std::string& label) const {
  for (const auto& [name, idx] : labels)
    if (name == label) return idx;
  throw InvalidArgument("unresolved label '" + label + "'");
}

const std::vector<std::string> LabeledSpectrum::label_names() const {
  std::vector<std::string> out;
  for (const auto& l : labels) out.push_back(l.first);
  return out;
}

std::vector<std::string> default_labels(int n_levels) {
  std::vector<std::string> out;
  if (n_levels < 1) return out;
  out.push_back("0");
  for (int n = 1; static_cast<int>(out.size()) < n_levels; ++n) {
    out.push_back(std::to_string(n) + "-");
    if (static_cast<int>(out.size()) < n_levels) out.push_back(std::to_string(n) + "+");
  }
  return out;
}

namespace {

int label_excitation(const std::string& l) { return std::stoi(l); }

// Parity sector of a label: 0 for even excitation number, 1 for odd.
int label_sector(const std::string& l) { return label_excitation(l) % 2; }

// Global index q*N + n with q = 0 for |e>, 1 for |g>.
int sector_of(int q, int n) {
  double parity = (q == 0 ? -1.0 : 1.0) * ((n % 2 == 0) ? 1.0 : -1.0);
  return parity > 0 ? 0 : 1;
}

}  // namespace

LabelTracker::LabelTracker(RabiParams base, int cutoff, Gauge g, int n_levels, TrackingOptions opt)
    : base_(base), N_(cutoff), gauge_(g), opt_(opt) {
  base_.validate();
  if (N_ < 2) throw InvalidArgument("invalid cutoff " + std::to_string(N_));
  if (n_levels < 1 || n_levels > 2 * N_) throw InvalidArgument("n_levels exceeds the space dimension");
  base_.cutoff = N_;
  field_x_ = field_quadrature(N_);

  sectors_.resize(2);
  for (int q = 0; q < 2; ++q)
    for (int n = 0; n < N_; ++n) sectors_[sector_of(q, n)].basis.push_back(q * N_ + n);

  auto labels = default_labels(n_levels);
  for (const auto& l : labels) {
    int n = label_excitation(l);
    if (n >= N_) throw InvalidArgument("label " + l + " needs a larger cutoff");
  }

  auto local = [&](int sec, int global) {
    const auto& b = sectors_[sec].basis;
    return static_cast<int>(std::find(b.begin(), b.end(), global) - b.begin());
  };

  // Seed from product states; a degenerate pair is resolved by the coupling it is about to feel.
  const double eg = -0.5 * base_.omega_q, ee = 0.5 * base_.omega_q;
  std::map<int, std::pair<Vec, Vec>> pair_seeds;
  for (const auto& l : labels) {
    int n = label_excitation(l);
    int sec = label_sector(l);
    auto& S = sectors_[sec];
    S.names.push_back(l);
    Eigen::Index d = static_cast<Eigen::Index>(S.basis.size());
    if (n == 0) {
      Vec v = Vec::Zero(d);
      v(local(sec, 1 * N_ + 0)) = 1.0;
      S.tracked.conservativeResize(d, S.tracked.cols() + 1);
      S.tracked.col(S.tracked.cols() - 1) = v;
      continue;
    }
    if (!pair_seeds.count(n)) {
      Vec vg = Vec::Zero(d), ve = Vec::Zero(d);
      vg(local(sec, 1 * N_ + n)) = 1.0;
      ve(local(sec, 0 * N_ + n - 1)) = 1.0;
      double Eg = n * base_.omega_c + eg, Ee = (n - 1) * base_.omega_c + ee;
      if (std::abs(Eg - Ee) > 1e-12) {
        pair_seeds[n] = Eg < Ee ? std::make_pair(vg, ve) : std::make_pair(ve, vg);
      } else {
        RabiParams ps = base_;
        ps.eta = 1e-6;
        Mat h = hamiltonian(ps.eta);
        Mat basis2(h.rows(), 2);
        basis2.setZero();
        basis2(1 * N_ + n, 0) = 1.0;
        basis2(0 * N_ + n - 1, 1) = 1.0;
        Mat h2 = basis2.adjoint() * h * basis2;
        auto e2 = hermitian_eig(Mat(0.5 * (h2 + h2.adjoint())));
        Vec lo = Vec::Zero(d), hi = Vec::Zero(d);
        lo(local(sec, 1 * N_ + n)) = e2.vectors(0, 0);
        lo(local(sec, 0 * N_ + n - 1)) = e2.vectors(1, 0);
        hi(local(sec, 1 * N_ + n)) = e2.vectors(0, 1);
        hi(local(sec, 0 * N_ + n - 1)) = e2.vectors(1, 1);
        pair_seeds[n] = {lo, hi};
      }
    }
    const Vec& v = l.back() == '-' ? pair_seeds[n].first : pair_seeds[n].second;
    S.tracked.conservativeResize(d, S.tracked.cols() + 1);
    S.tracked.col(S.tracked.cols() - 1) = v;
  }

  // eta = 0: diagonal sector Hamiltonians; the seeds replace their matching unit vectors.
  std::vector<Spectrum> eigs(2);
  std::vector<std::vector<int>> picks(2);
  Mat h0 = hamiltonian(0.0);
  for (int s = 0; s < 2; ++s) {
    auto& S = sectors_[s];
    Eigen::Index d = static_cast<Eigen::Index>(S.basis.size());
    Mat hs(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) hs(i, j) = h0(S.basis[i], S.basis[j]);
    eigs[s] = hermitian_eig(hs);
    std::vector<bool> taken(d, false);
    for (Eigen::Index c = 0; c < S.tracked.cols(); ++c) {
      int best = -1;
      double bo = -1;
      for (Eigen::Index j = 0; j < d; ++j) {
        if (taken[j]) continue;
        double o = std::abs(eigs[s].vectors.col(j).dot(S.tracked.col(c)));
        if (o > bo + 1e-12) {
          bo = o;
          best = static_cast<int>(j);
        }
      }
      taken[best] = true;
      picks[s].push_back(best);
      eigs[s].vectors.col(best) = S.tracked.col(c);
      eigs[s].values(best) = (S.tracked.col(c).adjoint() * hs * S.tracked.col(c))(0, 0).real();
    }
  }
  current_ = assemble(0.0, eigs, picks);
}

Mat LabelTracker::hamiltonian(double eta) const {
  RabiParams p = base_;
  p.eta = eta;
  return gauge_ == Gauge::Dipole ? dipole_matrix(p, N_) : coulomb_matrix(p, N_, field_x_);
}

bool LabelTracker::try_step(double eta_next, std::vector<Mat>& next, std::vector<std::vector<int>>& picks,
                            std::vector<Spectrum>& eigs) const {
  Mat h = hamiltonian(eta_next);
  next.assign(2, Mat());
  picks.assign(2, {});
  eigs.assign(2, Spectrum());
  for (int s = 0; s < 2; ++s) {
    const auto& S = sectors_[s];
    Eigen::Index d = static_cast<Eigen::Index>(S.basis.size());
    Mat hs(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) hs(i, j) = h(S.basis[i], S.basis[j]);
    eigs[s] = hermitian_eig(hs);
    if (S.tracked.cols() == 0) continue;
    Eigen::MatrixXd ov = (S.tracked.adjoint() * eigs[s].vectors).cwiseAbs();
    next[s].resize(d, S.tracked.cols());
    std::vector<bool> taken(d, false);
    for (Eigen::Index r = 0; r < ov.rows(); ++r) {
      Eigen::Index best = 0;
      double b1 = -1, b2 = -1;
      for (Eigen::Index c = 0; c < ov.cols(); ++c) {
        double o = ov(r, c);
        if (o > b1) {
          b2 = b1;
          b1 = o;
          best = c;
        } else if (o > b2) {
          b2 = o;
        }
      }
      if (b1 < opt_.min_overlap || b1 - b2 < opt_.ambiguity || taken[best]) return false;
      taken[best] = true;
      picks[s].push_back(static_cast<int>(best));
      next[s].col(r) = eigs[s].vectors.col(best);
    }
  }
  return true;
}

LabeledSpectrum LabelTracker::assemble(double eta, const std::vector<Spectrum>& eigs,
                                       const std::vector<std::vector<int>>& picks) const {
  struct Entry {
    double e;
    int sector;
    int col;
  };
  std::vector<Entry> all;
  for (int s = 0; s < 2; ++s)
    for (Eigen::Index c = 0; c < eigs[s].values.size(); ++c) all.push_back({eigs[s].values(c), s, static_cast<int>(c)});
  std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.e < b.e; });

  LabeledSpectrum out;
  out.gauge = gauge_;
  out.cutoff = N_;
  const int D = 2 * N_;
  out.energies.resize(D);
  out.states = Mat::Zero(D, D);
  std::map<std::pair<int, int>, int> where;
  for (int i = 0; i < D; ++i) {
    const auto& en = all[i];
    out.energies(i) = en.e;
    const auto& S = sectors_[en.sector];
    for (size_t k = 0; k < S.basis.size(); ++k) out.states(S.basis[k], i) = eigs[en.sector].vectors(k, en.col);
    where[{en.sector, en.col}] = i;
  }
  fix_phases(out.states);
  (void)eta;
  // report labels in product-state order
  std::vector<std::pair<std::string, int>> labs;
  for (int s = 0; s < 2; ++s)
    for (size_t r = 0; r < picks[s].size(); ++r) labs.push_back({sectors_[s].names[r], where.at({s, picks[s][r]})});
  auto order = default_labels(static_cast<int>(labs.size()));
  for (const auto& name : order)
    for (const auto& l : labs)
      if (l.first == name) out.labels.push_back(l);
  return out;
}

LabeledSpectrum LabelTracker::advance_to(double eta) {
  if (eta < eta_ - 1e-15) throw InvalidArgument("LabelTracker only moves to larger eta");
  double h = opt_.max_step;
  while (eta_ < eta) {
    double step = std::min(h, eta - eta_);
    double target = (eta - eta_ - step) < 1e-14 ? eta : eta_ + step;
    std::vector<Mat> next;
    std::vector<std::vector<int>> picks;
    std::vector<Spectrum> eigs;
    if (try_step(target, next, picks, eigs)) {
      for (int s = 0; s < 2; ++s) {
        if (sectors_[s].tracked.cols() == 0) continue;
        Eigen::MatrixXd ov = (sectors_[s].tracked.adjoint() * next[s]).cwiseAbs();
        min_overlap_seen_ = std::min(min_overlap_seen_, ov.diagonal().minCoeff());
        sectors_[s].tracked = next[s];
      }
      eta_ = target;
      current_ = assemble(eta_, eigs, picks);
      h = std::min(opt_.max_step, 2 * h);
    } else {
      h *= 0.5;
      if (h < opt_.min_step)
        throw DegenerateTrackingError("label tracking is ambiguous near eta = " + std::to_string(eta_));
    }
  }
  return current_;
}

double cutoff_drift(const RabiParams& p, Gauge g, int n_levels) {
  const int N = resolved_cutoff(p);
  RVec e1 = low_levels(p, g, N, n_levels);
  RVec e2 = low_levels(p, g, N + kConvergenceExtra, n_levels);
  double d = 0;
  for (Eigen::Index i = 0; i < e1.size(); ++i) d = std::max(d, std::abs(e1(i) - e2(i)) / std::max(1.0, std::abs(e2(i))));
  return d;
}

LabeledSpectrum label_states(const RabiParams& p, int n_levels, Gauge g, bool throw_on_drift,
                             const TrackingOptions& opt) {
  p.validate();
  const int N = resolved_cutoff(p);
  if (n_levels > 2 * N) throw InvalidArgument("n_levels exceeds the space dimension");
  LabelTracker tr(p, N, g, n_levels, opt);
  auto s = tr.advance_to(p.eta);
  s.drift = cutoff_drift(p, g, n_levels);
  s.converged = s.drift < kConvergenceTol;
  if (!s.converged && throw_on_drift)
    throw ConvergenceError("cutoff " + std::to_string(N) + " not converged at eta = " + std::to_string(p.eta) +
                           " (relative drift " + std::to_string(s.drift) + ")");
  return s;
}

double transition_dephasing_rate(const LabeledSpectrum& s, const Operator& O, double gamma0, const std::string& j,
                                 const std::string& k) {
  if (O.dim() != s.states.rows()) throw ContractViolation("channel operator does not match the spectrum");
  Vec vj = s.states.col(s.index(j));
  Vec vk = s.states.col(s.index(k));
  double oj = (vj.adjoint() * O.matrix() * vj)(0, 0).real();
  double ok = (vk.adjoint() * O.matrix() * vk)(0, 0).real();
  return 0.5 * gamma0 * (oj - ok) * (oj - ok);
}

namespace {

int levels_for(const std::vector<std::string>& names) {
  auto all = default_labels(64);
  int need = 1;
  for (const auto& n : names) {
    auto it = std::find(all.begin(), all.end(), n);
    if (it == all.end()) throw InvalidArgument("unknown label '" + n + "'");
    need = std::max(need, static_cast<int>(it - all.begin()) + 1);
  }
  return need;
}

}  // namespace

double transition_dephasing_rate(const RabiParams& p, const DephasingChannel& ch,
                                 const std::pair<std::string, std::string>& transition, std::optional<Gauge> gauge) {
  Gauge g = evaluation_gauge(ch.mode, gauge);
  int n = std::max(levels_for({transition.first, transition.second}), 3);
  RabiParams q = p;
  q.cutoff = resolved_cutoff(p);
  auto s = label_states(q, n, g);
  return transition_dephasing_rate(s, channel_operator(ch, q, g), ch.gamma0, transition.first, transition.second);
}

std::vector<RabiRateRow> rate_sweep(const std::vector<RabiParams>& grid, const DephasingChannel& ch,
                                    const std::vector<std::pair<std::string, std::string>>& transitions,
                                    std::optional<Gauge> gauge) {
  if (grid.empty()) throw InvalidArgument("rate_sweep: empty grid");
  if (transitions.empty()) throw InvalidArgument("rate_sweep: no transitions");
  Gauge g = evaluation_gauge(ch.mode, gauge);
  std::vector<std::string> names;
  for (const auto& t : transitions) {
    names.push_back(t.first);
    names.push_back(t.second);
  }
  const int n_levels = std::max(levels_for(names), 3);

  std::map<double, std::vector<RabiParams>> groups;
  for (const auto& p : grid) {
    p.validate();
    groups[p.omega_q].push_back(p);
  }

  std::vector<RabiRateRow> rows;
  for (auto& [wq, pts] : groups) {
    std::stable_sort(pts.begin(), pts.end(), [](const RabiParams& a, const RabiParams& b) { return a.eta < b.eta; });
    int N = 0;
    for (const auto& p : pts) N = std::max(N, resolved_cutoff(p));
    LabelTracker tr(pts.front(), N, g, n_levels);
    double last_eta = -1.0;
    for (const auto& p0 : pts) {
      if (p0.eta == last_eta) continue;
      last_eta = p0.eta;
      RabiParams p = p0;
      p.cutoff = N;
      try {
        auto s = tr.advance_to(p.eta);
        double drift = cutoff_drift(p, g, n_levels);
        Operator O = channel_operator(ch, p, g);
        for (const auto& t : transitions) {
          double r = transition_dephasing_rate(s, O, 1.0, t.first, t.second);
          rows.push_back({p.eta, p.detuning(), t.first + "," + t.second, r, ch.mode, g, N, drift < kConvergenceTol});
        }
      } catch (const Error& e) {
        throw Error("eta = " + std::to_string(p.eta) + ", detuning = " + std::to_string(p.detuning()) + ": " + e.what());
      }
    }
  }
  return rows;
}

}  // namespace dephase

#include "dephase/hopfield.hpp"

#include <algorithm>
#include <cmath>

#include "dephase/errors.hpp"

namespace dephase {

namespace {
const cplx I(0, 1);
const Eigen::Vector4d kEta(1, 1, -1, -1);

Vec4 swap_conj(const Vec4& v) { return Vec4(std::conj(v(2)), std::conj(v(3)), std::conj(v(0)), std::conj(v(1))); }

cplx eta_dot(const Vec4& u, const Vec4& v) {
  cplx s = 0;
  for (int i = 0; i < 4; ++i) s += kEta(i) * u(i) * std::conj(v(i));
  return s;
}

HopfieldCoeffs coeffs_from(const Mat4& Winv, int mu) {
  return {Winv(0, mu), -Winv(0, 2 + mu), Winv(1, mu), -Winv(1, 2 + mu)};
}

// Same phase rule as eigenvectors: largest |coefficient| real positive.
void fix_polariton_phase(HopfieldCoeffs& c, Vec4& w) {
  std::array<cplx, 4> v{c.Ua, c.Va, c.Ub, c.Vb};
  int imax = 0;
  double best = -1;
  for (int i = 0; i < 4; ++i) {
    double m = std::abs(v[i]);
    if (m > best * (1.0 + 1e-9)) {
      best = m;
      imax = i;
    }
  }
  if (best <= 0) return;
  // P -> e^{i th} P sends U -> U e^{-i th}, V -> V e^{i th}
  double th = (imax == 0 || imax == 2) ? std::arg(v[imax]) : -std::arg(v[imax]);
  cplx eu = std::exp(-I * th), ev = std::exp(I * th);
  c.Ua *= eu;
  c.Ub *= eu;
  c.Va *= ev;
  c.Vb *= ev;
  w *= std::exp(I * th);
}

}  // namespace

void HopfieldParams::validate() const {
  if (!(omega_c > 0) || !(omega_x > 0) || !(lambda >= 0))
    throw InvalidArgument("HopfieldParams: need omega_c > 0, omega_x > 0, lambda >= 0");
}

HopfieldParams hopfield_params(double detuning, double lambda) {
  HopfieldParams p;
  p.omega_x = 1.0 + detuning;
  p.lambda = lambda;
  return p;
}

Mat4 hopfield_quadratic_form(const HopfieldParams& p, Gauge g) {
  p.validate();
  const double wc = p.omega_c, wx = p.omega_x, l = p.lambda;
  Eigen::Matrix2cd A, B;
  if (g == Gauge::Dipole) {
    A << wc, I * l * wc, -I * l * wc, wx + 2 * wc * l * l;
    B << 0, I * l * wc, I * l * wc, 2 * wc * l * l;
  } else {
    const double D = wx * l * l;
    A << wc + 2 * D, I * wx * l, -I * wx * l, wx;
    B << 2 * D, -I * wx * l, -I * wx * l, 0;
  }
  Mat4 M;
  M << A, B, B.conjugate(), A.conjugate();
  return M;
}

PolaritonDecomposition symplectic_diagonalize(const HopfieldParams& p, Gauge g) {
  Mat4 M = hopfield_quadratic_form(p, g);
  Mat4 K = M.transpose() * kEta.cast<cplx>().asDiagonal();
  Eigen::ComplexEigenSolver<Mat4> es(K);
  if (es.info() != Eigen::Success) throw Error("symplectic_diagonalize: eigensolver failed");

  for (int i = 0; i < 4; ++i) {
    cplx ev = es.eigenvalues()(i);
    double om2 = (ev * ev).real();
    if (om2 < -1e-12 || std::abs(ev.imag()) > 1e-6 * std::max(1.0, std::abs(ev)))
      throw InstabilityError("Hopfield spectrum unstable at lambda = " + std::to_string(p.lambda), p.lambda, om2);
  }

  struct Mode {
    double omega;
    Vec4 w;
  };
  std::vector<Mode> pos;
  for (int i = 0; i < 4; ++i) {
    Vec4 v = es.eigenvectors().col(i);
    double n = eta_dot(v, v).real();
    if (n > 1e-12) pos.push_back({es.eigenvalues()(i).real(), v / std::sqrt(n)});
  }
  if (pos.size() != 2) {
    // degenerate +/- pairs can come back mixed; recover positive-norm vectors from each eigenspace
    pos.clear();
    for (int i = 0; i < 4; ++i) {
      if (es.eigenvalues()(i).real() <= 0) continue;
      pos.push_back({es.eigenvalues()(i).real(), es.eigenvectors().col(i)});
    }
    if (pos.size() != 2) throw InstabilityError("Hopfield: no positive-norm mode pair", p.lambda, 0.0);
  }
  std::sort(pos.begin(), pos.end(), [](const Mode& a, const Mode& b) { return a.omega < b.omega; });

  const bool degenerate = std::abs(pos[0].omega - pos[1].omega) < 1e-9;
  if (degenerate) {
    // eta-orthonormalize, then split by matter content; mu = 1 takes the matter-dominated branch
    Vec4 u = pos[0].w / std::sqrt(eta_dot(pos[0].w, pos[0].w).real());
    Vec4 v = pos[1].w - eta_dot(pos[1].w, u) * u;
    v /= std::sqrt(eta_dot(v, v).real());
    Eigen::Matrix2cd G;
    auto mw = [](const Vec4& x, const Vec4& y) { return std::conj(x(1)) * y(1) - std::conj(x(3)) * y(3); };
    G << mw(u, u), mw(u, v), mw(v, u), mw(v, v);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> ge(G);
    Vec4 hi = ge.eigenvectors()(0, 1) * u + ge.eigenvectors()(1, 1) * v;
    Vec4 lo = ge.eigenvectors()(0, 0) * u + ge.eigenvectors()(1, 0) * v;
    pos[0].w = hi / std::sqrt(eta_dot(hi, hi).real());
    pos[1].w = lo / std::sqrt(eta_dot(lo, lo).real());
  }

  Mat4 W;
  for (int mu = 0; mu < 2; ++mu) {
    W.row(mu) = pos[mu].w.transpose();
    W.row(2 + mu) = swap_conj(pos[mu].w).transpose();
  }
  Mat4 Winv = W.inverse();

  PolaritonDecomposition dec;
  dec.gauge = g;
  dec.params = p;
  for (int mu = 0; mu < 2; ++mu) {
    dec.omega[mu] = pos[mu].omega;
    dec.coeffs[mu] = coeffs_from(Winv, mu);
    dec.w[mu] = pos[mu].w;
    fix_polariton_phase(dec.coeffs[mu], dec.w[mu]);
  }
  return dec;
}

PolaritonDecomposition gauge_map_coefficients(const PolaritonDecomposition& dec) {
  // Coulomb frame: a' = a - i l (b + b^dag), b' = b - i l (a + a^dag); dipole frame uses +i l.
  const double s = dec.gauge == Gauge::Coulomb ? -1.0 : 1.0;
  const double l = dec.params.lambda;
  PolaritonDecomposition out = dec;
  out.mapped = !dec.mapped;
  for (int mu = 0; mu < 2; ++mu) {
    const auto& c = dec.coeffs[mu];
    auto& o = out.coeffs[mu];
    // y + y^dag has U = U_y - conj(V_y), V = V_y - conj(U_y)
    cplx uxb = c.Ub - std::conj(c.Vb), vxb = c.Vb - std::conj(c.Ub);
    cplx uxa = c.Ua - std::conj(c.Va), vxa = c.Va - std::conj(c.Ua);
    o.Ua = c.Ua + s * I * l * uxb;
    o.Va = c.Va + s * I * l * vxb;
    o.Ub = c.Ub + s * I * l * uxa;
    o.Vb = c.Vb + s * I * l * vxa;
  }
  return out;
}

std::string to_string(RateLaw l) { return l == RateLaw::Squared ? "squared" : "linear"; }

RateLaw parse_rate_law(const std::string& s) {
  if (s == "squared") return RateLaw::Squared;
  if (s == "linear") return RateLaw::Linear;
  throw InvalidArgument("unknown rate law '" + s + "'");
}

PolaritonRates polariton_dephasing_rates(const HopfieldParams& p, double gamma0_c, double gamma0_x, GaugeMode mode,
                                         RateLaw law, Gauge assemble_from) {
  if (gamma0_c < 0 || gamma0_x < 0) throw InvalidArgument("bare rates must be >= 0");
  auto f = [law](double A) { return law == RateLaw::Squared ? A * A : A; };

  PolaritonDecomposition photon, matter;
  switch (mode) {
    case GaugeMode::Correct: {
      auto dec = symplectic_diagonalize(p, assemble_from);
      auto mapped = gauge_map_coefficients(dec);
      photon = assemble_from == Gauge::Coulomb ? dec : mapped;
      matter = assemble_from == Gauge::Coulomb ? mapped : dec;
      break;
    }
    case GaugeMode::NaiveCoulomb:
      photon = matter = symplectic_diagonalize(p, Gauge::Coulomb);
      break;
    case GaugeMode::NaiveDipole:
      photon = matter = symplectic_diagonalize(p, Gauge::Dipole);
      break;
  }

  PolaritonRates r;
  r.gamma0_c = gamma0_c;
  r.gamma0_x = gamma0_x;
  r.mode = mode;
  r.law = law;
  for (int mu = 0; mu < 2; ++mu) {
    r.omega[mu] = photon.omega[mu];
    r.rate[mu] = gamma0_c * f(photon.coeffs[mu].photon_weight()) + gamma0_x * f(matter.coeffs[mu].matter_weight());
  }
  return r;
}

std::vector<HopfieldRow> dispersion_sweep(const std::vector<HopfieldParams>& grid, double gamma0_c, double gamma0_x,
                                          const std::vector<GaugeMode>& modes, RateLaw law) {
  if (grid.empty()) throw InvalidArgument("dispersion_sweep: empty grid");
  const double norm = gamma0_x > 0 ? gamma0_x : (gamma0_c > 0 ? gamma0_c : 1.0);
  std::vector<HopfieldRow> rows;
  for (const auto& p : grid) {
    for (auto m : modes) {
      try {
        auto r = polariton_dephasing_rates(p, gamma0_c, gamma0_x, m, law);
        for (int mu = 0; mu < 2; ++mu) rows.push_back({p.lambda, p.detuning(), mu + 1, r.omega[mu], r.rate[mu] / norm, m});
      } catch (const InstabilityError& e) {
        throw InstabilityError("lambda = " + std::to_string(p.lambda) + ", detuning = " + std::to_string(p.detuning()) +
                                   ": " + e.what(),
                               e.lambda, e.omega_sq);
      }
    }
  }
  return rows;
}

HopfieldFockOps hopfield_fock_ops(int N) {
  Operator a1 = annihilation(N);
  Operator id = identity({{Factor::boson(N)}});
  return {tensor(id, a1).matrix(), tensor(a1, id).matrix()};
}

Operator build_hopfield_hamiltonian(const HopfieldParams& p, Gauge g, int N) {
  p.validate();
  auto ops = hopfield_fock_ops(N);
  const Mat& a = ops.a;
  const Mat& b = ops.b;
  Mat ad = a.adjoint(), bd = b.adjoint();
  const double wc = p.omega_c, wx = p.omega_x, l = p.lambda;
  Mat h = wc * ad * a + wx * bd * b;
  if (g == Gauge::Dipole) {
    Mat xb = b + bd;
    h += I * l * wc * (ad - a) * xb + wc * l * l * xb * xb;
  } else {
    Mat xa = a + ad;
    h += -I * wx * l * (bd - b) * xa + wx * l * l * xa * xa;
  }
  SpaceDescriptor s{{Factor::boson(N), Factor::boson(N)}};
  return Operator(s, 0.5 * (h + h.adjoint()), true);
}

Spectrum hopfield_fock_spectrum(const HopfieldParams& p, Gauge g, int N, int n) {
  Mat h = build_hopfield_hamiltonian(p, g, N).matrix();
  const int D = N * N;
  std::vector<int> blocks[2];
  for (int i = 0; i < D; ++i) blocks[((i / N) + (i % N)) % 2].push_back(i);
  struct Entry {
    double e;
    Vec v;
  };
  std::vector<Entry> all;
  for (const auto& bl : blocks) {
    const int d = static_cast<int>(bl.size());
    Mat hb(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) hb(i, j) = h(bl[i], bl[j]);
    auto s = hermitian_eig(hb);
    for (int c = 0; c < std::min(d, n); ++c) {
      Vec v = Vec::Zero(D);
      for (int i = 0; i < d; ++i) v(bl[i]) = s.vectors(i, c);
      all.push_back({s.values(c), v});
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const Entry& x, const Entry& y) { return x.e < y.e; });
  n = std::min<int>(n, static_cast<int>(all.size()));
  Spectrum out{RVec(n), Mat(D, n)};
  for (int i = 0; i < n; ++i) {
    out.values(i) = all[i].e;
    out.vectors.col(i) = all[i].v;
  }
  fix_phases(out.vectors);
  return out;
}

Mat apply_hopfield_gauge_unitary(const HopfieldParams& p, int N, const Mat& v, int s) {
  Mat a = annihilation(N).matrix();
  auto xe = hermitian_eig(Mat(a + a.adjoint()));
  const Mat& V = xe.vectors;
  const RVec& x = xe.values;
  Mat out(v.rows(), v.cols());
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    // column as Z(n_a, n_b); (V_b (x) V_a) acts as V Z V^T
    Mat Z = Eigen::Map<const Mat>(v.col(c).data(), N, N);
    Mat Y = V.adjoint() * Z * V.conjugate();
    for (int ia = 0; ia < N; ++ia)
      for (int ib = 0; ib < N; ++ib) Y(ia, ib) *= std::exp(-I * (s * p.lambda * x(ia) * x(ib)));
    Mat R = V * Y * V.transpose();
    out.col(c) = Eigen::Map<Vec>(R.data(), N * N);
  }
  return out;
}

Vec4 transport_polariton(const PolaritonDecomposition& dec, int mu) {
  // T^dagger a T = a - i l X_b, T^dagger a^dagger T = a^dagger + i l X_b (and a <-> b); the Coulomb side flips l.
  const double l = dec.gauge == Gauge::Dipole ? dec.params.lambda : -dec.params.lambda;
  const Vec4& w = dec.w[mu];
  return Vec4(w(0) + I * l * (w(3) - w(1)), w(1) + I * l * (w(2) - w(0)), w(2) + I * l * (w(3) - w(1)),
              w(3) + I * l * (w(2) - w(0)));
}

Mat polariton_operator(const PolaritonDecomposition& dec, int mu, int N) {
  auto ops = hopfield_fock_ops(N);
  const Vec4& w = dec.w[mu];
  return w(0) * ops.a + w(1) * ops.b + w(2) * ops.a.adjoint() + w(3) * ops.b.adjoint();
}

}  // namespace dephase

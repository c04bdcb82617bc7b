#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dephase/errors.hpp"
#include "dephase/lindblad.hpp"
#include "dephase/rabi.hpp"

using namespace dephase;

namespace {

Operator diag_op(std::vector<double> d) {
  const int n = static_cast<int>(d.size());
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return Operator({{Factor::boson(n)}}, m, true);
}

Mat plus_state(int n, int j, int k) {
  Vec v = Vec::Zero(n);
  v(j) = v(k) = 1 / std::sqrt(2.0);
  return v * v.adjoint();
}

}  // namespace

TEST_CASE("log fit recovers an exact exponential") {
  std::vector<double> t, m;
  for (int i = 0; i <= 50; ++i) {
    t.push_back(i * 0.1);
    m.push_back(0.5 * std::exp(-0.3 * t.back() / 2));
  }
  auto f = fit_log_decay(t, m, 0, 1e-6);
  CHECK(f.rate == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.points == 51);
  auto w = fit_log_decay(t, m, 1.0, 1e-6, true);
  CHECK(w.rate == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(w.points == 41);
  for (size_t i = 0; i < m.size(); ++i) m[i] *= 1 + 0.5 * std::sin(3 * t[i]);
  CHECK_THROWS_AS(fit_log_decay(t, m, 0, 1e-3), FitQualityError);
}

TEST_CASE("pure dephasing of a two-level system") {
  RVec e(2);
  e << 0, 1;
  Mat states = Mat::Identity(2, 2);
  const double s0 = 0.05;
  auto dis = build_dressed_dissipator(e, states, diag_op({1, -1}), low_frequency_density(s0), 2);
  CHECK(dis.pure_dephasing());
  CHECK(dis.offdiag.empty());
  auto tr = propagate(plus_state(2, 0, 1), e, dis, 40, 0, 50);
  CHECK(tr.contracts.ok());
  CHECK(tr.contracts.population_checked);
  auto f = extract_decay_rate(tr, 0, 1);
  CHECK(f.rate == doctest::Approx(4 * s0).epsilon(1e-6));
}

TEST_CASE("off-diagonal terms follow the spectral density") {
  RVec e(3);
  e << 0, 1, 2;
  Mat states = Mat::Identity(3, 3);
  Mat o = Mat::Zero(3, 3);
  o(0, 1) = o(1, 0) = 1;
  o(1, 2) = o(2, 1) = 1;
  Operator O({{Factor::boson(3)}}, o, true);
  auto S = [](double w) { return w > 0 ? 0.02 : 0.01; };
  auto dis = build_dressed_dissipator(e, states, O, S, 3);
  CHECK_FALSE(dis.pure_dephasing());
  // 0->1 and 1->2 share a frequency, so both directions merge
  CHECK(dis.warnings.size() == 2);
  for (const auto& t : dis.offdiag) CHECK(t.gamma == doctest::Approx(t.omega > 0 ? 0.02 : 0.01));
  Mat rho0 = Mat::Zero(3, 3);
  rho0(1, 1) = 1;
  auto tr = propagate(rho0, e, dis, 50, 0, 100);
  CHECK(tr.contracts.ok());
  CHECK_FALSE(tr.contracts.population_checked);
  CHECK(std::abs(tr.rho.back().trace() - 1.0) < 1e-8);
  CHECK(tr.rho.back()(1, 1).real() < 0.5);
}

TEST_CASE("an unstable step is caught by the contracts") {
  RVec e(2);
  e << 0, 1;
  auto dis = build_dressed_dissipator(e, Mat::Identity(2, 2), diag_op({1, -1}), low_frequency_density(1.0), 2);
  auto tr = propagate(plus_state(2, 0, 1), e, dis, 20, 2.0, 1);
  CHECK_FALSE(tr.contracts.ok());
  CHECK(tr.contracts.min_eigenvalue < kPositivityTol);
}

TEST_CASE("default step scales with the spread of energies") {
  RVec e(3);
  e << 0, 2, 5;
  CHECK(default_step(e) == doctest::Approx(0.002));
}

TEST_CASE("oscillator Fock-state dephasing") {
  auto rep = oscillator_dephasing_check(1.0, 0.1);
  CHECK(rep.pass);
  CHECK(rep.contracts.ok());
  CHECK(rep.rows.size() == 15);  // n >= m, diagonal rows track populations
  for (const auto& r : rep.rows) {
    CAPTURE(r.n);
    CAPTURE(r.m);
    CHECK(r.expected == doctest::Approx(0.05 * (r.n - r.m) * (r.n - r.m)));
    CHECK(std::abs(r.measured - r.expected) <= 1e-6 * r.expected);
  }
}

TEST_CASE("dressed Rabi coherence decays at the analytic rate") {
  auto p = rabi_params(-3e-3, 0.3);
  auto s = label_states(p, 8);
  DephasingChannel ch;
  ch.gamma0 = 0.01;
  auto O = channel_operator(ch, p, Gauge::Dipole);
  auto dis = build_dressed_dissipator(s, O, [&](double w) { return ch.density(w); }, 8);
  int j = s.index("1-"), k = s.index("0");
  auto tr = propagate(plus_state(8, j, k), s.energies.head(8), dis, 300, 0, 400);
  CHECK(tr.contracts.ok());
  double analytic = transition_dephasing_rate(s, O, ch.gamma0, "1-", "0");
  CHECK(extract_decay_rate(tr, j, k).rate == doctest::Approx(analytic).epsilon(2e-3));
}

TEST_CASE("contract violations on bad inputs") {
  RVec e(2);
  e << 0, 1;
  auto dis = build_dressed_dissipator(e, Mat::Identity(2, 2), diag_op({1, -1}), low_frequency_density(0.1), 2);
  CHECK_THROWS_AS(propagate(Mat::Identity(3, 3), e, dis, 1, 0), ContractViolation);
  CHECK_THROWS_AS(build_dressed_dissipator(e, Mat::Identity(2, 2), diag_op({1, -1}), low_frequency_density(-1), 2),
                  InvalidArgument);
  Mat pop = Mat::Zero(2, 2);
  pop(0, 0) = 1;
  auto tr = propagate(pop, e, dis, 1, 0, 10);
  CHECK_THROWS_AS(extract_decay_rate(tr, 0, 1), ContractViolation);
}

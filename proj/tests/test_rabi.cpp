#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dephase/errors.hpp"
#include "dephase/rabi.hpp"

using namespace dephase;

namespace {

constexpr double kDelta = -3e-3;

double rate(double eta, GaugeMode mode, const char* j, Target t = Target::Qubit,
            std::optional<Gauge> g = std::nullopt) {
  DephasingChannel ch;
  ch.target = t;
  ch.mode = mode;
  return transition_dephasing_rate(rabi_params(kDelta, eta), ch, {j, "0"}, g);
}

// lower-block comparison; the last Fock levels carry truncation error
double block_diff(const Mat& a, const Mat& b, int N) {
  double m = 0;
  for (int q = 0; q < 2; ++q)
    for (int r = 0; r < 2; ++r)
      m = std::max(m, (a.block(q * N, r * N, N / 2, N / 2) - b.block(q * N, r * N, N / 2, N / 2)).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

TEST_CASE("parameters validate") {
  CHECK_THROWS_AS(rabi_params(0, -0.1).validate(), InvalidArgument);
  CHECK_THROWS_AS(rabi_params(-2, 0.1).validate(), InvalidArgument);
  CHECK_THROWS_AS(rabi_params(0, 0.1, 1).validate(), InvalidArgument);
  CHECK(rabi_params(kDelta, 0.2).detuning() == doctest::Approx(kDelta));
  CHECK(default_cutoff(0) == 20);
  CHECK(default_cutoff(1.5) == 61);
  CHECK(resolved_cutoff(rabi_params(0, 1.5, 9)) == 9);
}

TEST_CASE("gauge string round trips") {
  for (auto m : {GaugeMode::Correct, GaugeMode::NaiveCoulomb, GaugeMode::NaiveDipole})
    CHECK(parse_gauge_mode(to_string(m)) == m);
  CHECK(parse_gauge("coulomb") == Gauge::Coulomb);
  CHECK_THROWS_AS(parse_target("phonon"), InvalidArgument);
}

TEST_CASE("spectra agree between gauges up to the constant shift") {
  for (double eta : {0.0, 0.3, 1.0, 1.5}) {
    auto p = rabi_params(kDelta, eta);
    auto ec = hermitian_eig(build_coulomb_hamiltonian(p)).values;
    auto ed = hermitian_eig(build_dipole_hamiltonian(p)).values;
    CAPTURE(eta);
    CHECK(std::abs(dipole_constant_shift(p) - eta * eta) < 1e-15);
    for (int i = 0; i < 12; ++i) CHECK(std::abs(ec(i) - ed(i) - eta * eta) < 1e-8 * std::max(1.0, std::abs(ec(i))));
  }
}

TEST_CASE("gauge unitary maps the Coulomb Hamiltonian onto the dipole one") {
  auto p = rabi_params(kDelta, 0.3, 40);
  Mat T = gauge_unitary(p).matrix();
  Mat lhs = T * build_coulomb_hamiltonian(p).matrix() * T.adjoint();
  Mat rhs = build_dipole_hamiltonian(p).matrix() + dipole_constant_shift(p) * Mat::Identity(80, 80);
  CHECK(block_diff(lhs, rhs, 40) < 1e-10);
}

TEST_CASE("correct channel operators are conjugates of the bare ones") {
  auto p = rabi_params(kDelta, 0.3, 40);
  Mat T = gauge_unitary(p).matrix();
  DephasingChannel q;
  Mat sz = channel_operator(q, p, Gauge::Dipole).matrix();
  Mat szc = channel_operator(q, p, Gauge::Coulomb).matrix();
  CHECK(block_diff(szc, T.adjoint() * sz * T, 40) < 1e-10);

  DephasingChannel c;
  c.target = Target::Cavity;
  Mat nc = channel_operator(c, p, Gauge::Coulomb).matrix();
  Mat nd = channel_operator(c, p, Gauge::Dipole).matrix();
  CHECK(block_diff(nd, T * nc * T.adjoint(), 40) < 1e-10);
  // a_D^dagger a_D = a^dagger a + eta^2 + i eta sigma_x (a^dagger - a)
  CHECK(std::abs(nd(0, 0) - 0.09) < 1e-14);
}

TEST_CASE("naive modes are tied to one gauge") {
  auto p = rabi_params(kDelta, 0.3);
  DephasingChannel ch;
  ch.mode = GaugeMode::NaiveCoulomb;
  CHECK_THROWS_AS(channel_operator(ch, p, Gauge::Dipole), ContractViolation);
  ch.target = Target::Cavity;
  CHECK_THROWS_AS(channel_operator(ch, p, Gauge::Coulomb), ContractViolation);
  ch.mode = GaugeMode::NaiveDipole;
  CHECK_NOTHROW(channel_operator(ch, p, Gauge::Dipole));
  CHECK_THROWS_AS(evaluation_gauge(GaugeMode::NaiveDipole, Gauge::Coulomb), ContractViolation);
  ch.target = Target::Exciton;
  CHECK_THROWS_AS(channel_operator(ch, p, Gauge::Dipole), ContractViolation);
}

TEST_CASE("decoupled labels") {
  auto s = label_states(rabi_params(kDelta, 0.0), 4);
  const int N = s.cutoff;
  // q = 0 is the excited qubit state
  CHECK(std::abs(std::abs(s.states(N, s.index("0"))) - 1) < 1e-12);
  CHECK(std::abs(std::abs(s.states(0, s.index("1-"))) - 1) < 1e-12);
  CHECK(std::abs(std::abs(s.states(N + 1, s.index("1+"))) - 1) < 1e-12);
  CHECK(rate(0.0, GaugeMode::Correct, "1-") == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(rate(0.0, GaugeMode::Correct, "1+")) < 1e-12);
}

TEST_CASE("frozen qubit-channel rates") {
  // from an independent dense-diagonalization script, sorted-index labels checked by hand
  struct Row {
    double eta, minus, plus;
  };
  const Row rows[] = {{0.01, 0.653782, 0.366807}, {0.1, 0.465173, 0.53611},        {0.3, 0.358514, 0.666838},
                      {0.5, 0.257456, 0.813881},  {0.8, 0.110245, 0.453398},       {1.0, 0.0399828, 0.145537},
                      {1.5, 0.000361242, 0.00159967}};
  for (const auto& r : rows) {
    CAPTURE(r.eta);
    CHECK(rate(r.eta, GaugeMode::Correct, "1-") == doctest::Approx(r.minus).epsilon(2e-5));
    CHECK(rate(r.eta, GaugeMode::Correct, "1+") == doctest::Approx(r.plus).epsilon(2e-5));
  }
  CHECK(rate(0.3, GaugeMode::NaiveCoulomb, "1-") == doctest::Approx(1.01343).epsilon(2e-5));
  CHECK(rate(1.0, GaugeMode::NaiveCoulomb, "1-") == doctest::Approx(1.81327).epsilon(2e-5));
}

TEST_CASE("correct rates do not depend on the evaluation gauge") {
  for (double eta : {0.2, 0.7}) {
    for (Target t : {Target::Qubit, Target::Cavity}) {
      double c = rate(eta, GaugeMode::Correct, "1+", t, Gauge::Coulomb);
      double d = rate(eta, GaugeMode::Correct, "1+", t, Gauge::Dipole);
      CHECK(std::abs(c - d) < 1e-8);
    }
  }
}

TEST_CASE("tracking keeps overlaps high and labels move to higher eigen-indices") {
  auto p = rabi_params(kDelta, 0.0);
  LabelTracker tr(p, default_cutoff(1.0), Gauge::Dipole, 6);
  auto s = tr.advance_to(1.0);
  CHECK(tr.min_adjacent_overlap() > 0.9);
  CHECK(s.index("0") == 0);
  CHECK(s.index("1+") == 3);  // crossed by 2- on the way
  CHECK_THROWS_AS(tr.advance_to(0.5), InvalidArgument);
}

TEST_CASE("a tiny cutoff is reported as not converged") {
  auto p = rabi_params(kDelta, 1.0, 4);
  CHECK(cutoff_drift(p, Gauge::Dipole, 3) > 1e-8);
  CHECK_THROWS_AS(label_states(p, 3), ConvergenceError);
  auto s = label_states(rabi_params(kDelta, 1.0), 3);
  CHECK(s.converged);
  CHECK(s.drift < kConvergenceTol);
}

TEST_CASE("rate sweep rows") {
  std::vector<RabiParams> grid;
  for (double eta : {0.0, 0.5, 1.0}) grid.push_back(rabi_params(kDelta, eta));
  DephasingChannel ch;
  auto rows = rate_sweep(grid, ch, {{"1-", "0"}, {"1+", "0"}});
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].transition == "1-,0");
  CHECK(rows[0].rate_over_gamma0 == doctest::Approx(2.0));
  CHECK(rows[5].rate_over_gamma0 == doctest::Approx(0.145537).epsilon(2e-5));
  for (const auto& r : rows) CHECK(r.converged);
  CHECK_THROWS_AS(rate_sweep({}, ch, {{"1-", "0"}}), InvalidArgument);
}

TEST_CASE("the two lowest transitions swap dephasing order near eta 0.055") {
  double lo = rate(0.05, GaugeMode::Correct, "1-") - rate(0.05, GaugeMode::Correct, "1+");
  double hi = rate(0.06, GaugeMode::Correct, "1-") - rate(0.06, GaugeMode::Correct, "1+");
  CHECK(lo > 0);
  CHECK(hi < 0);
}

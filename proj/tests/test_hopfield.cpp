#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dephase/errors.hpp"
#include "dephase/hopfield.hpp"

using namespace dephase;

TEST_CASE("parameters validate") {
  CHECK_THROWS_AS(hopfield_params(0, -1).validate(), InvalidArgument);
  CHECK_THROWS_AS(hopfield_params(-1.5, 0.1).validate(), InvalidArgument);
  CHECK(hopfield_params(0.2, 1).detuning() == doctest::Approx(0.2));
  CHECK(parse_rate_law("linear") == RateLaw::Linear);
}

TEST_CASE("frozen lower polariton frequencies at resonance") {
  // closed form sqrt(1 + lambda^2) - lambda at omega_x = omega_c
  for (double l : {0.5, 1.0, 2.0, 3.0}) {
    auto d = symplectic_diagonalize(hopfield_params(0, l), Gauge::Coulomb);
    CAPTURE(l);
    CHECK(std::abs(d.omega[0] - (std::sqrt(1 + l * l) - l)) < 1e-12);
    CHECK(std::abs(d.omega[1] - (std::sqrt(1 + l * l) + l)) < 1e-12);
  }
}

TEST_CASE("normalization and gauge-invariant frequencies") {
  for (double det : {-0.2, 0.0, 0.003, 0.2})
    for (double l : {0.0, 0.1, 0.5, 1.0, 2.0, 3.0}) {
      auto c = symplectic_diagonalize(hopfield_params(det, l), Gauge::Coulomb);
      auto d = symplectic_diagonalize(hopfield_params(det, l), Gauge::Dipole);
      CAPTURE(det);
      CAPTURE(l);
      for (int mu = 0; mu < 2; ++mu) {
        CHECK(std::abs(c.coeffs[mu].normalization() - 1) < 1e-10);
        CHECK(std::abs(d.coeffs[mu].normalization() - 1) < 1e-10);
        CHECK(std::abs(gauge_map_coefficients(c).coeffs[mu].normalization() - 1) < 1e-10);
        CHECK(std::abs(c.omega[mu] - d.omega[mu]) < 1e-9);
      }
    }
}

TEST_CASE("mapped coefficients equal the other gauge's own") {
  auto p = hopfield_params(0.1, 0.7);
  auto c = symplectic_diagonalize(p, Gauge::Coulomb);
  auto d = symplectic_diagonalize(p, Gauge::Dipole);
  auto cm = gauge_map_coefficients(c);
  CHECK(cm.gauge == Gauge::Coulomb);
  CHECK(cm.mapped);
  for (int mu = 0; mu < 2; ++mu) {
    CHECK(std::abs(std::abs(cm.coeffs[mu].Ub) - std::abs(d.coeffs[mu].Ub)) < 1e-10);
    CHECK(std::abs(std::abs(cm.coeffs[mu].Vb) - std::abs(d.coeffs[mu].Vb)) < 1e-10);
    CHECK(std::abs(std::abs(cm.coeffs[mu].Ua) - std::abs(d.coeffs[mu].Ua)) < 1e-10);
  }
}

TEST_CASE("decoupled limit") {
  for (double det : {-0.2, 0.0, 0.2}) {
    auto r = polariton_dephasing_rates(hopfield_params(det, 0), 0, 1.0, GaugeMode::Correct);
    CAPTURE(det);
    int matter = det < 0 ? 0 : (det > 0 ? 1 : 0);
    CHECK(std::abs(r.rate[matter] - 1.0) < 1e-12);
    CHECK(std::abs(r.rate[1 - matter]) < 1e-12);
  }
}

TEST_CASE("frozen correct rates at lambda 2") {
  const double want[] = {0.01825, 0.01393, 0.01112};
  const double det[] = {-0.2, 0.0, 0.2};
  for (int i = 0; i < 3; ++i) {
    auto r = polariton_dephasing_rates(hopfield_params(det[i], 2.0), 0, 1.0, GaugeMode::Correct);
    CHECK(r.rate[0] == doctest::Approx(want[i]).epsilon(1e-3));
    auto lin = polariton_dephasing_rates(hopfield_params(det[i], 2.0), 0, 1.0, GaugeMode::Correct, RateLaw::Linear);
    CHECK(std::abs(r.rate[0] - lin.rate[0] * lin.rate[0]) < 1e-14);
  }
}

TEST_CASE("naive rates invert the branch ordering") {
  auto p = hopfield_params(0.003, 1.0);
  auto c = polariton_dephasing_rates(p, 0, 1.0, GaugeMode::Correct);
  auto n = polariton_dephasing_rates(p, 0, 1.0, GaugeMode::NaiveCoulomb);
  CHECK(c.rate[0] < c.rate[1]);
  CHECK(n.rate[0] > n.rate[1]);
  CHECK(c.rate[0] == doctest::Approx(0.0429).epsilon(0.01));
}

TEST_CASE("assembly from either gauge agrees") {
  for (double l = 0; l <= 2.0; l += 0.25) {
    auto p = hopfield_params(0.05, l);
    auto a = polariton_dephasing_rates(p, 0.3, 1.0, GaugeMode::Correct, RateLaw::Squared, Gauge::Coulomb);
    auto b = polariton_dephasing_rates(p, 0.3, 1.0, GaugeMode::Correct, RateLaw::Squared, Gauge::Dipole);
    CHECK(std::abs(a.rate[0] - b.rate[0]) < 1e-9);
    CHECK(std::abs(a.rate[1] - b.rate[1]) < 1e-9);
  }
}

TEST_CASE("Fock oracle reproduces Hopfield coefficients") {
  const int N = 30;
  auto p = hopfield_params(0.0, 0.5);
  auto ops = hopfield_fock_ops(N);
  for (Gauge g : {Gauge::Coulomb, Gauge::Dipole}) {
    auto dec = symplectic_diagonalize(p, g);
    auto sp = hopfield_fock_spectrum(p, g, N, 6);
    Vec G = sp.vectors.col(0);
    for (int mu = 0; mu < 2; ++mu) {
      // the one-quantum state with gap Omega_mu
      int k = -1;
      for (int i = 1; i < 6; ++i)
        if (std::abs(sp.values(i) - sp.values(0) - dec.omega[mu]) < 1e-6) k = i;
      REQUIRE(k > 0);
      Vec M = sp.vectors.col(k);
      // y = sum_mu (U P_mu - V P_mu^dagger): U = <G|y|mu>, V = -<mu|y|G>
      cplx ua = G.dot(ops.a * M), va = -M.dot(ops.a * G), ub = G.dot(ops.b * M), vb = -M.dot(ops.b * G);
      const auto& h = dec.coeffs[mu];
      // rephasing the eigenvectors moves U by c and V by conj(c)
      cplx c = std::abs(h.Ua) > std::abs(h.Ub) ? ua / h.Ua : ub / h.Ub;
      CHECK(std::abs(std::abs(c) - 1) < 1e-8);
      CHECK(std::abs(ua - c * h.Ua) < 1e-8);
      CHECK(std::abs(ub - c * h.Ub) < 1e-8);
      CHECK(std::abs(va - std::conj(c) * h.Va) < 1e-8);
      CHECK(std::abs(vb - std::conj(c) * h.Vb) < 1e-8);
    }
  }
}

TEST_CASE("Fock spectra agree between gauges") {
  auto p = hopfield_params(0.1, 0.4);
  auto c = hopfield_fock_spectrum(p, Gauge::Coulomb, 24, 6);
  auto d = hopfield_fock_spectrum(p, Gauge::Dipole, 24, 6);
  for (int i = 0; i < 6; ++i) CHECK(std::abs((c.values(i) - c.values(0)) - (d.values(i) - d.values(0))) < 1e-7);
}

TEST_CASE("dispersion sweep normalization") {
  std::vector<HopfieldParams> grid{hopfield_params(0, 0), hopfield_params(0, 1)};
  auto rows = dispersion_sweep(grid, 0, 2.0, {GaugeMode::Correct});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].mu == 1);
  CHECK(rows[0].rate_over_gamma0 == doctest::Approx(1.0));
  CHECK(rows[2].omega == doctest::Approx(std::sqrt(2.0) - 1));
  CHECK_THROWS_AS(dispersion_sweep({}, 0, 1, {GaugeMode::Correct}), InvalidArgument);
}

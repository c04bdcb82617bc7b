#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dephase/errors.hpp"
#include "dephase/stochastic.hpp"

using namespace dephase;

namespace {

struct TwoLevel {
  RVec e = RVec(2);
  Mat O = Mat::Zero(2, 2);
  Vec psi = Vec::Constant(2, 1 / std::sqrt(2.0));
  TwoLevel() {
    e << 0, 1;
    O(0, 0) = 1;
    O(1, 1) = -1;
  }
};

StochasticOptions small() {
  StochasticOptions o;
  o.n_traj = 2000;
  o.t_final = 40;
  o.dt = 0.05;
  o.record_every = 40;
  o.seed = 99;
  return o;
}

}  // namespace

TEST_CASE("splitmix64 reference value") {
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(1) != splitmix64(2));
}

TEST_CASE("same seed gives identical ensembles regardless of workers") {
  TwoLevel s;
  auto o = small();
  auto a = stochastic_oracle(s.e, s.O, 0.01, s.psi, o);
  o.jobs = 3;
  auto b = stochastic_oracle(s.e, s.O, 0.01, s.psi, o);
  REQUIRE(a.rho.size() == b.rho.size());
  for (size_t i = 0; i < a.rho.size(); ++i) CHECK((a.rho[i] - b.rho[i]).norm() == 0.0);
  o.seed = 100;
  auto c = stochastic_oracle(s.e, s.O, 0.01, s.psi, o);
  CHECK((a.rho.back() - c.rho.back()).norm() > 0);
}

TEST_CASE("white-noise dephasing rate") {
  TwoLevel s;
  const double s0 = 0.01;
  auto r = stochastic_oracle(s.e, s.O, s0, s.psi, small());
  CHECK(r.max_norm_drift < 1e-10);
  REQUIRE(r.batches.size() == 20);
  CHECK(r.batches[0].size() == r.rho.size());
  CHECK(std::abs(r.rho.back().trace() - 1.0) < 1e-12);
  auto f = stochastic_decay_rate(r, 0, 1, 0, 0.2);
  // exact ensemble rate is 4 S0; allow five jackknife errors
  CHECK(f.std_error < 0.2 * 4 * s0);
  CHECK(std::abs(f.rate - 4 * s0) < 5 * f.std_error);
}

TEST_CASE("colored noise leaves the zero-frequency rate unchanged") {
  TwoLevel s;
  auto o = small();
  o.tau = 2.0;
  o.t_final = 80;
  const double s0 = 0.005;
  auto r = stochastic_oracle(s.e, s.O, s0, s.psi, o);
  auto f = stochastic_decay_rate(r, 0, 1, 20, 0.2);
  CHECK(std::abs(f.rate - 4 * s0) < 5 * f.std_error);
}

TEST_CASE("input checks") {
  TwoLevel s;
  auto o = small();
  o.n_traj = 50;
  CHECK_THROWS_AS(stochastic_oracle(s.e, s.O, 0.01, s.psi, o), InvalidArgument);
  o = small();
  CHECK_THROWS_AS(stochastic_oracle(s.e, s.O, -1, s.psi, o), InvalidArgument);
  CHECK_THROWS_AS(stochastic_oracle(s.e, Mat::Zero(3, 3), 0.01, s.psi, o), ContractViolation);
}

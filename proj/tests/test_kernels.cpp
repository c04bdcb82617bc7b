#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "dephase/kernels.hpp"

using namespace dephase::kernels;

namespace {

std::vector<cplx> random_vec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

double max_rel(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0, s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(b[i]));
  }
  return m / std::max(s, 1.0);
}

}  // namespace

TEST_CASE("active isa is one of the two paths") {
  std::string isa(active_isa());
  CHECK((isa == "avx2" || isa == "scalar"));
  if (!avx2_supported()) CHECK(isa == "scalar");
}

TEST_CASE("scalar cgemv against a direct sum") {
  std::mt19937_64 rng(7);
  const int n = 5;
  auto A = random_vec(n * n, rng), x = random_vec(n, rng);
  std::vector<cplx> y(n), ref(n);
  scalar::cgemv(A.data(), x.data(), y.data(), n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) ref[r] += A[c * n + r] * x[c];
  CHECK(max_rel(y, ref) < 1e-15);
}

TEST_CASE("avx2 cgemv matches scalar across sizes") {
  if (!avx2_supported()) return;
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 33; ++n) {
    auto A = random_vec(n * n, rng), x = random_vec(n, rng);
    std::vector<cplx> ys(n), yv(n);
    scalar::cgemv(A.data(), x.data(), ys.data(), n);
    avx2::cgemv(A.data(), x.data(), yv.data(), n);
    CAPTURE(n);
    CHECK(max_rel(yv, ys) < 1e-14);
  }
}

TEST_CASE("avx2 cmul matches scalar across sizes") {
  if (!avx2_supported()) return;
  std::mt19937_64 rng(13);
  for (int n = 1; n <= 33; ++n) {
    auto d = random_vec(n, rng), x = random_vec(n, rng);
    auto xs = x, xv = x;
    scalar::cmul(d.data(), xs.data(), n);
    avx2::cmul(d.data(), xv.data(), n);
    CAPTURE(n);
    CHECK(max_rel(xv, xs) < 1e-15);
  }
}

TEST_CASE("dispatch agrees with the reference") {
  std::mt19937_64 rng(17);
  const int n = 12;
  auto A = random_vec(n * n, rng), x = random_vec(n, rng);
  std::vector<cplx> y(n), ref(n);
  cgemv(A.data(), x.data(), y.data(), n);
  scalar::cgemv(A.data(), x.data(), ref.data(), n);
  CHECK(max_rel(y, ref) < 1e-14);
  auto x2 = x;
  cmul(A.data(), x.data(), n);
  scalar::cmul(A.data(), x2.data(), n);
  CHECK(max_rel(x, x2) < 1e-15);
}

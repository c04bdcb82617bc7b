#include "dephase/kernels.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define DEPHASE_X86 1
#endif

namespace dephase::kernels {

namespace scalar {

void cgemv(const cplx* A, const cplx* x, cplx* y, int n) {
  for (int i = 0; i < n; ++i) y[i] = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx xj = x[j];
    const cplx* col = A + static_cast<long>(j) * n;
    for (int i = 0; i < n; ++i) y[i] += col[i] * xj;
  }
}

void cmul(const cplx* d, cplx* x, int n) {
  for (int i = 0; i < n; ++i) x[i] *= d[i];
}

}  // namespace scalar

#ifdef DEPHASE_X86
namespace avx2 {

// Two interleaved complex doubles per register: [re0 im0 re1 im1].
__attribute__((target("avx2,fma"))) static inline __m256d cmul_pd(__m256d a, __m256d b) {
  __m256d ar = _mm256_movedup_pd(a);
  __m256d ai = _mm256_permute_pd(a, 0xF);
  __m256d bs = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bs));
}

__attribute__((target("avx2,fma"))) void cgemv(const cplx* A, const cplx* x, cplx* y, int n) {
  const int nv = n / 2;
  const auto* a = reinterpret_cast<const double*>(A);
  auto* yd = reinterpret_cast<double*>(y);
  for (int i = 0; i < n; ++i) y[i] = 0.0;
  for (int j = 0; j < n; ++j) {
    const __m256d xr = _mm256_set1_pd(x[j].real());
    const __m256d xi = _mm256_set1_pd(x[j].imag());
    const double* col = a + 2L * j * n;
    for (int v = 0; v < nv; ++v) {
      __m256d c = _mm256_loadu_pd(col + 4 * v);
      __m256d acc = _mm256_loadu_pd(yd + 4 * v);
      __m256d cs = _mm256_permute_pd(c, 0x5);
      __m256d prod = _mm256_fmaddsub_pd(c, xr, _mm256_mul_pd(cs, xi));
      _mm256_storeu_pd(yd + 4 * v, _mm256_add_pd(acc, prod));
    }
    if (n & 1) y[n - 1] += A[static_cast<long>(j) * n + n - 1] * x[j];
  }
}

__attribute__((target("avx2,fma"))) void cmul(const cplx* d, cplx* x, int n) {
  const int nv = n / 2;
  const auto* dd = reinterpret_cast<const double*>(d);
  auto* xd = reinterpret_cast<double*>(x);
  for (int v = 0; v < nv; ++v) {
    __m256d a = _mm256_loadu_pd(dd + 4 * v);
    __m256d b = _mm256_loadu_pd(xd + 4 * v);
    _mm256_storeu_pd(xd + 4 * v, cmul_pd(a, b));
  }
  if (n & 1) x[n - 1] *= d[n - 1];
}

}  // namespace avx2

bool avx2_supported() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#else
namespace avx2 {
void cgemv(const cplx* A, const cplx* x, cplx* y, int n) { scalar::cgemv(A, x, y, n); }
void cmul(const cplx* d, cplx* x, int n) { scalar::cmul(d, x, n); }
}  // namespace avx2

bool avx2_supported() { return false; }
#endif

namespace {

struct Dispatch {
  CgemvFn gemv = scalar::cgemv;
  CmulFn mul = scalar::cmul;
  std::string_view isa = "scalar";

  Dispatch() {
    const char* env = std::getenv("DEPHASE_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return;
    if (avx2_supported()) {
      gemv = avx2::cgemv;
      mul = avx2::cmul;
      isa = "avx2";
    }
  }
};

const Dispatch& dispatch() {
  static const Dispatch d;
  return d;
}

}  // namespace

std::string_view active_isa() { return dispatch().isa; }

void cgemv(const cplx* A, const cplx* x, cplx* y, int n) { dispatch().gemv(A, x, y, n); }
void cmul(const cplx* d, cplx* x, int n) { dispatch().mul(d, x, n); }

}  // namespace dephase::kernels

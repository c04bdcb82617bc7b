#pragma once

#include <complex>
#include <string_view>

namespace dephase::kernels {

using cplx = std::complex<double>;

// y = A x, A column-major n x n.
using CgemvFn = void (*)(const cplx* A, const cplx* x, cplx* y, int n);
// x[i] *= d[i]
using CmulFn = void (*)(const cplx* d, cplx* x, int n);

namespace scalar {
void cgemv(const cplx* A, const cplx* x, cplx* y, int n);
void cmul(const cplx* d, cplx* x, int n);
}  // namespace scalar

namespace avx2 {
void cgemv(const cplx* A, const cplx* x, cplx* y, int n);
void cmul(const cplx* d, cplx* x, int n);
}  // namespace avx2

bool avx2_supported();

// "avx2" or "scalar"; DEPHASE_SIMD=scalar in the environment forces the reference path.
std::string_view active_isa();

void cgemv(const cplx* A, const cplx* x, cplx* y, int n);
void cmul(const cplx* d, cplx* x, int n);

}  // namespace dephase::kernels

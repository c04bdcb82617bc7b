#include "dephase/fock.hpp"

#include <cmath>
#include <string>

#include "dephase/errors.hpp"

namespace dephase {

Factor Factor::boson(int cutoff) {
  if (cutoff < 2) throw InvalidArgument("invalid cutoff " + std::to_string(cutoff) + ", need N >= 2");
  return {Kind::Boson, cutoff};
}

int SpaceDescriptor::dim() const {
  int d = 1;
  for (const auto& f : factors) d *= f.dim;
  return d;
}

Operator::Operator(SpaceDescriptor space, Mat m, bool hermitian)
    : space_(std::move(space)), m_(std::move(m)), hermitian_(hermitian) {
  if (m_.rows() != m_.cols() || m_.rows() != space_.dim())
    throw ContractViolation("operator matrix does not match its space");
  if (hermitian_ && hermiticity_error(m_) > kHermitianTol)
    throw ContractViolation("operator flagged Hermitian is not");
}

Operator Operator::adjoint() const { return Operator(space_, m_.adjoint(), hermitian_); }

double hermiticity_error(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Operator annihilation(int N) {
  auto f = Factor::boson(N);
  Mat a = Mat::Zero(N, N);
  for (int n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator({{f}}, a);
}

Operator creation(int N) { return annihilation(N).adjoint(); }

Operator number(int N) {
  auto f = Factor::boson(N);
  Mat n = Mat::Zero(N, N);
  for (int k = 0; k < N; ++k) n(k, k) = k;
  return Operator({{f}}, n, true);
}

Operator identity(const SpaceDescriptor& s) { return Operator(s, Mat::Identity(s.dim(), s.dim()), true); }

Operator pauli(Axis axis) {
  // basis order (|e>, |g>) so that sigma_z = diag(+1, -1)
  Mat m(2, 2);
  const cplx I(0, 1);
  switch (axis) {
    case Axis::X: m << 0, 1, 1, 0; break;
    case Axis::Y: m << 0, -I, I, 0; break;
    case Axis::Z: m << 1, 0, 0, -1; break;
  }
  return Operator({{Factor::two_level()}}, m, true);
}

Operator tensor(const Operator& A, const Operator& B) {
  const Mat& a = A.matrix();
  const Mat& b = B.matrix();
  const Eigen::Index nb = b.rows();
  Mat k(a.rows() * nb, a.cols() * nb);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
  SpaceDescriptor s = A.space();
  s.factors.insert(s.factors.end(), B.space().factors.begin(), B.space().factors.end());
  return Operator(std::move(s), std::move(k), A.hermitian() && B.hermitian());
}

namespace {
void require_same_space(const Operator& A, const Operator& B) {
  if (!(A.space() == B.space())) throw ContractViolation("operators act on different spaces");
}
}  // namespace

Operator operator*(const Operator& A, const Operator& B) {
  require_same_space(A, B);
  return Operator(A.space(), A.matrix() * B.matrix());
}

Operator operator+(const Operator& A, const Operator& B) {
  require_same_space(A, B);
  return Operator(A.space(), A.matrix() + B.matrix(), A.hermitian() && B.hermitian());
}

Operator operator-(const Operator& A, const Operator& B) {
  require_same_space(A, B);
  return Operator(A.space(), A.matrix() - B.matrix(), A.hermitian() && B.hermitian());
}

Operator operator*(cplx s, const Operator& A) {
  return Operator(A.space(), s * A.matrix(), A.hermitian() && s.imag() == 0.0);
}

Operator as_hermitian(const Operator& A) {
  if (hermiticity_error(A.matrix()) > kHermitianTol) throw ContractViolation("operator is not Hermitian");
  Mat h = 0.5 * (A.matrix() + A.matrix().adjoint());
  return Operator(A.space(), std::move(h), true);
}

void fix_phases(Mat& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      // small slack so near-ties resolve to the lowest index on every platform
      double m = std::abs(v(r, c));
      if (m > best * (1.0 + 1e-9)) {
        best = m;
        imax = r;
      }
    }
    if (best > 0.0) v.col(c) *= std::conj(v(imax, c)) / best;
  }
}

Spectrum hermitian_eig(const Mat& H) {
  if (hermiticity_error(H) > kHermitianTol) throw ContractViolation("hermitian_eig: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver failed");
  Spectrum s{es.eigenvalues(), es.eigenvectors()};
  fix_phases(s.vectors);
  return s;
}

Spectrum hermitian_eig(const Operator& H) {
  if (!H.hermitian()) throw ContractViolation("hermitian_eig: operator not flagged Hermitian");
  return hermitian_eig(H.matrix());
}

Mat spectral_function(const Operator& A, const std::function<cplx(double)>& f) {
  auto s = hermitian_eig(A);
  Vec fv(s.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(s.values(i));
  return s.vectors * fv.asDiagonal() * s.vectors.adjoint();
}

Operator expm_hermitian_generator(const Operator& A, double scale) {
  if (!A.hermitian()) throw ContractViolation("expm: generator not flagged Hermitian");
  const cplx I(0, 1);
  return Operator(A.space(), spectral_function(A, [&](double x) { return std::exp(-I * scale * x); }));
}

}  // namespace dephase

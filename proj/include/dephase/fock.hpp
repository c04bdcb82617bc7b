#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace dephase {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

struct Factor {
  enum class Kind { TwoLevel, Boson };
  Kind kind;
  int dim;

  static Factor two_level() { return {Kind::TwoLevel, 2}; }
  static Factor boson(int cutoff);
  bool operator==(const Factor&) const = default;
};

struct SpaceDescriptor {
  std::vector<Factor> factors;

  int dim() const;
  bool operator==(const SpaceDescriptor&) const = default;
};

class Operator {
 public:
  Operator(SpaceDescriptor space, Mat m, bool hermitian = false);

  const SpaceDescriptor& space() const { return space_; }
  const Mat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  bool hermitian() const { return hermitian_; }

  Operator adjoint() const;

 private:
  SpaceDescriptor space_;
  Mat m_;
  bool hermitian_;
};

struct Spectrum {
  RVec values;  // ascending
  Mat vectors;  // columns
};

inline constexpr double kHermitianTol = 1e-12;

double hermiticity_error(const Mat& m);

Operator annihilation(int N);
Operator creation(int N);
Operator number(int N);
Operator identity(const SpaceDescriptor& s);

enum class Axis { X, Y, Z };
Operator pauli(Axis axis);

// Kronecker product, A is the left (matter) factor.
Operator tensor(const Operator& A, const Operator& B);

Operator operator*(const Operator& A, const Operator& B);
Operator operator+(const Operator& A, const Operator& B);
Operator operator-(const Operator& A, const Operator& B);
Operator operator*(cplx s, const Operator& A);

// Marks A Hermitian after checking it to kHermitianTol.
Operator as_hermitian(const Operator& A);

Spectrum hermitian_eig(const Operator& H);
Spectrum hermitian_eig(const Mat& H);

// Rotates each column so its largest-magnitude entry is real positive.
void fix_phases(Mat& vectors);

// f(A) by spectral calculus; A must be Hermitian.
Mat spectral_function(const Operator& A, const std::function<cplx(double)>& f);

// exp(-i * scale * A)
Operator expm_hermitian_generator(const Operator& A, double scale);

}  // namespace dephase

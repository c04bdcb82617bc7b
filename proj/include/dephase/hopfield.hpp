#pragma once

#include <array>
#include <optional>
#include <vector>

#include "dephase/fock.hpp"
#include "dephase/rabi.hpp"

namespace dephase {

struct HopfieldParams {
  double omega_c = 1.0;
  double omega_x = 1.0;
  double lambda = 0.0;

  double detuning() const { return omega_x - omega_c; }
  void validate() const;
};

HopfieldParams hopfield_params(double detuning, double lambda);

// y = sum_mu (U^mu P_mu - V^mu P_mu^dagger) for y in {a, b}.
struct HopfieldCoeffs {
  cplx Ua, Va, Ub, Vb;

  double photon_weight() const { return std::norm(Ua) + std::norm(Va); }
  double matter_weight() const { return std::norm(Ub) + std::norm(Vb); }
  double normalization() const { return std::norm(Ub) + std::norm(Ua) - std::norm(Vb) - std::norm(Va); }
};

using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

struct PolaritonDecomposition {
  Gauge gauge = Gauge::Coulomb;
  HopfieldParams params;
  bool mapped = false;  // coefficients describe the other gauge's bare operators
  std::array<double, 2> omega{};
  std::array<HopfieldCoeffs, 2> coeffs{};
  // P_mu = w0 a + w1 b + w2 a^dagger + w3 b^dagger
  std::array<Vec4, 2> w{};
};

// H = 1/2 psi^dagger M psi + const, psi = (a, b, a^dagger, b^dagger).
Mat4 hopfield_quadratic_form(const HopfieldParams& p, Gauge g);

PolaritonDecomposition symplectic_diagonalize(const HopfieldParams& p, Gauge g);

// Coefficients of the other gauge's bare operators, carried into this gauge's frame,
// over this gauge's polaritons.
PolaritonDecomposition gauge_map_coefficients(const PolaritonDecomposition& dec);

// How a rate depends on the mode weight |U|^2 + |V|^2.
enum class RateLaw { Squared, Linear };
std::string to_string(RateLaw l);
RateLaw parse_rate_law(const std::string& s);

struct PolaritonRates {
  std::array<double, 2> rate{};
  std::array<double, 2> omega{};
  double gamma0_c = 0;
  double gamma0_x = 0;
  GaugeMode mode = GaugeMode::Correct;
  RateLaw law = RateLaw::Squared;
};

// Correct mode pairs physical photon and matter operators; naive modes take both from one gauge.
PolaritonRates polariton_dephasing_rates(const HopfieldParams& p, double gamma0_c, double gamma0_x, GaugeMode mode,
                                         RateLaw law = RateLaw::Squared, Gauge assemble_from = Gauge::Coulomb);

struct HopfieldRow {
  double lambda;
  double detuning;
  int mu;
  double omega;
  double rate_over_gamma0;
  GaugeMode mode;
};

std::vector<HopfieldRow> dispersion_sweep(const std::vector<HopfieldParams>& grid, double gamma0_c, double gamma0_x,
                                          const std::vector<GaugeMode>& modes, RateLaw law = RateLaw::Squared);

// Truncated-Fock oracle on matter (x) field, N levels per mode.
Operator build_hopfield_hamiltonian(const HopfieldParams& p, Gauge g, int N);

struct HopfieldFockOps {
  Mat a, b;  // on the N^2 space, index = n_b * N + n_a
};
HopfieldFockOps hopfield_fock_ops(int N);

// Lowest n eigenpairs, via the two number-parity blocks.
Spectrum hopfield_fock_spectrum(const HopfieldParams& p, Gauge g, int N, int n);

// Applies exp(-i s lambda (a + a^dagger)(b + b^dagger)) to the columns of v, s = +1 or -1.
Mat apply_hopfield_gauge_unitary(const HopfieldParams& p, int N, const Mat& v, int s);

// Row w of P_mu carried into the other gauge's frame (T^dagger P T from dipole, T P T^dagger from Coulomb),
// written over that frame's bare operators.
Vec4 transport_polariton(const PolaritonDecomposition& dec, int mu);

// P_mu as an N^2 x N^2 matrix.
Mat polariton_operator(const PolaritonDecomposition& dec, int mu, int N);

}  // namespace dephase

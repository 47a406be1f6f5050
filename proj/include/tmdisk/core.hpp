#pragma once

// SU(1,1) transfer-matrix algebra for lossless one-dimensional scattering.
//
// A scatterer occupying (a, b) relates the mover amplitudes on its two sides,
//
//   (A+, A-)^T = M (B+, B-)^T,     M = [[alpha, beta], [conj(beta), conj(alpha)]],
//
// with |alpha|^2 - |beta|^2 = 1. Mover origins sit at a and b respectively.
// Only (alpha, beta) are stored, so the SU(1,1) shape cannot be broken.

#include <array>
#include <complex>
#include <cstddef>
#include <optional>

namespace tmdisk {

using Complex = std::complex<double>;

// Construction-time tolerance for flux and determinant checks.
inline constexpr double kConstructionTolerance = 1e-9;

class TransferMatrix;

class ScatteringAmplitudes {
 public:
  // Throws ValidationError when t == 0 or | |r|^2 + |t|^2 - 1 | > tolerance.
  ScatteringAmplitudes(Complex r, Complex t, double tolerance = kConstructionTolerance);

  Complex r() const { return r_; }
  Complex t() const { return t_; }

  // Amplitudes for incidence from the right, fixed by time reversal.
  Complex r_prime() const;
  Complex t_prime() const { return t_; }

  // |r|^2 + |t|^2 - 1.
  double flux_residual() const;

  static ScatteringAmplitudes transparent() { return {Complex{0.0, 0.0}, Complex{1.0, 0.0}}; }

 private:
  struct Unchecked {};
  ScatteringAmplitudes(Unchecked, Complex r, Complex t) : r_(r), t_(t) {}
  friend ScatteringAmplitudes amplitudes_from_transfer(const TransferMatrix&);
  friend std::optional<ScatteringAmplitudes> composed_amplitudes(const ScatteringAmplitudes&,
                                                                 const ScatteringAmplitudes&);

  Complex r_;
  Complex t_;
};

class TransferMatrix {
 public:
  using Entries = std::array<std::array<Complex, 2>, 2>;

  TransferMatrix() = default;  // identity

  // Validates |alpha|^2 - |beta|^2 = 1 relative to |alpha|^2 + |beta|^2.
  TransferMatrix(Complex alpha, Complex beta, double tolerance = kConstructionTolerance);

  // For values produced by SU(1,1) algebra on matrices that were already
  // validated; skips the determinant check.
  static TransferMatrix unchecked(Complex alpha, Complex beta);
  static TransferMatrix identity() { return {}; }

  Complex alpha() const { return alpha_; }
  Complex beta() const { return beta_; }
  Entries entries() const;

  double trace() const { return 2.0 * alpha_.real(); }
  // |alpha|^2 - |beta|^2 - 1.
  double det_residual() const;

  TransferMatrix inverse() const { return unchecked(std::conj(alpha_), -beta_); }
  TransferMatrix negated() const { return unchecked(-alpha_, -beta_); }

 private:
  Complex alpha_{1.0, 0.0};
  Complex beta_{0.0, 0.0};
};

// Transfer matrix in the (psi, psi') basis: an element of SL(2, R).
// a and d are dimensionless, b carries units of 1/k and c units of k.
class RealTransferMatrix {
 public:
  RealTransferMatrix() = default;
  RealTransferMatrix(double a, double b, double c, double d,
                     double tolerance = kConstructionTolerance);

  // Conjugation of an SU(1,1) matrix; inherits its determinant.
  static RealTransferMatrix unchecked(double a, double b, double c, double d);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double det() const { return a_ * d_ - b_ * c_; }
  double trace() const { return a_ + d_; }

 private:
  double a_ = 1.0;
  double b_ = 0.0;
  double c_ = 0.0;
  double d_ = 1.0;
};

struct WaveAmplitudePair {
  Complex plus;
  Complex minus;

  // minus / plus, the disk coordinate of this wave configuration.
  Complex ratio() const { return minus / plus; }
};

// (A+, A-) = M (B+, B-).
WaveAmplitudePair propagate(const TransferMatrix& m, const WaveAmplitudePair& right);

// alpha = 1/t, beta = conj(r)/conj(t). The matrix is checked with the same
// tolerance as the amplitudes were (relative form, see TransferMatrix).
TransferMatrix transfer_from_amplitudes(const ScatteringAmplitudes& amps,
                                        double tolerance = kConstructionTolerance);

// t = 1/alpha, r = conj(beta)/alpha.
ScatteringAmplitudes amplitudes_from_transfer(const TransferMatrix& m);

TransferMatrix compose(const TransferMatrix& m1, const TransferMatrix& m2);
inline TransferMatrix operator*(const TransferMatrix& m1, const TransferMatrix& m2) {
  return compose(m1, m2);
}

// Amplitudes of M1 M2 written directly in terms of (r1, t1) and (r2, t2).
// Returns nullopt when 1 + conj(r1) r2 exp(2i arg t1) vanishes, i.e. the
// composite is a perfect mirror and has no transfer matrix.
std::optional<ScatteringAmplitudes> composed_amplitudes(const ScatteringAmplitudes& first,
                                                        const ScatteringAmplitudes& second);

// M -> U M U^{-1} with U = [[1, 1], [ik, -ik]]. Throws for k <= 0.
RealTransferMatrix to_real_representation(const TransferMatrix& m, double k);
TransferMatrix from_real_representation(const RealTransferMatrix& r, double k,
                                        double tolerance = kConstructionTolerance);

// M^n via the Chebyshev recurrence on x = Re(alpha):
//   M^n = U_{n-1}(x) M - U_{n-2}(x) I.
TransferMatrix transfer_power(const TransferMatrix& m, std::size_t n);

}  // namespace tmdisk

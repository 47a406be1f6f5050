#include "tmdisk/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tmdisk/errors.hpp"

namespace tmdisk {

namespace {

void require_finite(Complex value, const char* what) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw ValidationError(std::string(what) + " is not finite");
  }
}

}  // namespace

ScatteringAmplitudes::ScatteringAmplitudes(Complex r, Complex t, double tolerance) : r_(r), t_(t) {
  require_finite(r, "reflection amplitude");
  require_finite(t, "transmission amplitude");
  if (t == Complex{0.0, 0.0}) {
    throw ValidationError("transmission amplitude is zero: no transfer matrix exists");
  }
  const double residual = flux_residual();
  if (std::abs(residual) > tolerance) {
    throw ValidationError("flux violation: |r|^2 + |t|^2 - 1 = " + std::to_string(residual));
  }
}

Complex ScatteringAmplitudes::r_prime() const { return -std::conj(r_) * t_ / std::conj(t_); }

double ScatteringAmplitudes::flux_residual() const { return std::norm(r_) + std::norm(t_) - 1.0; }

TransferMatrix::TransferMatrix(Complex alpha, Complex beta, double tolerance)
    : alpha_(alpha), beta_(beta) {
  require_finite(alpha, "alpha");
  require_finite(beta, "beta");
  const double scale = std::norm(alpha) + std::norm(beta);
  if (std::abs(det_residual()) > tolerance * scale) {
    throw ValidationError("determinant violation: |alpha|^2 - |beta|^2 - 1 = " +
                          std::to_string(det_residual()));
  }
}

TransferMatrix TransferMatrix::unchecked(Complex alpha, Complex beta) {
  TransferMatrix m;
  m.alpha_ = alpha;
  m.beta_ = beta;
  return m;
}

TransferMatrix::Entries TransferMatrix::entries() const {
  return {{{alpha_, beta_}, {std::conj(beta_), std::conj(alpha_)}}};
}

double TransferMatrix::det_residual() const {
  return std::norm(alpha_) - std::norm(beta_) - 1.0;
}

RealTransferMatrix::RealTransferMatrix(double a, double b, double c, double d, double tolerance)
    : a_(a), b_(b), c_(c), d_(d) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d)) {
    throw ValidationError("real transfer matrix has non-finite entries");
  }
  const double scale = std::max({1.0, std::abs(a * d), std::abs(b * c)});
  if (std::abs(det() - 1.0) > tolerance * scale) {
    throw ValidationError("determinant violation: ad - bc - 1 = " + std::to_string(det() - 1.0));
  }
}

RealTransferMatrix RealTransferMatrix::unchecked(double a, double b, double c, double d) {
  RealTransferMatrix r;
  r.a_ = a;
  r.b_ = b;
  r.c_ = c;
  r.d_ = d;
  return r;
}

WaveAmplitudePair propagate(const TransferMatrix& m, const WaveAmplitudePair& right) {
  return {m.alpha() * right.plus + m.beta() * right.minus,
          std::conj(m.beta()) * right.plus + std::conj(m.alpha()) * right.minus};
}

TransferMatrix transfer_from_amplitudes(const ScatteringAmplitudes& amps, double tolerance) {
  const Complex t = amps.t();
  return TransferMatrix(1.0 / t, std::conj(amps.r()) / std::conj(t), tolerance);
}

ScatteringAmplitudes amplitudes_from_transfer(const TransferMatrix& m) {
  const Complex t = 1.0 / m.alpha();
  return ScatteringAmplitudes(ScatteringAmplitudes::Unchecked{}, std::conj(m.beta()) * t, t);
}

TransferMatrix compose(const TransferMatrix& m1, const TransferMatrix& m2) {
  const Complex a1 = m1.alpha(), b1 = m1.beta();
  const Complex a2 = m2.alpha(), b2 = m2.beta();
  return TransferMatrix::unchecked(a1 * a2 + b1 * std::conj(b2), a1 * b2 + b1 * std::conj(a2));
}

std::optional<ScatteringAmplitudes> composed_amplitudes(const ScatteringAmplitudes& first,
                                                        const ScatteringAmplitudes& second) {
  const Complex phase = std::polar(1.0, 2.0 * std::arg(first.t()));
  const Complex denominator = 1.0 + std::conj(first.r()) * second.r() * phase;
  if (std::abs(denominator) < 1e-12) return std::nullopt;
  const Complex r = (first.r() + second.r() * phase) / denominator;
  const Complex t = first.t() * second.t() / denominator;
  return ScatteringAmplitudes(ScatteringAmplitudes::Unchecked{}, r, t);
}

RealTransferMatrix to_real_representation(const TransferMatrix& m, double k) {
  if (!(k > 0.0)) throw ValidationError("wavenumber must be positive");
  const Complex alpha = m.alpha(), beta = m.beta();
  const double a = alpha.real() + beta.real();
  const double b = (alpha.imag() - beta.imag()) / k;
  const double c = -k * (alpha.imag() + beta.imag());
  const double d = alpha.real() - beta.real();
  return RealTransferMatrix::unchecked(a, b, c, d);
}

TransferMatrix from_real_representation(const RealTransferMatrix& r, double k, double tolerance) {
  if (!(k > 0.0)) throw ValidationError("wavenumber must be positive");
  const double re_alpha = 0.5 * (r.a() + r.d());
  const double re_beta = 0.5 * (r.a() - r.d());
  const double im_diff = k * r.b();   // Im alpha - Im beta
  const double im_sum = -r.c() / k;   // Im alpha + Im beta
  return TransferMatrix(Complex{re_alpha, 0.5 * (im_sum + im_diff)},
                        Complex{re_beta, 0.5 * (im_sum - im_diff)}, tolerance);
}

TransferMatrix transfer_power(const TransferMatrix& m, std::size_t n) {
  if (n == 0) throw ValidationError("transfer_power requires n >= 1");
  const double x = m.alpha().real();
  // u_prev = U_{j-2}, u_curr = U_{j-1}; start at j = 1 with U_{-1} = 0, U_0 = 1.
  double u_prev = 0.0;
  double u_curr = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    const double next = 2.0 * x * u_curr - u_prev;
    u_prev = u_curr;
    u_curr = next;
  }
  return TransferMatrix::unchecked(u_curr * m.alpha() - u_prev, u_curr * m.beta());
}

}  // namespace tmdisk

#pragma once

// Independent reference computations: plain 2x2 complex algebra on full
// matrix entries and textbook disk formulas, sharing no code with tmdisk.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "tmdisk/core.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Mat = std::array<std::array<Complex, 2>, 2>;

inline Mat full(const tmdisk::TransferMatrix& m) {
  return {{{m.alpha(), m.beta()}, {std::conj(m.beta()), std::conj(m.alpha())}}};
}

inline Mat identity() { return {{{Complex{1.0}, Complex{0.0}}, {Complex{0.0}, Complex{1.0}}}}; }

inline Mat mul(const Mat& a, const Mat& b) {
  Mat c{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  }
  return c;
}

inline Mat power(const Mat& m, std::size_t n) {
  Mat out = identity();
  for (std::size_t i = 0; i < n; ++i) out = mul(out, m);
  return out;
}

inline Mat scale(const Mat& m, Complex s) {
  Mat out = m;
  for (auto& row : out) {
    for (auto& e : row) e *= s;
  }
  return out;
}

inline double max_diff(const Mat& a, const Mat& b) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
  }
  return d;
}

inline double max_diff(const tmdisk::TransferMatrix& a, const tmdisk::TransferMatrix& b) {
  return max_diff(full(a), full(b));
}

// z_a = (M21 + M22 z) / (M11 + M12 z) for (A+, A-) = M (B+, B-), z = A-/A+.
inline Complex mobius(const Mat& m, Complex z) {
  return (m[1][0] + m[1][1] * z) / (m[0][0] + m[0][1] * z);
}

// Distance on the curvature -1 disk via the cosh form.
inline double disk_distance(Complex z1, Complex z2) {
  const double num = 2.0 * std::norm(z1 - z2);
  const double den = (1.0 - std::norm(z1)) * (1.0 - std::norm(z2));
  return std::acosh(1.0 + num / den);
}

// Interior angle at vertex a of the hyperbolic triangle (a, b, c): move a to
// the origin, where geodesics through it are straight lines.
inline double interior_angle(Complex a, Complex b, Complex c) {
  const auto move = [a](Complex z) { return (z - a) / (1.0 - std::conj(a) * z); };
  return std::abs(std::arg(move(c) / move(b)));
}

}  // namespace oracle

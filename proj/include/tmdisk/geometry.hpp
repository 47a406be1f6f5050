#pragma once

// The unit-disk picture of a transfer matrix. The ratio z = A-/A+ of mover
// amplitudes lives in the closed unit disk, and M acts on it by
//
//   z_a = (conj(beta) + conj(alpha) z_b) / (alpha + beta z_b).
//
// M and -M induce the same map. Classification and every geometric operation
// work on the representative with Tr M >= 0.

#include <cstddef>
#include <optional>
#include <vector>

#include "tmdisk/core.hpp"

namespace tmdisk {

// Slack on |z| <= 1 for points on the boundary circle.
inline constexpr double kDiskSlack = 1e-12;
// |(Tr M)^2 - 4| < kParabolicBand * max(1, (Tr M)^2) counts as parabolic.
inline constexpr double kParabolicBand = 1e-9;

class DiskPoint {
 public:
  DiskPoint() = default;  // the origin
  DiskPoint(Complex z);   // NOLINT: implicit on purpose, checked

  Complex value() const { return z_; }
  double modulus() const { return std::abs(z_); }
  bool on_boundary(double tolerance = 1e-9) const { return std::abs(modulus() - 1.0) <= tolerance; }

 private:
  Complex z_{0.0, 0.0};
};

// Oriented hyperbolic line, stored by its two ideal endpoints.
class Geodesic {
 public:
  // Endpoints must lie on the unit circle (within 1e-9; projected exactly
  // onto it) and be distinct.
  Geodesic(Complex tail, Complex head);
  static Geodesic from_angles(double tail_angle, double head_angle);

  Complex tail() const { return tail_; }
  Complex head() const { return head_; }
  double tail_angle() const;
  double head_angle() const;
  Geodesic reversed() const { return Geodesic(head_, tail_); }

  // Point of the line nearest the origin.
  DiskPoint midpoint() const;

 private:
  Complex tail_;
  Complex head_;
};

enum class ActionKind { Elliptic, Hyperbolic, Parabolic };

const char* to_string(ActionKind kind);

struct ActionClassification {
  ActionKind kind = ActionKind::Parabolic;
  // Elliptic: the interior fixed point.
  // Hyperbolic: {attracting, repelling}; the attracting point has |chi| < 1.
  // Parabolic: the double fixed point, or empty for +-identity.
  std::vector<DiskPoint> fixed_points;
  // theta (elliptic, Tr = 2 cos(theta/2)), xi > 0 (hyperbolic,
  // Tr = 2 cosh(xi/2)) or nu (parabolic). Refers to the Tr >= 0 representative.
  double canonical_parameter = 0.0;
  double trace = 0.0;  // of the matrix as given
  bool sign_flipped = false;
};

// Trace-only classification with the parabolic tolerance band.
ActionKind classify_trace(double trace);

// Throws DegeneracyError when alpha + beta z is numerically zero.
DiskPoint mobius(const TransferMatrix& m, DiskPoint z);

ActionClassification classify(const TransferMatrix& m);

// K_C(theta), A_C(xi) or N_C(nu).
TransferMatrix canonical_form(ActionKind kind, double parameter);

// C M C^{-1}.
TransferMatrix conjugate(const TransferMatrix& c, const TransferMatrix& m);

struct CanonicalReduction {
  TransferMatrix conjugator;
  ActionKind kind = ActionKind::Parabolic;
  double parameter = 0.0;
  // conjugate(conjugator, m) == sign * canonical_form(kind, parameter).
  int sign = 1;
};

// Gauge:
//   elliptic   - C is the boost (alpha real positive) sending the fixed point to 0;
//   hyperbolic - C = K(phi) B with B the boost sending the axis point nearest the
//                origin to 0, and K(phi) turning the attracting end to -i;
//   parabolic  - C is the rotation sending the fixed point to +i;
//   +-identity - C = I, nu = 0.
CanonicalReduction reduce_to_canonical(const TransferMatrix& m);

// Boost with alpha real positive that maps p to the origin.
TransferMatrix boost_to_origin(DiskPoint p);
// Maps axis.head() to -i and axis.tail() to +i (hyperbolic gauge above).
TransferMatrix axis_conjugator(const Geodesic& axis);

// Points z0 -> mobius(F(s), z0) along the one-parameter family F through M,
// s swept uniformly over [0, parameter] in `samples` steps.
std::vector<DiskPoint> orbit(const TransferMatrix& m, DiskPoint z0, std::size_t samples);

// ln[(|conj(z1) z2 - 1| + |z1 - z2|) / (|conj(z1) z2 - 1| - |z1 - z2|)].
// nullopt stands for an infinite distance (a point on the boundary).
std::optional<double> hyperbolic_distance(DiskPoint z1, DiskPoint z2);

// zeta = 2 ln[(|Tr M| + sqrt(Tr^2 M - 4)) / 2]. ValidationError unless hyperbolic.
double translation_length(const TransferMatrix& m);

}  // namespace tmdisk

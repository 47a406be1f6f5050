#pragma once

// Hyperbolic turns: an oriented geodesic together with half of the
// translation length along it. The turn T(axis, h) stands for the translation
// by 2h along the axis; its square root (translation by h) is the matrix view.
//
// Composition follows matrix order: compose_turns(t1, t2) is the turn of
// M(t1) M(t2), whose disk action applies t2 first.

#include <optional>
#include <utility>
#include <variant>

#include "tmdisk/geometry.hpp"

namespace tmdisk {

class HyperbolicTurn {
 public:
  // half_length must be positive and finite.
  HyperbolicTurn(Geodesic axis, double half_length);

  const Geodesic& axis() const { return axis_; }
  double half_length() const { return half_length_; }

 private:
  Geodesic axis_;
  double half_length_;
};

// (1 / sqrt(2 (Re alpha + 1))) [[alpha + 1, beta], [conj(beta), conj(alpha) + 1]]
// applied to the Tr > 0 representative. ValidationError unless hyperbolic.
TransferMatrix sqrt_transfer(const TransferMatrix& m);

// Axis from the repelling to the attracting fixed point, half_length = zeta / 2.
// ValidationError unless hyperbolic.
HyperbolicTurn turn_from_transfer(const TransferMatrix& m);

// Translation by 2 * half_length along the axis (alpha with positive real part).
TransferMatrix transfer_from_turn(const HyperbolicTurn& turn);
// Translation by half_length: the square root of transfer_from_turn.
TransferMatrix turn_root(const HyperbolicTurn& turn);

// Inversion in the circle orthogonal to the unit circle through g's endpoints;
// Euclidean reflection when g is a diameter.
DiskPoint reflect_in_geodesic(DiskPoint z, const Geodesic& g);

// The geodesic orthogonal to `axis` through the axis point at signed distance
// s from axis.midpoint(), positive toward the head.
Geodesic orthogonal_geodesic(const Geodesic& axis, double s);

// Two geodesics orthogonal to the axis, the second half_length further toward
// the head; reflecting in the first and then the second is the translation.
std::pair<Geodesic, Geodesic> reflection_mirrors(const HyperbolicTurn& turn, double slide = 0.0);
DiskPoint translate_by_reflections(const HyperbolicTurn& turn, DiskPoint z, double slide = 0.0);

using TurnComposition = std::variant<HyperbolicTurn, ActionClassification>;

// Turn of M(t1) M(t2) when hyperbolic, otherwise the product's classification.
TurnComposition compose_turns(const HyperbolicTurn& t1, const HyperbolicTurn& t2);

// Geometric head-to-tail construction. t2 is slid so that its head sits at the
// intersection P of the axes and t1 so that its tail sits there; the result
// runs from t2's free tail to t1's free head. Axes on a common line add
// directly. nullopt when the axes do not meet or the result is the identity.
std::optional<HyperbolicTurn> head_to_tail(const HyperbolicTurn& t1, const HyperbolicTurn& t2);

// cosh c = cosh a cosh b + sinh a sinh b cos(angle), returning c. With this
// sign, angle is the turning angle between the directions a and b (pi minus
// the interior angle of the triangle); angle = 0 gives c = a + b.
// Evaluated through sinh^2(c/2) to keep small sides accurate.
double hyperbolic_law_of_cosines(double a, double b, double angle);

// Hyperbolic distance from an interior point to a geodesic.
double distance_to_geodesic(DiskPoint z, const Geodesic& g);

// Intersection of two geodesics, if they cross inside the disk.
std::optional<DiskPoint> geodesic_intersection(const Geodesic& g1, const Geodesic& g2);

// Point of g at signed distance s from p (p on g), positive toward the head.
DiskPoint point_along(const Geodesic& g, DiskPoint p, double s);

// Rotation by pi about the interior point c.
DiskPoint half_turn(DiskPoint z, DiskPoint c);

// The geodesic through two distinct interior points, oriented from p to q.
Geodesic geodesic_through(DiskPoint p, DiskPoint q);

}  // namespace tmdisk

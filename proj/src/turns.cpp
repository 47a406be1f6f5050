#include "tmdisk/turns.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tmdisk/errors.hpp"

namespace tmdisk {

namespace {

constexpr double kPi = 3.14159265358979323846;

// phi_c(z) = (z - c) / (1 - conj(c) z) and its inverse.
Complex to_center(Complex z, Complex c) { return (z - c) / (1.0 - std::conj(c) * z); }
Complex from_center(Complex w, Complex c) { return (w + c) / (1.0 + std::conj(c) * w); }

bool same_point(Complex a, Complex b) { return std::abs(a - b) < 1e-12; }

}  // namespace

HyperbolicTurn::HyperbolicTurn(Geodesic axis, double half_length)
    : axis_(axis), half_length_(half_length) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw ValidationError("turn half-length must be positive and finite");
  }
}

TransferMatrix sqrt_transfer(const TransferMatrix& m) {
  if (classify_trace(m.trace()) != ActionKind::Hyperbolic) {
    throw ValidationError("square root is defined for hyperbolic matrices only");
  }
  const TransferMatrix n = m.trace() < 0.0 ? m.negated() : m;
  const double re_alpha = n.alpha().real();
  if (!(re_alpha > 1.0)) throw ValidationError("square root needs Re(alpha) > 1");
  const double scale = 1.0 / std::sqrt(2.0 * (re_alpha + 1.0));
  return TransferMatrix::unchecked(scale * (n.alpha() + 1.0), scale * n.beta());
}

HyperbolicTurn turn_from_transfer(const TransferMatrix& m) {
  const ActionClassification cls = classify(m);
  if (cls.kind != ActionKind::Hyperbolic) {
    throw ValidationError(std::string("turns need a hyperbolic matrix, got ") +
                          to_string(cls.kind));
  }
  return HyperbolicTurn(Geodesic(cls.fixed_points[1].value(), cls.fixed_points[0].value()),
                        0.5 * cls.canonical_parameter);
}

TransferMatrix transfer_from_turn(const HyperbolicTurn& turn) {
  const TransferMatrix c = axis_conjugator(turn.axis());
  return conjugate(c.inverse(), canonical_form(ActionKind::Hyperbolic, 2.0 * turn.half_length()));
}

TransferMatrix turn_root(const HyperbolicTurn& turn) {
  const TransferMatrix c = axis_conjugator(turn.axis());
  return conjugate(c.inverse(), canonical_form(ActionKind::Hyperbolic, turn.half_length()));
}

DiskPoint reflect_in_geodesic(DiskPoint z, const Geodesic& g) {
  const Complex p = g.tail(), q = g.head();
  const Complex zc = std::conj(z.value());
  Complex w = (p + q - 2.0 * p * q * zc) / (2.0 - (p + q) * zc);
  if (std::abs(w) > 1.0) w /= std::abs(w);
  return DiskPoint(w);
}

Geodesic orthogonal_geodesic(const Geodesic& axis, double s) {
  // In the canonical frame the axis runs from +i to -i and the point at s is
  // -i tanh(s/2). The orthogonal geodesic through the real point x has ends
  // exp(+-i phi) with phi = pi/2 - 2 atan(x); rotate that picture by -i.
  const double x = std::tanh(0.5 * s);
  const double phi = 0.5 * kPi - 2.0 * std::atan(x);
  const Complex rot{0.0, -1.0};
  const TransferMatrix back = axis_conjugator(axis).inverse();
  return Geodesic(mobius(back, DiskPoint(rot * std::polar(1.0, -phi))).value(),
                  mobius(back, DiskPoint(rot * std::polar(1.0, phi))).value());
}

std::pair<Geodesic, Geodesic> reflection_mirrors(const HyperbolicTurn& turn, double slide) {
  return {orthogonal_geodesic(turn.axis(), slide),
          orthogonal_geodesic(turn.axis(), slide + turn.half_length())};
}

DiskPoint translate_by_reflections(const HyperbolicTurn& turn, DiskPoint z, double slide) {
  const auto [first, second] = reflection_mirrors(turn, slide);
  return reflect_in_geodesic(reflect_in_geodesic(z, first), second);
}

TurnComposition compose_turns(const HyperbolicTurn& t1, const HyperbolicTurn& t2) {
  const TransferMatrix product = compose(transfer_from_turn(t1), transfer_from_turn(t2));
  ActionClassification cls = classify(product);
  if (cls.kind == ActionKind::Hyperbolic) return turn_from_transfer(product);
  return cls;
}

std::optional<HyperbolicTurn> head_to_tail(const HyperbolicTurn& t1, const HyperbolicTurn& t2) {
  const Geodesic& g1 = t1.axis();
  const Geodesic& g2 = t2.axis();
  const bool same = same_point(g1.tail(), g2.tail()) && same_point(g1.head(), g2.head());
  const bool opposite = same_point(g1.tail(), g2.head()) && same_point(g1.head(), g2.tail());
  if (same) return HyperbolicTurn(g1, t1.half_length() + t2.half_length());
  if (opposite) {
    const double net = t1.half_length() - t2.half_length();
    if (net > 0.0) return HyperbolicTurn(g1, net);
    if (net < 0.0) return HyperbolicTurn(g2, -net);
    return std::nullopt;
  }

  const auto crossing = geodesic_intersection(g1, g2);
  if (!crossing) return std::nullopt;
  const DiskPoint tail = point_along(g2, *crossing, -t2.half_length());
  const DiskPoint head = point_along(g1, *crossing, t1.half_length());
  const auto length = hyperbolic_distance(tail, head);
  if (!length || *length <= 0.0) return std::nullopt;
  return HyperbolicTurn(geodesic_through(tail, head), *length);
}

double hyperbolic_law_of_cosines(double a, double b, double angle) {
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ValidationError("triangle sides must be finite and non-negative");
  }
  if (!(angle >= 0.0) || !(angle <= kPi)) throw ValidationError("angle must lie in [0, pi]");
  const double sh = std::sinh(0.5 * (a + b));
  const double sn = std::sin(0.5 * angle);
  const double half = sh * sh - std::sinh(a) * std::sinh(b) * sn * sn;
  return 2.0 * std::asinh(std::sqrt(std::max(0.0, half)));
}

double distance_to_geodesic(DiskPoint z, const Geodesic& g) {
  const Complex w = mobius(axis_conjugator(g), z).value();
  const double gap = 1.0 - std::norm(w);
  if (!(gap > 0.0)) throw ValidationError("distance to a geodesic needs an interior point");
  return std::asinh(2.0 * std::abs(w.real()) / gap);
}

std::optional<DiskPoint> geodesic_intersection(const Geodesic& g1, const Geodesic& g2) {
  // Geodesics are straight chords in the Klein model.
  const Complex p = g1.tail(), r = g1.head() - g1.tail();
  const Complex q = g2.tail(), s = g2.head() - g2.tail();
  const double cross = r.real() * s.imag() - r.imag() * s.real();
  if (std::abs(cross) < 1e-14) return std::nullopt;
  const Complex qp = q - p;
  const double u = (qp.real() * s.imag() - qp.imag() * s.real()) / cross;
  const double v = (qp.real() * r.imag() - qp.imag() * r.real()) / cross;
  if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0)) return std::nullopt;
  const Complex klein = p + u * r;
  const double gap = 1.0 - std::norm(klein);
  if (!(gap > 0.0)) return std::nullopt;
  return DiskPoint(klein / (1.0 + std::sqrt(gap)));
}

DiskPoint point_along(const Geodesic& g, DiskPoint p, double s) {
  if (!(p.modulus() < 1.0)) throw ValidationError("point_along needs an interior start");
  const Complex c = p.value();
  Complex direction = to_center(g.head(), c);
  direction /= std::abs(direction);
  return DiskPoint(from_center(direction * std::tanh(0.5 * s), c));
}

DiskPoint half_turn(DiskPoint z, DiskPoint c) {
  if (!(c.modulus() < 1.0)) throw ValidationError("half-turn center must be interior");
  return DiskPoint(from_center(-to_center(z.value(), c.value()), c.value()));
}

Geodesic geodesic_through(DiskPoint p, DiskPoint q) {
  if (!(p.modulus() < 1.0) || !(q.modulus() < 1.0)) {
    throw ValidationError("geodesic_through needs interior points");
  }
  const Complex c = p.value();
  Complex direction = to_center(q.value(), c);
  if (std::abs(direction) < 1e-15) throw ValidationError("geodesic_through needs distinct points");
  direction /= std::abs(direction);
  return Geodesic(from_center(-direction, c), from_center(direction, c));
}

}  // namespace tmdisk

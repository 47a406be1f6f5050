#include "tmdisk/geometry.hpp"

#include <cmath>
#include <string>

#include "tmdisk/errors.hpp"

namespace tmdisk {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex unit(Complex z) { return z / std::abs(z); }

TransferMatrix rotation(Complex phase) {
  // K(phi) with exp(i phi) = phase; acts as z -> z conj(phase).
  return TransferMatrix::unchecked(std::sqrt(unit(phase)), Complex{0.0, 0.0});
}

}  // namespace

DiskPoint::DiskPoint(Complex z) : z_(z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw ValidationError("disk point is not finite");
  }
  if (std::abs(z) > 1.0 + kDiskSlack) throw ValidationError("point lies outside the unit disk");
}

Geodesic::Geodesic(Complex tail, Complex head) {
  for (Complex p : {tail, head}) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()) ||
        std::abs(std::abs(p) - 1.0) > 1e-9) {
      throw ValidationError("geodesic endpoints must lie on the unit circle");
    }
  }
  tail_ = unit(tail);
  head_ = unit(head);
  if (std::abs(tail_ - head_) < 1e-12) throw ValidationError("geodesic endpoints coincide");
}

Geodesic Geodesic::from_angles(double tail_angle, double head_angle) {
  return Geodesic(std::polar(1.0, tail_angle), std::polar(1.0, head_angle));
}

double Geodesic::tail_angle() const { return std::arg(tail_); }
double Geodesic::head_angle() const { return std::arg(head_); }

DiskPoint Geodesic::midpoint() const {
  return DiskPoint((tail_ + head_) / (2.0 + std::abs(tail_ - head_)));
}

const char* to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::Elliptic:
      return "elliptic";
    case ActionKind::Hyperbolic:
      return "hyperbolic";
    case ActionKind::Parabolic:
      return "parabolic";
  }
  return "unknown";
}

ActionKind classify_trace(double trace) {
  const double tr2 = trace * trace;
  const double gap = tr2 - 4.0;
  if (std::abs(gap) < kParabolicBand * std::max(1.0, tr2)) return ActionKind::Parabolic;
  return gap < 0.0 ? ActionKind::Elliptic : ActionKind::Hyperbolic;
}

DiskPoint mobius(const TransferMatrix& m, DiskPoint z) {
  const Complex alpha = m.alpha(), beta = m.beta();
  const Complex denominator = alpha + beta * z.value();
  if (std::abs(denominator) <= 1e-14 * (std::abs(alpha) + std::abs(beta))) {
    throw DegeneracyError("Moebius denominator vanishes");
  }
  Complex w = (std::conj(beta) + std::conj(alpha) * z.value()) / denominator;
  // The closed disk maps into itself; an overshoot can only be rounding.
  if (std::abs(w) > 1.0) w = unit(w);
  return DiskPoint(w);
}

ActionClassification classify(const TransferMatrix& m) {
  ActionClassification out;
  out.trace = m.trace();
  out.sign_flipped = out.trace < 0.0;
  const TransferMatrix n = out.sign_flipped ? m.negated() : m;
  const Complex alpha = n.alpha(), beta = n.beta();
  const double tr = n.trace();
  out.kind = classify_trace(tr);
  const bool beta_vanishes = std::abs(beta) <= 1e-14 * std::abs(alpha);

  switch (out.kind) {
    case ActionKind::Elliptic: {
      Complex fixed{0.0, 0.0};
      if (!beta_vanishes) {
        // Both roots of beta z^2 + 2i Im(alpha) z - conj(beta) = 0 are
        // imaginary multiples of 1/beta; take the larger one without
        // cancellation and recover the interior one from the product.
        const double root = std::sqrt(std::max(0.0, 4.0 - tr * tr));
        const double sign = alpha.imag() <= 0.0 ? 1.0 : -1.0;
        const Complex outer = kI * (-2.0 * alpha.imag() + sign * root) / (2.0 * beta);
        fixed = (-std::conj(beta) / beta) / outer;
      }
      out.fixed_points = {DiskPoint(fixed)};
      out.canonical_parameter = 2.0 * std::arg(alpha + beta * fixed);
      break;
    }
    case ActionKind::Hyperbolic: {
      if (beta_vanishes) {
        throw DegeneracyError("hyperbolic trace with vanishing beta violates |alpha| = 1");
      }
      const double root = std::sqrt(tr * tr - 4.0);
      Complex plus = unit((-2.0 * kI * alpha.imag() + root) / (2.0 * beta));
      Complex minus = unit((-2.0 * kI * alpha.imag() - root) / (2.0 * beta));
      if (std::abs(alpha + beta * plus) < std::abs(alpha + beta * minus)) std::swap(plus, minus);
      out.fixed_points = {DiskPoint(plus), DiskPoint(minus)};
      out.canonical_parameter = 2.0 * std::acosh(0.5 * tr);
      break;
    }
    case ActionKind::Parabolic: {
      if (beta_vanishes) {
        out.canonical_parameter = 0.0;
        break;
      }
      const Complex fixed = unit(-kI * alpha.imag() / beta);
      out.fixed_points = {DiskPoint(fixed)};
      // Rotating the fixed point to +i turns beta into nu/2.
      out.canonical_parameter = 2.0 * (beta * (-kI * fixed)).real();
      break;
    }
  }
  return out;
}

TransferMatrix canonical_form(ActionKind kind, double parameter) {
  switch (kind) {
    case ActionKind::Elliptic:
      return TransferMatrix::unchecked(std::polar(1.0, 0.5 * parameter), Complex{0.0, 0.0});
    case ActionKind::Hyperbolic:
      return TransferMatrix::unchecked(Complex{std::cosh(0.5 * parameter), 0.0},
                                       Complex{0.0, std::sinh(0.5 * parameter)});
    case ActionKind::Parabolic:
      return TransferMatrix::unchecked(Complex{1.0, -0.5 * parameter},
                                       Complex{0.5 * parameter, 0.0});
  }
  throw ValidationError("unknown action kind");
}

TransferMatrix conjugate(const TransferMatrix& c, const TransferMatrix& m) {
  return compose(compose(c, m), c.inverse());
}

TransferMatrix boost_to_origin(DiskPoint p) {
  const double norm = std::norm(p.value());
  if (!(norm < 1.0)) throw ValidationError("boost_to_origin needs an interior point");
  const double alpha = 1.0 / std::sqrt(1.0 - norm);
  return TransferMatrix::unchecked(Complex{alpha, 0.0}, -alpha * std::conj(p.value()));
}

TransferMatrix axis_conjugator(const Geodesic& axis) {
  const TransferMatrix boost = boost_to_origin(axis.midpoint());
  const Complex head = mobius(boost, DiskPoint(axis.head())).value();
  return compose(rotation(kI * head), boost);
}

CanonicalReduction reduce_to_canonical(const TransferMatrix& m) {
  const ActionClassification cls = classify(m);
  CanonicalReduction out;
  out.kind = cls.kind;
  out.parameter = cls.canonical_parameter;
  out.sign = cls.sign_flipped ? -1 : 1;
  switch (cls.kind) {
    case ActionKind::Elliptic:
      out.conjugator = boost_to_origin(cls.fixed_points.front());
      break;
    case ActionKind::Hyperbolic:
      out.conjugator = axis_conjugator(
          Geodesic(cls.fixed_points[1].value(), cls.fixed_points[0].value()));
      break;
    case ActionKind::Parabolic:
      if (!cls.fixed_points.empty()) {
        out.conjugator = rotation(-kI * cls.fixed_points.front().value());
      }
      break;
  }
  return out;
}

std::vector<DiskPoint> orbit(const TransferMatrix& m, DiskPoint z0, std::size_t samples) {
  if (samples < 2) throw ValidationError("orbit needs at least 2 samples");
  const CanonicalReduction red = reduce_to_canonical(m);
  const TransferMatrix inverse = red.conjugator.inverse();
  std::vector<DiskPoint> points;
  points.reserve(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const double s = red.parameter * static_cast<double>(j) / static_cast<double>(samples - 1);
    const TransferMatrix step = conjugate(inverse, canonical_form(red.kind, s));
    points.push_back(mobius(step, z0));
  }
  return points;
}

std::optional<double> hyperbolic_distance(DiskPoint z1, DiskPoint z2) {
  if (z1.modulus() >= 1.0 || z2.modulus() >= 1.0) return std::nullopt;
  const double chord = std::abs(z1.value() - z2.value());
  const double denominator = std::abs(std::conj(z1.value()) * z2.value() - 1.0);
  const double u = chord / denominator;
  if (!(u < 1.0)) return std::nullopt;
  // ln((1 + u) / (1 - u)).
  return 2.0 * std::atanh(u);
}

double translation_length(const TransferMatrix& m) {
  const double tr = std::abs(m.trace());
  if (classify_trace(tr) != ActionKind::Hyperbolic) {
    throw ValidationError("translation length is defined for hyperbolic matrices only");
  }
  return 2.0 * std::acosh(0.5 * tr);
}

}  // namespace tmdisk

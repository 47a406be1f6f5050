#include "tmdisk/potentials.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "tmdisk/errors.hpp"

namespace tmdisk {

void UnitConvention::validate() const {
  if (!(hbar > 0.0) || !(mass > 0.0) || !std::isfinite(hbar) || !std::isfinite(mass)) {
    throw ValidationError("hbar and mass must be positive");
  }
}

double UnitConvention::wavenumber(double energy) const {
  validate();
  if (!(energy > 0.0)) throw ValidationError("energy must be positive");
  return std::sqrt(coupling() * energy);
}

void PotentialSegment::validate() const {
  if (!std::isfinite(height)) throw ValidationError("segment height is not finite");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ValidationError("segment length must be positive");
  }
}

PotentialStack::PotentialStack(std::vector<PotentialSegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw ValidationError("potential stack is empty");
  for (const auto& s : segments_) s.validate();
}

double PotentialStack::total_length() const {
  return std::accumulate(segments_.begin(), segments_.end(), 0.0,
                         [](double acc, const PotentialSegment& s) { return acc + s.length; });
}

SampledPotential::SampledPotential(std::vector<double> positions, std::vector<double> values)
    : positions_(std::move(positions)), values_(std::move(values)) {
  if (positions_.size() != values_.size()) {
    throw ValidationError("sampled potential: position and value counts differ");
  }
  if (positions_.size() < 2) throw ValidationError("sampled potential needs at least 2 samples");
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!std::isfinite(positions_[i]) || !std::isfinite(values_[i])) {
      throw ValidationError("sampled potential has non-finite entries");
    }
  }
  const double h = positions_[1] - positions_[0];
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    const double step = positions_[i] - positions_[i - 1];
    if (!(step > 0.0)) throw ValidationError("sample positions must be strictly increasing");
    if (std::abs(step - h) > 1e-6 * h) {
      throw ValidationError("sample positions must be uniformly spaced");
    }
  }
}

BarrierRegime barrier_regime(double energy, const PotentialSegment& segment) {
  const double v0 = segment.height;
  if (std::abs(energy - v0) < kThresholdGuard * std::max(energy, v0)) {
    return BarrierRegime::Threshold;
  }
  return energy < v0 ? BarrierRegime::Tunneling : BarrierRegime::Propagating;
}

TransferMatrix barrier_transfer(double energy, const PotentialSegment& segment,
                                const UnitConvention& units) {
  segment.validate();
  const double k = units.wavenumber(energy);
  const double length = segment.length;
  const Complex i{0.0, 1.0};

  switch (barrier_regime(energy, segment)) {
    case BarrierRegime::Tunneling: {
      const double kappa = std::sqrt(units.coupling() * (segment.height - energy));
      const double sh = std::sinh(kappa * length);
      const double ch = std::cosh(kappa * length);
      const double two_k_kappa = 2.0 * k * kappa;
      return TransferMatrix(ch + i * ((kappa * kappa - k * k) / two_k_kappa * sh),
                            i * ((k * k + kappa * kappa) / two_k_kappa * sh));
    }
    case BarrierRegime::Threshold: {
      const double half_kl = 0.5 * k * length;
      return TransferMatrix(1.0 - i * half_kl, i * half_kl);
    }
    case BarrierRegime::Propagating: {
      const double kbar = std::sqrt(units.coupling() * (energy - segment.height));
      const double sn = std::sin(kbar * length);
      const double cs = std::cos(kbar * length);
      const double two_k_kbar = 2.0 * k * kbar;
      return TransferMatrix(cs - i * ((k * k + kbar * kbar) / two_k_kbar * sn),
                            -i * ((kbar * kbar - k * k) / two_k_kbar * sn));
    }
  }
  throw ValidationError("unreachable barrier regime");
}

ScatteringAmplitudes barrier_amplitudes(double energy, const PotentialSegment& segment,
                                        const UnitConvention& units) {
  return amplitudes_from_transfer(barrier_transfer(energy, segment, units));
}

TransferMatrix free_transfer(double energy, double distance, const UnitConvention& units) {
  if (!(distance >= 0.0)) throw ValidationError("free propagation distance must be >= 0");
  const double k = units.wavenumber(energy);
  return TransferMatrix(std::polar(1.0, -k * distance), Complex{0.0, 0.0});
}

TransferMatrix stack_transfer(double energy, const PotentialStack& stack,
                              const UnitConvention& units) {
  TransferMatrix total;
  for (const auto& segment : stack.segments()) {
    total = compose(total, barrier_transfer(energy, segment, units));
  }
  return total;
}

namespace {

// A slab of width `width` over which V runs linearly from `v_left` to `v_right`.
struct Cell {
  double width;
  double v_left;
  double v_right;
};

// Columns are the two basis solutions (psi, psi').
using Basis = std::array<std::array<double, 2>, 2>;

// Y' = [[0, 1], [q, 0]] Y.
Basis derivative(const Basis& y, double q) {
  return {{{y[1][0], y[1][1]}, {q * y[0][0], q * y[0][1]}}};
}

Basis axpy(const Basis& y, double h, const Basis& k) {
  Basis out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) out[r][c] = y[r][c] + h * k[r][c];
  }
  return out;
}

RealTransferMatrix integrate_cells(double energy, const std::vector<Cell>& cells,
                                   const UnitConvention& units, double det_tolerance) {
  units.validate();
  if (!(energy > 0.0)) throw ValidationError("energy must be positive");
  const double coupling = units.coupling();

  // Start at b with the identity and sweep right to left.
  Basis y{{{1.0, 0.0}, {0.0, 1.0}}};
  for (auto it = cells.rbegin(); it != cells.rend(); ++it) {
    const double h = -it->width;
    const double q_start = coupling * (it->v_right - energy);
    const double q_mid = coupling * (0.5 * (it->v_left + it->v_right) - energy);
    const double q_end = coupling * (it->v_left - energy);
    const Basis k1 = derivative(y, q_start);
    const Basis k2 = derivative(axpy(y, 0.5 * h, k1), q_mid);
    const Basis k3 = derivative(axpy(y, 0.5 * h, k2), q_mid);
    const Basis k4 = derivative(axpy(y, h, k3), q_end);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        y[r][c] += h / 6.0 * (k1[r][c] + 2.0 * k2[r][c] + 2.0 * k3[r][c] + k4[r][c]);
      }
    }
  }

  const auto result = RealTransferMatrix::unchecked(y[0][0], y[0][1], y[1][0], y[1][1]);
  const double det_error = std::abs(result.det() - 1.0);
  if (!(det_error <= det_tolerance)) {
    throw DegeneracyError("integration oracle misses determinant tolerance (|det - 1| = " +
                          std::to_string(det_error) + "); refine the grid");
  }
  return result;
}

}  // namespace

RealTransferMatrix numerical_real_transfer(double energy, const SampledPotential& potential,
                                           const UnitConvention& units, double det_tolerance) {
  const auto& v = potential.values();
  const double scale =
      std::max(1.0, std::abs(*std::max_element(v.begin(), v.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
      })));
  if (std::abs(v.front()) > 1e-12 * scale || std::abs(v.back()) > 1e-12 * scale) {
    throw ValidationError("sampled potential must return to zero at both ends");
  }
  const auto& x = potential.positions();
  std::vector<Cell> cells;
  cells.reserve(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    cells.push_back({x[i + 1] - x[i], v[i], v[i + 1]});
  }
  return integrate_cells(energy, cells, units, det_tolerance);
}

TransferMatrix numerical_transfer(double energy, const SampledPotential& potential,
                                  const UnitConvention& units, double det_tolerance) {
  const RealTransferMatrix r = numerical_real_transfer(energy, potential, units, det_tolerance);
  return from_real_representation(r, units.wavenumber(energy), det_tolerance);
}

RealTransferMatrix numerical_real_transfer(double energy, const PotentialStack& stack,
                                           const UnitConvention& units, std::size_t steps,
                                           double det_tolerance) {
  if (steps == 0) throw ValidationError("oracle needs at least one step");
  const double total = stack.total_length();
  std::vector<Cell> cells;
  cells.reserve(steps + stack.segments().size());
  for (const auto& s : stack.segments()) {
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(steps) * s.length / total)));
    const double width = s.length / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) cells.push_back({width, s.height, s.height});
  }
  return integrate_cells(energy, cells, units, det_tolerance);
}

TransferMatrix numerical_transfer(double energy, const PotentialStack& stack,
                                  const UnitConvention& units, std::size_t steps,
                                  double det_tolerance) {
  const RealTransferMatrix r = numerical_real_transfer(energy, stack, units, steps, det_tolerance);
  return from_real_representation(r, units.wavenumber(energy), det_tolerance);
}

}  // namespace tmdisk

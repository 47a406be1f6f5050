#pragma once

// Transfer matrices of piecewise-constant potentials, plus a direct
// Schroedinger-integration oracle in the (psi, psi') basis.
//
// Sign convention for the barrier: for E < V0 the decay constant is
//   kappa = sqrt(2m (V0 - E)) / hbar,
// for E > V0 the inner wavenumber is
//   kappabar = sqrt(2m (E - V0)) / hbar.
// Phases are referred to mover origins at the two edges of the segment, so a
// segment of zero height gives diag(exp(-ikL), exp(+ikL)) and a symmetric
// segment gives a purely imaginary beta.

#include <cstddef>
#include <span>
#include <vector>

#include "tmdisk/core.hpp"

namespace tmdisk {

// Defaults give hbar = 1 and 2m = 1, so k^2 = E.
struct UnitConvention {
  double hbar = 1.0;
  double mass = 0.5;

  void validate() const;
  // 2m / hbar^2.
  double coupling() const { return 2.0 * mass / (hbar * hbar); }
  double wavenumber(double energy) const;
};

struct PotentialSegment {
  double height = 0.0;  // V0; negative for a well, zero for a free gap
  double length = 0.0;

  void validate() const;
};

class PotentialStack {
 public:
  explicit PotentialStack(std::vector<PotentialSegment> segments);

  const std::vector<PotentialSegment>& segments() const { return segments_; }
  double total_length() const;

 private:
  std::vector<PotentialSegment> segments_;
};

// Uniformly spaced samples of V(x); linear between samples.
class SampledPotential {
 public:
  SampledPotential(std::vector<double> positions, std::vector<double> values);

  const std::vector<double>& positions() const { return positions_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return positions_.size(); }
  double spacing() const { return positions_[1] - positions_[0]; }
  double length() const { return positions_.back() - positions_.front(); }

 private:
  std::vector<double> positions_;
  std::vector<double> values_;
};

enum class BarrierRegime { Tunneling, Threshold, Propagating };

// |E - V0| < 1e-8 max(E, V0) selects the limiting E = V0 formulas.
inline constexpr double kThresholdGuard = 1e-8;

BarrierRegime barrier_regime(double energy, const PotentialSegment& segment);

ScatteringAmplitudes barrier_amplitudes(double energy, const PotentialSegment& segment,
                                        const UnitConvention& units = {});
TransferMatrix barrier_transfer(double energy, const PotentialSegment& segment,
                                const UnitConvention& units = {});
TransferMatrix free_transfer(double energy, double distance, const UnitConvention& units = {});
// Segments left to right in space multiply left to right.
TransferMatrix stack_transfer(double energy, const PotentialStack& stack,
                              const UnitConvention& units = {});

// Default determinant tolerance of the integration oracle.
inline constexpr double kOracleDetTolerance = 1e-8;

// (psi(a), psi'(a)) = R (psi(b), psi'(b)), integrated with fixed-step RK4 from
// the last sample back to the first. Throws DegeneracyError when |det R - 1|
// exceeds det_tolerance (grid too coarse) and ValidationError when the
// potential does not return to zero at both ends.
RealTransferMatrix numerical_real_transfer(double energy, const SampledPotential& potential,
                                           const UnitConvention& units = {},
                                           double det_tolerance = kOracleDetTolerance);
TransferMatrix numerical_transfer(double energy, const SampledPotential& potential,
                                  const UnitConvention& units = {},
                                  double det_tolerance = kOracleDetTolerance);

// Same integrator over a stack. Each segment receives its own sub-grid
// (about `steps` steps in total, at least one per segment) so that every step
// sees a constant potential.
RealTransferMatrix numerical_real_transfer(double energy, const PotentialStack& stack,
                                           const UnitConvention& units = {},
                                           std::size_t steps = 10000,
                                           double det_tolerance = kOracleDetTolerance);
TransferMatrix numerical_transfer(double energy, const PotentialStack& stack,
                                  const UnitConvention& units = {}, std::size_t steps = 10000,
                                  double det_tolerance = kOracleDetTolerance);

}  // namespace tmdisk

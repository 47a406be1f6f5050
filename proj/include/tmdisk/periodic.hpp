#pragma once

// N repetitions of a unit cell: iterated disk maps, closed forms for z_N and
// the N-cell reflectance, and band scans over energy.

#include <cstddef>
#include <span>
#include <vector>

#include "tmdisk/geometry.hpp"
#include "tmdisk/potentials.hpp"

namespace tmdisk {

// z_1 .. z_N with z_j = mobius(M, z_{j-1}).
std::vector<DiskPoint> iterate_disk(const TransferMatrix& m, std::size_t n, DiskPoint z0 = {});

// z_N starting from z0 = 0.
//   hyperbolic: z_N = (1 - chi^N) / (1 - chi^N z+ / z-) z+,
//               chi = (alpha + beta z-) / (alpha + beta z+), |chi| < 1;
//   parabolic:  z_N = N beta z_f^2 / (N beta z_f - 1) on the Tr = +2 representative;
//   elliptic:   rotation by N theta in the canonical frame, mapped back.
DiskPoint closed_form_zN(const TransferMatrix& m, std::size_t n);

// |z_N|^2 from the reflectance formulas, with cosh xi = |Re alpha|:
//   hyperbolic: |beta|^2 / (|beta|^2 + (sinh xi / sinh N xi)^2);
//   parabolic:  |beta|^2 / (|beta|^2 + 1 / N^2).
// ValidationError for elliptic cells, which have no such law.
double reflectance_N(const TransferMatrix& m, std::size_t n);

struct PeriodicResult {
  std::size_t n = 1;
  DiskPoint z_n;
  double reflectance = 0.0;  // |z_n|^2
  ActionClassification cell;
};

// One result per N = 1 .. n_max, from the closed form or by iteration.
std::vector<PeriodicResult> periodic_series(const TransferMatrix& cell, std::size_t n_max,
                                            bool closed_form);

enum class BandStatus { Allowed, Forbidden, Edge };

const char* to_string(BandStatus status);

// Edge inside the parabolic tolerance band of classify_trace(2 half_trace).
BandStatus band_status(double half_trace);

struct BandPoint {
  double energy = 0.0;
  double half_trace = 0.0;  // Re alpha of the cell
  BandStatus status = BandStatus::Allowed;
};

struct BandScan {
  std::vector<BandPoint> points;
  // Energies where |half_trace| crosses 1, refined by bisection to
  // 1e-8 max(1, E); a sample sitting exactly on |half_trace| = 1 is its own edge.
  std::vector<double> edges;
};

// Energies must be positive and non-decreasing. Energy evaluations are spread
// over `workers` threads (0 picks the hardware concurrency); the result does
// not depend on the worker count.
BandScan band_scan(const PotentialStack& cell, std::span<const double> energies,
                   const UnitConvention& units = {}, std::size_t workers = 1);

}  // namespace tmdisk

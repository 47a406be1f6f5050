#include "tmdisk/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "tmdisk/errors.hpp"

namespace tmdisk {

std::vector<DiskPoint> iterate_disk(const TransferMatrix& m, std::size_t n, DiskPoint z0) {
  if (n == 0) throw ValidationError("iterate_disk needs N >= 1");
  std::vector<DiskPoint> points;
  points.reserve(n);
  DiskPoint z = z0;
  for (std::size_t j = 0; j < n; ++j) {
    z = mobius(m, z);
    points.push_back(z);
  }
  return points;
}

DiskPoint closed_form_zN(const TransferMatrix& m, std::size_t n) {
  if (n == 0) throw ValidationError("closed_form_zN needs N >= 1");
  const ActionClassification cls = classify(m);
  const TransferMatrix cell = cls.sign_flipped ? m.negated() : m;
  const Complex alpha = cell.alpha(), beta = cell.beta();
  const double big_n = static_cast<double>(n);

  switch (cls.kind) {
    case ActionKind::Hyperbolic: {
      Complex plus = cls.fixed_points[0].value();
      Complex minus = cls.fixed_points[1].value();
      Complex chi = (alpha + beta * minus) / (alpha + beta * plus);
      if (std::abs(chi) > 1.0) {
        std::swap(plus, minus);
        chi = 1.0 / chi;
      }
      const Complex chi_n = std::polar(std::pow(std::abs(chi), big_n), big_n * std::arg(chi));
      return DiskPoint((1.0 - chi_n) / (1.0 - chi_n * (plus / minus)) * plus);
    }
    case ActionKind::Parabolic: {
      if (cls.fixed_points.empty()) return DiskPoint();
      const Complex zf = cls.fixed_points.front().value();
      return DiskPoint(big_n * beta * zf * zf / (big_n * beta * zf - 1.0));
    }
    case ActionKind::Elliptic: {
      const CanonicalReduction red = reduce_to_canonical(m);
      const TransferMatrix power = conjugate(
          red.conjugator.inverse(), canonical_form(red.kind, big_n * red.parameter));
      return mobius(power, DiskPoint());
    }
  }
  throw ValidationError("unknown action kind");
}

double reflectance_N(const TransferMatrix& m, std::size_t n) {
  if (n == 0) throw ValidationError("reflectance_N needs N >= 1");
  const ActionKind kind = classify_trace(m.trace());
  const double beta2 = std::norm(m.beta());
  const double big_n = static_cast<double>(n);
  switch (kind) {
    case ActionKind::Hyperbolic: {
      const double xi = std::acosh(std::abs(m.alpha().real()));
      const double ratio = std::sinh(xi) / std::sinh(big_n * xi);
      return beta2 / (beta2 + ratio * ratio);
    }
    case ActionKind::Parabolic:
      return beta2 / (beta2 + 1.0 / (big_n * big_n));
    case ActionKind::Elliptic:
      break;
  }
  throw ValidationError("reflectance law is defined for hyperbolic and parabolic cells only");
}

std::vector<PeriodicResult> periodic_series(const TransferMatrix& cell, std::size_t n_max,
                                            bool closed_form) {
  if (n_max == 0) throw ValidationError("periodic series needs N >= 1");
  const ActionClassification cls = classify(cell);
  std::vector<PeriodicResult> out;
  out.reserve(n_max);
  if (closed_form) {
    for (std::size_t n = 1; n <= n_max; ++n) {
      const DiskPoint z = closed_form_zN(cell, n);
      out.push_back({n, z, std::norm(z.value()), cls});
    }
  } else {
    const auto points = iterate_disk(cell, n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
      const DiskPoint z = points[n - 1];
      out.push_back({n, z, std::norm(z.value()), cls});
    }
  }
  return out;
}

const char* to_string(BandStatus status) {
  switch (status) {
    case BandStatus::Allowed:
      return "allowed";
    case BandStatus::Forbidden:
      return "forbidden";
    case BandStatus::Edge:
      return "edge";
  }
  return "unknown";
}

BandStatus band_status(double half_trace) {
  switch (classify_trace(2.0 * half_trace)) {
    case ActionKind::Elliptic:
      return BandStatus::Allowed;
    case ActionKind::Hyperbolic:
      return BandStatus::Forbidden;
    case ActionKind::Parabolic:
      return BandStatus::Edge;
  }
  return BandStatus::Edge;
}

namespace {

double cell_half_trace(const PotentialStack& cell, double energy, const UnitConvention& units) {
  return stack_transfer(energy, cell, units).alpha().real();
}

double edge_function(const PotentialStack& cell, double energy, const UnitConvention& units) {
  return std::abs(cell_half_trace(cell, energy, units)) - 1.0;
}

double bisect_edge(const PotentialStack& cell, double lo, double f_lo, double hi,
                   const UnitConvention& units) {
  while (hi - lo > 1e-8 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = edge_function(cell, mid, units);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BandScan band_scan(const PotentialStack& cell, std::span<const double> energies,
                   const UnitConvention& units, std::size_t workers) {
  units.validate();
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (!(energies[i] > 0.0) || !std::isfinite(energies[i])) {
      throw ValidationError("scan energies must be positive and finite");
    }
    if (i > 0 && energies[i] < energies[i - 1]) {
      throw ValidationError("scan energies must be sorted");
    }
  }
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::max<std::size_t>(1, std::min(workers, energies.size()));

  BandScan scan;
  scan.points.resize(energies.size());
  std::vector<std::exception_ptr> failures(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = w; i < energies.size(); i += workers) {
        const double ht = cell_half_trace(cell, energies[i], units);
        scan.points[i] = {energies[i], ht, band_status(ht)};
      }
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const double f = std::abs(scan.points[i].half_trace) - 1.0;
    if (f == 0.0) {
      if (scan.edges.empty() || scan.edges.back() != scan.points[i].energy) {
        scan.edges.push_back(scan.points[i].energy);
      }
      continue;
    }
    if (i + 1 == scan.points.size()) break;
    const double f_next = std::abs(scan.points[i + 1].half_trace) - 1.0;
    if (f_next != 0.0 && (f > 0.0) != (f_next > 0.0)) {
      scan.edges.push_back(
          bisect_edge(cell, scan.points[i].energy, f, scan.points[i + 1].energy, units));
    }
  }
  return scan;
}

}  // namespace tmdisk

#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "inputs.hpp"
#include "records.hpp"
#include "tmdisk/errors.hpp"
#include "tmdisk/periodic.hpp"
#include "tmdisk/potentials.hpp"
#include "tmdisk/turns.hpp"

namespace tmdisk::cli {

namespace {

struct RunConfig {
  UnitConvention units;
  OutputFormat format = OutputFormat::Json;
  int precision = 12;
  std::size_t workers = 0;  // 0: hardware concurrency
  double tolerance = kConstructionTolerance;
};

struct GlobalOptions {
  std::string format = "json";
  int precision = 12;
  double hbar = 1.0;
  double mass = 0.5;
  std::string workers = "auto";
  double tolerance = kConstructionTolerance;
};

RunConfig resolve_config(const GlobalOptions& g) {
  RunConfig c;
  c.units = {g.hbar, g.mass};
  c.units.validate();
  c.format = g.format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  c.precision = g.precision;
  if (g.workers != "auto") {
    const double w = parse_number(g.workers, "--workers");
    if (w < 1.0 || w != std::floor(w) || w > 4096.0) {
      throw ValidationError("--workers must be 'auto' or an integer >= 1");
    }
    c.workers = static_cast<std::size_t>(w);
  }
  if (!(g.tolerance > 0.0) || !std::isfinite(g.tolerance)) {
    throw ValidationError("--tol must be positive");
  }
  c.tolerance = g.tolerance;
  return c;
}

// One transfer matrix given as amplitudes, entries, a barrier or a cell.
struct MatrixInput {
  std::optional<std::string> r, t, alpha, beta, cell;
  bool barrier = false;
  std::optional<double> energy, height, length;
};

void add_matrix_input(CLI::App* cmd, MatrixInput& in) {
  cmd->add_option("--r", in.r, "reflection amplitude re[,im]");
  cmd->add_option("--t", in.t, "transmission amplitude re[,im]");
  cmd->add_option("--alpha", in.alpha, "matrix entry alpha re[,im]");
  cmd->add_option("--beta", in.beta, "matrix entry beta re[,im]");
  cmd->add_flag("--barrier", in.barrier, "rectangular barrier from --E --V0 --L");
  cmd->add_option("--cell", in.cell, "cell spec V0:L;V0:L;... evaluated at --E");
  cmd->add_option("--E", in.energy, "energy");
  cmd->add_option("--V0", in.height, "barrier height");
  cmd->add_option("--L", in.length, "barrier width");
}

struct ResolvedMatrix {
  TransferMatrix m;
  double flux = 0.0;
  Json source;
};

double require(const std::optional<double>& v, const char* name, const char* mode) {
  if (!v) throw ValidationError(std::string(mode) + " needs " + name);
  return *v;
}

ResolvedMatrix resolve(const MatrixInput& in, const RunConfig& cfg) {
  const bool amps = in.r || in.t;
  const bool entries = in.alpha || in.beta;
  const bool cell = in.cell.has_value();
  if (int(amps) + int(entries) + int(in.barrier) + int(cell) != 1) {
    throw ValidationError("give exactly one of --r/--t, --alpha/--beta, --barrier, --cell");
  }
  if (!in.barrier && !cell && (in.energy || in.height || in.length)) {
    throw ValidationError("--E, --V0 and --L belong to --barrier or --cell");
  }
  if (cell && (in.height || in.length)) throw ValidationError("--cell takes --E only");

  if (amps) {
    if (!in.r || !in.t) throw ValidationError("--r and --t go together");
    const ScatteringAmplitudes a(parse_complex(*in.r, "--r"), parse_complex(*in.t, "--t"),
                                 cfg.tolerance);
    return {transfer_from_amplitudes(a, cfg.tolerance), a.flux_residual(),
            Json{{"type", "amplitudes"}, {"r", complex_json(a.r())}, {"t", complex_json(a.t())}}};
  }
  if (entries) {
    if (!in.alpha || !in.beta) throw ValidationError("--alpha and --beta go together");
    const TransferMatrix m(parse_complex(*in.alpha, "--alpha"), parse_complex(*in.beta, "--beta"),
                           cfg.tolerance);
    return {m, amplitudes_from_transfer(m).flux_residual(), Json{{"type", "matrix"}}};
  }
  const double e = require(in.energy, "--E", in.barrier ? "--barrier" : "--cell");
  TransferMatrix m;
  Json source;
  if (in.barrier) {
    const double v0 = require(in.height, "--V0", "--barrier");
    const double l = require(in.length, "--L", "--barrier");
    m = barrier_transfer(e, PotentialSegment{v0, l}, cfg.units);
    source = Json{{"type", "barrier"}, {"E", e}, {"V0", v0}, {"L", l}};
  } else {
    m = stack_transfer(e, parse_cell_spec(*in.cell), cfg.units);
    source = Json{{"type", "cell"}, {"spec", *in.cell}, {"E", e}};
  }
  return {m, amplitudes_from_transfer(m).flux_residual(), std::move(source)};
}

Json record(const char* command) { return Json{{"command", command}}; }

void merge(Json& into, const Json& from) {
  for (const auto& [key, value] : from.items()) into[key] = value;
}

const char* to_string(BarrierRegime regime) {
  switch (regime) {
    case BarrierRegime::Tunneling:
      return "tunneling";
    case BarrierRegime::Threshold:
      return "threshold";
    case BarrierRegime::Propagating:
      return "propagating";
  }
  return "unknown";
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

// ---- commands -------------------------------------------------------------

void cmd_classify(const MatrixInput& in, const RunConfig& cfg, Emitter& out) {
  const ResolvedMatrix src = resolve(in, cfg);
  Json rec = record("classify");
  rec["source"] = src.source;
  merge(rec, classification_json(classify(src.m)));
  rec["matrix"] = matrix_json(src.m);
  rec["residuals"] = residuals_json(src.m.det_residual(), src.flux);
  out.emit(rec);
}

struct BarrierOptions {
  double energy = 0.0, height = 0.0, length = 0.0;
};

void cmd_barrier(const BarrierOptions& o, const RunConfig& cfg, Emitter& out) {
  const PotentialSegment seg{o.height, o.length};
  const ScatteringAmplitudes a = barrier_amplitudes(o.energy, seg, cfg.units);
  const TransferMatrix m = barrier_transfer(o.energy, seg, cfg.units);
  Json rec = record("barrier");
  rec["E"] = o.energy;
  rec["V0"] = o.height;
  rec["L"] = o.length;
  rec["regime"] = to_string(barrier_regime(o.energy, seg));
  merge(rec, amplitudes_json(a));
  rec["matrix"] = matrix_json(m);
  rec["residuals"] = residuals_json(m.det_residual(), a.flux_residual());
  out.emit(rec);
}

std::vector<ScatteringAmplitudes> parse_systems(const std::vector<std::string>& specs,
                                                const RunConfig& cfg) {
  std::vector<ScatteringAmplitudes> systems;
  for (const auto& s : specs) systems.push_back(parse_system(s, cfg.tolerance));
  return systems;
}

void cmd_compose(const std::vector<std::string>& specs, const RunConfig& cfg, Emitter& out) {
  const auto systems = parse_systems(specs, cfg);
  if (systems.empty()) throw ValidationError("compose needs at least one --system");
  std::vector<TransferMatrix> ms;
  for (const auto& s : systems) ms.push_back(transfer_from_amplitudes(s, cfg.tolerance));

  TransferMatrix forward = ms.front();
  for (std::size_t i = 1; i < ms.size(); ++i) forward = forward * ms[i];
  TransferMatrix backward = ms.back();
  for (std::size_t i = ms.size() - 1; i-- > 0;) backward = backward * ms[i];

  std::optional<ScatteringAmplitudes> direct = systems.front();
  for (std::size_t i = 1; i < systems.size(); ++i) {
    direct = composed_amplitudes(*direct, systems[i]);
    if (!direct) throw DegeneracyError("composite has no transmission (perfect mirror)");
  }

  const ScatteringAmplitudes a = amplitudes_from_transfer(forward);
  const ScatteringAmplitudes b = amplitudes_from_transfer(backward);
  Json rec = record("compose");
  rec["systems"] = systems.size();
  merge(rec, amplitudes_json(a));
  rec["trace"] = forward.trace();
  rec["matrix"] = matrix_json(forward);
  rec["direct"] = Json{{"r", complex_json(direct->r())}, {"t", complex_json(direct->t())}};
  rec["reversed"] = Json{{"r", complex_json(b.r())}, {"t", complex_json(b.t())}};
  rec["order_gap"] = Json{{"r", std::abs(a.r() - b.r())}, {"t", std::abs(a.t() - b.t())}};
  rec["residuals"] = residuals_json(forward.det_residual(), a.flux_residual());
  out.emit(rec);
}

struct SeriesOptions {
  MatrixInput matrix;
  std::size_t n = 1;
  bool closed_form = false;
  bool iterate = false;
  std::string z0 = "0";
  std::size_t samples = 64;
};

void cmd_periodic(const SeriesOptions& o, const RunConfig& cfg, Emitter& out) {
  const ResolvedMatrix src = resolve(o.matrix, cfg);
  const auto series = periodic_series(src.m, o.n, !o.iterate);
  const Json residuals = residuals_json(src.m.det_residual(), src.flux);
  for (const auto& r : series) {
    Json rec = record("periodic");
    rec["n"] = r.n;
    rec["method"] = o.iterate ? "iterate" : "closed_form";
    rec["kind"] = to_string(r.cell.kind);
    rec["z_n"] = complex_json(r.z_n.value());
    rec["reflectance"] = r.reflectance;
    rec["reflectance_law"] =
        r.cell.kind == ActionKind::Elliptic ? Json(nullptr) : Json(reflectance_N(src.m, r.n));
    rec["residuals"] = residuals;
    out.emit(rec);
  }
}

void cmd_orbit(const SeriesOptions& o, const RunConfig& cfg, Emitter& out) {
  const ResolvedMatrix src = resolve(o.matrix, cfg);
  const DiskPoint z0(parse_complex(o.z0, "--z0"));
  const auto points = orbit(src.m, z0, o.samples);
  const char* kind = to_string(classify(src.m).kind);
  const Json residuals = residuals_json(src.m.det_residual(), src.flux);
  for (std::size_t j = 0; j < points.size(); ++j) {
    Json rec = record("orbit");
    rec["index"] = j;
    rec["kind"] = kind;
    rec["z"] = complex_json(points[j].value());
    rec["modulus"] = points[j].modulus();
    rec["residuals"] = residuals;
    out.emit(rec);
  }
}

void cmd_iterates(const SeriesOptions& o, const RunConfig& cfg, Emitter& out) {
  const ResolvedMatrix src = resolve(o.matrix, cfg);
  const DiskPoint z0(parse_complex(o.z0, "--z0"));
  const auto points = iterate_disk(src.m, o.n, z0);
  const Json residuals = residuals_json(src.m.det_residual(), src.flux);
  for (std::size_t j = 0; j < points.size(); ++j) {
    Json rec = record("iterates");
    rec["n"] = j + 1;
    rec["z"] = complex_json(points[j].value());
    rec["modulus"] = points[j].modulus();
    rec["residuals"] = residuals;
    out.emit(rec);
  }
}

Json turn_record(const char* role, const TransferMatrix& m,
                 const std::optional<HyperbolicTurn>& turn) {
  const ActionClassification cls = classify(m);
  Json rec = record("turns");
  rec["role"] = role;
  rec["kind"] = to_string(cls.kind);
  rec["tail_angle"] = turn ? Json(turn->axis().tail_angle()) : Json(nullptr);
  rec["head_angle"] = turn ? Json(turn->axis().head_angle()) : Json(nullptr);
  rec["half_length"] = turn ? Json(turn->half_length()) : Json(nullptr);
  rec["canonical_parameter"] = cls.canonical_parameter;
  rec["trace"] = m.trace();
  rec["residuals"] = residuals_json(m);
  return rec;
}

std::optional<HyperbolicTurn> as_turn(const TurnComposition& c) {
  if (const auto* t = std::get_if<HyperbolicTurn>(&c)) return *t;
  return std::nullopt;
}

void cmd_turns(const std::vector<std::string>& specs, const RunConfig& cfg, Emitter& out) {
  const auto systems = parse_systems(specs, cfg);
  if (systems.size() != 2) throw ValidationError("turns needs exactly two --system values");
  const TransferMatrix m1 = transfer_from_amplitudes(systems[0], cfg.tolerance);
  const TransferMatrix m2 = transfer_from_amplitudes(systems[1], cfg.tolerance);
  const HyperbolicTurn t1 = turn_from_transfer(m1);
  const HyperbolicTurn t2 = turn_from_transfer(m2);
  out.emit(turn_record("system_1", m1, t1));
  out.emit(turn_record("system_2", m2, t2));
  out.emit(turn_record("composite_12", m1 * m2, as_turn(compose_turns(t1, t2))));
  out.emit(turn_record("composite_21", m2 * m1, as_turn(compose_turns(t2, t1))));
  out.emit(turn_record("head_to_tail", m1 * m2, head_to_tail(t1, t2)));
}

struct BandOptions {
  std::string cell;
  double e_min = 0.0, e_max = 0.0;
  std::size_t samples = 201;
};

void cmd_band_scan(const BandOptions& o, const RunConfig& cfg, Emitter& out) {
  if (!(o.e_min > 0.0) || !(o.e_max > o.e_min)) {
    throw ValidationError("band scan needs 0 < --Emin < --Emax");
  }
  if (o.samples < 2) throw ValidationError("band scan needs --samples >= 2");
  const PotentialStack stack = parse_cell_spec(o.cell);
  const BandScan scan = band_scan(stack, linspace(o.e_min, o.e_max, o.samples), cfg.units,
                                  cfg.workers);
  for (const auto& p : scan.points) {
    Json rec = record("band_scan");
    rec["E"] = p.energy;
    rec["half_trace"] = p.half_trace;
    rec["status"] = to_string(p.status);
    rec["residuals"] = residuals_json(stack_transfer(p.energy, stack, cfg.units));
    out.emit(rec);
  }
  for (std::size_t i = 0; i < scan.edges.size(); ++i) {
    const TransferMatrix m = stack_transfer(scan.edges[i], stack, cfg.units);
    Json rec = record("band_edge");
    rec["index"] = i;
    rec["E"] = scan.edges[i];
    rec["half_trace"] = m.alpha().real();
    rec["residuals"] = residuals_json(m);
    out.emit(rec);
  }
}

struct OracleOptions {
  std::optional<std::string> cell, potential;
  double energy = 0.0;
  std::size_t points = 10000;
  double det_tolerance = kOracleDetTolerance;
};

// Piecewise-constant stack with the mean of each sample interval.
PotentialStack interval_means(const SampledPotential& p) {
  std::vector<PotentialSegment> segments;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    segments.push_back({0.5 * (p.values()[i] + p.values()[i + 1]),
                        p.positions()[i + 1] - p.positions()[i]});
  }
  return PotentialStack(std::move(segments));
}

void cmd_oracle_compare(const OracleOptions& o, const RunConfig& cfg, Emitter& out) {
  if (o.cell.has_value() == o.potential.has_value()) {
    throw ValidationError("give exactly one of --cell, --potential");
  }
  if (!(o.det_tolerance > 0.0)) throw ValidationError("--det-tol must be positive");
  TransferMatrix analytic;
  RealTransferMatrix real;
  Json source;
  if (o.cell) {
    const PotentialStack stack = parse_cell_spec(*o.cell);
    analytic = stack_transfer(o.energy, stack, cfg.units);
    real = numerical_real_transfer(o.energy, stack, cfg.units, o.points, o.det_tolerance);
    source = Json{{"type", "cell"}, {"spec", *o.cell}, {"points", o.points}};
  } else {
    const SampledPotential sampled = read_potential_file(*o.potential);
    analytic = stack_transfer(o.energy, interval_means(sampled), cfg.units);
    real = numerical_real_transfer(o.energy, sampled, cfg.units, o.det_tolerance);
    source = Json{{"type", "potential"}, {"path", *o.potential}, {"points", sampled.size()}};
  }
  const TransferMatrix numerical =
      from_real_representation(real, cfg.units.wavenumber(o.energy), o.det_tolerance);
  const double deviation = std::max(std::abs(analytic.alpha() - numerical.alpha()),
                                    std::abs(analytic.beta() - numerical.beta()));
  Json rec = record("oracle_compare");
  rec["source"] = source;
  rec["E"] = o.energy;
  rec["max_deviation"] = deviation;
  rec["analytic"] = matrix_json(analytic);
  rec["numerical"] = matrix_json(numerical);
  rec["real"] = Json{{"a", real.a()}, {"b", real.b()}, {"c", real.c()}, {"d", real.d()}};
  rec["residuals"] = residuals_json(real.det() - 1.0,
                                    amplitudes_from_transfer(numerical).flux_residual());
  out.emit(rec);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transfer matrices of 1D scatterers and their action on the unit disk", "tmdisk"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--precision", g.precision, "significant digits")
      ->check(CLI::Range(6, 17))
      ->capture_default_str();
  app.add_option("--hbar", g.hbar, "reduced Planck constant")->capture_default_str();
  app.add_option("--mass", g.mass, "particle mass")->capture_default_str();
  app.add_option("--workers", g.workers, "band scan threads, or auto")->capture_default_str();
  app.add_option("--tol", g.tolerance, "flux/determinant tolerance for inputs")
      ->capture_default_str();

  MatrixInput classify_in;
  auto* classify_cmd = app.add_subcommand("classify", "classify the disk action of a system");
  add_matrix_input(classify_cmd, classify_in);

  BarrierOptions barrier;
  auto* barrier_cmd = app.add_subcommand("barrier", "rectangular barrier amplitudes and matrix");
  barrier_cmd->add_option("--E", barrier.energy, "energy")->required();
  barrier_cmd->add_option("--V0", barrier.height, "barrier height")->required();
  barrier_cmd->add_option("--L", barrier.length, "barrier width")->required();

  std::vector<std::string> compose_specs;
  auto* compose_cmd = app.add_subcommand("compose", "compose systems, left to right");
  compose_cmd->add_option("--system", compose_specs, "r_re,r_im,t_re,t_im (repeatable)")
      ->required();

  SeriesOptions periodic;
  auto* periodic_cmd = app.add_subcommand("periodic", "z_N and reflectance for N cells");
  add_matrix_input(periodic_cmd, periodic.matrix);
  periodic_cmd->add_option("--N", periodic.n, "number of cells")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* closed_flag = periodic_cmd->add_flag("--closed-form", periodic.closed_form,
                                             "closed-form z_N (default)");
  periodic_cmd->add_flag("--iterate", periodic.iterate, "iterate the disk map")
      ->excludes(closed_flag);

  SeriesOptions orbit_opts;
  auto* orbit_cmd = app.add_subcommand("orbit", "orbit of z0 under the one-parameter family");
  add_matrix_input(orbit_cmd, orbit_opts.matrix);
  orbit_cmd->add_option("--z0", orbit_opts.z0, "starting point re[,im]")->capture_default_str();
  orbit_cmd->add_option("--samples", orbit_opts.samples, "number of points")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))
      ->capture_default_str();

  SeriesOptions iterates;
  auto* iterates_cmd = app.add_subcommand("iterates", "successive images of z0");
  add_matrix_input(iterates_cmd, iterates.matrix);
  iterates_cmd->add_option("--N", iterates.n, "number of iterates")
      ->required()
      ->check(CLI::PositiveNumber);
  iterates_cmd->add_option("--z0", iterates.z0, "starting point re[,im]")->capture_default_str();

  std::vector<std::string> turn_specs;
  auto* turns_cmd = app.add_subcommand("turns", "turns of two systems and their composites");
  turns_cmd->add_option("--system", turn_specs, "r_re,r_im,t_re,t_im (twice)")->required();

  BandOptions band;
  auto* band_cmd = app.add_subcommand("band-scan", "allowed and forbidden energies of a cell");
  band_cmd->add_option("--cell", band.cell, "cell spec V0:L;V0:L;...")->required();
  band_cmd->add_option("--Emin", band.e_min, "lowest energy")->required();
  band_cmd->add_option("--Emax", band.e_max, "highest energy")->required();
  band_cmd->add_option("--samples", band.samples, "energy samples")->capture_default_str();

  OracleOptions oracle;
  auto* oracle_cmd =
      app.add_subcommand("oracle-compare", "analytic matrix against direct integration");
  oracle_cmd->add_option("--cell", oracle.cell, "cell spec V0:L;V0:L;...");
  oracle_cmd->add_option("--potential", oracle.potential, "two-column sampled potential file");
  oracle_cmd->add_option("--E", oracle.energy, "energy")->required();
  oracle_cmd->add_option("--points", oracle.points, "integration steps for --cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  oracle_cmd->add_option("--det-tol", oracle.det_tolerance, "determinant tolerance")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << error_record(kExitValidation, "usage", e.what()) << '\n';
    return kExitValidation;
  }

  // Records are buffered so that a failure leaves standard output empty.
  std::ostringstream buffer;
  try {
    const RunConfig cfg = resolve_config(g);
    Emitter emitter(buffer, cfg.format, cfg.precision);
    if (classify_cmd->parsed()) cmd_classify(classify_in, cfg, emitter);
    if (barrier_cmd->parsed()) cmd_barrier(barrier, cfg, emitter);
    if (compose_cmd->parsed()) cmd_compose(compose_specs, cfg, emitter);
    if (periodic_cmd->parsed()) cmd_periodic(periodic, cfg, emitter);
    if (orbit_cmd->parsed()) cmd_orbit(orbit_opts, cfg, emitter);
    if (iterates_cmd->parsed()) cmd_iterates(iterates, cfg, emitter);
    if (turns_cmd->parsed()) cmd_turns(turn_specs, cfg, emitter);
    if (band_cmd->parsed()) cmd_band_scan(band, cfg, emitter);
    if (oracle_cmd->parsed()) cmd_oracle_compare(oracle, cfg, emitter);
  } catch (const ValidationError& e) {
    err << error_record(kExitValidation, "validation", e.what()) << '\n';
    return kExitValidation;
  } catch (const DegeneracyError& e) {
    err << error_record(kExitDegeneracy, "degeneracy", e.what()) << '\n';
    return kExitDegeneracy;
  } catch (const std::exception& e) {
    err << error_record(kExitInternal, "internal", e.what()) << '\n';
    return kExitInternal;
  }
  out << buffer.str();
  out.flush();
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace tmdisk::cli

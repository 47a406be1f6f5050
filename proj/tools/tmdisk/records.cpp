#include "records.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <utility>
#include <vector>

namespace tmdisk::cli {

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json matrix_json(const TransferMatrix& m) {
  return Json{{"alpha", complex_json(m.alpha())}, {"beta", complex_json(m.beta())}};
}

Json amplitudes_json(const ScatteringAmplitudes& a) {
  return Json{{"r", complex_json(a.r())},
              {"t", complex_json(a.t())},
              {"reflectance", std::norm(a.r())},
              {"transmittance", std::norm(a.t())}};
}

Json classification_json(const ActionClassification& c) {
  Json fixed = Json::array();
  for (const auto& p : c.fixed_points) fixed.push_back(complex_json(p.value()));
  return Json{{"kind", to_string(c.kind)},
              {"trace", c.trace},
              {"canonical_parameter", c.canonical_parameter},
              {"sign_flipped", c.sign_flipped},
              {"fixed_points", std::move(fixed)}};
}

Json turn_json(const HyperbolicTurn& turn) {
  return Json{{"tail_angle", turn.axis().tail_angle()},
              {"head_angle", turn.axis().head_angle()},
              {"half_length", turn.half_length()}};
}

Json residuals_json(double det, double flux) { return Json{{"det", det}, {"flux", flux}}; }

Json residuals_json(const TransferMatrix& m) {
  return residuals_json(m.det_residual(), amplitudes_from_transfer(m).flux_residual());
}

namespace {

double round_to(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return std::strtod(buf, nullptr);
}

std::string format_number(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

void flatten(const Json& value, const std::string& prefix,
             std::vector<std::pair<std::string, const Json*>>& cells) {
  if (value.is_object()) {
    for (const auto& [key, child] : value.items()) {
      flatten(child, prefix.empty() ? key : prefix + "_" + key, cells);
    }
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      flatten(value[i], prefix + "_" + std::to_string(i), cells);
    }
  } else {
    cells.emplace_back(prefix, &value);
  }
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Json& v, int precision) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_number(v.get<double>(), precision);
  if (v.is_number()) return v.dump();
  if (v.is_string()) return csv_quote(v.get<std::string>());
  return csv_quote(v.dump());
}

}  // namespace

Json rounded(const Json& value, int precision) {
  if (value.is_number_float()) {
    const double v = value.get<double>();
    if (!std::isfinite(v)) return nullptr;
    // Adding 0.0 turns -0 into +0.
    return round_to(v, precision) + 0.0;
  }
  if (value.is_object()) {
    Json out = Json::object();
    for (const auto& [key, child] : value.items()) out[key] = rounded(child, precision);
    return out;
  }
  if (value.is_array()) {
    Json out = Json::array();
    for (const auto& child : value) out.push_back(rounded(child, precision));
    return out;
  }
  return value;
}

Emitter::Emitter(std::ostream& out, OutputFormat format, int precision)
    : out_(out), format_(format), precision_(precision) {}

void Emitter::emit(const Json& record) {
  const Json clean = rounded(record, precision_);
  if (format_ == OutputFormat::Json) {
    out_ << clean.dump() << '\n';
    return;
  }
  std::vector<std::pair<std::string, const Json*>> cells;
  flatten(clean, "", cells);
  std::string header, row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) {
      header += ',';
      row += ',';
    }
    header += csv_quote(cells[i].first);
    row += csv_cell(*cells[i].second, precision_);
  }
  if (header_ != header) {
    out_ << header << '\n';
    header_ = header;
  }
  out_ << row << '\n';
}

std::string error_record(int code, const std::string& kind, const std::string& message) {
  return Json{{"error", {{"code", code}, {"kind", kind}, {"message", message}}}}.dump();
}

}  // namespace tmdisk::cli

#include "inputs.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "tmdisk/errors.hpp"

namespace tmdisk::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

double parse_number(std::string_view text, std::string_view what) {
  const std::string_view s = trim(text);
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  // from_chars rejects a leading '+'.
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ValidationError(std::string(what) + ": not a finite number: '" + std::string(text) + "'");
  }
  return value;
}

Complex parse_complex(std::string_view text, std::string_view what) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return {parse_number(parts[0], what), 0.0};
  if (parts.size() == 2) return {parse_number(parts[0], what), parse_number(parts[1], what)};
  throw ValidationError(std::string(what) + ": expected 're' or 're,im', got '" +
                        std::string(text) + "'");
}

ScatteringAmplitudes parse_system(std::string_view text, double tolerance) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) {
    throw ValidationError("system: expected 'r_re,r_im,t_re,t_im', got '" + std::string(text) +
                          "'");
  }
  const Complex r{parse_number(parts[0], "system r"), parse_number(parts[1], "system r")};
  const Complex t{parse_number(parts[2], "system t"), parse_number(parts[3], "system t")};
  return ScatteringAmplitudes(r, t, tolerance);
}

PotentialStack parse_cell_spec(std::string_view text) {
  std::vector<PotentialSegment> segments;
  for (const auto part : split(text, ';')) {
    if (trim(part).empty()) continue;
    const auto fields = split(part, ':');
    if (fields.size() != 2) {
      throw ValidationError("cell: expected 'V0:L' segments, got '" + std::string(part) + "'");
    }
    segments.push_back({parse_number(fields[0], "cell V0"), parse_number(fields[1], "cell L")});
  }
  if (segments.empty()) throw ValidationError("cell: no segments in '" + std::string(text) + "'");
  return PotentialStack(std::move(segments));
}

SampledPotential parse_potential(std::istream& in) {
  std::vector<double> x, v;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    view = trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    std::istringstream fields{std::string(view)};
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ValidationError("potential line " + std::to_string(line_no) +
                            ": expected two columns");
    }
    x.push_back(parse_number(a, "potential x"));
    v.push_back(parse_number(b, "potential V"));
  }
  return SampledPotential(std::move(x), std::move(v));
}

SampledPotential read_potential_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open potential file '" + path + "'");
  return parse_potential(in);
}

}  // namespace tmdisk::cli

#pragma once

// Text formats accepted on the command line.
//
//   complex   "re" or "re,im"
//   system    "r_re,r_im,t_re,t_im"
//   cell      "V0:L;V0:L;..." segments from left to right
//   potential two columns "x V" per line, '#' starts a comment

#include <iosfwd>
#include <string>
#include <string_view>

#include "tmdisk/core.hpp"
#include "tmdisk/potentials.hpp"

namespace tmdisk::cli {

// All parsers throw ValidationError with a message naming the bad input.
double parse_number(std::string_view text, std::string_view what);
Complex parse_complex(std::string_view text, std::string_view what);
ScatteringAmplitudes parse_system(std::string_view text, double tolerance);
PotentialStack parse_cell_spec(std::string_view text);
SampledPotential parse_potential(std::istream& in);
SampledPotential read_potential_file(const std::string& path);

}  // namespace tmdisk::cli

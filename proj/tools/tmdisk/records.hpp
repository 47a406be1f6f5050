#pragma once

// Output records. Every result is assembled as an ordered JSON object and
// written either as one JSON line or as one CSV row. CSV flattens nested
// keys with '_' (complex numbers become *_re / *_im) and repeats the header
// whenever the set of columns changes.

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "tmdisk/geometry.hpp"
#include "tmdisk/turns.hpp"

namespace tmdisk::cli {

using Json = nlohmann::ordered_json;

enum class OutputFormat { Json, Csv };

Json complex_json(Complex z);
Json matrix_json(const TransferMatrix& m);
Json amplitudes_json(const ScatteringAmplitudes& a);
Json classification_json(const ActionClassification& c);
Json turn_json(const HyperbolicTurn& turn);
// {"det": |alpha|^2 - |beta|^2 - 1, "flux": |r|^2 + |t|^2 - 1}.
Json residuals_json(double det, double flux);
Json residuals_json(const TransferMatrix& m);

// Doubles rounded to `precision` significant digits; non-finite values become null.
Json rounded(const Json& value, int precision);

class Emitter {
 public:
  Emitter(std::ostream& out, OutputFormat format, int precision);

  void emit(const Json& record);

 private:
  std::ostream& out_;
  OutputFormat format_;
  int precision_;
  std::optional<std::string> header_;
};

// {"error": {"code", "kind", "message"}} as a single line.
std::string error_record(int code, const std::string& kind, const std::string& message);

}  // namespace tmdisk::cli

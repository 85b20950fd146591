#pragma once

// Command-line surface: file ingestion, report assembly and emission.
//
// Every command reads one JSON input file and writes one report, either as
// JSON or as CSV (summary in leading "# key: value" lines, then one table).
// Exit status: 0 when a verdict was computed (true or false), 2 for input or
// parse errors, 3 for hypothesis/family violations, 4 for numerical failures.
// Failures also print one JSON line {"error": category, "message": ...} on the
// diagnostic stream.

#include <nullframe/errors.hpp>
#include <nullframe/synthesis.hpp>

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nullframe::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kInputError = 2, kHypothesisError = 3, kNumericalError = 4 };

int exit_code(ErrorCategory category);

/// Curve file: {"dimension", "parameter", "components", "domain": [a, b], "grid"?}.
struct CurveFile {
  Curve curve;
  std::optional<int> grid;
};

/// Profile file: {"dimension", "parameter", "curvatures", "interval": [a, b],
/// "initial_point"?, "initial_frame"?} with initial_frame given as the columns
/// L1, L2, W3, N2, N1, W4, ... .
struct ProfileFile {
  CurvatureProfile profile;
  Interval interval;
  std::optional<Matrix> initial_state;
};

std::string read_file(const std::string& path);
Json parse_json(const std::string& text);

CurveFile curve_from_json(const Json& j);
ProfileFile profile_from_json(const Json& j);
/// True for a saved synthesis as written by the synthesize command.
bool is_stored_synthesis(const Json& j);
SynthesizedCurve synthesis_from_json(const Json& j);

/// Report of the synthesize command; includes every stored state so that the
/// file can be framed again.
Json synthesis_to_json(const ProfileFile& input, const SynthesizedCurve& curve);

/// Seventeen significant digits, lossless for doubles; non-finite values as null.
std::string format_number(double v);
/// Deterministic JSON serialization using format_number for every double.
std::string dump_json(const Json& j, int indent = 2);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& text);
/// "# key: value" lines for scalar summary fields, then the table.
std::string render_csv(const Json& summary, const std::vector<std::string>& header,
                       const std::vector<std::vector<Json>>& rows);

std::string sha256_hex(const std::string& bytes);

/// Write via a temporary file in the same directory, then rename.
void write_atomically(const std::string& path, const std::string& content);

/// Run the CLI with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nullframe::cli

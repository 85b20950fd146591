#include <nullframe/cli.hpp>

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace nullframe::cli {

namespace {

template <typename F>
auto field(const Json& j, const char* name, F&& convert) -> decltype(convert(j)) {
  if (!j.is_object()) throw InputError("input file must contain a JSON object");
  const auto it = j.find(name);
  if (it == j.end()) throw InputError(std::string("missing field '") + name + "'");
  try {
    return convert(*it);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("field '") + name + "': " + e.what());
  }
}

Interval interval_from(const Json& j, const char* name) {
  const std::vector<double> v = field(j, name, [](const Json& x) { return x.get<std::vector<double>>(); });
  if (v.size() != 2) throw InputError(std::string("field '") + name + "' must be [lo, hi]");
  if (!(v[0] < v[1]) || !std::isfinite(v[0]) || !std::isfinite(v[1])) {
    throw InputError(std::string("field '") + name + "' must satisfy lo < hi");
  }
  return {v[0], v[1]};
}

int dimension_from(const Json& j) {
  const int n = field(j, "dimension", [](const Json& x) { return x.get<int>(); });
  if (n < 4) throw InputError("dimension must be at least 4, got " + std::to_string(n));
  return n;
}

std::string parameter_from(const Json& j) {
  if (!j.contains("parameter")) return "s";
  return field(j, "parameter", [](const Json& x) { return x.get<std::string>(); });
}

Vector vector_from(const Json& j, int n, const std::string& what) {
  std::vector<double> v;
  try {
    v = j.get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(what + ": " + e.what());
  }
  if (static_cast<int>(v.size()) != n) {
    throw InputError(what + " has " + std::to_string(v.size()) + " entries, dimension is " + std::to_string(n));
  }
  return Eigen::Map<const Vector>(v.data(), n);
}

Matrix columns_from(const Json& j, int n, int columns, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != columns) {
    throw InputError(what + " must list " + std::to_string(columns) + " column vectors");
  }
  Matrix m(n, columns);
  for (int c = 0; c < columns; ++c) m.col(c) = vector_from(j[c], n, what + " column " + std::to_string(c));
  return m;
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

void dump(const Json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const Json& e : j) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const Json& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump(e, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::input:
      return kInputError;
    case ErrorCategory::hypothesis:
      return kHypothesisError;
    case ErrorCategory::numerical:
      return kNumericalError;
  }
  return kInputError;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

CurveFile curve_from_json(const Json& j) {
  const int n = dimension_from(j);
  const std::string parameter = parameter_from(j);
  const auto components =
      field(j, "components", [](const Json& x) { return x.get<std::vector<std::string>>(); });
  if (static_cast<int>(components.size()) != n) {
    throw InputError("file declares dimension " + std::to_string(n) + " but lists " +
                     std::to_string(components.size()) + " components");
  }
  std::vector<Expr> exprs;
  for (std::size_t i = 0; i < components.size(); ++i) {
    try {
      exprs.push_back(parse(components[i], parameter));
    } catch (const SyntaxError& e) {
      throw InputError("component " + std::to_string(i) + ": " + e.what());
    }
  }
  CurveFile f{Curve(std::move(exprs), parameter, interval_from(j, "domain")), std::nullopt};
  if (j.contains("grid")) {
    const int g = field(j, "grid", [](const Json& x) { return x.get<int>(); });
    if (g < 2) throw InputError("grid density must be at least 2");
    f.grid = g;
  }
  return f;
}

ProfileFile profile_from_json(const Json& j) {
  const int n = dimension_from(j);
  const std::string parameter = parameter_from(j);
  const auto curvatures =
      field(j, "curvatures", [](const Json& x) { return x.get<std::vector<std::string>>(); });
  ProfileFile f;
  try {
    f.profile = CurvatureProfile::from_strings(n, curvatures, parameter);
  } catch (const SyntaxError& e) {
    throw InputError(std::string("curvature: ") + e.what());
  }
  f.interval = interval_from(j, "interval");
  if (j.contains("initial_point") || j.contains("initial_frame")) {
    Matrix state = standard_initial_frame(n);
    if (j.contains("initial_point")) state.col(0) = vector_from(j["initial_point"], n, "initial_point");
    if (j.contains("initial_frame")) state.rightCols(n) = columns_from(j["initial_frame"], n, n, "initial_frame");
    f.initial_state = state;
  }
  return f;
}

bool is_stored_synthesis(const Json& j) {
  return j.is_object() && j.contains("curvatures") && j.contains("samples");
}

SynthesizedCurve synthesis_from_json(const Json& j) {
  const int n = dimension_from(j);
  const auto curvatures =
      field(j, "curvatures", [](const Json& x) { return x.get<std::vector<std::string>>(); });
  CurvatureProfile profile = CurvatureProfile::from_strings(n, curvatures, parameter_from(j));
  const Json& samples = j["samples"];
  if (!samples.is_array()) throw InputError("field 'samples' must be an array");
  std::vector<double> grid;
  std::vector<Matrix> states;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Json& s = samples[i];
    const std::string what = "sample " + std::to_string(i);
    grid.push_back(field(s, "s", [](const Json& x) { return x.get<double>(); }));
    if (!s.contains("state")) throw InputError(what + " has no state");
    states.push_back(columns_from(s["state"], n, n + 1, what + " state"));
  }
  return SynthesizedCurve::from_states(std::move(profile), std::move(grid), std::move(states));
}

Json synthesis_to_json(const ProfileFile& input, const SynthesizedCurve& curve) {
  const CurvatureProfile& p = curve.profile();
  Json j;
  j["dimension"] = p.dimension;
  j["parameter"] = p.parameter;
  Json k = Json::array();
  for (const Expr& e : p.curvatures) k.push_back(e.to_string());
  j["curvatures"] = k;
  j["interval"] = {input.interval.lo, input.interval.hi};
  j["step"] = curve.step();
  j["max_defect"] = curve.max_defect();
  Json samples = Json::array();
  for (std::size_t i = 0; i < curve.grid().size(); ++i) {
    const Matrix& st = curve.states()[i];
    Json columns = Json::array();
    for (Eigen::Index c = 0; c < st.cols(); ++c) columns.push_back(vector_json(st.col(c)));
    Json sample;
    sample["s"] = curve.grid()[i];
    sample["state"] = columns;
    samples.push_back(sample);
  }
  j["samples"] = samples;
  return j;
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Keep a marker so the value reads back as a floating-point number.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump(j, indent, 0, out);
  out += '\n';
  return out;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render_csv(const Json& summary, const std::vector<std::string>& header,
                       const std::vector<std::vector<Json>>& rows) {
  auto cell = [](const Json& v) {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_string()) return csv_field(v.get<std::string>());
    if (v.is_structured()) {
      std::string compact = dump_json(v, -1);
      compact.pop_back();  // trailing newline
      return csv_field(compact);
    }
    return v.dump();
  };
  std::string out;
  for (auto it = summary.begin(); it != summary.end(); ++it) {
    out += "# " + it.key() + ": " + cell(it.value()) + "\n";
  }
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + csv_field(header[i]);
  out += "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell(row[i]);
    out += "\r\n";
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + temp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw InputError("short write to '" + temp.string() + "'");
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp);
    throw InputError("cannot rename output into '" + path + "': " + ec.message());
  }
}

}  // namespace nullframe::cli

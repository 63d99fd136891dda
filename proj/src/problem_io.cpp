#include "poslr/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "poslr/json_eigen.hpp"

namespace poslr {
namespace {

using json = nlohmann::json;

double parse_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(where + ": non-finite number");
  return v;
}

Eigen::VectorXd parse_vector(const json& j, const std::string& key) {
  if (!j.is_array()) throw ParseError(key + ": expected an array");
  Eigen::VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = parse_number(j[i], key);
  return v;
}

// An empty array has no row to infer the width from; `cols_if_empty`
// supplies it. Rows of length zero give an n×0 matrix.
Eigen::MatrixXd parse_matrix(const json& j, const std::string& key,
                             Index cols_if_empty) {
  if (!j.is_array()) throw ParseError(key + ": expected an array of rows");
  if (j.empty()) return Eigen::MatrixXd(0, cols_if_empty);
  const Index rows = static_cast<Index>(j.size());
  if (!j[0].is_array()) throw ParseError(key + ": expected an array of rows");
  const Index cols = static_cast<Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw DimensionMismatch(key + ": ragged rows");
    for (Index k = 0; k < cols; ++k)
      m(i, k) = parse_number(row[static_cast<std::size_t>(k)], key);
  }
  return m;
}

Horizon<double> parse_horizon(const json& doc) {
  if (!doc.contains("horizon")) return Horizon<double>::infinite();
  const json& h = doc["horizon"];
  if (h.is_string()) {
    if (h.get<std::string>() == "infinite") return Horizon<double>::infinite();
    throw ParseError("horizon: expected \"infinite\" or {\"finite\": T}");
  }
  if (h.is_object() && h.contains("finite"))
    return Horizon<double>::finite(parse_number(h["finite"], "horizon.finite"));
  throw ParseError("horizon: expected \"infinite\" or {\"finite\": T}");
}

}  // namespace

Problem load_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed problem document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("problem document must be an object");
  for (const char* key : {"A", "B", "E", "s", "r"})
    if (!doc.contains(key)) throw ParseError(std::string("missing key ") + key);

  Problem spec;
  spec.A = parse_matrix(doc["A"], "A", 0);
  const Index n = spec.A.rows();
  spec.B = parse_matrix(doc["B"], "B", 0);
  if (spec.B.rows() == 0) spec.B.resize(n, 0);
  spec.E = parse_matrix(doc["E"], "E", n);
  spec.s = parse_vector(doc["s"], "s");
  spec.r = parse_vector(doc["r"], "r");

  if (doc.contains("F")) {
    spec.F = parse_matrix(doc["F"], "F", 0);
    if (spec.F.rows() == 0) spec.F.resize(n, 0);
  } else {
    spec.F.resize(n, 0);
  }
  spec.gamma = doc.contains("gamma") ? parse_vector(doc["gamma"], "gamma")
                                     : Eigen::VectorXd(spec.F.cols());
  if (!doc.contains("gamma") && spec.F.cols() > 0)
    throw ParseError("gamma is required when F is present");

  if (doc.contains("H")) {
    spec.H = parse_matrix(doc["H"], "H", 0);
    if (spec.H.rows() == 0) spec.H.resize(n, 0);
  } else {
    spec.H.resize(n, 0);
  }
  spec.G = doc.contains("G") ? parse_matrix(doc["G"], "G", n)
                             : Eigen::MatrixXd(0, n);
  spec.delta = doc.contains("delta") ? parse_vector(doc["delta"], "delta")
                                     : Eigen::VectorXd::Zero(spec.H.cols());
  spec.x0 = doc.contains("x0") ? parse_vector(doc["x0"], "x0")
                               : Eigen::VectorXd::Zero(n);
  spec.horizon = parse_horizon(doc);
  check_dimensions(spec);
  return spec;
}

Problem load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_problem(buf.str());
}

std::string save_problem(const Problem& spec) {
  check_dimensions(spec);
  json doc;
  doc["A"] = matrix_to_json(spec.A);
  doc["B"] = matrix_to_json(spec.B);
  doc["E"] = matrix_to_json(spec.E);
  doc["s"] = vector_to_json(spec.s);
  doc["r"] = vector_to_json(spec.r);
  if (spec.F.cols() > 0) {
    doc["F"] = matrix_to_json(spec.F);
    doc["gamma"] = vector_to_json(spec.gamma);
  }
  if (spec.H.cols() > 0) {
    doc["H"] = matrix_to_json(spec.H);
    doc["G"] = matrix_to_json(spec.G);
    doc["delta"] = vector_to_json(spec.delta);
  }
  doc["x0"] = vector_to_json(spec.x0);
  if (spec.horizon.is_finite())
    doc["horizon"] = {{"finite", spec.horizon.final_time()}};
  else
    doc["horizon"] = "infinite";
  return doc.dump(2);
}

void save_problem_file(const Problem& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << save_problem(spec) << '\n';
}

Eigen::MatrixXd load_gain(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed gain document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("K")) throw ParseError("gain document needs a key K");
  return parse_matrix(doc["K"], "K", 0);
}

Eigen::MatrixXd load_gain_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_gain(buf.str());
}

std::string save_gain(const Eigen::MatrixXd& K) {
  json doc;
  doc["K"] = matrix_to_json(K);
  return doc.dump(2);
}

}  // namespace poslr

#pragma once

// JSON encodings of spaces, point sets, distance matrices and results.
// Matrices are row-major arrays of rows.

#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ipspace/characterizations.hpp"
#include "ipspace/distance_geometry.hpp"
#include "ipspace/isometry_extension.hpp"
#include "ipspace/locus.hpp"
#include "ipspace/spaces.hpp"

namespace ipspace::io {

using json = nlohmann::json;

/// Malformed or mis-typed input; carries the location when known.
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error("ParseError", what) {}
};

inline json to_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline json to_json(const std::vector<Vector>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

inline double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(where + ": number is not finite");
  return v;
}

inline Vector vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Index>(i)] = number_at(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

inline Matrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError(rw + ": ragged or missing row");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          number_at(j[r][c], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

// ---------------------------------------------------------------------------
// Spaces

inline NormedSpace space_from_json(const json& j, const std::string& where = "space") {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  const std::string field = j.value("field", "real");
  Field f;
  if (field == "real") f = Field::Real;
  else if (field == "complex") f = Field::Complex;
  else throw ParseError(where + ".field: expected \"real\" or \"complex\"");
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
    throw ParseError(where + ".dim: expected a positive integer");
  }
  const Index dim = j["dim"].get<Index>();
  if (!j.contains("norm") || !j["norm"].is_object()) throw ParseError(where + ".norm: missing");
  const json& nj = j["norm"];
  const std::string kind = nj.value("kind", "");
  auto read_p = [&]() -> std::optional<double> {
    if (!nj.contains("p")) throw ParseError(where + ".norm.p: missing");
    const json& p = nj["p"];
    if (p.is_string()) {
      const auto s = p.get<std::string>();
      if (s == "inf" || s == "infinity") return std::nullopt;
      throw ParseError(where + ".norm.p: expected a number or \"inf\"");
    }
    return number_at(p, where + ".norm.p");
  };
  NormKind k;
  if (kind == "p") {
    const auto p = read_p();
    if (p) k = PNorm{*p};
    else k = SupNorm{};
  } else if (kind == "sup") {
    k = SupNorm{};
  } else if (kind == "weighted_p") {
    const auto p = read_p();
    if (!p) throw ParseError(where + ".norm.p: weighted norms need finite p");
    if (!nj.contains("weights")) throw ParseError(where + ".norm.weights: missing");
    const Vector w = vector_from_json(nj["weights"], where + ".norm.weights");
    k = WeightedPNorm{*p, std::vector<double>(w.data(), w.data() + w.size())};
  } else if (kind == "quadratic") {
    if (!nj.contains("Q")) throw ParseError(where + ".norm.Q: missing");
    k = QuadraticForm{matrix_from_json(nj["Q"], where + ".norm.Q")};
  } else {
    throw ParseError(where + ".norm.kind: expected one of p, sup, weighted_p, quadratic");
  }
  return NormedSpace(f, dim, std::move(k));
}

inline json to_json(const NormedSpace& s) {
  json j;
  j["field"] = s.field() == Field::Complex ? "complex" : "real";
  j["dim"] = s.dim();
  if (s.paired() && s.field() == Field::Real) j["realified"] = true;
  json n;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PNorm>) {
          n = {{"kind", "p"}, {"p", k.p}};
        } else if constexpr (std::is_same_v<K, WeightedPNorm>) {
          n = {{"kind", "weighted_p"}, {"p", k.p}, {"weights", k.weights}};
        } else if constexpr (std::is_same_v<K, SupNorm>) {
          n = {{"kind", "sup"}};
        } else {
          n = {{"kind", "quadratic"}, {"Q", to_json(k.q)}};
        }
      },
      s.kind());
  j["norm"] = std::move(n);
  return j;
}

// ---------------------------------------------------------------------------
// Point sets: {"space": {...}, "points": [[...]], "labels": [...], "pairing": [...]}

struct PointSet {
  PointConfig config;
  std::optional<std::vector<std::size_t>> pairing;
  std::optional<std::vector<double>> dists;
};

inline std::vector<std::size_t> pairing_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of indices");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() < 0) {
      throw ParseError(where + "[" + std::to_string(i) + "]: expected a nonnegative integer");
    }
    out.push_back(j[i].get<std::size_t>());
  }
  return out;
}

inline PointSet point_set_from_json(const json& j, const std::optional<NormedSpace>& fallback,
                                    const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  std::optional<NormedSpace> space;
  if (j.contains("space")) space = space_from_json(j["space"], where + ".space");
  else if (fallback) space = *fallback;
  else throw ParseError(where + ".space: missing");
  if (!j.contains("points") || !j["points"].is_array() || j["points"].empty()) {
    throw ParseError(where + ".points: expected a non-empty array");
  }
  std::vector<Vector> pts;
  for (std::size_t i = 0; i < j["points"].size(); ++i)
    pts.push_back(vector_from_json(j["points"][i], where + ".points[" + std::to_string(i) + "]"));
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) throw ParseError(where + ".labels: expected an array");
    for (const auto& l : j["labels"]) {
      if (!l.is_string()) throw ParseError(where + ".labels: expected strings");
      labels.push_back(l.get<std::string>());
    }
  }
  PointSet out{PointConfig(*space, std::move(pts), std::move(labels)), std::nullopt, std::nullopt};
  if (j.contains("pairing")) out.pairing = pairing_from_json(j["pairing"], where + ".pairing");
  if (j.contains("dists")) {
    const Vector d = vector_from_json(j["dists"], where + ".dists");
    out.dists = std::vector<double>(d.data(), d.data() + d.size());
  }
  return out;
}

inline json to_json(const PointConfig& c) {
  json j;
  j["space"] = to_json(c.space);
  j["points"] = to_json(c.points);
  if (!c.labels.empty()) j["labels"] = c.labels;
  return j;
}

// ---------------------------------------------------------------------------
// Distance matrices: {"n": n+1, "d": [[...]]}

inline DistanceMatrix distance_matrix_from_json(const json& j, const std::string& where = "dm") {
  if (!j.is_object() || !j.contains("d")) throw ParseError(where + ".d: missing");
  Matrix d = matrix_from_json(j["d"], where + ".d");
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<Index>() != d.rows()) {
      throw ParseError(where + ".n: does not match the number of rows");
    }
  }
  return DistanceMatrix(std::move(d));
}

inline json to_json(const DistanceMatrix& dm) {
  return {{"n", dm.points()}, {"d", to_json(dm.entries())}};
}

// ---------------------------------------------------------------------------
// Results

inline json params_json(const ConditionId& c) {
  json p = json::object();
  switch (c.tag) {
    case Condition::IP2: {
      json g = json::array();
      for (auto [a, b] : c.ab_grid) g.push_back({a, b});
      p["ab_grid"] = std::move(g);
      break;
    }
    case Condition::IP5:
    case Condition::IP6: p["gamma"] = c.gamma; break;
    case Condition::I5: p["alpha_grid"] = c.alpha_grid; break;
    case Condition::I6:
      p["n"] = c.n;
      p["implemented_constant"] = c.n;
      p["printed_constant"] = 2 * c.n;
      break;
    default: break;
  }
  return p;
}

inline json to_json(const Witness& w) {
  return {{"condition", std::string(to_string(w.condition.tag))},
          {"vectors", to_json(w.vectors)},
          {"scalars", w.scalars},
          {"residual", w.residual},
          {"signed_value", w.signed_value}};
}

inline json to_json(const ClassificationReport& r) {
  json conds = json::array();
  for (const auto& c : r.conditions) {
    json e;
    e["condition"] = std::string(to_string(c.condition.tag));
    e["params"] = params_json(c.condition);
    e["max_residual"] = c.max_residual;
    e["signed_value"] = c.best ? json(c.best->signed_value) : json(nullptr);
    e["witness"] = c.witness ? to_json(*c.witness) : json(nullptr);
    e["samples_evaluated"] = c.samples_evaluated;
    e["informative_only"] = c.informative_only;
    conds.push_back(std::move(e));
  }
  json out;
  out["verdict"] = r.inner_product_like ? "inner-product-like" : "not-inner-product";
  out["violated"] = r.violated_count();
  out["conditions"] = std::move(conds);
  if (r.complex_checks) {
    out["complex_checks"] = {{"conjugate_symmetry", r.complex_checks->conjugate_symmetry},
                             {"i_linearity", r.complex_checks->i_linearity},
                             {"samples", r.complex_checks->samples}};
  } else {
    out["complex_checks"] = nullptr;
  }
  return out;
}

inline json to_json(const OrthogonalExtension& e) {
  return {{"Q", to_json(e.q)},
          {"pre_translation", to_json(e.pre_translation)},
          {"post_translation", to_json(e.post_translation)},
          {"max_defect", e.max_defect},
          {"orthogonality_defect", e.orthogonality_defect},
          {"coefficient_defect", e.coefficient_defect},
          {"rank", e.rank()},
          {"pivots", e.pivots}};
}

inline json to_json(const FlipCertificate& c) {
  return {{"gamma", c.gamma},
          {"f", to_json(c.f)},
          {"g", to_json(c.g)},
          {"norm_f", c.norm_f},
          {"norm_g", c.norm_g},
          {"lhs", c.lhs},
          {"rhs", c.rhs},
          {"residual", c.residual},
          {"flip_defect", c.flip_defect},
          {"triangle", to_json(c.triangle)},
          {"pairing", c.pairing},
          {"argument", c.argument}};
}

inline json to_json(const IsoscelesConfig& c) {
  json j = to_json(c.config);
  j["pairing"] = c.pairing;
  j["n"] = c.n;
  j["phi_values"] = c.phi_values;
  j["flip_defect"] = c.flip_defect;
  j["negation_case"] = c.negation_case;
  return j;
}

inline json to_json(const StrictConvexityWitness& w) {
  return {{"a", to_json(w.a)},
          {"b", to_json(w.b)},
          {"defect", w.defect},
          {"independence", w.independence}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace ipspace::io

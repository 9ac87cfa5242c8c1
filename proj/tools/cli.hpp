#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ipspace/io.hpp"

namespace ipspace::cli {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t budget = 1000;
  Tolerances tol{};
  std::optional<std::string> output_path;
};

struct RunResult {
  int exit_code = 0;
  json report;
};

namespace detail {

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json config_json(const RunConfig& c) {
  return {{"seed", c.seed},
          {"budget", c.budget},
          {"tolerances",
           {{"residual_tol", c.tol.residual_tol},
            {"rank_tol", c.tol.rank_tol},
            {"locus_tol", c.tol.locus_tol},
            {"violation_threshold", c.tol.violation_threshold},
            {"hypothesis_tol", c.tol.hypothesis_tol}}}};
}

inline Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

inline PointConfig realified(const PointConfig& c) {
  if (c.space.field() != Field::Complex) return c;
  return PointConfig(c.space.realified(), c.points, c.labels);
}

}  // namespace detail

/// Parses argv, runs one subcommand and builds its report. Exit codes: 0 on
/// success, 2 on domain errors, 1 on usage, I/O or parse errors.
inline RunResult run(const std::vector<std::string>& argv) {
  CLI::App app{"Inner-product-space characterization and isometry extension tools", "ipspace"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  RunConfig cfg;
  std::string config_file;
  std::uint64_t seed = 0;
  std::size_t budget = 1000;
  double tol_residual = 0, tol_rank = 0, tol_locus = 0, tol_violation = 0, tol_hypothesis = 0;
  std::string out_path;
  auto* o_seed = app.add_option("--seed", seed, "random seed")->capture_default_str();
  auto* o_budget = app.add_option("--budget", budget, "sample budget")->check(CLI::PositiveNumber);
  auto* o_tres = app.add_option("--tol-residual", tol_residual)->check(CLI::PositiveNumber);
  auto* o_trank = app.add_option("--tol-rank", tol_rank)->check(CLI::PositiveNumber);
  auto* o_tloc = app.add_option("--tol-locus", tol_locus)->check(CLI::PositiveNumber);
  auto* o_tvio = app.add_option("--tol-violation", tol_violation)->check(CLI::PositiveNumber);
  auto* o_thyp = app.add_option("--tol-hypothesis", tol_hypothesis)->check(CLI::PositiveNumber);
  app.add_option("--config", config_file, "JSON file with seed, budget and tolerances");
  app.add_option("--out", out_path, "write the report here instead of stdout");

  std::string space_file, y_file, yp_file, anchors_file, dm_file;
  std::vector<std::size_t> pairing;
  std::vector<double> dists, fvec, gvec;
  std::size_t count = 4;
  double gamma = 2.0;
  int n = 4;

  auto* classify = app.add_subcommand("classify", "test every inner-product characterization");
  classify->add_option("space", space_file)->required();

  auto* extend = app.add_subcommand("extend", "extend a finite isometry to an orthogonal map");
  extend->add_option("source", y_file)->required();
  extend->add_option("target", yp_file)->required();
  extend->add_option("--pairing", pairing)->delimiter(',');

  auto* tri = app.add_subcommand("trilaterate", "recover a point from anchor distances");
  tri->add_option("anchors", anchors_file)->required();
  tri->add_option("--dists", dists)->delimiter(',');

  auto* cm = app.add_subcommand("cm", "Cayley-Menger determinant and affine dependence");
  cm->add_option("distances", dm_file)->required();

  auto* locus = app.add_subcommand("locus", "points equidistant from f and g in their plane");
  locus->add_option("space", space_file)->required();
  locus->add_option("--f", fvec)->delimiter(',')->required();
  locus->add_option("--g", gvec)->delimiter(',')->required();
  locus->add_option("--count", count)->check(CLI::PositiveNumber);

  auto* flip = app.add_subcommand("certify-flip", "certify a non-extendable isosceles flip");
  flip->add_option("space", space_file)->required();
  flip->add_option("--gamma", gamma);

  auto* iso = app.add_subcommand("isosceles", "build an n-point configuration with an isometric flip");
  iso->add_option("space", space_file)->required();
  iso->add_option("--n", n)->check(CLI::Range(3, 1 << 20));
  iso->add_option("--f", fvec)->delimiter(',');
  iso->add_option("--g", gvec)->delimiter(',');

  auto* strict = app.add_subcommand("strict-convexity", "search for a strict convexity violation");
  strict->add_option("space", space_file)->required();

  RunResult res;
  json& rep = res.report;
  rep["version"] = kVersion;
  rep["timestamp"] = detail::utc_timestamp();
  rep["results"] = nullptr;

  auto fail = [&](int code, const std::string& name, const std::string& msg) {
    res.exit_code = code;
    rep["error"] = {{"name", name}, {"message", msg}};
  };

  try {
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    if (!args.empty()) args.pop_back();  // program name
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    rep["command"] = nullptr;
    rep["help"] = app.help();
    return res;
  } catch (const CLI::ParseError& e) {
    rep["command"] = nullptr;
    fail(1, "UsageError", e.what());
    return res;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  rep["command"] = command;

  try {
    if (!config_file.empty()) {
      const json c = io::read_json_file(config_file);
      if (c.contains("seed")) cfg.seed = c["seed"].get<std::uint64_t>();
      if (c.contains("budget")) cfg.budget = c["budget"].get<std::size_t>();
      if (c.contains("tolerances")) {
        const json& t = c["tolerances"];
        cfg.tol.residual_tol = t.value("residual_tol", cfg.tol.residual_tol);
        cfg.tol.rank_tol = t.value("rank_tol", cfg.tol.rank_tol);
        cfg.tol.locus_tol = t.value("locus_tol", cfg.tol.locus_tol);
        cfg.tol.violation_threshold = t.value("violation_threshold", cfg.tol.violation_threshold);
        cfg.tol.hypothesis_tol = t.value("hypothesis_tol", cfg.tol.hypothesis_tol);
      }
    }
    if (o_seed->count()) cfg.seed = seed;
    if (o_budget->count()) cfg.budget = budget;
    if (o_tres->count()) cfg.tol.residual_tol = tol_residual;
    if (o_trank->count()) cfg.tol.rank_tol = tol_rank;
    if (o_tloc->count()) cfg.tol.locus_tol = tol_locus;
    if (o_tvio->count()) cfg.tol.violation_threshold = tol_violation;
    if (o_thyp->count()) cfg.tol.hypothesis_tol = tol_hypothesis;
    if (!out_path.empty()) cfg.output_path = out_path;
    rep["config"] = detail::config_json(cfg);
  } catch (const json::exception& e) {
    fail(1, "ParseError", std::string("config: ") + e.what());
    return res;
  } catch (const Error& e) {
    fail(1, e.name(), e.what());
    return res;
  }

  // Input parsing: failures here are I/O or parse errors (exit 1).
  std::optional<NormedSpace> space;
  std::optional<io::PointSet> ys, yps, anchors;
  std::optional<DistanceMatrix> dm;
  try {
    if (!space_file.empty()) {
      space = io::space_from_json(io::read_json_file(space_file), space_file);
      rep["config"]["space"] = io::to_json(*space);
    }
    if (command == "extend") {
      ys = io::point_set_from_json(io::read_json_file(y_file), std::nullopt, y_file);
      yps = io::point_set_from_json(io::read_json_file(yp_file), ys->config.space, yp_file);
    }
    if (command == "trilaterate") {
      anchors = io::point_set_from_json(io::read_json_file(anchors_file), std::nullopt, anchors_file);
    }
    if (command == "cm") dm = io::distance_matrix_from_json(io::read_json_file(dm_file), dm_file);
  } catch (const io::ParseError& e) {
    fail(1, e.name(), e.what());
    return res;
  } catch (const json::exception& e) {
    fail(1, "ParseError", e.what());
    return res;
  } catch (const Error& e) {
    // well-formed JSON describing an invalid object (bad space, bad distances)
    fail(2, e.name(), e.what());
    return res;
  }

  try {
    json out;
    if (command == "classify") {
      out = io::to_json(classify_space(*space, cfg.budget, cfg.seed, cfg.tol));
    } else if (command == "extend") {
      std::vector<std::size_t> pair = pairing;
      if (pair.empty() && yps->pairing) pair = *yps->pairing;
      if (pair.empty() && ys->pairing) pair = *ys->pairing;
      Correspondence corr(detail::realified(ys->config), detail::realified(yps->config), pair);
      rep["config"]["pairing"] = corr.pairing;
      const auto check = verify_isometry(corr, cfg.tol.rank_tol);
      const auto ext = extend_isometry(corr, cfg.tol);
      out = io::to_json(ext);
      out["isometry_defect"] = check.max_defect;
      if (corr.space().paired()) {
        const auto lin = check_complex_linearity(ext, complex_structure(corr.space()));
        out["complex_linearity"] = {{"commutator", lin.commutator},
                                    {"anticommutator", lin.anticommutator},
                                    {"complex_linear", lin.is_complex_linear()}};
      }
    } else if (command == "trilaterate") {
      std::vector<double> d = dists;
      if (d.empty() && anchors->dists) d = *anchors->dists;
      rep["config"]["dists"] = d;
      const auto t = trilaterate(detail::realified(anchors->config), d, cfg.tol);
      std::vector<std::size_t> piv(t.pivots.begin(), t.pivots.end());
      out = {{"estimate", io::to_json(t.estimate)},
             {"out_of_span_residual", t.out_of_span_residual},
             {"system_residual", t.system_residual},
             {"unique", t.unique},
             {"pivots", piv}};
    } else if (command == "cm") {
      const auto a = is_affinely_dependent(*dm, cfg.tol.rank_tol);
      out = {{"cayley_menger", io::to_json(cayley_menger(*dm).entries)},
             {"det", a.det},
             {"scaled_det", a.scaled_det},
             {"scale", a.scale},
             {"affinely_dependent", a.dependent},
             {"min_gram_eigenvalue", a.min_gram_eigenvalue}};
    } else if (command == "locus") {
      rep["config"]["count"] = count;
      const NormedSpace real = as_real(*space);
      const Vector f = detail::to_vector(fvec), g = detail::to_vector(gvec);
      json pts = json::array();
      for (const auto& p : trace_locus(real, f, g, count, cfg.seed, cfg.tol))
        pts.push_back({{"h", io::to_json(p.h)}, {"phi", p.phi_value}});
      out = {{"f", io::to_json(f)}, {"g", io::to_json(g)}, {"points", std::move(pts)}};
    } else if (command == "certify-flip") {
      rep["config"]["gamma"] = gamma;
      const auto cert = certify_nonextendable_flip(*space, gamma, cfg.budget, cfg.seed, cfg.tol);
      out = {{"found", cert.has_value()},
             {"certificate", cert ? io::to_json(*cert) : json(nullptr)}};
    } else if (command == "isosceles") {
      rep["config"]["n"] = n;
      const NormedSpace real = as_real(*space);
      Vector f, g;
      std::string source;
      if (!fvec.empty() || !gvec.empty()) {
        f = detail::to_vector(fvec);
        g = detail::to_vector(gvec);
        source = "given";
      } else if (auto w = search_violation(real, ConditionId::make(Condition::IP5), cfg.budget,
                                           cfg.seed, cfg.tol)) {
        f = w->vectors[0];
        g = w->vectors[1];
        source = "ip5-witness";
      } else {
        // inner-product-like: any two distinct unit vectors make the triangle
        const auto units = structured_units(real);
        f = units[0];
        g = real.real_dim() > 1 ? units[1] : Vector(-units[0]);
        source = "basis";
      }
      out = io::to_json(build_isosceles_config(real, f, g, n, cfg.seed, cfg.tol));
      out["f"] = io::to_json(f);
      out["g"] = io::to_json(g);
      out["source"] = source;
    } else if (command == "strict-convexity") {
      const auto w = strict_convexity_search(*space, cfg.budget, cfg.seed);
      out = {{"found", w.has_value()}, {"witness", w ? io::to_json(*w) : json(nullptr)}};
    }
    rep["results"] = std::move(out);
  } catch (const Error& e) {
    fail(2, e.name(), e.what());
  }
  return res;
}

/// Runs and writes the report to --out or stdout.
inline int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  RunResult r = run(args);
  const std::string text = r.report.dump(2) + "\n";
  std::string out_path;
  if (r.report.contains("config") && r.report["config"].is_object()) {
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--out") out_path = args[i + 1];
  }
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "cannot write '" << out_path << "'\n";
      return 1;
    }
    f << text;
  } else {
    std::cout << text;
  }
  if (r.report.contains("error")) std::cerr << r.report["error"]["name"].get<std::string>() << ": "
                                            << r.report["error"]["message"].get<std::string>() << "\n";
  return r.exit_code;
}

}  // namespace ipspace::cli

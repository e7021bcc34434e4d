// lswe: command-line front end for the level-set wave-equation toolkit.
//
// Every analysis is a subcommand producing a JSON report (or CSV for tabular
// data) with a stable field layout: identical configs give byte-identical
// output apart from the timestamp.  Validation problems exit with code 2,
// numerical failures (stationary points, shooting divergence, CFL) with 3.

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lswe/elementary.hpp"
#include "lswe/errors.hpp"
#include "lswe/fdsolver.hpp"
#include "lswe/geodesics.hpp"
#include "lswe/geometry.hpp"
#include "lswe/huygens.hpp"
#include "lswe/surface.hpp"
#include "lswe/waves.hpp"

using nlohmann::json;

namespace {

constexpr const char* kSchema = "lswe/1";

// ---------------------------------------------------------------------------
// Small utilities
// ---------------------------------------------------------------------------

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

int thread_budget() {
  if (const char* env = std::getenv("LSWE_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v >= 1) return std::min(v, 64);
    } catch (...) {
      throw lswe::ValidationError("LSWE_THREADS must be a positive integer");
    }
    throw lswe::ValidationError("LSWE_THREADS must be a positive integer");
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

/**
 * Apply fn to indices [0, n) on up to thread_budget() workers.  Results land
 * in index order, so the output is independent of scheduling.
 */
template <typename Fn>
void parallel_indexed(std::size_t n, Fn&& fn) {
  int budget = std::min<std::size_t>(static_cast<std::size_t>(thread_budget()), n);
  if (budget <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::size_t chunk = (n + static_cast<std::size_t>(budget) - 1) / static_cast<std::size_t>(budget);
  for (int t = 0; t < budget; ++t) {
    std::size_t lo = static_cast<std::size_t>(t) * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> parse_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (...) {
      throw lswe::ValidationError(std::string("could not parse ") + what + ": '" + text + "'");
    }
  }
  if (out.empty()) {
    throw lswe::ValidationError(std::string("empty value for ") + what);
  }
  return out;
}

lswe::WaveProfile parse_profile(const std::string& spec) {
  if (spec == "zero") return lswe::WaveProfile::zero();
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "poly") {
    return lswe::WaveProfile::polynomial(parse_numbers(args, "polynomial coefficients"));
  }
  if (kind == "gauss") {
    std::vector<double> v = parse_numbers(args, "gaussian parameters");
    if (v.size() != 2) {
      throw lswe::ValidationError("gaussian profile needs exactly center,width");
    }
    return lswe::WaveProfile::gaussian(v[0], v[1]);
  }
  throw lswe::ValidationError("unknown profile spec '" + spec +
                              "' (use poly:c0,c1,... | gauss:center,width | zero)");
}

json profile_json(const std::string& spec) { return json{{"spec", spec}}; }

// ---------------------------------------------------------------------------
// Report plumbing
// ---------------------------------------------------------------------------

void flatten_json(const json& value, const std::string& prefix,
                  std::map<std::string, std::string>& out) {
  if (value.is_object()) {
    for (auto it = value.begin(); it != value.end(); ++it) {
      std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
      flatten_json(it.value(), key, out);
    }
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      flatten_json(value[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else if (value.is_string()) {
    out[prefix] = value.get<std::string>();
  } else {
    out[prefix] = value.dump();
  }
}

std::string results_to_csv(const json& results) {
  std::ostringstream os;
  std::vector<std::string> header;
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::map<std::string, std::string> flat;
    flatten_json(results[i], "", flat);
    if (i == 0) {
      for (const auto& [k, v] : flat) header.push_back(k);
      for (std::size_t c = 0; c < header.size(); ++c) {
        os << (c ? "," : "") << header[c];
      }
      os << '\n';
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      auto it = flat.find(header[c]);
      os << (c ? "," : "") << (it == flat.end() ? "" : it->second);
    }
    os << '\n';
  }
  return os.str();
}

struct OutputOpts {
  std::string path = "-";
  std::string format = "json";
};

void emit(const OutputOpts& out, const std::string& command, const json& config,
          const json& results) {
  std::string text;
  if (out.format == "csv") {
    text = results_to_csv(results);
  } else {
    json report{{"schema", kSchema},
                {"command", command},
                {"timestamp", iso_timestamp()},
                {"config", config},
                {"results", results}};
    text = report.dump(2) + "\n";
  }
  if (out.path == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out.path);
    if (!f) throw lswe::ValidationError("cannot open output path '" + out.path + "'");
    f << text;
  }
}

void emit_dry_run(const OutputOpts& out, const std::string& command, const json& config) {
  json report{{"schema", kSchema},
              {"command", command},
              {"timestamp", iso_timestamp()},
              {"config", config},
              {"dry_run", true},
              {"valid", true}};
  std::string text = report.dump(2) + "\n";
  if (out.path == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out.path);
    if (!f) throw lswe::ValidationError("cannot open output path '" + out.path + "'");
    f << text;
  }
}

// ---------------------------------------------------------------------------
// Shared option blocks
// ---------------------------------------------------------------------------

struct SurfaceOpts {
  std::string source;
  int dim = 0;
  double eps_g = 1e-10;
};

void add_surface_opts(CLI::App* cmd, SurfaceOpts& s) {
  cmd->add_option("--surface", s.source, "Potential V as an expression in q1..qN")->required();
  cmd->add_option("--dim", s.dim, "Number of coordinates N")->required()->check(CLI::Range(1, 16));
  cmd->add_option("--eps-g", s.eps_g, "Stationary-point threshold on G");
}

lswe::PotentialSurface make_surface(const SurfaceOpts& s) {
  try {
    return lswe::PotentialSurface::from_source(s.source, s.dim, s.eps_g);
  } catch (const lswe::ParseError& e) {
    throw lswe::ValidationError(std::string("surface: ") + e.what());
  }
}

json surface_config(const SurfaceOpts& s) {
  return json{{"source", s.source}, {"dimension", s.dim}, {"eps_g", s.eps_g}};
}

struct PointListOpts {
  std::vector<std::string> point_specs;
};

std::vector<std::vector<double>> resolve_points(const PointListOpts& p, int dim) {
  std::vector<std::vector<double>> pts;
  for (const std::string& spec : p.point_specs) {
    std::vector<double> v = parse_numbers(spec, "point");
    if (static_cast<int>(v.size()) != dim) {
      throw lswe::ValidationError("point '" + spec + "' does not have dimension " +
                                  std::to_string(dim));
    }
    pts.push_back(std::move(v));
  }
  return pts;
}

json points_config(const std::vector<std::vector<double>>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(p);
  return arr;
}

// ---------------------------------------------------------------------------
// JSON views of library types
// ---------------------------------------------------------------------------

json matrix_json(const std::vector<std::vector<double>>& m) {
  json arr = json::array();
  for (const auto& row : m) arr.push_back(row);
  return arr;
}

json gauge_json(const lswe::SurfaceGauge& g) {
  const int n = g.dimension();
  std::vector<double> gradient(g.jet.gradient);
  std::vector<std::vector<double>> hess(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      hess[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g.hess(i, j);
    }
  }
  lswe::FirstOrderCoefficients fo = lswe::first_order_coefficients(g);
  return json{{"point", g.point},       {"V", g.value},
              {"gradient", gradient},   {"hessian", matrix_json(hess)},
              {"G", g.G},               {"trace_H", g.trace_H},
              {"script_H", g.script_H}, {"dG", g.dG},
              {"A_upper", fo.upper},    {"A_lower", fo.lower}};
}

json curvature_json(const lswe::CurvatureReport& c) {
  return json{{"riemann_i_nunu_l", matrix_json(c.riemann_i_nunu_l)},
              {"riemann_nu_jk_nu", matrix_json(c.riemann_nu_jk_nu)},
              {"ricci_nunu", c.ricci_nunu},
              {"ricci", matrix_json(c.ricci)},
              {"scalar_R", c.scalar_R},
              {"scalar_R_closed", c.scalar_R_closed}};
}

json huygens_json(const lswe::HuygensReport& h) {
  return json{
      {"condition1_residual", h.condition1.value},
      {"condition1_terms",
       {{"trace_term", h.condition1.terms.trace_term},
        {"divergence_term", h.condition1.terms.divergence_term},
        {"script_term", h.condition1.terms.script_term}}},
      {"condition1_assembled", h.condition1.assembled},
      {"condition1_assembly",
       {{"covariant_divergence", h.condition1.assembly.covariant_divergence},
        {"a_dot_a", h.condition1.assembly.a_dot_a},
        {"curvature_piece", h.condition1.assembly.curvature_piece}}},
      {"condition2_residual_spatial", h.condition2.spatial},
      {"condition2_residual_nu", h.condition2.nu},
      {"condition1_satisfied", h.condition1_satisfied},
      {"condition2_satisfied", h.condition2_satisfied}};
}

json path_summary_json(const lswe::GeodesicPath& path) {
  const char* kind = "general";
  switch (path.kind) {
    case lswe::PathKind::steepest_ascent:
      kind = "steepest_ascent";
      break;
    case lswe::PathKind::hyperplane:
      kind = "hyperplane";
      break;
    case lswe::PathKind::shooting:
      kind = "shooting";
      break;
    case lswe::PathKind::general:
      break;
  }
  double max_res = 0.0;
  for (double r : path.conserved_residuals) max_res = std::max(max_res, std::abs(r));
  const lswe::GeodesicState& last = path.samples.back();
  return json{{"kind", kind},
              {"D", path.D},
              {"samples", path.samples.size()},
              {"truncated", path.truncated},
              {"max_D_residual", max_res},
              {"endpoint",
               {{"q", last.q},
                {"nu", last.nu},
                {"q_dot", last.q_dot},
                {"nu_dot", last.nu_dot},
                {"s", last.s}}}};
}

void maybe_write_path_csv(const lswe::GeodesicPath& path, const std::string& csv_path) {
  if (csv_path.empty()) return;
  std::ofstream f(csv_path);
  if (!f) throw lswe::ValidationError("cannot open csv path '" + csv_path + "'");
  lswe::write_path_csv(path, f);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct AppState {
  int exit_code = 0;
};

void setup_gauge(CLI::App& app, AppState& state) {
  auto opts = std::make_shared<SurfaceOpts>();
  auto pts = std::make_shared<PointListOpts>();
  auto out = std::make_shared<OutputOpts>();
  auto dry = std::make_shared<bool>(false);
  CLI::App* cmd = app.add_subcommand("gauge", "Surface gauge fields at points");
  add_surface_opts(cmd, *opts);
  cmd->add_option("--point", pts->point_specs, "Point q1,..,qN (repeatable)")->required();
  cmd->add_option("--out", out->path, "Output path (- for stdout)");
  cmd->add_option("--format", out->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--dry-run", *dry, "Validate config only");
  cmd->callback([&state, opts, pts, out, dry] {
    (void)state;
    lswe::PotentialSurface surface = make_surface(*opts);
    auto points = resolve_points(*pts, opts->dim);
    json config{{"surface", surface_config(*opts)}, {"points", points_config(points)}};
    if (*dry) {
      emit_dry_run(*out, "gauge", config);
      return;
    }
    std::vector<json> rows(points.size());
    parallel_indexed(points.size(),
                     [&](std::size_t i) { rows[i] = gauge_json(surface.gauge(points[i])); });
    emit(*out, "gauge", config, json(rows));
  });
}

void setup_geometry(CLI::App& app, AppState& state) {
  auto opts = std::make_shared<SurfaceOpts>();
  auto pts = std::make_shared<PointListOpts>();
  auto out = std::make_shared<OutputOpts>();
  auto dry = std::make_shared<bool>(false);
  CLI::App* cmd = app.add_subcommand("geometry", "Metric, Christoffels and curvature at points");
  add_surface_opts(cmd, *opts);
  cmd->add_option("--point", pts->point_specs, "Point q1,..,qN (repeatable)")->required();
  cmd->add_option("--out", out->path, "Output path (- for stdout)");
  cmd->add_option("--format", out->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--dry-run", *dry, "Validate config only");
  cmd->callback([&state, opts, pts, out, dry] {
    (void)state;
    lswe::PotentialSurface surface = make_surface(*opts);
    auto points = resolve_points(*pts, opts->dim);
    json config{{"surface", surface_config(*opts)}, {"points", points_config(points)}};
    if (*dry) {
      emit_dry_run(*out, "geometry", config);
      return;
    }
    std::vector<json> rows(points.size());
    parallel_indexed(points.size(), [&](std::size_t i) {
      lswe::SurfaceGauge g = surface.gauge(points[i]);
      lswe::MetricAtPoint m = lswe::metric(g);
      lswe::ChristoffelSet c = lswe::christoffels(g);
      rows[i] = json{{"point", points[i]},
                     {"metric",
                      {{"covariant", m.covariant},
                       {"contravariant", m.contravariant},
                       {"gamma", m.gamma}}},
                     {"christoffels", {{"i_nunu", c.i_nunu}, {"nu_nuk", c.nu_nuk}}},
                     {"curvature", curvature_json(lswe::curvature(g))}};
    });
    emit(*out, "geometry", config, json(rows));
  });
}

void setup_huygens(CLI::App& app, AppState& state) {
  auto opts = std::make_shared<SurfaceOpts>();
  auto pts = std::make_shared<PointListOpts>();
  auto out = std::make_shared<OutputOpts>();
  auto dry = std::make_shared<bool>(false);
  auto fd_step = std::make_shared<double>(1e-4);
  auto tol = std::make_shared<double>(1e-9);
  CLI::App* cmd = app.add_subcommand("huygens", "Huygens-principle conditions at points");
  add_surface_opts(cmd, *opts);
  cmd->add_option("--point", pts->point_specs, "Point q1,..,qN (repeatable)")->required();
  cmd->add_option("--fd-step", *fd_step, "FD step for condition-two derivatives");
  cmd->add_option("--tol", *tol, "Satisfaction tolerance");
  cmd->add_option("--out", out->path, "Output path (- for stdout)");
  cmd->add_option("--format", out->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--dry-run", *dry, "Validate config only");
  cmd->callback([&state, opts, pts, out, dry, fd_step, tol] {
    (void)state;
    lswe::PotentialSurface surface = make_surface(*opts);
    auto points = resolve_points(*pts, opts->dim);
    json config{{"surface", surface_config(*opts)},
                {"points", points_config(points)},
                {"fd_step", *fd_step},
                {"tol", *tol}};
    if (*dry) {
      emit_dry_run(*out, "huygens", config);
      return;
    }
    std::vector<json> rows(points.size());
    parallel_indexed(points.size(), [&](std::size_t i) {
      lswe::HuygensReport rep = lswe::huygens_report(surface, points[i], *fd_step, *tol);
      rows[i] = huygens_json(rep);
      rows[i]["point"] = points[i];
    });
    emit(*out, "huygens", config, json(rows));
  });
}

struct SampleBoxOpts {
  std::vector<std::string> box_specs;  // lo,hi per dimension, or one for all
  int samples = 100;
  unsigned seed = 12345;
  double g_floor = 1e-6;
};

std::vector<std::array<double, 2>> resolve_box(const SampleBoxOpts& b, int dim) {
  std::vector<std::array<double, 2>> box;
  if (b.box_specs.empty()) {
    box.assign(static_cast<std::size_t>(dim), {-1.5, 1.5});
    return box;
  }
  std::vector<std::vector<double>> parsed;
  for (const auto& spec : b.box_specs) {
    std::vector<double> v = parse_numbers(spec, "box");
    if (v.size() != 2 || !(v[1] > v[0])) {
      throw lswe::ValidationError("box must be lo,hi with hi > lo");
    }
    parsed.push_back(v);
  }
  if (parsed.size() == 1) {
    box.assign(static_cast<std::size_t>(dim), {parsed[0][0], parsed[0][1]});
  } else if (static_cast<int>(parsed.size()) == dim) {
    for (const auto& v : parsed) box.push_back({v[0], v[1]});
  } else {
    throw lswe::ValidationError("give one --box or exactly one per dimension");
  }
  return box;
}

/** Draw (q, nu) samples with G >= floor; nu close to V(q) keeps profiles O(1). */
std::vector<std::pair<std::vector<double>, double>> draw_samples(
    const lswe::PotentialSurface& surface, const std::vector<std::array<double, 2>>& box,
    int count, unsigned seed, double g_floor) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<std::vector<double>, double>> out;
  const int n = surface.dimension();
  int guard = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++guard > count * 1000) {
      throw lswe::ValidationError("could not find enough non-stationary sample points in box");
    }
    std::vector<double> q(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
      q[static_cast<std::size_t>(d)] =
          box[static_cast<std::size_t>(d)][0] +
          unit(rng) * (box[static_cast<std::size_t>(d)][1] - box[static_cast<std::size_t>(d)][0]);
    }
    double G = 0.0;
    try {
      G = surface.gauge(q, 1).G;
    } catch (const lswe::StationaryPointError&) {
      continue;
    }
    if (G < g_floor) continue;
    double nu = surface.value(q) + (2.0 * unit(rng) - 1.0);
    out.emplace_back(std::move(q), nu);
  }
  return out;
}

void setup_verify_wave(CLI::App& app, AppState& state) {
  auto opts = std::make_shared<SurfaceOpts>();
  auto box = std::make_shared<SampleBoxOpts>();
  auto out = std::make_shared<OutputOpts>();
  auto dry = std::make_shared<bool>(false);
  auto profile = std::make_shared<std::string>("gauss:0,0.05");
  auto sign = std::make_shared<int>(-1);
  auto nu0 = std::make_shared<double>(0.0);
  CLI::App* cmd =
      app.add_subcommand("verify-wave", "Residual of L on a progressing wave at random points");
  add_surface_opts(cmd, *opts);
  cmd->add_option("--profile", *profile, "poly:c0,c1,... | gauss:center,width | zero");
  cmd->add_option("--sign", *sign, "Sign on nu in the phase (-1 is the wave solution)")
      ->check(CLI::IsMember({-1, 1}));
  cmd->add_option("--nu0", *nu0, "Level offset nu0");
  cmd->add_option("--samples", box->samples, "Number of random samples")->check(CLI::Range(1, 1000000));
  cmd->add_option("--seed", box->seed, "RNG seed");
  cmd->add_option("--box", box->box_specs, "Sampling box lo,hi (one or one per dimension)");
  cmd->add_option("--g-floor", box->g_floor, "Minimum G for admissible samples");
  cmd->add_option("--out", out->path, "Output path (- for stdout)");
  cmd->add_option("--format", out->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--dry-run", *dry, "Validate config only");
  cmd->callback([&state, opts, box, out, dry, profile, sign, nu0] {
    (void)state;
    lswe::PotentialSurface surface = make_surface(*opts);
    auto bounds = resolve_box(*box, opts->dim);
    lswe::WaveProfile prof = parse_profile(*profile);
    json config{{"surface", surface_config(*opts)}, {"profile", profile_json(*profile)},
                {"sign", *sign},                    {"nu0", *nu0},
                {"samples", box->samples},          {"seed", box->seed},
                {"g_floor", box->g_floor},          {"box", bounds}};
    if (*dry) {
      emit_dry_run(*out, "verify-wave", config);
      return;
    }
    lswe::WaveField field = lswe::WaveField::progressing(prof, *sign, *nu0);
    auto samples = draw_samples(surface, bounds, box->samples, box->seed, box->g_floor);
    std::vector<double> residuals(samples.size());
    parallel_indexed(samples.size(), [&](std::size_t i) {
      residuals[i] = lswe::apply_operator(surface, field, samples[i].first, samples[i].second);
    });
    double max_abs = 0.0;
    double sum_abs = 0.0;
    for (double r : residuals) {
      max_abs = std::max(max_abs, std::abs(r));
      sum_abs += std::abs(r);
    }
    json results = json::array();
    results.push_back(json{{"samples", samples.size()},
                           {"max_abs_residual", max_abs},
                           {"mean_abs_residual", sum_abs / static_cast<double>(samples.size())}});
    emit(*out, "verify-wave", config, results);
  });
}

void setup_split_check(CLI::App& app, AppState& state) {
  auto opts = std::make_shared<SurfaceOpts>();
  auto box = std::make_shared<SampleBoxOpts>();
  auto out = std::make_shared<OutputOpts>();
  auto dry = std::make_shared<bool>(false);
  auto profile = std::make_shared<std::string>("gauss:0,0.05");
  auto sign = std::make_shared<int>(-1);
  auto nu0 = std::make_shared<double>(0.0);
  auto partition = std::make_shared<std::string>("1");
  CLI::App* cmd = app.add_subcommand("split-check", "Operator splitting check at random points");
  add_surface_opts(cmd, *opts);
  cmd->add_option("--partition", *partition, "Comma list of 1-based coordinates in block I")
      ->required();
  cmd->add_option("--profile", *profile, "poly:c0,c1,... | gauss:center,width | zero");
  cmd->add_option("--sign", *sign, "Sign on nu in the phase")->check(CLI::IsMember({-1, 1}));
  cmd->add_option("--nu0", *nu0, "Level offset nu0");
  cmd->add_option("--samples", box->samples, "Number of random samples")->check(CLI::Range(1, 1000000));
  cmd->add_option("--seed", box->seed, "RNG seed");
  cmd->add_option("--box", box->box_specs, "Sampling box lo,hi (one or one per dimension)");
  cmd->add_option("--g-floor", box->g_floor, "Minimum G for admissible samples");
  cmd->add_option("--out", out->path, "Output path (- for stdout)");
  cmd->add_option("--format", out->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--dry-run", *dry, "Validate config only");
  cmd->callback([&state, opts, box, out, dry, profile, sign, nu0, partition] {
    (void)state;
    lswe::PotentialSurface surface = make_surface(*opts);
    auto bounds = resolve_box(*box, opts->dim);
    lswe::WaveProfile prof = parse_profile(*profile);
    std::vector<double> part_d = parse_numbers(*partition, "partition");
    std::vector<int> part;
    for (double v : part_d) {
      int idx = static_cast<int>(v);
      if (static_cast<double>(idx) != v) {
        throw lswe::ValidationError("partition entries must be integers");
      }
      part.push_back(idx);
    }
    json config{{"surface", surface_config(*opts)}, {"partition", part},
                {"profile", profile_json(*profile)}, {"sign", *sign},
                {"nu0", *nu0},                      {"samples", box->samples},
                {"seed", box->seed},                {"g_floor", box->g_floor},
                {"box", bounds}};
    if (*dry) {
      emit_dry_run(*out, "split-check", config);
      return;
    }
    lswe::WaveField field = lswe::WaveField::progressing(prof, *sign, *nu0);
    auto samples = draw_samples(surface, bounds, box->samples, box->seed, box->g_floor);
    double max_sum_dev = 0.0;
    double max_block = 0.0;
    double max_single = 0.0;
    for (const auto& [q, nu] : samples) {
      auto [li, lii] = lswe::split_operator(surface, part, field, q, nu);
      double total = lswe::apply_operator(surface, field, q, nu);
      max_sum_dev = std::max(max_sum_dev, std::abs(li + lii - total));
      max_block = std::max({max_block, std::abs(li), std::abs(lii)});
      for (double s : lswe::split_per_coordinate(surface, field, q, nu)) {
        max_single = std::max(max_single, std::abs(s));
      }
    }
    json results = json::array();
    results.push_back(json{{"samples", samples.size()},
                           {"max_abs_block_residual", max_block},
                           {"max_abs_single_residual", max_single},
                           {"max_additivity_deviation", max_sum_dev}});
    emit(*out, "split-check", config, results);
  });
}

void setup_geodesic(CLI::App& app, AppState& state) {
  auto opts = std::make_shared<SurfaceOpts>();
  auto out = std::make_shared<OutputOpts>();
  auto dry = std::make_shared<bool>(false);
  auto init_spec = std::make_shared<std::string>();
  auto q0_spec = std::make_shared<std::string>();
  auto nu0 = std::make_shared<double>(0.0);
  auto steepest = std::make_shared<bool>(false);
  auto length = std::make_shared<double>(1.0);
  auto step = std::make_shared<double>(1e-3);
  auto csv = std::make_shared<std::string>();
  CLI::App* cmd = app.add_subcommand("geodesic", "Integrate a geodesic or steepest-ascent line");
  add_surface_opts(cmd, *opts);
  cmd->add_option("--init", *init_spec, "q1..qN,nu,qdot1..qdotN,nudot (general geodesic)");
  cmd->add_flag("--steepest", *steepest, "Integrate the steepest-ascent line instead");
  cmd->add_option("--q0", *q0_spec, "Start point for --steepest");
  cmd->add_option("--nu0", *nu0, "Start level for --steepest");
  cmd->add_option("--length", *length, "Parameter length")->check(CLI::PositiveNumber);
  cmd->add_option("--step", *step, "Integrator step")->check(CLI::PositiveNumber);
  cmd->add_option("--csv", *csv, "Also write the sampled path as CSV to this file");
  cmd->add_option("--out", out->path, "Output path (- for stdout)");
  cmd->add_option("--format", out->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--dry-run", *dry, "Validate config only");
  cmd->callback([&state, opts, out, dry, init_spec, q0_spec, nu0, steepest, length, step, csv] {
    (void)state;
    lswe::PotentialSurface surface = make_surface(*opts);
    const int n = opts->dim;
    json config{{"surface", surface_config(*opts)},
                {"length", *length},
                {"step", *step},
                {"steepest", *steepest}};
    lswe::GeodesicState init;
    std::vector<double> q0;
    if (*steepest) {
      if (q0_spec->empty()) throw lswe::ValidationError("--steepest needs --q0");
      q0 = parse_numbers(*q0_spec, "q0");
      if (static_cast<int>(q0.size()) != n) {
        throw lswe::ValidationError("--q0 does not have dimension N");
      }
      config["q0"] = q0;
      config["nu0"] = *nu0;
    } else {
      if (init_spec->empty()) throw lswe::ValidationError("need --init (or --steepest with --q0)");
      std::vector<double> v = parse_numbers(*init_spec, "init");
      if (static_cast<int>(v.size()) != 2 * n + 2) {
        throw lswe::ValidationError("--init needs 2N+2 values: q,nu,qdot,nudot");
      }
      init.q.assign(v.begin(), v.begin() + n);
      init.nu = v[static_cast<std::size_t>(n)];
      init.q_dot.assign(v.begin() + n + 1, v.begin() + 2 * n + 1);
      init.nu_dot = v[static_cast<std::size_t>(2 * n + 1)];
      config["init"] = v;
    }
    if (!csv->empty()) config["csv"] = *csv;
    if (*dry) {
      emit_dry_run(*out, "geodesic", config);
      return;
    }
    lswe::GeodesicPath path = *steepest
                                  ? lswe::steepest_ascent(surface, q0, *nu0, *length, *step)
                                  : lswe::integrate_geodesic(surface, init, *length, *step);
    maybe_write_path_csv(path, *csv);
    json row = path_summary_json(path);
    if (!csv->empty()) row["csv_path"] = *csv;
    emit(*out, "geodesic", config, json::array({row}));
  });
}

struct EndpointOpts {
  std::string from_spec;
  std::string to_spec;
};

std::pair<std::pair<std::vector<double>, double>, std::pair<std::vector<double>, double>>
resolve_endpoints(const EndpointOpts& e, int dim) {
  std::vector<double> a = parse_numbers(e.from_spec, "from");
  std::vector<double> b = parse_numbers(e.to_spec, "to");
  if (static_cast<int>(a.size()) != dim + 1 || static_cast<int>(b.size()) != dim + 1) {
    throw lswe::ValidationError("--from/--to need N+1 values: q1..qN,nu");
  }
  std::vector<double> qa(a.begin(), a.end() - 1);
  std::vector<double> qb(b.begin(), b.end() - 1);
  return {{qa, a.back()}, {qb, b.back()}};
}

void setup_connect_like(CLI::App& app, AppState& state, const std::string& name,
                        const std::string& desc, bool with_distance) {
  auto opts = std::make_shared<SurfaceOpts>();
  auto out = std::make_shared<OutputOpts>();
  auto dry = std::make_shared<bool>(false);
  auto ends = std::make_shared<EndpointOpts>();
  auto max_iters = std::make_shared<int>(50);
  auto tol = std::make_shared<double>(1e-8);
  auto steps = std::make_shared<int>(100);
  auto csv = std::make_shared<std::string>();
  CLI::App* cmd = app.add_subcommand(name, desc);
  add_surface_opts(cmd, *opts);
  cmd->add_option("--from", ends->from_spec, "Start q1..qN,nu")->required();
  cmd->add_option("--to", ends->to_spec, "End q1..qN,nu")->required();
  cmd->add_option("--max-iters", *max_iters, "Shooting iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", *tol, "Endpoint tolerance per coordinate")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", *steps, "Integration steps per shot")->check(CLI::PositiveNumber);
  cmd->add_option("--csv", *csv, "Also write the path as CSV to this file");
  cmd->add_option("--out", out->path, "Output path (- for stdout)");
  cmd->add_option("--format", out->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--dry-run", *dry, "Validate config only");
  cmd->callback([&state, opts, out, dry, ends, max_iters, tol, steps, csv, name, with_distance] {
    (void)state;
    lswe::PotentialSurface surface = make_surface(*opts);
    auto [from, to] = resolve_endpoints(*ends, opts->dim);
    json config{{"surface", surface_config(*opts)},
                {"from", {{"q", from.first}, {"nu", from.second}}},
                {"to", {{"q", to.first}, {"nu", to.second}}},
                {"max_iters", *max_iters},
                {"tol", *tol},
                {"steps", *steps}};
    if (!csv->empty()) config["csv"] = *csv;
    if (*dry) {
      emit_dry_run(*out, name, config);
      return;
    }
    lswe::GeodesicPath path = lswe::connect(surface, from.first, from.second, to.first,
                                            to.second, *max_iters, *tol, *steps);
    maybe_write_path_csv(path, *csv);
    json row = path_summary_json(path);
    if (with_distance) {
      row["distance"] = lswe::geodesic_distance(path);
      row["world_function"] = row["distance"].get<double>() * row["distance"].get<double>();
    }
    if (!csv->empty()) row["csv_path"] = *csv;
    emit(*out, name, config, json::array({row}));
  });
}

void setup_elementary(CLI::App& app, AppState& state) {
  auto opts = std::make_shared<SurfaceOpts>();
  auto out = std::make_shared<OutputOpts>();
  auto dry = std::make_shared<bool>(false);
  auto ends = std::make_shared<EndpointOpts>();
  auto path_kind = std::make_shared<std::string>("connect");
  auto steps = std::make_shared<int>(100);
  CLI::App* cmd =
      app.add_subcommand("elementary", "Singular part U of the elementary solution");
  add_surface_opts(cmd, *opts);
  cmd->add_option("--from", ends->from_spec, "Base q1..qN,nu")->required();
  cmd->add_option("--to", ends->to_spec, "Endpoint q1..qN,nu")->required();
  cmd->add_option("--path", *path_kind, "connect or hyperplane")
      ->check(CLI::IsMember({"connect", "hyperplane"}));
  cmd->add_option("--steps", *steps, "Path sampling steps")->check(CLI::PositiveNumber);
  cmd->add_option("--out", out->path, "Output path (- for stdout)");
  cmd->add_option("--format", out->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--dry-run", *dry, "Validate config only");
  cmd->callback([&state, opts, out, dry, ends, path_kind, steps] {
    (void)state;
    lswe::PotentialSurface surface = make_surface(*opts);
    auto [from, to] = resolve_endpoints(*ends, opts->dim);
    json config{{"surface", surface_config(*opts)},
                {"from", {{"q", from.first}, {"nu", from.second}}},
                {"to", {{"q", to.first}, {"nu", to.second}}},
                {"path", *path_kind},
                {"steps", *steps}};
    if (*dry) {
      emit_dry_run(*out, "elementary", config);
      return;
    }
    lswe::GeodesicPath path;
    if (*path_kind == "hyperplane") {
      if (from.second != to.second) {
        throw lswe::ValidationError("hyperplane path needs equal nu at both endpoints");
      }
      path = lswe::hyperplane_path(surface, from.first, to.first, from.second, *steps);
    } else {
      path = lswe::connect(surface, from.first, from.second, to.first, to.second,
                           /*max_iters=*/50, /*tol=*/1e-10, *steps);
    }
    lswe::ElementaryPart part = lswe::singular_part(surface, path);
    json row{{"base", {{"q", part.base_q}, {"nu", part.base_nu}}},
             {"endpoint", {{"q", part.end_q}, {"nu", part.end_nu}}},
             {"discriminant_factor", part.discriminant_factor},
             {"path_integral", part.path_integral},
             {"U", part.U},
             {"path_kind", *path_kind}};
    emit(*out, "elementary", config, json::array({row}));
  });
}

void setup_adjoint_check(CLI::App& app, AppState& state) {
  auto opts = std::make_shared<SurfaceOpts>();
  auto out = std::make_shared<OutputOpts>();
  auto dry = std::make_shared<bool>(false);
  auto base_spec = std::make_shared<std::string>();
  auto sample_spec = std::make_shared<std::string>();
  auto h = std::make_shared<double>(1e-3);
  CLI::App* cmd = app.add_subcommand("adjoint-check", "Adjoint residual P U on a stencil (N=1)");
  add_surface_opts(cmd, *opts);
  cmd->add_option("--base", *base_spec, "Base q,nu")->required();
  cmd->add_option("--sample", *sample_spec, "Sample q,nu")->required();
  cmd->add_option("--stencil-step", *h, "Stencil spacing")->check(CLI::PositiveNumber);
  cmd->add_option("--out", out->path, "Output path (- for stdout)");
  cmd->add_option("--format", out->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--dry-run", *dry, "Validate config only");
  cmd->callback([&state, opts, out, dry, base_spec, sample_spec, h] {
    (void)state;
    lswe::PotentialSurface surface = make_surface(*opts);
    std::vector<double> b = parse_numbers(*base_spec, "base");
    std::vector<double> s = parse_numbers(*sample_spec, "sample");
    if (static_cast<int>(b.size()) != opts->dim + 1 ||
        static_cast<int>(s.size()) != opts->dim + 1) {
      throw lswe::ValidationError("--base/--sample need N+1 values: q1..qN,nu");
    }
    json config{{"surface", surface_config(*opts)},
                {"base", b},
                {"sample", s},
                {"stencil_step", *h}};
    if (*dry) {
      emit_dry_run(*out, "adjoint-check", config);
      return;
    }
    std::vector<double> bq(b.begin(), b.end() - 1);
    std::vector<double> sq(s.begin(), s.end() - 1);
    auto [pu, pu_coarse] =
        lswe::adjoint_residual_pair(surface, bq, b.back(), sq, s.back(), *h);
    json row{{"PU", pu}, {"PU_coarse", pu_coarse}, {"stencil_step", *h}};
    emit(*out, "adjoint-check", config, json::array({row}));
  });
}

struct GridOpts {
  std::vector<std::string> box_specs;
  std::string cells_spec = "100";
  std::string nu_range_spec = "0,1";
  double dnu = 0.0;
  double cfl_safety = 0.9;
};

lswe::Grid resolve_grid(const GridOpts& g, int dim) {
  lswe::Grid grid;
  if (static_cast<int>(g.box_specs.size()) != dim) {
    throw lswe::ValidationError("give exactly one --box lo,hi per dimension");
  }
  for (const auto& spec : g.box_specs) {
    std::vector<double> v = parse_numbers(spec, "box");
    if (v.size() != 2 || !(v[1] > v[0])) {
      throw lswe::ValidationError("box must be lo,hi with hi > lo");
    }
    grid.bounds.push_back({v[0], v[1]});
  }
  std::vector<double> cells = parse_numbers(g.cells_spec, "cells");
  if (cells.size() == 1) {
    cells.assign(static_cast<std::size_t>(dim), cells[0]);
  }
  if (static_cast<int>(cells.size()) != dim) {
    throw lswe::ValidationError("--cells needs one value or one per dimension");
  }
  for (double c : cells) {
    int ci = static_cast<int>(c);
    if (static_cast<double>(ci) != c || ci < 1) {
      throw lswe::ValidationError("cells must be positive integers");
    }
    grid.cells.push_back(ci);
  }
  std::vector<double> nur = parse_numbers(g.nu_range_spec, "nu-range");
  if (nur.size() != 2) throw lswe::ValidationError("--nu-range needs exactly start,end");
  grid.nu0 = nur[0];
  grid.nu1 = nur[1];
  grid.dnu = g.dnu;
  grid.cfl_safety = g.cfl_safety;
  return grid;
}

json grid_json(const lswe::Grid& grid) {
  json bounds = json::array();
  for (const auto& b : grid.bounds) bounds.push_back(json::array({b[0], b[1]}));
  return json{{"bounds", bounds},   {"cells", grid.cells},
              {"nu0", grid.nu0},    {"nu1", grid.nu1},
              {"dnu", grid.dnu},    {"cfl_safety", grid.cfl_safety}};
}

void setup_solve(CLI::App& app, AppState& state) {
  auto opts = std::make_shared<SurfaceOpts>();
  auto out = std::make_shared<OutputOpts>();
  auto dry = std::make_shared<bool>(false);
  auto gridopts = std::make_shared<GridOpts>();
  auto prof_f = std::make_shared<std::string>("gauss:2,0.05");
  auto prof_d = std::make_shared<std::string>("zero");
  auto stride = std::make_shared<int>(0);
  auto csv_prefix = std::make_shared<std::string>();
  CLI::App* cmd = app.add_subcommand("solve", "Finite-difference nu-evolution of the IVP");
  add_surface_opts(cmd, *opts);
  cmd->add_option("--box", gridopts->box_specs, "Grid box lo,hi (one per dimension)")->required();
  cmd->add_option("--cells", gridopts->cells_spec, "Cells per axis (one value or per-axis list)");
  cmd->add_option("--nu-range", gridopts->nu_range_spec, "Evolution range nu0,nu1");
  cmd->add_option("--dnu", gridopts->dnu, "nu step (0 = auto from CFL)");
  cmd->add_option("--cfl-safety", gridopts->cfl_safety, "CFL safety factor");
  cmd->add_option("--profile-f", *prof_f, "Initial profile F");
  cmd->add_option("--profile-d", *prof_d, "Velocity profile D");
  cmd->add_option("--snap-stride", *stride, "Snapshot stride (0 = about ten per run)");
  cmd->add_option("--csv-prefix", *csv_prefix, "Write snapshot CSVs to <prefix><k>.csv");
  cmd->add_option("--out", out->path, "Output path (- for stdout)");
  cmd->add_option("--format", out->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--dry-run", *dry, "Validate config only");
  cmd->callback([&state, opts, out, dry, gridopts, prof_f, prof_d, stride, csv_prefix] {
    (void)state;
    lswe::PotentialSurface surface = make_surface(*opts);
    lswe::Grid grid = resolve_grid(*gridopts, opts->dim);
    lswe::WaveProfile f = parse_profile(*prof_f);
    lswe::WaveProfile d = parse_profile(*prof_d);
    json config{{"surface", surface_config(*opts)},
                {"grid", grid_json(grid)},
                {"profile_f", profile_json(*prof_f)},
                {"profile_d", profile_json(*prof_d)},
                {"snap_stride", *stride}};
    if (!csv_prefix->empty()) config["csv_prefix"] = *csv_prefix;
    if (*dry) {
      emit_dry_run(*out, "solve", config);
      return;
    }
    lswe::IvpRun run = lswe::solve_ivp(surface, grid, f, d, *stride);
    json snaps = json::array();
    std::vector<std::string> csv_files;
    for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
      const lswe::FieldSnapshot& s = run.snapshots[k];
      json row{{"nu", s.nu},
               {"error_linf", s.error_linf},
               {"error_l2", s.error_l2},
               {"wake_energy", s.wake_energy}};
      if (!csv_prefix->empty()) {
        std::string path = *csv_prefix + std::to_string(k) + ".csv";
        std::ofstream cf(path);
        if (!cf) throw lswe::ValidationError("cannot open csv path '" + path + "'");
        lswe::Grid used = run.grid;
        used.dnu = run.dnu;
        lswe::write_snapshot_csv(used, s, cf);
        row["csv_path"] = path;
        csv_files.push_back(path);
      }
      snaps.push_back(row);
    }
    json results = json::array();
    results.push_back(json{{"dnu", run.dnu},
                           {"nu_steps", run.nu_steps},
                           {"grid", grid_json(run.grid)},
                           {"snapshots", snaps}});
    emit(*out, "solve", config, results);
  });
}

void setup_converge(CLI::App& app, AppState& state) {
  auto opts = std::make_shared<SurfaceOpts>();
  auto out = std::make_shared<OutputOpts>();
  auto dry = std::make_shared<bool>(false);
  auto gridopts = std::make_shared<GridOpts>();
  auto prof_f = std::make_shared<std::string>("gauss:2,0.05");
  auto prof_d = std::make_shared<std::string>("zero");
  auto refinements = std::make_shared<int>(3);
  CLI::App* cmd = app.add_subcommand("converge", "Convergence study under grid refinement");
  add_surface_opts(cmd, *opts);
  cmd->add_option("--box", gridopts->box_specs, "Grid box lo,hi (one per dimension)")->required();
  cmd->add_option("--cells", gridopts->cells_spec, "Base cells per axis");
  cmd->add_option("--nu-range", gridopts->nu_range_spec, "Evolution range nu0,nu1");
  cmd->add_option("--cfl-safety", gridopts->cfl_safety, "CFL safety factor");
  cmd->add_option("--profile-f", *prof_f, "Initial profile F");
  cmd->add_option("--profile-d", *prof_d, "Velocity profile D");
  cmd->add_option("--refinements", *refinements, "Number of grids (>= 2)")->check(CLI::Range(2, 8));
  cmd->add_option("--out", out->path, "Output path (- for stdout)");
  cmd->add_option("--format", out->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--dry-run", *dry, "Validate config only");
  cmd->callback([&state, opts, out, dry, gridopts, prof_f, prof_d, refinements] {
    (void)state;
    lswe::PotentialSurface surface = make_surface(*opts);
    lswe::Grid grid = resolve_grid(*gridopts, opts->dim);
    lswe::WaveProfile f = parse_profile(*prof_f);
    lswe::WaveProfile d = parse_profile(*prof_d);
    json config{{"surface", surface_config(*opts)},
                {"grid", grid_json(grid)},
                {"profile_f", profile_json(*prof_f)},
                {"profile_d", profile_json(*prof_d)},
                {"refinements", *refinements}};
    if (*dry) {
      emit_dry_run(*out, "converge", config);
      return;
    }
    lswe::ConvergenceStudy study = lswe::convergence_study(surface, grid, f, d, *refinements);
    json levels = json::array();
    for (std::size_t r = 0; r < study.error_linf.size(); ++r) {
      levels.push_back(json{{"dq", study.dq[r]},
                            {"dnu", study.dnu[r]},
                            {"error_linf", study.error_linf[r]}});
    }
    json results = json::array();
    results.push_back(json{{"levels", levels}, {"order", study.order}});
    emit(*out, "converge", config, results);
  });
}

void setup_plot_data(CLI::App& app, AppState& state) {
  auto opts = std::make_shared<SurfaceOpts>();
  auto out = std::make_shared<OutputOpts>();
  auto dry = std::make_shared<bool>(false);
  auto box = std::make_shared<SampleBoxOpts>();
  auto cells = std::make_shared<int>(100);
  CLI::App* cmd =
      app.add_subcommand("plot-data", "CSV of V and G on a grid for external plotting");
  add_surface_opts(cmd, *opts);
  cmd->add_option("--box", box->box_specs, "Plot box lo,hi (one or one per dimension)");
  cmd->add_option("--cells", *cells, "Cells per axis")->check(CLI::Range(1, 2048));
  cmd->add_option("--out", out->path, "Output path (- for stdout)");
  cmd->add_flag("--dry-run", *dry, "Validate config only");
  cmd->callback([&state, opts, out, dry, box, cells] {
    (void)state;
    lswe::PotentialSurface surface = make_surface(*opts);
    auto bounds = resolve_box(*box, opts->dim);
    json config{{"surface", surface_config(*opts)}, {"box", bounds}, {"cells", *cells}};
    if (*dry) {
      emit_dry_run(*out, "plot-data", config);
      return;
    }
    if (opts->dim > 2) {
      throw lswe::ValidationError("plot-data supports one- and two-dimensional surfaces");
    }
    std::ostringstream os;
    const int n = opts->dim;
    for (int d = 0; d < n; ++d) os << "q" << (d + 1) << ",";
    os << "V,G\n";
    auto emit_row = [&](const std::vector<double>& q) {
      double V = surface.value(q);
      double G = 0.0;
      try {
        G = surface.gauge(q, 1).G;
      } catch (const lswe::StationaryPointError& e) {
        G = e.G();  // report the raw value; plotting data need not exclude it
      }
      for (double c : q) os << c << ',';
      os << V << ',' << G << '\n';
    };
    std::vector<double> q(static_cast<std::size_t>(n));
    if (n == 1) {
      for (int i = 0; i <= *cells; ++i) {
        q[0] = bounds[0][0] + (bounds[0][1] - bounds[0][0]) * i / *cells;
        emit_row(q);
      }
    } else {
      for (int i = 0; i <= *cells; ++i) {
        for (int j = 0; j <= *cells; ++j) {
          q[0] = bounds[0][0] + (bounds[0][1] - bounds[0][0]) * i / *cells;
          q[1] = bounds[1][0] + (bounds[1][1] - bounds[1][0]) * j / *cells;
          emit_row(q);
        }
      }
    }
    if (out->path == "-") {
      std::cout << os.str();
    } else {
      std::ofstream fo(out->path);
      if (!fo) throw lswe::ValidationError("cannot open output path '" + out->path + "'");
      fo << os.str();
    }
  });
}

void print_error_json(const std::string& kind, const std::string& type,
                      const std::string& message) {
  json err{{"schema", kSchema},
           {"error", {{"kind", kind}, {"type", type}, {"message", message}}}};
  std::cerr << err.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level-set wave equation toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a config file");
  app.allow_config_extras(false);

  AppState state;
  setup_gauge(app, state);
  setup_geometry(app, state);
  setup_huygens(app, state);
  setup_verify_wave(app, state);
  setup_split_check(app, state);
  setup_geodesic(app, state);
  setup_connect_like(app, state, "connect", "Boundary-value geodesic by shooting", false);
  setup_connect_like(app, state, "distance", "Geodesic distance between two events", true);
  setup_elementary(app, state);
  setup_adjoint_check(app, state);
  setup_solve(app, state);
  setup_converge(app, state);
  setup_plot_data(app, state);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error_json("validation", "CliParse", e.what());
    return 2;
  } catch (const lswe::ValidationError& e) {
    print_error_json("validation", "Validation", e.what());
    return 2;
  } catch (const lswe::ParseError& e) {
    print_error_json("validation", "ExpressionParse", e.what());
    return 2;
  } catch (const lswe::StationaryPointError& e) {
    print_error_json("numerical", "StationaryPoint", e.what());
    return 3;
  } catch (const lswe::NoConvergenceError& e) {
    print_error_json("numerical", "NoConvergence", e.what());
    return 3;
  } catch (const lswe::CflViolationError& e) {
    print_error_json("numerical", "CflViolation", e.what());
    return 3;
  } catch (const lswe::TimelikePathError& e) {
    print_error_json("numerical", "TimelikePath", e.what());
    return 3;
  } catch (const lswe::DomainError& e) {
    print_error_json("numerical", "Domain", e.what());
    return 3;
  } catch (const lswe::Error& e) {
    print_error_json("internal", "Error", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error_json("internal", "Unexpected", e.what());
    return 1;
  }
  return state.exit_code;
}

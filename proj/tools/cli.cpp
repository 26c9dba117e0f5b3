#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "qiso/applications.hpp"
#include "qiso/inequalities.hpp"
#include "qiso/io.hpp"
#include "qiso/loops.hpp"
#include "qiso/models.hpp"
#include "qiso/parallel.hpp"
#include "qiso/search.hpp"

namespace qiso::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string out_dir = "runs";
  std::string format = "csv";
  std::uint64_t seed = 0;
};

void add_common(CLI::App* app, Common& c, const std::string& default_dir) {
  c.out_dir = default_dir;
  app->add_option("--out", c.out_dir, "Output directory");
  app->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--seed", c.seed, "Random seed");
}

struct ModelFlags {
  std::string model = "ssh";
  std::string model_file;
  double v = 0.0, w = 1.0, t = 1.0, scale = 1.0, vf = 1.0, a = 1.0;
  int layers = 1;
  std::string band = "lower";
};

void add_model_flags(CLI::App* app, ModelFlags& m) {
  app->add_option("--model", m.model, "Built-in model")
      ->check(CLI::IsMember({"ssh", "creutz", "rhombohedral", "dirac"}));
  app->add_option("--model-file", m.model_file, "JSON model definition {kind, parameters, lattice_const}");
  app->add_option("--v", m.v, "SSH intracell hopping");
  app->add_option("--w", m.w, "SSH intercell hopping");
  app->add_option("--t", m.t, "Creutz hopping");
  app->add_option("--N", m.layers, "Rhombohedral layer count")->check(CLI::PositiveNumber);
  app->add_option("--scale", m.scale, "Rhombohedral energy scale");
  app->add_option("--vf", m.vf, "Dirac velocity");
  app->add_option("--a", m.a, "Lattice constant")->check(CLI::PositiveNumber);
  app->add_option("--band", m.band, "Band")->check(CLI::IsMember({"lower", "upper"}));
}

ModelSpec build_model(const ModelFlags& f) {
  if (!f.model_file.empty()) return model_from_json(json::parse(read_text(f.model_file)));
  if (f.model == "ssh") return {SSH{f.v, f.w}, f.a};
  if (f.model == "creutz") return {Creutz{f.t}, f.a};
  if (f.model == "rhombohedral") return {Rhombohedral{f.layers, f.scale}, f.a};
  return {Dirac2D{f.vf}, f.a};
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

json resolved_options(const CLI::App* app) {
  json cfg = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    cfg[name] = opt->count() > 0 ? join(opt->reduced_results(), ",") : opt->get_default_str();
  }
  return cfg;
}

void write_manifest(const fs::path& dir, const CLI::App* sub, const std::vector<std::string>& args,
                    const std::string& config_file) {
  json m{{"command", sub->get_name()},
         {"version", kVersion},
         {"config", resolved_options(sub)},
         {"args", args},
         {"config_file", config_file.empty() ? json(nullptr) : json(config_file)},
         {"threads", worker_count()}};
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

/// Splices flat JSON config keys in as "--key=value" right after the
/// subcommand token, so explicit flags (parsed later, last one wins) override.
std::vector<std::string> apply_config(std::vector<std::string> args, std::string& config_file) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string value;
    std::size_t erase = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      value = args[i + 1];
      erase = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      value = args[i].substr(9);
      erase = 1;
    }
    if (erase == 0) continue;
    config_file = value;
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + erase));
    break;
  }
  if (config_file.empty()) return args;
  json cfg;
  try {
    cfg = json::parse(read_text(config_file));
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config file: ") + e.what());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  std::vector<std::string> injected;
  for (const auto& [key, val] : cfg.items()) {
    std::string text;
    if (val.is_string()) {
      text = val.get<std::string>();
    } else if (val.is_array()) {
      std::vector<std::string> parts;
      for (const auto& x : val) parts.push_back(x.is_string() ? x.get<std::string>() : x.dump());
      text = join(parts, ",");
    } else {
      text = val.dump();
    }
    injected.push_back("--" + key + "=" + text);
  }
  // Insert after the first positional (the subcommand, plus a nested one for loop-io).
  std::size_t pos = 0;
  while (pos < args.size() && args[pos].rfind("-", 0) == 0) ++pos;
  if (pos < args.size()) ++pos;
  if (pos < args.size() && (args[pos] == "export" || args[pos] == "import")) ++pos;
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(pos), injected.begin(), injected.end());
  return args;
}

void emit_table(const fs::path& dir, const std::string& stem, const CsvTable& table, const json& as_json,
                const std::string& format) {
  if (format == "json") {
    write_text(dir / (stem + ".json"), as_json.dump(2) + "\n");
  } else {
    write_text(dir / (stem + ".csv"), table.str());
  }
}


// ---------------------------------------------------------------- verify

struct VerifyOpts {
  Common common;
  int m = 2;
  int loops = 1000;
  int k = 2;
  int n = 2048;
};

int cmd_verify(const VerifyOpts& o, const CLI::App* sub, const std::vector<std::string>& args,
               const std::string& config_file, std::ostream& out, std::ostream& err) {
  if (o.m < 2) {
    throw UsageError("--m must be >= 2: a single-level Hilbert space is a point with vanishing geometry");
  }
  if (o.loops < 1) throw UsageError("--loops must be >= 1");
  if (o.k < 0) throw UsageError("--k must be >= 0");
  if (o.n < 8 * (o.k + 1)) throw UsageError("--n must be >= 8(k+1)");

  struct Row {
    bool ok = false;
    LoopSummary s;
    IneqReport weak, strong;
    FourierLoopSpec spec;
    std::string failure;
  };
  std::vector<Row> rows(static_cast<std::size_t>(o.loops));
  parallel_for(rows.size(), [&](std::size_t i) {
    Row& r = rows[i];
    std::mt19937_64 rng = make_rng(o.common.seed, i);
    r.spec = random_fourier_spec(o.m, o.k, o.n, rng);
    try {
      r.s = summarize(fourier_loop(r.spec));
      r.weak = weak_qii(r.s);
      r.strong = strong_qii(r.s);
      r.ok = true;
    } catch (const Error& e) {
      r.failure = e.what();
    }
  });

  const fs::path dir = o.common.out_dir;
  const double gate = kTol.saturation_floor;
  CsvTable table({"index", "generator", "seed", "M", "K", "n", "d_fs", "gamma_b", "weak_margin", "weak_margin_abs",
                  "strong_margin", "strong_conjecture"});
  json records = json::array();
  double min_weak = std::numeric_limits<double>::infinity();
  double min_weak_abs = min_weak;
  int violations = 0, skipped = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    if (!r.ok) {
      ++skipped;
      err << "loop " << i << " skipped: " << r.failure << "\n";
      continue;
    }
    min_weak = std::min(min_weak, r.weak.margin);
    min_weak_abs = std::min(min_weak_abs, r.weak.margin_abs);
    table.add_row({std::to_string(i), "fourier", std::to_string(o.common.seed), std::to_string(o.m),
                   std::to_string(o.k), std::to_string(o.n), format_double(r.s.d_fs), format_double(r.s.gamma_b),
                   format_double(r.weak.margin), format_double(r.weak.margin_abs), format_double(r.strong.margin),
                   r.strong.conjecture ? "1" : "0"});
    records.push_back({{"index", i}, {"summary", to_json(r.s)}, {"weak", to_json(r.weak)}, {"strong", to_json(r.strong)}});
    if (r.weak.margin < -gate || r.weak.margin_abs < -gate) {
      ++violations;
      write_loop_csv(dir / ("violation_" + std::to_string(i) + ".csv"), fourier_loop(r.spec),
                     {{"generator", "fourier"}, {"seed", o.common.seed}, {"index", i}, {"spec", to_json(r.spec)}});
    }
  }
  emit_table(dir, "margins", table, records, o.common.format);
  const json summary{{"loops", o.loops}, {"evaluated", o.loops - skipped}, {"skipped", skipped},
                     {"min_weak_margin", min_weak}, {"min_weak_margin_abs", min_weak_abs},
                     {"violations", violations}, {"gate", gate}};
  write_text(dir / "verify_summary.json", summary.dump(2) + "\n");
  write_manifest(dir, sub, args, config_file);
  out << "verify M=" << o.m << " loops=" << o.loops << " min(d-gamma)=" << format_double(min_weak)
      << " min(d-|gamma|)=" << format_double(min_weak_abs) << " violations=" << violations << "\n";
  return violations > 0 ? kViolation : kOk;
}

// ---------------------------------------------------------------- figure1

struct Figure1Opts {
  Common common;
  double theta = kPi / 4.0;
  std::vector<int> n_list{3, 4, 5, 6, 8, 16, 64, 10000};
  int n_per_edge = 4;
};

int cmd_figure1(const Figure1Opts& o, const CLI::App* sub, const std::vector<std::string>& args,
                const std::string& config_file, std::ostream& out) {
  if (!(o.theta > 0.0 && o.theta < kPi)) throw UsageError("--theta must lie in (0, pi)");
  for (int N : o.n_list) {
    if (N < 3) throw UsageError("--n-list entries must be >= 3");
  }
  const fs::path dir = o.common.out_dir;
  CsvTable planar({"N", "quotient"});
  CsvTable sphere({"N", "theta", "perimeter", "area", "quotient", "sphere_margin"});
  json pj = json::array(), sj = json::array();
  std::vector<std::pair<double, double>> planar_pts, sphere_pts;
  constexpr double R = 0.5;

  out << "N  planar_quotient  spherical_quotient\n";
  for (int N : o.n_list) {
    const double q = regular_polygon_quotient(N);
    planar.add_row({std::to_string(N), format_double(q)});
    pj.push_back({{"N", N}, {"quotient", q}});
    planar_pts.emplace_back(std::log10(N), q);

    const int per_edge = std::max(1, std::min(o.n_per_edge, 200000 / N));
    const LoopSummary s = summarize(spherical_polygon(N, o.theta, per_edge));
    const double area = 2.0 * std::abs(s.gamma_b) * R * R;
    const IneqReport rep = sphere_check(s.d_fs, area, R);
    const double sq = bloch_sphere_quotient(s);
    sphere.add_row({std::to_string(N), format_double(o.theta), format_double(s.d_fs), format_double(area),
                    format_double(sq), format_double(rep.margin)});
    sj.push_back({{"N", N}, {"theta", o.theta}, {"perimeter", s.d_fs}, {"area", area}, {"quotient", sq},
                  {"sphere_margin", rep.margin}});
    sphere_pts.emplace_back(std::log10(N), sq);
    out << N << "  " << format_double(q) << "  " << format_double(sq) << "\n";
  }
  planar.add_row({"inf", "1"});
  pj.push_back({{"N", "inf"}, {"quotient", 1.0}});
  {
    // Circle of constant polar angle: the saturating shape on the sphere.
    const double perimeter = kPi * std::sin(o.theta);
    const double area = 2.0 * kPi * R * R * (1.0 - std::cos(o.theta));
    const IneqReport rep = sphere_check(perimeter, area, R);
    sphere.add_row({"inf", format_double(o.theta), format_double(perimeter), format_double(area),
                    format_double(rep.lhs / rep.rhs), format_double(rep.margin)});
    sj.push_back({{"N", "inf"}, {"theta", o.theta}, {"perimeter", perimeter}, {"area", area},
                  {"quotient", rep.lhs / rep.rhs}, {"sphere_margin", rep.margin}});
  }
  out << "inf  1  1\n";
  emit_table(dir, "figure1_planar", planar, pj, o.common.format);
  emit_table(dir, "figure1_spherical", sphere, sj, o.common.format);

  double x_max = 1.0, y_max = 1.0;
  for (const auto& p : planar_pts) x_max = std::max(x_max, p.first), y_max = std::max(y_max, p.second);
  for (const auto& p : sphere_pts) y_max = std::max(y_max, p.second);
  SvgPlot plot(640, 420, 0.0, x_max * 1.05, 0.9, y_max * 1.05);
  plot.axes("log10 N", "inverse isoperimetric quotient");
  plot.polyline({{0.0, 1.0}, {x_max * 1.05, 1.0}}, "#999999", 1.0);
  plot.polyline(planar_pts, "#d62728");
  plot.polyline(sphere_pts, "#1f77b4");
  for (const auto& [x, y] : planar_pts) plot.circle(x, y, 3.0, "#d62728");
  for (const auto& [x, y] : sphere_pts) plot.circle(x, y, 3.0, "#1f77b4");
  plot.text(x_max * 0.55, y_max, "red: plane, blue: sphere");
  write_text(dir / "figure1.svg", plot.str());
  write_manifest(dir, sub, args, config_file);
  return kOk;
}

// ---------------------------------------------------------------- models

struct ModelsOpts {
  Common common;
  ModelFlags model;
  int nk = 4096;
  double ef = 1.0;
};

int cmd_models(const ModelsOpts& o, const CLI::App* sub, const std::vector<std::string>& args,
               const std::string& config_file, std::ostream& out) {
  const ModelSpec m = build_model(o.model);
  const Band band = parse_band(o.model.band);
  const Loop loop = m.dim_k() == 1 ? bz_loop(m, band, o.nk) : fermi_surface_loop(m, o.ef, o.nk, band).loop;
  const LoopSummary s = summarize(loop);
  std::vector<LoopSummary> parts;
  for (const Loop& sub_loop : split_self_intersections(loop)) parts.push_back(summarize(sub_loop));
  const IneqReport agg = aggregate_subloops(parts);
  double worst_strong = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) worst_strong = std::min(worst_strong, strong_qii(p, parts.size() > 1).margin);
  const IneqReport weak = weak_qii(s);

  const fs::path dir = o.common.out_dir;
  CsvTable table({"model", "parameters", "band", "n", "d_fs", "gamma_b", "subloops", "d_total", "gamma_total",
                  "strong_margin_min", "weak_margin", "aggregate_margin"});
  const std::string params = model_to_json(m)["parameters"].dump();
  table.add_row({m.name(), params, std::string(to_string(band)), std::to_string(o.nk), format_double(s.d_fs),
                 format_double(s.gamma_b), std::to_string(parts.size()), format_double(agg.lhs),
                 format_double(agg.rhs), format_double(worst_strong), format_double(weak.margin),
                 format_double(agg.margin)});
  const json report{{"model", model_to_json(m)}, {"band", to_string(band)},   {"summary", to_json(s)},
                    {"weak", to_json(weak)},     {"aggregate", to_json(agg)}, {"strong_margin_min", worst_strong}};
  emit_table(dir, "models", table, report, o.common.format);
  write_manifest(dir, sub, args, config_file);
  out << "model=" << m.name() << " " << params << " band=" << to_string(band) << " d_fs=" << format_double(s.d_fs)
      << " gamma_b=" << format_double(s.gamma_b) << " subloops=" << parts.size()
      << " d_total=" << format_double(agg.lhs) << " gamma_total=" << format_double(agg.rhs) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- apps

struct AppsOpts {
  Common common;
  ModelFlags model;
  std::string app = "wannier";
  int nk = 4096;
  double ef = 1.0;
  double U = 1.0;
  double nu = 0.5;
  bool minimal_metric = false;
  double larmor = 1.0;
  double cone = kPi / 3.0;
  double periods = 50.0;
  int steps = 100000;
};

int cmd_apps(const AppsOpts& o, const CLI::App* sub, const std::vector<std::string>& args,
             const std::string& config_file, std::ostream& out) {
  const fs::path dir = o.common.out_dir;
  BoundChain chain;
  json extra = json::object();
  if (o.app == "speed") {
    const double period = o.periods * 2.0 * kPi / o.larmor;
    const TimeHamiltonian h = rotating_field(o.larmor, o.cone, period);
    const Trajectory traj = evolve(h, cyclic_initial_state(o.larmor, o.cone, period), period, o.steps);
    const double gamma = trajectory_berry_phase(traj);
    const SpeedLimitReport rep = speed_limit_report(traj, gamma);
    chain = rep.chain;
    extra = {{"speed_residual", rep.residual}, {"mean_energy_std", rep.mean_energy_std},
             {"path_length", rep.path_length}, {"gamma_b", gamma}, {"period", period}};
  } else {
    const ModelSpec m = build_model(o.model);
    const Band band = parse_band(o.model.band);
    if (o.app == "wannier") {
      chain = wannier_bound_chain(m, band, o.nk);
    } else if (o.app == "eph") {
      chain = eph_bound_chain(m, o.ef, o.nk);
    } else {
      chain = superfluid_weight_1d(m, o.U, o.nu, o.nk,
                                   o.minimal_metric ? MetricConvention::Minimal : MetricConvention::Computed);
    }
    extra["model"] = model_to_json(m);
  }
  CsvTable table({"label", "value", "unit"});
  for (const auto& e : chain.entries) table.add_row({e.label, format_double(e.value), e.unit});
  json report = to_json(chain);
  report["details"] = extra;
  emit_table(dir, "chain_" + o.app, table, report, o.common.format);
  write_manifest(dir, sub, args, config_file);
  out << chain.name << ":";
  for (const auto& e : chain.entries) out << " " << e.label << "=" << format_double(e.value);
  out << (chain.monotone() ? "  [monotone]" : "  [NOT monotone]") << "\n";
  for (const auto& note : chain.notes) out << "note: " << note << "\n";
  return chain.monotone() ? kOk : kViolation;
}

// ---------------------------------------------------------------- search

struct SearchOpts {
  Common common;
  SearchConfig cfg;
  std::vector<std::uint64_t> seeds;
};

int cmd_search(SearchOpts o, const CLI::App* sub, const std::vector<std::string>& args,
               const std::string& config_file, std::ostream& out) {
  try {
    o.cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const fs::path dir = o.common.out_dir;
  std::vector<std::uint64_t> seeds = o.seeds;
  if (seeds.empty()) seeds.push_back(o.common.seed);
  bool violation = false;
  for (std::uint64_t seed : seeds) {
    const fs::path record = dir / ("search_seed_" + std::to_string(seed) + ".json");
    if (o.seeds.size() > 0 && fs::exists(record)) {
      out << "seed " << seed << ": run record exists, skipped\n";
      continue;
    }
    SearchConfig cfg = o.cfg;
    cfg.seed = seed;
    const SearchResult r = minimize_margin(cfg);
    json run{{"config", to_json(cfg)}, {"result", to_json(r)}, {"version", kVersion}};
    write_text(record, run.dump(2) + "\n");
    out << "seed " << seed << ": best_margin=" << format_double(r.best_margin) << " evals=" << r.evals
        << " status=" << r.status;
    if (r.rechecked) out << " recheck(" << r.recheck_n << ")=" << format_double(r.recheck_margin);
    out << "\n";
    if (r.violation) {
      violation = true;
      FourierLoopSpec spec = r.best_spec;
      spec.n = r.recheck_n;
      write_loop_csv(dir / ("counterexample_seed_" + std::to_string(seed) + ".csv"), fourier_loop(spec),
                     {{"generator", "fourier"}, {"seed", seed}, {"spec", to_json(spec)}});
      out << "seed " << seed << ": persistent negative strong-QII margin, counterexample written\n";
    }
  }
  write_manifest(dir, sub, args, config_file);
  return violation ? kViolation : kOk;
}

// ---------------------------------------------------------------- loop-io

struct LoopExportOpts {
  std::string path;
  std::string generator = "circle";
  double theta = kPi / 3.0;
  int n = 256;
  int polygon_n = 3;
  std::vector<double> axis{0.0, 0.0, 1.0};
  int turns = 1;
  int m = 2;
  int k = 2;
  std::uint64_t seed = 0;
};

int cmd_loop_export(const LoopExportOpts& o, std::ostream& out) {
  json params;
  Loop loop = [&] {
    if (o.generator == "circle") {
      params = {{"theta", o.theta}};
      return bloch_circle(o.theta, o.n);
    }
    if (o.generator == "great-circle") {
      if (o.axis.size() != 3) throw UsageError("--axis takes three numbers");
      params = {{"axis", o.axis}, {"turns", o.turns}};
      return great_circle(Eigen::Vector3d(o.axis[0], o.axis[1], o.axis[2]), o.n, o.turns);
    }
    if (o.generator == "polygon") {
      params = {{"N", o.polygon_n}, {"theta", o.theta}, {"n_per_edge", o.n}};
      return spherical_polygon(o.polygon_n, o.theta, o.n);
    }
    std::mt19937_64 rng = make_rng(o.seed, 0);
    const FourierLoopSpec spec = random_fourier_spec(o.m, o.k, o.n, rng);
    params = to_json(spec);
    return fourier_loop(spec);
  }();
  write_loop_csv(o.path, loop, {{"generator", o.generator}, {"parameters", params}, {"seed", o.seed}});
  out << "wrote " << loop.size() << " states (M=" << loop.dim() << ") to " << o.path << "\n";
  return kOk;
}

int cmd_loop_import(const std::string& path, double tol, std::ostream& out) {
  const LoopFile f = read_loop_csv(path);
  const LoopSummary s = summarize(f.loop);
  const SplitResult parts = split_self_intersections_with_events(f.loop, tol);
  std::vector<LoopSummary> sums;
  for (const Loop& l : parts.loops) sums.push_back(summarize(l));
  json events = json::array();
  for (const auto& e : parts.events) events.push_back({{"first", e.first}, {"second", e.second}, {"distance", e.distance}});
  json report{{"header", f.header},
              {"summary", to_json(s)},
              {"weak", to_json(weak_qii(s))},
              {"strong", to_json(strong_qii(s))},
              {"aggregate", to_json(aggregate_subloops(sums))},
              {"split_events", events}};
  if (f.loop.dim() == 2) report["solid_angle"] = bloch_solid_angle(f.loop);
  out << report.dump(2) << "\n";
  return kOk;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> original = args;
  std::string config_file;
  try {
    args = apply_config(std::move(args), config_file);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Quantum isoperimetric inequalities: loops, bounds, and searches", "qiso"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  VerifyOpts verify;
  auto* verify_cmd = app.add_subcommand("verify", "Random-loop property suite for the weak/strong inequalities");
  add_common(verify_cmd, verify.common, "runs/verify");
  verify_cmd->add_option("--m", verify.m, "Hilbert-space dimension M");
  verify_cmd->add_option("--loops", verify.loops, "Number of random loops");
  verify_cmd->add_option("--k", verify.k, "Fourier harmonic cutoff");
  verify_cmd->add_option("--n", verify.n, "Samples per loop");

  Figure1Opts fig;
  auto* fig_cmd = app.add_subcommand("figure1", "Planar and spherical regular-polygon quotient tables");
  add_common(fig_cmd, fig.common, "runs/figure1");
  fig_cmd->add_option("--theta", fig.theta, "Polar angle of the spherical polygons");
  fig_cmd->add_option("--n-list", fig.n_list, "Polygon side counts")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  fig_cmd->add_option("--n-per-edge", fig.n_per_edge, "Samples per geodesic edge")->check(CLI::PositiveNumber);

  ModelsOpts models;
  auto* models_cmd = app.add_subcommand("models", "Brillouin-zone or Fermi-surface loop of a model band");
  add_common(models_cmd, models.common, "runs/models");
  add_model_flags(models_cmd, models.model);
  models_cmd->add_option("--nk", models.nk, "k points")->check(CLI::Range(3, 1 << 24));
  models_cmd->add_option("--ef", models.ef, "Fermi energy for 2D models")->check(CLI::PositiveNumber);

  AppsOpts apps;
  auto* apps_cmd = app.add_subcommand("apps", "Physical bound chains");
  add_common(apps_cmd, apps.common, "runs/apps");
  add_model_flags(apps_cmd, apps.model);
  apps_cmd->add_option("--app", apps.app, "Application")->check(CLI::IsMember({"wannier", "speed", "eph", "sfweight"}));
  apps_cmd->add_option("--nk", apps.nk, "k points")->check(CLI::Range(3, 1 << 24));
  apps_cmd->add_option("--ef", apps.ef, "Fermi energy")->check(CLI::PositiveNumber);
  apps_cmd->add_option("--U", apps.U, "Hubbard attraction");
  apps_cmd->add_option("--nu", apps.nu, "Filling factor")->check(CLI::Range(0.0, 1.0));
  apps_cmd->add_flag("--minimal-metric", apps.minimal_metric, "Fully dimerized SSH taken with the minimal metric");
  apps_cmd->add_option("--larmor", apps.larmor, "Larmor frequency of the speed-limit drive")->check(CLI::PositiveNumber);
  apps_cmd->add_option("--cone", apps.cone, "Cone half-angle of the drive");
  apps_cmd->add_option("--periods", apps.periods, "Drive period in Larmor periods")->check(CLI::PositiveNumber);
  apps_cmd->add_option("--steps", apps.steps, "Integration steps")->check(CLI::PositiveNumber);

  SearchOpts search;
  auto* search_cmd = app.add_subcommand("search", "Derivative-free probe of the strong inequality for M > 2");
  add_common(search_cmd, search.common, "runs/search");
  search_cmd->add_option("--m", search.cfg.M, "Hilbert-space dimension M");
  search_cmd->add_option("--k", search.cfg.K, "Fourier harmonic cutoff");
  search_cmd->add_option("--n", search.cfg.n, "Samples per loop");
  search_cmd->add_option("--budget", search.cfg.budget, "Objective evaluations across restarts");
  search_cmd->add_option("--restarts", search.cfg.restarts, "Independent restarts");
  search_cmd->add_option("--coeff-bound", search.cfg.coeff_bound, "Box bound on coefficients");
  search_cmd->add_option("--seeds", search.seeds, "Seed list; seeds with an existing run record are skipped")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto* loop_cmd = app.add_subcommand("loop-io", "Import or export loop CSV files");
  loop_cmd->require_subcommand(1);
  LoopExportOpts exp;
  auto* export_cmd = loop_cmd->add_subcommand("export", "Generate a loop and write it as CSV");
  export_cmd->add_option("path", exp.path, "Output CSV")->required();
  export_cmd->add_option("--generator", exp.generator, "Generator")
      ->check(CLI::IsMember({"circle", "great-circle", "polygon", "fourier"}));
  export_cmd->add_option("--theta", exp.theta, "Polar angle");
  export_cmd->add_option("--n", exp.n, "Samples (per edge for polygons)");
  export_cmd->add_option("--polygon-n", exp.polygon_n, "Polygon vertex count");
  export_cmd->add_option("--axis", exp.axis, "Great-circle axis")->delimiter(',')->expected(3)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  export_cmd->add_option("--turns", exp.turns, "Great-circle traversals");
  export_cmd->add_option("--m", exp.m, "Fourier-loop dimension");
  export_cmd->add_option("--k", exp.k, "Fourier harmonic cutoff");
  export_cmd->add_option("--seed", exp.seed, "Fourier-loop seed");
  std::string import_path;
  double import_tol = kTol.self_intersection;
  auto* import_cmd = loop_cmd->add_subcommand("import", "Read a loop CSV and report its geometry");
  import_cmd->add_option("path", import_path, "Input CSV")->required();
  import_cmd->add_option("--tol", import_tol, "Self-intersection tolerance")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (verify_cmd->parsed()) return cmd_verify(verify, verify_cmd, original, config_file, out, err);
    if (fig_cmd->parsed()) return cmd_figure1(fig, fig_cmd, original, config_file, out);
    if (models_cmd->parsed()) return cmd_models(models, models_cmd, original, config_file, out);
    if (apps_cmd->parsed()) return cmd_apps(apps, apps_cmd, original, config_file, out);
    if (search_cmd->parsed()) return cmd_search(search, search_cmd, original, config_file, out);
    if (export_cmd->parsed()) return cmd_loop_export(exp, out);
    if (import_cmd->parsed()) return cmd_loop_import(import_path, import_tol, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kUsage;
}

}  // namespace qiso::cli

// classc command-line runner: configuration-driven experiments and the
// verification suite for class-C network models on directed graphs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "classc/checks.hpp"
#include "classc/errors.hpp"
#include "classc/evolution.hpp"
#include "classc/experiments.hpp"
#include "classc/fixtures.hpp"
#include "classc/graph_json.hpp"
#include "classc/green.hpp"
#include "classc/history_walk.hpp"
#include "classc/l_lattice.hpp"
#include "classc/montecarlo.hpp"
#include "classc/reduction.hpp"
#include "classc/sign_analysis.hpp"
#include "classc/trail_enum.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;
constexpr int kExitResource = 4;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int workers = 1;
  std::optional<std::size_t> samples;
  std::string z_text;
  nlohmann::json config;  // parsed config file (may be empty object)

  bool has(const char* key) const { return config.contains(key); }

  template <typename T>
  T get(const char* key, T fallback) const {
    if (!config.contains(key)) return fallback;
    try {
      return config.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw classc::ParseError(std::string("config field \"") + key + "\" has the wrong type");
    }
  }

  std::uint64_t require_seed() const {
    if (seed) return *seed;
    if (has("seed")) return get<std::uint64_t>("seed", 0);
    throw classc::ParseError("a seed is mandatory for stochastic commands (--seed)");
  }

  std::size_t samples_or(std::size_t fallback) const {
    if (samples) return *samples;
    return get<std::size_t>("samples", fallback);
  }

  classc::Complex z_or(classc::Complex fallback) const {
    if (!z_text.empty()) {
      double re = 0.0, im = 0.0;
      if (std::sscanf(z_text.c_str(), "%lf,%lf", &re, &im) < 1)
        throw classc::ParseError("--z expects RE or RE,IM");
      return {re, im};
    }
    if (has("z")) {
      const auto& jz = config.at("z");
      if (jz.is_number()) return {jz.get<double>(), 0.0};
      if (jz.is_array() && jz.size() == 2) return {jz[0].get<double>(), jz[1].get<double>()};
      throw classc::ParseError("config field \"z\" must be a number or [re, im]");
    }
    return fallback;
  }
};

void apply_tolerance_overrides(const nlohmann::json& config) {
  if (!config.contains("tolerances")) return;
  const auto& t = config.at("tolerances");
  auto& tol = classc::tolerances();
  auto set = [&](const char* key, double& field) {
    if (t.contains(key)) field = t.at(key).get<double>();
  };
  set("su2_unitarity", tol.su2_unitarity);
  set("orthogonality", tol.orthogonality);
  set("su2_decompose", tol.su2_decompose);
  set("quaternion_identity", tol.quaternion_identity);
  set("minor_identity", tol.minor_identity);
  set("evolution_unitarity", tol.evolution_unitarity);
  set("normalization", tol.normalization);
  set("chain_rule", tol.chain_rule);
  set("zero_entry", tol.zero_entry);
  set("reduction_product", tol.reduction_product);
  set("solve_residual", tol.solve_residual);
  set("walk_negative", tol.walk_negative);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw classc::ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

/// Graph source: inline document, file path, or a named builder.
classc::NetworkGraph load_graph(const Options& opt) {
  using namespace classc;
  NetworkGraph g;
  if (opt.has("graph")) {
    g = parse_graph(opt.config.at("graph").dump());
  } else if (opt.has("graph_path")) {
    g = parse_graph(read_file(opt.get<std::string>("graph_path", "")));
  } else if (opt.has("builder")) {
    const auto& b = opt.config.at("builder");
    const std::string type = b.value("type", "");
    if (type == "l_lattice") {
      const int length = b.value("L", 8);
      double theta = b.contains("theta") ? b.at("theta").get<double>()
                                         : theta_for_left_turn_probability(b.value("p", 0.5));
      const std::string boundary = b.value("boundary", "torus");
      g = build_l_lattice(length, theta,
                          boundary == "open" ? Boundary::Open : Boundary::Torus);
    } else if (type == "single_loop") {
      g = single_loop_graph(b.value("sign", 1.0));
    } else if (type == "two_node") {
      g = two_node_fixture(b.value("theta_a", M_PI / 4), b.value("theta_b", M_PI / 4));
    } else if (type == "chain") {
      g = chain_open_graph(b.value("nodes", 3));
    } else if (type == "one_node_open") {
      g = one_node_open_fixture(b.value("theta", M_PI / 4));
    } else {
      throw ParseError("unknown builder type \"" + type + "\"");
    }
  } else {
    throw ParseError("config needs \"graph\", \"graph_path\" or \"builder\"");
  }
  if (opt.has("cut")) {
    std::vector<int> ids = opt.config.at("cut").get<std::vector<int>>();
    g = cut_edges(g, ids);
  }
  return g;
}

std::pair<int, int> edge_pair(const Options& opt, const char* what) {
  if (!opt.has("edges")) throw classc::ParseError(std::string("config needs \"edges\": ") + what);
  const auto v = opt.config.at("edges").get<std::vector<int>>();
  if (v.size() == 1) return {v[0], v[0]};
  if (v.size() != 2) throw classc::ParseError("\"edges\" must list one or two edge ids");
  return {v[0], v[1]};
}

ordered_json complex_json(classc::Complex c) { return ordered_json::array({c.real(), c.imag()}); }

ordered_json block_json(const classc::Mat2c& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < 2; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < 2; ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

ordered_json report_header(const std::string& command) {
  ordered_json rep;
  rep["schema_version"] = 1;
  rep["command"] = command;
  return rep;
}

void emit(const ordered_json& report, const Options& opt, const std::string& artifact_name) {
  std::cout << report.dump(2) << "\n";
  if (!opt.out_dir.empty())
    write_file(fs::path(opt.out_dir) / artifact_name, report.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_validate(const Options& opt) {
  using namespace classc;
  const NetworkGraph g = load_graph(opt);
  const std::vector<Violation> violations = validate(g);
  ordered_json rep = report_header("validate");
  rep["nodes"] = g.nodes().size();
  rep["edges"] = g.num_edges();
  rep["closed"] = g.is_closed();
  rep["valid"] = violations.empty();
  rep["violations"] = ordered_json::array();
  for (const Violation& v : violations)
    rep["violations"].push_back({{"rule", v.rule}, {"where", v.where}, {"detail", v.detail}});
  emit(rep, opt, "validate.json");
  return violations.empty() ? kExitOk : kExitVerification;
}

int cmd_green(const Options& opt) {
  using namespace classc;
  const NetworkGraph g = load_graph(opt);
  RngStream rng(opt.require_seed());
  const DisorderRealization d = sample_disorder(g, rng);
  const auto [e1, e2] = edge_pair(opt, "e1 and e2");
  const Complex z = opt.z_or({0.6, 0.0});
  const GreenBlock gb = green(g, d, e1, e2, z);
  ordered_json rep = report_header("green");
  rep["z"] = complex_json(z);
  rep["e1"] = e1;
  rep["e2"] = e2;
  rep["entries"] = block_json(gb.entries);
  rep["residual"] = gb.residual;
  rep["det"] = complex_json(gb.entries.determinant());
  rep["trace"] = complex_json(gb.entries.trace());
  if (z.imag() == 0.0) {
    if (const auto dec = su2_scalar_decompose(gb.entries)) {
      rep["lambda"] = dec->first;
      rep["su2_factor"] = block_json(dec->second);
    } else {
      rep["lambda"] = nullptr;
    }
  }
  emit(rep, opt, "green.json");
  return kExitOk;
}

int cmd_mean_green(const Options& opt) {
  using namespace classc;
  const NetworkGraph g = load_graph(opt);
  const auto [e1, e2] = edge_pair(opt, "e1 and e2");
  const Complex z = opt.z_or({0.6, 0.0});
  const std::size_t samples = opt.samples_or(100000);
  const RngStream rng(opt.require_seed());
  const MeanGreenResult mc = mean_green_mc(g, e1, e2, z, samples, rng, opt.workers);
  ordered_json rep = report_header("mean-green");
  rep["z"] = complex_json(z);
  rep["e1"] = e1;
  rep["e2"] = e2;
  rep["samples"] = mc.samples;
  rep["skipped"] = mc.skipped;
  rep["mean"] = block_json(mc.mean);
  {
    ordered_json se = ordered_json::array();
    for (int r = 0; r < 2; ++r)
      se.push_back(ordered_json::array({mc.stderrors(r, 0), mc.stderrors(r, 1)}));
    rep["stderr"] = se;
  }
  rep["mean_det"] = complex_json(mc.mean_det);
  rep["stderr_det"] = mc.stderr_det;
  rep["mean_trace"] = complex_json(mc.mean_trace);
  rep["stderr_trace"] = mc.stderr_trace;
  bool verdict_ok = true;
  if (e1 == e2 && g.is_closed() && std::abs(z) != 1.0) {
    const Complex classical = classical_mean_trace_green(g, e1, z,
                                                         opt.get<std::size_t>("trail_ceiling",
                                                                              kDefaultTrailCeiling));
    rep["classical_trace"] = complex_json(classical);
    const double dev = std::abs(mc.mean_trace - classical);
    verdict_ok = dev <= 3.0 * std::max(mc.stderr_trace, 1e-12);
    rep["verdict"] = verdict_ok ? "consistent" : "inconsistent";
    rep["deviation_sigma"] = dev / std::max(mc.stderr_trace, 1e-12);
  } else if (e1 != e2) {
    double worst = 0.0;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        const double se = std::max(mc.stderrors(r, c), 1e-12);
        worst = std::max(worst, std::abs(mc.mean(r, c)) / se);
      }
    verdict_ok = worst <= 3.0;
    rep["verdict"] = verdict_ok ? "consistent with zero" : "inconsistent with zero";
    rep["worst_entry_sigma"] = worst;
  }
  emit(rep, opt, "mean_green.json");
  return verdict_ok ? kExitOk : kExitVerification;
}

int cmd_dos(const Options& opt) {
  using namespace classc;
  const NetworkGraph g = load_graph(opt);
  RngStream rng(opt.require_seed());
  const DisorderRealization d = sample_disorder(g, rng);
  const double delta = opt.get<double>("delta", 0.05);
  const std::size_t points = opt.get<std::size_t>("points", 512);
  const std::size_t bins = opt.get<std::size_t>("bins", 64);
  const std::vector<double> curve = dos_curve(g, d, points, delta);
  double integral = 0.0;
  for (const double v : curve) integral += v;
  integral *= 2.0 * M_PI / static_cast<double>(points);
  const Histogram hist = eigenphase_histogram(g, d, bins);
  ordered_json rep = report_header("dos");
  rep["delta"] = delta;
  rep["points"] = points;
  rep["sum_rule_integral"] = integral;
  rep["expected_states"] = 2 * g.num_edges();
  rep["sum_rule_relative_error"] =
      std::abs(integral - 2.0 * static_cast<double>(g.num_edges())) /
      (2.0 * static_cast<double>(g.num_edges()));
  rep["histogram_counts"] = hist.counts;
  emit(rep, opt, "dos.json");
  if (!opt.out_dir.empty()) {
    std::string csv = "epsilon,rho_delta\n";
    char buf[80];
    for (std::size_t k = 0; k < curve.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n",
                    2.0 * M_PI * static_cast<double>(k) / static_cast<double>(points), curve[k]);
      csv += buf;
    }
    write_file(fs::path(opt.out_dir) / "dos.csv", csv);
  }
  return kExitOk;
}

int cmd_conductance(const Options& opt) {
  using namespace classc;
  const NetworkGraph g = load_graph(opt);
  if (g.is_closed()) throw ParseError("conductance needs an open graph (use \"cut\" or leads)");
  int e_in = g.leads_in().empty() ? -1 : g.leads_in().front();
  int e_out = g.leads_out().empty() ? -1 : g.leads_out().front();
  if (opt.has("edges")) {
    const auto [a, b] = edge_pair(opt, "e_in and e_out");
    e_in = a;
    e_out = b;
  }
  const std::size_t samples = opt.samples_or(100000);
  const RngStream rng(opt.require_seed());
  const MeanValueResult mc = mean_conductance_mc(g, e_in, e_out, samples, rng, opt.workers);
  ordered_json rep = report_header("conductance");
  rep["e_in"] = e_in;
  rep["e_out"] = e_out;
  rep["samples"] = mc.samples;
  rep["g_quantum"] = mc.mean;
  rep["err_quantum"] = mc.stderror;
  bool verdict_ok = true;
  try {
    const double classical = classical_mean_conductance(
        g, e_in, e_out, opt.get<std::size_t>("trail_ceiling", kDefaultTrailCeiling));
    rep["g_classical"] = classical;
    rep["classical_method"] = "enumeration";
    const double dev = std::abs(mc.mean - classical);
    verdict_ok = dev <= 3.0 * std::max(mc.stderror, 1e-12);
    rep["verdict"] = verdict_ok ? "consistent" : "inconsistent";
    rep["deviation_sigma"] = dev / std::max(mc.stderror, 1e-12);
  } catch (const ResourceError&) {
    rep["g_classical"] = nullptr;
    rep["classical_method"] = "enumeration ceiling exceeded";
  }
  emit(rep, opt, "conductance.json");
  return verdict_ok ? kExitOk : kExitVerification;
}

int cmd_trails(const Options& opt) {
  using namespace classc;
  const NetworkGraph g = load_graph(opt);
  const std::size_t ceiling = opt.get<std::size_t>("trail_ceiling", kDefaultTrailCeiling);
  std::vector<WeightedTrail> trails;
  ordered_json rep = report_header("trails");
  if (g.is_closed()) {
    const auto [root, unused] = edge_pair(opt, "root edge");
    trails = enumerate_closed_trails(g, root, ceiling);
    rep["root"] = root;
  } else {
    const auto [e_in, e_out] = edge_pair(opt, "e_in and e_out");
    trails = enumerate_open_trails(g, e_in, e_out, ceiling);
    rep["e_in"] = e_in;
    rep["e_out"] = e_out;
  }
  double total = 0.0;
  for (const auto& t : trails) total += t.weight;
  rep["count"] = trails.size();
  rep["weight_sum"] = total;
  emit(rep, opt, "trails.json");
  if (!opt.out_dir.empty())
    write_file(fs::path(opt.out_dir) / "trails.csv", trails_to_csv(trails));
  return kExitOk;
}

int cmd_walk(const Options& opt) {
  using namespace classc;
  const NetworkGraph g = load_graph(opt);
  const std::size_t walks = opt.get<std::size_t>("walks", 1000);
  int start = opt.has("edges") ? edge_pair(opt, "start edge").first : -1;
  const RngStream rng(opt.require_seed());
  std::map<std::size_t, std::size_t> histogram;
  RunningStat lengths;
  std::string csv = "walk_id,length,probability\n";
  char buf[96];
  for (std::size_t k = 0; k < walks; ++k) {
    RngStream kr = rng.split(k);
    const int s = start >= 0 ? start : static_cast<int>(kr.uniform_index(g.num_edges()));
    const WalkResult w = sample_history_walk(g, s, kr);
    ++histogram[w.trail.edges.size()];
    lengths.add(static_cast<double>(w.trail.edges.size()));
    std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g\n", k, w.trail.edges.size(), w.probability);
    csv += buf;
  }
  ordered_json rep = report_header("walk");
  rep["walks"] = walks;
  rep["mean_length"] = lengths.mean();
  rep["stderr_length"] = lengths.stderror();
  ordered_json hist = ordered_json::array();
  for (const auto& [len, cnt] : histogram)
    hist.push_back(ordered_json::array({len, cnt}));
  rep["length_histogram"] = hist;
  emit(rep, opt, "walk.json");
  if (!opt.out_dir.empty()) write_file(fs::path(opt.out_dir) / "walks.csv", csv);
  return kExitOk;
}

int cmd_analyze_s(const Options& opt) {
  using namespace classc;
  MatX s;
  if (opt.has("matrix")) {
    const auto& jm = opt.config.at("matrix");
    const std::size_t n = jm.size();
    s.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      if (!jm[r].is_array() || jm[r].size() != n)
        throw ParseError("matrix dim mismatch", -1, "matrix");
      for (std::size_t c = 0; c < n; ++c)
        s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = jm[r][c].get<double>();
    }
  } else if (opt.has("node")) {
    const NetworkGraph g = load_graph(opt);
    s = g.node(opt.get<int>("node", 0)).scattering;
  } else {
    throw ParseError("analyze-s needs \"matrix\" or graph + \"node\"");
  }
  if (!is_orthogonal(s))
    throw NumericalError("analyze-s: matrix is not orthogonal at tolerance");

  const StructuralReport sr = structural_checks(s);
  ordered_json rep = report_header("analyze-s");
  rep["det"] = s.determinant();
  rep["uniform"] = sr.uniformity == SignUniformity::Mixed
                       ? "mixed"
                       : (sr.uniformity == SignUniformity::NonNegative ? "nonnegative"
                                                                       : "nonpositive");
  rep["zero_count"] = sr.zero_count;
  const int n = static_cast<int>(s.rows());
  ordered_json tree = nullptr;
  bool reducible = false;
  if (n <= 6) {
    const CompleteReductionResult red = complete_reduction(s);
    reducible = red.success;
    if (red.success) {
      tree = ordered_json::array();
      for (const ReductionFactor& f : red.tree.factors) {
        ordered_json jf;
        jf["kind"] = f.kind;
        jf["channels"] = f.channels;
        ordered_json m = ordered_json::array();
        for (Eigen::Index r = 0; r < f.matrix.rows(); ++r) {
          ordered_json row = ordered_json::array();
          for (Eigen::Index c = 0; c < f.matrix.cols(); ++c) row.push_back(f.matrix(r, c));
          m.push_back(row);
        }
        jf["matrix"] = m;
        tree.push_back(jf);
      }
    }
  }
  rep["reducible"] = reducible;
  rep["tree"] = tree;
  ordered_json structural;
  auto item = [](const StructuralItem& it) {
    ordered_json j;
    j["applicable"] = it.applicable;
    j["passed"] = it.passed;
    if (!it.witness.empty()) j["witness"] = it.witness;
    return j;
  };
  structural["n3_zero_entry"] = item(sr.item_a);
  structural["zero_count_bound"] = item(sr.item_b);
  structural["submatrix_rule"] = item(sr.item_c);
  rep["structural"] = structural;
  if (n <= 5) {
    const OmegaExtremum ext = omega_minimum_exhaustive(s);
    rep["omega_min"] = ext.min_omega;
  }
  emit(rep, opt, "analyze_s.json");
  return kExitOk;
}

int cmd_lattice(const Options& opt) {
  using namespace classc;
  const std::string mode = opt.get<std::string>("mode", "hull");
  const RngStream rng(opt.require_seed());
  if (mode == "hull") {
    const int length = opt.get<int>("L", 64);
    const double p = opt.get<double>("p", 0.5);
    const std::size_t walks = opt.get<std::size_t>("walks", 10000);
    const LoopStats stats = hull_loop_statistics(length, p, walks, rng);
    ordered_json rep = report_header("lattice");
    rep["mode"] = "hull";
    rep["L"] = length;
    rep["p"] = p;
    rep["walks"] = walks;
    rep["mean_length"] = stats.mean_length;
    rep["stderr_length"] = stats.mean_length_stderr;
    if (p == 0.5 && opt.get<bool>("estimate_dimension", false)) {
      const FractalDimensionEstimate est = fractal_dimension_estimate(length, walks, rng);
      rep["hull_dimension"] = est.dimension;
      rep["hull_dimension_stderr"] = est.stderror;
      rep["loops_in_window"] = est.loops_in_window;
    }
    emit(rep, opt, "lattice_hull.json");
    if (!opt.out_dir.empty())
      write_file(fs::path(opt.out_dir) / "loop_stats.csv", loop_stats_to_csv(stats));
    return kExitOk;
  }
  if (mode == "scan") {
    const int length = opt.get<int>("L", 4);
    std::vector<double> p_list{0.1, 0.3, 0.5};
    if (opt.has("p_list")) p_list = opt.config.at("p_list").get<std::vector<double>>();
    const std::size_t samples = opt.samples_or(20000);
    const auto rows = conductance_vs_p_scan(length, p_list, samples, rng, opt.workers);
    ordered_json rep = report_header("lattice");
    rep["mode"] = "scan";
    rep["L"] = length;
    rep["samples"] = samples;
    ordered_json jrows = ordered_json::array();
    bool all_ok = true;
    for (const ScanRow& row : rows) {
      ordered_json jr;
      jr["p"] = row.p;
      jr["g_quantum"] = row.g_quantum;
      jr["err_q"] = row.err_quantum;
      jr["g_classical"] = row.g_classical;
      jr["err_c"] = row.err_classical;
      jr["method"] = row.classical_method;
      jr["consistent"] = row.consistent;
      jrows.push_back(jr);
      all_ok = all_ok && row.consistent;
    }
    rep["rows"] = jrows;
    emit(rep, opt, "lattice_scan.json");
    if (!opt.out_dir.empty())
      write_file(fs::path(opt.out_dir) / "scan.csv", scan_to_csv(rows));
    return all_ok ? kExitOk : kExitVerification;
  }
  throw ParseError("lattice mode must be \"hull\" or \"scan\"");
}

int cmd_verify(const Options& opt) {
  using namespace classc;
  CheckOptions copt;
  copt.seed = opt.require_seed();
  copt.workers = opt.workers;
  copt.only = opt.get<std::string>("only", "");
  const std::vector<CheckResult> results = run_acceptance_checks(copt);
  bool all_ok = true;
  ordered_json rep = report_header("verify");
  rep["seed"] = copt.seed;
  ordered_json jchecks = ordered_json::array();
  for (const CheckResult& r : results) {
    std::printf("%s  %s %-34s %s\n", r.passed ? "PASS" : "FAIL", r.id.c_str(), r.name.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
    std::fprintf(stderr, "# %s finished in %.1fs\n", r.id.c_str(), r.seconds);
    all_ok = all_ok && r.passed;
    ordered_json jr;
    jr["id"] = r.id;
    jr["name"] = r.name;
    jr["passed"] = r.passed;
    jr["detail"] = r.detail;
    jchecks.push_back(jr);
  }
  rep["checks"] = jchecks;
  rep["passed"] = all_ok;
  std::printf("%s: %zu checks\n", all_ok ? "VERIFY PASS" : "VERIFY FAIL", results.size());
  if (!opt.out_dir.empty())
    write_file(fs::path(opt.out_dir) / "verify.json", rep.dump(2) + "\n");
  return all_ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"class-C network models: quantum observables, classical trail sums, "
               "history-dependent walks, S-matrix analysis"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--config", opt.config_path, "JSON config file");
  std::uint64_t seed_value = 0;
  const auto seed_opt = app.add_option("--seed", seed_value, "master random seed");
  app.add_option("--out", opt.out_dir, "artifact output directory");
  app.add_option("--workers", opt.workers, "worker threads (results are worker-independent)");
  std::size_t samples_value = 0;
  const auto samples_opt = app.add_option("--samples", samples_value, "Monte Carlo sample count");
  app.add_option("--z", opt.z_text, "spectral point RE or RE,IM");

  const char* names[] = {"validate", "green",  "mean-green", "dos",     "conductance",
                         "trails",   "walk",   "analyze-s",  "lattice", "verify"};
  for (const char* n : names) app.add_subcommand(n, "");

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) opt.seed = seed_value;
  if (*samples_opt) opt.samples = samples_value;

  try {
    opt.config = nlohmann::json::object();
    if (!opt.config_path.empty()) {
      try {
        opt.config = nlohmann::json::parse(read_file(opt.config_path));
      } catch (const nlohmann::json::parse_error& e) {
        throw classc::ParseError(std::string("config: ") + e.what());
      }
    }
    apply_tolerance_overrides(opt.config);
    if (opt.out_dir.empty() && opt.config.contains("out"))
      opt.out_dir = opt.config.at("out").get<std::string>();
    if (opt.config.contains("workers") && opt.workers == 1)
      opt.workers = opt.config.at("workers").get<int>();

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (opt.config.contains("command") &&
        opt.config.at("command").get<std::string>() != cmd)
      throw classc::ParseError("config \"command\" does not match the subcommand");

    if (cmd == "validate") return cmd_validate(opt);
    if (cmd == "green") return cmd_green(opt);
    if (cmd == "mean-green") return cmd_mean_green(opt);
    if (cmd == "dos") return cmd_dos(opt);
    if (cmd == "conductance") return cmd_conductance(opt);
    if (cmd == "trails") return cmd_trails(opt);
    if (cmd == "walk") return cmd_walk(opt);
    if (cmd == "analyze-s") return cmd_analyze_s(opt);
    if (cmd == "lattice") return cmd_lattice(opt);
    if (cmd == "verify") return cmd_verify(opt);
    throw classc::ParseError("unknown command " + cmd);
  } catch (const classc::ParseError& e) {
    std::fprintf(stderr, "config error: %s%s\n", e.what(),
                 e.line >= 0 ? (" (line " + std::to_string(e.line) + ")").c_str() : "");
    return kExitConfig;
  } catch (const classc::ParamError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const classc::ResourceError& e) {
    std::fprintf(stderr, "resource ceiling: %s\n", e.what());
    return kExitResource;
  } catch (const classc::NonProbabilisticNodeError& e) {
    std::fprintf(stderr, "numerical: %s\n", e.what());
    return kExitNumerical;
  } catch (const classc::NumericalError& e) {
    std::fprintf(stderr, "numerical: %s\n", e.what());
    return kExitNumerical;
  } catch (const classc::StatsError& e) {
    std::fprintf(stderr, "numerical: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitOk;
}

#include "gopc/cli.hpp"

#include "gopc/dataio.hpp"
#include "gopc/decision.hpp"
#include "gopc/gopc.hpp"
#include "gopc/metrics.hpp"
#include "gopc/mst.hpp"
#include "gopc/oracle.hpp"
#include "gopc/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gopc::cli {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InputConfig {
  std::string path;
  std::string format = "points";
  std::string sep = "auto";
  std::string mode = "diss";
  bool has_labels = false;
  bool strict_symmetry = false;
};

struct ClusterConfig {
  InputConfig input;
  std::optional<Index> k;
  bool estimate = false;
  Index k_max = 20;
  std::string noise = "merge";
  bool no_filter = false;
  double tie_eps = 0;
  std::string out_labels;
  std::string out_trace;
  std::string out_summary;
  std::string out_tree;
  bool verbose = false;
};

struct EvalConfig {
  std::string pred;
  std::string truth;
  bool truth_points = false;
  std::string norm = "arithmetic";
};

struct GenConfig {
  std::string family;
  Index n = 300;
  std::uint64_t seed = 0;
  std::optional<Index> components;
  std::optional<double> spread;
  std::optional<double> separation;
  std::vector<double> radii;
  std::vector<double> sizes;
  std::optional<double> turns;
  std::optional<double> length;
  std::string out;
};

struct VerifyConfig {
  InputConfig input;
  Index k = 0;
};

void add_input_options(CLI::App& app, InputConfig& cfg) {
  app.add_option("--input", cfg.path, "Point file or dense matrix file")->required();
  app.add_option("--format", cfg.format, "points | matrix")
      ->check(CLI::IsMember({"points", "matrix"}));
  app.add_option("--sep", cfg.sep, "Point file separator: csv | tsv | auto (by extension)")
      ->check(CLI::IsMember({"csv", "tsv", "auto"}));
  app.add_option("--mode", cfg.mode, "Matrix entries: diss | sim")
      ->check(CLI::IsMember({"diss", "sim"}));
  app.add_flag("--has-labels", cfg.has_labels, "Last point column is a ground-truth label");
  app.add_flag("--strict-symmetry", cfg.strict_symmetry,
               "Reject matrices asymmetric beyond 1e-9 instead of averaging");
}

// Elapsed milliseconds per phase, in insertion order.
class PhaseTimer {
 public:
  template <typename Fn>
  auto time(const std::string& phase, Fn&& fn) {
    const auto start = Clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record(phase, start);
    } else {
      auto result = fn();
      record(phase, start);
      return result;
    }
  }

  json to_json(Clock::time_point begin) const {
    json j = json::object();
    for (const auto& [name, ms] : phases_) j[name] = ms;
    j["total"] = ms_since(begin);
    return j;
  }

  static double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }

 private:
  void record(const std::string& phase, Clock::time_point start) {
    phases_.emplace_back(phase, ms_since(start));
  }

  std::vector<std::pair<std::string, double>> phases_;
};

struct LoadedInput {
  DistanceMatrix<double> dm;
  std::optional<Partition> truth;
};

LoadedInput load_input(const InputConfig& cfg, PhaseTimer& timer) {
  LoadedInput in;
  if (cfg.format == "points") {
    if (cfg.mode == "sim") throw ConfigError("--mode sim requires --format matrix");
    TextFormat tf = TextFormat::csv;
    if (cfg.sep == "tsv" || (cfg.sep == "auto" && cfg.path.size() >= 4 &&
                             cfg.path.substr(cfg.path.size() - 4) == ".tsv")) {
      tf = TextFormat::tsv;
    }
    auto ps = timer.time("load", [&] { return load_points(cfg.path, tf, cfg.has_labels); });
    in.truth = ps.labels;
    in.dm = timer.time("distances", [&] { return euclidean_matrix(ps); });
  } else {
    if (cfg.has_labels) throw ConfigError("--has-labels applies to point files only");
    const Mode mode = cfg.mode == "sim" ? Mode::similarity : Mode::dissimilarity;
    in.dm = timer.time("load", [&] { return load_matrix(cfg.path, mode, cfg.strict_symmetry); });
  }
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void write_trace(const std::string& path, const std::vector<double>& values) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << (i + 2) << '\t' << format_real(values[i]) << '\n';
  }
  if (!out.flush()) throw IoError("write failed for '" + path + "'");
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

int cmd_cluster(const ClusterConfig& cfg, std::ostream& out) {
  if (cfg.k && cfg.estimate) throw ConfigError("give either --k or --estimate, not both");
  if (!cfg.k && !cfg.estimate) throw ConfigError("one of --k or --estimate is required");
  if (cfg.k && *cfg.k < 1) throw ConfigError("k must be >= 1");
  if (cfg.tie_eps < 0 || !std::isfinite(cfg.tie_eps)) {
    throw ConfigError("--tie-eps must be finite and non-negative");
  }

  const auto begin = Clock::now();
  PhaseTimer timer;
  auto input = load_input(cfg.input, timer);
  const Index n = input.dm.size();

  const auto tree = timer.time("tree", [&] { return build_tree(input.dm); });
  const auto raw_mm = timer.time("minimax", [&] { return minimax_all_pairs(tree, input.dm); });
  // The base matrix is no longer needed; release it before the epoch loop.
  input.dm.values.resize(0, 0);
  const auto mm = to_dissimilarity(raw_mm);
  const auto dt = timer.time("degrees", [&] { return compute_degrees(mm); });
  const auto nnt = timer.time("nn", [&] { return compute_nn(dt, mm); });
  const Filter filter = cfg.no_filter ? Filter::off : Filter::on;

  Index k = 0;
  std::optional<KEstimate> estimate;
  std::vector<double> trace_values;
  MedoidSelection<double> sel;
  if (cfg.estimate) {
    if (cfg.k_max < 2 || cfg.k_max > n) {
      throw ConfigError("--k-max must lie in [2, n]; n = " + std::to_string(n));
    }
    auto full = timer.time("epochs", [&] { return select_medoids(mm, dt, nnt, cfg.k_max, filter); });
    trace_values = full.gain_trace;
    estimate = estimate_k(DecisionTrace<double>{cfg.k_max, trace_values});
    k = estimate->k;
    // The greedy sequence is prefix-stable, so truncating gives the k run.
    sel.medoids.assign(full.medoids.begin(), full.medoids.begin() + k);
    sel.gain_trace.assign(full.gain_trace.begin(), full.gain_trace.begin() + (k - 1));
  } else {
    k = *cfg.k;
    if (k > n) {
      throw ConfigError("k = " + std::to_string(k) + " exceeds the number of objects (" +
                        std::to_string(n) + ")");
    }
    sel = timer.time("epochs", [&] { return select_medoids(mm, dt, nnt, k, filter); });
    trace_values = sel.gain_trace;
  }

  ClusterModel<double> model = timer.time("assign", [&] {
    auto a = assign(mm, sel.medoids, cfg.tie_eps);
    ClusterModel<double> m;
    m.medoids = sel.medoids;
    m.tau = std::move(a.tau);
    m.labels = std::move(a.labels);
    m.noise_flags = std::move(a.noise_flags);
    m.gain_trace = sel.gain_trace;
    m.objective = objective_of(mm, m);
    return m;
  });
  const NoiseStrategy strategy =
      cfg.noise == "separate" ? NoiseStrategy::separate : NoiseStrategy::mst_merge;
  const Index noise_count = model.noise_count();
  model = timer.time("noise", [&] { return resolve_noise(std::move(model), strategy, tree, mm); });

  if (!cfg.out_labels.empty()) write_partition(cfg.out_labels, model.labels, model.noise_flags);
  if (!cfg.out_trace.empty()) write_trace(cfg.out_trace, trace_values);
  if (!cfg.out_tree.empty()) {
    auto f = open_out(cfg.out_tree);
    write_tree(f, tree);
    if (!f.flush()) throw IoError("write failed for '" + cfg.out_tree + "'");
  }

  json summary;
  summary["n"] = n;
  summary["k"] = k;
  summary["medoids"] = model.medoids;
  summary["objective"] = model.objective;
  summary["noise_count"] = noise_count;
  summary["noise_strategy"] = cfg.noise;
  summary["filter"] = filter == Filter::on;
  if (estimate) {
    summary["estimated_k"] = estimate->k;
    summary["k_max"] = cfg.k_max;
    summary["estimate_degenerate"] = estimate->degenerate;
  }
  if (input.truth && n >= 2) {
    summary["metrics"] = {{"ri", rand_index(model.labels, *input.truth)},
                          {"ari", adjusted_rand_index(model.labels, *input.truth)},
                          {"nmi", nmi(model.labels, *input.truth)}};
  }
  summary["elapsed_ms"] = timer.to_json(begin);

  if (cfg.verbose) {
    out << "clustered " << n << " objects into " << k << " clusters; objective "
        << format_real(model.objective) << ", " << noise_count << " noise object(s)\n";
    if (estimate && estimate->degenerate) out << "warning: decision trace is all zeros\n";
  }
  if (!cfg.out_summary.empty()) {
    auto f = open_out(cfg.out_summary);
    f << summary.dump(2) << '\n';
    if (!f.flush()) throw IoError("write failed for '" + cfg.out_summary + "'");
  } else {
    out << summary.dump(2) << '\n';
  }
  return kOk;
}

int cmd_eval(const EvalConfig& cfg, std::ostream& out) {
  const Partition pred = load_labels(cfg.pred);
  Partition truth;
  if (cfg.truth_points) {
    auto ps = load_points(cfg.truth, TextFormat::csv, true);
    truth = std::move(*ps.labels);
  } else {
    truth = load_labels(cfg.truth);
  }
  if (pred.size() != truth.size()) {
    throw InvalidInput("label count mismatch: " + std::to_string(pred.size()) + " predicted vs " +
                       std::to_string(truth.size()) + " truth");
  }
  const auto norm =
      cfg.norm == "geometric" ? NmiNormalization::geometric : NmiNormalization::arithmetic;
  out << "{\"ri\": " << fixed6(rand_index(pred, truth))
      << ", \"ari\": " << fixed6(adjusted_rand_index(pred, truth))
      << ", \"nmi\": " << fixed6(nmi(pred, truth, norm)) << "}\n";
  return kOk;
}

int cmd_gen(const GenConfig& cfg) {
  const auto family = parse_family(cfg.family);
  if (!family) throw ConfigError("unknown family '" + cfg.family + "'");
  GenSpec spec;
  spec.family = *family;
  spec.n = cfg.n;
  spec.seed = cfg.seed;
  spec.spread = cfg.spread;
  if (cfg.components) spec.components = *cfg.components;
  if (cfg.separation) spec.separation = *cfg.separation;
  if (!cfg.radii.empty()) spec.radii = cfg.radii;
  if (!cfg.sizes.empty()) spec.sizes = cfg.sizes;
  if (cfg.turns) spec.turns = *cfg.turns;
  if (cfg.length) spec.length = *cfg.length;
  PointSet<double> ps;
  try {
    ps = generate(spec);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  write_points(cfg.out, ps);
  return kOk;
}

int cmd_verify(const VerifyConfig& cfg, std::ostream& out) {
  if (cfg.k < 1) throw ConfigError("k must be >= 1");
  PhaseTimer timer;
  const auto input = load_input(cfg.input, timer);
  const Index n = input.dm.size();
  if (cfg.k > n) throw ConfigError("k exceeds the number of objects");
  const auto subsets = binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(cfg.k));
  if (subsets > kOracleSubsetLimit) {
    throw ConfigError("C(" + std::to_string(n) + ", " + std::to_string(cfg.k) +
                      ") exceeds the exhaustive-search limit of " +
                      std::to_string(kOracleSubsetLimit) + " subsets");
  }
  const auto mm = to_dissimilarity(minimax_matrix(input.dm));
  const auto model = run(mm, cfg.k);
  const auto oracle = brute_force(mm, cfg.k);
  const double a = model.objective;
  const double b = oracle.best_objective;
  const bool match = std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1e-300});
  json j;
  j["n"] = n;
  j["k"] = cfg.k;
  j["gopc_objective"] = a;
  j["oracle_objective"] = b;
  j["subsets_evaluated"] = oracle.evaluated;
  j["match"] = match;
  out << j.dump(2) << '\n';
  return match ? kOk : kMismatch;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global optimal path-based clustering over minimax distances", "gopc"};
  app.require_subcommand(1);

  ClusterConfig cluster_cfg;
  auto* cluster = app.add_subcommand("cluster", "Cluster a point set or distance matrix");
  ClusterConfig estimate_cfg;
  auto* estimate = app.add_subcommand("estimate", "Alias of cluster --estimate");
  for (auto [sub, cfg] : {std::pair{cluster, &cluster_cfg}, std::pair{estimate, &estimate_cfg}}) {
    add_input_options(*sub, cfg->input);
    sub->add_option("--k-max", cfg->k_max, "Largest k explored by the decision graph");
    sub->add_option("--noise", cfg->noise, "separate | merge")
        ->check(CLI::IsMember({"separate", "merge"}));
    sub->add_flag("--no-filter", cfg->no_filter, "Evaluate every non-medoid each epoch");
    sub->add_option("--tie-eps", cfg->tie_eps, "Tolerance for tied nearest-medoid distances");
    sub->add_option("--out-labels", cfg->out_labels, "Partition output file");
    sub->add_option("--out-trace", cfg->out_trace, "Decision trace TSV (epoch, max gain)");
    sub->add_option("--out-summary", cfg->out_summary, "JSON summary file (default: stdout)");
    sub->add_option("--out-tree", cfg->out_tree, "Spanning tree dump (u v w per line)");
    sub->add_flag("--verbose", cfg->verbose, "Human-readable progress on stdout");
  }
  cluster->add_option("--k", cluster_cfg.k, "Number of clusters");
  cluster->add_flag("--estimate", cluster_cfg.estimate, "Estimate k from the decision graph");

  EvalConfig eval_cfg;
  auto* eval = app.add_subcommand("eval", "RI / ARI / NMI between two labelings");
  eval->add_option("--pred", eval_cfg.pred, "Predicted partition")->required();
  eval->add_option("--truth", eval_cfg.truth, "Reference partition")->required();
  eval->add_flag("--truth-points", eval_cfg.truth_points,
                 "Truth is a labeled point CSV (last column)");
  eval->add_option("--nmi", eval_cfg.norm, "arithmetic | geometric")
      ->check(CLI::IsMember({"arithmetic", "geometric"}));

  GenConfig gen_cfg;
  auto* gen = app.add_subcommand("gen", "Generate a labeled synthetic point set");
  gen->add_option("--family", gen_cfg.family,
                  "blobs | circles | spiral | unbalance | line_clusters")
      ->required();
  gen->add_option("--n", gen_cfg.n, "Number of points");
  gen->add_option("--seed", gen_cfg.seed, "Random seed");
  gen->add_option("--components", gen_cfg.components, "Clusters / arms / segments");
  gen->add_option("--spread", gen_cfg.spread, "Noise standard deviation");
  gen->add_option("--separation", gen_cfg.separation, "Center or segment spacing");
  gen->add_option("--radii", gen_cfg.radii, "Ring radii (circles)")->delimiter(',');
  gen->add_option("--sizes", gen_cfg.sizes, "Relative class sizes (unbalance)")->delimiter(',');
  gen->add_option("--turns", gen_cfg.turns, "Revolutions per arm (spiral)");
  gen->add_option("--length", gen_cfg.length, "Segment length (line_clusters)");
  gen->add_option("--out", gen_cfg.out, "Output CSV")->required();

  VerifyConfig verify_cfg;
  auto* verify = app.add_subcommand("verify", "Compare the GOPC objective with exhaustive search");
  add_input_options(*verify, verify_cfg.input);
  verify->add_option("--k", verify_cfg.k, "Number of clusters")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*cluster) return cmd_cluster(cluster_cfg, out);
    if (*estimate) {
      estimate_cfg.estimate = true;
      return cmd_cluster(estimate_cfg, out);
    }
    if (*eval) return cmd_eval(eval_cfg, out);
    if (*gen) return cmd_gen(gen_cfg);
    if (*verify) return cmd_verify(verify_cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kConfigError;
}

}  // namespace gopc::cli

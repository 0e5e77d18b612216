// Acceptance suite: one PASS/FAIL line per criterion.
#include "gopc/dataio.hpp"
#include "gopc/decision.hpp"
#include "gopc/gopc.hpp"
#include "gopc/metrics.hpp"
#include "gopc/mst.hpp"
#include "gopc/oracle.hpp"
#include "gopc/synth.hpp"
#include "support/reference.hpp"

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace gopc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

MinimaxMatrix<double> minimax_of(const Matrix<double>& points) {
  PointSet<double> ps;
  ps.points = points;
  return minimax_matrix(euclidean_matrix(ps));
}

struct Pipeline {
  SpanningTree<double> tree;
  MinimaxMatrix<double> mm;
};

Pipeline prepare(const PointSet<double>& ps) {
  Pipeline p;
  {
    const auto dm = euclidean_matrix(ps);
    p.tree = build_tree(dm);
    p.mm = minimax_all_pairs(p.tree, dm);
  }
  return p;
}

ClusterModel<double> cluster(const Pipeline& p, Index k,
                             NoiseStrategy strategy = NoiseStrategy::mst_merge) {
  return resolve_noise(run(p.mm, k), strategy, p.tree, p.mm);
}

// Medoid-degree minimality and the equal-distance property for outside objects.
bool structure_holds(const MinimaxMatrix<double>& mm, const ClusterModel<double>& model) {
  const auto dt = compute_degrees(mm);
  const Index n = mm.size();
  for (Index x = 0; x < n; ++x) {
    const int label = model.labels[static_cast<std::size_t>(x)];
    if (label < 0) continue;
    const Index m = model.medoids[static_cast<std::size_t>(label)];
    if (dt.degrees(m) > dt.degrees(x)) return false;
    for (Index y = 0; y < n; ++y) {
      const int ly = model.labels[static_cast<std::size_t>(y)];
      if (ly >= 0 && ly != label && mm(y, m) != mm(y, x)) return false;
    }
  }
  return true;
}

Outcome optimality() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<Index> pick_n(4, 12), pick_k(1, 4);
  int mismatches = 0, total = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const Index n = pick_n(rng);
    const Index k = std::min(pick_k(rng), n);
    const auto mm = minimax_of(reference::random_points(rng, n, trial >= 500));
    if (run(mm, k).objective != brute_force(mm, k).best_objective) ++mismatches;
    ++total;
  }
  const double secs = seconds_since(start);
  std::ostringstream s;
  s << total << " instances (100 with duplicates), " << mismatches << " mismatches, " << secs
    << " s";
  return {mismatches == 0 && secs < 60, s.str()};
}

Outcome ultrametric() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<Index> pick_n(2, 50);
  int violations = 0, structure = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = pick_n(rng);
    const auto mm = minimax_of(reference::random_points(rng, n, trial % 4 == 0));
    violations += static_cast<int>(verify_ultrametric(mm).size());
    const Index k = 1 + static_cast<Index>(trial) % std::min<Index>(n, 8);
    if (!structure_holds(mm, run(mm, k))) ++structure;
  }
  std::ostringstream s;
  s << "200 instances, " << violations << " ultrametric violations, " << structure
    << " structure failures";
  return {violations == 0 && structure == 0, s.str()};
}

Outcome filter_equivalence() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Index> pick_n(4, 60);
  int differ = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = pick_n(rng);
    const auto mm = minimax_of(reference::random_points(rng, n, trial % 4 == 0));
    const Index k = 1 + static_cast<Index>(trial) % n;
    if (run(mm, k, {Filter::on, 0}).medoids != run(mm, k, {Filter::off, 0}).medoids) ++differ;
  }

  GenSpec spec;
  spec.family = Family::blobs;
  spec.components = 15;
  spec.n = 2000;
  spec.seed = 3;
  const auto p = prepare(generate(spec));
  const auto dt = compute_degrees(p.mm);
  const auto nnt = compute_nn(dt, p.mm);
  const Index k = 15;
  auto t0 = Clock::now();
  const auto fast = select_medoids(p.mm, dt, nnt, k, Filter::on);
  const double on = seconds_since(t0);
  t0 = Clock::now();
  const auto slow = select_medoids(p.mm, dt, nnt, k, Filter::off);
  const double off = seconds_since(t0);

  std::ostringstream s;
  s << "200 instances, " << differ << " differing sequences; n=2000 epochs " << on
    << " s (on) vs " << off << " s (off)";
  return {differ == 0 && fast.medoids == slow.medoids && on <= off, s.str()};
}

Outcome shapes() {
  bool ok = true;
  std::ostringstream s;
  for (const auto& [family, n] : {std::pair{Family::circles, Index{300}},
                                  std::pair{Family::spiral, Index{312}}}) {
    GenSpec spec;
    spec.family = family;
    spec.n = n;
    spec.seed = 4;
    const auto ps = generate(spec);
    const auto start = Clock::now();
    const auto model = cluster(prepare(ps), 3);
    const double secs = seconds_since(start);
    const double ari = adjusted_rand_index(model.labels, *ps.labels);
    ok = ok && ari == 1.0 && secs < 5;
    s << family_name(family) << " ARI " << ari << " in " << secs << " s; ";
  }
  return {ok, s.str()};
}

Outcome decision_graph() {
  int hits = 0;
  std::ostringstream misses;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenSpec spec;
    spec.family = Family::blobs;
    spec.components = 15;
    spec.n = 1500;
    spec.separation = 10;
    spec.spread = 1;
    spec.seed = seed;
    const auto p = prepare(generate(spec));
    const auto e = estimate_k(trace(p.mm, 20));
    if (e.k == 15) {
      ++hits;
    } else {
      misses << " seed " << seed << "->" << e.k;
    }
  }
  std::ostringstream s;
  s << hits << "/20 seeds estimate k=15" << misses.str();
  return {hits >= 18, s.str()};
}

Outcome iris() {
  const auto ps = load_points(std::string(GOPC_TEST_DATA_DIR) + "/iris.csv", TextFormat::csv, true);
  const auto model = cluster(prepare(ps), 3);
  const double ri = rand_index(model.labels, *ps.labels);
  const double ari = adjusted_rand_index(model.labels, *ps.labels);
  const double nmi_a = nmi(model.labels, *ps.labels);
  const double nmi_g = nmi(model.labels, *ps.labels, NmiNormalization::geometric);
  const bool ok = std::abs(ri - 0.9495) <= 0.05 && std::abs(ari - 0.8858) <= 0.05 &&
                  std::abs(nmi_a - 0.8705) <= 0.05;
  char buf[160];
  std::snprintf(buf, sizeof buf, "RI %.4f ARI %.4f NMI %.4f (arithmetic) %.4f (geometric)", ri,
                ari, nmi_a, nmi_g);
  return {ok, buf};
}

// Runs fn in a child process; returns wall seconds and the child's peak RSS in MiB.
std::pair<double, double> measured(const std::function<void()>& fn) {
  const auto start = Clock::now();
  const pid_t pid = fork();
  if (pid == 0) {
    fn();
    _exit(0);
  }
  int status = 0;
  rusage usage{};
  wait4(pid, &status, 0, &usage);
  const double secs = seconds_since(start);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {-1, -1};
  return {secs, static_cast<double>(usage.ru_maxrss) / 1024.0};
}

void cluster_blobs(Index n, std::uint64_t seed) {
  GenSpec spec;
  spec.family = Family::blobs;
  spec.components = 15;
  spec.n = n;
  spec.seed = seed;
  cluster(prepare(generate(spec)), 15);
}

Outcome scaling() {
  const auto [secs, mib] = measured([] { cluster_blobs(5000, 7); });
  std::vector<double> xs, ys;
  for (const Index n : {1000, 2000, 4000}) {
    const double t = measured([n] { cluster_blobs(n, 7); }).first;
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(t));
  }
  // Least-squares slope of log time against log n.
  const double mx = (xs[0] + xs[1] + xs[2]) / 3, my = (ys[0] + ys[1] + ys[2]) / 3;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = num / den;
  std::ostringstream s;
  s << "n=5000 k=15 in " << secs << " s, peak " << mib << " MiB; exponent " << slope;
  return {secs > 0 && secs < 30 && mib < 1024 && slope <= 2.3, s.str()};
}

Outcome noise() {
  GenSpec spec;
  spec.family = Family::blobs;
  spec.components = 3;
  spec.n = 300;
  spec.seed = 8;
  auto ps = generate(spec);
  const Index base = ps.size();
  // Five outliers evenly spaced on a wide circle: each is closer to a blob than
  // to another outlier, and farther out than any gap between blobs.
  const Eigen::RowVector2d centre = ps.points.colwise().mean();
  ps.points.conservativeResize(base + 5, Eigen::NoChange);
  for (Index i = 0; i < 5; ++i) {
    const double a = 2 * M_PI * static_cast<double>(i) / 5;
    ps.points.row(base + i) = centre + 40 * Eigen::RowVector2d(std::cos(a), std::sin(a));
  }
  ps.labels.reset();
  const auto p = prepare(ps);
  const auto model = run(p.mm, 3);

  const auto sep = resolve_noise(model, NoiseStrategy::separate, p.tree, p.mm);
  bool separate_ok = true;
  for (Index x = 0; x < ps.size(); ++x) {
    const bool outlier = x >= base;
    if ((sep.labels[static_cast<std::size_t>(x)] == kNoiseLabel) != outlier) separate_ok = false;
  }

  const auto merged = resolve_noise(model, NoiseStrategy::mst_merge, p.tree, p.mm);
  int remaining = 0;
  bool attached = true;
  for (const int l : merged.labels) remaining += l == kNoiseLabel;
  for (Index o = base; o < ps.size(); ++o) {
    const auto& adj = p.tree.adjacency[static_cast<std::size_t>(o)];
    if (adj.size() != 1) {
      attached = false;
      continue;
    }
    const Index neighbour = adj.front().first;
    attached = attached && neighbour < base && merged.labels[static_cast<std::size_t>(o)] ==
                               merged.labels[static_cast<std::size_t>(neighbour)];
  }
  std::ostringstream s;
  s << "separate marks " << sep.noise_count() << " noise objects; merge leaves " << remaining
    << " unlabeled, outliers " << (attached ? "" : "not ") << "with their tree neighbours";
  return {separate_ok && remaining == 0 && attached, s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"global optimality", optimality},     {"ultrametric and structure", ultrametric},
      {"filter equivalence", filter_equivalence}, {"shape recovery", shapes},
      {"decision graph", decision_graph},   {"iris", iris},
      {"scaling", scaling},                 {"noise strategies", noise},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}

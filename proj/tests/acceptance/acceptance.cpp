// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//
//   stylo_acceptance            run every criterion
//   stylo_acceptance --only 4   run one criterion
//
// Criterion 8 needs the published corpora: set STYLO_GENESIS and STYLO_EXODUS
// to their JSONL files (labels P/nonP).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cli.hpp"
#include "oracles.hpp"
#include "stylo/clustering.hpp"
#include "stylo/hypothesis.hpp"
#include "stylo/importance.hpp"
#include "stylo/random.hpp"
#include "stylo/synth.hpp"

namespace fs = std::filesystem;
using namespace stylo;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fixed(double v, int digits = 3) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

Outcome verdict(bool ok, std::string detail) {
  return {ok ? Status::Pass : Status::Fail, std::move(detail)};
}

// Verses 300, blocks averaging 20 per class: the blocky setting shared by 4-7.
SynthSpec blocky(std::uint64_t seed, double divergence) {
  SynthSpec s;
  s.verses = 300;
  s.mean_block_a = 20;
  s.mean_block_b = 20;
  s.vocabulary = 200;
  s.divergence = divergence;
  s.seed = seed;
  return s;
}

// ---------------------------------------------------------------------------
// 1. balanced_accuracy equals the explicit confusion-table oracle, exactly.

Outcome ba_oracle() {
  Rng rng(101);
  int exact = 0;
  constexpr int kPairs = 1000;
  for (int t = 0; t < kPairs; ++t) {
    const std::size_t n = 2 + rng.below(49);
    std::vector<std::uint8_t> assign(n);
    std::vector<Label> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      assign[i] = static_cast<std::uint8_t>(rng.below(2));
      labels[i] = rng.bernoulli(0.5) ? Label::A : Label::B;
    }
    const auto a_count = std::count(labels.begin(), labels.end(), Label::A);
    if (a_count == 0 || a_count == static_cast<std::ptrdiff_t>(n)) {
      labels[rng.below(n)] = other(labels[0]);
    }
    exact += balanced_accuracy(assign, labels).ba == oracle::balanced_accuracy(assign, labels);
  }
  return verdict(exact == kPairs, std::to_string(exact) + "/" + std::to_string(kPairs) + " exact");
}

// ---------------------------------------------------------------------------
// 2. k-means reaches the exhaustive two-partition optimum on tiny instances.

Outcome kmeans_optimality() {
  Rng rng(202);
  constexpr int kInstances = 200;
  int matched = 0, beaten = 0;
  for (int t = 0; t < kInstances; ++t) {
    const std::size_t n = 2 + rng.below(7), d = 1 + rng.below(3);
    oracle::Rows rows(n, std::vector<double>(d));
    std::vector<double> flat;
    for (auto& r : rows) {
      for (auto& v : r) {
        v = rng.uniform();
        flat.push_back(v);
      }
    }
    KMeansConfig cfg;
    cfg.restarts = 50;
    cfg.seed = rng.next();
    const auto result = kmeans_two(SparseMatrix::from_dense(flat, n, d), cfg);
    const double best = oracle::exhaustive_min_wcss(rows);
    const double tol = 1e-9 * std::max(1.0, best);
    matched += std::abs(result.loss - best) <= tol;
    beaten += result.loss < best - tol;
  }
  const bool ok = matched * 100 >= 95 * kInstances && beaten == 0;
  return verdict(ok, std::to_string(matched) + "/" + std::to_string(kInstances) +
                         " at the optimum, " + std::to_string(beaten) + " below it");
}

// ---------------------------------------------------------------------------
// 3. Centroid-difference axis vs. first principal component of D (uncentered,
// D = every cluster-1 row minus every cluster-2 row).

Outcome pca_equivalence() {
  Rng rng(303);
  constexpr int kMatrices = 100;
  int parallel = 0;
  double worst = 1.0;
  for (int t = 0; t < kMatrices; ++t) {
    const std::size_t n = 2 + rng.below(49), d = 1 + rng.below(30);
    Eigen::MatrixXd x(n, d);
    std::vector<double> flat;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        x(r, c) = rng.uniform();
        flat.push_back(x(r, c));
      }
    }
    std::vector<std::uint8_t> assign(n);
    for (auto& a : assign) a = static_cast<std::uint8_t>(rng.below(2));
    assign[0] = 0;
    assign[1] = 1;
    const auto axis = separating_axis(SparseMatrix::from_dense(flat, n, d), assign);
    const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(axis.loadings.data(), d);
    const auto pc = oracle::first_principal_axis(oracle::difference_matrix(x, assign));
    const double cos = std::abs(v.dot(pc)) / (v.norm() * pc.norm());
    worst = std::min(worst, cos);
    parallel += cos > 1 - 1e-9;
  }
  return verdict(parallel == kMatrices, std::to_string(parallel) + "/" +
                                            std::to_string(kMatrices) +
                                            " parallel, min |cos| " + fixed(worst, 4));
}

// ---------------------------------------------------------------------------
// 4. The cyclic-shift null is at least as strict as label permutation.

GridSpec null_grid(std::uint64_t seed) {
  GridSpec spec;
  spec.windows = {2, 5};
  spec.ngrams = {1};
  spec.simulations = 5;
  spec.subsample_size = 200;
  spec.min_per_class = 40;
  spec.kmeans.restarts = 10;
  spec.seed = seed;
  return spec;
}

Outcome cyclic_vs_permutation() {
  constexpr int kSeeds = 10;
  int stricter = 0;
  std::string ps;
  for (int s = 0; s < kSeeds; ++s) {
    const auto corpus = synthesize(blocky(400 + s, 0.08));
    const auto spec = null_grid(40 + s);
    const auto schedule = shift_schedule(corpus.size(), spec.max_window());
    NullOptions options;
    options.simulations = 2;
    const auto r = run_test(corpus, spec, schedule, options, schedule.n_shifts());
    stricter += r.p_value >= *r.permutation_p_value;
    ps += " " + fixed(r.p_value, 2) + "/" + fixed(*r.permutation_p_value, 2);
  }
  return verdict(stricter >= 9, std::to_string(stricter) + "/" + std::to_string(kSeeds) +
                                    " seeds with cyclic p >= permutation p (cyclic/perm:" + ps +
                                    ")");
}

// ---------------------------------------------------------------------------
// 5. Without signal, small cyclic p-values are rare.

Outcome null_calibration() {
  constexpr int kRuns = 50;
  int small = 0;
  std::size_t shifts = 0;
  double sum = 0.0;
  for (int s = 0; s < kRuns; ++s) {
    const auto corpus = synthesize(blocky(500 + s, 0.0));
    const auto spec = null_grid(50 + s);
    const auto schedule = shift_schedule(corpus.size(), spec.max_window());
    shifts = schedule.n_shifts();
    NullOptions options;
    options.simulations = 2;
    const auto r = run_test(corpus, spec, schedule, options);
    small += r.p_value <= 0.05;
    sum += r.p_value;
  }
  const bool ok = small * 10 <= kRuns && shifts >= 19;
  return verdict(ok, std::to_string(small) + "/" + std::to_string(kRuns) + " runs with p <= 0.05 (" +
                         std::to_string(shifts) + " shifts, floor " +
                         fixed(1.0 / static_cast<double>(shifts + 1), 3) + ", mean p " +
                         fixed(sum / kRuns, 3) + ")");
}

// ---------------------------------------------------------------------------
// 6. The grid optimum lands on the n-gram size where the signal was planted.

int recovered_scale(std::size_t scale) {
  int hits = 0;
  for (int s = 0; s < 10; ++s) {
    auto synth = blocky(600 + s + 100 * scale, 0.4);
    synth.signal_scale = scale;
    const auto corpus = synthesize(synth);
    GridSpec spec;
    spec.windows = {0, 1, 2, 3};
    spec.ngrams = {1, 2, 3};
    spec.simulations = 10;
    spec.subsample_size = 200;
    spec.min_per_class = 40;
    spec.kmeans.restarts = 20;
    spec.seed = 60 + s;
    hits += cross_validated_grid(corpus, spec, corpus.labels()).optimum.ngram == scale;
  }
  return hits;
}

Outcome planted_scale() {
  const int bigram = recovered_scale(2), unigram = recovered_scale(1);
  return verdict(bigram >= 8 && unigram >= 8, "bigram signal -> n=2 in " + std::to_string(bigram) +
                                                  "/10, unigram signal -> n=1 in " +
                                                  std::to_string(unigram) + "/10");
}

// ---------------------------------------------------------------------------
// 7. Planted class-exclusive tokens surface as top class-A features.

Outcome feature_recovery() {
  constexpr int kRuns = 10;
  int good = 0;
  std::string found;
  for (int s = 0; s < kRuns; ++s) {
    // Short blocks keep the class sizes of a 250-verse subsample near even;
    // cluster-mean abundance is sensitive to a lopsided split.
    auto synth = blocky(700 + s, 0.5);
    synth.mean_block_a = 5;
    synth.mean_block_b = 5;
    synth.exclusive_tokens = 5;
    synth.exclusive_rate = 0.7;
    const auto corpus = synthesize(synth);
    ImportanceSpec spec;
    spec.window = 0;
    spec.ngram = 1;
    spec.simulations = 20;
    spec.subsample_size = 250;
    spec.min_per_class = 50;
    spec.kmeans.restarts = 10;
    spec.seed = 70 + s;
    const auto r = cross_validated_importance(corpus, corpus.labels(), spec);
    int hits = 0;
    for (std::size_t i = 0; i < std::min<std::size_t>(10, r.features.size()); ++i) {
      const auto& f = r.features[i];
      hits += f.name.rfind("planted", 0) == 0 && f.abundance > 0.9 && f.association == Label::A;
    }
    good += hits == 5;
    found += " " + std::to_string(hits);
  }
  return verdict(good >= 9, std::to_string(good) + "/" + std::to_string(kRuns) +
                                " runs with all 5 planted tokens (per run:" + found + ")");
}

// ---------------------------------------------------------------------------
// 8. Published numbers, when the corpora are available.

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

GridSpec published_grid(Representation rep) {
  GridSpec spec;
  spec.representation = rep;
  spec.simulations = 20;
  spec.subsample_size = 250;
  spec.min_per_class = 50;
  spec.kmeans.restarts = 50;
  spec.workers = 0;
  return spec;
}

Outcome published_numbers() {
  const auto genesis_path = env("STYLO_GENESIS"), exodus_path = env("STYLO_EXODUS");
  if (!genesis_path || !exodus_path) return {Status::Skip, "set STYLO_GENESIS and STYLO_EXODUS"};
  const auto genesis = load_corpus(*genesis_path), exodus = load_corpus(*exodus_path);
  std::vector<std::string> failures;
  std::string detail;

  const auto ranked = ranked_blocks(exodus.labels(), Label::A);
  const bool blocks_ok = ranked.size() >= 2 && ranked[0].length == 243 && ranked[1].length == 214;
  if (!blocks_ok) failures.push_back("Exodus P blocks");

  auto check_opt = [&](const char* tag, const Corpus& c, Representation rep, double mean, double sd,
                       std::size_t window, std::size_t ngram) {
    const auto g = cross_validated_grid(c, published_grid(rep), c.labels());
    const bool ok = std::abs(g.optimum.mean - mean) <= 2 * sd && g.optimum.window == window &&
                    g.optimum.ngram == ngram;
    detail += std::string(" ") + tag + " " + fixed(100 * g.optimum.mean, 2) + "% (rw " +
              std::to_string(g.optimum.window) + ", n " + std::to_string(g.optimum.ngram) + ");";
    if (!ok) failures.push_back(tag);
  };
  check_opt("Genesis lexemes", genesis, Representation::Lexeme, 0.7295, 0.0645, 4, 1);
  check_opt("Exodus lexemes", exodus, Representation::Lexeme, 0.8923, 0.0253, 8, 2);

  auto check_p = [&](const char* tag, const Corpus& c, Representation rep, double expected) {
    const auto spec = published_grid(rep);
    const auto schedule = shift_schedule(c.size(), spec.max_window());
    NullOptions options;
    options.simulations = 5;
    const auto r = run_test(c, spec, schedule, options);
    detail += std::string(" ") + tag + " p " + fixed(r.p_value, 3) + ";";
    if (std::abs(r.p_value - expected) > 0.05) failures.push_back(tag);
  };
  check_p("Genesis pos_low", genesis, Representation::PosLow, 0.08);
  check_p("Exodus pos_high", exodus, Representation::PosHigh, 0.06);

  std::string msg = "Exodus blocks " + std::string(blocks_ok ? "243/214" : "mismatch") + ";" + detail;
  return verdict(failures.empty(), msg);
}

// ---------------------------------------------------------------------------
// 9. Re-running a manifest reproduces every JSON/CSV byte, at any pool size.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "stylo_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const auto dir = [&](const std::string& leaf) { return (root / leaf).string(); };

  if (cli({"synth", "--seed", "9", "--verses", "160", "--block-a", "15", "--block-b", "15",
           "--divergence", "0.3", "--exclusive", "3", "--out", dir("synth")}) != 0) {
    return {Status::Fail, "synth failed"};
  }
  const auto corpus = dir("synth/corpus.jsonl");
  const std::vector<std::string> grid = {"--windows", "0..2", "--ngrams", "1..2", "--sims", "3",
                                         "--subsample", "100", "--min-per-class", "20",
                                         "--restarts", "5"};
  auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
      {"synth", {"synth", "--seed", "9", "--verses", "160", "--block-a", "15", "--block-b", "15",
                 "--divergence", "0.3", "--exclusive", "3"}},
      {"validate", {"validate", corpus}},
      {"optimize", with({"optimize", corpus}, grid)},
      {"test", with({"test", corpus, "--null-sims", "2", "--perms", "3"}, grid)},
      {"features", {"features", corpus, "--window", "1", "--ngram", "1", "--feature-sims", "6",
                    "--subsample", "100", "--min-per-class", "20", "--restarts", "5",
                    "--dump-matrix"}},
      {"block-removal", with({"block-removal", corpus, "--removals", "1,2,1+2", "--min-per-class", "5"},
                             {"--windows", "0..1", "--ngrams", "1", "--sims", "2", "--subsample",
                              "60", "--restarts", "3"})},
  };

  std::size_t compared = 0;
  for (const auto& [name, args] : runs) {
    const auto first = dir(name + "_1"), second = dir(name + "_2");
    if (cli(with(args, {"--out", first, "--workers", "1"})) != 0) return {Status::Fail, name + " failed"};
    if (cli({"--config", first + "/manifest.cfg", "--out", second, "--workers", "4"}) != 0) {
      return {Status::Fail, name + " re-run from manifest failed"};
    }
    for (const auto& entry : fs::directory_iterator(first)) {
      const auto leaf = entry.path().filename();
      if (slurp(entry.path()) != slurp(fs::path(second) / leaf)) {
        return {Status::Fail, name + "/" + leaf.string() + " differs"};
      }
      ++compared;
    }
  }
  fs::remove_all(root);
  return {Status::Pass, std::to_string(compared) + " files byte-identical across 6 commands, workers 1 vs 4"};
}

const char* label(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skip: return "SKIP";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  std::optional<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: stylo_acceptance [--only N]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "BA oracle equivalence", 1, ba_oracle},
      {2, "k-means small-instance optimality", 30, kmeans_optimality},
      {3, "PCA/centroid equivalence", 10, pca_equivalence},
      {4, "cyclic vs. permutation null", 600, cyclic_vs_permutation},
      {5, "null calibration", 1200, null_calibration},
      {6, "planted-scale recovery", 300, planted_scale},
      {7, "feature recovery", 300, feature_recovery},
      {8, "published-number reproduction", 0, published_numbers},
      {9, "determinism", 0, determinism},
  };

  bool failed = false, skipped = false;
  for (const auto& c : criteria) {
    if (only && *only != c.id) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Status::Fail, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fixed(secs, 2) + " s";
    if (c.limit_seconds > 0) {
      timing += " (limit " + fixed(c.limit_seconds, 0) + " s)";
      if (o.status == Status::Pass && secs > c.limit_seconds) o.status = Status::Fail;
    }
    failed |= o.status == Status::Fail;
    skipped |= o.status == Status::Skip;
    std::cout << label(o.status) << "  " << c.id << ". " << c.name << ": " << o.detail << "; "
              << timing << std::endl;
  }
  if (failed) return 1;
  // 77 lets ctest report a lone skipped criterion as skipped.
  return only && skipped ? 77 : 0;
}

#include "stylo/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "stylo/error.hpp"
#include "stylo/parallel.hpp"
#include "stylo/random.hpp"

namespace stylo {
namespace {

// Per-cluster mean of every feature, either of the embedded weight or of presence.
std::array<std::vector<double>, 2> cluster_means(const SparseMatrix& x,
                                                 std::span<const std::uint8_t> assignment,
                                                 AbundanceMode mode) {
  if (assignment.size() != x.rows) throw Error("assignment length does not match matrix rows");
  std::array<std::vector<double>, 2> m{std::vector<double>(x.cols), std::vector<double>(x.cols)};
  std::array<std::size_t, 2> size{0, 0};
  for (std::size_t r = 0; r < x.rows; ++r) {
    const auto k = assignment[r];
    ++size[k];
    const auto cs = x.row_cols(r);
    const auto vs = x.row_vals(r);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      m[k][cs[i]] += mode == AbundanceMode::MeanTfidf ? vs[i] : (vs[i] != 0.0 ? 1.0 : 0.0);
    }
  }
  if (size[0] == 0 || size[1] == 0) throw Error("separating axis needs two non-empty clusters");
  for (int k = 0; k < 2; ++k) {
    for (auto& e : m[k]) e /= static_cast<double>(size[k]);
  }
  return m;
}

double abundance_ratio(double assoc, double opp) {
  const double denom = assoc + opp;
  return denom == 0.0 ? 0.0 : (assoc - opp) / denom;
}

struct Simulation {
  std::vector<std::string> names;
  std::vector<double> axis;  // centroid 0 - centroid 1
  std::array<std::vector<double>, 2> means;
  std::uint8_t cluster_of_a = 0;
  double ba = 0.0;
};

}  // namespace

SeparatingAxis separating_axis(const SparseMatrix& x, std::span<const std::uint8_t> assignment,
                               const Vocabulary* vocab) {
  const auto m = cluster_means(x, assignment, AbundanceMode::MeanTfidf);
  SeparatingAxis axis;
  axis.loadings.resize(x.cols);
  for (std::size_t j = 0; j < x.cols; ++j) axis.loadings[j] = m[0][j] - m[1][j];
  axis.degenerate = std::all_of(axis.loadings.begin(), axis.loadings.end(),
                                [](double v) { return v == 0.0; });
  if (vocab) axis.names = vocab->names;
  return axis;
}

std::vector<double> explained_variance_shares(std::span<const double> loadings) {
  double total = 0.0;
  for (const double v : loadings) total += v * v;
  if (total == 0.0) throw Error("separating axis is zero");
  std::vector<double> out(loadings.size());
  for (std::size_t j = 0; j < loadings.size(); ++j) out[j] = loadings[j] * loadings[j] / total;
  return out;
}

std::vector<std::size_t> explained_variance_truncate(std::span<const double> loadings,
                                                     double level) {
  if (!(level > 0.0 && level <= 1.0)) throw ConfigError("truncation level must be in (0, 1]");
  const auto shares = explained_variance_shares(loadings);
  std::vector<std::size_t> order(shares.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return shares[a] > shares[b]; });
  double cum = 0.0;
  std::size_t keep = 0;
  while (keep < order.size() && cum < level - 1e-12) cum += shares[order[keep++]];
  order.resize(keep);
  return order;
}

std::string_view to_string(AbundanceMode m) {
  return m == AbundanceMode::MeanTfidf ? "mean_tfidf" : "doc_frequency";
}

AbundanceMode parse_abundance_mode(std::string_view text) {
  if (text == "mean_tfidf" || text == "tfidf") return AbundanceMode::MeanTfidf;
  if (text == "doc_frequency" || text == "df") return AbundanceMode::DocFrequency;
  throw ConfigError("abundance must be mean_tfidf or doc_frequency, got \"" + std::string(text) +
                    "\"");
}

double abundance(const SparseMatrix& x, std::span<const std::uint8_t> assignment,
                 std::size_t feature, std::uint8_t associated_cluster, AbundanceMode mode) {
  if (feature >= x.cols) throw Error("feature id out of range");
  if (associated_cluster > 1) throw Error("cluster ids must be 0 or 1");
  const auto m = cluster_means(x, assignment, mode);
  return abundance_ratio(m[associated_cluster][feature], m[1 - associated_cluster][feature]);
}

FeatureReport cross_validated_importance(const Corpus& corpus, std::span<const Label> labels,
                                         const ImportanceSpec& spec) {
  if (spec.simulations == 0) throw ConfigError("simulations must be >= 1");
  if (spec.ngram == 0) throw ConfigError("n-gram size must be >= 1");
  if (!(spec.level > 0.0 && spec.level <= 1.0)) {
    throw ConfigError("truncation level must be in (0, 1]");
  }
  if (labels.size() != corpus.size()) throw Error("label count does not match corpus size");
  require_both_classes(labels);

  std::vector<Simulation> sims(spec.simulations);
  parallel_for(spec.simulations, spec.workers, [&](std::size_t s) {
    const auto view = subsample(labels, spec.subsample_size, spec.min_per_class,
                                derive_seed(spec.seed, SeedStream::Importance, s));
    const EmbedConfig config{spec.representation, spec.ngram, spec.window, spec.tfidf};
    auto emb = embed(corpus, view, labels, config);
    auto km = spec.kmeans;
    km.seed = derive_seed(spec.seed, SeedStream::Importance, s, SeedStream::Restart);
    const auto clusters = kmeans_two(emb.matrix.x, km);
    const auto score = balanced_accuracy(clusters.assignment, emb.matrix.row_labels);

    auto& sim = sims[s];
    sim.names = std::move(emb.vocabulary.names);
    sim.axis = separating_axis(emb.matrix.x, clusters.assignment).loadings;
    sim.means = cluster_means(emb.matrix.x, clusters.assignment, spec.abundance);
    sim.cluster_of_a = score.cluster_of_a;
    sim.ba = score.ba;
  });

  // Union vocabulary in sorted name order.
  std::vector<std::string> names;
  for (const auto& sim : sims) names.insert(names.end(), sim.names.begin(), sim.names.end());
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::unordered_map<std::string, std::size_t> gid;
  gid.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) gid.emplace(names[i], i);

  std::vector<std::vector<std::size_t>> to_global(sims.size());
  for (std::size_t s = 0; s < sims.size(); ++s) {
    for (const auto& n : sims[s].names) to_global[s].push_back(gid.at(n));
  }

  // Cluster ids are arbitrary per run: align each axis with the first one on
  // the shared vocabulary, then orient so positive means the class-A cluster.
  std::vector<double> reference(names.size(), 0.0);
  std::vector<bool> in_reference(names.size(), false);
  for (std::size_t j = 0; j < sims[0].axis.size(); ++j) {
    reference[to_global[0][j]] = sims[0].axis[j];
    in_reference[to_global[0][j]] = true;
  }
  const double anchor = sims[0].cluster_of_a == 0 ? 1.0 : -1.0;

  FeatureReport report;
  report.level = spec.level;
  report.simulations = sims.size();
  report.flipped.resize(sims.size());
  std::vector<double> sign(sims.size(), 1.0);
  for (std::size_t s = 0; s < sims.size(); ++s) {
    double agreement = 0.0;
    for (std::size_t j = 0; j < sims[s].axis.size(); ++j) {
      const auto g = to_global[s][j];
      if (in_reference[g]) agreement += sims[s].axis[j] * reference[g];
    }
    report.flipped[s] = s > 0 && agreement < 0.0;
    sign[s] = (report.flipped[s] ? -1.0 : 1.0) * anchor;
  }

  const std::size_t d = names.size();
  std::vector<double> sum(d, 0.0), sumsq(d, 0.0);
  for (std::size_t s = 0; s < sims.size(); ++s) {
    for (std::size_t j = 0; j < sims[s].axis.size(); ++j) {
      const double v = sign[s] * sims[s].axis[j];
      sum[to_global[s][j]] += v;
      sumsq[to_global[s][j]] += v * v;
    }
  }
  const auto n_sims = static_cast<double>(sims.size());
  std::vector<FeatureStat> stats(d);
  double total = 0.0;
  for (std::size_t g = 0; g < d; ++g) {
    auto& f = stats[g];
    f.name = names[g];
    f.mean_loading = sum[g] / n_sims;
    f.std_loading = std::sqrt(std::max(0.0, sumsq[g] / n_sims - f.mean_loading * f.mean_loading));
    f.association = f.mean_loading < 0.0 ? Label::B : Label::A;
    total += f.mean_loading * f.mean_loading;
  }

  std::vector<double> abundance_sum(d, 0.0);
  for (std::size_t s = 0; s < sims.size(); ++s) {
    const std::uint8_t positive_cluster = sign[s] > 0.0 ? 0 : 1;
    for (std::size_t j = 0; j < sims[s].axis.size(); ++j) {
      const auto g = to_global[s][j];
      const std::uint8_t assoc =
          stats[g].association == Label::A ? positive_cluster : 1 - positive_cluster;
      abundance_sum[g] += abundance_ratio(sims[s].means[assoc][j], sims[s].means[1 - assoc][j]);
      ++stats[g].present_in;
    }
  }
  for (std::size_t g = 0; g < d; ++g) {
    auto& f = stats[g];
    if (f.present_in) f.abundance = abundance_sum[g] / static_cast<double>(f.present_in);
    f.ev_share = total > 0.0 ? f.mean_loading * f.mean_loading / total : 0.0;
  }

  std::stable_sort(stats.begin(), stats.end(), [](const FeatureStat& a, const FeatureStat& b) {
    return a.ev_share > b.ev_share;
  });
  if (total > 0.0) {
    double cum = 0.0;
    while (report.truncated < stats.size() && cum < spec.level - 1e-12) {
      cum += stats[report.truncated++].ev_share;
    }
  }

  for (const auto& sim : sims) report.mean_ba += sim.ba;
  report.mean_ba /= n_sims;
  report.features = std::move(stats);
  return report;
}

}  // namespace stylo

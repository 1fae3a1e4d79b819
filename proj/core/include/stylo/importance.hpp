#pragma once

// Feature importance along the principal separating axis of a two-cluster
// solution, with cross-simulation stability and cluster-wise abundance.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stylo/clustering.hpp"
#include "stylo/corpus.hpp"
#include "stylo/embedding.hpp"

namespace stylo {

struct SeparatingAxis {
  std::vector<double> loadings;  // centroid(cluster 0) - centroid(cluster 1)
  std::vector<std::string> names;
  bool degenerate = false;  // all loadings zero
};

// Exact centroid difference. Throws Error if a cluster is empty.
SeparatingAxis separating_axis(const SparseMatrix& x, std::span<const std::uint8_t> assignment,
                               const Vocabulary* vocab = nullptr);

// loading^2 / sum(loading^2). Throws Error for an all-zero axis.
std::vector<double> explained_variance_shares(std::span<const double> loadings);

// Feature ids by loading^2 descending (lower id first on ties), cut at the
// shortest prefix whose cumulative share reaches `level`.
std::vector<std::size_t> explained_variance_truncate(std::span<const double> loadings,
                                                     double level);

enum class AbundanceMode : std::uint8_t {
  MeanTfidf,     // mean embedded weight per cluster
  DocFrequency,  // fraction of cluster rows containing the feature
};

std::string_view to_string(AbundanceMode m);
AbundanceMode parse_abundance_mode(std::string_view text);

// (m_assoc - m_opp) / (m_assoc + m_opp), 0 when both are 0.
double abundance(const SparseMatrix& x, std::span<const std::uint8_t> assignment,
                 std::size_t feature, std::uint8_t associated_cluster,
                 AbundanceMode mode = AbundanceMode::MeanTfidf);

struct ImportanceSpec {
  Representation representation = Representation::Lexeme;
  std::size_t window = 0;
  std::size_t ngram = 1;
  std::size_t simulations = 100;
  std::size_t subsample_size = 250;
  std::size_t min_per_class = 50;
  KMeansConfig kmeans;  // kmeans.seed is ignored
  TfidfOptions tfidf;
  AbundanceMode abundance = AbundanceMode::MeanTfidf;
  double level = 0.75;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct FeatureStat {
  std::string name;
  double mean_loading = 0.0;  // positive: characteristic of the class-A cluster
  double std_loading = 0.0;
  Label association = Label::A;
  double ev_share = 0.0;
  double abundance = 0.0;  // averaged over simulations containing the feature
  std::size_t present_in = 0;
};

struct FeatureReport {
  std::vector<FeatureStat> features;  // by ev_share descending
  std::size_t truncated = 0;          // leading features carrying `level`
  double level = 0.75;
  std::size_t simulations = 0;
  double mean_ba = 0.0;
  std::vector<bool> flipped;  // per simulation: axis sign flipped to align

  std::span<const FeatureStat> top() const {
    return std::span<const FeatureStat>(features).first(truncated);
  }
};

FeatureReport cross_validated_importance(const Corpus& corpus, std::span<const Label> labels,
                                         const ImportanceSpec& spec);

}  // namespace stylo

#pragma once

// Cross-validated grid search of overlap over (window width x n-gram size).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stylo/clustering.hpp"
#include "stylo/corpus.hpp"
#include "stylo/embedding.hpp"

namespace stylo {

struct GridSpec {
  Representation representation = Representation::Lexeme;
  std::vector<std::size_t> windows{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::size_t> ngrams{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::size_t simulations = 20;
  std::size_t subsample_size = 250;
  std::size_t min_per_class = 50;
  KMeansConfig kmeans;  // kmeans.seed is ignored; cell seeds come from `seed`
  TfidfOptions tfidf;
  std::uint64_t seed = 0;
  unsigned workers = 1;  // 0 = all cores; never affects results

  std::size_t max_window() const;
};

// Throws ConfigError on empty ranges, n-gram size 0, or zero simulations.
void validate(const GridSpec& spec);

// Dense row-major matrix; rows follow GridSpec::windows, columns GridSpec::ngrams.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct CellIndex {
  std::size_t row = 0;  // window index
  std::size_t col = 0;  // n-gram index

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct GridCell {
  std::size_t window = 0;
  std::size_t ngram = 0;
  double mean = 0.0;
  double std = 0.0;
  CellIndex index;
};

struct OptimumChoice {
  CellIndex ratio;  // argmax (mean - 0.5) / (std + eps)
  CellIndex mean;   // argmax mean
};

inline constexpr double kOptimumEpsilon = 1e-6;
// BA of an uninformative clustering; the floor of the two-alignment maximum.
inline constexpr double kChanceOverlap = 0.5;

// The ratio rule scores overlap above chance per unit of cross-validation
// spread. Ties: larger mean, then smaller n-gram, then smaller window.
OptimumChoice select_optimum(const Matrix& mean_ba, const Matrix& std_ba);

struct GridResult {
  Matrix mean_ba;
  Matrix std_ba;  // population standard deviation across simulations
  std::vector<Matrix> per_simulation;
  std::vector<std::vector<std::size_t>> subsets;
  GridCell optimum;       // selected by the excess-over-chance / std rule
  GridCell mean_optimum;  // plain argmax of the mean
  bool rules_disagree = false;
  std::vector<GridCell> within_1sigma;  // mean >= optimum.mean - optimum.std
};

// Seed of simulation `sim`'s subsample; independent of labels and grid cells.
std::uint64_t subset_seed(std::uint64_t master, std::size_t sim);
// Seed for k-means at (window, n) within a simulation.
std::uint64_t cell_seed(std::uint64_t sim_seed, std::size_t window, std::size_t ngram);

// BA of one (window, n) configuration on the rows `view`.
double evaluate_cell(const Corpus& corpus, std::span<const std::size_t> view,
                     std::span<const Label> labels, Representation rep, std::size_t window,
                     std::size_t ngram, const TfidfOptions& tfidf, KMeansConfig kmeans);

// One BA matrix for a single subsample.
Matrix grid_once(const Corpus& corpus, std::span<const std::size_t> view, const GridSpec& spec,
                 std::span<const Label> labels, std::uint64_t sim_seed);

GridResult cross_validated_grid(const Corpus& corpus, const GridSpec& spec,
                                std::span<const Label> labels);

}  // namespace stylo

#include "stylo/gridsearch.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "stylo/error.hpp"
#include "stylo/parallel.hpp"
#include "stylo/random.hpp"

namespace stylo {

std::size_t GridSpec::max_window() const {
  return windows.empty() ? 0 : *std::max_element(windows.begin(), windows.end());
}

void validate(const GridSpec& spec) {
  if (spec.windows.empty()) throw ConfigError("window range is empty");
  if (spec.ngrams.empty()) throw ConfigError("n-gram range is empty");
  if (std::find(spec.ngrams.begin(), spec.ngrams.end(), 0u) != spec.ngrams.end()) {
    throw ConfigError("n-gram sizes must be >= 1");
  }
  if (spec.simulations == 0) throw ConfigError("simulations must be >= 1");
  if (spec.kmeans.restarts == 0) throw ConfigError("k-means restarts must be >= 1");
}

OptimumChoice select_optimum(const Matrix& mean_ba, const Matrix& std_ba) {
  if (mean_ba.rows != std_ba.rows || mean_ba.cols != std_ba.cols) {
    throw Error("mean and std matrices differ in shape");
  }
  if (mean_ba.data.empty()) throw Error("empty grid");

  // Rows and columns are ordered as in the GridSpec ranges; the tie rules refer to
  // indices, which match values for ascending ranges.
  auto pick = [&](auto key) {
    CellIndex best{0, 0};
    for (std::size_t r = 0; r < mean_ba.rows; ++r) {
      for (std::size_t c = 0; c < mean_ba.cols; ++c) {
        if (key(CellIndex{r, c}) > key(best)) best = {r, c};
      }
    }
    return best;
  };
  auto tiebreak = [&](CellIndex i) {
    return std::make_tuple(mean_ba(i.row, i.col), -static_cast<double>(i.col),
                           -static_cast<double>(i.row));
  };

  OptimumChoice out;
  out.ratio = pick([&](CellIndex i) {
    const double excess = mean_ba(i.row, i.col) - kChanceOverlap;
    return std::tuple_cat(std::make_tuple(excess / (std_ba(i.row, i.col) + kOptimumEpsilon)),
                          tiebreak(i));
  });
  out.mean = pick(tiebreak);
  return out;
}

std::uint64_t subset_seed(std::uint64_t master, std::size_t sim) {
  return derive_seed(master, SeedStream::Subset, sim);
}

std::uint64_t cell_seed(std::uint64_t sim_seed, std::size_t window, std::size_t ngram) {
  return derive_seed(sim_seed, SeedStream::Cell, window, ngram);
}

double evaluate_cell(const Corpus& corpus, std::span<const std::size_t> view,
                     std::span<const Label> labels, Representation rep, std::size_t window,
                     std::size_t ngram, const TfidfOptions& tfidf, KMeansConfig kmeans) {
  const EmbedConfig config{rep, ngram, window, tfidf};
  const auto emb = embed(corpus, view, labels, config);
  const auto clusters = kmeans_two(emb.matrix.x, kmeans);
  return balanced_accuracy(clusters.assignment, emb.matrix.row_labels).ba;
}

namespace {

double run_cell(const Corpus& corpus, std::span<const std::size_t> view,
                std::span<const Label> labels, const GridSpec& spec, std::uint64_t sim_seed,
                std::size_t row, std::size_t col) {
  const auto k = spec.windows[row];
  const auto n = spec.ngrams[col];
  auto km = spec.kmeans;
  km.seed = cell_seed(sim_seed, k, n);
  return evaluate_cell(corpus, view, labels, spec.representation, k, n, spec.tfidf, km);
}

GridCell make_cell(const GridSpec& spec, const Matrix& mean, const Matrix& sd, CellIndex i) {
  return GridCell{spec.windows[i.row], spec.ngrams[i.col], mean(i.row, i.col), sd(i.row, i.col),
                  i};
}

}  // namespace

Matrix grid_once(const Corpus& corpus, std::span<const std::size_t> view, const GridSpec& spec,
                 std::span<const Label> labels, std::uint64_t sim_seed) {
  validate(spec);
  if (labels.size() != corpus.size()) throw Error("label count does not match corpus size");
  Matrix out(spec.windows.size(), spec.ngrams.size());
  parallel_for(out.data.size(), spec.workers, [&](std::size_t i) {
    const auto row = i / out.cols, col = i % out.cols;
    out.data[i] = run_cell(corpus, view, labels, spec, sim_seed, row, col);
  });
  return out;
}

GridResult cross_validated_grid(const Corpus& corpus, const GridSpec& spec,
                                std::span<const Label> labels) {
  validate(spec);
  if (labels.size() != corpus.size()) throw Error("label count does not match corpus size");
  require_both_classes(labels);

  GridResult result;
  const std::size_t rows = spec.windows.size(), cols = spec.ngrams.size();
  const std::size_t cells = rows * cols;

  result.subsets.reserve(spec.simulations);
  for (std::size_t s = 0; s < spec.simulations; ++s) {
    result.subsets.push_back(subsample(labels, spec.subsample_size, spec.min_per_class,
                                       subset_seed(spec.seed, s)));
  }

  result.per_simulation.assign(spec.simulations, Matrix(rows, cols));
  parallel_for(spec.simulations * cells, spec.workers, [&](std::size_t job) {
    const std::size_t s = job / cells, cell = job % cells;
    const auto sim_seed = derive_seed(spec.seed, s);
    result.per_simulation[s].data[cell] =
        run_cell(corpus, result.subsets[s], labels, spec, sim_seed, cell / cols, cell % cols);
  });

  const auto sims = static_cast<double>(spec.simulations);
  result.mean_ba = Matrix(rows, cols);
  result.std_ba = Matrix(rows, cols);
  for (std::size_t c = 0; c < cells; ++c) {
    double sum = 0.0;
    for (const auto& m : result.per_simulation) sum += m.data[c];
    const double mean = sum / sims;
    double sq = 0.0;
    for (const auto& m : result.per_simulation) sq += (m.data[c] - mean) * (m.data[c] - mean);
    result.mean_ba.data[c] = mean;
    result.std_ba.data[c] = std::sqrt(sq / sims);
  }

  const auto choice = select_optimum(result.mean_ba, result.std_ba);
  result.optimum = make_cell(spec, result.mean_ba, result.std_ba, choice.ratio);
  result.mean_optimum = make_cell(spec, result.mean_ba, result.std_ba, choice.mean);
  result.rules_disagree = !(choice.ratio == choice.mean);

  const double floor = result.optimum.mean - result.optimum.std;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (result.mean_ba(r, c) >= floor) {
        result.within_1sigma.push_back(make_cell(spec, result.mean_ba, result.std_ba, {r, c}));
      }
    }
  }
  return result;
}

}  // namespace stylo

#pragma once

// Significance of the optimal overlap under cyclic label shifts, with a naive
// permutation null for comparison.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stylo/corpus.hpp"
#include "stylo/gridsearch.hpp"

namespace stylo {

struct ShiftSchedule {
  std::vector<std::size_t> offsets;
  std::size_t step = 0;
  bool dense = false;

  std::size_t n_shifts() const { return offsets.size(); }
};

// Offsets step, 2*step, ... below n with step = 2*max_window (1 when dense).
// Throws ConfigError unless n > 2*max_window.
ShiftSchedule shift_schedule(std::size_t n, std::size_t max_window, bool dense = false);

enum class NullKind { Cyclic, Permutation };

struct NullOptions {
  // Re-evaluate only the observed optimum cell instead of the full grid.
  bool fixed_cell = false;
  // Cross-validation simulations per null labeling; 0 keeps the observed count.
  std::size_t simulations = 0;
};

struct NullDistribution {
  NullKind kind = NullKind::Cyclic;
  std::vector<std::size_t> offsets;  // shift offsets, or permutation indices
  std::vector<double> values;        // optimal CV-mean BA per null labeling
  double observed_mean = 0.0;
  double observed_std = 0.0;
  double threshold = 0.0;  // observed_mean - observed_std
  GridCell observed_cell;
  bool degenerate = false;  // null carries no information about the labels
};

// The observed statistic: the CV grid optimum against the original labels.
GridResult observe(const Corpus& corpus, const GridSpec& spec);

NullDistribution null_distribution(const Corpus& corpus, const GridSpec& spec,
                                   const ShiftSchedule& schedule, const NullOptions& options = {});
// Reuses an already computed observation.
NullDistribution null_distribution(const Corpus& corpus, const GridSpec& spec,
                                   const ShiftSchedule& schedule, const GridResult& observed,
                                   const NullOptions& options = {});

NullDistribution permutation_null(const Corpus& corpus, const GridSpec& spec, std::size_t n_perms,
                                  const NullOptions& options = {});
NullDistribution permutation_null(const Corpus& corpus, const GridSpec& spec, std::size_t n_perms,
                                  const GridResult& observed, const NullOptions& options = {});

// Add-one estimate: (#{v >= threshold} + 1) / (n + 1).
double p_value(std::span<const double> null_values, double threshold);
inline double p_value(const NullDistribution& null) { return p_value(null.values, null.threshold); }

struct NullSummary {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
};

NullSummary summarize(std::span<const double> values);

struct TestReport {
  ShiftSchedule schedule;
  NullDistribution cyclic;
  double p_value = 1.0;
  NullSummary summary;
  std::optional<NullDistribution> permutation;
  std::optional<double> permutation_p_value;
};

// Observed statistic, cyclic null, and optionally a permutation null of
// n_perms labelings (0 = skip).
TestReport run_test(const Corpus& corpus, const GridSpec& spec, const ShiftSchedule& schedule,
                    const NullOptions& options = {}, std::size_t n_perms = 0);

}  // namespace stylo

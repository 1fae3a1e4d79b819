#include "stylo/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stylo/error.hpp"
#include "stylo/random.hpp"

namespace stylo {
namespace {

GridSpec null_spec(const GridSpec& spec, const GridResult& observed, const NullOptions& options) {
  GridSpec out = spec;
  if (options.fixed_cell) {
    out.windows = {observed.optimum.window};
    out.ngrams = {observed.optimum.ngram};
  }
  if (options.simulations > 0) out.simulations = options.simulations;
  return out;
}

NullDistribution start_null(NullKind kind, const Corpus& corpus, const GridResult& observed) {
  NullDistribution null;
  null.kind = kind;
  null.observed_mean = observed.optimum.mean;
  null.observed_std = observed.optimum.std;
  null.threshold = observed.optimum.mean - observed.optimum.std;
  null.observed_cell = observed.optimum;
  null.degenerate = std::min(corpus.count(Label::A), corpus.count(Label::B)) <= 1;
  return null;
}

void finish_null(NullDistribution& null) {
  if (null.values.size() > 1) {
    const auto [lo, hi] = std::minmax_element(null.values.begin(), null.values.end());
    if (*hi - *lo < 1e-9) null.degenerate = true;
  }
}

}  // namespace

ShiftSchedule shift_schedule(std::size_t n, std::size_t max_window, bool dense) {
  if (n <= 2 * max_window) {
    throw ConfigError("corpus too short for cyclic shifts: " + std::to_string(n) +
                      " verses, need more than " + std::to_string(2 * max_window));
  }
  ShiftSchedule s;
  s.dense = dense;
  s.step = dense ? 1 : std::max<std::size_t>(1, 2 * max_window);
  for (std::size_t off = s.step; off < n; off += s.step) s.offsets.push_back(off);
  return s;
}

GridResult observe(const Corpus& corpus, const GridSpec& spec) {
  return cross_validated_grid(corpus, spec, corpus.labels());
}

NullDistribution null_distribution(const Corpus& corpus, const GridSpec& spec,
                                   const ShiftSchedule& schedule, const NullOptions& options) {
  return null_distribution(corpus, spec, schedule, observe(corpus, spec), options);
}

NullDistribution null_distribution(const Corpus& corpus, const GridSpec& spec,
                                   const ShiftSchedule& schedule, const GridResult& observed,
                                   const NullOptions& options) {
  auto null = start_null(NullKind::Cyclic, corpus, observed);
  const auto shifted_spec = null_spec(spec, observed, options);
  const auto& original = corpus.labels();
  const auto count_a = corpus.count(Label::A);

  for (const auto off : schedule.offsets) {
    if (off == 0 || off >= corpus.size()) throw ConfigError("shift offset out of range");
    const auto shifted = cyclic_shift_labels(original, off);
    if (static_cast<std::size_t>(std::count(shifted.begin(), shifted.end(), Label::A)) != count_a) {
      throw std::logic_error("cyclic shift changed the class counts");
    }
    const auto grid = cross_validated_grid(corpus, shifted_spec, shifted);
    null.offsets.push_back(off);
    null.values.push_back(grid.optimum.mean);
  }
  finish_null(null);
  return null;
}

NullDistribution permutation_null(const Corpus& corpus, const GridSpec& spec, std::size_t n_perms,
                                  const NullOptions& options) {
  if (n_perms == 0) throw ConfigError("permutation null needs at least one permutation");
  return permutation_null(corpus, spec, n_perms, observe(corpus, spec), options);
}

NullDistribution permutation_null(const Corpus& corpus, const GridSpec& spec, std::size_t n_perms,
                                  const GridResult& observed, const NullOptions& options) {
  if (n_perms == 0) throw ConfigError("permutation null needs at least one permutation");
  auto null = start_null(NullKind::Permutation, corpus, observed);
  const auto perm_spec = null_spec(spec, observed, options);
  for (std::size_t p = 0; p < n_perms; ++p) {
    auto labels = corpus.labels();
    Rng rng(derive_seed(spec.seed, SeedStream::Permutation, p));
    rng.shuffle(labels);
    const auto grid = cross_validated_grid(corpus, perm_spec, labels);
    null.offsets.push_back(p);
    null.values.push_back(grid.optimum.mean);
  }
  finish_null(null);
  return null;
}

double p_value(std::span<const double> null_values, double threshold) {
  const auto hits = std::count_if(null_values.begin(), null_values.end(),
                                  [threshold](double v) { return v >= threshold; });
  return static_cast<double>(hits + 1) / static_cast<double>(null_values.size() + 1);
}

NullSummary summarize(std::span<const double> values) {
  NullSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (const double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (const double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(values.size()));
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

TestReport run_test(const Corpus& corpus, const GridSpec& spec, const ShiftSchedule& schedule,
                    const NullOptions& options, std::size_t n_perms) {
  const auto observed = observe(corpus, spec);
  TestReport report;
  report.schedule = schedule;
  report.cyclic = null_distribution(corpus, spec, schedule, observed, options);
  report.p_value = p_value(report.cyclic);
  report.summary = summarize(report.cyclic.values);
  if (n_perms > 0) {
    report.permutation = permutation_null(corpus, spec, n_perms, observed, options);
    report.permutation_p_value = p_value(*report.permutation);
  }
  return report;
}

}  // namespace stylo

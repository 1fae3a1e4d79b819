#pragma once

// Synthetic labeled corpora with a planted, tunable stylistic signal.

#include <cstddef>
#include <cstdint>

#include "stylo/corpus.hpp"

namespace stylo {

struct SynthSpec {
  std::size_t verses = 300;
  // Block lengths are 1 + geometric, with these means per class.
  double mean_block_a = 20.0;
  double mean_block_b = 20.0;
  std::size_t vocabulary = 200;
  std::size_t min_tokens = 8;
  std::size_t max_tokens = 16;
  double zipf_exponent = 1.0;
  // 0: both classes draw from one distribution; 1: fully class-specific.
  double divergence = 0.0;
  // 1: unigram frequencies differ between classes. s >= 2: tokens come in
  // s-token units read forward (A style) or reversed (B style), so both
  // classes share one unigram distribution and the signal starts at bigrams.
  std::size_t signal_scale = 1;
  // When > 0, only verses in the this-many largest A blocks carry the class-A
  // style; every other verse is written in the class-B style.
  std::size_t signal_blocks = 0;
  // Tokens planted0..planted{k-1}, each inserted into class-A styled verses
  // with probability exclusive_rate.
  std::size_t exclusive_tokens = 0;
  double exclusive_rate = 0.3;
  std::uint64_t seed = 0;
};

// Throws ConfigError on invalid parameters.
void validate(const SynthSpec& spec);

Corpus synthesize(const SynthSpec& spec);

}  // namespace stylo

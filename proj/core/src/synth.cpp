#include "stylo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stylo/error.hpp"
#include "stylo/random.hpp"

namespace stylo {
namespace {

// Inverse-CDF sampler over a fixed weight table.
class Discrete {
 public:
  explicit Discrete(const std::vector<double>& weights) : cdf_(weights.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) cdf_[i] = acc += weights[i];
    for (auto& c : cdf_) c /= acc;
  }
  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

std::vector<double> zipf(std::size_t n, double exponent) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / std::pow(static_cast<double>(i + 1), exponent);
  return w;
}

// Zipf weights restricted to ids with the given parity.
std::vector<double> zipf_parity(std::size_t n, double exponent, std::size_t parity) {
  auto w = zipf(n, exponent);
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 != parity) w[i] = 0.0;
  }
  return w;
}

std::size_t block_length(Rng& rng, double mean) {
  if (mean <= 1.0) return 1;
  const double p = 1.0 / mean;
  const double u = 1.0 - rng.uniform();  // (0, 1]
  return 1 + static_cast<std::size_t>(std::floor(std::log(u) / std::log(1.0 - p)));
}

std::string lexeme_name(std::size_t id) { return "w" + std::to_string(id); }

std::string tag(char prefix, std::size_t id, std::size_t tags) {
  return prefix + std::to_string(splitmix64(id) % tags);
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.verses < 2) throw ConfigError("synthetic corpus needs at least 2 verses");
  if (spec.vocabulary < 2) throw ConfigError("vocabulary must have at least 2 tokens");
  if (spec.min_tokens == 0 || spec.min_tokens > spec.max_tokens) {
    throw ConfigError("token counts need 1 <= min_tokens <= max_tokens");
  }
  if (!(spec.divergence >= 0.0 && spec.divergence <= 1.0)) {
    throw ConfigError("divergence must be in [0, 1]");
  }
  if (spec.signal_scale == 0) throw ConfigError("signal scale must be >= 1");
  if (spec.signal_scale > 1 && spec.vocabulary < 2 * spec.signal_scale) {
    throw ConfigError("vocabulary too small for the signal scale");
  }
  if (!(spec.exclusive_rate >= 0.0 && spec.exclusive_rate <= 1.0)) {
    throw ConfigError("exclusive rate must be in [0, 1]");
  }
  if (spec.mean_block_a < 1.0 || spec.mean_block_b < 1.0) {
    throw ConfigError("mean block lengths must be >= 1");
  }
}

Corpus synthesize(const SynthSpec& spec) {
  validate(spec);
  const std::size_t n = spec.verses;

  std::vector<Label> labels;
  {
    Rng rng(derive_seed(spec.seed, SeedStream::Synth, 0));
    Label current = rng.bernoulli(0.5) ? Label::A : Label::B;
    while (labels.size() < n) {
      const auto len =
          block_length(rng, current == Label::A ? spec.mean_block_a : spec.mean_block_b);
      labels.insert(labels.end(), std::min(len, n - labels.size()), current);
      current = other(current);
    }
    if (std::all_of(labels.begin(), labels.end(), [&](Label l) { return l == labels[0]; })) {
      labels.back() = other(labels[0]);
    }
  }

  std::vector<Label> style = labels;
  if (spec.signal_blocks > 0) {
    std::fill(style.begin(), style.end(), Label::B);
    const auto ranked = ranked_blocks(labels, Label::A);
    for (std::size_t b = 0; b < std::min(spec.signal_blocks, ranked.size()); ++b) {
      std::fill_n(style.begin() + static_cast<std::ptrdiff_t>(ranked[b].start), ranked[b].length,
                  Label::A);
    }
  }

  const std::size_t scale = spec.signal_scale;
  const std::size_t units = scale == 1 ? spec.vocabulary : spec.vocabulary / scale;
  const Discrete shared(zipf(units, spec.zipf_exponent));
  const Discrete style_a(zipf_parity(units, spec.zipf_exponent, 0));
  const Discrete style_b(zipf_parity(units, spec.zipf_exponent, 1));

  std::vector<VerseRecord> verses(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(spec.seed, SeedStream::Synth, 1, i));
    const bool a_style = style[i] == Label::A;
    const auto length = spec.min_tokens + rng.below(spec.max_tokens - spec.min_tokens + 1);

    std::vector<std::size_t> ids;
    if (scale == 1) {
      for (std::size_t t = 0; t < length; ++t) {
        if (rng.bernoulli(spec.divergence)) {
          ids.push_back(a_style ? style_a(rng) : style_b(rng));
        } else {
          ids.push_back(shared(rng));
        }
      }
    } else {
      const std::size_t count = (length + scale - 1) / scale;
      for (std::size_t u = 0; u < count; ++u) {
        const std::size_t group = shared(rng);
        const bool forward = rng.bernoulli(spec.divergence) ? a_style : rng.bernoulli(0.5);
        for (std::size_t j = 0; j < scale; ++j) {
          ids.push_back(group * scale + (forward ? j : scale - 1 - j));
        }
      }
    }

    auto& v = verses[i];
    v.index = i;
    v.ref = "synth." + std::to_string(i);
    v.label = labels[i];
    for (const auto id : ids) v.streams[0].push_back(lexeme_name(id));

    if (a_style) {
      for (std::size_t t = 0; t < spec.exclusive_tokens; ++t) {
        if (!rng.bernoulli(spec.exclusive_rate)) continue;
        const auto pos = rng.below(ids.size() + 1);
        ids.insert(ids.begin() + static_cast<std::ptrdiff_t>(pos), spec.vocabulary + t);
        v.streams[0].insert(v.streams[0].begin() + static_cast<std::ptrdiff_t>(pos),
                            "planted" + std::to_string(t));
      }
    }
    for (const auto id : ids) {
      v.streams[1].push_back(tag('L', id, 14));
      v.streams[2].push_back(tag('H', id, 60));
    }
  }
  return Corpus("synthetic", std::move(verses));
}

}  // namespace stylo

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "stylo/error.hpp"
#include "stylo/synth.hpp"

using namespace stylo;

namespace {

std::string serialized(const Corpus& c) {
  std::ostringstream out;
  write_corpus(out, c);
  return out.str();
}

// Largest absolute gap between the two classes' relative unigram frequencies.
double unigram_gap(const Corpus& c) {
  std::array<std::map<std::string, double>, 2> freq;
  std::array<double, 2> total{0, 0};
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int k = c[i].label == Label::A ? 0 : 1;
    for (const auto& t : c[i].stream(Representation::Lexeme)) {
      freq[k][t] += 1;
      total[k] += 1;
    }
  }
  double gap = 0.0;
  for (int k = 0; k < 2; ++k) {
    for (const auto& [t, n] : freq[k]) {
      const double other = freq[1 - k].count(t) ? freq[1 - k].at(t) / total[1 - k] : 0.0;
      gap = std::max(gap, std::abs(n / total[k] - other));
    }
  }
  return gap;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("fixed seed gives byte-identical output") {
  SynthSpec s;
  s.divergence = 0.4;
  s.exclusive_tokens = 2;
  s.seed = 17;
  CHECK(serialized(synthesize(s)) == serialized(synthesize(s)));
  auto t = s;
  t.seed = 18;
  CHECK(serialized(synthesize(s)) != serialized(synthesize(t)));
}

TEST_CASE("shape") {
  SynthSpec s;
  s.verses = 120;
  s.seed = 2;
  const auto c = synthesize(s);
  CHECK(c.size() == 120);
  CHECK(c.count(Label::A) > 0);
  CHECK(c.count(Label::B) > 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto n = c[i].stream(Representation::Lexeme).size();
    CHECK(n >= s.min_tokens);
    CHECK(n <= s.max_tokens);
    CHECK(c[i].stream(Representation::PosLow).size() == n);
    CHECK(c[i].stream(Representation::PosHigh).size() == n);
  }
  CHECK(blocks(c.labels(), Label::A).size() < 30);
}

TEST_CASE("zero divergence gives identical class distributions") {
  SynthSpec s;
  s.verses = 4000;
  s.vocabulary = 20;
  s.seed = 9;
  CHECK(unigram_gap(synthesize(s)) < 0.01);
  s.divergence = 0.8;
  CHECK(unigram_gap(synthesize(s)) > 0.05);
}

TEST_CASE("bigram-scale signal leaves unigram frequencies shared") {
  SynthSpec s;
  s.verses = 4000;
  s.vocabulary = 20;
  s.signal_scale = 2;
  s.divergence = 1.0;
  s.seed = 10;
  CHECK(unigram_gap(synthesize(s)) < 0.01);
}

TEST_CASE("planted tokens appear only in class A verses") {
  SynthSpec s;
  s.exclusive_tokens = 3;
  s.exclusive_rate = 0.5;
  s.seed = 4;
  const auto c = synthesize(s);
  std::size_t seen = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (const auto& t : c[i].stream(Representation::Lexeme)) {
      if (t.rfind("planted", 0) == 0) {
        CHECK(c[i].label == Label::A);
        ++seen;
      }
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("invalid specs") {
  SynthSpec s;
  s.divergence = 1.5;
  CHECK_THROWS_AS(synthesize(s), ConfigError);
  s = {};
  s.min_tokens = 10;
  s.max_tokens = 5;
  CHECK_THROWS_AS(synthesize(s), ConfigError);
  s = {};
  s.signal_scale = 0;
  CHECK_THROWS_AS(synthesize(s), ConfigError);
}

}  // TEST_SUITE

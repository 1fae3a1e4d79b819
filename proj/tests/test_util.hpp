#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stylo/corpus.hpp"

namespace stylo::testing {

// Labels from a string of 'A'/'B' (or 'P'/'N').
inline std::vector<Label> labels_of(std::string_view s) {
  std::vector<Label> out;
  for (const char c : s) out.push_back(c == 'A' || c == 'P' ? Label::A : Label::B);
  return out;
}

inline std::string label_string(const std::vector<Label>& labels) {
  std::string s;
  for (const auto l : labels) s += l == Label::A ? 'A' : 'B';
  return s;
}

// Verse i gets lexemes {v<i>a, v<i>b, ...} of length `tokens` and matching POS tags.
inline Corpus toy_corpus(std::string_view label_spec, std::size_t tokens = 2) {
  std::vector<VerseRecord> verses;
  for (std::size_t i = 0; i < label_spec.size(); ++i) {
    VerseRecord v;
    v.index = i;
    v.ref = "Toy 1:" + std::to_string(i + 1);
    v.label = labels_of(label_spec.substr(i, 1))[0];
    for (std::size_t t = 0; t < tokens; ++t) {
      v.streams[0].push_back("v" + std::to_string(i) + static_cast<char>('a' + t));
      v.streams[1].push_back("N");
      v.streams[2].push_back("Nms" + std::to_string(t));
    }
    verses.push_back(std::move(v));
  }
  return Corpus("toy", std::move(verses));
}

// Corpus from explicit lexeme lists; POS streams mirror the lexemes.
inline Corpus corpus_from(const std::vector<std::vector<std::string>>& docs,
                          const std::vector<Label>& labels) {
  std::vector<VerseRecord> verses;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    VerseRecord v;
    v.index = i;
    v.ref = std::to_string(i);
    v.label = labels[i];
    v.streams = {docs[i], docs[i], docs[i]};
    verses.push_back(std::move(v));
  }
  return Corpus("docs", std::move(verses));
}

}  // namespace stylo::testing

#include "stylo/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stylo/error.hpp"
#include "stylo/random.hpp"

namespace stylo {
namespace {

constexpr std::array<std::string_view, 3> kStreamKeys = {"lexeme", "pos_low", "pos_high"};

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

// Empty string when the token is acceptable.
std::string token_problem(std::string_view token) {
  if (token.empty()) return "empty token";
  if (has_whitespace(token)) return "token contains whitespace: \"" + std::string(token) + "\"";
  return {};
}

std::string verse_name(std::size_t index) { return "verse " + std::to_string(index); }

}  // namespace

std::optional<Label> LabelNames::parse(std::string_view text) const {
  if (text == a) return Label::A;
  if (text == b) return Label::B;
  return std::nullopt;
}

LabelNames parse_label_names(std::string_view spec) {
  const auto comma = spec.find(',');
  if (comma == std::string_view::npos || spec.find(',', comma + 1) != std::string_view::npos) {
    throw ConfigError("label mapping must be \"A,B\", got \"" + std::string(spec) + "\"");
  }
  LabelNames names{std::string(spec.substr(0, comma)), std::string(spec.substr(comma + 1))};
  if (names.a.empty() || names.b.empty() || names.a == names.b) {
    throw ConfigError("label mapping needs two distinct non-empty names");
  }
  return names;
}

std::string_view to_string(Representation r) { return kStreamKeys[static_cast<std::size_t>(r)]; }

Representation parse_representation(std::string_view text) {
  if (text == "lexeme" || text == "lexemes") return Representation::Lexeme;
  if (text == "pos_low" || text == "low") return Representation::PosLow;
  if (text == "pos_high" || text == "high") return Representation::PosHigh;
  throw ConfigError("unknown representation \"" + std::string(text) +
                    "\" (expected lexeme, pos_low or pos_high)");
}

Corpus::Corpus(std::string name, std::vector<VerseRecord> verses)
    : name_(std::move(name)), verses_(std::move(verses)) {
  if (verses_.size() < 2) throw CorpusError("corpus needs at least 2 verses");

  labels_.reserve(verses_.size());
  for (std::size_t i = 0; i < verses_.size(); ++i) {
    const auto& v = verses_[i];
    if (v.index != i) {
      throw CorpusError("non-contiguous index: expected " + std::to_string(i) + ", found " +
                        std::to_string(v.index));
    }
    for (const auto& stream : v.streams) {
      for (const auto& tok : stream) {
        if (auto problem = token_problem(tok); !problem.empty()) {
          throw CorpusError(verse_name(i) + ": " + problem);
        }
      }
    }
    labels_.push_back(v.label);
  }

  for (std::size_t s = 0; s < 3; ++s) {
    const bool present = std::any_of(verses_.begin(), verses_.end(),
                                     [s](const VerseRecord& v) { return !v.streams[s].empty(); });
    if (!present) continue;
    for (const auto& v : verses_) {
      const bool verse_has_text = std::any_of(v.streams.begin(), v.streams.end(),
                                              [](const auto& st) { return !st.empty(); });
      if (verse_has_text && v.streams[s].empty()) {
        throw CorpusError(verse_name(v.index) + ": stream " + std::string(kStreamKeys[s]) +
                          " is empty");
      }
    }
  }

  for (std::size_t s = 0; s < 3; ++s) {
    auto& in = interned_[s];
    for (const auto& v : verses_) {
      in.lexicon.insert(in.lexicon.end(), v.streams[s].begin(), v.streams[s].end());
    }
    std::sort(in.lexicon.begin(), in.lexicon.end());
    in.lexicon.erase(std::unique(in.lexicon.begin(), in.lexicon.end()), in.lexicon.end());

    in.offsets.reserve(verses_.size() + 1);
    in.offsets.push_back(0);
    for (const auto& v : verses_) {
      for (const auto& tok : v.streams[s]) {
        const auto it = std::lower_bound(in.lexicon.begin(), in.lexicon.end(), tok);
        in.flat.push_back(static_cast<TokenId>(it - in.lexicon.begin()));
      }
      in.offsets.push_back(in.flat.size());
    }
  }
}

std::size_t Corpus::count(Label l) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
}

std::span<const TokenId> Corpus::tokens(std::size_t verse, Representation r) const {
  const auto& in = interned_[static_cast<std::size_t>(r)];
  return std::span<const TokenId>(in.flat).subspan(in.offsets[verse],
                                                    in.offsets[verse + 1] - in.offsets[verse]);
}

Corpus parse_corpus(std::istream& in, std::string name, const LabelNames& names) {
  using nlohmann::json;

  std::vector<VerseRecord> verses;
  std::map<std::size_t, std::size_t> line_of;  // index -> line
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;

    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw CorpusError(std::string("malformed JSON: ") + e.what(), line);
    }
    if (!obj.is_object()) throw CorpusError("expected a JSON object", line);

    VerseRecord v;
    try {
      const auto& idx = obj.at("index");
      if (!idx.is_number_integer() || idx.get<long long>() < 0) {
        throw CorpusError("index must be a non-negative integer", line);
      }
      v.index = idx.get<std::size_t>();
      v.ref = obj.at("ref").get<std::string>();
      const auto label_text = obj.at("label").get<std::string>();
      const auto label = names.parse(label_text);
      if (!label) throw CorpusError("unknown label \"" + label_text + "\"", line);
      v.label = *label;

      const auto& streams = obj.at("streams");
      if (!streams.is_object()) throw CorpusError("streams must be an object", line);
      for (std::size_t s = 0; s < 3; ++s) {
        const auto key = std::string(kStreamKeys[s]);
        if (!streams.contains(key)) throw CorpusError("missing stream key \"" + key + "\"", line);
        v.streams[s] = streams.at(key).get<std::vector<std::string>>();
        for (const auto& tok : v.streams[s]) {
          if (auto problem = token_problem(tok); !problem.empty()) {
            throw CorpusError(key + ": " + problem, line);
          }
        }
      }
    } catch (const json::exception& e) {
      throw CorpusError(std::string("bad field: ") + e.what(), line);
    }

    if (auto [it, fresh] = line_of.emplace(v.index, line); !fresh) {
      throw CorpusError("duplicate index " + std::to_string(v.index) + " (first seen on line " +
                            std::to_string(it->second) + ")",
                        line);
    }
    verses.push_back(std::move(v));
  }

  std::sort(verses.begin(), verses.end(),
            [](const VerseRecord& x, const VerseRecord& y) { return x.index < y.index; });
  for (std::size_t i = 0; i < verses.size(); ++i) {
    if (verses[i].index != i) {
      throw CorpusError("non-contiguous index: missing " + std::to_string(i),
                        line_of[verses[i].index]);
    }
  }
  return Corpus(std::move(name), std::move(verses));
}

Corpus load_corpus(const std::filesystem::path& path, const LabelNames& names) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open " + path.string());
  return parse_corpus(in, path.stem().string(), names);
}

void write_corpus(std::ostream& out, const Corpus& corpus, const LabelNames& names) {
  for (const auto& v : corpus.verses()) {
    nlohmann::ordered_json obj;
    obj["index"] = v.index;
    obj["ref"] = v.ref;
    obj["label"] = names.name(v.label);
    auto& streams = obj["streams"];
    for (std::size_t s = 0; s < 3; ++s) streams[std::string(kStreamKeys[s])] = v.streams[s];
    out << obj.dump() << '\n';
  }
}

void require_both_classes(std::span<const Label> labels) {
  const auto a = std::count(labels.begin(), labels.end(), Label::A);
  if (a == 0 || a == static_cast<std::ptrdiff_t>(labels.size())) {
    throw Error("labels contain a single class; both classes are required");
  }
}

std::vector<Block> blocks(std::span<const Label> labels, Label label) {
  std::vector<Block> out;
  std::size_t i = 0;
  while (i < labels.size()) {
    std::size_t j = i;
    while (j < labels.size() && labels[j] == labels[i]) ++j;
    if (labels[i] == label) out.push_back({label, i, j - i});
    i = j;
  }
  return out;
}

std::vector<Block> ranked_blocks(std::span<const Label> labels, Label label) {
  auto out = blocks(labels, label);
  std::stable_sort(out.begin(), out.end(),
                   [](const Block& x, const Block& y) { return x.length > y.length; });
  return out;
}

Corpus remove_blocks(const Corpus& corpus, std::span<const std::size_t> ranks, Label label) {
  const auto ranked = ranked_blocks(corpus.labels(), label);
  std::vector<bool> drop(corpus.size(), false);
  for (const auto rank : ranks) {
    if (rank == 0 || rank > ranked.size()) {
      throw Error("block rank " + std::to_string(rank) + " out of range: corpus has " +
                  std::to_string(ranked.size()) + " blocks of that label");
    }
    const auto& b = ranked[rank - 1];
    std::fill_n(drop.begin() + static_cast<std::ptrdiff_t>(b.start), b.length, true);
  }

  std::vector<VerseRecord> kept;
  for (const auto& v : corpus.verses()) {
    if (drop[v.index]) continue;
    kept.push_back(v);
    kept.back().index = kept.size() - 1;
  }
  return Corpus(corpus.name(), std::move(kept));
}

Corpus remove_block(const Corpus& corpus, std::size_t rank, Label label) {
  const std::array<std::size_t, 1> ranks = {rank};
  return remove_blocks(corpus, ranks, label);
}

std::vector<std::size_t> subsample(std::span<const Label> labels, std::size_t size,
                                   std::size_t min_per_class, std::uint64_t seed) {
  const std::size_t n = labels.size();
  const auto n_a = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::A));
  const std::size_t n_b = n - n_a;
  if (size > n || size == 0) {
    throw ConfigError("subsample size " + std::to_string(size) + " not in [1, " +
                      std::to_string(n) + "]");
  }
  if (n_a < min_per_class || n_b < min_per_class || 2 * min_per_class > size) {
    throw ConfigError("infeasible subsample: need " + std::to_string(min_per_class) +
                      " per class in " + std::to_string(size) + " verses, corpus has " +
                      std::to_string(n_a) + "/" + std::to_string(n_b));
  }

  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  if (size == n) return pool;

  Rng rng(seed);
  for (std::size_t attempt = 0; attempt < kSubsampleAttempts; ++attempt) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::size_t a = 0;
    for (std::size_t i = 0; i < size; ++i) {
      std::swap(pool[i], pool[i + rng.below(n - i)]);
      a += labels[pool[i]] == Label::A;
    }
    if (a >= min_per_class && size - a >= min_per_class) {
      std::vector<std::size_t> chosen(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
      std::sort(chosen.begin(), chosen.end());
      return chosen;
    }
  }
  throw ConfigError("subsample class constraint not met after " +
                    std::to_string(kSubsampleAttempts) + " attempts");
}

SuperVerse window(const Corpus& corpus, std::size_t center, std::size_t k, Representation r) {
  SuperVerse sv;
  sv.center = center;
  sv.first = center >= k ? center - k : 0;
  sv.last = std::min(corpus.size() - 1, center + k);
  sv.label = corpus[center].label;
  sv.representation = r;
  for (std::size_t i = sv.first; i <= sv.last; ++i) {
    const auto toks = corpus.tokens(i, r);
    sv.tokens.insert(sv.tokens.end(), toks.begin(), toks.end());
  }
  return sv;
}

std::vector<std::string> token_strings(const Corpus& corpus, const SuperVerse& sv) {
  const auto& lex = corpus.lexicon(sv.representation);
  std::vector<std::string> out;
  out.reserve(sv.tokens.size());
  for (const auto id : sv.tokens) out.push_back(lex[id]);
  return out;
}

std::vector<Label> cyclic_shift_labels(std::span<const Label> labels, std::size_t shift) {
  const std::size_t n = labels.size();
  std::vector<Label> out(n);
  if (n == 0) return out;
  shift %= n;
  for (std::size_t i = 0; i < n; ++i) out[(i + shift) % n] = labels[i];
  return out;
}

double labeling_agreement(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) {
    throw Error("labeling length mismatch: " + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()));
  }
  if (a.empty()) throw Error("empty labelings");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace stylo

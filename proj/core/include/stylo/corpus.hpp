#pragma once

// Ordered verse corpora with a binary labeling.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stylo {

enum class Label : std::uint8_t { A = 0, B = 1 };

constexpr Label other(Label l) { return l == Label::A ? Label::B : Label::A; }

// Maps the two class tags to their on-disk strings ("P"/"nonP" by default).
struct LabelNames {
  std::string a = "P";
  std::string b = "nonP";

  std::optional<Label> parse(std::string_view text) const;
  const std::string& name(Label l) const { return l == Label::A ? a : b; }
};

// Parses "A,B" into label names. Throws ConfigError.
LabelNames parse_label_names(std::string_view spec);

enum class Representation : std::uint8_t { Lexeme = 0, PosLow = 1, PosHigh = 2 };

inline constexpr std::array<Representation, 3> kRepresentations = {
    Representation::Lexeme, Representation::PosLow, Representation::PosHigh};

std::string_view to_string(Representation r);
// Accepts lexeme(s), pos_low, pos_high. Throws ConfigError.
Representation parse_representation(std::string_view text);

using TokenId = std::uint32_t;

struct VerseRecord {
  std::size_t index = 0;
  std::string ref;
  Label label = Label::A;
  std::array<std::vector<std::string>, 3> streams;

  const std::vector<std::string>& stream(Representation r) const {
    return streams[static_cast<std::size_t>(r)];
  }
};

// Immutable, validated corpus. Tokens of each representation are also kept
// interned: token ids follow the lexicographic order of the token strings, so
// ordering id tuples orders the underlying n-grams.
class Corpus {
 public:
  // Verses must already be sorted with index == position. Throws CorpusError.
  Corpus(std::string name, std::vector<VerseRecord> verses);

  const std::string& name() const { return name_; }
  std::size_t size() const { return verses_.size(); }
  std::span<const VerseRecord> verses() const { return verses_; }
  const VerseRecord& operator[](std::size_t i) const { return verses_[i]; }

  const std::vector<Label>& labels() const { return labels_; }
  std::size_t count(Label l) const;

  // A stream is available when at least one verse carries tokens in it.
  bool has_stream(Representation r) const { return !lexicon(r).empty(); }

  std::span<const TokenId> tokens(std::size_t verse, Representation r) const;
  const std::vector<std::string>& lexicon(Representation r) const {
    return interned_[static_cast<std::size_t>(r)].lexicon;
  }

 private:
  struct Interned {
    std::vector<std::string> lexicon;
    std::vector<TokenId> flat;
    std::vector<std::size_t> offsets;  // size() + 1 entries
  };

  std::string name_;
  std::vector<VerseRecord> verses_;
  std::vector<Label> labels_;
  std::array<Interned, 3> interned_;
};

// JSON-lines ingestion: one object per line with index, ref, label, streams.
Corpus load_corpus(const std::filesystem::path& path, const LabelNames& names = {});
Corpus parse_corpus(std::istream& in, std::string name, const LabelNames& names = {});
void write_corpus(std::ostream& out, const Corpus& corpus, const LabelNames& names = {});

// Throws Error unless both classes occur in `labels`.
void require_both_classes(std::span<const Label> labels);

struct Block {
  Label label = Label::A;
  std::size_t start = 0;
  std::size_t length = 0;

  friend bool operator==(const Block&, const Block&) = default;
};

// Maximal runs of `label`, in index order.
std::vector<Block> blocks(std::span<const Label> labels, Label label);
inline std::vector<Block> blocks(const Corpus& corpus, Label label) {
  return blocks(corpus.labels(), label);
}

// Blocks ordered by length descending, earlier start first on ties.
std::vector<Block> ranked_blocks(std::span<const Label> labels, Label label);

// Drops the rank-th largest block (1-based) and re-indexes the rest.
Corpus remove_block(const Corpus& corpus, std::size_t rank, Label label);
// Drops several blocks at once; ranks refer to the ranking of `corpus`.
Corpus remove_blocks(const Corpus& corpus, std::span<const std::size_t> ranks, Label label);

// Rejection-samples `size` distinct verse indices with at least
// `min_per_class` of each label. Returns sorted original indices.
inline constexpr std::size_t kSubsampleAttempts = 10000;
std::vector<std::size_t> subsample(std::span<const Label> labels, std::size_t size,
                                   std::size_t min_per_class, std::uint64_t seed);

// A verse concatenated with its neighbors [center-k, center+k], clipped to the corpus.
struct SuperVerse {
  std::size_t center = 0;
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
  Label label = Label::A;
  Representation representation = Representation::Lexeme;
  std::vector<TokenId> tokens;

  std::size_t width() const { return last - first + 1; }
};

SuperVerse window(const Corpus& corpus, std::size_t center, std::size_t k, Representation r);
std::vector<std::string> token_strings(const Corpus& corpus, const SuperVerse& sv);

// Label of verse i becomes the original label of verse (i - shift) mod N.
std::vector<Label> cyclic_shift_labels(std::span<const Label> labels, std::size_t shift);

// Fraction of positions where the two labelings agree.
double labeling_agreement(std::span<const Label> a, std::span<const Label> b);

}  // namespace stylo

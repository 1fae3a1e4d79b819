#pragma once

// tf-idf n-gram embedding of super-verses.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "stylo/corpus.hpp"

namespace stylo {

enum class IdfMode : std::uint8_t { Smooth, Plain };
enum class RowNorm : std::uint8_t { L2, None };

std::string_view to_string(IdfMode m);
std::string_view to_string(RowNorm n);
IdfMode parse_idf_mode(std::string_view text);
RowNorm parse_row_norm(std::string_view text);

struct TfidfOptions {
  IdfMode idf = IdfMode::Smooth;  // ln((1+n)/(1+df)) + 1; Plain: ln(n/df) + 1
  RowNorm norm = RowNorm::L2;
};

struct EmbedConfig {
  Representation representation = Representation::Lexeme;
  std::size_t ngram_n = 1;
  std::size_t window_k = 0;
  TfidfOptions tfidf;
};

// An n-gram as a tuple of token ids; comparing keys compares token tuples.
using NGramKey = std::u32string;

std::vector<NGramKey> extract_ngrams(std::span<const TokenId> tokens, std::size_t n);
// String form, tokens joined by a single space.
std::vector<std::string> extract_ngrams(std::span<const std::string> tokens, std::size_t n);

// Compressed sparse rows.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
  std::span<const std::uint32_t> row_cols(std::size_t r) const {
    return std::span<const std::uint32_t>(col).subspan(row_ptr[r], row_ptr[r + 1] - row_ptr[r]);
  }
  std::span<const double> row_vals(std::size_t r) const {
    return std::span<const double>(val).subspan(row_ptr[r], row_ptr[r + 1] - row_ptr[r]);
  }
  double at(std::size_t r, std::size_t c) const;
  // Row-major dense copy.
  std::vector<double> to_dense() const;

  static SparseMatrix from_dense(std::span<const double> dense, std::size_t rows,
                                 std::size_t cols);
};

struct Vocabulary {
  std::vector<std::string> names;  // column id -> n-gram, ordered by token tuple
  std::vector<std::size_t> df;     // column id -> document frequency

  std::size_t size() const { return names.size(); }
  std::optional<std::size_t> find(const std::string& ngram) const;
  // Rebuilds the lookup table after `names` changes.
  void reindex();

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

struct FeatureMatrix {
  SparseMatrix x;
  std::vector<Label> row_labels;
  std::vector<std::size_t> row_centers;
};

struct Embedding {
  FeatureMatrix matrix;
  Vocabulary vocabulary;
};

// Vocabulary and idf come from `supers` alone. Throws Error if no document
// yields an n-gram.
Embedding tfidf_matrix(const Corpus& corpus, std::span<const SuperVerse> supers,
                       const EmbedConfig& config);

// Same computation over plain token lists (no corpus); rows get label A.
Embedding tfidf_matrix(const std::vector<std::vector<std::string>>& documents, std::size_t n,
                       const TfidfOptions& options = {});

// Super-verses at config.window_k around each center, embedded. `labels`
// (one per corpus verse) supplies the row labels.
Embedding embed(const Corpus& corpus, std::span<const std::size_t> centers,
                std::span<const Label> labels, const EmbedConfig& config);

// Coordinate text dump: "row col value" per non-zero.
void write_coo(std::ostream& out, const SparseMatrix& m);
// TSV with header: ngram, col, df.
void write_vocabulary_tsv(std::ostream& out, const Vocabulary& vocab);

}  // namespace stylo

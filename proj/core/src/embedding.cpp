#include "stylo/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>

#include "stylo/error.hpp"

namespace stylo {
namespace {

NGramKey key_at(std::span<const TokenId> tokens, std::size_t pos, std::size_t n) {
  NGramKey key(n, U'\0');
  for (std::size_t j = 0; j < n; ++j) key[j] = static_cast<char32_t>(tokens[pos + j]);
  return key;
}

std::string join_key(const NGramKey& key, const std::vector<std::string>& lexicon) {
  std::string out;
  for (std::size_t j = 0; j < key.size(); ++j) {
    if (j) out += ' ';
    out += lexicon[key[j]];
  }
  return out;
}

// Shared core: docs(i) yields the token ids of document i.
template <typename DocFn>
Embedding build_tfidf(std::size_t n_docs, DocFn&& docs, const std::vector<std::string>& lexicon,
                      std::size_t n, const TfidfOptions& options) {
  if (n == 0) throw ConfigError("n-gram size must be >= 1");
  if (n_docs == 0) throw Error("tf-idf needs at least one document");

  // Provisional ids in first-seen order; remapped to tuple order below.
  std::unordered_map<NGramKey, std::uint32_t> provisional;
  std::vector<NGramKey> keys;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> counts(n_docs);
  std::vector<std::uint32_t> grams;

  for (std::size_t d = 0; d < n_docs; ++d) {
    const std::span<const TokenId> toks = docs(d);
    grams.clear();
    if (toks.size() >= n) {
      NGramKey key(n, U'\0');
      for (std::size_t p = 0; p + n <= toks.size(); ++p) {
        for (std::size_t j = 0; j < n; ++j) key[j] = static_cast<char32_t>(toks[p + j]);
        auto [it, fresh] = provisional.try_emplace(key, static_cast<std::uint32_t>(keys.size()));
        if (fresh) keys.push_back(key);
        grams.push_back(it->second);
      }
    }
    std::sort(grams.begin(), grams.end());
    auto& row = counts[d];
    for (std::size_t i = 0; i < grams.size();) {
      std::size_t j = i;
      while (j < grams.size() && grams[j] == grams[i]) ++j;
      row.emplace_back(grams[i], static_cast<std::uint32_t>(j - i));
      i = j;
    }
  }
  if (keys.empty()) throw Error("all documents are empty at n-gram size " + std::to_string(n));

  std::vector<std::uint32_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return keys[a] < keys[b]; });
  std::vector<std::uint32_t> column(keys.size());
  for (std::uint32_t c = 0; c < order.size(); ++c) column[order[c]] = c;

  Embedding out;
  auto& vocab = out.vocabulary;
  vocab.names.resize(keys.size());
  vocab.df.assign(keys.size(), 0);
  for (std::uint32_t c = 0; c < order.size(); ++c) vocab.names[c] = join_key(keys[order[c]], lexicon);
  for (const auto& row : counts) {
    for (const auto& [id, cnt] : row) ++vocab.df[column[id]];
  }
  vocab.reindex();

  const auto docs_f = static_cast<double>(n_docs);
  std::vector<double> idf(keys.size());
  for (std::size_t c = 0; c < idf.size(); ++c) {
    const auto df = static_cast<double>(vocab.df[c]);
    idf[c] = options.idf == IdfMode::Smooth ? std::log((1.0 + docs_f) / (1.0 + df)) + 1.0
                                            : std::log(docs_f / df) + 1.0;
  }

  auto& m = out.matrix.x;
  m.rows = n_docs;
  m.cols = keys.size();
  m.row_ptr.reserve(n_docs + 1);
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (const auto& row : counts) {
    entries.clear();
    for (const auto& [id, cnt] : row) {
      const auto c = column[id];
      entries.emplace_back(c, static_cast<double>(cnt) * idf[c]);
    }
    std::sort(entries.begin(), entries.end());
    double scale = 1.0;
    if (options.norm == RowNorm::L2) {
      double sq = 0.0;
      for (const auto& e : entries) sq += e.second * e.second;
      if (sq > 0.0) scale = 1.0 / std::sqrt(sq);
    }
    for (const auto& [c, v] : entries) {
      m.col.push_back(c);
      m.val.push_back(v * scale);
    }
    m.row_ptr.push_back(m.val.size());
  }
  return out;
}

}  // namespace

std::string_view to_string(IdfMode m) { return m == IdfMode::Smooth ? "smooth" : "plain"; }
std::string_view to_string(RowNorm n) { return n == RowNorm::L2 ? "l2" : "none"; }

IdfMode parse_idf_mode(std::string_view text) {
  if (text == "smooth") return IdfMode::Smooth;
  if (text == "plain") return IdfMode::Plain;
  throw ConfigError("idf must be smooth or plain, got \"" + std::string(text) + "\"");
}

RowNorm parse_row_norm(std::string_view text) {
  if (text == "l2") return RowNorm::L2;
  if (text == "none") return RowNorm::None;
  throw ConfigError("norm must be l2 or none, got \"" + std::string(text) + "\"");
}

std::vector<NGramKey> extract_ngrams(std::span<const TokenId> tokens, std::size_t n) {
  if (n == 0) throw ConfigError("n-gram size must be >= 1");
  std::vector<NGramKey> out;
  for (std::size_t p = 0; p + n <= tokens.size(); ++p) out.push_back(key_at(tokens, p, n));
  return out;
}

std::vector<std::string> extract_ngrams(std::span<const std::string> tokens, std::size_t n) {
  if (n == 0) throw ConfigError("n-gram size must be >= 1");
  std::vector<std::string> out;
  for (std::size_t p = 0; p + n <= tokens.size(); ++p) {
    std::string gram = tokens[p];
    for (std::size_t j = 1; j < n; ++j) (gram += ' ') += tokens[p + j];
    out.push_back(std::move(gram));
  }
  return out;
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto cols_r = row_cols(r);
  const auto it = std::lower_bound(cols_r.begin(), cols_r.end(), static_cast<std::uint32_t>(c));
  if (it == cols_r.end() || *it != c) return 0.0;
  return row_vals(r)[static_cast<std::size_t>(it - cols_r.begin())];
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> out(rows * cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto cs = row_cols(r);
    const auto vs = row_vals(r);
    for (std::size_t i = 0; i < cs.size(); ++i) out[r * cols + cs[i]] = vs[i];
  }
  return out;
}

SparseMatrix SparseMatrix::from_dense(std::span<const double> dense, std::size_t rows,
                                      std::size_t cols) {
  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = dense[r * cols + c];
      if (v != 0.0) {
        m.col.push_back(static_cast<std::uint32_t>(c));
        m.val.push_back(v);
      }
    }
    m.row_ptr.push_back(m.val.size());
  }
  return m;
}

std::optional<std::size_t> Vocabulary::find(const std::string& ngram) const {
  const auto it = index_.find(ngram);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::reindex() {
  index_.clear();
  index_.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) index_.emplace(names[i], i);
}

Embedding tfidf_matrix(const Corpus& corpus, std::span<const SuperVerse> supers,
                       const EmbedConfig& config) {
  if (!supers.empty() && !corpus.has_stream(config.representation)) {
    throw ConfigError("corpus has no " + std::string(to_string(config.representation)) +
                      " stream");
  }
  auto out = build_tfidf(
      supers.size(), [&](std::size_t d) { return std::span<const TokenId>(supers[d].tokens); },
      corpus.lexicon(config.representation), config.ngram_n, config.tfidf);
  for (const auto& sv : supers) {
    out.matrix.row_labels.push_back(sv.label);
    out.matrix.row_centers.push_back(sv.center);
  }
  return out;
}

Embedding tfidf_matrix(const std::vector<std::vector<std::string>>& documents, std::size_t n,
                       const TfidfOptions& options) {
  std::vector<std::string> lexicon;
  for (const auto& doc : documents) lexicon.insert(lexicon.end(), doc.begin(), doc.end());
  std::sort(lexicon.begin(), lexicon.end());
  lexicon.erase(std::unique(lexicon.begin(), lexicon.end()), lexicon.end());

  std::vector<std::vector<TokenId>> ids(documents.size());
  for (std::size_t d = 0; d < documents.size(); ++d) {
    for (const auto& tok : documents[d]) {
      ids[d].push_back(static_cast<TokenId>(
          std::lower_bound(lexicon.begin(), lexicon.end(), tok) - lexicon.begin()));
    }
  }
  auto out = build_tfidf(
      ids.size(), [&](std::size_t d) { return std::span<const TokenId>(ids[d]); }, lexicon, n,
      options);
  out.matrix.row_labels.assign(documents.size(), Label::A);
  out.matrix.row_centers.resize(documents.size());
  std::iota(out.matrix.row_centers.begin(), out.matrix.row_centers.end(), std::size_t{0});
  return out;
}

Embedding embed(const Corpus& corpus, std::span<const std::size_t> centers,
                std::span<const Label> labels, const EmbedConfig& config) {
  if (labels.size() != corpus.size()) throw Error("label count does not match corpus size");
  std::vector<SuperVerse> supers;
  supers.reserve(centers.size());
  for (const auto c : centers) {
    supers.push_back(window(corpus, c, config.window_k, config.representation));
    supers.back().label = labels[c];
  }
  return tfidf_matrix(corpus, supers, config);
}

void write_coo(std::ostream& out, const SparseMatrix& m) {
  char buf[64];
  for (std::size_t r = 0; r < m.rows; ++r) {
    const auto cs = m.row_cols(r);
    const auto vs = m.row_vals(r);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto res = std::to_chars(buf, buf + sizeof buf, vs[i]);
      out << r << ' ' << cs[i] << ' ' << std::string_view(buf, res.ptr - buf) << '\n';
    }
  }
}

void write_vocabulary_tsv(std::ostream& out, const Vocabulary& vocab) {
  out << "ngram\tcol\tdf\n";
  for (std::size_t c = 0; c < vocab.size(); ++c) {
    out << vocab.names[c] << '\t' << c << '\t' << vocab.df[c] << '\n';
  }
}

}  // namespace stylo

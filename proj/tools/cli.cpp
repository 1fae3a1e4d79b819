#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "output.hpp"
#include "stylo/error.hpp"
#include "stylo/hypothesis.hpp"
#include "stylo/importance.hpp"
#include "stylo/synth.hpp"

namespace stylo::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kCommands[] = {"validate", "optimize",      "test",
                                     "features", "block-removal", "synth"};

struct Options {
  std::string command;
  std::string corpus;
  std::string out;
  std::string labels = "P,nonP";
  std::string rep = "lexeme";
  std::uint64_t seed = 0;
  unsigned workers = 1;

  std::string windows = "1..10";
  std::string ngrams = "1..10";
  std::size_t sims = 20;
  std::size_t subsample = 250;
  std::size_t min_per_class = 50;
  std::size_t restarts = 50;
  std::size_t max_iters = 300;
  double tol = 0.0;
  std::string idf = "smooth";
  std::string norm = "l2";

  std::size_t null_sims = 5;
  bool dense_shifts = false;
  bool fixed_cell = false;
  std::size_t perms = 0;

  std::size_t window = 0;
  std::size_t ngram = 0;
  bool has_window = false;
  bool has_ngram = false;
  std::size_t feature_sims = 100;
  double level = 0.75;
  std::string abundance = "mean_tfidf";
  bool dump_matrix = false;

  std::string removals = "1,2,3,1+2";
  std::string block_label;

  std::string agreement;

  SynthSpec synth;
};

// Ordered key/value echo of the effective settings; keys are flag names.
using Settings = std::vector<std::pair<std::string, Json>>;

bool uses_grid(const std::string& command) {
  return command == "optimize" || command == "test" || command == "features" ||
         command == "block-removal";
}

Settings settings_of(const Options& o) {
  Settings s;
  auto add = [&](const std::string& k, Json v) { s.emplace_back(k, std::move(v)); };
  add("command", o.command);
  if (o.command != "synth") add("corpus", o.corpus);
  add("labels", o.labels);
  add("seed", o.seed);
  if (uses_grid(o.command)) {
    add("rep", o.rep);
    add("windows", o.windows);
    add("ngrams", o.ngrams);
    add("sims", o.sims);
    add("subsample", o.subsample);
    add("min-per-class", o.min_per_class);
    add("restarts", o.restarts);
    add("max-iters", o.max_iters);
    add("tol", o.tol);
    add("idf", o.idf);
    add("norm", o.norm);
  }
  if (o.command == "test") {
    add("null-sims", o.null_sims);
    add("dense-shifts", o.dense_shifts);
    add("fixed-cell", o.fixed_cell);
    add("perms", o.perms);
  }
  if (o.command == "features") {
    if (o.has_window) add("window", o.window);
    if (o.has_ngram) add("ngram", o.ngram);
    add("feature-sims", o.feature_sims);
    add("level", o.level);
    add("abundance", o.abundance);
    add("dump-matrix", o.dump_matrix);
  }
  if (o.command == "block-removal") {
    add("removals", o.removals);
    add("block-label", o.block_label);
  }
  if (o.command == "validate" && !o.agreement.empty()) add("agreement", o.agreement);
  if (o.command == "synth") {
    const auto& y = o.synth;
    add("verses", y.verses);
    add("block-a", y.mean_block_a);
    add("block-b", y.mean_block_b);
    add("vocab", y.vocabulary);
    add("min-tokens", y.min_tokens);
    add("max-tokens", y.max_tokens);
    add("zipf", y.zipf_exponent);
    add("divergence", y.divergence);
    add("scale", y.signal_scale);
    add("signal-blocks", y.signal_blocks);
    add("exclusive", y.exclusive_tokens);
    add("exclusive-rate", y.exclusive_rate);
  }
  return s;
}

std::string manifest_text(const Options& o) {
  std::string text = "# stylo run manifest: stylo --config manifest.cfg [--out DIR]\n";
  for (const auto& [k, v] : settings_of(o)) text += k + "=" + v.dump() + "\n";
  return text;
}

Json config_json(const Options& o) {
  Json j = Json::object();
  for (const auto& [k, v] : settings_of(o)) j[k] = v;
  return j;
}

// Creates the output directory and writes the manifest; false when no --out.
bool prepare_output(const Options& o) {
  if (o.out.empty()) return false;
  fs::create_directories(o.out);
  write_text(fs::path(o.out) / "manifest.cfg", manifest_text(o));
  return true;
}

LabelNames label_names(const Options& o) { return parse_label_names(o.labels); }

Corpus load(const Options& o) {
  if (o.corpus.empty()) throw ConfigError("no corpus file given");
  return load_corpus(o.corpus, label_names(o));
}

TfidfOptions tfidf_of(const Options& o) {
  return TfidfOptions{parse_idf_mode(o.idf), parse_row_norm(o.norm)};
}

KMeansConfig kmeans_of(const Options& o) {
  KMeansConfig k;
  k.restarts = o.restarts;
  k.max_iters = o.max_iters;
  k.tol = o.tol;
  return k;
}

GridSpec grid_of(const Options& o) {
  GridSpec spec;
  spec.representation = parse_representation(o.rep);
  spec.windows = parse_range(o.windows);
  spec.ngrams = parse_range(o.ngrams);
  spec.simulations = o.sims;
  spec.subsample_size = o.subsample;
  spec.min_per_class = o.min_per_class;
  spec.kmeans = kmeans_of(o);
  spec.tfidf = tfidf_of(o);
  spec.seed = o.seed;
  spec.workers = o.workers;
  validate(spec);
  return spec;
}

Json cell_json(const GridCell& c) {
  return Json{{"window", c.window}, {"ngram", c.ngram}, {"mean", c.mean}, {"std", c.std}};
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json embedding_method(const Options& o) {
  const auto idf = parse_idf_mode(o.idf);
  return Json{
      {"features", "tf-idf over token n-grams of windowed super-verses (verse i with k neighbours "
                   "each side, clipped at the corpus edges)"},
      {"idf", idf == IdfMode::Smooth ? "ln((1+n)/(1+df))+1" : "ln(n/df)+1"},
      {"row_norm", std::string(to_string(parse_row_norm(o.norm)))},
      {"clustering", "k-means, k=2, Forgy initialisation, best of restarts by loss"},
      {"overlap", "balanced accuracy, maximised over both cluster-to-class alignments"},
  };
}

Json grid_method(const Options& o) {
  Json m = embedding_method(o);
  m["subsampling"] = "rejection sampling with a per-class minimum";
  m["std"] = "population standard deviation across simulations";
  m["selection"] = "argmax (mean-0.5)/(std+1e-6); ties: larger mean, smaller n, smaller window";
  m["mean_optimum"] = "argmax of the mean, reported alongside";
  m["within_1sigma"] = "cells with mean >= optimum mean - optimum std";
  return m;
}

Json grid_json(const GridSpec& spec, const GridResult& g) {
  Json within = Json::array();
  for (const auto& c : g.within_1sigma) within.push_back(cell_json(c));
  return Json{{"windows", spec.windows},
              {"ngrams", spec.ngrams},
              {"optimum", cell_json(g.optimum)},
              {"mean_optimum", cell_json(g.mean_optimum)},
              {"rules_disagree", g.rules_disagree},
              {"within_1sigma", within},
              {"mean_ba", matrix_json(g.mean_ba)},
              {"std_ba", matrix_json(g.std_ba)}};
}

std::string percent(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << 100.0 * v;
  return s.str();
}

std::string describe(const GridCell& c) {
  return "window " + std::to_string(c.window) + ", n " + std::to_string(c.ngram) + ": BA " +
         percent(c.mean) + "% +/- " + percent(c.std) + "%";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto names = label_names(o);
  const auto c = load(o);
  const bool write = prepare_output(o);

  Json classes = Json::object();
  Json block_info = Json::object();
  std::string blocks_csv = "label,rank,start,length\n";
  out << "corpus: " << c.name() << "\nverses: " << c.size() << "\n";
  for (const auto label : {Label::A, Label::B}) {
    const auto& name = names.name(label);
    classes[name] = c.count(label);
    const auto ranked = ranked_blocks(c.labels(), label);
    std::map<std::size_t, std::size_t, std::greater<>> histogram;
    Json lengths = Json::array();
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      ++histogram[ranked[r].length];
      lengths.push_back(ranked[r].length);
      blocks_csv += csv_field(name) + "," + std::to_string(r + 1) + "," +
                    std::to_string(ranked[r].start) + "," + std::to_string(ranked[r].length) + "\n";
    }
    Json hist = Json::array();
    for (const auto& [len, count] : histogram) hist.push_back({{"length", len}, {"count", count}});
    block_info[name] = Json{{"count", ranked.size()}, {"lengths", lengths}, {"histogram", hist}};

    out << name << ": " << c.count(label) << " verses in " << ranked.size() << " blocks";
    if (!ranked.empty()) {
      out << " (largest:";
      for (std::size_t r = 0; r < std::min<std::size_t>(5, ranked.size()); ++r) {
        out << " " << ranked[r].length;
      }
      out << ")";
    }
    out << "\n";
  }
  Json streams = Json::array();
  out << "streams:";
  for (const auto r : kRepresentations) {
    if (c.has_stream(r)) {
      streams.push_back(std::string(to_string(r)));
      out << " " << to_string(r);
    }
  }
  out << "\n";

  Json report{{"command", "validate"},
              {"config", config_json(o)},
              {"corpus", c.name()},
              {"verses", c.size()},
              {"classes", classes},
              {"streams", streams},
              {"blocks", block_info}};

  if (!o.agreement.empty()) {
    const auto other = load_corpus(o.agreement, names);
    if (other.size() != c.size()) {
      throw ConfigError("agreement needs equal-length corpora: " + std::to_string(c.size()) +
                        " vs " + std::to_string(other.size()));
    }
    const double a = labeling_agreement(c.labels(), other.labels());
    report["agreement"] = a;
    out << "agreement with " << other.name() << ": " << percent(a) << "%\n";
  }

  const bool both = c.count(Label::A) > 0 && c.count(Label::B) > 0;
  report["valid"] = both;
  if (write) {
    write_json(fs::path(o.out) / "validate.json", report);
    write_text(fs::path(o.out) / "blocks.csv", blocks_csv);
  }
  if (!both) {
    out << "validation failed: only one class present\n";
    return kValidationFailure;
  }
  out << "ok\n";
  return kOk;
}

int cmd_optimize(const Options& o, std::ostream& out) {
  const auto c = load(o);
  const auto spec = grid_of(o);
  const bool write = prepare_output(o);
  const auto g = cross_validated_grid(c, spec, c.labels());

  out << "optimum (" << to_string(spec.representation) << ") " << describe(g.optimum) << "\n";
  if (g.rules_disagree) out << "plain-mean optimum " << describe(g.mean_optimum) << "\n";
  if (write) {
    Json report{{"command", "optimize"},
                {"config", config_json(o)},
                {"method", grid_method(o)},
                {"corpus", c.name()},
                {"verses", c.size()}};
    report.update(grid_json(spec, g));
    write_json(fs::path(o.out) / "optimize.json", report);
    write_text(fs::path(o.out) / "mean_ba.csv", matrix_csv(g.mean_ba, spec.windows, spec.ngrams));
    write_text(fs::path(o.out) / "std_ba.csv", matrix_csv(g.std_ba, spec.windows, spec.ngrams));
    std::string sims = "simulation,window,ngram,ba\n";
    for (std::size_t s = 0; s < g.per_simulation.size(); ++s) {
      for (std::size_t r = 0; r < spec.windows.size(); ++r) {
        for (std::size_t col = 0; col < spec.ngrams.size(); ++col) {
          sims += std::to_string(s) + "," + std::to_string(spec.windows[r]) + "," +
                  std::to_string(spec.ngrams[col]) + "," +
                  format_number(g.per_simulation[s](r, col)) + "\n";
        }
      }
    }
    write_text(fs::path(o.out) / "simulations.csv", sims);
  }
  return kOk;
}

Json null_json(const NullDistribution& n) {
  return Json{{"offsets", n.offsets},
              {"values", n.values},
              {"degenerate", n.degenerate},
              {"p_value", p_value(n)}};
}

std::string null_csv(const NullDistribution& n, const char* key) {
  std::string s = std::string(key) + ",ba\n";
  for (std::size_t i = 0; i < n.values.size(); ++i) {
    s += std::to_string(n.offsets[i]) + "," + format_number(n.values[i]) + "\n";
  }
  return s;
}

int cmd_test(const Options& o, std::ostream& out) {
  const auto c = load(o);
  const auto spec = grid_of(o);
  if (o.null_sims == 0) throw ConfigError("null-sims must be >= 1");
  const auto schedule = shift_schedule(c.size(), spec.max_window(), o.dense_shifts);
  const bool write = prepare_output(o);
  NullOptions options;
  options.fixed_cell = o.fixed_cell;
  options.simulations = o.null_sims;
  const auto r = run_test(c, spec, schedule, options, o.perms);

  out << "observed (" << to_string(spec.representation) << ") " << describe(r.cyclic.observed_cell)
      << "\n";
  out << "cyclic null: " << schedule.n_shifts() << " shifts, mean " << percent(r.summary.mean)
      << "%, max " << percent(r.summary.max) << "%\n";
  out << "p-value: " << format_number(r.p_value) << "\n";
  if (r.cyclic.degenerate) out << "warning: null distribution is degenerate\n";
  if (r.permutation_p_value) {
    out << "permutation p-value: " << format_number(*r.permutation_p_value) << "\n";
  }

  if (write) {
    Json method = grid_method(o);
    method["null"] = "cyclic label shifts; the grid is re-optimised per shift";
    method["schedule"] = o.dense_shifts ? "every offset 1..N-1" : "offsets in steps of 2*max window";
    method["statistic"] = "cross-validated mean BA at the selected optimum";
    method["threshold"] = "observed mean - observed std";
    method["p_value"] = "(#{null >= threshold} + 1) / (n + 1)";
    Json report{{"command", "test"},
                {"config", config_json(o)},
                {"method", method},
                {"corpus", c.name()},
                {"verses", c.size()},
                {"observed", cell_json(r.cyclic.observed_cell)},
                {"threshold", r.cyclic.threshold},
                {"schedule", {{"step", schedule.step}, {"dense", schedule.dense},
                              {"n_shifts", schedule.n_shifts()}}},
                {"cyclic", null_json(r.cyclic)},
                {"p_value", r.p_value},
                {"summary", {{"mean", r.summary.mean}, {"std", r.summary.std},
                             {"min", r.summary.min}, {"max", r.summary.max}}}};
    if (r.permutation) report["permutation"] = null_json(*r.permutation);
    write_json(fs::path(o.out) / "test.json", report);
    write_text(fs::path(o.out) / "null.csv", null_csv(r.cyclic, "offset"));
    if (r.permutation) {
      write_text(fs::path(o.out) / "permutation.csv", null_csv(*r.permutation, "permutation"));
    }
  }
  return kOk;
}

int cmd_features(const Options& o, std::ostream& out) {
  const auto names = label_names(o);
  const auto c = load(o);
  if (o.has_window != o.has_ngram) throw ConfigError("give both --window and --ngram, or neither");
  const auto abundance = parse_abundance_mode(o.abundance);
  const auto tfidf = tfidf_of(o);
  const auto rep = parse_representation(o.rep);

  std::size_t window = o.window, ngram = o.ngram;
  std::string source = "flags";
  if (!o.has_window) {
    const auto g = cross_validated_grid(c, grid_of(o), c.labels());
    window = g.optimum.window;
    ngram = g.optimum.ngram;
    source = "grid optimum";
  }
  if (ngram == 0) throw ConfigError("n-gram size must be >= 1");
  const bool write = prepare_output(o);

  ImportanceSpec spec;
  spec.representation = rep;
  spec.window = window;
  spec.ngram = ngram;
  spec.simulations = o.feature_sims;
  spec.subsample_size = o.subsample;
  spec.min_per_class = o.min_per_class;
  spec.kmeans = kmeans_of(o);
  spec.tfidf = tfidf;
  spec.abundance = abundance;
  spec.level = o.level;
  spec.seed = o.seed;
  spec.workers = o.workers;
  const auto r = cross_validated_importance(c, c.labels(), spec);

  out << "features (" << to_string(rep) << ", window " << window << ", n " << ngram << ", "
      << source << "): " << r.truncated << " of " << r.features.size() << " carry "
      << percent(r.level) << "% of the axis variance; mean BA " << percent(r.mean_ba) << "%\n";
  const auto top = r.top();
  for (std::size_t i = 0; i < std::min<std::size_t>(10, top.size()); ++i) {
    out << "  " << std::setw(2) << i + 1 << " " << top[i].name << " ("
        << names.name(top[i].association) << ", loading " << format_number(top[i].mean_loading)
        << ")\n";
  }

  if (write) {
    std::string csv = "feature,representation,mean_loading,std_loading,cluster,ev_share,abundance\n";
    Json features = Json::array();
    for (const auto& f : r.features) {
      csv += csv_field(f.name) + "," + std::string(to_string(rep)) + "," +
             format_number(f.mean_loading) + "," + format_number(f.std_loading) + "," +
             csv_field(names.name(f.association)) + "," + format_number(f.ev_share) + "," +
             format_number(f.abundance) + "\n";
      features.push_back(Json{{"feature", f.name},
                              {"mean_loading", f.mean_loading},
                              {"std_loading", f.std_loading},
                              {"cluster", names.name(f.association)},
                              {"ev_share", f.ev_share},
                              {"abundance", f.abundance},
                              {"present_in", f.present_in}});
    }
    const auto flips = std::count(r.flipped.begin(), r.flipped.end(), true);
    Json method = embedding_method(o);
    method["axis"] = "centroid of the class-A-aligned cluster minus the other centroid";
    method["alignment"] = "each simulation's axis flipped to agree with the first on shared features";
    method["ev_share"] = "mean_loading^2 / sum of mean_loading^2";
    method["abundance"] = std::string("(m_assoc - m_opp) / (m_assoc + m_opp) with m = ") +
                          (abundance == AbundanceMode::MeanTfidf ? "mean tf-idf weight"
                                                                 : "fraction of rows containing") +
                          " per cluster; one admissible realisation of the score";
    Json report{{"command", "features"},
                {"config", config_json(o)},
                {"method", method},
                {"corpus", c.name()},
                {"cell", {{"window", window}, {"ngram", ngram}, {"source", source}}},
                {"simulations", r.simulations},
                {"mean_ba", r.mean_ba},
                {"flipped", flips},
                {"level", r.level},
                {"truncated", r.truncated},
                {"features", features}};
    write_json(fs::path(o.out) / "features.json", report);
    write_text(fs::path(o.out) / "features.csv", csv);

    if (o.dump_matrix) {
      std::vector<std::size_t> all(c.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      const auto e = embed(c, all, c.labels(), EmbedConfig{rep, ngram, window, tfidf});
      std::ostringstream coo, vocab;
      write_coo(coo, e.matrix.x);
      write_vocabulary_tsv(vocab, e.vocabulary);
      write_text(fs::path(o.out) / "matrix.coo", coo.str());
      write_text(fs::path(o.out) / "vocabulary.tsv", vocab.str());
      std::string rows = "row,verse,ref,label\n";
      for (std::size_t i = 0; i < c.size(); ++i) {
        rows += std::to_string(i) + "," + std::to_string(c[i].index) + "," + csv_field(c[i].ref) +
                "," + csv_field(names.name(c[i].label)) + "\n";
      }
      write_text(fs::path(o.out) / "rows.csv", rows);
    }
  }
  return kOk;
}

int cmd_block_removal(const Options& o, std::ostream& out) {
  const auto names = label_names(o);
  const auto c = load(o);
  const auto spec = grid_of(o);
  Label label = Label::A;
  if (!o.block_label.empty()) {
    const auto parsed = names.parse(o.block_label);
    if (!parsed) throw ConfigError("unknown block label \"" + o.block_label + "\"");
    label = *parsed;
  }
  const auto removals = parse_removals(o.removals);
  const auto ranked = ranked_blocks(c.labels(), label);
  for (const auto& set : removals) {
    for (const auto rank : set) {
      if (rank > ranked.size()) {
        throw ConfigError("block rank " + std::to_string(rank) + " out of range: corpus has " +
                          std::to_string(ranked.size()) + " " + names.name(label) + " blocks");
      }
    }
  }
  const bool write = prepare_output(o);

  Json blocks_json = Json::array();
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    blocks_json.push_back({{"rank", r + 1}, {"start", ranked[r].start}, {"length", ranked[r].length}});
  }
  Json series = Json::array();
  std::string csv = "removal,removed_verses,verses,window,ngram,mean,std\n";
  auto run_one = [&](const std::string& tag, const Corpus& corpus, std::size_t removed) {
    const auto g = cross_validated_grid(corpus, spec, corpus.labels());
    out << std::setw(6) << tag << " (-" << removed << " verses): " << describe(g.optimum) << "\n";
    csv += csv_field(tag) + "," + std::to_string(removed) + "," + std::to_string(corpus.size()) +
           "," + std::to_string(g.optimum.window) + "," + std::to_string(g.optimum.ngram) + "," +
           format_number(g.optimum.mean) + "," + format_number(g.optimum.std) + "\n";
    Json entry{{"removal", tag}, {"removed_verses", removed}, {"verses", corpus.size()}};
    entry.update(grid_json(spec, g));
    series.push_back(std::move(entry));
  };

  run_one("none", c, 0);
  for (const auto& set : removals) {
    std::string tag;
    std::size_t removed = 0;
    for (const auto rank : set) {
      if (!tag.empty()) tag += '+';
      tag += std::to_string(rank);
      removed += ranked[rank - 1].length;
    }
    run_one(tag, remove_blocks(c, set, label), removed);
  }

  if (write) {
    Json report{{"command", "block-removal"},
                {"config", config_json(o)},
                {"method", grid_method(o)},
                {"corpus", c.name()},
                {"verses", c.size()},
                {"block_label", names.name(label)},
                {"blocks", blocks_json},
                {"series", series}};
    write_json(fs::path(o.out) / "block_removal.json", report);
    write_text(fs::path(o.out) / "block_removal.csv", csv);
  }
  return kOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  auto spec = o.synth;
  spec.seed = o.seed;
  const auto names = label_names(o);
  const auto c = synthesize(spec);
  std::ostringstream text;
  write_corpus(text, c, names);
  if (!prepare_output(o)) {
    out << text.str();
    return kOk;
  }
  const auto path = fs::path(o.out) / "corpus.jsonl";
  write_text(path, text.str());
  out << "wrote " << c.size() << " verses (" << c.count(Label::A) << " " << names.a << ", "
      << c.count(Label::B) << " " << names.b << ") to " << path.string() << "\n";
  return kOk;
}

void define(CLI::App& app, Options& o) {
  app.set_config("--config", "", "Flat key=value file mirroring the flags; flags override it");

  app.add_option("command", o.command, "Subcommand")
      ->required()
      ->check(CLI::IsMember(std::vector<std::string>(std::begin(kCommands), std::end(kCommands))));
  app.add_option("corpus,--corpus", o.corpus, "Corpus JSONL file");
  app.add_option("--out", o.out, "Output directory (synth: stdout when absent)");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--rep", o.rep, "Representation: lexeme, pos_low, pos_high");
  app.add_option("--labels", o.labels, "On-disk names of the two classes, e.g. P,nonP");
  app.add_option("--workers", o.workers, "Worker threads (0 = all cores); never changes results");

  auto* grid = "Grid";
  app.add_option("--windows", o.windows, "Window widths, e.g. 1..10 or 0,2,4")->group(grid);
  app.add_option("--ngrams", o.ngrams, "N-gram sizes, e.g. 1..10")->group(grid);
  app.add_option("--sims", o.sims, "Cross-validation simulations")->group(grid);
  app.add_option("--subsample", o.subsample, "Verses per simulation")->group(grid);
  app.add_option("--min-per-class", o.min_per_class, "Minimum verses per class in a subsample")
      ->group(grid);
  app.add_option("--restarts", o.restarts, "k-means restarts")->group(grid);
  app.add_option("--max-iters", o.max_iters, "k-means iteration cap")->group(grid);
  app.add_option("--tol", o.tol, "k-means relative loss tolerance")->group(grid);
  app.add_option("--idf", o.idf, "smooth or plain")->group(grid);
  app.add_option("--norm", o.norm, "l2 or none")->group(grid);

  auto* test = "Test";
  app.add_option("--null-sims", o.null_sims, "Simulations per null labeling")->group(test);
  app.add_flag("--dense-shifts", o.dense_shifts, "Use every shift instead of steps of 2W")
      ->group(test);
  app.add_flag("--fixed-cell", o.fixed_cell, "Evaluate only the observed optimum per shift")
      ->group(test);
  app.add_option("--perms", o.perms, "Label permutations for the naive null (0 = skip)")
      ->group(test);

  auto* feat = "Features";
  app.add_option("--window", o.window, "Window width (default: grid optimum)")->group(feat);
  app.add_option("--ngram", o.ngram, "N-gram size (default: grid optimum)")->group(feat);
  app.add_option("--feature-sims", o.feature_sims, "Simulations for feature stability")
      ->group(feat);
  app.add_option("--level", o.level, "Explained-variance truncation level")->group(feat);
  app.add_option("--abundance", o.abundance, "mean_tfidf or doc_frequency")->group(feat);
  app.add_flag("--dump-matrix", o.dump_matrix, "Write the full-corpus matrix and vocabulary")
      ->group(feat);

  auto* removal = "Block removal";
  app.add_option("--removals", o.removals, "Block ranks to remove, e.g. 1,2,3,1+2")
      ->group(removal);
  app.add_option("--block-label", o.block_label, "Class whose blocks are removed (default: first)")
      ->group(removal);

  app.add_option("--agreement", o.agreement, "validate: second labeling to compare against")
      ->group("Validate");

  auto* synth = "Synth";
  auto& y = o.synth;
  app.add_option("--verses", y.verses, "Verse count")->group(synth);
  app.add_option("--block-a", y.mean_block_a, "Mean block length of the first class")->group(synth);
  app.add_option("--block-b", y.mean_block_b, "Mean block length of the second class")->group(synth);
  app.add_option("--vocab", y.vocabulary, "Vocabulary size")->group(synth);
  app.add_option("--min-tokens", y.min_tokens, "Minimum tokens per verse")->group(synth);
  app.add_option("--max-tokens", y.max_tokens, "Maximum tokens per verse")->group(synth);
  app.add_option("--zipf", y.zipf_exponent, "Zipf exponent")->group(synth);
  app.add_option("--divergence", y.divergence, "Class divergence in [0, 1]")->group(synth);
  app.add_option("--scale", y.signal_scale, "N-gram scale of the planted signal")->group(synth);
  app.add_option("--signal-blocks", y.signal_blocks, "Only the largest k class-A blocks carry style")
      ->group(synth);
  app.add_option("--exclusive", y.exclusive_tokens, "Planted class-exclusive tokens")->group(synth);
  app.add_option("--exclusive-rate", y.exclusive_rate, "Per-verse rate of each planted token")
      ->group(synth);
}

int dispatch(const Options& o, std::ostream& out) {
  if (o.command == "validate") return cmd_validate(o, out);
  if (o.command == "optimize") return cmd_optimize(o, out);
  if (o.command == "test") return cmd_test(o, out);
  if (o.command == "features") return cmd_features(o, out);
  if (o.command == "block-removal") return cmd_block_removal(o, out);
  return cmd_synth(o, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-validated overlap of a hypothesized binary partition of a sequential corpus",
               "stylo"};
  Options o;
  define(app, o);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }
  o.has_window = app.get_option("--window")->count() > 0;
  o.has_ngram = app.get_option("--ngram")->count() > 0;

  try {
    return dispatch(o, out);
  } catch (const CorpusError& e) {
    err << "stylo: invalid corpus: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const ConfigError& e) {
    err << "stylo: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "stylo: error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

}  // namespace stylo::cli

#include "stylo/clustering.hpp"

#include <algorithm>
#include <limits>

#include "stylo/error.hpp"
#include "stylo/random.hpp"

namespace stylo {
namespace {

bool same_row(const SparseMatrix& x, std::size_t a, std::size_t b) {
  const auto ca = x.row_cols(a), cb = x.row_cols(b);
  const auto va = x.row_vals(a), vb = x.row_vals(b);
  return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end()) &&
         std::equal(va.begin(), va.end(), vb.begin(), vb.end());
}

double dot(const SparseMatrix& x, std::size_t r, const std::vector<double>& c) {
  const auto cs = x.row_cols(r);
  const auto vs = x.row_vals(r);
  double s = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) s += vs[i] * c[cs[i]];
  return s;
}

double sq_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (const double e : v) s += e * e;
  return s;
}

// Exact squared distance of row r to c, given ||c||^2.
double exact_sq_dist(const SparseMatrix& x, std::size_t r, const std::vector<double>& c,
                     double c_norm) {
  const auto cs = x.row_cols(r);
  const auto vs = x.row_vals(r);
  double s = c_norm;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const double cj = c[cs[i]];
    const double diff = vs[i] - cj;
    s += diff * diff - cj * cj;
  }
  return std::max(0.0, s);
}

void load_row(const SparseMatrix& x, std::size_t r, std::vector<double>& c) {
  std::fill(c.begin(), c.end(), 0.0);
  const auto cs = x.row_cols(r);
  const auto vs = x.row_vals(r);
  for (std::size_t i = 0; i < cs.size(); ++i) c[cs[i]] = vs[i];
}

// Centroids as cluster means. An empty cluster takes the point farthest from
// the other centroid.
void update_centroids(const SparseMatrix& x, std::vector<std::uint8_t>& assign,
                      std::array<std::vector<double>, 2>& cent) {
  std::array<std::size_t, 2> size{0, 0};
  for (auto& c : cent) std::fill(c.begin(), c.end(), 0.0);
  for (std::size_t r = 0; r < x.rows; ++r) {
    auto& c = cent[assign[r]];
    ++size[assign[r]];
    const auto cs = x.row_cols(r);
    const auto vs = x.row_vals(r);
    for (std::size_t i = 0; i < cs.size(); ++i) c[cs[i]] += vs[i];
  }
  for (int k = 0; k < 2; ++k) {
    if (size[k] == 0) continue;
    const double inv = 1.0 / static_cast<double>(size[k]);
    for (auto& e : cent[k]) e *= inv;
  }

  for (std::uint8_t empty = 0; empty < 2; ++empty) {
    if (size[empty] != 0) continue;
    const std::uint8_t full = 1 - empty;
    const double cn = sq_norm(cent[full]);
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
      const double d = exact_sq_dist(x, r, cent[full], cn);
      if (d > far_d) {
        far_d = d;
        far = r;
      }
    }
    assign[far] = empty;
    load_row(x, far, cent[empty]);
    // Remove the moved point from the other mean.
    const auto n_full = static_cast<double>(size[full]);
    for (auto& e : cent[full]) e *= n_full;
    const auto cs = x.row_cols(far);
    const auto vs = x.row_vals(far);
    for (std::size_t i = 0; i < cs.size(); ++i) cent[full][cs[i]] -= vs[i];
    for (auto& e : cent[full]) e /= (n_full - 1.0);
    return;
  }
}

struct Run {
  std::vector<std::uint8_t> assignment;
  std::array<std::vector<double>, 2> centroids;
  std::vector<double> trace;
  std::size_t iterations = 0;
  double loss = 0.0;
};

Run lloyd(const SparseMatrix& x, const std::vector<double>& row_norm, std::size_t seed_a,
          std::size_t seed_b, const KMeansConfig& config) {
  Run run;
  run.centroids = {std::vector<double>(x.cols), std::vector<double>(x.cols)};
  load_row(x, seed_a, run.centroids[0]);
  load_row(x, seed_b, run.centroids[1]);
  run.assignment.assign(x.rows, 0);

  auto assign_step = [&](bool& changed) {
    const double n0 = sq_norm(run.centroids[0]);
    const double n1 = sq_norm(run.centroids[1]);
    double loss = 0.0;
    changed = false;
    for (std::size_t r = 0; r < x.rows; ++r) {
      const double d0 = row_norm[r] - 2.0 * dot(x, r, run.centroids[0]) + n0;
      const double d1 = row_norm[r] - 2.0 * dot(x, r, run.centroids[1]) + n1;
      const std::uint8_t k = d1 < d0 ? 1 : 0;
      if (k != run.assignment[r]) changed = true;
      run.assignment[r] = k;
      loss += std::max(0.0, std::min(d0, d1));
    }
    return loss;
  };

  bool changed = false;
  run.trace.push_back(assign_step(changed));
  for (std::size_t it = 1; it <= config.max_iters; ++it) {
    update_centroids(x, run.assignment, run.centroids);
    const double prev = run.trace.back();
    const double loss = assign_step(changed);
    run.trace.push_back(loss);
    run.iterations = it;
    if (!changed) break;
    if (config.tol > 0.0 && prev - loss <= config.tol * prev) break;
  }
  update_centroids(x, run.assignment, run.centroids);
  run.loss = wcss(x, run.assignment);
  return run;
}

}  // namespace

std::array<std::size_t, 2> ClusteringResult::sizes() const {
  std::array<std::size_t, 2> s{0, 0};
  for (const auto a : assignment) ++s[a];
  return s;
}

double wcss(const SparseMatrix& x, std::span<const std::uint8_t> assignment) {
  std::array<std::vector<double>, 2> cent{std::vector<double>(x.cols),
                                          std::vector<double>(x.cols)};
  std::array<std::size_t, 2> size{0, 0};
  for (std::size_t r = 0; r < x.rows; ++r) {
    ++size[assignment[r]];
    const auto cs = x.row_cols(r);
    const auto vs = x.row_vals(r);
    for (std::size_t i = 0; i < cs.size(); ++i) cent[assignment[r]][cs[i]] += vs[i];
  }
  for (int k = 0; k < 2; ++k) {
    if (size[k] == 0) continue;
    for (auto& e : cent[k]) e /= static_cast<double>(size[k]);
  }
  const std::array<double, 2> norms{sq_norm(cent[0]), sq_norm(cent[1])};
  double loss = 0.0;
  for (std::size_t r = 0; r < x.rows; ++r) {
    loss += exact_sq_dist(x, r, cent[assignment[r]], norms[assignment[r]]);
  }
  return loss;
}

ClusteringResult kmeans_two(const SparseMatrix& x, const KMeansConfig& config) {
  if (config.restarts == 0) throw ConfigError("k-means needs at least one restart");
  if (x.rows < 2) throw Error("k-means needs at least 2 rows");

  std::size_t distinct_from_first = 0;
  for (std::size_t r = 1; r < x.rows && !distinct_from_first; ++r) {
    if (!same_row(x, 0, r)) distinct_from_first = r;
  }
  if (!distinct_from_first) throw Error("k-means needs at least 2 distinct rows");

  std::vector<double> row_norm(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (const double v : x.row_vals(r)) row_norm[r] += v * v;
  }

  ClusteringResult best;
  best.loss = std::numeric_limits<double>::infinity();
  for (std::size_t restart = 0; restart < config.restarts; ++restart) {
    Rng rng(derive_seed(config.seed, SeedStream::Restart, restart));
    // Forgy: two distinct rows, uniformly.
    std::size_t a = 0, b = 0;
    bool found = false;
    for (int attempt = 0; attempt < 64 && !found; ++attempt) {
      a = rng.below(x.rows);
      b = rng.below(x.rows - 1);
      if (b >= a) ++b;
      found = !same_row(x, a, b);
    }
    if (!found) {
      a = 0;
      b = distinct_from_first;
    }

    Run run = lloyd(x, row_norm, a, b, config);
    if (run.loss < best.loss) {
      best.assignment = std::move(run.assignment);
      best.centroids = std::move(run.centroids);
      best.loss = run.loss;
      best.iterations = run.iterations;
      best.restart = restart;
      best.loss_trace = std::move(run.trace);
    }
  }
  return best;
}

OverlapScore balanced_accuracy(std::span<const std::uint8_t> assignment,
                               std::span<const Label> labels) {
  if (assignment.size() != labels.size()) {
    throw Error("assignment and labels differ in length");
  }
  // counts[class][cluster]
  std::array<std::array<std::size_t, 2>, 2> counts{};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (assignment[i] > 1) throw Error("cluster ids must be 0 or 1");
    ++counts[static_cast<std::size_t>(labels[i])][assignment[i]];
  }
  const std::size_t n_a = counts[0][0] + counts[0][1];
  const std::size_t n_b = counts[1][0] + counts[1][1];
  if (n_a == 0 || n_b == 0) throw Error("balanced accuracy needs both classes in the labels");

  auto score = [&](std::uint8_t cluster_a) {
    const std::uint8_t cluster_b = 1 - cluster_a;
    const double sens = static_cast<double>(counts[0][cluster_a]) / static_cast<double>(n_a);
    const double spec = static_cast<double>(counts[1][cluster_b]) / static_cast<double>(n_b);
    return 0.5 * (sens + spec);
  };

  OverlapScore out;
  const double ba0 = score(0), ba1 = score(1);
  out.cluster_of_a = ba1 > ba0 ? 1 : 0;
  out.ba = std::max(ba0, ba1);
  const std::uint8_t ca = out.cluster_of_a, cb = 1 - ca;
  out.confusion = {counts[0][ca], counts[0][cb], counts[1][cb], counts[1][ca]};
  return out;
}

}  // namespace stylo

#pragma once

// Two-cluster k-means and balanced-accuracy overlap against a labeling.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stylo/corpus.hpp"
#include "stylo/embedding.hpp"

namespace stylo {

struct KMeansConfig {
  std::size_t restarts = 50;
  std::size_t max_iters = 300;
  // 0 stops only on an unchanged assignment; otherwise also on a relative
  // loss decrease <= tol.
  double tol = 0.0;
  std::uint64_t seed = 0;
};

struct ClusteringResult {
  std::vector<std::uint8_t> assignment;  // cluster id in {0, 1} per row
  std::array<std::vector<double>, 2> centroids;
  double loss = 0.0;  // within-cluster sum of squared distances
  std::size_t iterations = 0;
  std::size_t restart = 0;           // index of the winning restart
  std::vector<double> loss_trace;    // loss after each assignment step of the winner

  std::array<std::size_t, 2> sizes() const;
};

// Lloyd iterations from Forgy seeds, best of config.restarts by (loss, restart).
// Throws Error when the matrix has fewer than two distinct rows.
ClusteringResult kmeans_two(const SparseMatrix& x, const KMeansConfig& config);

// WCSS of an assignment around its own cluster means.
double wcss(const SparseMatrix& x, std::span<const std::uint8_t> assignment);

struct Confusion {
  std::size_t tp = 0;  // class A rows in the A-aligned cluster
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
};

struct OverlapScore {
  double ba = 0.0;
  std::uint8_t cluster_of_a = 0;  // cluster aligned with class A
  Confusion confusion;            // under the winning alignment
};

// Balanced accuracy under the better of the two cluster-to-class alignments
// (cluster 0 -> A wins ties). Throws Error on length mismatch or single-class labels.
OverlapScore balanced_accuracy(std::span<const std::uint8_t> assignment,
                               std::span<const Label> labels);

}  // namespace stylo

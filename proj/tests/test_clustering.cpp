#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stylo/clustering.hpp"
#include "stylo/error.hpp"
#include "stylo/random.hpp"
#include "test_util.hpp"

using namespace stylo;
using stylo::testing::labels_of;

namespace {

SparseMatrix dense(const oracle::Rows& rows) {
  std::vector<double> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return SparseMatrix::from_dense(flat, rows.size(), rows.empty() ? 0 : rows[0].size());
}

oracle::Rows random_rows(Rng& rng, std::size_t n, std::size_t d) {
  oracle::Rows rows(n, std::vector<double>(d));
  for (auto& r : rows) {
    for (auto& v : r) v = rng.uniform();
  }
  return rows;
}

}  // namespace

TEST_SUITE("clustering") {

TEST_CASE("well-separated groups are split exactly") {
  const oracle::Rows rows = {{0, 0}, {0.1, 0}, {0, 0.1}, {10, 10}, {10.1, 10}, {10, 10.1}};
  const auto r = kmeans_two(dense(rows), {});
  CHECK(r.assignment[0] == r.assignment[1]);
  CHECK(r.assignment[1] == r.assignment[2]);
  CHECK(r.assignment[3] == r.assignment[4]);
  CHECK(r.assignment[4] == r.assignment[5]);
  CHECK(r.assignment[0] != r.assignment[3]);
  // Per group: squared deviations from (1/30, 1/30) sum to 12/900.
  CHECK(r.loss == doctest::Approx(24.0 / 900.0).epsilon(1e-9));
  CHECK(r.loss == doctest::Approx(oracle::exhaustive_min_wcss(rows)).epsilon(1e-12));
}

TEST_CASE("two distinct rows form two singleton clusters") {
  const auto r = kmeans_two(dense({{1, 0}, {0, 1}}), {});
  CHECK(r.assignment[0] != r.assignment[1]);
  CHECK(r.loss == 0.0);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(kmeans_two(dense({{1, 1}}), {}), Error);
  CHECK_THROWS_AS(kmeans_two(dense({{1, 1}, {1, 1}, {1, 1}}), {}), Error);
  KMeansConfig none;
  none.restarts = 0;
  CHECK_THROWS_AS(kmeans_two(dense({{1, 0}, {0, 1}}), none), ConfigError);
}

TEST_CASE("small instances reach the exhaustive-partition optimum") {
  Rng rng(1234);
  int matched = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto rows = random_rows(rng, 3 + rng.below(6), 1 + rng.below(3));
    KMeansConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto r = kmeans_two(dense(rows), cfg);
    const double best = oracle::exhaustive_min_wcss(rows);
    CHECK(r.loss >= best - 1e-12 * std::max(1.0, best));
    matched += std::abs(r.loss - best) <= 1e-9 * std::max(1.0, best);
  }
  CHECK(matched >= 95);
}

TEST_CASE("result invariants") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rows = random_rows(rng, 2 + rng.below(30), 1 + rng.below(6));
    KMeansConfig cfg;
    cfg.seed = rng.next();
    cfg.restarts = 5;
    const auto x = dense(rows);
    const auto r = kmeans_two(x, cfg);
    const auto sizes = r.sizes();
    CHECK(sizes[0] > 0);
    CHECK(sizes[1] > 0);
    CHECK(r.loss == doctest::Approx(wcss(x, r.assignment)).epsilon(1e-9));
    for (std::size_t i = 1; i < r.loss_trace.size(); ++i) {
      CHECK(r.loss_trace[i] <= r.loss_trace[i - 1] + 1e-12 * std::max(1.0, r.loss_trace[i - 1]));
    }
  }
}

TEST_CASE("more restarts never lose") {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = dense(random_rows(rng, 40, 4));
    KMeansConfig one, many;
    one.restarts = 1;
    one.seed = many.seed = seed;
    CHECK(kmeans_two(x, many).loss <= kmeans_two(x, one).loss);
  }
}

TEST_CASE("deterministic given the seed") {
  Rng rng(8);
  const auto x = dense(random_rows(rng, 30, 3));
  KMeansConfig cfg;
  cfg.seed = 99;
  const auto a = kmeans_two(x, cfg), b = kmeans_two(x, cfg);
  CHECK(a.assignment == b.assignment);
  CHECK(a.loss == b.loss);
  CHECK(a.restart == b.restart);
}

TEST_CASE("balanced accuracy") {
  const std::vector<std::uint8_t> same = {0, 0, 1, 1, 0};
  const auto labels = labels_of("AABBA");
  CHECK(balanced_accuracy(same, labels).ba == 1.0);

  const std::vector<std::uint8_t> flipped = {1, 1, 0, 0, 1};
  const auto f = balanced_accuracy(flipped, labels);
  CHECK(f.ba == 1.0);
  CHECK(f.cluster_of_a == 1);

  SUBCASE("hand confusion table") {
    // labels PPPNN vs clusters 00111: TP=2 FN=1 TN=2 FP=0.
    const auto s = balanced_accuracy(std::vector<std::uint8_t>{0, 0, 1, 1, 1}, labels_of("PPPNN"));
    CHECK(s.confusion.tp == 2);
    CHECK(s.confusion.fn == 1);
    CHECK(s.confusion.tn == 2);
    CHECK(s.confusion.fp == 0);
    CHECK(s.ba == doctest::Approx(5.0 / 6.0));
    // clusters 00110: the N rows split across clusters, best is (2/3 + 1/2)/2.
    const auto t = balanced_accuracy(std::vector<std::uint8_t>{0, 0, 1, 1, 0}, labels_of("PPPNN"));
    CHECK(t.ba == doctest::Approx(7.0 / 12.0));
    CHECK(t.confusion.tp == 2);
    CHECK(t.confusion.fp == 1);
  }

  CHECK_THROWS_AS(balanced_accuracy(same, labels_of("AAAAA")), Error);
  CHECK_THROWS_AS(balanced_accuracy(same, labels_of("AB")), Error);
}

TEST_CASE("balanced accuracy properties") {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    std::vector<std::uint8_t> assign(n);
    std::vector<Label> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      assign[i] = static_cast<std::uint8_t>(rng.below(2));
      labels[i] = rng.bernoulli(0.5) ? Label::A : Label::B;
    }
    labels[0] = Label::A;
    labels[1] = Label::B;
    const auto s = balanced_accuracy(assign, labels);
    CHECK(s.ba >= 0.5);
    CHECK(s.ba <= 1.0);
    CHECK(s.ba == oracle::balanced_accuracy(assign, labels));

    auto swapped_assign = assign;
    for (auto& a : swapped_assign) a = 1 - a;
    auto swapped_labels = labels;
    for (auto& l : swapped_labels) l = other(l);
    CHECK(balanced_accuracy(swapped_assign, swapped_labels).ba == doctest::Approx(s.ba).epsilon(1e-15));
    CHECK(balanced_accuracy(swapped_assign, labels).ba == doctest::Approx(s.ba).epsilon(1e-15));
  }
}

TEST_CASE("random assignments against balanced labels average near 0.5") {
  Rng rng(2);
  double sum = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::uint8_t> assign(200);
    std::vector<Label> labels(200);
    for (std::size_t i = 0; i < 200; ++i) {
      assign[i] = static_cast<std::uint8_t>(rng.below(2));
      labels[i] = i < 100 ? Label::A : Label::B;
    }
    sum += balanced_accuracy(assign, labels).ba;
  }
  CHECK(std::abs(sum / 1000 - 0.5) <= 0.05);
}

}  // TEST_SUITE

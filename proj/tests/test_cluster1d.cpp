#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "bsod/cluster1d.hpp"
#include "oracles.hpp"

namespace {

TEST(TwoMeans, TwoPointMasses) {
  const auto s = bsod::two_means_1d(std::vector<double>{0, 0, 10, 10, 10});
  EXPECT_EQ(s.sizes, (std::array<std::size_t, 2>{2, 3}));
  EXPECT_DOUBLE_EQ(s.centroids[0], 0.0);
  EXPECT_DOUBLE_EQ(s.centroids[1], 10.0);
  EXPECT_DOUBLE_EQ(s.sse, 0.0);
  EXPECT_EQ(s.assignments, (std::vector<std::uint8_t>{0, 0, 1, 1, 1}));
}

TEST(TwoMeans, IsolatesTheFarValue) {
  // contiguous splits of 0,1,2,9 cost 38, 25 and 2
  const std::vector<double> v{0, 1, 2, 9};
  EXPECT_DOUBLE_EQ(oracle::exhaustive_two_means_sse(v), 2.0);
  const auto s = bsod::two_means_1d(v);
  EXPECT_EQ(s.sizes, (std::array<std::size_t, 2>{3, 1}));
  EXPECT_DOUBLE_EQ(s.sse, 2.0);
}

TEST(TwoMeans, IdenticalValuesAreDegenerate) {
  try {
    bsod::two_means_1d(std::vector<double>{5, 5, 5});
    FAIL();
  } catch (const bsod::Error& e) {
    EXPECT_EQ(e.code(), bsod::Errc::DegenerateValues);
  }
}

TEST(TwoMeans, TiesKeepTheHighClusterSmall) {
  // {0}|{1,2} and {0,1}|{2} both cost 0.5
  const auto s = bsod::two_means_1d(std::vector<double>{2, 0, 1});
  EXPECT_EQ(s.sizes, (std::array<std::size_t, 2>{2, 1}));
  EXPECT_EQ(s.assignments, (std::vector<std::uint8_t>{1, 0, 0}));
}

TEST(TwoMeans, EqualValuesStayTogether) {
  const auto s = bsod::two_means_1d(std::vector<double>{1, 1, 1, 1, 0, 0, 0, 0.5});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(s.assignments[i], s.assignments[0]);
}

TEST(TwoMeans, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    std::vector<double> v(n);
    for (double& x : v) x = (trial % 3 == 0) ? std::round(u(rng)) : u(rng);
    if (*std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end()) < 1e-15) continue;
    const auto s = bsod::two_means_1d(v);
    EXPECT_NEAR(s.sse, oracle::exhaustive_two_means_sse(v), 1e-9);
    EXPECT_LT(s.centroids[0], s.centroids[1]);
    EXPECT_EQ(s.sizes[0] + s.sizes[1], n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (s.assignments[i] == 0 && s.assignments[j] == 1) {
          EXPECT_LE(v[i], v[j]);
        }
      }
    }
  }
}

TEST(TwoMeans, PermutationAndScaleInvariant) {
  std::mt19937_64 rng(2);
  std::exponential_distribution<double> e(3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(5 + rng() % 200);
    for (double& x : v) x = e(rng);
    const auto base = bsod::two_means_1d(v);

    std::vector<std::size_t> perm(v.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> shuffled(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) shuffled[i] = v[perm[i]];
    const auto s = bsod::two_means_1d(shuffled);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(s.assignments[i], base.assignments[perm[i]]);

    std::vector<double> scaled(v);
    for (double& x : scaled) x *= 7.25;
    EXPECT_EQ(bsod::two_means_1d(scaled).assignments, base.assignments);
  }
}

}  // namespace

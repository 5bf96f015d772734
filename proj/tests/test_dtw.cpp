#include <random>

#include <gtest/gtest.h>

#include "gasdetect/dtw.hpp"
#include "gasdetect/error.hpp"
#include "oracles.hpp"

using namespace gasdetect;

namespace {

using V = std::vector<double>;

V random_series(std::mt19937_64& gen, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  V v(len(gen));
  for (auto& x : v) x = u(gen);
  return v;
}

}  // namespace

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize(V{2, 4, 6}), (V{0, 0.5, 1}));
  EXPECT_EQ(normalize(V{3, 3, 3}), (V{0, 0, 0}));
  EXPECT_EQ(normalize(V{5}), (V{0}));
  EXPECT_THROW(normalize(V{}), DataError);
}

TEST(Dtw, Examples) {
  EXPECT_EQ(dtw_distance(V{0.2, 0.5, 0.9}, V{0.2, 0.5, 0.9}).distance, 0.0);
  EXPECT_EQ(dtw_distance(V{0, 0}, V{1, 1}).distance, 2.0);
  EXPECT_EQ(dtw_distance(V{1, 2, 3}, V{1, 2, 2, 3}).distance, 0.0);
  EXPECT_EQ(dtw_distance(V{0}, V{0, 5, 0}).distance, 5.0);
  EXPECT_EQ(dtw_distance(V{1, 1}, V{1}).distance, 0.0);
}

TEST(Dtw, Errors) {
  EXPECT_THROW(dtw_distance(V{}, V{1}), DataError);
  EXPECT_THROW(dtw_distance(V{1}, V{}), DataError);
  EXPECT_THROW(dtw_distance(V{1}, V{1}, 0), ConfigError);
}

TEST(Dtw, OracleExamples) {
  EXPECT_EQ(oracle::dtw_brute_force(V{0}, V{0, 5, 0}).distance, 5.0);
  EXPECT_EQ(oracle::dtw_brute_force(V{1, 1}, V{1}).distance, 0.0);
  EXPECT_THROW(oracle::dtw_brute_force(V(9, 0.0), V{1}), DataError);
}

TEST(Dtw, MatchesOracleOnRealValues) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 2000; ++i) {
    const auto q = random_series(gen, 7);
    const auto c = random_series(gen, 7);
    const auto fast = dtw_distance(q, c);
    const auto slow = oracle::dtw_brute_force(q, c);
    ASSERT_NEAR(fast.distance, slow.distance, 1e-12);
    ASSERT_EQ(fast.path_length, slow.path_length);
  }
}

TEST(Dtw, SymmetricNonNegativeAndBounded) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 1000; ++i) {
    const auto q = random_series(gen, 30);
    const auto c = random_series(gen, 30);
    const auto ab = dtw_distance(q, c);
    const auto ba = dtw_distance(c, q);
    EXPECT_EQ(ab.distance, ba.distance);
    EXPECT_GE(ab.distance, 0.0);
    EXPECT_GE(ab.path_length, std::max(q.size(), c.size()));
    EXPECT_LE(ab.path_length, q.size() + c.size() - 1);
    EXPECT_EQ(dtw_distance(q, q).distance, 0.0);

    V c2(q.size());
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (auto& x : c2) x = u(gen);
    double lockstep = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) lockstep += std::abs(q[k] - c2[k]);
    EXPECT_LE(dtw_distance(q, c2).distance, lockstep + 1e-12);
  }
}

TEST(Dtw, NormOrderIsImmaterialForScalars) {
  const V q{0.1, 0.7, 0.3, 0.9};
  const V c{0.0, 1.0, 0.2};
  EXPECT_EQ(dtw_distance(q, c, 1).distance, dtw_distance(q, c, 3).distance);
}

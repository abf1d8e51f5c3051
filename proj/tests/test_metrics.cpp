#include <gtest/gtest.h>

#include <random>

#include "driftgate/metrics.hpp"
#include "oracles.hpp"

using namespace driftgate;

namespace {

void expect_opt_near(std::optional<double> a, std::optional<double> b, double tol) {
  ASSERT_EQ(a.has_value(), b.has_value());
  if (a) EXPECT_NEAR(*a, *b, tol * std::max(1.0, std::abs(*b)));
}

}  // namespace

TEST(PerfStats, ConstantZeroSeries) {
  auto s = perf_stats(std::vector<double>(10, 0.0));
  EXPECT_EQ(s.ann_return, 0.0);
  EXPECT_EQ(s.max_drawdown, 0.0);
  EXPECT_EQ(s.win_rate, 0.0);
  EXPECT_FALSE(s.sharpe.has_value());
}

TEST(PerfStats, TwoDayDrawdown) {
  auto s = perf_stats(std::vector<double>{0.10, -0.20});
  EXPECT_NEAR(s.max_drawdown, -0.20, 1e-15);
  EXPECT_NEAR(s.wealth_multiple, 0.88, 1e-15);
}

TEST(PerfStats, FourDaySharpe) {
  std::vector<double> r{0.01, -0.005, 0.02, 0.0};
  auto s = perf_stats(r);
  ASSERT_TRUE(s.sharpe);
  const double m = 0.00625;
  const double sd = std::sqrt((0.00375 * 0.00375 + 0.01125 * 0.01125 + 0.01375 * 0.01375 + 0.00625 * 0.00625) / 3);
  EXPECT_NEAR(sd, 0.011087, 1e-6);
  EXPECT_NEAR(*s.sharpe, m / sd * std::sqrt(252.0), 1e-12);
  EXPECT_NEAR(*s.sharpe, 8.95, 0.005);
  EXPECT_NEAR(s.ann_return_arithmetic, m * 252, 1e-15);
  EXPECT_DOUBLE_EQ(s.win_rate, 0.5);
  EXPECT_EQ(s.best_day, 0.02);
  EXPECT_EQ(s.worst_day, -0.005);
}

TEST(PerfStats, EmptySeriesThrows) { EXPECT_THROW(perf_stats(std::vector<double>{}), DataError); }

TEST(PerfStats, MatchesOracleOnRandomSeries) {
  std::mt19937_64 g(1);
  std::uniform_int_distribution<int> len(2, 400);
  std::normal_distribution<double> n;
  for (int k = 0; k < 200; ++k) {
    std::vector<double> r(len(g)), b(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] = 0.0005 + 0.01 * n(g);
      b[i] = 0.3 * r[i] + 0.01 * n(g);
    }
    auto s = perf_stats(r, b);
    expect_opt_near(s.sharpe, oracle::sharpe(r), 1e-10);
    expect_opt_near(s.skewness, oracle::skewness(r), 1e-10);
    expect_opt_near(s.correlation_vs_benchmark, oracle::correlation(r, b), 1e-10);
    EXPECT_NEAR(s.max_drawdown, oracle::max_drawdown(r), 1e-12);
    EXPECT_NEAR(s.ann_return, oracle::ann_return(r), 1e-10 * std::max(1.0, std::abs(oracle::ann_return(r))));
    EXPECT_NEAR(s.wealth_multiple, oracle::wealth(r), 1e-12);
  }
}

TEST(PerfStats, SharpeInvariantToPositiveScaling) {
  std::vector<double> r{0.01, -0.02, 0.015, 0.003, -0.001};
  auto a = perf_stats(r);
  for (auto& x : r) x *= 3.5;
  auto b = perf_stats(r);
  EXPECT_NEAR(*a.sharpe, *b.sharpe, 1e-12);
  EXPECT_NEAR(*b.ann_vol, 3.5 * *a.ann_vol, 1e-12);
}

TEST(PerfStats, NewHighNeverWorsensDrawdown) {
  std::mt19937_64 g(6);
  std::normal_distribution<double> n(0, 0.02);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> r(50);
    for (auto& x : r) x = n(g);
    const double before = max_drawdown(r);
    auto eq = wealth_curve(r, 1.0);
    const double peak = *std::max_element(eq.begin(), eq.end());
    r.push_back(peak / eq.back() * 1.01 - 1.0);
    EXPECT_GE(max_drawdown(r), before);
  }
}

TEST(WealthCurve, Basics) {
  auto w = wealth_curve(std::vector<double>{1.0}, 1e6);
  EXPECT_EQ(w.back(), 2e6);
  EXPECT_EQ(wealth_curve(std::vector<double>{}, 5.0), std::vector<double>{5.0});
  EXPECT_THROW(wealth_curve(std::vector<double>{0.1}, 0.0), DataError);
}

TEST(KeyValues, ListsEveryField) {
  auto kv = to_key_values(perf_stats(std::vector<double>{0.01, 0.02, -0.01}));
  std::vector<std::string> keys;
  for (auto& [k, v] : kv) keys.push_back(k);
  for (const char* want : {"sharpe", "ann_return", "ann_return_arithmetic", "ann_vol", "max_drawdown", "win_rate",
                           "best_day", "worst_day", "skewness", "total_return", "wealth_multiple"})
    EXPECT_NE(std::find(keys.begin(), keys.end(), want), keys.end()) << want;
}

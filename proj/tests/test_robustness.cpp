#include <gtest/gtest.h>

#include <algorithm>

#include "driftgate/robustness.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace driftgate;
using testing_util::WalkForwardFixture;

namespace {

Matrix random_mask(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng g = make_rng(seed, "test.mask");
  std::bernoulli_distribution on(0.3), miss(0.1);
  Matrix m(rows, cols);
  for (std::size_t t = 0; t < rows; ++t)
    for (std::size_t j = 0; j < cols; ++j) m(t, j) = miss(g) ? oracle::nan() : on(g) ? 1.0 : 0.0;
  return m;
}

}  // namespace

TEST(Permutation, PreservesPerDateCountsAndMissingCells) {
  auto mask = random_mask(200, 37, 1);
  Rng rng = make_rng(7, "perm");
  auto p = permute_mask_per_date(mask, rng);
  bool moved = false;
  for (std::size_t t = 0; t < mask.rows(); ++t) {
    double a = 0, b = 0;
    for (std::size_t j = 0; j < mask.cols(); ++j) {
      ASSERT_EQ(is_missing(mask(t, j)), is_missing(p(t, j)));
      if (is_missing(mask(t, j))) continue;
      a += mask(t, j);
      b += p(t, j);
      moved |= mask(t, j) != p(t, j);
    }
    ASSERT_EQ(a, b);
  }
  EXPECT_TRUE(moved);
}

TEST(Permutation, RowRangeLeavesOtherRowsAlone) {
  auto mask = random_mask(50, 20, 2);
  Rng rng = make_rng(8, "perm");
  auto p = permute_mask_rows(mask, 10, 19, rng);
  for (std::size_t t = 0; t < 50; ++t) {
    if (t >= 10 && t <= 19) continue;
    for (std::size_t j = 0; j < 20; ++j)
      ASSERT_TRUE((is_missing(mask(t, j)) && is_missing(p(t, j))) || mask(t, j) == p(t, j));
  }
}

TEST(Permutation, RejectsNonBinaryMask) {
  Matrix m(2, 3, 0.0);
  m(1, 1) = 0.5;
  Rng rng = make_rng(1, "x");
  EXPECT_THROW(permute_mask_per_date(m, rng), InvariantError);
}

TEST(Permutation, BlockShuffleKeepsPerStockTotals) {
  auto mask = random_mask(120, 10, 3);
  Rng rng = make_rng(9, "block");
  auto p = block_shuffle_mask(mask, 21, rng);
  for (std::size_t j = 0; j < 10; ++j) {
    double a = 0, b = 0;
    for (std::size_t t = 0; t < 120; ++t) {
      if (!is_missing(mask(t, j))) a += mask(t, j);
      if (!is_missing(p(t, j))) b += p(t, j);
    }
    EXPECT_EQ(a, b);
  }
}

TEST(Permutation, ShuffledEdgeKeepsRowMultiset) {
  auto mask = random_mask(30, 15, 4);
  Matrix edge(30, 15);
  for (std::size_t i = 0; i < edge.data().size(); ++i) {
    const double m = mask.data()[i];
    edge(i / 15, i % 15) = is_missing(m) ? oracle::nan() : m * (0.1 * i - 3);
  }
  Rng rng = make_rng(10, "edge");
  auto s = shuffle_edge_per_date(edge, rng);
  for (std::size_t t = 0; t < 30; ++t) {
    std::vector<double> a, b;
    for (std::size_t j = 0; j < 15; ++j) {
      if (edge(t, j) == 0.0 || is_missing(edge(t, j))) {
        ASSERT_TRUE((is_missing(edge(t, j)) && is_missing(s(t, j))) || edge(t, j) == s(t, j));
        continue;
      }
      a.push_back(edge(t, j));
      b.push_back(s(t, j));
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    ASSERT_EQ(a, b);
  }
}

TEST(PValue, Formula) {
  std::vector<double> below(999, 4.0);
  EXPECT_DOUBLE_EQ(permutation_pvalue(5.0, below), 1.0 / 1000);
  EXPECT_DOUBLE_EQ(permutation_pvalue(-1.0, below), 1.0);
  std::vector<double> nine{1, 2, 3, 4, 5, 0, -1, -2, -3};
  EXPECT_DOUBLE_EQ(permutation_pvalue(5.0, nine), 2.0 / 10);
  EXPECT_THROW(permutation_pvalue(1.0, std::vector<double>{}), DataError);
}

TEST(PValue, WeakerTrialNeverIncreasesP) {
  std::vector<double> t{0.2, 1.5, -0.3};
  const double before = permutation_pvalue(1.0, t);
  t.push_back(0.1);
  EXPECT_LE(permutation_pvalue(1.0, t), before);
  EXPECT_GT(permutation_pvalue(1.0, t), 0.0);
}

TEST(Trials, SeedDeterminesResult) {
  WalkForwardFixture f(51);
  EXPECT_EQ(random_regime_trial(f.panel, {}, {}, {}, f.windows, 99),
            random_regime_trial(f.panel, {}, {}, {}, f.windows, 99));
  EXPECT_NE(random_regime_trial(f.panel, {}, {}, {}, f.windows, 99),
            random_regime_trial(f.panel, {}, {}, {}, f.windows, 100));
  EXPECT_EQ(shuffled_signal_trial(f.panel, {}, {}, {}, f.windows, 5),
            shuffled_signal_trial(f.panel, {}, {}, {}, f.windows, 5));
}

TEST(Trials, RunnerFastPathMatchesMaterializedPermutation) {
  WalkForwardFixture f(52);
  TrialRunner runner(f.panel, {}, {}, {}, f.windows);
  auto [lo, hi] = runner.formation_rows();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    auto mask = permute_mask_rows(runner.cube().mask, lo, hi, rng);
    auto edge = runner.cube().edge_with_mask(mask);
    const double slow = run_walk_forward(runner.market(), edge, {}, {}, {}, f.windows).combined_sharpe();
    EXPECT_EQ(runner.run_trial(TrialMode::RandomRegime, seed), slow);
  }
}

TEST(Trials, OrderIndependentAcrossThreads) {
  WalkForwardFixture f(53);
  TrialRunner runner(f.panel, {}, {}, {}, f.windows);
  TrialConfig c{40, 77, TrialMode::RandomRegime};
  auto a = runner.run_trials(c, 1);
  auto b = runner.run_trials(c, 4);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 40u);
  EXPECT_EQ(a[5], runner.run_trial(TrialMode::RandomRegime, derive_seed(77, "trial", 5)));
}

TEST(Trials, ShuffledSignalsDestroyTheSignal) {
  WalkForwardFixture f(54, 40);
  TrialRunner runner(f.panel, {}, {}, {}, f.windows);
  auto s = runner.run_trials({200, 3, TrialMode::ShuffledSignals}, 1);
  std::sort(s.begin(), s.end());
  const double median = 0.5 * (s[99] + s[100]);
  EXPECT_LT(std::abs(median), 0.5);
}

TEST(Trials, ConstantCrossSectionShuffleIsNoOp) {
  Matrix e(3, 4, 0.7);
  Rng rng = make_rng(1, "c");
  EXPECT_TRUE(shuffle_edge_per_date(e, rng) == e);
}

TEST(Impact, SquareRootLaw) {
  ImpactModel m{50.0, 0.5};
  for (double p : {0.001, 0.02, 0.1, 0.3}) EXPECT_NEAR(m.impact_bp(4 * p), 2 * m.impact_bp(p), 1e-12);
  EXPECT_EQ(m.impact_bp(0.0), 0.0);
}

TEST(Impact, CalibrationFitWithinTwentyPercent) {
  auto fit = fit_impact_model(kImpactCalibrationPoints);
  // Ordinary least squares on logs, recomputed here.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (auto [p, bp] : kImpactCalibrationPoints) {
    sx += std::log(p);
    sy += std::log(bp);
    sxx += std::log(p) * std::log(p);
    sxy += std::log(p) * std::log(bp);
    ++n;
  }
  const double g = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_NEAR(fit.exponent, g, 1e-12);
  EXPECT_NEAR(fit.coefficient_bp, std::exp((sy - g * sx) / n), 1e-9);
  for (auto [p, bp] : kImpactCalibrationPoints) EXPECT_LE(std::abs(fit.impact_bp(p) / bp - 1.0), 0.20);
  auto sqrt_fit = default_impact_model();
  EXPECT_EQ(sqrt_fit.exponent, 0.5);
  EXPECT_NEAR(sqrt_fit.coefficient_bp, std::exp((sy - 0.5 * sx) / n), 1e-9);
}

TEST(Stress, IdentitiesAndOrdering) {
  WalkForwardFixture f(55);
  auto base = run_walk_forward(f.panel, {}, {}, {}, f.windows);
  StressConfig s;
  s.noise_bp_daily = 0.0;
  auto r = stress_run(base.combined, f.panel, {}, {}, {}, f.windows, s, default_impact_model(), 1);
  EXPECT_EQ(r.noise.sharpe, r.base.sharpe);
  EXPECT_EQ(r.noise.ann_return, r.base.ann_return);
  EXPECT_LT(r.cost.sharpe, r.base.sharpe);
  EXPECT_LE(r.slippage.sharpe, r.base.sharpe);
  EXPECT_LE(r.crisis.sharpe, r.slippage.sharpe);
}

TEST(Stress, NoTradeMeansNoCostEffect) {
  WalkForwardFixture f(56);
  Market m(f.panel);
  Matrix zero(f.panel.n_dates(), f.panel.n_tickers(), 0.0);
  // A flat strategy has no training volatility, so check the engine level:
  // doubling costs on zero turnover leaves returns untouched.
  WeightBook book(m, zero, 100, 400, Execution::NextClose);
  auto a = simulate(m, book, 100, 400, ScaleFactor{}, CostModel{0.0001}, {});
  auto b = simulate(m, book, 100, 400, ScaleFactor{}, CostModel{0.0002}, {});
  EXPECT_EQ(a.daily_returns, b.daily_returns);
}

TEST(Stress, NoiseIsSeeded) {
  WalkForwardFixture f(57);
  auto base = run_walk_forward(f.panel, {}, {}, {}, f.windows);
  auto a = stress_run(base.combined, f.panel, {}, {}, {}, f.windows, {}, default_impact_model(), 4);
  auto b = stress_run(base.combined, f.panel, {}, {}, {}, f.windows, {}, default_impact_model(), 4);
  auto c = stress_run(base.combined, f.panel, {}, {}, {}, f.windows, {}, default_impact_model(), 5);
  EXPECT_EQ(a.noise.sharpe, b.noise.sharpe);
  EXPECT_NE(a.noise.sharpe, c.noise.sharpe);
}

TEST(Capacity, LimitsAndMonotonicity) {
  WalkForwardFixture f(58);
  auto base = run_walk_forward(f.panel, {}, {}, {}, f.windows);
  CostModel cost;
  auto pts = capacity_curve(base.combined, f.panel, {1e-6, 5e7, 1e8, 1e9, 2e9}, std::nullopt, default_impact_model(), cost);
  ASSERT_EQ(pts.size(), 5u);
  EXPECT_NEAR(pts[0].net_sharpe, base.combined_stats.sharpe.value(), 1e-6);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_GE(pts[i].participation, pts[i - 1].participation);
    EXPECT_GE(pts[i].impact_bp, pts[i - 1].impact_bp);
    EXPECT_LE(pts[i].net_sharpe, pts[i - 1].net_sharpe);
  }
  EXPECT_NEAR(pts[3].participation * 2, pts[4].participation, 1e-15);
}

TEST(Capacity, MissingVolumesNeedAdv) {
  WalkForwardFixture f(59);
  auto base = run_walk_forward(f.panel, {}, {}, {}, f.windows);
  PricePanel p = f.panel;
  p.volume = Matrix(p.n_dates(), p.n_tickers());
  EXPECT_THROW(capacity_curve(base.combined, p, {1e8}, std::nullopt, default_impact_model(), {}), DataError);
  EXPECT_NO_THROW(capacity_curve(base.combined, p, {1e8}, 2e7, default_impact_model(), {}));
}

TEST(Capacity, ViabilityBands) {
  EXPECT_EQ(viability_label(12), "Excellent");
  EXPECT_EQ(viability_label(8.5), "Good");
  EXPECT_EQ(viability_label(5), "Acceptable");
  EXPECT_EQ(viability_label(1.2), "Marginal");
  EXPECT_EQ(viability_label(0.4), "Unviable");
}

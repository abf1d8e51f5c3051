#include <gtest/gtest.h>

#include "driftgate/validation.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace driftgate;
using testing_util::WalkForwardFixture;

TEST(MakeWindows, FiveYearTrainOneYearTest) {
  TradingCalendar cal{testing_util::weekdays(2000, parse_date("2005-01-03"))};
  auto w = make_windows(cal, 5, 1, {parse_date("2010-01-01")});
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(format_date(w[0].train_start), "2005-01-01");
  EXPECT_EQ(format_date(w[0].train_end), "2010-01-01");
  EXPECT_EQ(format_date(w[0].test_start), "2010-01-01");
  EXPECT_EQ(format_date(w[0].test_end), "2011-01-01");
}

TEST(MakeWindows, AnchorAtCalendarStartRejected) {
  TradingCalendar cal{testing_util::weekdays(800)};
  try {
    make_windows(cal, 1, 1, {cal.dates.front()});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(format_date(cal.dates.front())), std::string::npos);
  }
}

TEST(MakeWindows, ThreeAnchorsOrderedAndDisjoint) {
  TradingCalendar cal{testing_util::weekdays(2600)};
  auto w = make_windows(cal, 2, 1,
                        {parse_date("2009-01-01"), parse_date("2007-01-01"), parse_date("2008-01-01")});
  ASSERT_EQ(w.size(), 3u);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_LE(w[i].train_end, w[i].test_start);
    EXPECT_EQ(w[i].label, std::to_string(i + 1));
    if (i) EXPECT_LE(w[i - 1].test_end, w[i].test_start);
  }
  EXPECT_THROW(make_windows(cal, 2, 2, {parse_date("2007-01-01"), parse_date("2008-01-01")}), ConfigError);
}

TEST(WalkForward, CombinedIsConcatenation) {
  WalkForwardFixture f(41);
  auto r = run_walk_forward(f.panel, {}, {}, {}, f.windows);
  std::vector<double> joined;
  for (const auto& w : r.windows) joined.insert(joined.end(), w.test.daily_returns.begin(), w.test.daily_returns.end());
  EXPECT_EQ(joined, r.combined.daily_returns);
  auto direct = perf_stats(joined, r.combined_benchmark);
  EXPECT_EQ(direct.sharpe, r.combined_stats.sharpe);
  EXPECT_EQ(direct.ann_return, r.combined_stats.ann_return);
  ASSERT_EQ(r.wealth.size(), 2u);
  EXPECT_NEAR(r.wealth.back().strategy, 1e6 * oracle::wealth(joined), 1e-6);
}

TEST(WalkForward, ScaleComesFromUnscaledTraining) {
  WalkForwardFixture f(42);
  KillSwitchConfig off;
  off.enabled = false;
  auto r = run_walk_forward(f.panel, {}, {}, off, f.windows);
  for (const auto& w : r.windows) {
    auto train = run_backtest(f.panel, {}, ScaleFactor{}, CostModel{}, off, DateRange{w.spec.train_start, w.spec.train_end});
    auto s = compute_scale_factor(train.daily_returns);
    EXPECT_EQ(w.scale.value, s.value);
    auto test = run_backtest(f.panel, {}, s, CostModel{}, off, DateRange{w.spec.test_start, w.spec.test_end});
    EXPECT_EQ(test.daily_returns, w.test.daily_returns);
  }
}

TEST(WalkForward, TestPricesNeverMoveTheScale) {
  WalkForwardFixture f(43);
  auto base = run_walk_forward(f.panel, {}, {}, {}, f.windows);
  PricePanel mutated = f.panel;
  const std::size_t from = mutated.calendar.count_before(f.windows.back().test_start);
  for (std::size_t t = from; t < mutated.n_dates(); ++t)
    for (std::size_t j = 0; j < mutated.n_tickers(); ++j) mutated.close(t, j) *= 1.0 + 0.3 * ((t + j) % 3);
  auto r = run_walk_forward(mutated, {}, {}, {}, f.windows);
  EXPECT_EQ(r.windows.back().scale.value, base.windows.back().scale.value);
  EXPECT_NE(r.windows.back().test.daily_returns, base.windows.back().test.daily_returns);
}

TEST(WalkForward, ThreadCountDoesNotChangeResults) {
  WalkForwardFixture f(44);
  WalkForwardOptions one, many;
  many.threads = 4;
  auto a = run_walk_forward(f.panel, {}, {}, {}, f.windows, one);
  auto b = run_walk_forward(f.panel, {}, {}, {}, f.windows, many);
  EXPECT_EQ(a.combined.daily_returns, b.combined.daily_returns);
}

TEST(WalkForward, KillSwitchLatchesWithinWindow) {
  WalkForwardFixture f(45);
  KillSwitchConfig k;
  k.rolling_loss_threshold = -1e-9;  // any losing 63-day stretch
  k.rolling_window = 5;
  auto r = run_walk_forward(f.panel, {}, {}, k, f.windows);
  ASSERT_FALSE(r.combined.kill_log.empty());
  for (const auto& w : r.windows) {
    if (w.test.kill_log.empty()) continue;
    ASSERT_EQ(w.test.kill_log.size(), 1u);
    std::size_t i = 0;
    while (w.test.dates[i] != w.test.kill_log[0].date) ++i;
    for (std::size_t k2 = i + 2; k2 < w.test.daily_returns.size(); ++k2) EXPECT_EQ(w.test.daily_returns[k2], 0.0);
  }
}

TEST(WalkForward, GatedBeatsUngatedOnEmbeddedEffect) {
  WalkForwardFixture f(46, 40);
  Market m(f.panel);
  auto cube = compute_signal_cube(f.panel, m.returns(), {});
  auto g = run_walk_forward(m, cube.edge(), {}, {}, {}, f.windows);
  auto u = run_walk_forward(m, cube.ungated_edge(), {}, {}, {}, f.windows);
  EXPECT_GT(g.combined_sharpe(), u.combined_sharpe());
}

TEST(Sweep, WindowRounding) {
  EXPECT_EQ(perturbed_window(63, -0.30), 44);
  EXPECT_EQ(perturbed_window(63, 0.30), 82);
  EXPECT_EQ(perturbed_window(63, -0.15), 54);
  EXPECT_EQ(perturbed_window(63, 0.15), 72);
  EXPECT_EQ(perturbed_window(1, -0.9), 1);
}

TEST(Sweep, ZeroOffsetReproducesBaseAndCellsMatchIndependentRuns) {
  WalkForwardFixture f(47);
  SignalParams base;
  CostModel cost;
  auto table = parameter_sweep(f.panel, base, cost, {}, f.windows, {}, kDefaultSweepOffsets);
  const double truth = run_walk_forward(f.panel, base, cost, {}, f.windows).combined_stats.sharpe.value();
  ASSERT_EQ(table.rows.size(), 4u);
  for (const auto& row : table.rows) {
    ASSERT_NE(row.base(), nullptr);
    EXPECT_EQ(row.base()->sharpe, truth) << row.parameter;
  }
  // Spot-check perturbed cells against independent walk-forwards.
  const auto& w = table.rows[0].cells.front();
  SignalParams p = base;
  p.drift_window = static_cast<int>(w.value);
  EXPECT_EQ(w.sharpe, run_walk_forward(f.panel, p, cost, {}, f.windows).combined_stats.sharpe);
  const auto& c = table.rows[3].cells.back();
  EXPECT_EQ(c.sharpe, run_walk_forward(f.panel, base, CostModel{c.value}, {}, f.windows).combined_stats.sharpe);
  for (const auto& row : table.rows)
    for (const auto& cell : row.cells)
      if (cell.sharpe) EXPECT_TRUE(std::isfinite(*cell.sharpe));
}

TEST(Attribution, IdentitiesHold) {
  WalkForwardFixture f(48, 40);
  SignalParams params;
  auto d = attribution_decomposition(f.panel, params, {}, {}, f.windows);
  EXPECT_DOUBLE_EQ(d.interaction_sharpe,
                   d.gated.sharpe - (d.value_only.sharpe + d.reversal_only.sharpe - d.ungated.sharpe));
  EXPECT_EQ(d.gated.sharpe, run_walk_forward(f.panel, params, {}, {}, f.windows).combined_sharpe());
  Market m(f.panel);
  auto cube = compute_signal_cube(f.panel, m.returns(), params);
  EXPECT_EQ(d.ungated.sharpe, run_walk_forward(m, cube.base, params, {}, {}, f.windows).combined_sharpe());
  SignalParams v = params;
  v.alpha = 1.0;
  EXPECT_EQ(d.value_only.sharpe, run_walk_forward(f.panel, v, {}, {}, f.windows).combined_sharpe());
  EXPECT_GT(d.gated.sharpe, d.ungated.sharpe);
}

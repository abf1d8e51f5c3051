#include <gtest/gtest.h>

#include <random>

#include "driftgate/metrics.hpp"
#include "driftgate/risk.hpp"
#include "oracles.hpp"

using namespace driftgate;

namespace {

// Series with exactly the requested sample std (daily) and max drawdown:
// alternating +-a around zero mean after a single drop of size dd.
std::vector<double> series_with(double daily_sd, std::size_t n) {
  std::vector<double> r;
  for (std::size_t i = 0; i < n; ++i) r.push_back(i % 2 ? -daily_sd : daily_sd);
  // Sample std of an even-length +-a series is a * sqrt(n / (n - 1)).
  const double k = std::sqrt((n - 1.0) / n);
  for (auto& x : r) x *= k;
  return r;
}

struct Path {
  std::vector<double> equity{1.0};
  std::vector<double> returns;
  std::vector<double> bench;
};

struct Outcome {
  KillSwitchState state;
  std::size_t fired_at = 0;  // 1-based day index; 0 = never
  int transitions = 0;
};

Outcome replay(const std::vector<double>& rets, const std::vector<double>& bench, const KillSwitchConfig& cfg = {},
               double target_vol = 0.12) {
  Path p;
  Outcome o;
  Date d = parse_date("2020-01-01");
  for (std::size_t i = 0; i < rets.size(); ++i) {
    p.returns.push_back(rets[i]);
    p.bench.push_back(bench[i]);
    p.equity.push_back(p.equity.back() * (1 + rets[i]));
    const bool before = o.state.active;
    o.state = kill_switch_step(o.state, d + std::chrono::days(i), p.equity, p.returns, p.bench, cfg, target_vol);
    if (before && !o.state.active) {
      ++o.transitions;
      o.fired_at = i + 1;
    }
    if (!before && o.state.active) ++o.transitions;
  }
  return o;
}

}  // namespace

TEST(ScaleFactor, BothLegsAtCapGiveExactlyOne) {
  // Vol leg: construct returns whose annualized sample vol is 12%, then
  // measure the realized drawdown and set the drawdown cap to it.
  auto r = series_with(0.12 / std::sqrt(252.0), 200);
  const double dd = oracle::max_drawdown(r);
  auto s = compute_scale_factor(r, ScaleTargets{0.12, std::abs(dd)});
  EXPECT_NEAR(s.training_vol, 0.12, 1e-12);
  EXPECT_NEAR(s.value, 1.0, 1e-12);
}

TEST(ScaleFactor, VolBindsAtHalf) {
  auto r = series_with(0.24 / std::sqrt(252.0), 100);
  auto s = compute_scale_factor(r);
  ASSERT_GT(0.15 / std::abs(s.training_maxdd), 0.5);
  EXPECT_NEAR(s.value, 0.5, 1e-12);
}

TEST(ScaleFactor, DrawdownBinds) {
  std::vector<double> r{0.01, -0.3, 0.01, 0.02};
  auto s = compute_scale_factor(r);
  const double vol = oracle::sd(r) * std::sqrt(252.0);
  const double dd = oracle::max_drawdown(r);
  EXPECT_NEAR(s.value, std::min(0.12 / vol, 0.15 / std::abs(dd)), 1e-14);
  EXPECT_NEAR(s.training_maxdd, dd, 1e-14);
}

TEST(ScaleFactor, MatchesFormulaOnRandomSeries) {
  std::mt19937_64 g(8);
  std::normal_distribution<double> n(0.0005, 0.01);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> r(2 + k * 3);
    for (auto& x : r) x = n(g);
    auto s = compute_scale_factor(r);
    double expect = 0.12 / (oracle::sd(r) * std::sqrt(252.0));
    const double dd = oracle::max_drawdown(r);
    if (dd < 0) expect = std::min(expect, 0.15 / -dd);
    EXPECT_NEAR(s.value, expect, 1e-10 * expect);
  }
}

TEST(ScaleFactor, NoDrawdownUsesVolLegOnly) {
  std::vector<double> r{0.01, 0.02, 0.005};
  auto s = compute_scale_factor(r);
  EXPECT_NEAR(s.value, 0.12 / (oracle::sd(r) * std::sqrt(252.0)), 1e-12);
}

TEST(ScaleFactor, Errors) {
  EXPECT_THROW(compute_scale_factor(std::vector<double>{}), DataError);
  EXPECT_THROW(compute_scale_factor(std::vector<double>{0.01}), DataError);
  EXPECT_THROW(compute_scale_factor(std::vector<double>{0.01, 0.01, 0.01}), DataError);
}

TEST(KillSwitch, DrawdownBelowThresholdStaysActive) {
  auto o = replay({-0.28}, {0.0});
  EXPECT_TRUE(o.state.active);
}

TEST(KillSwitch, AbsoluteDrawdownFires) {
  auto o = replay({0.05, -0.10, -0.2333}, {0.0, 0.0, 0.0});
  // Peak 1.05, trough 1.05 * 0.9 * 0.7667 = 0.6900 of peak.
  EXPECT_FALSE(o.state.active);
  EXPECT_EQ(o.state.trigger_type, TriggerType::AbsoluteDrawdown);
  EXPECT_EQ(o.fired_at, 3u);
}

TEST(KillSwitch, RollingLossFiresOnConstructedStretch) {
  const double r = std::pow(0.895, 1.0 / 63) - 1;
  std::vector<double> rets(63, r), bench(63, 0.0);
  double g = 1;
  for (double x : rets) g *= 1 + x;
  ASSERT_NEAR(g - 1, -0.105, 1e-12);
  auto o = replay(rets, bench);
  EXPECT_EQ(o.state.trigger_type, TriggerType::RollingLoss);
  EXPECT_EQ(o.fired_at, 63u);
  EXPECT_EQ(o.transitions, 1);
}

TEST(KillSwitch, RollingLossNeedsFullWindow) {
  std::vector<double> rets(62, -0.003), bench(62, 0.0);
  EXPECT_TRUE(replay(rets, bench).state.active);
}

TEST(KillSwitch, VolSpikeFires) {
  std::vector<double> rets, bench(40, 0.0);
  for (int i = 0; i < 40; ++i) rets.push_back(i % 2 ? -0.03 : 0.031);
  auto o = replay(rets, bench);
  EXPECT_EQ(o.state.trigger_type, TriggerType::VolSpike);
  EXPECT_EQ(o.fired_at, 21u);
}

TEST(KillSwitch, CorrelationBreakFires) {
  std::mt19937_64 g(2);
  std::normal_distribution<double> n;
  std::vector<double> rets, bench;
  for (int i = 0; i < 100; ++i) {
    const double z = n(g);
    bench.push_back(0.01 * z);
    rets.push_back(0.001 + 0.002 * z);
  }
  auto o = replay(rets, bench);
  EXPECT_EQ(o.state.trigger_type, TriggerType::CorrelationBreak);
  EXPECT_EQ(o.fired_at, 63u);
  EXPECT_GT(std::abs(o.state.trigger_value), 0.5);
}

TEST(KillSwitch, LatchesAfterTrigger) {
  std::vector<double> rets{-0.35};
  std::vector<double> bench{0.0};
  for (int i = 0; i < 200; ++i) {
    rets.push_back(0.01);
    bench.push_back(0.0);
  }
  auto o = replay(rets, bench);
  EXPECT_FALSE(o.state.active);
  EXPECT_EQ(o.transitions, 1);
  EXPECT_EQ(o.fired_at, 1u);
}

TEST(KillSwitch, ZeroReturnsNeverFire) {
  std::vector<double> z(300, 0.0), b(300);
  std::mt19937_64 g(4);
  std::normal_distribution<double> n(0, 0.01);
  for (auto& x : b) x = n(g);
  EXPECT_EQ(replay(z, b).transitions, 0);
}

TEST(KillSwitch, DrawdownTriggerInvariantToEquityScale) {
  std::vector<double> rets{0.1, -0.2, -0.15, 0.05};
  std::vector<double> eq{1.0}, eq2{7.0};
  for (double r : rets) {
    eq.push_back(eq.back() * (1 + r));
    eq2.push_back(eq2.back() * (1 + r));
  }
  std::vector<double> bench(rets.size(), 0.0);
  KillSwitchConfig cfg;
  cfg.abs_dd_threshold = -0.25;
  auto a = kill_switch_step({}, parse_date("2020-01-01"), eq, rets, bench, cfg, 0.12);
  auto b = kill_switch_step({}, parse_date("2020-01-01"), eq2, rets, bench, cfg, 0.12);
  EXPECT_EQ(a.active, b.active);
  EXPECT_FALSE(a.active);
  EXPECT_NEAR(a.trigger_value, b.trigger_value, 1e-14);
}

TEST(KillSwitch, FixedTriggerOrder) {
  // Day 21 crosses both the drawdown and the volatility legs.
  std::vector<double> rets(21, 0.0), bench(21, 0.0);
  rets[20] = -0.35;
  auto o = replay(rets, bench);
  EXPECT_EQ(o.fired_at, 21u);
  EXPECT_EQ(o.state.trigger_type, TriggerType::AbsoluteDrawdown);
  KillSwitchConfig loose;
  loose.abs_dd_threshold = -0.5;
  EXPECT_EQ(replay(rets, bench, loose).state.trigger_type, TriggerType::VolSpike);
}

TEST(KillSwitch, ConfigValidation) {
  KillSwitchConfig c;
  c.abs_dd_threshold = 0.3;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.corr_window = 1;
  EXPECT_THROW(c.validate(), ConfigError);
}

#pragma once

#include <string>

#include "driftgate/engine.hpp"
#include "driftgate/metrics.hpp"

namespace driftgate {

/// Half-open training and test ranges: [train_start, train_end), [test_start, test_end).
struct WindowSpec {
  Date train_start;
  Date train_end;
  Date test_start;
  Date test_end;
  std::string label;
};

/// train = [anchor - train_years, anchor), test = [anchor, anchor + test_years).
/// Anchors are sorted; overlapping test ranges or anchors without enough
/// preceding history are rejected.
std::vector<WindowSpec> make_windows(const TradingCalendar& calendar, int train_years, int test_years,
                                     std::vector<Date> anchors);

struct WalkForwardOptions {
  BacktestOptions backtest;
  ScaleTargets targets;
  unsigned threads = 1;
};

struct WindowResult {
  WindowSpec spec;
  std::optional<double> train_sharpe;  // unscaled training run
  ScaleFactor scale;
  BacktestResult test;
  PerfStats test_stats;
  std::vector<double> benchmark;  // aligned with test.dates
};

struct WealthRow {
  std::string period_end;
  double strategy;
  double benchmark;
};

struct WalkForwardReport {
  std::vector<WindowResult> windows;
  BacktestResult combined;  // per-window test series concatenated in order
  std::vector<double> combined_benchmark;
  PerfStats combined_stats;
  PerfStats benchmark_stats;
  std::vector<WealthRow> wealth;  // from 1,000,000 initial, at each window end

  /// Combined OOS Sharpe, with an undefined Sharpe (flat strategy) read as 0.
  double combined_sharpe() const { return combined_stats.sharpe.value_or(0.0); }
};

inline constexpr double kReportInitialWealth = 1'000'000.0;

/// Walk-forward over a precomputed EDGE matrix. Each window: unscaled
/// training backtest without kill-switch, scale factor from its net returns,
/// then the test range at that frozen scale with the kill-switch live.
WalkForwardReport run_walk_forward(const Market& market, const Matrix& edge, const SignalParams& params,
                                   const CostModel& cost, const KillSwitchConfig& kill_switch,
                                   const std::vector<WindowSpec>& windows, const WalkForwardOptions& options = {});

WalkForwardReport run_walk_forward(const Market& market, const EdgeRowSource& edge, const SignalParams& params,
                                   const CostModel& cost, const KillSwitchConfig& kill_switch,
                                   const std::vector<WindowSpec>& windows, const WalkForwardOptions& options = {});

/// First and last formation index a walk-forward over `windows` touches.
std::pair<std::size_t, std::size_t> walk_forward_span(const Market& market, const std::vector<WindowSpec>& windows);

WalkForwardReport run_walk_forward(const PricePanel& panel, const SignalParams& params, const CostModel& cost,
                                   const KillSwitchConfig& kill_switch, const std::vector<WindowSpec>& windows,
                                   const WalkForwardOptions& options = {});

struct SweepCell {
  double offset = 0.0;  // relative perturbation, e.g. -0.15
  double value = 0.0;   // parameter value actually used
  std::optional<double> sharpe;  // combined OOS Sharpe; unset when a window has no scale factor
};

struct SweepRow {
  std::string parameter;
  std::vector<SweepCell> cells;  // one per offset, in grid order
  const SweepCell* base() const;
};

struct SensitivityTable {
  std::vector<double> offsets;
  std::vector<SweepRow> rows;  // Drift Window, Up Threshold, Value Weight, Transaction Cost
};

inline const std::vector<double> kDefaultSweepOffsets{-0.30, -0.15, 0.0, 0.15, 0.30};

/// Drift window perturbed to max(1, round(W (1 + offset))).
int perturbed_window(int base, double offset);

/// One-at-a-time perturbation of W, theta, alpha and cost rate; each cell is
/// the combined OOS Sharpe of a full walk-forward.
SensitivityTable parameter_sweep(const PricePanel& panel, const SignalParams& base, const CostModel& cost,
                                 const KillSwitchConfig& kill_switch, const std::vector<WindowSpec>& windows,
                                 const WalkForwardOptions& options = {},
                                 const std::vector<double>& offsets = kDefaultSweepOffsets);

struct AttributionRun {
  std::string component;
  double sharpe = 0.0;
  double ann_return = 0.0;
};

struct DecompositionTable {
  AttributionRun value_only;     // alpha = 1, gated
  AttributionRun reversal_only;  // alpha = 0, gated
  AttributionRun ungated;        // BASE with the mask forced to 1
  AttributionRun gated;          // BASE x REGIME
  double interaction_sharpe = 0.0;  // gated - (value_only + reversal_only - ungated)
  double interaction_return = 0.0;  // same identity on annualized return
};

DecompositionTable attribution_decomposition(const PricePanel& panel, const SignalParams& params,
                                             const CostModel& cost, const KillSwitchConfig& kill_switch,
                                             const std::vector<WindowSpec>& windows,
                                             const WalkForwardOptions& options = {});

}  // namespace driftgate

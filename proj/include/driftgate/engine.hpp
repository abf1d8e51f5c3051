#pragma once

#include <functional>

#include "driftgate/portfolio.hpp"
#include "driftgate/risk.hpp"

namespace driftgate {

/// When weights formed at the close of t start earning.
///   NextClose: w_t earns the return dated t+1 (default).
///   Close:     w_t earns the return dated t. Uses the same close for signal
///              and fill; kept only for comparison.
enum class Execution { NextClose, Close };

std::string_view to_string(Execution e);
Execution parse_execution(std::string_view s);

struct CostModel {
  double rate_per_unit_traded = 0.00006;
  double slippage_per_trade = 0.0;

  double total_rate() const { return rate_per_unit_traded + slippage_per_trade; }
  void validate() const;
};

/// Half-open [begin, end).
struct DateRange {
  Date begin;
  Date end;
};

struct KillRecord {
  Date date;
  TriggerType type;
  double value;
  double threshold;
};

struct BacktestResult {
  std::vector<Date> dates;  // realization dates
  std::vector<double> daily_returns;
  std::vector<double> gross_returns;
  std::vector<double> costs;
  std::vector<double> turnover;
  std::vector<double> equity;  // size() == daily_returns.size() + 1, starts at 1.0
  std::vector<WeightFrame> weights_history;  // one per formation date
  std::vector<KillRecord> kill_log;
  ScaleFactor scale_used;
};

struct BacktestOptions {
  Execution execution = Execution::NextClose;
  double target_vol = 0.12;
  bool record_weights = true;
  WeightOptions weights;
};

/// Read-only inputs shared by every backtest over one panel. Holds a
/// reference to the panel, which must outlive it.
class Market {
 public:
  explicit Market(const PricePanel& panel);

  const PricePanel& panel() const { return *panel_; }
  const ReturnPanel& returns() const { return returns_; }
  /// Equal-weight return per panel date (0 on the first date and on days
  /// with no valid returns).
  std::span<const double> benchmark() const { return benchmark_; }
  /// Simple return dated at panel index t (t >= 1).
  std::span<const double> returns_at(std::size_t t) const { return returns_.returns.row(t - 1); }

  /// Panel indices [first, last) covered by the range.
  std::pair<std::size_t, std::size_t> index_range(DateRange range) const;

 private:
  const PricePanel* panel_;
  ReturnPanel returns_;
  std::vector<double> benchmark_;
};

/// Fills `entries` with the non-zero, non-missing EDGE values of formation
/// index t in ascending ticker order. Called once per index, in order.
using EdgeRowSource = std::function<void(std::size_t t, std::vector<Position>& entries)>;

/// Unscaled daily quantities of the strategy driven by one EDGE matrix,
/// over formation indices [first, last].
class WeightBook {
 public:
  WeightBook(const Market& market, const Matrix& edge, std::size_t first, std::size_t last, Execution execution,
             const WeightOptions& options = {}, bool keep_weights = false);
  WeightBook(const Market& market, const EdgeRowSource& edge, std::size_t first, std::size_t last,
             Execution execution, const WeightOptions& options = {}, bool keep_weights = false);

  std::size_t first() const { return first_; }
  std::size_t last() const { return last_; }
  Execution execution() const { return execution_; }
  bool has_weights() const { return !weights_.empty(); }

  double exposure(std::size_t t) const { return exposure_[t - first_]; }
  /// sum |w_t - w_{t-1}|; undefined at first().
  double trade(std::size_t t) const { return trade_[t - first_]; }
  /// Unscaled P&L of w_t at its realization date.
  double pnl(std::size_t t) const { return pnl_[t - first_]; }
  const WeightFrame& weights(std::size_t t) const { return weights_[t - first_]; }

 private:
  std::size_t first_;
  std::size_t last_;
  Execution execution_;
  std::vector<double> exposure_;
  std::vector<double> trade_;
  std::vector<double> pnl_;
  std::vector<WeightFrame> weights_;
};

/// Daily loop over formation indices [first, last] of an existing book:
/// scale, trade costs, P&L, kill-switch. `kill_switch.enabled == false`
/// disables the switch.
BacktestResult simulate(const Market& market, const WeightBook& book, std::size_t first, std::size_t last,
                        const ScaleFactor& scale, const CostModel& cost, const KillSwitchConfig& kill_switch,
                        const BacktestOptions& options = {});

/// Throws DataError when fewer than params.warmup_days() dates precede `first`.
void check_warmup(const Market& market, std::size_t first, const SignalParams& params);

BacktestResult run_backtest(const PricePanel& panel, const SignalParams& params, const ScaleFactor& scale,
                            const CostModel& cost, const KillSwitchConfig& kill_switch, DateRange range,
                            const BacktestOptions& options = {});

/// Equal-weight, daily-rebalanced, cost-free return of the universe for each
/// panel date in the range.
std::vector<double> benchmark_returns(const PricePanel& panel, DateRange range);

}  // namespace driftgate

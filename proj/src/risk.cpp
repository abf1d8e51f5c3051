#include "driftgate/risk.hpp"

#include <algorithm>

#include "driftgate/metrics.hpp"

namespace driftgate {

ScaleFactor compute_scale_factor(std::span<const double> training_returns, const ScaleTargets& targets) {
  if (training_returns.size() < 2)
    throw DataError("scale factor needs at least 2 training returns, got " + std::to_string(training_returns.size()));
  ScaleFactor s;
  s.training_vol = sample_std(training_returns) * std::sqrt(kTradingDays);
  s.training_maxdd = max_drawdown(training_returns);
  if (!(s.training_vol > 0.0)) throw DataError("scale factor undefined: training volatility is zero");
  s.value = targets.vol_cap / s.training_vol;
  if (s.training_maxdd < 0.0) s.value = std::min(s.value, targets.drawdown_cap / std::abs(s.training_maxdd));
  if (!std::isfinite(s.value) || s.value <= 0.0) throw InvariantError("scale factor is not positive and finite");
  return s;
}

void KillSwitchConfig::validate() const {
  auto fail = [](const char* key, const char* what) {
    throw ConfigError(std::string("kill_switch.") + key, std::string("kill_switch.") + key + ": " + what);
  };
  if (!(abs_dd_threshold < 0.0)) fail("abs_dd_threshold", "must be negative");
  if (!(rolling_loss_threshold < 0.0)) fail("rolling_loss_threshold", "must be negative");
  if (rolling_window < 2) fail("rolling_window", "must be >= 2");
  if (!(vol_spike_multiple > 0.0)) fail("vol_spike_multiple", "must be positive");
  if (vol_spike_window < 2) fail("vol_spike_window", "must be >= 2");
  if (!(corr_threshold > 0.0 && corr_threshold <= 1.0)) fail("corr_threshold", "must lie in (0, 1]");
  if (corr_window < 2) fail("corr_window", "must be >= 2");
}

std::string_view to_string(TriggerType t) {
  switch (t) {
    case TriggerType::AbsoluteDrawdown: return "AbsoluteDrawdown";
    case TriggerType::RollingLoss: return "RollingLoss";
    case TriggerType::VolSpike: return "VolSpike";
    case TriggerType::CorrelationBreak: return "CorrelationBreak";
  }
  return "Unknown";
}

KillSwitchState kill_switch_step(const KillSwitchState& state, Date today, std::span<const double> equity,
                                 std::span<const double> returns, std::span<const double> benchmark,
                                 const KillSwitchConfig& config, double target_vol) {
  KillSwitchState next = state;
  if (!state.active || equity.empty()) return next;

  const double current = equity.back();
  next.peak_equity = is_missing(state.peak_equity) ? *std::max_element(equity.begin(), equity.end())
                                                   : std::max(state.peak_equity, current);
  auto fire = [&](TriggerType type, double value, double threshold) {
    next.active = false;
    next.triggered_on = today;
    next.trigger_type = type;
    next.trigger_value = value;
    next.threshold = threshold;
    return next;
  };

  const double drawdown = current / next.peak_equity - 1.0;
  if (drawdown <= config.abs_dd_threshold) return fire(TriggerType::AbsoluteDrawdown, drawdown, config.abs_dd_threshold);

  const auto n = returns.size();
  const auto roll = static_cast<std::size_t>(config.rolling_window);
  if (n >= roll) {
    double growth = 1.0;
    for (double r : returns.last(roll)) growth *= 1.0 + r;
    if (growth - 1.0 <= config.rolling_loss_threshold)
      return fire(TriggerType::RollingLoss, growth - 1.0, config.rolling_loss_threshold);
  }

  const auto vw = static_cast<std::size_t>(config.vol_spike_window);
  if (n >= vw) {
    const double vol = sample_std(returns.last(vw)) * std::sqrt(kTradingDays);
    const double limit = config.vol_spike_multiple * target_vol;
    if (vol >= limit) return fire(TriggerType::VolSpike, vol, limit);
  }

  const auto cw = static_cast<std::size_t>(config.corr_window);
  const auto bench = benchmark.first(std::min(n, benchmark.size()));
  if (n >= cw && bench.size() == n) {
    auto rho = correlation(returns.last(cw), bench.last(cw));
    if (rho && std::abs(*rho) > config.corr_threshold)
      return fire(TriggerType::CorrelationBreak, *rho, config.corr_threshold);
  }
  return next;
}

}  // namespace driftgate

#pragma once

#include <optional>
#include <string_view>

#include "driftgate/common.hpp"

namespace driftgate {

struct ScaleTargets {
  double vol_cap = 0.12;       // annualized
  double drawdown_cap = 0.15;  // magnitude
};

struct ScaleFactor {
  double value = 1.0;
  double training_vol = kMissing;
  double training_maxdd = kMissing;
};

/// value = min(vol_cap / training_vol, drawdown_cap / |training_maxdd|).
/// The drawdown leg is skipped when the training curve never fell below its
/// peak. Throws DataError for fewer than two returns or zero volatility.
ScaleFactor compute_scale_factor(std::span<const double> training_returns, const ScaleTargets& targets = {});

struct KillSwitchConfig {
  bool enabled = true;
  double abs_dd_threshold = -0.30;
  double rolling_loss_threshold = -0.10;
  int rolling_window = 63;
  double vol_spike_multiple = 3.0;
  int vol_spike_window = 21;
  double corr_threshold = 0.5;
  int corr_window = 63;

  void validate() const;
};

enum class TriggerType { AbsoluteDrawdown, RollingLoss, VolSpike, CorrelationBreak };

std::string_view to_string(TriggerType t);

struct KillSwitchState {
  bool active = true;
  std::optional<Date> triggered_on;
  std::optional<TriggerType> trigger_type;
  double trigger_value = kMissing;
  double threshold = kMissing;
  double peak_equity = kMissing;  // running peak; recomputed from the curve when NaN
};

/// Evaluates the four triggers in the fixed order drawdown, rolling loss,
/// volatility spike, correlation break after the day's P&L. `equity` holds
/// the curve including its initial value (size = returns.size() + 1);
/// `benchmark` is aligned with `returns`. An inactive state never reactivates.
KillSwitchState kill_switch_step(const KillSwitchState& state, Date today, std::span<const double> equity,
                                 std::span<const double> returns, std::span<const double> benchmark,
                                 const KillSwitchConfig& config, double target_vol);

}  // namespace driftgate

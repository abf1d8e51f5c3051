#pragma once

#include <cstdint>

#include "driftgate/data.hpp"

namespace driftgate {

/// Parameters of the seeded synthetic market.
///
/// Each stock alternates between a normal state and a drift state (two-state
/// renewal process, independent across stocks). Inside a drift episode the
/// daily mean is shifted by `drift_strength` and the next-day return picks up
/// `reversal_strength` times the negated, cross-sectionally demeaned trailing
/// 10-day return. Outside drift episodes returns are pure noise.
struct SyntheticMarketConfig {
  int n_stocks = 100;
  int n_days = 5292;
  std::uint64_t seed = 0;
  double base_vol = 0.02;
  double drift_regime_fraction = 0.35;
  double drift_strength = 0.008;
  double reversal_strength = 0.05;
  double regime_episode_length = 126.0;

  void validate() const;
};

/// Trailing window of the embedded reversal effect.
inline constexpr int kSyntheticReversalLookback = 10;

/// First calendar date of every synthetic panel; the calendar is Monday-Friday.
Date synthetic_start_date();

struct SyntheticMarket {
  PricePanel panel;
  Matrix in_drift;  // 1 where the stock is in a drift episode on that date, else 0
};

SyntheticMarket generate_synthetic_market(const SyntheticMarketConfig& config);
PricePanel generate_synthetic(const SyntheticMarketConfig& config);

}  // namespace driftgate

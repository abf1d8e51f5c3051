#pragma once

#include "driftgate/data.hpp"

namespace driftgate {

struct SignalParams {
  double alpha = 0.70;         // value weight in BASE
  int reversal_lookback = 10;  // days
  int drift_window = 63;       // days of up-fraction history
  double up_threshold = 0.60;  // strict regime threshold

  void validate() const;
  /// Trading days of history needed before the first signal date.
  int warmup_days() const { return drift_window + reversal_lookback; }
};

/// One date's cross-section, aligned to the panel's ticker order.
/// NaN marks a ticker with insufficient inputs.
struct SignalFrame {
  Date date{};
  std::vector<double> values;

  std::size_t count_valid() const;
  bool empty() const { return count_valid() == 0; }
};

/// Inverse-price percentile rank, (rank - 0.5) / n with average ranks for ties.
/// The cheapest stock scores highest.
SignalFrame value_signal(const PricePanel& panel, Date date);

/// Negated compounded trailing return over `lookback` returns ending at `date`,
/// standardized cross-sectionally (sample std). Empty when fewer than two names
/// qualify or the cross-section has no dispersion.
SignalFrame reversal_signal(const ReturnPanel& returns, Date date, int lookback);

SignalFrame base_signal(const SignalFrame& value, const SignalFrame& reversal, double alpha);

/// Fraction of strictly positive returns among the `window` returns dated
/// strictly before `date`. Tickers without a complete window are missing.
SignalFrame up_fraction(const ReturnPanel& returns, Date date, int window);

/// 1 where up_fraction > theta, 0 otherwise; missing stays missing.
SignalFrame regime_mask(const SignalFrame& up_frac, double theta);

SignalFrame edge_signal(const SignalFrame& base, const SignalFrame& mask);

/// Every signal for every panel date; row t corresponds to panel date t.
struct SignalCube {
  std::vector<Date> dates;
  Matrix value;
  Matrix reversal;
  Matrix base;
  Matrix up_fraction;
  Matrix mask;

  Matrix edge() const;
  /// BASE gated by an arbitrary 0/1 mask of the same shape.
  Matrix edge_with_mask(const Matrix& custom_mask) const;
  /// BASE with the mask forced to 1 wherever BASE exists.
  Matrix ungated_edge() const;

  SignalFrame frame(const Matrix& m, std::size_t row) const;
};

SignalCube compute_signal_cube(const PricePanel& panel, const ReturnPanel& returns, const SignalParams& params);

}  // namespace driftgate

#pragma once

#include <optional>
#include <string>
#include <utility>

#include "driftgate/common.hpp"

namespace driftgate {

inline constexpr double kTradingDays = 252.0;

double mean(std::span<const double> xs);
/// Sample (n - 1) standard deviation; NaN for fewer than two points.
double sample_std(std::span<const double> xs);
/// Sample correlation over the common prefix; nullopt when undefined.
std::optional<double> correlation(std::span<const double> a, std::span<const double> b);
/// Bias-adjusted sample skewness; nullopt for n < 3 or zero variance.
std::optional<double> skewness(std::span<const double> xs);
/// min over t of equity[t] / running peak - 1, equity starting at 1.0.
double max_drawdown(std::span<const double> returns);
/// Annualized arithmetic Sharpe with zero risk-free rate; nullopt when std is 0.
std::optional<double> sharpe_ratio(std::span<const double> returns);

struct PerfStats {
  std::size_t n_days = 0;
  std::optional<double> sharpe;
  double ann_return = 0.0;             // geometric
  double ann_return_arithmetic = 0.0;  // mean daily x 252
  std::optional<double> ann_vol;
  double max_drawdown = 0.0;
  double win_rate = 0.0;
  double best_day = 0.0;
  double worst_day = 0.0;
  std::optional<double> skewness;
  std::optional<double> correlation_vs_benchmark;
  double total_return = 0.0;
  double wealth_multiple = 1.0;
};

/// Throws DataError on an empty series.
PerfStats perf_stats(std::span<const double> returns, std::span<const double> benchmark = {});

/// W[0] = initial, W[t+1] = W[t] (1 + r_t).
std::vector<double> wealth_curve(std::span<const double> returns, double initial);

/// Flat key/value form of the stats (empty value = undefined).
std::vector<std::pair<std::string, std::string>> to_key_values(const PerfStats& s);

}  // namespace driftgate

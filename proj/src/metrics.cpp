#include "driftgate/metrics.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace driftgate {

namespace {
bool constant(std::span<const double> xs) {
  return std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>{}) == xs.end();
}
}  // namespace

double mean(std::span<const double> xs) {
  if (xs.empty()) return kMissing;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return kMissing;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::optional<double> correlation(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n < 2) return std::nullopt;
  a = a.first(n);
  b = b.first(n);
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (constant(a) || constant(b) || saa <= 0.0 || sbb <= 0.0) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

std::optional<double> skewness(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 3 || constant(xs)) return std::nullopt;
  const double m = mean(xs);
  double m2 = 0.0, m3 = 0.0;
  for (double x : xs) {
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  if (m2 <= 0.0) return std::nullopt;
  const double g1 = m3 / std::pow(m2, 1.5);
  const double nd = static_cast<double>(n);
  return g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
}

double max_drawdown(std::span<const double> returns) {
  double equity = 1.0;
  double peak = 1.0;
  double worst = 0.0;
  for (double r : returns) {
    equity *= 1.0 + r;
    peak = std::max(peak, equity);
    worst = std::min(worst, equity / peak - 1.0);
  }
  return worst;
}

std::optional<double> sharpe_ratio(std::span<const double> returns) {
  if (returns.size() < 2 || constant(returns)) return std::nullopt;
  const double sd = sample_std(returns);
  if (!(sd > 0.0)) return std::nullopt;
  return (mean(returns) * kTradingDays) / (sd * std::sqrt(kTradingDays));
}

PerfStats perf_stats(std::span<const double> returns, std::span<const double> benchmark) {
  if (returns.empty()) throw DataError("perf_stats: empty return series");
  PerfStats s;
  s.n_days = returns.size();
  const double n = static_cast<double>(returns.size());

  double wealth = 1.0;
  std::size_t wins = 0;
  s.best_day = returns.front();
  s.worst_day = returns.front();
  for (double r : returns) {
    wealth *= 1.0 + r;
    if (r > 0.0) ++wins;
    s.best_day = std::max(s.best_day, r);
    s.worst_day = std::min(s.worst_day, r);
  }
  s.wealth_multiple = wealth;
  s.total_return = wealth - 1.0;
  s.ann_return = std::pow(wealth, kTradingDays / n) - 1.0;
  s.ann_return_arithmetic = mean(returns) * kTradingDays;
  s.win_rate = static_cast<double>(wins) / n;
  s.max_drawdown = max_drawdown(returns);
  if (returns.size() >= 2) s.ann_vol = sample_std(returns) * std::sqrt(kTradingDays);
  s.sharpe = sharpe_ratio(returns);
  s.skewness = skewness(returns);
  if (!benchmark.empty()) s.correlation_vs_benchmark = correlation(returns, benchmark);
  return s;
}

std::vector<double> wealth_curve(std::span<const double> returns, double initial) {
  if (!(initial > 0.0)) throw DataError("wealth_curve: initial wealth must be > 0");
  std::vector<double> out;
  out.reserve(returns.size() + 1);
  out.push_back(initial);
  for (double r : returns) out.push_back(out.back() * (1.0 + r));
  return out;
}

std::vector<std::pair<std::string, std::string>> to_key_values(const PerfStats& s) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; };
  return {
      {"n_days", std::to_string(s.n_days)},
      {"sharpe", opt(s.sharpe)},
      {"ann_return", format_double(s.ann_return)},
      {"ann_return_arithmetic", format_double(s.ann_return_arithmetic)},
      {"ann_vol", opt(s.ann_vol)},
      {"max_drawdown", format_double(s.max_drawdown)},
      {"win_rate", format_double(s.win_rate)},
      {"best_day", format_double(s.best_day)},
      {"worst_day", format_double(s.worst_day)},
      {"skewness", opt(s.skewness)},
      {"correlation_vs_benchmark", opt(s.correlation_vs_benchmark)},
      {"total_return", format_double(s.total_return)},
      {"wealth_multiple", format_double(s.wealth_multiple)},
  };
}

}  // namespace driftgate

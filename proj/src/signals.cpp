#include "driftgate/signals.hpp"

#include <algorithm>
#include <numeric>

namespace driftgate {

void SignalParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("signal.alpha", "signal.alpha must lie in [0, 1]");
  if (reversal_lookback < 1)
    throw ConfigError("signal.reversal_lookback", "signal.reversal_lookback must be >= 1");
  if (drift_window < 1) throw ConfigError("signal.drift_window", "signal.drift_window must be >= 1");
  if (!(up_threshold > 0.0 && up_threshold < 1.0))
    throw ConfigError("signal.up_threshold", "signal.up_threshold must lie in (0, 1)");
}

std::size_t SignalFrame::count_valid() const {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](double v) { return !is_missing(v); }));
}

namespace {

SignalFrame missing_frame(Date date, std::size_t n) { return SignalFrame{date, std::vector<double>(n, kMissing)}; }

// Standardizes the valid entries in place; returns false when undefined.
bool standardize(std::vector<double>& v) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  std::size_t n = 0;
  for (double x : v) {
    if (is_missing(x)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    sum += x;
    ++n;
  }
  if (n < 2 || lo == hi) return false;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double x : v)
    if (!is_missing(x)) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  for (double& x : v)
    if (!is_missing(x)) x = (x - mean) / sd;
  return true;
}

}  // namespace

SignalFrame value_signal(const PricePanel& panel, Date date) {
  const std::size_t nt = panel.n_tickers();
  SignalFrame out = missing_frame(date, nt);
  auto row = panel.calendar.index_of(date);
  if (!row) return out;

  std::vector<std::size_t> idx;
  idx.reserve(nt);
  for (std::size_t j = 0; j < nt; ++j)
    if (!is_missing(panel.close(*row, j))) idx.push_back(j);
  if (idx.empty()) return out;

  // Ascending inverse price == descending price.
  auto inv = [&](std::size_t j) { return 1.0 / panel.close(*row, j); };
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return inv(a) < inv(b); });
  const double n = static_cast<double>(idx.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t k = i;
    while (k + 1 < idx.size() && inv(idx[k + 1]) == inv(idx[i])) ++k;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + k + 1);
    for (std::size_t m = i; m <= k; ++m) out.values[idx[m]] = (avg_rank - 0.5) / n;
    i = k + 1;
  }
  return out;
}

SignalFrame reversal_signal(const ReturnPanel& returns, Date date, int lookback) {
  const std::size_t nt = returns.tickers.size();
  SignalFrame out = missing_frame(date, nt);
  const std::size_t end = returns.calendar.count_through(date);
  const auto lb = static_cast<std::size_t>(lookback);
  if (lookback < 1 || end < lb) return out;

  for (std::size_t j = 0; j < nt; ++j) {
    double growth = 1.0;
    bool complete = true;
    for (std::size_t t = end - lb; t < end; ++t) {
      const double r = returns.returns(t, j);
      if (is_missing(r)) {
        complete = false;
        break;
      }
      growth *= 1.0 + r;
    }
    if (complete) out.values[j] = -(growth - 1.0);
  }
  if (!standardize(out.values)) std::fill(out.values.begin(), out.values.end(), kMissing);
  return out;
}

SignalFrame base_signal(const SignalFrame& value, const SignalFrame& reversal, double alpha) {
  if (value.date != reversal.date || value.values.size() != reversal.values.size())
    throw InvariantError("base_signal: frames must share a date and universe");
  SignalFrame out = missing_frame(value.date, value.values.size());
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    const double v = value.values[j];
    const double r = reversal.values[j];
    if (!is_missing(v) && !is_missing(r)) out.values[j] = alpha * v + (1.0 - alpha) * r;
  }
  return out;
}

SignalFrame up_fraction(const ReturnPanel& returns, Date date, int window) {
  const std::size_t nt = returns.tickers.size();
  SignalFrame out = missing_frame(date, nt);
  const std::size_t end = returns.calendar.count_before(date);
  const auto w = static_cast<std::size_t>(window);
  if (window < 1 || end < w) return out;

  for (std::size_t j = 0; j < nt; ++j) {
    int ups = 0;
    bool complete = true;
    for (std::size_t t = end - w; t < end; ++t) {
      const double r = returns.returns(t, j);
      if (is_missing(r)) {
        complete = false;
        break;
      }
      if (r > 0.0) ++ups;
    }
    if (complete) out.values[j] = static_cast<double>(ups) / static_cast<double>(window);
  }
  return out;
}

SignalFrame regime_mask(const SignalFrame& up_frac, double theta) {
  SignalFrame out = missing_frame(up_frac.date, up_frac.values.size());
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    const double u = up_frac.values[j];
    if (!is_missing(u)) out.values[j] = u > theta ? 1.0 : 0.0;
  }
  return out;
}

SignalFrame edge_signal(const SignalFrame& base, const SignalFrame& mask) {
  if (base.date != mask.date || base.values.size() != mask.values.size())
    throw InvariantError("edge_signal: frames must share a date and universe");
  SignalFrame out = missing_frame(base.date, base.values.size());
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    const double b = base.values[j];
    const double m = mask.values[j];
    if (is_missing(b) || is_missing(m)) continue;
    out.values[j] = m == 0.0 ? 0.0 : b * m;
  }
  return out;
}

Matrix SignalCube::edge() const { return edge_with_mask(mask); }

Matrix SignalCube::edge_with_mask(const Matrix& custom_mask) const {
  if (custom_mask.rows() != base.rows() || custom_mask.cols() != base.cols())
    throw InvariantError("edge_with_mask: mask shape mismatch");
  Matrix out(base.rows(), base.cols());
  for (std::size_t t = 0; t < base.rows(); ++t) {
    for (std::size_t j = 0; j < base.cols(); ++j) {
      const double b = base(t, j);
      const double m = custom_mask(t, j);
      if (is_missing(b) || is_missing(m)) continue;
      out(t, j) = m == 0.0 ? 0.0 : b * m;
    }
  }
  return out;
}

Matrix SignalCube::ungated_edge() const { return base; }

SignalFrame SignalCube::frame(const Matrix& m, std::size_t row) const {
  auto r = m.row(row);
  return SignalFrame{dates.at(row), std::vector<double>(r.begin(), r.end())};
}

SignalCube compute_signal_cube(const PricePanel& panel, const ReturnPanel& returns, const SignalParams& params) {
  params.validate();
  const std::size_t nd = panel.n_dates();
  const std::size_t nt = panel.n_tickers();
  SignalCube cube;
  cube.dates = panel.calendar.dates;
  cube.value = Matrix(nd, nt);
  cube.reversal = Matrix(nd, nt);
  cube.base = Matrix(nd, nt);
  cube.up_fraction = Matrix(nd, nt);
  cube.mask = Matrix(nd, nt);

  auto store = [](Matrix& m, std::size_t t, const SignalFrame& f) { std::copy(f.values.begin(), f.values.end(), m.row(t).begin()); };
  for (std::size_t t = 0; t < nd; ++t) {
    const Date d = panel.calendar.dates[t];
    auto value = value_signal(panel, d);
    auto reversal = reversal_signal(returns, d, params.reversal_lookback);
    auto base = base_signal(value, reversal, params.alpha);
    auto up = up_fraction(returns, d, params.drift_window);
    auto mask = regime_mask(up, params.up_threshold);
    store(cube.value, t, value);
    store(cube.reversal, t, reversal);
    store(cube.base, t, base);
    store(cube.up_fraction, t, up);
    store(cube.mask, t, mask);
  }
  return cube;
}

}  // namespace driftgate

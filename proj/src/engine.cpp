#include "driftgate/engine.hpp"

#include <algorithm>

namespace driftgate {

std::string_view to_string(Execution e) { return e == Execution::Close ? "close" : "next_close"; }

Execution parse_execution(std::string_view s) {
  if (s == "next_close") return Execution::NextClose;
  if (s == "close") return Execution::Close;
  throw ConfigError("execution", "execution must be 'close' or 'next_close', got '" + std::string(s) + "'");
}

void CostModel::validate() const {
  if (!(rate_per_unit_traded >= 0.0))
    throw ConfigError("cost.rate_per_unit_traded", "cost.rate_per_unit_traded must be >= 0");
  if (!(slippage_per_trade >= 0.0))
    throw ConfigError("cost.slippage_per_trade", "cost.slippage_per_trade must be >= 0");
}

namespace {

std::vector<double> equal_weight_returns(const ReturnPanel& rp) {
  std::vector<double> out(rp.calendar.size() + 1, 0.0);
  for (std::size_t t = 0; t < rp.calendar.size(); ++t) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double r : rp.returns.row(t)) {
      if (is_missing(r)) continue;
      sum += r;
      ++n;
    }
    out[t + 1] = n == 0 ? 0.0 : sum / static_cast<double>(n);
  }
  return out;
}

}  // namespace

Market::Market(const PricePanel& panel)
    : panel_(&panel), returns_(compute_returns(panel)), benchmark_(equal_weight_returns(returns_)) {}

std::pair<std::size_t, std::size_t> Market::index_range(DateRange range) const {
  const auto& cal = panel_->calendar;
  return {cal.count_before(range.begin), cal.count_before(range.end)};
}

namespace {

EdgeRowSource matrix_rows(const Matrix& edge) {
  return [&edge](std::size_t t, std::vector<Position>& entries) {
    entries.clear();
    auto row = edge.row(t);
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!is_missing(row[j]) && row[j] != 0.0) entries.push_back({j, row[j]});
  };
}

const Matrix& checked_shape(const Market& market, const Matrix& edge) {
  if (edge.rows() != market.panel().n_dates() || edge.cols() != market.panel().n_tickers())
    throw InvariantError("WeightBook: edge matrix shape mismatch");
  return edge;
}

}  // namespace

WeightBook::WeightBook(const Market& market, const Matrix& edge, std::size_t first, std::size_t last,
                       Execution execution, const WeightOptions& options, bool keep_weights)
    : WeightBook(market, matrix_rows(checked_shape(market, edge)), first, last, execution, options, keep_weights) {}

WeightBook::WeightBook(const Market& market, const EdgeRowSource& edge, std::size_t first, std::size_t last,
                       Execution execution, const WeightOptions& options, bool keep_weights)
    : first_(first), last_(last), execution_(execution) {
  const std::size_t nd = market.panel().n_dates();
  if (first > last || last >= nd) throw InvariantError("WeightBook: bad formation range");

  const std::size_t len = last - first + 1;
  exposure_.resize(len);
  trade_.resize(len);
  pnl_.resize(len);
  if (keep_weights) weights_.resize(len);

  std::vector<Position> prev;
  std::vector<Position> cur;
  if (first > 0) {
    edge(first - 1, prev);
    positions_from_entries(prev, options);
  }

  for (std::size_t t = first; t <= last; ++t) {
    edge(t, cur);
    positions_from_entries(cur, options);
    double exposure = 0.0;
    for (const auto& p : cur) exposure += std::abs(p.weight);

    // sum |cur - prev| by merging the two ticker-sorted books.
    double traded = 0.0;
    auto a = prev.begin();
    auto b = cur.begin();
    while (a != prev.end() || b != cur.end()) {
      if (b == cur.end() || (a != prev.end() && a->ticker < b->ticker)) {
        traded += std::abs(a++->weight);
      } else if (a == prev.end() || b->ticker < a->ticker) {
        traded += std::abs(b++->weight);
      } else {
        traded += std::abs(b++->weight - a++->weight);
      }
    }

    double pnl = 0.0;
    const std::size_t realized = execution == Execution::NextClose ? t + 1 : t;
    if (!cur.empty() && realized >= 1 && realized < nd) {
      auto r = market.returns_at(realized);
      for (const auto& p : cur)
        if (!is_missing(r[p.ticker])) pnl += p.weight * r[p.ticker];
    }

    const std::size_t k = t - first;
    exposure_[k] = exposure;
    trade_[k] = traded;
    pnl_[k] = pnl;
    if (keep_weights) weights_[k] = WeightFrame{market.panel().calendar.dates[t], cur};
    std::swap(prev, cur);
  }
}

BacktestResult simulate(const Market& market, const WeightBook& book, std::size_t first, std::size_t last,
                        const ScaleFactor& scale, const CostModel& cost, const KillSwitchConfig& kill_switch,
                        const BacktestOptions& options) {
  if (first < book.first() || last > book.last() || first > last)
    throw InvariantError("simulate: range outside the weight book");
  const auto& dates = market.panel().calendar.dates;
  const auto bench_all = market.benchmark();
  const double s = scale.value;
  const double rate = cost.total_rate();
  const bool next_close = book.execution() == Execution::NextClose;

  BacktestResult res;
  res.scale_used = scale;
  const std::size_t n_real = next_close ? last - first : last - first + 1;
  res.dates.reserve(n_real);
  res.daily_returns.reserve(n_real);
  res.gross_returns.reserve(n_real);
  res.costs.reserve(n_real);
  res.turnover.reserve(n_real);
  res.equity.reserve(n_real + 1);
  res.equity.push_back(1.0);
  std::vector<double> bench;
  bench.reserve(n_real);
  const bool record = options.record_weights && book.has_weights();
  if (record) res.weights_history.reserve(last - first + 1);

  KillSwitchState state;
  double prev_exposure = 0.0;
  for (std::size_t t = first; t <= last; ++t) {
    const bool formed_active = state.active;
    double traded = 0.0;
    double exposure = 0.0;
    if (formed_active) {
      exposure = s * book.exposure(t);
      traded = t == first ? exposure : s * book.trade(t);
    } else {
      traded = prev_exposure;  // liquidation of the last live book, then nothing
    }
    if (record) {
      WeightFrame f{dates[t], {}};
      if (formed_active)
        for (const auto& p : book.weights(t).positions) f.positions.push_back({p.ticker, s * p.weight});
      res.weights_history.push_back(std::move(f));
    }
    prev_exposure = exposure;

    const std::size_t realized = next_close ? t + 1 : t;
    if (realized > last) break;

    const double gross = formed_active ? s * book.pnl(t) : 0.0;
    const double c = rate * traded;
    const double net = gross - c;
    res.dates.push_back(dates[realized]);
    res.gross_returns.push_back(gross);
    res.costs.push_back(c);
    res.daily_returns.push_back(net);
    res.turnover.push_back(traded);
    res.equity.push_back(res.equity.back() * (1.0 + net));
    bench.push_back(bench_all[realized]);

    if (kill_switch.enabled && state.active) {
      state = kill_switch_step(state, dates[realized], res.equity, res.daily_returns, bench, kill_switch,
                               options.target_vol);
      if (!state.active)
        res.kill_log.push_back({*state.triggered_on, *state.trigger_type, state.trigger_value, state.threshold});
    }
  }
  return res;
}

void check_warmup(const Market& market, std::size_t first, const SignalParams& params) {
  const auto need = static_cast<std::size_t>(params.warmup_days());
  if (first < need) {
    const auto& dates = market.panel().calendar.dates;
    const std::string at = first < dates.size() ? format_date(dates[first]) : std::string("range start");
    throw DataError("insufficient warm-up before " + at + ": need " + std::to_string(need) +
                    " trading days of history (drift_window + reversal_lookback), have " + std::to_string(first));
  }
}

BacktestResult run_backtest(const PricePanel& panel, const SignalParams& params, const ScaleFactor& scale,
                            const CostModel& cost, const KillSwitchConfig& kill_switch, DateRange range,
                            const BacktestOptions& options) {
  params.validate();
  cost.validate();
  if (kill_switch.enabled) kill_switch.validate();
  Market market(panel);
  auto [first, end] = market.index_range(range);
  if (first >= end) throw DataError("backtest range " + format_date(range.begin) + " .. " + format_date(range.end) +
                                    " contains no panel dates");
  check_warmup(market, first, params);
  const auto cube = compute_signal_cube(panel, market.returns(), params);
  WeightBook book(market, cube.edge(), first, end - 1, options.execution, options.weights, options.record_weights);
  return simulate(market, book, first, end - 1, scale, cost, kill_switch, options);
}

std::vector<double> benchmark_returns(const PricePanel& panel, DateRange range) {
  Market market(panel);
  auto [first, end] = market.index_range(range);
  auto all = market.benchmark();
  return {all.begin() + static_cast<std::ptrdiff_t>(first), all.begin() + static_cast<std::ptrdiff_t>(end)};
}

}  // namespace driftgate

#include "driftgate/validation.hpp"

#include <algorithm>
#include <array>

#include "driftgate/parallel.hpp"

namespace driftgate {

std::vector<WindowSpec> make_windows(const TradingCalendar& calendar, int train_years, int test_years,
                                     std::vector<Date> anchors) {
  if (train_years < 1) throw ConfigError("windows.train_years", "windows.train_years must be >= 1");
  if (test_years < 1) throw ConfigError("windows.test_years", "windows.test_years must be >= 1");
  if (anchors.empty()) throw ConfigError("windows.anchors", "windows.anchors must not be empty");
  if (calendar.size() < 2) throw DataError("calendar too short for walk-forward windows");
  std::sort(anchors.begin(), anchors.end());

  std::vector<WindowSpec> out;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const Date anchor = anchors[i];
    WindowSpec w;
    w.train_start = add_years(anchor, -train_years);
    w.train_end = anchor;
    w.test_start = anchor;
    w.test_end = add_years(anchor, test_years);
    w.label = std::to_string(i + 1);
    // A few days of slack so a window starting on a holiday is not rejected.
    if (w.train_start + std::chrono::days(7) < calendar.dates.front())
      throw DataError("anchor " + format_date(anchor) + " lacks " + std::to_string(train_years) +
                      " years of history (calendar starts " + format_date(calendar.dates.front()) + ")");
    if (calendar.count_before(w.test_start) == calendar.count_before(w.test_end))
      throw DataError("anchor " + format_date(anchor) + " has no test dates inside the calendar");
    if (!out.empty() && w.test_start < out.back().test_end)
      throw ConfigError("windows.anchors", "test ranges of anchors " + format_date(out.back().test_start) + " and " +
                                               format_date(anchor) + " overlap");
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

struct IndexWindow {
  std::size_t train_first, train_last, test_first, test_last;
};

IndexWindow to_indices(const Market& market, const WindowSpec& w) {
  auto [tf, te] = market.index_range({w.train_start, w.train_end});
  auto [sf, se] = market.index_range({w.test_start, w.test_end});
  if (tf + 1 >= te) throw DataError("window " + w.label + ": training range has fewer than 2 dates");
  if (sf >= se) throw DataError("window " + w.label + ": test range is empty");
  return {tf, te - 1, sf, se - 1};
}

template <class T>
void append(std::vector<T>& dst, const std::vector<T>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

std::vector<IndexWindow> index_windows(const Market& market, const std::vector<WindowSpec>& windows) {
  if (windows.empty()) throw ConfigError("windows.anchors", "walk-forward needs at least one window");
  std::vector<IndexWindow> idx;
  idx.reserve(windows.size());
  for (const auto& w : windows) idx.push_back(to_indices(market, w));
  return idx;
}

std::pair<std::size_t, std::size_t> span_of(const std::vector<IndexWindow>& idx) {
  std::size_t lo = idx.front().train_first;
  std::size_t hi = idx.front().test_last;
  for (const auto& i : idx) {
    lo = std::min({lo, i.train_first, i.test_first});
    hi = std::max({hi, i.train_last, i.test_last});
  }
  return {lo, hi};
}

}  // namespace

std::pair<std::size_t, std::size_t> walk_forward_span(const Market& market, const std::vector<WindowSpec>& windows) {
  return span_of(index_windows(market, windows));
}

WalkForwardReport run_walk_forward(const Market& market, const Matrix& edge, const SignalParams& params,
                                   const CostModel& cost, const KillSwitchConfig& kill_switch,
                                   const std::vector<WindowSpec>& windows, const WalkForwardOptions& options) {
  if (edge.rows() != market.panel().n_dates() || edge.cols() != market.panel().n_tickers())
    throw InvariantError("run_walk_forward: edge matrix shape mismatch");
  const EdgeRowSource rows = [&edge](std::size_t t, std::vector<Position>& entries) {
    entries.clear();
    auto row = edge.row(t);
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!is_missing(row[j]) && row[j] != 0.0) entries.push_back({j, row[j]});
  };
  return run_walk_forward(market, rows, params, cost, kill_switch, windows, options);
}

WalkForwardReport run_walk_forward(const Market& market, const EdgeRowSource& edge, const SignalParams& params,
                                   const CostModel& cost, const KillSwitchConfig& kill_switch,
                                   const std::vector<WindowSpec>& windows, const WalkForwardOptions& options) {
  if (windows.empty()) throw ConfigError("windows.anchors", "walk-forward needs at least one window");
  cost.validate();
  if (kill_switch.enabled) kill_switch.validate();

  std::vector<IndexWindow> idx;
  idx.reserve(windows.size());
  for (const auto& w : windows) {
    try {
      idx.push_back(to_indices(market, w));
      check_warmup(market, idx.back().train_first, params);
    } catch (const DataError& e) {
      throw DataError("window " + w.label + ": " + e.what());
    }
  }
  const auto [lo, hi] = span_of(idx);
  const WeightBook book(market, edge, lo, hi, options.backtest.execution, options.backtest.weights,
                        options.backtest.record_weights);

  BacktestOptions train_opts = options.backtest;
  train_opts.record_weights = false;
  KillSwitchConfig no_switch = kill_switch;
  no_switch.enabled = false;

  WalkForwardReport report;
  report.windows.resize(windows.size());
  auto bench_all = market.benchmark();
  const auto& cal = market.panel().calendar;

  parallel_for(windows.size(), options.threads, [&](std::size_t k) {
    const auto& w = windows[k];
    const auto& i = idx[k];
    WindowResult& out = report.windows[k];
    out.spec = w;
    try {
      const auto train = simulate(market, book, i.train_first, i.train_last, ScaleFactor{}, cost, no_switch, train_opts);
      out.train_sharpe = sharpe_ratio(train.daily_returns);
      out.scale = compute_scale_factor(train.daily_returns, options.targets);
      out.test = simulate(market, book, i.test_first, i.test_last, out.scale, cost, kill_switch, options.backtest);
      if (out.test.daily_returns.empty()) throw DataError("test range realizes no returns");
      out.benchmark.reserve(out.test.dates.size());
      for (Date d : out.test.dates) out.benchmark.push_back(bench_all[*cal.index_of(d)]);
      out.test_stats = perf_stats(out.test.daily_returns, out.benchmark);
    } catch (const DataError& e) {
      throw DataError("window " + w.label + ": " + e.what());
    }
  });

  BacktestResult& c = report.combined;
  c.equity.push_back(1.0);
  double strat_wealth = kReportInitialWealth;
  double bench_wealth = kReportInitialWealth;
  for (const auto& wr : report.windows) {
    append(c.dates, wr.test.dates);
    append(c.daily_returns, wr.test.daily_returns);
    append(c.gross_returns, wr.test.gross_returns);
    append(c.costs, wr.test.costs);
    append(c.turnover, wr.test.turnover);
    append(c.weights_history, wr.test.weights_history);
    append(c.kill_log, wr.test.kill_log);
    append(report.combined_benchmark, wr.benchmark);
    for (double r : wr.test.daily_returns) {
      c.equity.push_back(c.equity.back() * (1.0 + r));
      strat_wealth *= 1.0 + r;
    }
    for (double r : wr.benchmark) bench_wealth *= 1.0 + r;
    report.wealth.push_back({format_date(wr.test.dates.back()), strat_wealth, bench_wealth});
  }
  report.combined_stats = perf_stats(c.daily_returns, report.combined_benchmark);
  report.benchmark_stats = perf_stats(report.combined_benchmark);
  return report;
}

WalkForwardReport run_walk_forward(const PricePanel& panel, const SignalParams& params, const CostModel& cost,
                                   const KillSwitchConfig& kill_switch, const std::vector<WindowSpec>& windows,
                                   const WalkForwardOptions& options) {
  params.validate();
  const Market market(panel);
  const auto cube = compute_signal_cube(panel, market.returns(), params);
  return run_walk_forward(market, cube.edge(), params, cost, kill_switch, windows, options);
}

const SweepCell* SweepRow::base() const {
  for (const auto& c : cells)
    if (c.offset == 0.0) return &c;
  return nullptr;
}

int perturbed_window(int base, double offset) {
  return std::max(1, static_cast<int>(std::lround(static_cast<double>(base) * (1.0 + offset))));
}

SensitivityTable parameter_sweep(const PricePanel& panel, const SignalParams& base, const CostModel& cost,
                                 const KillSwitchConfig& kill_switch, const std::vector<WindowSpec>& windows,
                                 const WalkForwardOptions& options, const std::vector<double>& offsets) {
  base.validate();
  const Market market(panel);

  enum Param { Window, Threshold, Alpha, Cost };
  static constexpr std::array<const char*, 4> kNames{"Drift Window", "Up Threshold", "Value Weight", "Transaction Cost"};

  struct Job {
    Param param;
    std::size_t cell;
    SignalParams params;
    CostModel cost;
    double value;
  };
  std::vector<Job> jobs;
  for (int p = Window; p <= Cost; ++p) {
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      const double o = offsets[k];
      Job job{static_cast<Param>(p), k, base, cost, 0.0};
      switch (job.param) {
        case Window:
          job.params.drift_window = perturbed_window(base.drift_window, o);
          job.value = job.params.drift_window;
          break;
        case Threshold:
          job.params.up_threshold = base.up_threshold * (1.0 + o);
          job.value = job.params.up_threshold;
          break;
        case Alpha:
          job.params.alpha = std::clamp(base.alpha * (1.0 + o), 0.0, 1.0);
          job.value = job.params.alpha;
          break;
        case Cost:
          job.cost.rate_per_unit_traded = cost.rate_per_unit_traded * (1.0 + o);
          job.value = job.cost.rate_per_unit_traded;
          break;
      }
      jobs.push_back(job);
    }
  }

  SensitivityTable table;
  table.offsets = offsets;
  for (const char* name : kNames) table.rows.push_back({name, std::vector<SweepCell>(offsets.size())});

  WalkForwardOptions inner = options;
  inner.threads = 1;
  inner.backtest.record_weights = false;
  parallel_for(jobs.size(), options.threads, [&](std::size_t k) {
    const Job& job = jobs[k];
    const auto cube = compute_signal_cube(panel, market.returns(), job.params);
    std::optional<double> sharpe;
    try {
      sharpe = run_walk_forward(market, cube.edge(), job.params, job.cost, kill_switch, windows, inner)
                   .combined_stats.sharpe;
    } catch (const DataError&) {
      // A perturbation that leaves a training window flat has no scale factor.
    }
    table.rows[job.param].cells[job.cell] = {offsets[job.cell], job.value, sharpe};
  });
  return table;
}

DecompositionTable attribution_decomposition(const PricePanel& panel, const SignalParams& params,
                                             const CostModel& cost, const KillSwitchConfig& kill_switch,
                                             const std::vector<WindowSpec>& windows,
                                             const WalkForwardOptions& options) {
  params.validate();
  const Market market(panel);
  SignalParams value_only = params;
  value_only.alpha = 1.0;
  SignalParams reversal_only = params;
  reversal_only.alpha = 0.0;

  WalkForwardOptions inner = options;
  inner.threads = 1;
  inner.backtest.record_weights = false;

  DecompositionTable table;
  std::array<AttributionRun*, 4> runs{&table.value_only, &table.reversal_only, &table.ungated, &table.gated};
  static constexpr std::array<const char*, 4> kNames{"Value alone in regime", "Reversal alone in regime",
                                                     "Combined without regime", "Combined with regime"};
  parallel_for(runs.size(), options.threads, [&](std::size_t k) {
    const SignalParams& p = k == 0 ? value_only : (k == 1 ? reversal_only : params);
    const auto cube = compute_signal_cube(panel, market.returns(), p);
    const Matrix edge = k == 2 ? cube.ungated_edge() : cube.edge();
    const auto report = run_walk_forward(market, edge, p, cost, kill_switch, windows, inner);
    *runs[k] = {kNames[k], report.combined_sharpe(), report.combined_stats.ann_return};
  });
  table.interaction_sharpe =
      table.gated.sharpe - (table.value_only.sharpe + table.reversal_only.sharpe - table.ungated.sharpe);
  table.interaction_return =
      table.gated.ann_return - (table.value_only.ann_return + table.reversal_only.ann_return - table.ungated.ann_return);
  return table;
}

}  // namespace driftgate

#include "driftgate/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace driftgate {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  std::string s = buf;
  if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) {
    if (!s.empty() && s.front() == '-') s.erase(0, 1);  // no "-0.00"
  }
  return s;
}

std::string fixed(double v, int decimals) {
  char spec[16];
  std::snprintf(spec, sizeof spec, "%%.%df", decimals);
  return fmt(spec, v);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::optional<double> ratio(std::optional<double> a, std::optional<double> b) {
  if (!a || !b || *b == 0.0) return std::nullopt;
  return *a / *b;
}

Cell ratio_cell(std::optional<double> a, std::optional<double> b) {
  auto r = ratio(a, b);
  if (!r) return label("N/A");
  return multiple(*r);
}

std::string year_of(Date d) { return format_date(d).substr(0, 4); }

std::string period(Date begin, Date end) { return year_of(begin) + "-" + year_of(end); }

std::string offset_heading(double o) {
  if (o == 0.0) return "Base Case";
  return (o > 0 ? "+" : "-") + fixed(std::abs(o) * 100.0, 0) + "%";
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

Cell label(std::string s) { return {s, s}; }

Cell number(double v, int decimals) { return {fixed(v, decimals), format_double(v)}; }

Cell percent(double fraction, int decimals, bool sign) {
  std::string t = fixed(fraction * 100.0, decimals);
  if (sign && fraction > 0.0 && t.find_first_not_of("0.") != std::string::npos) t = "+" + t;
  return {t + "%", format_double(fraction)};
}

Cell multiple(double v, int decimals) { return {fixed(v, decimals) + "x", format_double(v)}; }

Cell money(double v) {
  std::string digits = fixed(v, 0);
  std::string out;
  const bool neg = !digits.empty() && digits.front() == '-';
  if (neg) digits.erase(0, 1);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return {(neg ? "-$" : "$") + out, format_double(v)};
}

Cell optional_number(std::optional<double> v, int decimals) {
  if (!v) return {"N/A", ""};
  return number(*v, decimals);
}

std::string Table::render() const {
  std::vector<std::size_t> width(columns.size(), 0);
  for (std::size_t c = 0; c < columns.size(); ++c) width[c] = columns[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].text.size());

  auto line = [&](auto&& get) {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const std::string s = get(c);
      const std::string pad(width[c] - std::min(width[c], s.size()), ' ');
      if (c > 0) out += "  ";
      out += c == 0 ? s + pad : pad + s;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };

  std::string out;
  if (!title.empty()) out += title + "\n";
  out += line([&](std::size_t c) { return columns[c]; });
  std::size_t total = 0;
  for (auto w : width) total += w;
  out += std::string(total + 2 * (columns.empty() ? 0 : columns.size() - 1), '-') + "\n";
  for (const auto& r : rows) out += line([&](std::size_t c) { return c < r.size() ? r[c].text : std::string(); });
  return out;
}

std::string hash_header(const std::string& hash) { return "# config-hash: " + hash; }

void write_csv(const std::filesystem::path& path, const std::string& hash, const Table& table) {
  auto out = open_out(path);
  out << hash_header(hash) << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << csv_escape(table.columns[c]);
  out << '\n';
  for (const auto& r : table.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << csv_escape(r[c].csv);
    out << '\n';
  }
}

void write_text(const std::filesystem::path& path, const std::string& hash, const std::string& body) {
  auto out = open_out(path);
  out << hash_header(hash) << '\n' << body;
}

Table per_window_table(const WalkForwardReport& report) {
  Table t{"Walk-forward windows",
          {"Window", "Training Period", "Test Period", "Train Sharpe", "Scale Factor", "Test Sharpe", "Test Return",
           "Test Vol", "Test MaxDD", "Test Return (Arith.)"},
          {}};
  for (const auto& w : report.windows) {
    const auto& s = w.test_stats;
    t.rows.push_back({label(w.spec.label), label(period(w.spec.train_start, w.spec.train_end)),
                      label(period(w.spec.test_start, w.spec.test_end)), optional_number(w.train_sharpe, 2),
                      number(w.scale.value, 3), optional_number(s.sharpe, 2), percent(s.ann_return),
                      s.ann_vol ? percent(*s.ann_vol) : label("N/A"), percent(s.max_drawdown),
                      percent(s.ann_return_arithmetic)});
  }
  return t;
}

Table combined_table(const WalkForwardReport& report) {
  const auto& s = report.combined_stats;
  const auto& b = report.benchmark_stats;
  Table t{"Combined out-of-sample performance", {"Metric", "Strategy", "Benchmark", "Ratio"}, {}};
  t.rows.push_back({label("Sharpe Ratio (OOS)"), optional_number(s.sharpe, 2), optional_number(b.sharpe, 2),
                    ratio_cell(s.sharpe, b.sharpe)});
  t.rows.push_back({label("Annualized Return"), percent(s.ann_return), percent(b.ann_return),
                    ratio_cell(s.ann_return, b.ann_return)});
  t.rows.push_back({label("Annualized Return (Arith.)"), percent(s.ann_return_arithmetic),
                    percent(b.ann_return_arithmetic), ratio_cell(s.ann_return_arithmetic, b.ann_return_arithmetic)});
  t.rows.push_back({label("Annualized Volatility"), s.ann_vol ? percent(*s.ann_vol) : label("N/A"),
                    b.ann_vol ? percent(*b.ann_vol) : label("N/A"), ratio_cell(s.ann_vol, b.ann_vol)});
  t.rows.push_back({label("Total OOS Return (" + std::to_string(report.windows.size()) + " test periods)"),
                    percent(s.total_return, 1, true), percent(b.total_return, 1, true),
                    ratio_cell(s.total_return, b.total_return)});
  t.rows.push_back({label("Wealth Multiple (OOS)"), multiple(s.wealth_multiple), multiple(b.wealth_multiple),
                    ratio_cell(s.wealth_multiple, b.wealth_multiple)});
  t.rows.push_back({label("Max Drawdown"), percent(s.max_drawdown), percent(b.max_drawdown),
                    ratio_cell(s.max_drawdown, b.max_drawdown)});
  t.rows.push_back({label("Winning Days"), percent(s.win_rate, 0), percent(b.win_rate, 0),
                    ratio_cell(s.win_rate, b.win_rate)});
  t.rows.push_back({label("Best Day"), percent(s.best_day, 1, true), percent(b.best_day, 1, true),
                    ratio_cell(s.best_day, b.best_day)});
  t.rows.push_back({label("Worst Day"), percent(s.worst_day, 1, true), percent(b.worst_day, 1, true),
                    ratio_cell(s.worst_day, b.worst_day)});
  t.rows.push_back({label("Skewness"), optional_number(s.skewness, 2), optional_number(b.skewness, 2), label("N/A")});
  t.rows.push_back({label("Correlation"), optional_number(s.correlation_vs_benchmark, 2), number(1.0, 2),
                    label("N/A")});
  return t;
}

Table wealth_table(const WalkForwardReport& report) {
  Table t{"Wealth evolution", {"Period End", "Strategy", "Benchmark", "Outperformance"}, {}};
  for (std::size_t k = 0; k < report.wealth.size(); ++k) {
    const auto& w = report.wealth[k];
    t.rows.push_back({label("Year " + std::to_string(k + 1) + " (" + w.period_end.substr(0, 4) + ")"),
                      money(w.strategy), money(w.benchmark), multiple(w.strategy / w.benchmark)});
  }
  return t;
}

Table kill_switch_table(const WalkForwardReport& report, const KillSwitchConfig& config, double target_vol) {
  // Full sample: the concatenated OOS path replayed through one switch.
  std::vector<TriggerType> full;
  if (config.enabled && !report.combined.daily_returns.empty()) {
    const auto& c = report.combined;
    KillSwitchState state;
    for (std::size_t i = 0; i < c.daily_returns.size() && state.active; ++i) {
      state = kill_switch_step(state, c.dates[i], std::span(c.equity).first(i + 2),
                               std::span(c.daily_returns).first(i + 1),
                               std::span(report.combined_benchmark).first(i + 1), config, target_vol);
    }
    if (state.trigger_type) full.push_back(*state.trigger_type);
  }

  const std::size_t n = report.windows.size();
  Table t{"Kill-switch", {"Trigger Type", "Threshold", "Test Windows Triggered", "Full Sample Triggered"}, {}};
  auto row = [&](TriggerType type, std::string name, std::string threshold) {
    std::size_t hit = 0;
    for (const auto& w : report.windows)
      for (const auto& k : w.test.kill_log)
        if (k.type == type) ++hit;
    const bool any = std::find(full.begin(), full.end(), type) != full.end();
    t.rows.push_back({label(std::move(name)), label(std::move(threshold)),
                      {std::to_string(hit) + " of " + std::to_string(n), std::to_string(hit)},
                      {any ? "Yes" : "No", any ? "true" : "false"}});
  };
  row(TriggerType::AbsoluteDrawdown, "Absolute Drawdown", percent(config.abs_dd_threshold, 0).text);
  row(TriggerType::RollingLoss, "Rolling " + std::to_string(config.rolling_window) + "-day Loss",
      percent(config.rolling_loss_threshold, 0).text);
  row(TriggerType::VolSpike, "Volatility Spike", fixed(config.vol_spike_multiple, 1) + "x target");
  row(TriggerType::CorrelationBreak, "Correlation Break", "|rho| > " + fixed(config.corr_threshold, 2));
  return t;
}

Table sensitivity_table(const SensitivityTable& sweep) {
  // Base Case first, then the perturbations in grid order.
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < sweep.offsets.size(); ++k)
    if (sweep.offsets[k] == 0.0) order.push_back(k);
  for (std::size_t k = 0; k < sweep.offsets.size(); ++k)
    if (sweep.offsets[k] != 0.0) order.push_back(k);

  Table t{"Parameter sensitivity (combined OOS Sharpe)", {"Parameter"}, {}};
  for (std::size_t k : order) t.columns.push_back(offset_heading(sweep.offsets[k]));
  t.columns.push_back("Range");

  for (const auto& row : sweep.rows) {
    std::string name = row.parameter;
    auto value_text = [&](double v) {
      if (row.parameter == "Drift Window") return fixed(v, 0) + "d";
      if (row.parameter == "Transaction Cost") return fixed(v * 1e4, 2) + "bp";
      return fixed(v, 2);
    };
    if (row.parameter == "Drift Window") name += " (W)";
    if (row.parameter == "Up Threshold") name += " (theta)";
    if (row.parameter == "Value Weight") name += " (alpha)";
    std::vector<Cell> cells{label(name)};
    std::optional<double> lo, hi;
    for (std::size_t k : order) {
      const auto& c = row.cells[k];
      const std::string s = c.sharpe ? fixed(*c.sharpe, 1) : "N/A";
      cells.push_back({s + " (" + value_text(c.value) + ")", c.sharpe ? format_double(*c.sharpe) : ""});
      if (!c.sharpe) continue;
      lo = lo ? std::min(*lo, *c.sharpe) : *c.sharpe;
      hi = hi ? std::max(*hi, *c.sharpe) : *c.sharpe;
    }
    if (lo)
      cells.push_back({fixed(*lo, 1) + " to " + fixed(*hi, 1), format_double(*hi - *lo)});
    else
      cells.push_back({"N/A", ""});
    t.rows.push_back(std::move(cells));
  }
  return t;
}

Table decomposition_table(const DecompositionTable& d) {
  Table t{"Return decomposition", {"Component", "Sharpe Contribution", "Return Contribution", "% of Total"}, {}};
  auto share = [&](double r) -> Cell {
    if (d.gated.ann_return == 0.0) return label("N/A");
    return percent(r / d.gated.ann_return, 0);
  };
  t.rows.push_back({label("Value alone in regime"), number(d.value_only.sharpe, 2), percent(d.value_only.ann_return),
                    share(d.value_only.ann_return)});
  t.rows.push_back({label("Reversal alone in regime"), number(d.reversal_only.sharpe, 2),
                    percent(d.reversal_only.ann_return), share(d.reversal_only.ann_return)});
  t.rows.push_back({label("Interaction Effect"), number(d.interaction_sharpe, 2), percent(d.interaction_return),
                    share(d.interaction_return)});
  t.rows.push_back({label("Combined without regime"), number(d.ungated.sharpe, 2), percent(d.ungated.ann_return),
                    label("---")});
  t.rows.push_back({label("Combined with regime"), number(d.gated.sharpe, 2), percent(d.gated.ann_return),
                    share(d.gated.ann_return)});
  return t;
}

Table capacity_table(const std::vector<CapacityPoint>& points) {
  Table t{"Capacity", {"AUM Level", "Daily Volume %", "Impact (bp)", "Net Sharpe", "Annual Return", "Viability"}, {}};
  for (const auto& p : points) {
    std::string aum;
    if (p.aum >= 1e9) aum = "$" + fixed(p.aum / 1e9, p.aum / 1e9 == std::floor(p.aum / 1e9) ? 0 : 1) + "B";
    else aum = "$" + fixed(p.aum / 1e6, p.aum / 1e6 == std::floor(p.aum / 1e6) ? 0 : 1) + "M";
    t.rows.push_back({{aum, format_double(p.aum)}, percent(p.participation, 1), number(p.impact_bp, 1),
                      number(p.net_sharpe, 2), percent(p.net_ann_return), label(p.viability)});
  }
  return t;
}

Table stress_table(const std::vector<TrialSummary>& trials, const StressReport* stress) {
  Table t{"Randomization and stress tests", {"Test Type", "Specification", "Result", "Statistical Significance"}, {}};
  for (const auto& tr : trials) {
    if (tr.sharpes.empty()) continue;
    std::vector<double> sorted = tr.sharpes;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    const std::string p = "p = " + fixed(tr.p_value, 4);
    const std::string count = std::to_string(n);
    switch (tr.mode) {
      case TrialMode::RandomRegime:
      case TrialMode::RandomRegimeBlock: {
        const std::string spec = tr.mode == TrialMode::RandomRegime ? "Matched statistics" : "Block-shuffled regimes";
        t.rows.push_back({label(count + " Random Regimes"), label(spec),
                          {"Best Sharpe: " + fixed(sorted.back(), 2), format_double(sorted.back())},
                          {p, format_double(tr.p_value)}});
        t.rows.push_back({label(""), label(""), {"Median: " + fixed(median, 2), format_double(median)}, label("")});
        break;
      }
      case TrialMode::ShuffledSignals:
        t.rows.push_back({label("Random Stock Selection"), label("Shuffled signals"),
                          {"Median Sharpe: " + fixed(median, 2), format_double(median)},
                          {p, format_double(tr.p_value)}});
        break;
    }
  }
  if (stress) {
    const double base = stress->base.sharpe;
    for (const auto* s : {&stress->noise, &stress->cost, &stress->slippage, &stress->crisis}) {
      std::string result = "Sharpe: " + fixed(s->sharpe, 2);
      if (s == &stress->noise) result += " (from " + fixed(base, 2) + ")";
      const std::string verdict = s->sharpe > 0.0 ? "Positive" : "Not positive";
      t.rows.push_back({label(s->test_type), label(s->specification), {result, format_double(s->sharpe)},
                        label(verdict)});
    }
  }
  return t;
}

Table daily_table(const BacktestResult& r, std::span<const double> benchmark) {
  Table t{"", {"date", "gross_return", "cost", "net_return", "turnover", "equity", "benchmark_return"}, {}};
  for (std::size_t i = 0; i < r.daily_returns.size(); ++i) {
    const double b = i < benchmark.size() ? benchmark[i] : kMissing;
    t.rows.push_back({label(format_date(r.dates[i])), number(r.gross_returns[i], 6), number(r.costs[i], 8),
                      number(r.daily_returns[i], 6), number(r.turnover[i], 6), number(r.equity[i + 1], 6),
                      is_missing(b) ? label("") : number(b, 6)});
  }
  return t;
}

Table weights_table(const BacktestResult& r, const std::vector<std::string>& tickers) {
  Table t{"", {"date", "ticker", "weight"}, {}};
  for (const auto& f : r.weights_history) {
    const std::string d = format_date(f.date);
    for (const auto& p : f.positions) t.rows.push_back({label(d), label(tickers.at(p.ticker)), number(p.weight, 6)});
  }
  return t;
}

Table kill_log_table(const BacktestResult& r) {
  Table t{"", {"date", "trigger", "value", "threshold"}, {}};
  for (const auto& k : r.kill_log)
    t.rows.push_back({label(format_date(k.date)), label(std::string(to_string(k.type))), number(k.value, 6),
                      number(k.threshold, 6)});
  return t;
}

Table trials_table(const std::vector<double>& sharpes) {
  Table t{"", {"trial", "sharpe"}, {}};
  for (std::size_t i = 0; i < sharpes.size(); ++i)
    t.rows.push_back({label(std::to_string(i)), number(sharpes[i], 4)});
  return t;
}

void write_walk_forward(const std::filesystem::path& dir, const std::string& hash, const WalkForwardReport& report,
                        const std::vector<std::string>& tickers, const KillSwitchConfig& kill_switch,
                        double target_vol) {
  write_csv(dir / "per-window.csv", hash, per_window_table(report));
  write_csv(dir / "combined.csv", hash, combined_table(report));
  write_csv(dir / "wealth.csv", hash, wealth_table(report));
  write_csv(dir / "killlog.csv", hash, kill_log_table(report.combined));
  write_csv(dir / "killswitch.csv", hash, kill_switch_table(report, kill_switch, target_vol));
  write_csv(dir / "daily.csv", hash, daily_table(report.combined, report.combined_benchmark));
  write_csv(dir / "weights.csv", hash, weights_table(report.combined, tickers));
}

}  // namespace driftgate

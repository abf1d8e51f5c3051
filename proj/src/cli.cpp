#include "driftgate/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "driftgate/config.hpp"
#include "driftgate/report.hpp"

namespace driftgate {

namespace {

struct Context {
  RunConfig config;
  std::string hash;
  std::filesystem::path dir;
  PricePanel panel;
  std::vector<WindowSpec> windows;
};

PricePanel load_data(const RunConfig& c) {
  if (c.data.source.empty())
    throw ConfigError("data.source", "data.source is required: a panel file path or \"synthetic\"");
  if (c.data.is_synthetic()) {
    SyntheticMarketConfig s = c.data.synthetic;
    s.seed = c.synthetic_seed();
    return generate_synthetic(s);
  }
  return load_panel(c.data.source, c.data.columns);
}

std::string join(const std::vector<Table>& tables) {
  std::string out;
  for (std::size_t i = 0; i < tables.size(); ++i) out += (i ? "\n" : "") + tables[i].render();
  return out;
}

void finish(Context& ctx, std::ostream& out, const std::string& body) {
  write_text(ctx.dir / "summary.txt", ctx.hash, body);
  out << body;
}

WalkForwardReport walk_forward(const Context& ctx) {
  const auto& c = ctx.config;
  return run_walk_forward(ctx.panel, c.signal, c.cost, c.kill_switch, ctx.windows, c.walk_forward_options());
}

void write_wf(const Context& ctx, const WalkForwardReport& wf) {
  write_walk_forward(ctx.dir, ctx.hash, wf, ctx.panel.tickers, ctx.config.kill_switch, ctx.config.scale.vol_cap);
}

std::vector<Table> wf_tables(const Context& ctx, const WalkForwardReport& wf) {
  return {per_window_table(wf), combined_table(wf), wealth_table(wf),
          kill_switch_table(wf, ctx.config.kill_switch, ctx.config.scale.vol_cap)};
}

TrialSummary run_trials(const Context& ctx, const TrialRunner& runner, TrialConfig tc, double true_sharpe) {
  TrialSummary s{tc.mode, runner.run_trials(tc, ctx.config.threads), true_sharpe, 0.0};
  s.p_value = permutation_pvalue(true_sharpe, s.sharpes);
  return s;
}

std::string trial_lines(const TrialSummary& s) {
  return std::string("mode: ") + std::string(to_string(s.mode)) + "\n" + "trials: " + std::to_string(s.sharpes.size()) +
         "\n" + "true sharpe: " + format_double(s.true_sharpe) + "\n" + "pvalue: " + format_double(s.p_value) + "\n";
}

void cmd_synth(Context& ctx, std::ostream& out) {
  save_panel(ctx.panel, ctx.dir / "panel.csv", ctx.config.data.columns.delimiter, "config-hash: " + ctx.hash);
  Table t{"Synthetic panel", {"Field", "Value"}, {}};
  t.rows.push_back({label("Tickers"), label(std::to_string(ctx.panel.n_tickers()))});
  t.rows.push_back({label("Dates"), label(std::to_string(ctx.panel.n_dates()))});
  t.rows.push_back({label("First Date"), label(format_date(ctx.panel.calendar.dates.front()))});
  t.rows.push_back({label("Last Date"), label(format_date(ctx.panel.calendar.dates.back()))});
  t.rows.push_back({label("Seed"), label(std::to_string(ctx.config.synthetic_seed()))});
  finish(ctx, out, t.render());
}

void cmd_backtest(Context& ctx, std::ostream& out, const std::string& start, const std::string& end, double scale) {
  const auto& c = ctx.config;
  const auto& dates = ctx.panel.calendar.dates;
  DateRange range;
  const auto warm = static_cast<std::size_t>(c.signal.warmup_days());
  auto flag_date = [](const std::string& flag, const std::string& text) {
    try {
      return parse_date(text);
    } catch (const DataError&) {
      throw ConfigError(flag, flag + " expects a date (YYYY-MM-DD), got '" + text + "'");
    }
  };
  if (!start.empty()) range.begin = flag_date("--start", start);
  else if (warm < dates.size()) range.begin = dates[warm];
  else throw DataError("panel has " + std::to_string(dates.size()) + " dates, fewer than the warm-up of " +
                       std::to_string(warm));
  range.end = end.empty() ? dates.back() + std::chrono::days(1) : flag_date("--end", end);
  if (!(scale > 0.0)) throw ConfigError("--scale", "--scale must be > 0");

  BacktestOptions opts = c.walk_forward_options().backtest;
  const auto result = run_backtest(ctx.panel, c.signal, ScaleFactor{scale, kMissing, kMissing}, c.cost,
                                   c.kill_switch, range, opts);
  if (result.daily_returns.empty()) throw DataError("backtest range realizes no returns");
  const Market market(ctx.panel);
  const auto bench_all = market.benchmark();
  std::vector<double> bench;
  for (Date d : result.dates) bench.push_back(bench_all[*ctx.panel.calendar.index_of(d)]);
  const auto s = perf_stats(result.daily_returns, bench);
  const auto b = perf_stats(bench);

  write_csv(ctx.dir / "daily.csv", ctx.hash, daily_table(result, bench));
  write_csv(ctx.dir / "weights.csv", ctx.hash, weights_table(result, ctx.panel.tickers));
  write_csv(ctx.dir / "killlog.csv", ctx.hash, kill_log_table(result));

  Table t{"Backtest " + format_date(result.dates.front()) + " to " + format_date(result.dates.back()),
          {"Metric", "Strategy", "Benchmark"},
          {}};
  t.rows.push_back({label("Sharpe Ratio"), optional_number(s.sharpe, 2), optional_number(b.sharpe, 2)});
  t.rows.push_back({label("Annualized Return"), percent(s.ann_return), percent(b.ann_return)});
  t.rows.push_back({label("Annualized Volatility"), s.ann_vol ? percent(*s.ann_vol) : label("N/A"),
                    b.ann_vol ? percent(*b.ann_vol) : label("N/A")});
  t.rows.push_back({label("Max Drawdown"), percent(s.max_drawdown), percent(b.max_drawdown)});
  t.rows.push_back({label("Total Return"), percent(s.total_return, 1, true), percent(b.total_return, 1, true)});
  t.rows.push_back({label("Winning Days"), percent(s.win_rate, 0), percent(b.win_rate, 0)});
  t.rows.push_back({label("Kill-switch Events"), label(std::to_string(result.kill_log.size())), label("")});
  write_csv(ctx.dir / "combined.csv", ctx.hash, t);
  finish(ctx, out, t.render());
}

void cmd_walkforward(Context& ctx, std::ostream& out) {
  const auto wf = walk_forward(ctx);
  write_wf(ctx, wf);
  finish(ctx, out, join(wf_tables(ctx, wf)));
}

void cmd_sweep(Context& ctx, std::ostream& out) {
  const auto& c = ctx.config;
  const auto sweep =
      parameter_sweep(ctx.panel, c.signal, c.cost, c.kill_switch, ctx.windows, c.walk_forward_options(), c.sweep_offsets);
  const auto t = sensitivity_table(sweep);
  write_csv(ctx.dir / "sensitivity.csv", ctx.hash, t);
  finish(ctx, out, t.render());
}

void cmd_attribution(Context& ctx, std::ostream& out) {
  const auto& c = ctx.config;
  const auto d = attribution_decomposition(ctx.panel, c.signal, c.cost, c.kill_switch, ctx.windows,
                                           c.walk_forward_options());
  const auto t = decomposition_table(d);
  write_csv(ctx.dir / "decomposition.csv", ctx.hash, t);
  finish(ctx, out, t.render());
}

void cmd_randomize(Context& ctx, std::ostream& out) {
  const auto& c = ctx.config;
  const TrialRunner runner(ctx.panel, c.signal, c.cost, c.kill_switch, ctx.windows, c.walk_forward_options());
  const auto s = run_trials(ctx, runner, c.trial_config(), runner.true_sharpe());
  write_csv(ctx.dir / "trials.csv", ctx.hash, trials_table(s.sharpes));
  finish(ctx, out, trial_lines(s) + "\n" + stress_table({s}, nullptr).render());
}

StressReport stress(const Context& ctx, const WalkForwardReport& wf) {
  const auto& c = ctx.config;
  return stress_run(wf.combined, ctx.panel, c.signal, c.cost, c.kill_switch, ctx.windows, c.robustness.stress,
                    c.impact_model(), c.stress_seed(), c.walk_forward_options());
}

void cmd_stress(Context& ctx, std::ostream& out) {
  const auto wf = walk_forward(ctx);
  const auto st = stress(ctx, wf);
  const auto t = stress_table({}, &st);
  write_csv(ctx.dir / "stress.csv", ctx.hash, t);
  finish(ctx, out, "base sharpe: " + format_double(st.base.sharpe) + "\n\n" + t.render());
}

std::vector<CapacityPoint> capacity(const Context& ctx, const WalkForwardReport& wf) {
  const auto& c = ctx.config;
  return capacity_curve(wf.combined, ctx.panel, c.capacity.aum_levels, c.capacity.adv_per_name, c.impact_model(),
                        c.cost);
}

std::string impact_line(const RunConfig& c) {
  const auto m = c.impact_model();
  return "impact model: " + format_double(m.coefficient_bp) + " bp x participation^" + format_double(m.exponent) + "\n";
}

void cmd_capacity(Context& ctx, std::ostream& out) {
  const auto wf = walk_forward(ctx);
  const auto t = capacity_table(capacity(ctx, wf));
  write_csv(ctx.dir / "capacity.csv", ctx.hash, t);
  finish(ctx, out, impact_line(ctx.config) + "\n" + t.render());
}

void cmd_report(Context& ctx, std::ostream& out) {
  const auto& c = ctx.config;
  const auto wf = walk_forward(ctx);
  write_wf(ctx, wf);
  auto tables = wf_tables(ctx, wf);

  const auto sweep =
      parameter_sweep(ctx.panel, c.signal, c.cost, c.kill_switch, ctx.windows, c.walk_forward_options(), c.sweep_offsets);
  tables.push_back(sensitivity_table(sweep));
  write_csv(ctx.dir / "sensitivity.csv", ctx.hash, tables.back());

  const TrialRunner runner(ctx.panel, c.signal, c.cost, c.kill_switch, ctx.windows, c.walk_forward_options());
  const double truth = runner.true_sharpe();
  std::vector<TrialSummary> trials{run_trials(ctx, runner, c.trial_config(), truth)};
  write_csv(ctx.dir / "trials.csv", ctx.hash, trials_table(trials.back().sharpes));
  if (c.robustness.mode != TrialMode::ShuffledSignals) {
    TrialConfig shuffled = c.trial_config();
    shuffled.mode = TrialMode::ShuffledSignals;
    shuffled.seed = derive_seed(shuffled.seed, "shuffled_signals");
    trials.push_back(run_trials(ctx, runner, shuffled, truth));
    write_csv(ctx.dir / "trials-shuffled.csv", ctx.hash, trials_table(trials.back().sharpes));
  }
  const auto st = stress(ctx, wf);
  tables.push_back(stress_table(trials, &st));
  write_csv(ctx.dir / "stress.csv", ctx.hash, tables.back());

  tables.push_back(decomposition_table(
      attribution_decomposition(ctx.panel, c.signal, c.cost, c.kill_switch, ctx.windows, c.walk_forward_options())));
  write_csv(ctx.dir / "decomposition.csv", ctx.hash, tables.back());

  tables.push_back(capacity_table(capacity(ctx, wf)));
  write_csv(ctx.dir / "capacity.csv", ctx.hash, tables.back());

  std::string head;
  for (const auto& t : trials) head += trial_lines(t) + "\n";
  finish(ctx, out, head + impact_line(c) + "\n" + join(tables));
}

}  // namespace

int run_command(int argc, char** argv) { return run_command(argc, argv, std::cout, std::cerr); }

int run_command(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regime-gated cross-sectional factor backtester"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<unsigned> threads;
  std::string output_dir;
  app.add_option("--config", config_path, "Config file (TOML subset)");
  app.add_option("--set", overrides, "Override a config key: --set section.key=value")->allow_extra_args(false);
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", output_dir, "Output directory (overrides DRIFTGATE_OUTPUT_DIR)");

  std::string start, end;
  double scale = 1.0;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic panel");
  auto* backtest = app.add_subcommand("backtest", "Single backtest over a date range");
  backtest->add_option("--start", start, "First formation date (YYYY-MM-DD)");
  backtest->add_option("--end", end, "End date, exclusive (YYYY-MM-DD)");
  backtest->add_option("--scale", scale, "Frozen scale factor");
  auto* walkforward = app.add_subcommand("walkforward", "Walk-forward validation");
  auto* sweep = app.add_subcommand("sweep", "Parameter sensitivity sweep");
  auto* attribution = app.add_subcommand("attribution", "Return decomposition");
  auto* randomize = app.add_subcommand("randomize", "Randomization trials and p-value");
  auto* stress_cmd = app.add_subcommand("stress", "Noise, cost, slippage and crisis scenarios");
  auto* capacity_cmd = app.add_subcommand("capacity", "Capacity and market impact");
  auto* report = app.add_subcommand("report", "Full battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Context ctx;
    if (!config_path.empty()) ctx.config = load_config(config_path);
    for (const auto& o : overrides) ctx.config.apply_override(o);
    if (threads) ctx.config.threads = *threads;
    if (!output_dir.empty()) {
      ctx.config.output_dir = output_dir;
    } else if (!ctx.config.output_dir_set) {
      if (const char* env = std::getenv("DRIFTGATE_OUTPUT_DIR"); env && *env) ctx.config.output_dir = env;
    }
    ctx.config.validate();
    ctx.hash = ctx.config.hash();

    ctx.panel = load_data(ctx.config);
    ctx.dir = ctx.config.output_dir;
    std::filesystem::create_directories(ctx.dir);
    write_text(ctx.dir / "config.toml", ctx.hash, ctx.config.canonical());

    if (!synth->parsed() && !backtest->parsed())
      ctx.windows = make_windows(ctx.panel.calendar, ctx.config.windows.train_years, ctx.config.windows.test_years,
                                 ctx.config.windows.anchors);

    if (synth->parsed()) cmd_synth(ctx, out);
    else if (backtest->parsed()) cmd_backtest(ctx, out, start, end, scale);
    else if (walkforward->parsed()) cmd_walkforward(ctx, out);
    else if (sweep->parsed()) cmd_sweep(ctx, out);
    else if (attribution->parsed()) cmd_attribution(ctx, out);
    else if (randomize->parsed()) cmd_randomize(ctx, out);
    else if (stress_cmd->parsed()) cmd_stress(ctx, out);
    else if (capacity_cmd->parsed()) cmd_capacity(ctx, out);
    else if (report->parsed()) cmd_report(ctx, out);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error [" << e.key() << "]: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return 3;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace driftgate

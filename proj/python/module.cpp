#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "driftgate/cli.hpp"
#include "driftgate/config.hpp"

namespace py = pybind11;
using namespace driftgate;

namespace {

py::array_t<double> to_numpy(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

std::vector<std::string> dates_of(const std::vector<Date>& dates) {
  std::vector<std::string> out;
  out.reserve(dates.size());
  for (Date d : dates) out.push_back(format_date(d));
  return out;
}

py::dict stats_dict(const PerfStats& s) {
  py::dict d;
  auto opt = [](const std::optional<double>& v) -> py::object { return v ? py::object(py::float_(*v)) : py::object(py::none()); };
  d["n_days"] = s.n_days;
  d["sharpe"] = opt(s.sharpe);
  d["ann_return"] = s.ann_return;
  d["ann_return_arithmetic"] = s.ann_return_arithmetic;
  d["ann_vol"] = opt(s.ann_vol);
  d["max_drawdown"] = s.max_drawdown;
  d["win_rate"] = s.win_rate;
  d["best_day"] = s.best_day;
  d["worst_day"] = s.worst_day;
  d["skewness"] = opt(s.skewness);
  d["correlation_vs_benchmark"] = opt(s.correlation_vs_benchmark);
  d["total_return"] = s.total_return;
  d["wealth_multiple"] = s.wealth_multiple;
  return d;
}

RunConfig make_config(const std::vector<std::string>& overrides, const std::string& path) {
  RunConfig c = path.empty() ? RunConfig{} : load_config(path);
  for (const auto& o : overrides) c.apply_override(o);
  c.validate();
  return c;
}

PricePanel panel_for(const RunConfig& c) {
  if (c.data.is_synthetic()) {
    auto s = c.data.synthetic;
    s.seed = c.synthetic_seed();
    return generate_synthetic(s);
  }
  if (c.data.source.empty()) throw ConfigError("data.source", "data.source is required");
  return load_panel(c.data.source, c.data.columns);
}

std::vector<WindowSpec> windows_for(const RunConfig& c, const PricePanel& p) {
  return make_windows(p.calendar, c.windows.train_years, c.windows.test_years, c.windows.anchors);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regime-gated cross-sectional factor backtester";

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<DataError> data_error(m, "DataError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      config_error(e.what());
    } catch (const DataError& e) {
      data_error(e.what());
    }
  });

  py::class_<PricePanel>(m, "Panel")
      .def_property_readonly("dates", [](const PricePanel& p) { return dates_of(p.calendar.dates); })
      .def_readonly("tickers", &PricePanel::tickers)
      .def_property_readonly("close", [](const PricePanel& p) { return to_numpy(p.close); })
      .def_property_readonly("volume", [](const PricePanel& p) { return to_numpy(p.volume); })
      .def_property_readonly("n_dates", &PricePanel::n_dates)
      .def_property_readonly("n_tickers", &PricePanel::n_tickers)
      .def("save", [](const PricePanel& p, const std::string& path) { save_panel(p, path); }, py::arg("path"));

  m.def(
      "generate_synthetic",
      [](int n_stocks, int n_days, std::uint64_t seed, double drift_strength, double reversal_strength,
         double drift_regime_fraction) {
        SyntheticMarketConfig c;
        c.n_stocks = n_stocks;
        c.n_days = n_days;
        c.seed = seed;
        c.drift_strength = drift_strength;
        c.reversal_strength = reversal_strength;
        c.drift_regime_fraction = drift_regime_fraction;
        return generate_synthetic(c);
      },
      py::arg("n_stocks") = 100, py::arg("n_days") = 5292, py::arg("seed") = 0, py::arg("drift_strength") = 0.008,
      py::arg("reversal_strength") = 0.05, py::arg("drift_regime_fraction") = 0.35);

  m.def("load_panel", [](const std::string& path) { return load_panel(path); }, py::arg("path"));

  m.def(
      "signals",
      [](const PricePanel& panel, double alpha, int reversal_lookback, int drift_window, double up_threshold) {
        SignalParams p{alpha, reversal_lookback, drift_window, up_threshold};
        p.validate();
        const auto cube = compute_signal_cube(panel, compute_returns(panel), p);
        py::dict d;
        d["value"] = to_numpy(cube.value);
        d["reversal"] = to_numpy(cube.reversal);
        d["base"] = to_numpy(cube.base);
        d["up_fraction"] = to_numpy(cube.up_fraction);
        d["mask"] = to_numpy(cube.mask);
        d["edge"] = to_numpy(cube.edge());
        return d;
      },
      py::arg("panel"), py::arg("alpha") = 0.70, py::arg("reversal_lookback") = 10, py::arg("drift_window") = 63,
      py::arg("up_threshold") = 0.60);

  m.def(
      "build_weights",
      [](const std::vector<double>& edge, std::optional<double> max_weight) {
        std::vector<Position> pos;
        build_positions(edge, pos, WeightOptions{max_weight});
        std::vector<double> out(edge.size(), 0.0);
        for (const auto& p : pos) out[p.ticker] = p.weight;
        return out;
      },
      py::arg("edge"), py::arg("max_weight") = std::nullopt);

  m.def(
      "perf_stats",
      [](const std::vector<double>& returns, const std::vector<double>& benchmark) {
        return stats_dict(perf_stats(returns, benchmark));
      },
      py::arg("returns"), py::arg("benchmark") = std::vector<double>{});

  m.def(
      "scale_factor",
      [](const std::vector<double>& returns, double vol_cap, double drawdown_cap) {
        return compute_scale_factor(returns, ScaleTargets{vol_cap, drawdown_cap}).value;
      },
      py::arg("returns"), py::arg("vol_cap") = 0.12, py::arg("drawdown_cap") = 0.15);

  m.def(
      "config_hash",
      [](const std::vector<std::string>& overrides, const std::string& path) {
        return make_config(overrides, path).hash();
      },
      py::arg("overrides") = std::vector<std::string>{}, py::arg("config") = "");

  m.def(
      "walk_forward",
      [](const std::vector<std::string>& overrides, const std::string& path) {
        const auto c = make_config(overrides, path);
        const auto panel = panel_for(c);
        const auto wf = run_walk_forward(panel, c.signal, c.cost, c.kill_switch, windows_for(c, panel),
                                         c.walk_forward_options());
        py::dict d;
        d["combined"] = stats_dict(wf.combined_stats);
        d["benchmark"] = stats_dict(wf.benchmark_stats);
        py::list windows;
        for (const auto& w : wf.windows) {
          py::dict x;
          x["label"] = w.spec.label;
          x["scale"] = w.scale.value;
          x["test"] = stats_dict(w.test_stats);
          x["kills"] = w.test.kill_log.size();
          windows.append(x);
        }
        d["windows"] = windows;
        d["dates"] = dates_of(wf.combined.dates);
        d["daily_returns"] = wf.combined.daily_returns;
        return d;
      },
      py::arg("overrides") = std::vector<std::string>{}, py::arg("config") = "");

  m.def(
      "randomize",
      [](const std::vector<std::string>& overrides, const std::string& path) {
        const auto c = make_config(overrides, path);
        const auto panel = panel_for(c);
        py::gil_scoped_release release;
        const TrialRunner runner(panel, c.signal, c.cost, c.kill_switch, windows_for(c, panel), c.walk_forward_options());
        const double truth = runner.true_sharpe();
        auto trials = runner.run_trials(c.trial_config(), c.threads);
        const double p = permutation_pvalue(truth, trials);
        py::gil_scoped_acquire acquire;
        py::dict d;
        d["true_sharpe"] = truth;
        d["trials"] = trials;
        d["pvalue"] = p;
        return d;
      },
      py::arg("overrides") = std::vector<std::string>{}, py::arg("config") = "");

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "driftgate");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return run_command(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Runs a CLI subcommand in-process and returns its exit status.");
}

#include "driftgate/robustness.hpp"

#include <algorithm>
#include <numeric>

#include "driftgate/parallel.hpp"

namespace driftgate {

std::string_view to_string(TrialMode m) {
  switch (m) {
    case TrialMode::RandomRegime: return "random_regime";
    case TrialMode::RandomRegimeBlock: return "random_regime_block";
    case TrialMode::ShuffledSignals: return "shuffled_signals";
  }
  return "unknown";
}

TrialMode parse_trial_mode(std::string_view s) {
  if (s == "random_regime") return TrialMode::RandomRegime;
  if (s == "random_regime_block") return TrialMode::RandomRegimeBlock;
  if (s == "shuffled_signals") return TrialMode::ShuffledSignals;
  throw ConfigError("robustness.mode", "robustness.mode must be random_regime, random_regime_block or "
                                       "shuffled_signals, got '" + std::string(s) + "'");
}

void TrialConfig::validate() const {
  if (n_trials < 1) throw ConfigError("robustness.n_trials", "robustness.n_trials must be >= 1");
}

namespace {

// Scans a 0/1 mask row into its defined slots and count of ones.
std::size_t mask_slots(std::span<const double> row, std::vector<std::uint32_t>& slots) {
  slots.clear();
  std::size_t ones = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (is_missing(row[j])) continue;
    if (row[j] != 0.0 && row[j] != 1.0) throw InvariantError("mask values must be 0 or 1");
    slots.push_back(static_cast<std::uint32_t>(j));
    ones += row[j] == 1.0;
  }
  return ones;
}

// A permutation of a 0/1 row is a uniformly random subset of its defined
// slots with the same number of ones. Partial Fisher-Yates over the smaller
// of the two sides; sets active[j] for the chosen names.
void draw_active(std::span<std::uint32_t> slots, std::size_t ones, Rng& rng, std::vector<char>& active) {
  const bool pick_ones = 2 * ones <= slots.size();
  const std::size_t picks = pick_ones ? ones : slots.size() - ones;
  for (auto j : slots) active[j] = pick_ones ? 0 : 1;
  for (std::size_t k = 0; k < picks; ++k) {
    std::swap(slots[k], slots[k + uniform_below(rng, slots.size() - k)]);
    active[slots[k]] = pick_ones ? 1 : 0;
  }
}

}  // namespace

Matrix permute_mask_rows(const Matrix& mask, std::size_t first_row, std::size_t last_row, Rng& rng) {
  Matrix out = mask;
  if (mask.rows() == 0) return out;
  last_row = std::min(last_row, mask.rows() - 1);
  std::vector<std::uint32_t> slots;
  std::vector<char> active(mask.cols(), 0);
  for (std::size_t t = first_row; t <= last_row; ++t) {
    auto row = out.row(t);
    draw_active(slots, mask_slots(row, slots), rng, active);
    for (std::size_t j : slots) row[j] = active[j] ? 1.0 : 0.0;
  }
  return out;
}

Matrix permute_mask_per_date(const Matrix& mask, Rng& rng) {
  return mask.rows() == 0 ? mask : permute_mask_rows(mask, 0, mask.rows() - 1, rng);
}

Matrix block_shuffle_mask(const Matrix& mask, int block, Rng& rng) {
  if (block < 1) throw InvariantError("block_shuffle_mask: block must be >= 1");
  Matrix out = mask;
  const auto b = static_cast<std::size_t>(block);
  for (std::size_t j = 0; j < mask.cols(); ++j) {
    // Only the defined span of the stock takes part.
    std::size_t first = 0;
    while (first < mask.rows() && is_missing(mask(first, j))) ++first;
    std::size_t end = first;
    while (end < mask.rows() && !is_missing(mask(end, j))) ++end;
    if (end - first < 2 * b) continue;
    std::vector<std::size_t> starts;
    for (std::size_t s = first; s < end; s += b) starts.push_back(s);
    std::vector<std::size_t> order(starts.size());
    std::iota(order.begin(), order.end(), 0);
    shuffle_range(order.begin(), order.end(), rng);
    std::size_t dst = first;
    for (std::size_t k : order) {
      const std::size_t src_end = std::min(starts[k] + b, end);
      for (std::size_t t = starts[k]; t < src_end; ++t) out(dst++, j) = mask(t, j);
    }
  }
  return out;
}

Matrix shuffle_edge_per_date(const Matrix& edge, Rng& rng) {
  Matrix out = edge;
  std::vector<std::size_t> slots;
  std::vector<double> values;
  for (std::size_t t = 0; t < out.rows(); ++t) {
    auto row = out.row(t);
    slots.clear();
    values.clear();
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (is_missing(row[j]) || row[j] == 0.0) continue;
      slots.push_back(j);
      values.push_back(row[j]);
    }
    shuffle_range(values.begin(), values.end(), rng);
    for (std::size_t k = 0; k < slots.size(); ++k) row[slots[k]] = values[k];
  }
  return out;
}

TrialRunner::TrialRunner(const PricePanel& panel, const SignalParams& params, const CostModel& cost,
                         const KillSwitchConfig& kill_switch, std::vector<WindowSpec> windows,
                         WalkForwardOptions options)
    : market_(panel),
      params_(params),
      cost_(cost),
      kill_switch_(kill_switch),
      windows_(std::move(windows)),
      options_(std::move(options)),
      cube_(compute_signal_cube(panel, market_.returns(), params)) {
  options_.threads = 1;
  options_.backtest.record_weights = false;

  std::vector<std::uint32_t> slots;
  slot_offset_.push_back(0);
  for (std::size_t t = 0; t < cube_.mask.rows(); ++t) {
    slot_ones_.push_back(mask_slots(cube_.mask.row(t), slots));
    for (auto j : slots) {
      slot_index_.push_back(j);
      slot_base_.push_back(cube_.base(t, j));
    }
    slot_offset_.push_back(slot_index_.size());
  }
}

double TrialRunner::sharpe_for(const Matrix& edge) const {
  return run_walk_forward(market_, edge, params_, cost_, kill_switch_, windows_, options_).combined_sharpe();
}

double TrialRunner::true_sharpe() const { return sharpe_for(cube_.edge()); }

std::pair<std::size_t, std::size_t> TrialRunner::formation_rows() const {
  auto [lo, hi] = walk_forward_span(market_, windows_);
  return {lo > 0 ? lo - 1 : lo, hi};
}

double TrialRunner::random_regime_sharpe(Rng& rng) const {
  // Same draws as permute_mask_rows over formation_rows(), without
  // materializing the permuted mask or EDGE matrix.
  std::vector<std::uint32_t> work;
  std::vector<char> active(cube_.mask.cols(), 0);
  const EdgeRowSource rows = [&](std::size_t t, std::vector<Position>& entries) {
    entries.clear();
    const auto begin = static_cast<std::ptrdiff_t>(slot_offset_[t]);
    const auto end = static_cast<std::ptrdiff_t>(slot_offset_[t + 1]);
    work.assign(slot_index_.begin() + begin, slot_index_.begin() + end);
    draw_active(work, slot_ones_[t], rng, active);
    for (auto k = begin; k < end; ++k) {
      const auto j = slot_index_[static_cast<std::size_t>(k)];
      const double b = slot_base_[static_cast<std::size_t>(k)];
      if (active[j] && !is_missing(b) && b != 0.0) entries.push_back({j, b});
    }
  };
  return run_walk_forward(market_, rows, params_, cost_, kill_switch_, windows_, options_).combined_sharpe();
}

double TrialRunner::run_trial(TrialMode mode, std::uint64_t trial_seed) const {
  Rng rng(trial_seed);
  switch (mode) {
    case TrialMode::RandomRegime: return random_regime_sharpe(rng);
    case TrialMode::RandomRegimeBlock:
      return sharpe_for(cube_.edge_with_mask(block_shuffle_mask(cube_.mask, params_.drift_window, rng)));
    case TrialMode::ShuffledSignals: return sharpe_for(shuffle_edge_per_date(cube_.edge(), rng));
  }
  throw InvariantError("unknown trial mode");
}

std::vector<double> TrialRunner::run_trials(const TrialConfig& config, unsigned threads) const {
  config.validate();
  std::vector<double> out(static_cast<std::size_t>(config.n_trials));
  parallel_for(out.size(), threads, [&](std::size_t i) {
    out[i] = run_trial(config.mode, derive_seed(config.seed, "trial", i));
  });
  return out;
}

double random_regime_trial(const PricePanel& panel, const SignalParams& params, const CostModel& cost,
                           const KillSwitchConfig& kill_switch, const std::vector<WindowSpec>& windows,
                           std::uint64_t trial_seed, const WalkForwardOptions& options) {
  return TrialRunner(panel, params, cost, kill_switch, windows, options).run_trial(TrialMode::RandomRegime, trial_seed);
}

double shuffled_signal_trial(const PricePanel& panel, const SignalParams& params, const CostModel& cost,
                             const KillSwitchConfig& kill_switch, const std::vector<WindowSpec>& windows,
                             std::uint64_t trial_seed, const WalkForwardOptions& options) {
  return TrialRunner(panel, params, cost, kill_switch, windows, options)
      .run_trial(TrialMode::ShuffledSignals, trial_seed);
}

double permutation_pvalue(double true_stat, std::span<const double> trial_stats) {
  if (trial_stats.empty()) throw DataError("permutation_pvalue needs at least one trial");
  const auto at_least = std::count_if(trial_stats.begin(), trial_stats.end(), [&](double s) { return s >= true_stat; });
  return (1.0 + static_cast<double>(at_least)) / (1.0 + static_cast<double>(trial_stats.size()));
}

double ImpactModel::impact_bp(double participation) const {
  if (participation <= 0.0) return 0.0;
  if (exponent == 0.5) return coefficient_bp * std::sqrt(participation);
  return coefficient_bp * std::pow(participation, exponent);
}

ImpactModel fit_impact_model(std::span<const std::pair<double, double>> points, std::optional<double> fixed_exponent) {
  if (points.size() < (fixed_exponent ? 1u : 2u)) throw DataError("impact fit needs more calibration points");
  std::vector<double> x, y;
  for (auto [p, bp] : points) {
    if (!(p > 0.0 && bp > 0.0)) throw DataError("impact calibration points must be positive");
    x.push_back(std::log(p));
    y.push_back(std::log(bp));
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  ImpactModel m;
  if (fixed_exponent) {
    m.exponent = *fixed_exponent;
  } else {
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx <= 0.0) throw DataError("impact fit needs distinct participation levels");
    m.exponent = sxy / sxx;
  }
  m.coefficient_bp = std::exp(my - m.exponent * mx);
  return m;
}

ImpactModel default_impact_model() { return fit_impact_model(kImpactCalibrationPoints, 0.5); }

void StressConfig::validate() const {
  auto check = [](double v, const char* key) {
    if (!(v >= 0.0)) throw ConfigError(key, std::string(key) + " must be >= 0");
  };
  check(noise_bp_daily, "robustness.noise_bp_daily");
  check(cost_multiplier, "robustness.cost_multiplier");
  check(slippage_bp, "robustness.slippage_bp");
  check(crisis.spread_multiplier, "robustness.crisis_spread_multiplier");
  check(crisis.slippage_bp, "robustness.crisis_slippage_bp");
  check(crisis.vol_multiplier, "robustness.crisis_vol_multiplier");
  check(crisis.participation, "robustness.crisis_participation");
  if (!(crisis.depth_reduction >= 0.0 && crisis.depth_reduction < 1.0))
    throw ConfigError("robustness.crisis_depth_reduction", "robustness.crisis_depth_reduction must lie in [0, 1)");
}

namespace {

StressScenario scenario(std::string type, std::string spec, std::span<const double> returns) {
  const auto s = perf_stats(returns);
  return {std::move(type), std::move(spec), s.sharpe.value_or(0.0), s.ann_return};
}

std::string bp_text(double bp) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%gbp", bp);
  return buf;
}

}  // namespace

StressReport stress_run(const BacktestResult& base_result, const PricePanel& panel, const SignalParams& params,
                        const CostModel& cost, const KillSwitchConfig& kill_switch,
                        const std::vector<WindowSpec>& windows, const StressConfig& stress,
                        const ImpactModel& impact, std::uint64_t seed, const WalkForwardOptions& options) {
  stress.validate();
  StressReport report;
  report.base = scenario("Base", "As configured", base_result.daily_returns);

  {
    Rng rng = make_rng(seed, "stress.noise");
    std::normal_distribution<double> noise(0.0, stress.noise_bp_daily * 1e-4);
    std::vector<double> noisy = base_result.daily_returns;
    if (stress.noise_bp_daily > 0.0)
      for (double& r : noisy) r += noise(rng);
    report.noise = scenario("Return Noise", bp_text(stress.noise_bp_daily) + " daily Gaussian", noisy);
  }

  const Market market(panel);
  const auto cube = compute_signal_cube(panel, market.returns(), params);
  const Matrix edge = cube.edge();
  WalkForwardOptions inner = options;
  inner.backtest.record_weights = false;

  CostModel doubled = cost;
  doubled.rate_per_unit_traded *= stress.cost_multiplier;
  CostModel slipped = cost;
  slipped.slippage_per_trade = stress.slippage_bp * 1e-4;
  CostModel crisis = cost;
  crisis.rate_per_unit_traded *= stress.crisis.spread_multiplier;
  const double crisis_impact_bp = impact.impact_bp(stress.crisis.participation) / (1.0 - stress.crisis.depth_reduction);
  crisis.slippage_per_trade = (stress.crisis.slippage_bp + crisis_impact_bp) * 1e-4;

  const std::vector<CostModel> models{doubled, slipped, crisis};
  std::vector<std::vector<double>> series(models.size());
  parallel_for(models.size(), options.threads, [&](std::size_t k) {
    WalkForwardOptions o = inner;
    o.threads = 1;
    series[k] = run_walk_forward(market, edge, params, models[k], kill_switch, windows, o).combined.daily_returns;
  });

  char spec[96];
  std::snprintf(spec, sizeof spec, "%gx costs (%s total)", stress.cost_multiplier,
                bp_text(doubled.rate_per_unit_traded * 1e4).c_str());
  report.cost = scenario("Transaction Costs", spec, series[0]);
  report.slippage = scenario("Execution Slippage", bp_text(stress.slippage_bp) + " per unit traded", series[1]);

  auto& crisis_returns = series[2];
  if (stress.crisis.vol_multiplier != 1.0 && !crisis_returns.empty()) {
    const double m = mean(crisis_returns);
    for (double& r : crisis_returns) r = m + stress.crisis.vol_multiplier * (r - m);
  }
  std::snprintf(spec, sizeof spec, "%gx spreads, %g%% depth cut, %s slippage", stress.crisis.spread_multiplier,
                stress.crisis.depth_reduction * 100.0, bp_text(stress.crisis.slippage_bp).c_str());
  report.crisis = scenario("Crisis Liquidity", spec, crisis_returns);
  return report;
}

std::string viability_label(double sharpe) {
  if (sharpe >= 10.0) return "Excellent";
  if (sharpe >= 8.0) return "Good";
  if (sharpe >= 5.0) return "Acceptable";
  if (sharpe >= 1.0) return "Marginal";
  return "Unviable";
}

std::vector<CapacityPoint> capacity_curve(const BacktestResult& base_result, const PricePanel& panel,
                                          const std::vector<double>& aum_levels,
                                          std::optional<double> adv_per_name, const ImpactModel& impact,
                                          const CostModel& cost) {
  if (base_result.daily_returns.empty()) throw DataError("capacity_curve: base result has no returns");
  for (double a : aum_levels)
    if (!(a > 0.0)) throw ConfigError("capacity.aum_levels", "capacity.aum_levels must all be > 0");

  std::vector<char> traded(panel.n_tickers(), 0);
  std::vector<Date> dates;
  if (base_result.weights_history.empty()) {
    std::fill(traded.begin(), traded.end(), 1);
    dates = base_result.dates;
  } else {
    for (const auto& f : base_result.weights_history) {
      dates.push_back(f.date);
      for (const auto& p : f.positions) traded[p.ticker] = 1;
    }
  }
  const auto n_traded = static_cast<double>(std::count(traded.begin(), traded.end(), 1));

  double aggregate_adv = 0.0;
  if (adv_per_name) {
    aggregate_adv = *adv_per_name * n_traded;
  } else {
    std::vector<double> dollar;
    for (std::size_t j = 0; j < panel.n_tickers(); ++j) {
      if (!traded[j]) continue;
      dollar.clear();
      for (Date d : dates) {
        auto t = panel.calendar.index_of(d);
        if (!t) continue;
        const double v = panel.volume(*t, j);
        const double c = panel.close(*t, j);
        if (!is_missing(v) && !is_missing(c)) dollar.push_back(v * c);
      }
      if (dollar.empty())
        throw DataError("capacity_curve: no volume data for " + panel.tickers[j] +
                        "; supply capacity.adv_per_name (median daily dollar volume per name)");
      auto mid = dollar.begin() + static_cast<std::ptrdiff_t>(dollar.size() / 2);
      std::nth_element(dollar.begin(), mid, dollar.end());
      double med = *mid;
      if (dollar.size() % 2 == 0) med = 0.5 * (med + *std::max_element(dollar.begin(), mid));
      aggregate_adv += med;
    }
  }
  if (!(aggregate_adv > 0.0)) throw DataError("capacity_curve: aggregate dollar volume is zero");

  const double mean_turnover = mean(base_result.turnover);
  std::vector<CapacityPoint> out;
  std::vector<double> net(base_result.gross_returns.size());
  for (double aum : aum_levels) {
    CapacityPoint pt;
    pt.aum = aum;
    pt.participation = aum * mean_turnover / aggregate_adv;
    pt.impact_bp = impact.impact_bp(pt.participation);
    const double rate = cost.total_rate() + pt.impact_bp * 1e-4;
    for (std::size_t i = 0; i < net.size(); ++i) net[i] = base_result.gross_returns[i] - rate * base_result.turnover[i];
    const auto stats = perf_stats(net);
    pt.net_sharpe = stats.sharpe.value_or(0.0);
    pt.net_ann_return = stats.ann_return;
    pt.viability = viability_label(pt.net_sharpe);
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace driftgate

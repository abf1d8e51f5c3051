#pragma once

#include <cstdint>
#include <utility>

#include "driftgate/rng.hpp"
#include "driftgate/validation.hpp"

namespace driftgate {

enum class TrialMode {
  RandomRegime,       // per-date cross-sectional permutation of the true mask
  RandomRegimeBlock,  // per-stock shuffle of mask blocks through time
  ShuffledSignals,    // per-date permutation of EDGE among active names
};

std::string_view to_string(TrialMode m);
TrialMode parse_trial_mode(std::string_view s);

struct TrialConfig {
  int n_trials = 1000;
  std::uint64_t seed = 0;
  TrialMode mode = TrialMode::RandomRegime;

  void validate() const;
};

/// Permutes each row's defined mask values across the names where the mask
/// is defined, so every date keeps its exact active count.
Matrix permute_mask_per_date(const Matrix& mask, Rng& rng);

/// permute_mask_per_date restricted to rows [first_row, last_row]; other
/// rows are copied unchanged.
Matrix permute_mask_rows(const Matrix& mask, std::size_t first_row, std::size_t last_row, Rng& rng);

/// For every stock, cuts the mask history into consecutive blocks of
/// `block` dates and shuffles the block order. Preserves each stock's
/// activation count and short-range persistence.
Matrix block_shuffle_mask(const Matrix& mask, int block, Rng& rng);

/// Permutes each row's non-zero, non-missing EDGE values across those names.
Matrix shuffle_edge_per_date(const Matrix& edge, Rng& rng);

/// Precomputes the market and signal cube once and runs randomized
/// walk-forwards against it. Holds a reference to the panel.
class TrialRunner {
 public:
  TrialRunner(const PricePanel& panel, const SignalParams& params, const CostModel& cost,
              const KillSwitchConfig& kill_switch, std::vector<WindowSpec> windows, WalkForwardOptions options = {});

  /// Combined OOS Sharpe of the true, ungarbled strategy.
  double true_sharpe() const;
  double run_trial(TrialMode mode, std::uint64_t trial_seed) const;
  /// Trial i uses derive_seed(config.seed, "trial", i); order-independent.
  std::vector<double> run_trials(const TrialConfig& config, unsigned threads) const;

  const SignalCube& cube() const { return cube_; }
  const Market& market() const { return market_; }
  /// Panel rows whose EDGE a trial reads, in the order they are drawn.
  std::pair<std::size_t, std::size_t> formation_rows() const;

 private:
  double sharpe_for(const Matrix& edge) const;
  double random_regime_sharpe(Rng& rng) const;

  Market market_;
  SignalParams params_;
  CostModel cost_;
  KillSwitchConfig kill_switch_;
  std::vector<WindowSpec> windows_;
  WalkForwardOptions options_;
  SignalCube cube_;
  // Per row: names with a defined mask, their BASE values, and the count of
  // ones, flattened with row offsets.
  std::vector<std::uint32_t> slot_index_;
  std::vector<double> slot_base_;
  std::vector<std::size_t> slot_offset_;
  std::vector<std::size_t> slot_ones_;
};

double random_regime_trial(const PricePanel& panel, const SignalParams& params, const CostModel& cost,
                           const KillSwitchConfig& kill_switch, const std::vector<WindowSpec>& windows,
                           std::uint64_t trial_seed, const WalkForwardOptions& options = {});

double shuffled_signal_trial(const PricePanel& panel, const SignalParams& params, const CostModel& cost,
                             const KillSwitchConfig& kill_switch, const std::vector<WindowSpec>& windows,
                             std::uint64_t trial_seed, const WalkForwardOptions& options = {});

/// (1 + #{trials >= true_stat}) / (1 + n).
double permutation_pvalue(double true_stat, std::span<const double> trial_stats);

/// impact_bp = coefficient_bp * participation^exponent.
struct ImpactModel {
  double coefficient_bp = 0.0;
  double exponent = 0.5;

  double impact_bp(double participation) const;
};

/// Reference (participation, impact bp) calibration points.
inline const std::vector<std::pair<double, double>> kImpactCalibrationPoints{
    {0.02, 3.0}, {0.04, 8.0}, {0.10, 15.0}, {0.20, 28.0}, {0.40, 52.0}, {0.80, 95.0}};

/// Least squares in log space: log impact = log c + gamma log p. With
/// `fixed_exponent` set only the coefficient is fitted.
ImpactModel fit_impact_model(std::span<const std::pair<double, double>> points,
                             std::optional<double> fixed_exponent = std::nullopt);

/// Square-root law with its coefficient fitted to the calibration points.
ImpactModel default_impact_model();

struct CrisisConfig {
  double depth_reduction = 0.6;
  double spread_multiplier = 2.0;
  double slippage_bp = 10.0;
  double vol_multiplier = 1.0;
  double participation = 0.10;  // where the impact model is read
};

struct StressConfig {
  double noise_bp_daily = 50.0;
  double cost_multiplier = 2.0;
  double slippage_bp = 10.0;
  CrisisConfig crisis;

  void validate() const;
};

struct StressScenario {
  std::string test_type;
  std::string specification;
  double sharpe = 0.0;
  double ann_return = 0.0;
};

struct StressReport {
  StressScenario base;
  StressScenario noise;
  StressScenario cost;
  StressScenario slippage;
  StressScenario crisis;
};

/// Crisis scenario: cost rate x spread_multiplier; slippage of slippage_bp
/// plus impact at `participation` inflated by 1 / (1 - depth_reduction);
/// daily deviations from the mean scaled by vol_multiplier.
StressReport stress_run(const BacktestResult& base_result, const PricePanel& panel, const SignalParams& params,
                        const CostModel& cost, const KillSwitchConfig& kill_switch,
                        const std::vector<WindowSpec>& windows, const StressConfig& stress,
                        const ImpactModel& impact, std::uint64_t seed, const WalkForwardOptions& options = {});

struct CapacityPoint {
  double aum = 0.0;
  double participation = 0.0;
  double impact_bp = 0.0;
  double net_sharpe = 0.0;
  double net_ann_return = 0.0;
  std::string viability;
};

/// Sharpe >= 10 Excellent, >= 8 Good, >= 5 Acceptable, >= 1 Marginal, else Unviable.
std::string viability_label(double sharpe);

/// Re-prices the base result's turnover with cost rate + impact at each AUM.
/// participation = AUM x mean daily turnover / sum over traded names of their
/// median daily dollar volume (or adv_per_name x #traded when supplied).
std::vector<CapacityPoint> capacity_curve(const BacktestResult& base_result, const PricePanel& panel,
                                          const std::vector<double>& aum_levels,
                                          std::optional<double> adv_per_name, const ImpactModel& impact,
                                          const CostModel& cost);

}  // namespace driftgate

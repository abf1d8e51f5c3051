#pragma once

#include <filesystem>

#include "driftgate/robustness.hpp"

namespace driftgate {

/// One table cell: how it prints in a text report and how it is written to
/// CSV (full precision).
struct Cell {
  std::string text;
  std::string csv;
};

Cell label(std::string s);
Cell number(double v, int decimals);
Cell percent(double fraction, int decimals = 1, bool sign = false);
Cell multiple(double v, int decimals = 2);
Cell money(double v);
/// "N/A" when the value is undefined.
Cell optional_number(std::optional<double> v, int decimals);

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Space-aligned text; first column left-aligned, the rest right-aligned.
  std::string render() const;
};

/// "# config-hash: <hash>"
std::string hash_header(const std::string& hash);

/// Writes the config-hash line, a header row and the CSV view of every cell.
void write_csv(const std::filesystem::path& path, const std::string& hash, const Table& table);
void write_text(const std::filesystem::path& path, const std::string& hash, const std::string& body);

Table per_window_table(const WalkForwardReport& report);
Table combined_table(const WalkForwardReport& report);
Table wealth_table(const WalkForwardReport& report);
Table kill_switch_table(const WalkForwardReport& report, const KillSwitchConfig& config, double target_vol);
Table sensitivity_table(const SensitivityTable& sweep);
Table decomposition_table(const DecompositionTable& d);
Table capacity_table(const std::vector<CapacityPoint>& points);

struct TrialSummary {
  TrialMode mode;
  std::vector<double> sharpes;
  double true_sharpe;
  double p_value;
};

/// Randomization rows (when given) followed by the stress scenarios (when given).
Table stress_table(const std::vector<TrialSummary>& trials, const StressReport* stress);

/// Row-per-day series of a backtest with the benchmark alongside.
Table daily_table(const BacktestResult& result, std::span<const double> benchmark);
/// Long format: date, ticker, weight for every non-zero weight.
Table weights_table(const BacktestResult& result, const std::vector<std::string>& tickers);
Table kill_log_table(const BacktestResult& result);
Table trials_table(const std::vector<double>& sharpes);

/// Writes per-window.csv, combined.csv, wealth.csv, killlog.csv, daily.csv
/// and weights.csv for a walk-forward run into `dir`.
void write_walk_forward(const std::filesystem::path& dir, const std::string& hash, const WalkForwardReport& report,
                        const std::vector<std::string>& tickers, const KillSwitchConfig& kill_switch,
                        double target_vol);

}  // namespace driftgate

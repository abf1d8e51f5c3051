#pragma once

#include <filesystem>
#include <map>

#include "driftgate/robustness.hpp"
#include "driftgate/synthetic.hpp"

namespace driftgate {

/// A parsed value of the config format: a TOML subset with strings, numbers,
/// booleans, bare ISO dates and (possibly nested) arrays.
struct ConfigValue {
  enum class Kind { String, Number, Bool, Array };
  Kind kind = Kind::String;
  std::string text;  // string contents, or the number/bool literal
  double number = 0.0;
  bool integral = false;
  bool boolean = false;
  std::vector<ConfigValue> items;
};

/// Flattened "section.key" -> value, in file order of first appearance.
using ConfigTable = std::vector<std::pair<std::string, ConfigValue>>;

/// Parses config text. Syntax errors throw ConfigError keyed by "line N".
ConfigTable parse_config_text(std::string_view text);

/// Parses the right-hand side of a `--set key=value` override. Anything
/// that is not a valid literal is taken as a bare string.
ConfigValue parse_override_value(std::string_view text);

struct DataConfig {
  std::string source;  // panel file path, or "synthetic"
  ColumnMapping columns;
  SyntheticMarketConfig synthetic;
  bool synthetic_seed_set = false;

  bool is_synthetic() const { return source == "synthetic"; }
};

struct WindowConfig {
  int train_years = 5;
  int test_years = 1;
  std::vector<Date> anchors{parse_date("2010-01-01"), parse_date("2015-01-01"), parse_date("2020-01-01")};
};

struct RobustnessConfig {
  int n_trials = 1000;
  std::optional<std::uint64_t> seed;  // derived from master_seed when unset
  TrialMode mode = TrialMode::RandomRegime;
  StressConfig stress;
};

struct CapacityConfig {
  std::vector<double> aum_levels{50e6, 100e6, 250e6, 500e6, 1e9, 2e9};
  std::optional<double> impact_coefficient;  // bp at 100% participation; fitted when unset
  double impact_exponent = 0.5;
  bool fit_exponent = false;  // fit both c and the exponent to the calibration points
  std::optional<double> adv_per_name;  // dollars; needed when the panel has no volumes
};

struct RunConfig {
  DataConfig data;
  SignalParams signal;
  CostModel cost;
  KillSwitchConfig kill_switch;
  ScaleTargets scale;
  WindowConfig windows;
  WeightOptions portfolio;
  Execution execution = Execution::NextClose;
  RobustnessConfig robustness;
  CapacityConfig capacity;
  std::vector<double> sweep_offsets = kDefaultSweepOffsets;
  std::string output_dir = "driftgate-out";
  bool output_dir_set = false;  // false: DRIFTGATE_OUTPUT_DIR may supply it
  std::uint64_t master_seed = 0;
  unsigned threads = 1;

  /// Applies one dotted key. Unknown keys and ill-typed values throw ConfigError.
  void set(const std::string& key, const ConfigValue& value);
  void apply(const ConfigTable& table);
  /// Applies "key=value".
  void apply_override(std::string_view assignment);

  /// Cross-field checks plus every component's validate().
  void validate() const;

  /// Every key with its effective value, one `key = value` per line in a
  /// fixed order. output_dir and threads are excluded: they do not change
  /// results.
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  std::string hash() const;

  std::uint64_t synthetic_seed() const;
  std::uint64_t trial_seed() const;
  std::uint64_t stress_seed() const;
  ImpactModel impact_model() const;
  WalkForwardOptions walk_forward_options() const;
  TrialConfig trial_config() const;
};

/// All keys RunConfig::set accepts.
std::vector<std::string> config_keys();

RunConfig load_config(const std::filesystem::path& path);

}  // namespace driftgate

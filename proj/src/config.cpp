#include "driftgate/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace driftgate {

namespace {

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool looks_like_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

class ValueParser {
 public:
  ValueParser(std::string_view text, std::string where) : s_(text), where_(std::move(where)) {}

  ConfigValue parse_all() {
    ConfigValue v = value();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected trailing text '" + std::string(s_.substr(pos_)) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(where_, where_ + ": " + msg); }

  void skip_space() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  ConfigValue value() {
    skip_space();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    return scalar();
  }

  ConfigValue basic_string() {
    ConfigValue v;
    ++pos_;
    while (true) {
      if (pos_ >= s_.size() || s_[pos_] == '\n') fail("unterminated string");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        v.text += c;
        continue;
      }
      if (pos_ >= s_.size()) fail("unterminated escape");
      switch (s_[pos_++]) {
        case '"': v.text += '"'; break;
        case '\\': v.text += '\\'; break;
        case 'n': v.text += '\n'; break;
        case 't': v.text += '\t'; break;
        default: fail("unsupported escape sequence");
      }
    }
    return v;
  }

  ConfigValue literal_string() {
    ConfigValue v;
    ++pos_;
    const auto end = s_.find('\'', pos_);
    if (end == std::string_view::npos || s_.substr(pos_, end - pos_).find('\n') != std::string_view::npos)
      fail("unterminated string");
    v.text = std::string(s_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return v;
  }

  ConfigValue array() {
    ConfigValue v;
    v.kind = ConfigValue::Kind::Array;
    ++pos_;
    while (true) {
      skip_space();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      v.items.push_back(value());
      skip_space();
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
      } else if (pos_ < s_.size() && s_[pos_] != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  ConfigValue scalar() {
    const auto start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != ',' &&
           s_[pos_] != ']' && s_[pos_] != '#')
      ++pos_;
    const auto token = s_.substr(start, pos_ - start);
    ConfigValue v;
    if (token == "true" || token == "false") {
      v.kind = ConfigValue::Kind::Bool;
      v.boolean = token == "true";
      v.text = std::string(token);
      return v;
    }
    if (looks_like_date(token)) {
      v.text = std::string(token);
      return v;
    }
    std::string digits;
    for (char c : token)
      if (c != '_') digits += c;
    const char* b = digits.data();
    if (!digits.empty() && *b == '+') ++b;
    const char* e = digits.data() + digits.size();
    double d = 0.0;
    const auto [ptr, ec] = std::from_chars(b, e, d);
    if (digits.empty() || ec != std::errc() || ptr != e || !std::isfinite(d))
      fail("invalid value '" + std::string(token) + "'");
    v.kind = ConfigValue::Kind::Number;
    v.number = d;
    v.integral = digits.find_first_of(".eE") == std::string::npos;
    v.text = std::string(token);
    return v;
  }

  std::string_view s_;
  std::string where_;
  std::size_t pos_ = 0;
};

int bracket_depth_change(std::string_view line) {
  int depth = 0;
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == '\\' && quote == '"') ++i;
      else if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      break;
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      --depth;
    }
  }
  return depth;
}

// ---- typed accessors -------------------------------------------------------

[[noreturn]] void type_error(const std::string& key, const std::string& expected) {
  throw ConfigError(key, key + " expects " + expected);
}

double as_double(const std::string& key, const ConfigValue& v) {
  if (v.kind != ConfigValue::Kind::Number) type_error(key, "a number");
  return v.number;
}

long long as_integer(const std::string& key, const ConfigValue& v) {
  if (v.kind != ConfigValue::Kind::Number || !v.integral || std::abs(v.number) > 9.0e15)
    type_error(key, "an integer");
  return static_cast<long long>(v.number);
}

int as_int(const std::string& key, const ConfigValue& v) {
  const auto n = as_integer(key, v);
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) type_error(key, "a 32-bit integer");
  return static_cast<int>(n);
}

std::uint64_t as_u64(const std::string& key, const ConfigValue& v) {
  if (v.kind == ConfigValue::Kind::Number && v.integral) {
    std::uint64_t out = 0;
    std::string digits;
    for (char c : v.text)
      if (c != '_') digits += c;
    const char* b = digits.data();
    const char* e = digits.data() + digits.size();
    if (b != e && *b == '+') ++b;
    const auto [ptr, ec] = std::from_chars(b, e, out);
    if (ec == std::errc() && ptr == e) return out;
  }
  type_error(key, "a non-negative integer");
}

bool as_bool(const std::string& key, const ConfigValue& v) {
  if (v.kind != ConfigValue::Kind::Bool) type_error(key, "true or false");
  return v.boolean;
}

std::string as_string(const std::string& key, const ConfigValue& v) {
  if (v.kind != ConfigValue::Kind::String) type_error(key, "a string");
  return v.text;
}

char as_char(const std::string& key, const ConfigValue& v) {
  const auto s = as_string(key, v);
  if (s.size() != 1) type_error(key, "a single character");
  return s[0];
}

std::vector<double> as_double_list(const std::string& key, const ConfigValue& v) {
  if (v.kind != ConfigValue::Kind::Array) type_error(key, "an array of numbers");
  std::vector<double> out;
  for (const auto& item : v.items) out.push_back(as_double(key, item));
  return out;
}

std::vector<Date> as_date_list(const std::string& key, const ConfigValue& v) {
  if (v.kind != ConfigValue::Kind::Array) type_error(key, "an array of dates");
  std::vector<Date> out;
  for (const auto& item : v.items) {
    try {
      out.push_back(parse_date(as_string(key, item)));
    } catch (const DataError&) {
      type_error(key, "ISO dates (YYYY-MM-DD)");
    }
  }
  return out;
}

// ---- canonical formatting --------------------------------------------------

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string num(double v) { return format_double(v); }
std::string num(long long v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string boolean(bool b) { return b ? "true" : "false"; }

std::string list(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + num(xs[i]);
  return out + "]";
}

std::string list(const std::vector<Date>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + quote(format_date(xs[i]));
  return out + "]";
}

struct Entry {
  const char* key;
  std::function<void(RunConfig&, const std::string&, const ConfigValue&)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
  bool hashed = true;
};

#define DG_DOUBLE(KEY, FIELD)                                                                         \
  Entry {                                                                                             \
    KEY, [](RunConfig& c, const std::string& k, const ConfigValue& v) { c.FIELD = as_double(k, v); }, \
        [](const RunConfig& c) -> std::optional<std::string> { return num(c.FIELD); }                 \
  }
#define DG_INT(KEY, FIELD)                                                                         \
  Entry {                                                                                          \
    KEY, [](RunConfig& c, const std::string& k, const ConfigValue& v) { c.FIELD = as_int(k, v); }, \
        [](const RunConfig& c) -> std::optional<std::string> { return num(c.FIELD); }              \
  }
#define DG_STRING(KEY, FIELD)                                                                         \
  Entry {                                                                                             \
    KEY, [](RunConfig& c, const std::string& k, const ConfigValue& v) { c.FIELD = as_string(k, v); }, \
        [](const RunConfig& c) -> std::optional<std::string> { return quote(c.FIELD); }               \
  }
#define DG_OPT_DOUBLE(KEY, FIELD)                                                                     \
  Entry {                                                                                             \
    KEY, [](RunConfig& c, const std::string& k, const ConfigValue& v) { c.FIELD = as_double(k, v); }, \
        [](const RunConfig& c) -> std::optional<std::string> {                                        \
          if (!c.FIELD) return std::nullopt;                                                          \
          return num(*c.FIELD);                                                                       \
        }                                                                                             \
  }

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      Entry{"execution",
            [](RunConfig& c, const std::string& k, const ConfigValue& v) {
              c.execution = parse_execution(as_string(k, v));
            },
            [](const RunConfig& c) -> std::optional<std::string> { return quote(std::string(to_string(c.execution))); }},
      Entry{"master_seed", [](RunConfig& c, const std::string& k, const ConfigValue& v) { c.master_seed = as_u64(k, v); },
            [](const RunConfig& c) -> std::optional<std::string> { return num(c.master_seed); }},
      Entry{"output_dir", [](RunConfig& c, const std::string& k, const ConfigValue& v) {
              c.output_dir = as_string(k, v);
              c.output_dir_set = true;
            },
            [](const RunConfig& c) -> std::optional<std::string> { return quote(c.output_dir); }, false},
      Entry{"threads",
            [](RunConfig& c, const std::string& k, const ConfigValue& v) {
              const int n = as_int(k, v);
              if (n < 1) throw ConfigError(k, "threads must be >= 1");
              c.threads = static_cast<unsigned>(n);
            },
            [](const RunConfig& c) -> std::optional<std::string> { return num(static_cast<long long>(c.threads)); },
            false},

      DG_STRING("data.source", data.source),
      Entry{"data.delimiter",
            [](RunConfig& c, const std::string& k, const ConfigValue& v) { c.data.columns.delimiter = as_char(k, v); },
            [](const RunConfig& c) -> std::optional<std::string> {
              return quote(std::string(1, c.data.columns.delimiter));
            }},
      DG_STRING("data.date_column", data.columns.date),
      DG_STRING("data.ticker_column", data.columns.ticker),
      DG_STRING("data.close_column", data.columns.close),
      DG_STRING("data.volume_column", data.columns.volume),
      DG_STRING("data.sector_column", data.columns.sector),
      DG_INT("data.synthetic.n_stocks", data.synthetic.n_stocks),
      DG_INT("data.synthetic.n_days", data.synthetic.n_days),
      Entry{"data.synthetic.seed",
            [](RunConfig& c, const std::string& k, const ConfigValue& v) {
              c.data.synthetic.seed = as_u64(k, v);
              c.data.synthetic_seed_set = true;
            },
            [](const RunConfig& c) -> std::optional<std::string> {
              if (!c.data.synthetic_seed_set) return std::nullopt;
              return num(c.data.synthetic.seed);
            }},
      DG_DOUBLE("data.synthetic.base_vol", data.synthetic.base_vol),
      DG_DOUBLE("data.synthetic.drift_regime_fraction", data.synthetic.drift_regime_fraction),
      DG_DOUBLE("data.synthetic.drift_strength", data.synthetic.drift_strength),
      DG_DOUBLE("data.synthetic.reversal_strength", data.synthetic.reversal_strength),
      DG_DOUBLE("data.synthetic.regime_episode_length", data.synthetic.regime_episode_length),

      DG_DOUBLE("signal.alpha", signal.alpha),
      DG_INT("signal.reversal_lookback", signal.reversal_lookback),
      DG_INT("signal.drift_window", signal.drift_window),
      DG_DOUBLE("signal.up_threshold", signal.up_threshold),

      DG_DOUBLE("cost.rate_per_unit_traded", cost.rate_per_unit_traded),
      DG_DOUBLE("cost.slippage_per_trade", cost.slippage_per_trade),

      Entry{"kill_switch.enabled",
            [](RunConfig& c, const std::string& k, const ConfigValue& v) { c.kill_switch.enabled = as_bool(k, v); },
            [](const RunConfig& c) -> std::optional<std::string> { return boolean(c.kill_switch.enabled); }},
      DG_DOUBLE("kill_switch.abs_dd_threshold", kill_switch.abs_dd_threshold),
      DG_DOUBLE("kill_switch.rolling_loss_threshold", kill_switch.rolling_loss_threshold),
      DG_INT("kill_switch.rolling_window", kill_switch.rolling_window),
      DG_DOUBLE("kill_switch.vol_spike_multiple", kill_switch.vol_spike_multiple),
      DG_INT("kill_switch.vol_spike_window", kill_switch.vol_spike_window),
      DG_DOUBLE("kill_switch.corr_threshold", kill_switch.corr_threshold),
      DG_INT("kill_switch.corr_window", kill_switch.corr_window),

      DG_DOUBLE("scale.vol_cap", scale.vol_cap),
      DG_DOUBLE("scale.drawdown_cap", scale.drawdown_cap),

      DG_INT("windows.train_years", windows.train_years),
      DG_INT("windows.test_years", windows.test_years),
      Entry{"windows.anchors",
            [](RunConfig& c, const std::string& k, const ConfigValue& v) { c.windows.anchors = as_date_list(k, v); },
            [](const RunConfig& c) -> std::optional<std::string> { return list(c.windows.anchors); }},

      DG_OPT_DOUBLE("portfolio.max_weight", portfolio.max_weight),

      DG_INT("robustness.n_trials", robustness.n_trials),
      Entry{"robustness.seed",
            [](RunConfig& c, const std::string& k, const ConfigValue& v) { c.robustness.seed = as_u64(k, v); },
            [](const RunConfig& c) -> std::optional<std::string> {
              if (!c.robustness.seed) return std::nullopt;
              return num(*c.robustness.seed);
            }},
      Entry{"robustness.mode",
            [](RunConfig& c, const std::string& k, const ConfigValue& v) {
              c.robustness.mode = parse_trial_mode(as_string(k, v));
            },
            [](const RunConfig& c) -> std::optional<std::string> {
              return quote(std::string(to_string(c.robustness.mode)));
            }},
      DG_DOUBLE("robustness.noise_bp_daily", robustness.stress.noise_bp_daily),
      DG_DOUBLE("robustness.cost_multiplier", robustness.stress.cost_multiplier),
      DG_DOUBLE("robustness.slippage_bp", robustness.stress.slippage_bp),
      DG_DOUBLE("robustness.crisis_depth_reduction", robustness.stress.crisis.depth_reduction),
      DG_DOUBLE("robustness.crisis_spread_multiplier", robustness.stress.crisis.spread_multiplier),
      DG_DOUBLE("robustness.crisis_slippage_bp", robustness.stress.crisis.slippage_bp),
      DG_DOUBLE("robustness.crisis_vol_multiplier", robustness.stress.crisis.vol_multiplier),
      DG_DOUBLE("robustness.crisis_participation", robustness.stress.crisis.participation),

      Entry{"capacity.aum_levels",
            [](RunConfig& c, const std::string& k, const ConfigValue& v) {
              c.capacity.aum_levels = as_double_list(k, v);
            },
            [](const RunConfig& c) -> std::optional<std::string> { return list(c.capacity.aum_levels); }},
      DG_OPT_DOUBLE("capacity.impact_coefficient", capacity.impact_coefficient),
      DG_DOUBLE("capacity.impact_exponent", capacity.impact_exponent),
      Entry{"capacity.fit_exponent",
            [](RunConfig& c, const std::string& k, const ConfigValue& v) { c.capacity.fit_exponent = as_bool(k, v); },
            [](const RunConfig& c) -> std::optional<std::string> { return boolean(c.capacity.fit_exponent); }},
      DG_OPT_DOUBLE("capacity.adv_per_name", capacity.adv_per_name),

      Entry{"sweep.offsets",
            [](RunConfig& c, const std::string& k, const ConfigValue& v) { c.sweep_offsets = as_double_list(k, v); },
            [](const RunConfig& c) -> std::optional<std::string> { return list(c.sweep_offsets); }},
  };
  return entries;
}

#undef DG_DOUBLE
#undef DG_INT
#undef DG_STRING
#undef DG_OPT_DOUBLE

const Entry* find_entry(std::string_view key) {
  for (const auto& e : registry())
    if (key == e.key) return &e;
  return nullptr;
}

}  // namespace

ConfigTable parse_config_text(std::string_view text) {
  ConfigTable out;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const int start_line = line_no;
    const std::string where = "line " + std::to_string(start_line);
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;

    if (body.front() == '[') {
      const auto close = body.find(']');
      if (close == std::string_view::npos) throw ConfigError(where, where + ": unterminated section header");
      const auto rest = trim(body.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') throw ConfigError(where, where + ": text after section header");
      const auto name = trim(body.substr(1, close - 1));
      if (name.empty() || !std::all_of(name.begin(), name.end(), is_bare_key_char))
        throw ConfigError(where, where + ": invalid section name");
      section = std::string(name);
      continue;
    }

    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where, where + ": expected key = value");
    const std::string key(trim(body.substr(0, eq)));
    if (key.empty() || !std::all_of(key.begin(), key.end(), is_bare_key_char))
      throw ConfigError(where, where + ": invalid key '" + key + "'");
    std::string rhs(body.substr(eq + 1));
    // Arrays may span lines.
    int depth = bracket_depth_change(rhs);
    while (depth > 0) {
      if (!std::getline(in, line)) throw ConfigError(where, where + ": unterminated array");
      ++line_no;
      rhs += '\n' + line;
      depth += bracket_depth_change(line);
    }

    const std::string full = section.empty() ? key : section + "." + key;
    for (const auto& [k, v] : out)
      if (k == full) throw ConfigError(full, where + ": duplicate key " + full);
    out.emplace_back(full, ValueParser(rhs, where).parse_all());
  }
  return out;
}

ConfigValue parse_override_value(std::string_view text) {
  try {
    return ValueParser(text, "override").parse_all();
  } catch (const ConfigError&) {
    ConfigValue v;
    v.text = std::string(trim(text));
    return v;
  }
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.emplace_back(e.key);
  return out;
}

void RunConfig::set(const std::string& key, const ConfigValue& value) {
  const Entry* e = find_entry(key);
  if (!e) throw ConfigError(key, "unknown config key '" + key + "'");
  e->set(*this, key, value);
}

void RunConfig::apply(const ConfigTable& table) {
  for (const auto& [k, v] : table) set(k, v);
}

void RunConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError(std::string(assignment), "--set expects key=value, got '" + std::string(assignment) + "'");
  const std::string key(trim(assignment.substr(0, eq)));
  set(key, parse_override_value(assignment.substr(eq + 1)));
}

void RunConfig::validate() const {
  data.synthetic.validate();
  signal.validate();
  cost.validate();
  kill_switch.validate();
  if (!(scale.vol_cap > 0.0)) throw ConfigError("scale.vol_cap", "scale.vol_cap must be > 0");
  if (!(scale.drawdown_cap > 0.0)) throw ConfigError("scale.drawdown_cap", "scale.drawdown_cap must be > 0");
  if (windows.train_years < 1) throw ConfigError("windows.train_years", "windows.train_years must be >= 1");
  if (windows.test_years < 1) throw ConfigError("windows.test_years", "windows.test_years must be >= 1");
  if (windows.anchors.empty()) throw ConfigError("windows.anchors", "windows.anchors must not be empty");
  if (portfolio.max_weight && !(*portfolio.max_weight > 0.0 && *portfolio.max_weight <= 0.5))
    throw ConfigError("portfolio.max_weight", "portfolio.max_weight must be in (0, 0.5]");
  trial_config().validate();
  robustness.stress.validate();
  if (robustness.stress.crisis.depth_reduction >= 1.0)
    throw ConfigError("robustness.crisis_depth_reduction", "robustness.crisis_depth_reduction must be < 1");
  if (capacity.aum_levels.empty()) throw ConfigError("capacity.aum_levels", "capacity.aum_levels must not be empty");
  for (double a : capacity.aum_levels)
    if (!(a > 0.0)) throw ConfigError("capacity.aum_levels", "capacity.aum_levels must be positive");
  if (capacity.impact_coefficient && !(*capacity.impact_coefficient >= 0.0))
    throw ConfigError("capacity.impact_coefficient", "capacity.impact_coefficient must be >= 0");
  if (!(capacity.impact_exponent > 0.0))
    throw ConfigError("capacity.impact_exponent", "capacity.impact_exponent must be > 0");
  if (capacity.adv_per_name && !(*capacity.adv_per_name > 0.0))
    throw ConfigError("capacity.adv_per_name", "capacity.adv_per_name must be > 0");
  if (sweep_offsets.empty()) throw ConfigError("sweep.offsets", "sweep.offsets must not be empty");
  for (double o : sweep_offsets)
    if (!(o > -1.0)) throw ConfigError("sweep.offsets", "sweep.offsets must be > -1");
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& e : registry()) {
    if (!e.hashed) continue;
    if (auto v = e.get(*this)) out += std::string(e.key) + " = " + *v + "\n";
  }
  return out;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

std::uint64_t RunConfig::synthetic_seed() const {
  return data.synthetic_seed_set ? data.synthetic.seed : derive_seed(master_seed, "synthetic");
}

std::uint64_t RunConfig::trial_seed() const { return robustness.seed.value_or(derive_seed(master_seed, "trials")); }

std::uint64_t RunConfig::stress_seed() const { return derive_seed(master_seed, "stress"); }

ImpactModel RunConfig::impact_model() const {
  if (capacity.fit_exponent) return fit_impact_model(kImpactCalibrationPoints);
  if (!capacity.impact_coefficient) return fit_impact_model(kImpactCalibrationPoints, capacity.impact_exponent);
  return ImpactModel{*capacity.impact_coefficient, capacity.impact_exponent};
}

WalkForwardOptions RunConfig::walk_forward_options() const {
  WalkForwardOptions o;
  o.backtest.execution = execution;
  o.backtest.target_vol = scale.vol_cap;
  o.backtest.weights = portfolio;
  o.targets = scale;
  o.threads = threads;
  return o;
}

TrialConfig RunConfig::trial_config() const { return TrialConfig{robustness.n_trials, trial_seed(), robustness.mode}; }

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig c;
  try {
    c.apply(parse_config_text(ss.str()));
  } catch (const ConfigError& e) {
    throw ConfigError(e.key(), path.string() + ": " + e.what());
  }
  return c;
}

}  // namespace driftgate

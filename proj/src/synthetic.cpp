#include "driftgate/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "driftgate/rng.hpp"

namespace driftgate {

void SyntheticMarketConfig::validate() const {
  auto fail = [](const char* key, const char* what) {
    throw ConfigError(std::string("data.synthetic.") + key, std::string("data.synthetic.") + key + ": " + what);
  };
  if (n_stocks < 2) fail("n_stocks", "must be >= 2");
  if (n_days < 2) fail("n_days", "must be >= 2");
  if (!(base_vol >= 0.0)) fail("base_vol", "must be >= 0");
  if (!(drift_regime_fraction >= 0.0 && drift_regime_fraction <= 1.0))
    fail("drift_regime_fraction", "must lie in [0, 1]");
  if (!(drift_strength >= 0.0)) fail("drift_strength", "must be >= 0");
  if (!(reversal_strength >= 0.0)) fail("reversal_strength", "must be >= 0");
  if (!(regime_episode_length >= 1.0)) fail("regime_episode_length", "must be >= 1");
}

Date synthetic_start_date() {
  return Date{std::chrono::year{2004} / std::chrono::January / std::chrono::day{2}};
}

namespace {

std::vector<Date> weekday_calendar(Date start, int n) {
  std::vector<Date> out;
  out.reserve(static_cast<std::size_t>(n));
  Date d = start;
  while (static_cast<int>(out.size()) < n) {
    std::chrono::weekday wd{d};
    if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) out.push_back(d);
    d += std::chrono::days{1};
  }
  return out;
}

}  // namespace

SyntheticMarket generate_synthetic_market(const SyntheticMarketConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.n_stocks);
  const auto days = static_cast<std::size_t>(config.n_days);

  SyntheticMarket market;
  PricePanel& panel = market.panel;
  panel.calendar.dates = weekday_calendar(synthetic_start_date(), config.n_days);
  const int width = std::max(3, static_cast<int>(std::to_string(n - 1).size()));
  for (std::size_t j = 0; j < n; ++j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "S%0*zu", width, j);
    panel.tickers.emplace_back(buf);
  }
  panel.close = Matrix(days, n);
  panel.volume = Matrix(days, n);
  market.in_drift = Matrix(days, n, 0.0);

  Rng init_rng = make_rng(config.seed, "synthetic.init");
  Rng regime_rng = make_rng(config.seed, "synthetic.regime");
  Rng shock_rng = make_rng(config.seed, "synthetic.shock");
  Rng volume_rng = make_rng(config.seed, "synthetic.volume");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // Alternating renewal process with geometric episode lengths. Mean drift
  // episode = L, mean normal episode = L (1 - f) / f, so the long-run drift
  // share is f.
  const double f = config.drift_regime_fraction;
  const double len = config.regime_episode_length;
  const double exit_drift = 1.0 / len;
  const double exit_normal = f <= 0.0 ? 0.0 : (f >= 1.0 ? 1.0 : std::min(1.0, f / (len * (1.0 - f))));

  std::vector<double> price(n);
  std::vector<double> mean_volume(n);
  std::vector<char> drift(n);
  for (std::size_t j = 0; j < n; ++j) {
    price[j] = 50.0 * std::exp(0.6 * normal(init_rng));
    mean_volume[j] = 1.0e6 * std::exp(0.5 * normal(init_rng));
    drift[j] = unif(init_rng) < f ? 1 : 0;
  }

  constexpr double kVolumeSigma = 0.3;
  auto draw_volume = [&](std::size_t j) {
    return std::round(mean_volume[j] * std::exp(kVolumeSigma * normal(volume_rng) - 0.5 * kVolumeSigma * kVolumeSigma));
  };

  for (std::size_t j = 0; j < n; ++j) {
    panel.close(0, j) = price[j];
    panel.volume(0, j) = draw_volume(j);
    market.in_drift(0, j) = drift[j];
  }

  const std::size_t lb = kSyntheticReversalLookback;
  std::vector<double> trailing(n);
  for (std::size_t t = 1; t < days; ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      const double stay_exit = drift[j] ? exit_drift : exit_normal;
      if (unif(regime_rng) < stay_exit) drift[j] = static_cast<char>(!drift[j]);
    }

    // Trailing compounded return through t-1, demeaned across the universe.
    const bool have_trailing = t - 1 >= lb;
    double trailing_mean = 0.0;
    if (have_trailing) {
      for (std::size_t j = 0; j < n; ++j) {
        trailing[j] = panel.close(t - 1, j) / panel.close(t - 1 - lb, j) - 1.0;
        trailing_mean += trailing[j];
      }
      trailing_mean /= static_cast<double>(n);
    }

    for (std::size_t j = 0; j < n; ++j) {
      double r = config.base_vol * normal(shock_rng);
      if (drift[j]) {
        r += config.drift_strength;
        if (have_trailing) r += config.reversal_strength * -(trailing[j] - trailing_mean);
      }
      r = std::max(r, -0.95);
      price[j] *= 1.0 + r;
      panel.close(t, j) = price[j];
      panel.volume(t, j) = draw_volume(j);
      market.in_drift(t, j) = drift[j];
    }
  }
  return market;
}

PricePanel generate_synthetic(const SyntheticMarketConfig& config) {
  return generate_synthetic_market(config).panel;
}

}  // namespace driftgate

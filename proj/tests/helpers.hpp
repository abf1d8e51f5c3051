#pragma once

#include <filesystem>
#include <string>

#include <unistd.h>

#include "driftgate/synthetic.hpp"

namespace testing_util {

using namespace driftgate;

// Weekday calendar starting at 2004-01-02.
inline std::vector<Date> weekdays(std::size_t n, Date start = parse_date("2004-01-02")) {
  std::vector<Date> out;
  for (Date d = start; out.size() < n; d += std::chrono::days(1)) {
    const std::chrono::weekday wd{d};
    if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) out.push_back(d);
  }
  return out;
}

// Panel from a close matrix given column by column.
inline PricePanel make_panel(const std::vector<std::vector<double>>& closes_by_ticker) {
  PricePanel p;
  const std::size_t nd = closes_by_ticker.front().size();
  p.calendar.dates = weekdays(nd);
  for (std::size_t j = 0; j < closes_by_ticker.size(); ++j) p.tickers.push_back("T" + std::to_string(100 + j));
  p.close = Matrix(nd, closes_by_ticker.size());
  p.volume = Matrix(nd, closes_by_ticker.size());
  for (std::size_t j = 0; j < closes_by_ticker.size(); ++j)
    for (std::size_t t = 0; t < nd; ++t) p.close(t, j) = closes_by_ticker[j][t];
  return p;
}

inline PricePanel small_synthetic(std::uint64_t seed, int n_stocks = 30, int n_days = 600) {
  SyntheticMarketConfig c;
  c.n_stocks = n_stocks;
  c.n_days = n_days;
  c.seed = seed;
  return generate_synthetic(c);
}

// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("driftgate-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_util

#include "driftgate/validation.hpp"

namespace testing_util {

// Small walk-forward setup: two windows, 2y train / 1y test.
struct WalkForwardFixture {
  PricePanel panel;
  std::vector<WindowSpec> windows;

  explicit WalkForwardFixture(std::uint64_t seed, int n_stocks = 30) {
    SyntheticMarketConfig c;
    c.n_stocks = n_stocks;
    c.n_days = 1200;
    c.seed = seed;
    c.drift_strength = 0.012;
    c.reversal_strength = 0.1;
    panel = generate_synthetic(c);
    windows = make_windows(panel.calendar, 2, 1, {parse_date("2006-06-01"), parse_date("2007-06-01")});
  }
};

}  // namespace testing_util

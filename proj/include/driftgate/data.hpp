#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftgate/common.hpp"

namespace driftgate {

/// Strictly increasing list of trading dates. Whatever dates the source
/// contains define the calendar; there is no exchange-holiday logic.
struct TradingCalendar {
  std::vector<Date> dates;

  std::size_t size() const { return dates.size(); }
  std::optional<std::size_t> index_of(Date d) const;
  /// Number of dates strictly before d.
  std::size_t count_before(Date d) const;
  /// Number of dates at or before d.
  std::size_t count_through(Date d) const;
  void validate() const;
};

struct PricePanel {
  TradingCalendar calendar;
  std::vector<std::string> tickers;
  Matrix close;   // dates x tickers, NaN where not listed
  Matrix volume;  // dates x tickers, NaN where unknown
  std::map<std::string, std::string> sector;

  std::size_t n_dates() const { return calendar.size(); }
  std::size_t n_tickers() const { return tickers.size(); }
  bool has_volume() const;

  /// Throws DataError on: dimension mismatch, non-positive or non-finite
  /// closes, negative volumes, or interior gaps in a ticker's close history.
  void validate() const;
};

/// Simple daily returns; the first date of the source panel is dropped.
struct ReturnPanel {
  TradingCalendar calendar;
  std::vector<std::string> tickers;
  Matrix returns;
};

struct ColumnMapping {
  std::string date = "date";
  std::string ticker = "ticker";
  std::string close = "close";
  std::string volume = "volume";
  std::string sector = "sector";
  char delimiter = ',';
};

PricePanel load_panel(const std::filesystem::path& source, const ColumnMapping& schema = {});
/// `comment`, when given, is written as a leading "# " line; load_panel skips
/// such lines.
void save_panel(const PricePanel& panel, const std::filesystem::path& dest, char delimiter = ',',
                std::string_view comment = {});

ReturnPanel compute_returns(const PricePanel& panel);

}  // namespace driftgate

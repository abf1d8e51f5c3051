#include "driftgate/data.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace driftgate {

std::optional<std::size_t> TradingCalendar::index_of(Date d) const {
  auto it = std::lower_bound(dates.begin(), dates.end(), d);
  if (it == dates.end() || *it != d) return std::nullopt;
  return static_cast<std::size_t>(it - dates.begin());
}

std::size_t TradingCalendar::count_before(Date d) const {
  return static_cast<std::size_t>(std::lower_bound(dates.begin(), dates.end(), d) - dates.begin());
}

std::size_t TradingCalendar::count_through(Date d) const {
  return static_cast<std::size_t>(std::upper_bound(dates.begin(), dates.end(), d) - dates.begin());
}

void TradingCalendar::validate() const {
  for (std::size_t i = 1; i < dates.size(); ++i) {
    if (dates[i] <= dates[i - 1])
      throw DataError("calendar not strictly increasing at " + format_date(dates[i]));
  }
}

bool PricePanel::has_volume() const {
  return std::any_of(volume.data().begin(), volume.data().end(), [](double v) { return !is_missing(v); });
}

void PricePanel::validate() const {
  calendar.validate();
  const std::size_t nd = n_dates();
  const std::size_t nt = n_tickers();
  if (close.rows() != nd || close.cols() != nt)
    throw DataError("close matrix dimensions do not match calendar x tickers");
  if (volume.rows() != nd || volume.cols() != nt)
    throw DataError("volume matrix dimensions do not match calendar x tickers");

  for (std::size_t j = 0; j < nt; ++j) {
    std::optional<std::size_t> first;
    std::optional<std::size_t> last;
    for (std::size_t t = 0; t < nd; ++t) {
      const double c = close(t, j);
      if (!is_missing(c)) {
        if (!std::isfinite(c) || c <= 0.0)
          throw DataError("non-positive close " + format_double(c) + " at (" + format_date(calendar.dates[t]) +
                          ", " + tickers[j] + ")");
        if (!first) first = t;
        last = t;
      }
      const double v = volume(t, j);
      if (!is_missing(v) && (!std::isfinite(v) || v < 0.0))
        throw DataError("negative volume at (" + format_date(calendar.dates[t]) + ", " + tickers[j] + ")");
    }
    if (!first) continue;
    for (std::size_t t = *first; t <= *last; ++t) {
      if (is_missing(close(t, j))) {
        std::size_t end = t;
        while (is_missing(close(end, j))) ++end;
        throw DataError("interior missing close for " + tickers[j] + " from " + format_date(calendar.dates[t]) +
                        " to " + format_date(calendar.dates[end - 1]));
      }
    }
  }
}

namespace {

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct RawRow {
  Date date;
  std::string ticker;
  double close;
  double volume;
};

}  // namespace

PricePanel load_panel(const std::filesystem::path& source, const ColumnMapping& schema) {
  std::ifstream in(source);
  if (!in) throw DataError("cannot open panel file " + source.string());

  std::string line;
  std::size_t row_number = 1;
  // Leading '#' lines are comments (e.g. a config-hash header).
  bool got = false;
  while ((got = static_cast<bool>(std::getline(in, line))) && !line.empty() && line.front() == '#') ++row_number;
  if (!got) throw DataError("panel file " + source.string() + " is empty");
  auto header = split(line, schema.delimiter);
  auto find_col = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (trim(header[i]) == name) return i;
    return std::nullopt;
  };
  auto date_col = find_col(schema.date);
  auto ticker_col = find_col(schema.ticker);
  auto close_col = find_col(schema.close);
  if (!date_col || !ticker_col || !close_col)
    throw DataError("panel file " + source.string() + " must have columns '" + schema.date + "', '" +
                    schema.ticker + "', '" + schema.close + "'");
  auto volume_col = find_col(schema.volume);
  auto sector_col = find_col(schema.sector);

  std::vector<RawRow> rows;
  std::map<std::string, std::string> sector;
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) continue;
    auto fields = split(line, schema.delimiter);
    if (fields.size() != header.size())
      throw DataError("row " + std::to_string(row_number) + ": expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(fields.size()));
    RawRow r;
    try {
      r.date = parse_date(trim(fields[*date_col]));
      r.ticker = std::string(trim(fields[*ticker_col]));
      if (r.ticker.empty()) throw DataError("empty ticker");
      r.close = parse_double(trim(fields[*close_col]));
      r.volume = kMissing;
      if (volume_col) {
        auto v = trim(fields[*volume_col]);
        if (!v.empty()) r.volume = parse_double(v);
      }
    } catch (const DataError& e) {
      throw DataError("row " + std::to_string(row_number) + ": " + e.what());
    }
    if (!std::isfinite(r.close) || r.close <= 0.0)
      throw DataError("row " + std::to_string(row_number) + ": non-positive close " + format_double(r.close) +
                      " at (" + format_date(r.date) + ", " + r.ticker + ")");
    if (sector_col) {
      auto s = trim(fields[*sector_col]);
      if (!s.empty()) sector[r.ticker] = std::string(s);
    }
    rows.push_back(std::move(r));
  }

  std::set<Date> date_set;
  std::set<std::string> ticker_set;
  for (const auto& r : rows) {
    date_set.insert(r.date);
    ticker_set.insert(r.ticker);
  }

  PricePanel panel;
  panel.calendar.dates.assign(date_set.begin(), date_set.end());
  panel.tickers.assign(ticker_set.begin(), ticker_set.end());
  panel.close = Matrix(panel.n_dates(), panel.n_tickers());
  panel.volume = Matrix(panel.n_dates(), panel.n_tickers());
  panel.sector = std::move(sector);

  std::unordered_map<std::string, std::size_t> ticker_index;
  for (std::size_t j = 0; j < panel.tickers.size(); ++j) ticker_index.emplace(panel.tickers[j], j);
  for (const auto& r : rows) {
    const std::size_t t = *panel.calendar.index_of(r.date);
    const std::size_t j = ticker_index.at(r.ticker);
    if (!is_missing(panel.close(t, j)))
      throw DataError("duplicate row for (" + format_date(r.date) + ", " + r.ticker + ")");
    panel.close(t, j) = r.close;
    panel.volume(t, j) = r.volume;
  }
  panel.validate();
  return panel;
}

void save_panel(const PricePanel& panel, const std::filesystem::path& dest, char delimiter, std::string_view comment) {
  std::ofstream out(dest, std::ios::binary);
  if (!out) throw DataError("cannot write panel file " + dest.string());
  if (!comment.empty()) out << "# " << comment << '\n';
  const bool with_sector = !panel.sector.empty();
  out << "date" << delimiter << "ticker" << delimiter << "close" << delimiter << "volume";
  if (with_sector) out << delimiter << "sector";
  out << '\n';
  for (std::size_t t = 0; t < panel.n_dates(); ++t) {
    const std::string date = format_date(panel.calendar.dates[t]);
    for (std::size_t j = 0; j < panel.n_tickers(); ++j) {
      const double c = panel.close(t, j);
      if (is_missing(c)) continue;
      out << date << delimiter << panel.tickers[j] << delimiter << format_double(c) << delimiter
          << format_double(panel.volume(t, j));
      if (with_sector) {
        auto it = panel.sector.find(panel.tickers[j]);
        out << delimiter << (it == panel.sector.end() ? std::string{} : it->second);
      }
      out << '\n';
    }
  }
  if (!out) throw DataError("failed writing panel file " + dest.string());
}

ReturnPanel compute_returns(const PricePanel& panel) {
  if (panel.n_dates() < 2) throw DataError("at least 2 dates are required to compute returns");
  ReturnPanel out;
  out.calendar.dates.assign(panel.calendar.dates.begin() + 1, panel.calendar.dates.end());
  out.tickers = panel.tickers;
  out.returns = Matrix(panel.n_dates() - 1, panel.n_tickers());
  for (std::size_t t = 1; t < panel.n_dates(); ++t) {
    for (std::size_t j = 0; j < panel.n_tickers(); ++j) {
      const double prev = panel.close(t - 1, j);
      const double cur = panel.close(t, j);
      if (!is_missing(prev) && !is_missing(cur)) out.returns(t - 1, j) = cur / prev - 1.0;
    }
  }
  return out;
}

}  // namespace driftgate

#include <gtest/gtest.h>

#include <fstream>

#include "driftgate/data.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace driftgate;
using testing_util::TempDir;

namespace {

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST(LoadPanel, PivotsAndLeavesMissingCells) {
  TempDir dir("load");
  write(dir.path() / "p.csv", "date,ticker,close\n2020-01-02,A,10\n2020-01-03,A,11\n2020-01-02,B,5\n");
  auto p = load_panel(dir.path() / "p.csv");
  ASSERT_EQ(p.n_dates(), 2u);
  ASSERT_EQ(p.n_tickers(), 2u);
  EXPECT_EQ(p.tickers[0], "A");
  EXPECT_EQ(p.close(1, 0), 11.0);
  EXPECT_TRUE(is_missing(p.close(1, 1)));
}

TEST(LoadPanel, SortsDatesAndTickers) {
  TempDir dir("sort");
  write(dir.path() / "p.csv", "ticker,close,date\nZ,1,2020-01-03\nA,2,2020-01-03\nZ,3,2020-01-02\nA,4,2020-01-02\n");
  auto p = load_panel(dir.path() / "p.csv");
  EXPECT_EQ(p.tickers, (std::vector<std::string>{"A", "Z"}));
  EXPECT_EQ(format_date(p.calendar.dates[0]), "2020-01-02");
  EXPECT_EQ(p.close(0, 1), 3.0);
}

TEST(LoadPanel, NegativeCloseNamesDateAndTicker) {
  TempDir dir("neg");
  write(dir.path() / "p.csv", "date,ticker,close\n2020-01-02,A,10\n2020-01-03,A,-1\n");
  try {
    load_panel(dir.path() / "p.csv");
    FAIL();
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("2020-01-03"), std::string::npos);
    EXPECT_NE(what.find("A"), std::string::npos);
  }
}

TEST(LoadPanel, MalformedRowNamesRowNumber) {
  TempDir dir("bad");
  write(dir.path() / "p.csv", "date,ticker,close\n2020-01-02,A,10\n2020-01-03,A\n");
  try {
    load_panel(dir.path() / "p.csv");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
  }
}

TEST(LoadPanel, InteriorGapRejected) {
  TempDir dir("gap");
  write(dir.path() / "p.csv",
        "date,ticker,close\n2020-01-02,A,10\n2020-01-03,A,11\n2020-01-06,A,12\n2020-01-02,B,5\n2020-01-06,B,6\n");
  EXPECT_THROW(load_panel(dir.path() / "p.csv"), DataError);
}

TEST(LoadPanel, MissingRequiredColumn) {
  TempDir dir("col");
  write(dir.path() / "p.csv", "date,ticker,price\n2020-01-02,A,10\n");
  EXPECT_THROW(load_panel(dir.path() / "p.csv"), DataError);
}

TEST(LoadPanel, CustomSchemaAndDelimiter) {
  TempDir dir("schema");
  write(dir.path() / "p.txt", "Day;Sym;Px;Vol\n2020-01-02;A;10;100\n2020-01-03;A;11;200\n");
  ColumnMapping m;
  m.date = "Day";
  m.ticker = "Sym";
  m.close = "Px";
  m.volume = "Vol";
  m.delimiter = ';';
  auto p = load_panel(dir.path() / "p.txt", m);
  EXPECT_EQ(p.close(1, 0), 11.0);
  EXPECT_EQ(p.volume(1, 0), 200.0);
}

TEST(LoadPanel, RoundTripIsBitIdentical) {
  TempDir dir("rt");
  auto p = testing_util::small_synthetic(3, 25, 300);
  save_panel(p, dir.path() / "a.csv");
  auto q = load_panel(dir.path() / "a.csv");
  EXPECT_EQ(q.calendar.dates, p.calendar.dates);
  EXPECT_EQ(q.tickers, p.tickers);
  EXPECT_TRUE(q.close == p.close);
  EXPECT_TRUE(q.volume == p.volume);
  save_panel(q, dir.path() / "b.csv");
  std::ifstream a(dir.path() / "a.csv"), b(dir.path() / "b.csv");
  std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);
}

TEST(LoadPanel, SkipsCommentHeader) {
  TempDir dir("comment");
  auto p = testing_util::small_synthetic(4, 5, 80);
  save_panel(p, dir.path() / "a.csv", ',', "config-hash: abc");
  auto q = load_panel(dir.path() / "a.csv");
  EXPECT_TRUE(q.close == p.close);
}

TEST(ComputeReturns, Arithmetic) {
  auto p = testing_util::make_panel({{100, 110, 99}, {50, 50, 50}});
  auto r = compute_returns(p);
  ASSERT_EQ(r.returns.rows(), 2u);
  EXPECT_NEAR(r.returns(0, 0), 0.10, 1e-15);
  EXPECT_NEAR(r.returns(1, 0), -0.10, 1e-15);
  EXPECT_EQ(r.returns(0, 1), 0.0);
  EXPECT_EQ(r.returns(1, 1), 0.0);
  EXPECT_EQ(r.calendar.dates.front(), p.calendar.dates[1]);
}

TEST(ComputeReturns, MissingPreviousCloseGivesMissing) {
  auto p = testing_util::make_panel({{oracle::nan(), 10, 11}});
  auto r = compute_returns(p);
  EXPECT_TRUE(is_missing(r.returns(0, 0)));
  EXPECT_NEAR(r.returns(1, 0), 0.1, 1e-15);
}

TEST(ComputeReturns, NeedsTwoDates) {
  auto p = testing_util::make_panel({{10}});
  EXPECT_THROW(compute_returns(p), DataError);
}

TEST(ComputeReturns, InvariantToPerTickerPriceScale) {
  auto p = testing_util::small_synthetic(11, 10, 200);
  auto q = p;
  for (std::size_t j = 0; j < q.n_tickers(); ++j)
    for (std::size_t t = 0; t < q.n_dates(); ++t) q.close(t, j) *= 4.0 * (j + 1);
  auto a = compute_returns(p), b = compute_returns(q);
  for (std::size_t i = 0; i < a.returns.data().size(); ++i)
    EXPECT_NEAR(a.returns.data()[i], b.returns.data()[i], 1e-13);
}

TEST(Synthetic, SameSeedBitIdenticalDifferentSeedDiffers) {
  auto a = testing_util::small_synthetic(5, 20, 300);
  auto b = testing_util::small_synthetic(5, 20, 300);
  auto c = testing_util::small_synthetic(6, 20, 300);
  EXPECT_TRUE(a.close == b.close);
  EXPECT_TRUE(a.volume == b.volume);
  EXPECT_FALSE(a.close == c.close);
}

TEST(Synthetic, NoEffectUpFractionCentredAtHalf) {
  SyntheticMarketConfig c;
  c.n_stocks = 100;
  c.n_days = 1100;
  c.seed = 9;
  c.drift_strength = 0.0;
  c.reversal_strength = 0.0;
  auto p = generate_synthetic(c);
  double sum = 0, n = 0;
  for (std::size_t t = 64; t < p.n_dates(); ++t)
    for (std::size_t j = 0; j < p.n_tickers(); ++j) {
      sum += oracle::up_fraction(p, t, j, 63);
      ++n;
    }
  ASSERT_GE(n, 100000);
  EXPECT_NEAR(sum / n, 0.5, 0.02);
}

TEST(Synthetic, DriftFractionGivesRegimeFractionInBand) {
  SyntheticMarketConfig c;
  c.n_stocks = 100;
  c.n_days = 1100;
  c.seed = 10;
  c.drift_regime_fraction = 0.35;
  auto p = generate_synthetic(c);
  double on = 0, n = 0;
  for (std::size_t t = 64; t < p.n_dates(); ++t)
    for (std::size_t j = 0; j < p.n_tickers(); ++j) {
      on += oracle::up_fraction(p, t, j, 63) > 0.60;
      ++n;
    }
  EXPECT_GE(on / n, 0.15);
  EXPECT_LE(on / n, 0.55);
}

TEST(Synthetic, RejectsInvalidConfig) {
  SyntheticMarketConfig c;
  c.drift_regime_fraction = 1.5;
  EXPECT_THROW(generate_synthetic(c), ConfigError);
  c = {};
  c.reversal_strength = -1;
  EXPECT_THROW(generate_synthetic(c), ConfigError);
}

TEST(Synthetic, DriftStateTracksTargetFraction) {
  SyntheticMarketConfig c;
  c.n_stocks = 200;
  c.n_days = 2000;
  c.seed = 12;
  auto m = generate_synthetic_market(c);
  double s = 0;
  for (double v : m.in_drift.data()) s += v;
  EXPECT_NEAR(s / m.in_drift.data().size(), 0.35, 0.05);
}

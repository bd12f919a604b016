#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "careertrace/error.hpp"
#include "careertrace/stocks.hpp"
#include "careertrace/synth.hpp"
#include "test_support.hpp"

using namespace careertrace;
using testing_support::eu28_scheme;

namespace {

constexpr RegionId CHN = 0, USA = 1, EU28 = 2;

CareerTimeline at_years(std::initializer_list<std::pair<int, RegionId>> steps) {
  CareerTimeline t;
  for (auto [year, region] : steps) {
    YearPosition p;
    p.year = year;
    p.dominant = region;
    p.weights = {{region, 1.0}};
    t.positions.push_back(p);
  }
  t.origin = t.positions.front().dominant;
  return t;
}

AuthorMobility mobility_of(const CareerTimeline& t) {
  static const RegionScheme scheme = eu28_scheme();
  AuthorMobility m;
  m.moves = detect_moves(t);
  m.states = classify(t, m.moves, CHN, scheme);
  return m;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::Io;
}

}  // namespace

TEST(ActivityStatus, InteriorGapIsFilled) {
  auto t = at_years({{2010, CHN}, {2013, CHN}});
  EXPECT_EQ(activity_status(t, 2010, 2020), Activity::Active);
  EXPECT_EQ(activity_status(t, 2011, 2020), Activity::GapFilled);
  EXPECT_EQ(activity_status(t, 2012, 2020), Activity::GapFilled);
  EXPECT_EQ(activity_status(t, 2013, 2020), Activity::Active);
}

TEST(ActivityStatus, TrailingGraceTable) {
  auto t = at_years({{2012, CHN}, {2014, CHN}});
  const std::map<int, Activity> expected{{2014, Activity::Active},
                                         {2015, Activity::GapFilled},
                                         {2016, Activity::GapFilled},
                                         {2017, Activity::Retired},
                                         {2018, Activity::Retired}};
  for (auto [year, status] : expected) EXPECT_EQ(activity_status(t, year, 2018), status) << year;
}

TEST(ActivityStatus, GraceBoundaryExhaustive) {
  for (int last = 2000; last <= 2010; ++last) {
    for (int grace = 0; grace <= 4; ++grace) {
      auto t = at_years({{1999, USA}, {last, USA}});
      const int end = 2020;
      for (int year = last; year <= end; ++year) {
        const Activity expected = year == last                 ? Activity::Active
                                  : year <= last + grace ? Activity::GapFilled
                                                         : Activity::Retired;
        EXPECT_EQ(activity_status(t, year, end, grace), expected) << last << " " << grace << " " << year;
      }
    }
  }
}

TEST(ActivityStatus, PositionsAfterHorizonAreIgnored) {
  auto t = at_years({{2010, CHN}, {2020, CHN}});
  EXPECT_EQ(activity_status(t, 2012, 2015), Activity::GapFilled);
  EXPECT_EQ(activity_status(t, 2013, 2015), Activity::Retired);
}

TEST(ActivityStatus, Errors) {
  auto t = at_years({{2010, CHN}});
  EXPECT_EQ(code_of([&] { activity_status(t, 2009, 2020); }), Errc::BeforeCareer);
  EXPECT_EQ(code_of([&] { activity_status(t, 2021, 2020); }), Errc::AfterHorizon);
}

TEST(StockTable, SingleOverseasEntry) {
  auto t = at_years({{2008, CHN}, {2010, USA}, {2012, USA}});
  std::vector<CareerTimeline> timelines{t};
  std::vector<AuthorMobility> mobility{mobility_of(t)};
  auto cells = stock_table(timelines, mobility, {2010, 2012}, {2014, 2, false, 1});
  const auto overseas = MobilityClass::overseas(CHN, USA);
  EXPECT_EQ(cells, (std::vector<StockCell>{{overseas, 2010, 0, 1}, {overseas, 2011, 1, 0}, {overseas, 2012, 1, 0}}));
}

TEST(StockTable, EmptyInputGivesEmptyTable) {
  EXPECT_TRUE(stock_table({}, {}, {2000, 2010}, {2010, 2, false, 1}).empty());
}

TEST(StockTable, ReturneeRetiresAfterGrace) {
  auto t = at_years({{2010, CHN}, {2012, USA}, {2014, CHN}});
  std::vector<CareerTimeline> timelines{t};
  std::vector<AuthorMobility> mobility{mobility_of(t)};
  auto cells = stock_table(timelines, mobility, {2014, 2018}, {2018, 2, false, 1});
  const auto returnee = MobilityClass::returnee(CHN, USA);
  EXPECT_EQ(cells, (std::vector<StockCell>{{returnee, 2014, 0, 1}, {returnee, 2015, 1, 0}, {returnee, 2016, 1, 0}}));
}

TEST(StockTable, GapYearsCarryTheLastClass) {
  auto t = at_years({{2005, CHN}, {2007, USA}, {2011, CHN}});
  std::vector<CareerTimeline> timelines{t};
  std::vector<AuthorMobility> mobility{mobility_of(t)};
  auto cells = stock_table(timelines, mobility, {2005, 2011}, {2011, 2, false, 1});
  std::map<int, MobilityClass> by_year;
  for (const auto& c : cells) {
    EXPECT_EQ(c.total(), 1);
    EXPECT_TRUE(by_year.emplace(c.year, c.cls).second);
  }
  ASSERT_EQ(by_year.size(), 7u);
  EXPECT_EQ(by_year[2006], MobilityClass::domestic(CHN));
  for (int y = 2007; y <= 2010; ++y) EXPECT_EQ(by_year[y], MobilityClass::overseas(CHN, USA));
  EXPECT_EQ(by_year[2011], MobilityClass::returnee(CHN, USA));
}

TEST(StockTable, AmbiguousOriginExclusion) {
  auto t = at_years({{2010, CHN}});
  t.origin_ambiguous = true;
  std::vector<CareerTimeline> timelines{t};
  std::vector<AuthorMobility> mobility{mobility_of(t)};
  EXPECT_EQ(stock_table(timelines, mobility, {2010, 2010}, {2010, 2, false, 1}).size(), 1u);
  EXPECT_TRUE(stock_table(timelines, mobility, {2010, 2010}, {2010, 2, true, 1}).empty());
}

TEST(StockTable, FlowConservationOnSyntheticScenarios) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto generated = generate(testing_support::small_scenario(seed, 120, 15));
    const auto& corpus = generated.corpus;
    auto timelines = build_timelines(corpus);
    auto mobility = analyze_mobility(timelines, corpus.scheme(), {CHN, HostAttribution::Latest, 1});
    const int first = 2000, last = 2014;
    auto cells = stock_table(timelines, mobility, {first, last}, {last, 2, false, 2});

    std::map<std::pair<MobilityClass, int>, StockCell> table;
    for (const auto& c : cells) table[{c.cls, c.year}] = c;
    auto total = [&](const MobilityClass& cls, int year) {
      auto it = table.find({cls, year});
      return it == table.end() ? std::int64_t{0} : it->second.total();
    };

    // departures and retirements per (class, year), traced author by author
    std::map<std::pair<MobilityClass, int>, std::int64_t> leaving;
    for (std::size_t a = 0; a < timelines.size(); ++a) {
      const auto& t = timelines[a];
      for (int year = std::max(first + 1, t.first_year() + 1); year <= last; ++year) {
        if (activity_status(t, year - 1, last) == Activity::Retired) break;
        const auto& before = state_at(mobility[a].states, year - 1)->cls;
        const bool retired = activity_status(t, year, last) == Activity::Retired;
        if (retired || state_at(mobility[a].states, year)->cls != before) ++leaving[{before, year}];
      }
    }

    std::set<MobilityClass> classes;
    for (const auto& c : cells) classes.insert(c.cls);
    for (const auto& cls : classes) {
      for (int year = first + 1; year <= last; ++year) {
        auto it = table.find({cls, year});
        const std::int64_t fresh = it == table.end() ? 0 : it->second.new_movement;
        const std::int64_t gone = leaving.count({cls, year}) ? leaving[{cls, year}] : 0;
        EXPECT_EQ(total(cls, year), total(cls, year - 1) - gone + fresh) << seed << " " << year;
      }
    }
  }
}

TEST(StockTable, ThreadCountDoesNotChangeCells) {
  auto generated = generate(testing_support::small_scenario(9, 150, 12));
  auto timelines = build_timelines(generated.corpus);
  auto mobility = analyze_mobility(timelines, generated.corpus.scheme(), {CHN, HostAttribution::Latest, 1});
  auto a = stock_table(timelines, mobility, {2000, 2011}, {2011, 2, false, 1});
  auto b = stock_table(timelines, mobility, {2000, 2011}, {2011, 2, false, 3});
  EXPECT_EQ(a, b);
}

TEST(ReturnRatio, Examples) {
  const auto ov_usa = MobilityClass::overseas(CHN, USA);
  const auto re_usa = MobilityClass::returnee(CHN, USA);
  const auto ov_eu = MobilityClass::overseas(CHN, EU28);
  const auto re_eu = MobilityClass::returnee(CHN, EU28);
  std::vector<StockCell> cells{{ov_usa, 2017, 10, 4}, {re_usa, 2017, 6, 4}, {ov_eu, 2017, 5, 4},
                               {re_eu, 2017, 10, 0}, {re_eu, 2018, 5, 0}};
  EXPECT_DOUBLE_EQ(return_ratio(cells, CHN, USA, 2017).value, 1.4);
  EXPECT_DOUBLE_EQ(return_ratio(cells, CHN, EU28, 2017).value, 0.9);
  EXPECT_EQ(return_ratio(cells, CHN, EU28, 2018).value, 0.0);
  cells.push_back({ov_usa, 2019, 3, 0});
  auto inf = return_ratio(cells, CHN, USA, 2019);
  EXPECT_TRUE(inf.infinite);
  EXPECT_TRUE(std::isinf(inf.value));
  EXPECT_EQ(code_of([&] { return_ratio(cells, CHN, USA, 2030); }), Errc::UndefinedRatio);
}

TEST(ReturnRatio, PublishedStocks2017) {
  // overseas and returnee stocks, preceding + new movement, in 2017
  const auto ov_usa = MobilityClass::overseas(CHN, USA);
  const auto re_usa = MobilityClass::returnee(CHN, USA);
  const auto ov_eu = MobilityClass::overseas(CHN, EU28);
  const auto re_eu = MobilityClass::returnee(CHN, EU28);
  std::vector<StockCell> cells{{ov_usa, 2017, 9321, 4453}, {re_usa, 2017, 5058, 4569},
                               {ov_eu, 2017, 2957, 1905}, {re_eu, 2017, 2889, 2371}};
  EXPECT_NEAR(return_ratio(cells, CHN, USA, 2017).value, 1.43, 0.005);
  EXPECT_NEAR(return_ratio(cells, CHN, EU28, 2017).value, 0.92, 0.005);
}

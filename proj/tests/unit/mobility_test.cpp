#include <gtest/gtest.h>

#include <random>

#include "careertrace/error.hpp"
#include "careertrace/mobility.hpp"
#include "careertrace/synth.hpp"
#include "careertrace/timeline.hpp"
#include "test_support.hpp"

using namespace careertrace;
using testing_support::corpus_from;
using testing_support::eu28_scheme;
using testing_support::solo;

namespace {

constexpr RegionId CHN = 0, USA = 1, EU28 = 2, OTHER = 3;

/// Timeline with one single-region position per (year, region).
CareerTimeline sequence(std::initializer_list<std::pair<int, RegionId>> steps) {
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

std::vector<MobilityState> states_of(const CareerTimeline& t, HostAttribution attribution = HostAttribution::Latest) {
  static const RegionScheme scheme = eu28_scheme();
  auto moves = detect_moves(t);
  return classify(t, moves, CHN, scheme, attribution);
}

}  // namespace

TEST(DetectMoves, ReturnAfterLongStay) {
  auto moves = detect_moves(sequence({{2005, CHN}, {2007, USA}, {2014, CHN}}));
  EXPECT_EQ(moves, (std::vector<MoveEvent>{{0, CHN, USA, 2007}, {0, USA, CHN, 2014}}));
}

TEST(DetectMoves, ChainRegistersOnlyAdjacentTransitions) {
  auto moves = detect_moves(sequence({{2006, USA}, {2009, EU28}, {2012, CHN}}));
  EXPECT_EQ(moves, (std::vector<MoveEvent>{{0, USA, EU28, 2009}, {0, EU28, CHN, 2012}}));
}

TEST(DetectMoves, NoRegionChangeNoMoves) {
  EXPECT_TRUE(detect_moves(sequence({{2005, CHN}, {2006, CHN}, {2010, CHN}})).empty());
}

TEST(DetectMoves, CountMatchesDominantChangesOnRandomSequences) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    CareerTimeline t;
    const int n = 1 + static_cast<int>(rng() % 12);
    int year = 2000;
    std::size_t changes = 0;
    for (int i = 0; i < n; ++i) {
      YearPosition p;
      p.year = year;
      year += 1 + static_cast<int>(rng() % 3);
      p.dominant = static_cast<RegionId>(rng() % 4);
      p.weights = {{p.dominant, 1.0}};
      if (i > 0 && p.dominant != t.positions.back().dominant) ++changes;
      t.positions.push_back(p);
    }
    auto moves = detect_moves(t);
    ASSERT_EQ(moves.size(), changes);
    for (const auto& m : moves) {
      EXPECT_NE(m.from, m.to);
      const auto* at = t.at(m.year);
      ASSERT_NE(at, nullptr);
      EXPECT_EQ(at->dominant, m.to);
    }
  }
}

TEST(Classify, ReturneeAfterStayInUsa) {
  auto states = states_of(sequence({{2005, CHN}, {2007, USA}, {2014, CHN}}));
  ASSERT_EQ(states.size(), 3u);
  EXPECT_EQ(states[0].cls, MobilityClass::domestic(CHN));
  EXPECT_EQ(states[0].since_year, 2005);
  EXPECT_EQ(states[1].cls, MobilityClass::overseas(CHN, USA));
  EXPECT_EQ(states[1].since_year, 2007);
  EXPECT_EQ(states[2].cls, MobilityClass::returnee(CHN, USA));
  EXPECT_EQ(states[2].since_year, 2014);
}

TEST(Classify, RepeatedCyclesKeepReturneeStatus) {
  auto states = states_of(sequence({{2005, CHN}, {2008, EU28}, {2010, CHN}, {2012, EU28}, {2015, CHN}}));
  ASSERT_EQ(states.size(), 5u);
  EXPECT_EQ(states[1].cls, MobilityClass::overseas(CHN, EU28));
  EXPECT_EQ(states[2].cls, MobilityClass::returnee(CHN, EU28));
  EXPECT_EQ(states[3].cls, MobilityClass::returnee_abroad(CHN, EU28));
  EXPECT_EQ(states[4].cls, MobilityClass::returnee(CHN, EU28));
  EXPECT_EQ(states[4].since_year, 2015);
}

TEST(Classify, SinglePositionIsDomestic) {
  auto states = states_of(sequence({{2005, CHN}}));
  ASSERT_EQ(states.size(), 1u);
  EXPECT_EQ(states[0].cls, MobilityClass::domestic(CHN));
}

TEST(Classify, ForeignOriginMovingHomeIsReturnee) {
  auto states = states_of(sequence({{2006, USA}, {2009, EU28}, {2012, CHN}}));
  EXPECT_EQ(states[0].cls, MobilityClass::domestic(USA));
  EXPECT_EQ(states[1].cls, MobilityClass::overseas(USA, EU28));
  EXPECT_EQ(states[2].cls, MobilityClass::returnee(CHN, EU28));
}

TEST(Classify, HostAttributionFirstVersusLatest) {
  auto t = sequence({{2005, CHN}, {2007, USA}, {2009, CHN}, {2011, EU28}, {2013, CHN}});
  auto latest = states_of(t, HostAttribution::Latest);
  auto first = states_of(t, HostAttribution::First);
  EXPECT_EQ(latest[4].cls, MobilityClass::returnee(CHN, EU28));
  EXPECT_EQ(first[4].cls, MobilityClass::returnee(CHN, USA));
  EXPECT_EQ(latest[2].cls, first[2].cls);
}

TEST(Classify, UnknownHomeThrows) {
  auto scheme = eu28_scheme();
  auto t = sequence({{2005, CHN}});
  try {
    classify(t, detect_moves(t), static_cast<RegionId>(scheme.size()), scheme);
    FAIL() << "expected HomeMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::HomeMismatch);
  }
}

TEST(Classify, ReturneeStatusIsNeverLost) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    CareerTimeline t;
    int year = 2000;
    for (int i = 0; i < 10; ++i) {
      YearPosition p;
      p.year = year++;
      p.dominant = static_cast<RegionId>(rng() % 4);
      p.weights = {{p.dominant, 1.0}};
      t.positions.push_back(p);
    }
    t.origin = t.positions.front().dominant;
    auto states = states_of(t);
    ASSERT_EQ(states.size(), t.positions.size());
    bool returned = false;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const auto kind = states[i].cls.kind;
      const bool returnee = kind == ClassKind::ReturneeResident || kind == ClassKind::ReturneeAbroad;
      if (returned) EXPECT_TRUE(returnee);
      returned = returned || returnee;
      if (kind == ClassKind::ReturneeResident) EXPECT_EQ(t.positions[i].dominant, CHN);
      if (kind == ClassKind::ReturneeAbroad) EXPECT_NE(t.positions[i].dominant, CHN);
      EXPECT_EQ(states[i].cls.location(), t.positions[i].dominant);
      if (i > 0 && states[i].cls == states[i - 1].cls) EXPECT_EQ(states[i].since_year, states[i - 1].since_year);
      if (i > 0 && states[i].cls != states[i - 1].cls) EXPECT_EQ(states[i].since_year, states[i].year);
    }
  }
}

TEST(ClassOfPublication, AttributionFollowsLocation) {
  auto scheme = eu28_scheme();
  auto corpus = corpus_from(solo("p05", 2005, "a1", "CHN") + solo("p08", 2008, "a1", "DEU") +
                                solo("p10", 2010, "a1", "CHN") + solo("p12", 2012, "a1", "FRA") +
                                solo("p15", 2015, "a1", "CHN") + solo("q10", 2010, "d1", "CHN") +
                                solo("q11", 2011, "d1", "CHN"),
                            scheme);
  auto timelines = build_timelines(corpus);
  auto mobility = analyze_mobility(timelines, scheme, {CHN, HostAttribution::Latest, 1});
  const AuthorId a1 = *corpus.find_author("a1");
  const AuthorId d1 = *corpus.find_author("d1");
  auto cls = [&](const char* pub, AuthorId who) {
    const auto& record = corpus.records()[*corpus.find_record(pub)];
    return class_of_publication(record, who, mobility[who].states);
  };
  EXPECT_EQ(cls("p10", a1), MobilityClass::returnee(CHN, EU28));
  EXPECT_EQ(cls("p12", a1), MobilityClass::overseas(CHN, EU28));
  EXPECT_EQ(cls("p15", a1), MobilityClass::returnee(CHN, EU28));
  EXPECT_EQ(cls("q10", d1), MobilityClass::domestic(CHN));

  try {
    class_of_publication(corpus.records()[*corpus.find_record("q11")], a1, mobility[a1].states);
    FAIL() << "expected NoStateForYear";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoStateForYear);
  }
}

TEST(FormatClass, RoundTrips) {
  auto scheme = eu28_scheme();
  const MobilityClass classes[] = {MobilityClass::domestic(OTHER), MobilityClass::overseas(CHN, USA),
                                   MobilityClass::returnee(CHN, EU28), MobilityClass::returnee_abroad(CHN, USA)};
  EXPECT_EQ(format_class(classes[0], scheme), "Domestic(OTHER)");
  EXPECT_EQ(format_class(classes[1], scheme), "Overseas(CHN,USA)");
  EXPECT_EQ(format_class(classes[2], scheme), "ReturneeResident(CHN,EU28)");
  EXPECT_EQ(format_class(classes[3], scheme), "ReturneeAbroad(CHN,USA)");
  for (const auto& c : classes) EXPECT_EQ(parse_class(format_class(c, scheme), scheme), c);
  for (const char* bad : {"", "Domestic", "Domestic(XXX)", "Overseas(CHN)", "Domestic(CHN", "Returnee(CHN,USA)"}) {
    EXPECT_THROW(parse_class(bad, scheme), Error) << bad;
  }
}

TEST(AnalyzeMobility, ThreadCountDoesNotChangeResults) {
  auto generated = generate(testing_support::small_scenario(5, 80, 15));
  auto timelines = build_timelines(generated.corpus);
  const auto& scheme = generated.corpus.scheme();
  auto one = analyze_mobility(timelines, scheme, {CHN, HostAttribution::Latest, 1});
  auto four = analyze_mobility(timelines, scheme, {CHN, HostAttribution::Latest, 4});
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].moves, four[i].moves);
    EXPECT_EQ(one[i].states, four[i].states);
  }
}

TEST(ReturneeOrigins, CountsEachReturneeOnceUnderLatestHost) {
  auto scheme = eu28_scheme();
  std::vector<CareerTimeline> timelines{
      sequence({{2005, CHN}, {2007, USA}, {2014, CHN}}),
      sequence({{2006, USA}, {2009, CHN}, {2011, EU28}, {2013, CHN}}),
      sequence({{2006, USA}, {2010, CHN}}),
      sequence({{2005, CHN}, {2008, USA}}),
  };
  auto mobility = analyze_mobility(timelines, scheme, {CHN, HostAttribution::Latest, 1});
  EXPECT_EQ(returnee_origins(mobility), (std::vector<OriginCount>{{CHN, MobilityClass::returnee(CHN, USA), 1},
                                                                  {USA, MobilityClass::returnee(CHN, USA), 1},
                                                                  {USA, MobilityClass::returnee(CHN, EU28), 1}}));
}

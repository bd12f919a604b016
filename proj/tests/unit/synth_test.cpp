#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "careertrace/error.hpp"
#include "careertrace/indicators.hpp"
#include "careertrace/synth.hpp"
#include "test_support.hpp"

using namespace careertrace;
using testing_support::dump;
using testing_support::small_scenario;

namespace {

constexpr RegionId CHN = 0, USA = 1, EU28 = 2;

using MoveKey = std::tuple<std::string, RegionId, RegionId, int>;

std::set<MoveKey> true_moves(const GroundTruth& truth) {
  std::set<MoveKey> out;
  for (const auto& a : truth.authors) {
    for (const auto& m : a.moves) out.insert({a.id, m.from, m.to, m.year});
  }
  return out;
}

std::set<MoveKey> detected_moves(const Corpus& corpus) {
  std::set<MoveKey> out;
  for (const auto& t : build_timelines(corpus)) {
    for (const auto& m : detect_moves(t)) out.insert({std::string(corpus.author_name(t.author)), m.from, m.to, m.year});
  }
  return out;
}

double recall(const std::set<MoveKey>& truth, const std::set<MoveKey>& found) {
  if (truth.empty()) return 1.0;
  std::size_t hit = 0;
  for (const auto& m : truth) hit += found.count(m);
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

ScenarioConfig noise_free(std::uint64_t seed, std::size_t authors, int years) {
  auto config = small_scenario(seed, authors, years);
  config.pub_probability = 1.0;
  config.multi_affiliation_probability = 0.0;
  return config;
}

}  // namespace

TEST(Generate, ZeroAuthorsGivesEmptyCorpus) {
  auto config = small_scenario(1);
  config.n_authors = 0;
  auto result = generate(config);
  EXPECT_TRUE(result.corpus.records().empty());
  EXPECT_TRUE(result.truth.authors.empty());
}

TEST(Generate, SameSeedSameOutput) {
  auto a = generate(small_scenario(42));
  auto b = generate(small_scenario(42));
  auto c = generate(small_scenario(43));
  EXPECT_EQ(dump(a.corpus), dump(b.corpus));
  EXPECT_NE(dump(a.corpus), dump(c.corpus));
  std::ostringstream ta, tb;
  write_truth(ta, a.truth, a.corpus.scheme());
  write_truth(tb, b.truth, b.corpus.scheme());
  EXPECT_EQ(ta.str(), tb.str());
}

TEST(Generate, InvalidConfigListsEveryProblem) {
  auto config = small_scenario(1);
  config.pub_probability = 1.5;
  config.exit_hazard = -0.1;
  config.home = "XYZ";
  try {
    generate(config);
    FAIL() << "expected InvalidConfig";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidConfig);
    const std::string what = e.what();
    EXPECT_NE(what.find("pub_probability"), std::string::npos);
    EXPECT_NE(what.find("exit_hazard"), std::string::npos);
    EXPECT_NE(what.find("home"), std::string::npos);
  }
}

TEST(Generate, ConfigFileRoundTrip) {
  const std::string text = R"({
    "seed": 5, "n_authors": 30, "year_min": 2001, "year_max": 2008, "home": "CHN",
    "scheme_file": "eu28.scheme.json",
    "origin_weights": {"CHN": 0.5, "USA": 0.5},
    "move_hazard": {"CHN": {"USA": 0.2}, "USA": {"CHN": 0.1}},
    "fields": [{"code": "F1", "citation_mean": 4.0}]
  })";
  auto config = parse_scenario_config(text, CAREERTRACE_DATA_DIR);
  EXPECT_EQ(config.seed, 5u);
  EXPECT_EQ(config.n_authors, 30u);
  EXPECT_EQ(config.year_min, 2001);
  ASSERT_TRUE(config.scheme.has_value());
  EXPECT_EQ(config.move_hazard.at("CHN").at("USA"), 0.2);
  auto result = generate(config);
  for (const auto& r : result.corpus.records()) {
    EXPECT_GE(r.year, 2001);
    EXPECT_LE(r.year, 2008);
  }
  EXPECT_THROW(parse_scenario_config(R"({"unknown": 1})", CAREERTRACE_DATA_DIR), Error);
}

TEST(Generate, TruthClassesCoverEveryActiveYear) {
  auto result = generate(noise_free(3, 80, 12));
  for (const auto& a : result.truth.authors) {
    ASSERT_FALSE(a.classes.empty());
    EXPECT_EQ(a.classes.front().first, a.start_year);
    for (std::size_t i = 1; i < a.classes.size(); ++i) EXPECT_EQ(a.classes[i].first, a.classes[i - 1].first + 1);
    if (a.retirement_year) EXPECT_EQ(a.classes.back().first, *a.retirement_year);
  }
}

TEST(Generate, NoiseFreeMovesAreRecoveredExactly) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto result = generate(noise_free(seed, 200, 15));
    auto truth = true_moves(result.truth);
    EXPECT_FALSE(truth.empty());
    EXPECT_EQ(detected_moves(result.corpus), truth);
  }
}

TEST(Generate, NoiseFreeClassesAreRecoveredExactly) {
  auto result = generate(noise_free(7, 200, 15));
  const auto& corpus = result.corpus;
  auto timelines = build_timelines(corpus);
  auto mobility = analyze_mobility(timelines, corpus.scheme(), {CHN, HostAttribution::Latest, 1});
  for (const auto& a : result.truth.authors) {
    const AuthorId id = *corpus.find_author(a.id);
    ASSERT_EQ(mobility[id].states.size(), a.classes.size());
    for (std::size_t i = 0; i < a.classes.size(); ++i) {
      EXPECT_EQ(mobility[id].states[i].year, a.classes[i].first);
      EXPECT_EQ(mobility[id].states[i].cls, a.classes[i].second);
    }
  }
}

TEST(Degrade, ZeroNoiseIsIdentity) {
  auto result = generate(small_scenario(4));
  auto degraded = degrade(result.corpus, result.truth, {0.0, 0.0, 99});
  EXPECT_EQ(dump(degraded), dump(result.corpus));
}

TEST(Degrade, GapsReduceRecall) {
  int lower = 0;
  const int seeds = 20;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    auto result = generate(noise_free(seed, 150, 15));
    auto truth = true_moves(result.truth);
    const double clean = recall(truth, detected_moves(result.corpus));
    const double gapped = recall(truth, detected_moves(degrade(result.corpus, result.truth, {0.3, 0.0, seed})));
    EXPECT_EQ(clean, 1.0);
    lower += gapped < clean;
  }
  EXPECT_EQ(lower, seeds);
}

TEST(Degrade, DualAffiliationAloneCreatesNoMoves) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto config = noise_free(seed, 150, 12);
    config.move_hazard.clear();
    auto result = generate(config);
    auto degraded = degrade(result.corpus, result.truth, {0.0, 1.0, seed});
    bool any_dual = false;
    for (const auto& r : degraded.records()) {
      for (const auto& a : r.authorships) any_dual = any_dual || a.countries.size() == 2;
    }
    EXPECT_TRUE(any_dual);
    EXPECT_TRUE(detected_moves(degraded).empty());
  }
}

TEST(Generate, SymmetricScenarioHasBalancedDirection) {
  // USA and EU28 play interchangeable roles; no collaboration boost
  int within = 0;
  const int seeds = 20;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    auto config = noise_free(seed, 1500, 12);
    config.origin_weights = {{"CHN", 0.5}, {"USA", 0.25}, {"EU28", 0.25}};
    config.move_hazard = {{"CHN", {{"USA", 0.1}, {"EU28", 0.1}}}, {"USA", {{"CHN", 0.05}}}, {"EU28", {{"CHN", 0.05}}}};
    config.returnee_host_boost = 1.0;
    config.exit_hazard = 0.05;
    auto result = generate(config);
    const auto& corpus = result.corpus;
    auto timelines = build_timelines(corpus);
    auto mobility = analyze_mobility(timelines, corpus.scheme(), {CHN, HostAttribution::Latest, 1});
    IndicatorEngine engine(corpus, mobility, {CHN, false, 1});
    const ClassFilter returnees{ClassKind::ReturneeResident, CHN, std::nullopt};

    // per-record home weights of returnees on each link, for the standard error
    auto link_stats = [&](RegionId partner, double& share, double& se) {
      Population reference{{CHN}, false, std::nullopt, false, make_region_pair(CHN, partner)};
      Population pop = reference;
      pop.cls = returnees;
      std::vector<double> num, den;
      for (std::size_t i = 0; i < corpus.records().size(); ++i) {
        const auto& collab = engine.collaboration()[i];
        if (!std::binary_search(collab.region_pairs.begin(), collab.region_pairs.end(), *reference.region_pair))
          continue;
        double n = 0.0, d = 0.0;
        const auto& r = corpus.records()[i];
        for (std::size_t k = 0; k < r.authorships.size(); ++k) {
          const double w = location_fraction(r.authorships[k], CHN, corpus.scheme()) / r.authorships.size();
          d += w;
          if (returnees.matches(engine.authorship_class(i, k))) n += w;
        }
        if (d > 0.0) {
          num.push_back(n);
          den.push_back(d);
        }
      }
      double sn = 0.0, sd = 0.0;
      for (std::size_t i = 0; i < num.size(); ++i) {
        sn += num[i];
        sd += den[i];
      }
      share = sn / sd;
      double var = 0.0;
      for (std::size_t i = 0; i < num.size(); ++i) var += std::pow(num[i] - share * den[i], 2);
      se = std::sqrt(var) / sd;  // ratio-estimator linearization
      EXPECT_NEAR(share, engine.copub_direction(returnees, partner, std::nullopt), 1e-9);
    };
    double us, us_se, eu, eu_se;
    link_stats(USA, us, us_se);
    link_stats(EU28, eu, eu_se);
    within += std::abs(us - eu) <= 2.0 * std::hypot(us_se, eu_se);
  }
  EXPECT_GE(within, 18);
}

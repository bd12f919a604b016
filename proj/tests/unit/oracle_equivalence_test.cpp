#include <gtest/gtest.h>

#include "equivalence.hpp"
#include "test_support.hpp"

using namespace careertrace;

namespace {

void expect_equivalent(const Corpus& corpus, RegionId home, unsigned threads) {
  auto result = oracle::compare_pipeline(corpus, home, threads);
  EXPECT_GT(result.checks, 0u);
  EXPECT_EQ(result.mismatch_count, 0u);
  for (const auto& m : result.mismatches) ADD_FAILURE() << m;
}

}  // namespace

TEST(OracleEquivalence, RandomSmallCorpora) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    SCOPED_TRACE(seed);
    auto corpus = testing_support::small_random_corpus(seed);
    ASSERT_LE(corpus.records().size(), 200u);
    expect_equivalent(corpus, 0, 1 + seed % 3);
  }
}

TEST(OracleEquivalence, OtherHomeRegion) {
  for (std::uint64_t seed = 20; seed <= 23; ++seed) {
    SCOPED_TRACE(seed);
    expect_equivalent(testing_support::small_random_corpus(seed), 1, 2);
  }
}

TEST(OracleEquivalence, TieHeavyHandWrittenCorpus) {
  auto corpus = testing_support::corpus_from(
      R"({"pub_id":"a","year":2001,"fields":["F1"],"doc_type":"ar","cites":3,"authors":[{"id":"x","countries":["USA","CHN"]},{"id":"y","countries":["DEU"]}]})"
      "\n"
      R"({"pub_id":"b","year":2002,"fields":["F1","F2"],"doc_type":"ar","cites":1,"authors":[{"id":"x","countries":["DEU","CHN"]}]})"
      "\n"
      R"({"pub_id":"c","year":2003,"fields":["F2"],"doc_type":"re","cites":0,"authors":[{"id":"x","countries":["DEU"]},{"id":"y","countries":["CHN","CHN","USA"]}]})"
      "\n"
      R"({"pub_id":"d","year":2004,"fields":["F1"],"doc_type":"ar","cites":9,"authors":[{"id":"x","countries":["CHN"]},{"id":"y","countries":["FRA","USA"]}]})"
      "\n"
      R"({"pub_id":"e","year":2004,"seq":1,"fields":["F1"],"doc_type":"ar","cites":2,"authors":[{"id":"y","countries":["CHN"]}]})"
      "\n",
      testing_support::eu28_scheme());
  expect_equivalent(corpus, 0, 1);
}

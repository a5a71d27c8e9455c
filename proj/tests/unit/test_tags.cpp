#include <gtest/gtest.h>

#include <random>

#include "tagcorrupt/errors.hpp"
#include "tagcorrupt/tags.hpp"

using namespace tagcorrupt;

TEST(Tags, ParseKnownLabels) {
  EXPECT_EQ(parse_tag("VERB:SVA"), ErrorTag::VerbSva);
  EXPECT_EQ(parse_tag("SELF"), ErrorTag::Self);
  EXPECT_EQ(parse_tag("K"), ErrorTag::Unk);
  EXPECT_THROW(parse_tag("verb:sva"), UnknownTag);
  EXPECT_THROW(parse_tag(""), UnknownTag);
}

TEST(Tags, RenderParseRoundTrip) {
  for (std::size_t i = 0; i <= kNumErrorTags; ++i) {
    const ErrorTag t = tag_at(i);
    EXPECT_EQ(parse_tag(render_tag(t)), t);
  }
  EXPECT_EQ(render_tag(ErrorTag::Unk), "UNK");
}

TEST(Tags, EnumOrderIsLexical) {
  for (std::size_t i = 1; i < kNumErrorTags; ++i) {
    EXPECT_LT(render_tag(tag_at(i - 1)), render_tag(tag_at(i)));
  }
}

TEST(Tags, EstimateCountsEdits) {
  TagCountArray c{};
  c[index_of(ErrorTag::Punct)] = 2;
  c[index_of(ErrorTag::Det)] = 1;
  c[index_of(ErrorTag::Spell)] = 1;
  const auto d = estimate_distribution(c);
  EXPECT_DOUBLE_EQ(d[ErrorTag::Punct], 0.5);
  EXPECT_DOUBLE_EQ(d[ErrorTag::Det], 0.25);
  EXPECT_DOUBLE_EQ(d[ErrorTag::Spell], 0.25);
  EXPECT_DOUBLE_EQ(d[ErrorTag::Wo], 0.0);
  EXPECT_THROW(estimate_distribution(TagCountArray{}), EmptyCorpus);
}

TEST(Tags, TargetCountsExamples) {
  auto d = TagDistribution::from_map({{ErrorTag::VerbSva, 0.25}, {ErrorTag::Wo, 0.75}});
  auto q = target_counts(d, 4);
  EXPECT_EQ(q[index_of(ErrorTag::VerbSva)], 1u);
  EXPECT_EQ(q[index_of(ErrorTag::Wo)], 3u);

  auto u = target_counts(TagDistribution::uniform(), 25);
  for (auto c : u) EXPECT_EQ(c, 1u);

  auto h = TagDistribution::from_map({{ErrorTag::Adj, 0.5}, {ErrorTag::Adv, 0.5}});
  auto qh = target_counts(h, 5);
  EXPECT_EQ(qh[index_of(ErrorTag::Adj)], 3u);
  EXPECT_EQ(qh[index_of(ErrorTag::Adv)], 2u);
}

namespace {

TagDistribution random_distribution(std::mt19937_64& rng) {
  std::array<double, kNumErrorTags> p{};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double sum = 0;
  for (auto& x : p) {
    x = u(rng) < 0.3 ? 0.0 : u(rng);
    sum += x;
  }
  if (sum == 0) {
    p[0] = 1;
    sum = 1;
  }
  for (auto& x : p) x /= sum;
  double s2 = 0;
  for (auto x : p) s2 += x;
  p[0] += 1.0 - s2;
  if (p[0] < 0) p[0] = 0;
  return TagDistribution::from_probabilities(p);
}

}  // namespace

TEST(Tags, TargetCountsProperties) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto d = random_distribution(rng);
    const std::size_t n = 1 + rng() % 5000;
    const auto q = target_counts(d, n);
    std::size_t total = 0;
    for (std::size_t i = 0; i < kNumErrorTags; ++i) {
      total += q[i];
      EXPECT_LT(std::abs(static_cast<double>(q[i]) - d.probabilities()[i] * n), 1.0);
    }
    EXPECT_EQ(total, n);
  }
}

TEST(Tags, TvDistanceExamples) {
  auto a = TagDistribution::from_map({{ErrorTag::Adj, 1.0}});
  auto b = TagDistribution::from_map({{ErrorTag::Adv, 1.0}});
  EXPECT_DOUBLE_EQ(tv_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(tv_distance(a, b), 1.0);
  auto p = TagDistribution::from_map({{ErrorTag::Adj, 0.25}, {ErrorTag::Adv, 0.75}});
  auto q = TagDistribution::from_map({{ErrorTag::Adj, 0.75}, {ErrorTag::Adv, 0.25}});
  EXPECT_DOUBLE_EQ(tv_distance(p, q), 0.5);
}

TEST(Tags, TvDistanceTriangleAndSymmetry) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    auto p = random_distribution(rng);
    auto q = random_distribution(rng);
    auto r = random_distribution(rng);
    EXPECT_LE(tv_distance(p, r), tv_distance(p, q) + tv_distance(q, r) + 1e-12);
    EXPECT_DOUBLE_EQ(tv_distance(p, q), tv_distance(q, p));
    EXPECT_GE(tv_distance(p, q), 0.0);
    EXPECT_LE(tv_distance(p, q), 1.0 + 1e-12);
  }
}

TEST(Tags, EstimateIsSimplex) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    TagCountArray c{};
    for (auto& x : c) x = rng() % 4;
    c[rng() % kNumErrorTags] += 1;
    const auto d = estimate_distribution(c);
    double s = 0;
    for (double x : d.probabilities()) {
      EXPECT_GE(x, 0.0);
      s += x;
    }
    EXPECT_NEAR(s, 1.0, 1e-9);
  }
}

TEST(Tags, DistributionJson) {
  auto d = parse_distribution_json(R"({"PUNCT": 0.5, "DET": 0.25, "K": 0.25})");
  EXPECT_DOUBLE_EQ(d[ErrorTag::Unk], 0.25);
  auto renorm = parse_distribution_json(R"({"PUNCT": 0.5, "DET": 0.495})");
  EXPECT_NEAR(renorm[ErrorTag::Punct], 0.5 / 0.995, 1e-12);
  EXPECT_THROW(parse_distribution_json(R"({"PUNCT": 0.5})"), InvalidDistribution);
  EXPECT_THROW(parse_distribution_json(R"({"SELF": 1.0})"), Error);
  EXPECT_THROW(parse_distribution_json(R"({"BOGUS": 1.0})"), UnknownTag);
  EXPECT_THROW(parse_distribution_json(R"({"PUNCT": -0.5, "DET": 1.5})"), InvalidDistribution);
  auto round = parse_distribution_json(distribution_to_json(d));
  EXPECT_LT(tv_distance(round, d), 1e-12);
}

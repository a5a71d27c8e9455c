#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "support/fuzz_corpus.hpp"
#include "tagcorrupt/annotate.hpp"
#include "tagcorrupt/corrupt.hpp"
#include "tagcorrupt/errors.hpp"

using namespace tagcorrupt;

namespace {

const std::string kSheep = "There were a lot of sheep.";

constexpr ErrorTag kDeterministic[] = {ErrorTag::Punct, ErrorTag::NounNum, ErrorTag::NounPoss,
                                       ErrorTag::VerbSva, ErrorTag::Contr,  ErrorTag::Orth,
                                       ErrorTag::Wo,      ErrorTag::Det};

struct Fixture {
  RuleEngine engine;
  RuleScorer scorer;
  Corruptor corruptor{scorer, engine};
  std::mt19937_64 rng{7};

  std::string beam(const std::string& sentence, ErrorTag tag) {
    SentenceContext ctx(tokenize(sentence), engine);
    return detokenize(corruptor.decode(ctx, tag, {}, rng).target);
  }
};

// Scores the first proposed site -1, the second -2 and everything else -60.
class TwoSiteScorer : public Scorer {
 public:
  explicit TwoSiteScorer(ErrorTag tag) : tag_(tag) {}
  double score_op(const SentenceContext& ctx, std::span<const EditOp>, const EditOp& next) override {
    if (next.tag == ErrorTag::Self) return 0.0;
    const auto& sites = ctx.sites(tag_);
    for (std::size_t k = 0; k < sites.size() && k < 2; ++k) {
      const auto ops = ops_for_site(ctx.source().size(), sites[k]);
      for (const auto& op : ops) {
        if (op.tag != ErrorTag::Self && op == next) return -1.0 - static_cast<double>(k);
      }
    }
    return -60.0;
  }

 private:
  ErrorTag tag_;
};

std::string write_script(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST(Corrupt, SheepBeamRows) {
  Fixture f;
  EXPECT_EQ(f.beam(kSheep, ErrorTag::VerbSva), "There was a lot of sheep.");
  EXPECT_EQ(f.beam(kSheep, ErrorTag::NounInfl), "There were a lot of sheeps.");
  EXPECT_EQ(f.beam(kSheep, ErrorTag::Punct), "There were a lot of sheep");
  EXPECT_EQ(f.beam(kSheep, ErrorTag::Wo), "There were a lot sheep of.");
  EXPECT_EQ(f.beam(kSheep, ErrorTag::Contr), "There're a lot of sheep.");
  EXPECT_EQ(f.beam(kSheep, ErrorTag::NounPoss), "There were a lot of sheep's.");
  EXPECT_EQ(f.beam(kSheep, ErrorTag::NounNum), "There were a lots of sheep.");
  EXPECT_EQ(f.beam(kSheep, ErrorTag::Orth), "There were alot of sheep.");
  EXPECT_EQ(f.beam(kSheep, ErrorTag::Other), "There were many sheep.");
  EXPECT_EQ(f.beam(kSheep, ErrorTag::Unk), "There were a lot of.");
}

TEST(Corrupt, ProposeTopAndPunctDeletion) {
  Fixture f;
  SentenceContext ctx(tokenize(kSheep), f.engine);
  auto sva = f.corruptor.propose(ctx, ErrorTag::VerbSva, 4);
  ASSERT_FALSE(sva.empty());
  EXPECT_EQ(detokenize(sva.front().target), "There was a lot of sheep.");
  bool found = false;
  for (const auto& c : f.corruptor.propose(ctx, ErrorTag::Punct, 64)) {
    found = found || detokenize(c.target) == "There were a lot of sheep";
  }
  EXPECT_TRUE(found);
}

TEST(Corrupt, SingleTokenWordOrderIsEmpty) {
  Fixture f;
  SentenceContext ctx(tokenize("sheep"), f.engine);
  EXPECT_TRUE(f.corruptor.propose(ctx, ErrorTag::Wo, 4).empty());
  EXPECT_THROW(f.corruptor.decode(ctx, ErrorTag::Wo, {}, f.rng), Infeasible);
}

TEST(Corrupt, ProposeRejectsBadArguments) {
  Fixture f;
  SentenceContext ctx(tokenize(kSheep), f.engine);
  EXPECT_THROW(f.corruptor.propose(ctx, ErrorTag::Self, 4), ReservedTag);
  EXPECT_THROW(f.corruptor.propose(ctx, ErrorTag::Det, 0), Error);
}

TEST(Corrupt, CorruptPrepend) {
  Fixture f;
  EXPECT_EQ(detokenize(f.corruptor.corrupt_prepend("NOUN:INFL There were a lot of sheep.", {}, f.rng).target),
            "There were a lot of sheeps.");
  EXPECT_THROW(f.corruptor.corrupt_prepend("SELF There were a lot of sheep.", {}, f.rng), UnknownTag);
  EXPECT_THROW(f.corruptor.corrupt_prepend("NOUN:FOO There were a lot of sheep.", {}, f.rng), UnknownTag);
  SentenceContext ctx(tokenize("There was a lot of sheep."), f.engine);
  bool found = false;
  for (const auto& c : f.corruptor.propose(ctx, ErrorTag::VerbSva, 64)) {
    found = found || detokenize(c.target) == kSheep;
  }
  EXPECT_TRUE(found);
}

TEST(Corrupt, ScoreTargetConsistencyAndOrdering) {
  Fixture f;
  SentenceContext ctx(tokenize(kSheep), f.engine);
  for (ErrorTag t : error_tags()) {
    auto cands = f.corruptor.propose(ctx, t, 64);
    for (const auto& c : cands) {
      EXPECT_NEAR(f.corruptor.score_target(ctx, t, c.target), c.log_prob, 1e-9) << render_tag(t);
    }
  }
  EXPECT_EQ(f.corruptor.score_target(ctx, ErrorTag::Punct, ctx.source()), kMinScore);
  const double sva = f.corruptor.score_target(ctx, ErrorTag::VerbSva, tokenize("There was a lot of sheep."));
  const double wo = f.corruptor.score_target(ctx, ErrorTag::Wo, tokenize("There were a lot sheep of."));
  EXPECT_GT(sva, wo);
  EXPECT_GT(wo, kMinScore);
}

TEST(Corrupt, OpsApplyAndValidate) {
  const Tokens src = tokenize(kSheep);
  std::vector<EditOp> ops = {{ErrorTag::Self, 1, {}}, {ErrorTag::VerbSva, 2, make_tokens({"was"})},
                             {ErrorTag::Self, src.size(), {}}};
  EXPECT_EQ(detokenize(apply_ops(src, ops)), "There was a lot of sheep.");
  std::vector<EditOp> short_ops = {{ErrorTag::Self, 2, {}}};
  EXPECT_THROW(apply_ops(src, short_ops), Error);
  std::vector<EditOp> backwards = {{ErrorTag::Self, 3, {}}, {ErrorTag::Det, 2, {}}, {ErrorTag::Self, src.size(), {}}};
  EXPECT_THROW(apply_ops(src, backwards), Error);
}

// Every candidate carries its tag, changes the sentence, factorizes exactly and
// applies its ops to its target; beam decode is recovered by the annotator.
TEST(Corrupt, FuzzInvariants) {
  Fixture f;
  const auto sentences = fuzz::fuzz_sentences(1000, 11);
  std::size_t feasible = 0;
  std::size_t recovered = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    SentenceContext ctx(tokenize(sentences[i]), f.engine);
    for (ErrorTag t : kDeterministic) {
      auto cands = f.corruptor.propose(ctx, t, i % 50 == 0 ? 64 : 4);
      for (const auto& c : cands) {
        const auto tags = op_tags(c.ops);
        EXPECT_NE(std::find(tags.begin(), tags.end(), t), tags.end());
        EXPECT_NE(c.target, ctx.source());
        EXPECT_EQ(apply_ops(ctx.source(), c.ops), c.target);
        double sum = 0;
        for (std::size_t k = 0; k < c.ops.size(); ++k) {
          sum += f.scorer.score_op(ctx, std::span(c.ops).first(k), c.ops[k]);
        }
        EXPECT_NEAR(sum, c.log_prob, 1e-9);
        EXPECT_LE(c.log_prob, 0.0);
      }
      if (cands.empty()) continue;
      ++feasible;
      const auto edits = annotate_pair(sentences[i], detokenize(cands.front().target));
      for (const auto& e : edits) {
        if (e.tag == t) {
          ++recovered;
          break;
        }
      }
    }
  }
  ASSERT_GT(feasible, 0u);
  EXPECT_GE(static_cast<double>(recovered) / static_cast<double>(feasible), 0.95);
}

TEST(Corrupt, DeterministicUnderSeed) {
  RuleEngine engine;
  RuleScorer scorer;
  const auto sentences = fuzz::fuzz_sentences(40, 3);
  auto run = [&] {
    Corruptor c(scorer, engine);
    std::mt19937_64 rng(99);
    std::string out;
    for (const auto& s : sentences) {
      SentenceContext ctx(tokenize(s), engine);
      for (ErrorTag t : error_tags()) {
        for (DecodeMode mode : {DecodeMode::Beam, DecodeMode::Sample}) {
          try {
            out += detokenize(c.decode(ctx, t, {mode, 4, 1.0}, rng).target) + "\n";
          } catch (const Infeasible&) {
            out += "-\n";
          }
        }
      }
    }
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(Corrupt, SoftmaxPickRate) {
  std::mt19937_64 rng(2024);
  const double logits[] = {-1.0, -2.0};
  std::size_t first = 0;
  constexpr std::size_t kDraws = 1000000;
  for (std::size_t i = 0; i < kDraws; ++i) first += sample_softmax(logits, 1.0, rng) == 0;
  EXPECT_NEAR(static_cast<double>(first) / kDraws, std::exp(1.0) / (std::exp(1.0) + 1.0), 0.01);
}

TEST(Corrupt, SampleDecodeMatchesTwoCandidateSoftmax) {
  RuleEngine engine;
  TwoSiteScorer scorer(ErrorTag::Punct);
  Corruptor c(scorer, engine);
  SentenceContext ctx(tokenize(kSheep), engine);
  const auto top = c.propose(ctx, ErrorTag::Punct, 2);
  ASSERT_EQ(top.size(), 2u);
  ASSERT_DOUBLE_EQ(top[0].log_prob, -1.0);
  ASSERT_DOUBLE_EQ(top[1].log_prob, -2.0);
  std::mt19937_64 rng(5);
  std::size_t first = 0;
  constexpr std::size_t kDraws = 200000;
  for (std::size_t i = 0; i < kDraws; ++i) {
    first += c.decode(ctx, ErrorTag::Punct, {DecodeMode::Sample, 4, 1.0}, rng).target == top[0].target;
  }
  EXPECT_NEAR(static_cast<double>(first) / kDraws, 0.731, 0.01);
}

TEST(Corrupt, ColdSamplingConvergesToBeam) {
  RuleEngine engine;
  TwoSiteScorer scorer(ErrorTag::Punct);
  Corruptor c(scorer, engine);
  SentenceContext ctx(tokenize(kSheep), engine);
  std::mt19937_64 rng(1);
  const auto best = c.decode(ctx, ErrorTag::Punct, {DecodeMode::Beam, 4, 1.0}, rng).target;
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(c.decode(ctx, ErrorTag::Punct, {DecodeMode::Sample, 4, 1e-6}, rng).target, best);
  }
}

TEST(Corrupt, DecodeOptionValidation) {
  Fixture f;
  SentenceContext ctx(tokenize(kSheep), f.engine);
  EXPECT_THROW(f.corruptor.decode(ctx, ErrorTag::Det, {DecodeMode::Beam, 0, 1.0}, f.rng), Error);
  EXPECT_THROW(f.corruptor.decode(ctx, ErrorTag::Det, {DecodeMode::Sample, 4, 0.0}, f.rng), Error);
  EXPECT_EQ(parse_decode_mode("beam"), DecodeMode::Beam);
  EXPECT_EQ(parse_decode_mode("sample"), DecodeMode::Sample);
  EXPECT_THROW(parse_decode_mode("greedy"), Error);
}

TEST(Corrupt, PriorShiftsTagScores) {
  const auto prior = TagDistribution::from_map({{ErrorTag::VerbSva, 0.5}, {ErrorTag::Wo, 0.5}});
  RuleEngine engine;
  RuleScorer scorer(prior);
  Corruptor c(scorer, engine);
  SentenceContext ctx(tokenize(kSheep), engine);
  const auto cand = c.propose(ctx, ErrorTag::VerbSva, 1).front();
  EXPECT_NEAR(cand.log_prob, std::log(0.5) - std::log(ctx.site_count(ErrorTag::VerbSva)), 1e-12);
}

TEST(ExternalScorer, ScoresThroughSubprocess) {
  const auto script = write_script("tc_scorer_ok.py",
                                   "import sys, json\n"
                                   "for line in sys.stdin:\n"
                                   "    req = json.loads(line)\n"
                                   "    print(-1.0 if req['tag'] == 'VERB:SVA' else -3.0, flush=True)\n");
  ExternalScorer scorer("python3 " + script);
  RuleEngine engine;
  Corruptor c(scorer, engine);
  SentenceContext ctx(tokenize(kSheep), engine);
  const auto sva = c.propose(ctx, ErrorTag::VerbSva, 1);
  ASSERT_EQ(sva.size(), 1u);
  EXPECT_DOUBLE_EQ(sva.front().log_prob, -1.0);
  EXPECT_DOUBLE_EQ(c.score_target(ctx, ErrorTag::Wo, tokenize("There were a lot sheep of.")), -3.0);
  const auto before = scorer.queries();
  c.propose(ctx, ErrorTag::VerbSva, 1);
  EXPECT_EQ(scorer.queries(), before);
}

TEST(ExternalScorer, NonNumericReplyAborts) {
  const auto script = write_script("tc_scorer_bad.sh", "while read line; do echo nope; done\n");
  ExternalScorer scorer("sh " + script);
  EXPECT_THROW(scorer.query(kSheep, ErrorTag::Det, "There were lot of sheep."), ScorerProtocolError);
}

TEST(ExternalScorer, PositiveReplyAborts) {
  const auto script = write_script("tc_scorer_pos.sh", "while read line; do echo 0.5; done\n");
  ExternalScorer scorer("sh " + script);
  EXPECT_THROW(scorer.query(kSheep, ErrorTag::Det, "There were lot of sheep."), ScorerProtocolError);
}

TEST(ExternalScorer, EarlyExitAborts) {
  ExternalScorer scorer("true");
  EXPECT_THROW(scorer.query(kSheep, ErrorTag::Det, "There were lot of sheep."), ScorerProtocolError);
}

#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <regex>

#include "support/fuzz_corpus.hpp"
#include "tagcorrupt/constrain.hpp"
#include "tagcorrupt/errors.hpp"

using namespace tagcorrupt;

namespace {

constexpr ConstraintMode kModes[] = {ConstraintMode::NoSigma, ConstraintMode::PostSigma,
                                     ConstraintMode::PrePostSigma};

std::vector<ErrorTag> seq(std::initializer_list<ErrorTag> tags) { return tags; }

// One letter per label: 'a' + index for error tags, 'S' for SELF.
char letter(ErrorTag t) { return t == ErrorTag::Self ? 'S' : static_cast<char>('a' + index_of(t)); }

bool regex_oracle(ConstraintMode mode, ErrorTag tag, const std::vector<ErrorTag>& tags) {
  std::string text;
  for (ErrorTag t : tags) text += letter(t);
  const std::string t(1, letter(tag));
  std::string pattern;
  switch (mode) {
    case ConstraintMode::NoSigma: pattern = "(S)*" + t + "(S|" + t + ")*"; break;
    case ConstraintMode::PostSigma: pattern = "(S)*" + t + "(.)*"; break;
    case ConstraintMode::PrePostSigma: pattern = "(.)*" + t + "(.)*"; break;
  }
  return std::regex_match(text, std::regex(pattern));
}

// Draws labels so that SELF and the constrained tag show up often.
std::vector<ErrorTag> random_sequence(ErrorTag tag, std::mt19937_64& rng) {
  std::vector<ErrorTag> out(rng() % 13);
  for (auto& t : out) {
    const auto r = rng() % 4;
    t = r == 0 ? ErrorTag::Self : r == 1 ? tag : tag_at(rng() % kNumErrorTags);
  }
  return out;
}

// Exhaustive search over non-overlapping site sequences with the decoder's
// adjacency rule: the first edit may start anywhere, later ones strictly after
// the previous edit's end.
double oracle_best(const SentenceContext& ctx, const ConstraintFst& fst, Scorer& scorer) {
  std::vector<const Site*> sites;
  for (ErrorTag t : error_tags()) {
    for (const auto& s : ctx.sites(t)) sites.push_back(&s);
  }
  const std::size_t n = ctx.source().size();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<EditOp> ops;
  std::function<void(std::size_t, bool)> dfs = [&](std::size_t pos, bool first) {
    if (!first) {
      auto done = ops;
      if (pos < n) done.push_back({ErrorTag::Self, n, {}});
      const auto tags = op_tags(done);
      if (accepts(fst, tags)) {
        double score = 0;
        for (std::size_t k = 0; k < done.size(); ++k) score += scorer.score_op(ctx, std::span(done).first(k), done[k]);
        best = std::max(best, score);
      }
    }
    for (const Site* s : sites) {
      if (first ? s->start < pos : s->start <= pos) continue;
      const auto mark = ops.size();
      if (s->start > pos) ops.push_back({ErrorTag::Self, s->start, {}});
      ops.push_back({s->tag, s->end, s->replacement});
      dfs(s->end, false);
      ops.resize(mark);
    }
  };
  dfs(0, true);
  return best;
}

}  // namespace

TEST(Constrain, AcceptorExamples) {
  const auto no = build_constraint(ErrorTag::Spell, ConstraintMode::NoSigma);
  EXPECT_TRUE(accepts(no, seq({ErrorTag::Self, ErrorTag::Spell, ErrorTag::Self})));
  EXPECT_FALSE(accepts(no, seq({ErrorTag::Self, ErrorTag::Det, ErrorTag::Spell})));
  const auto post = build_constraint(ErrorTag::Spell, ConstraintMode::PostSigma);
  EXPECT_FALSE(accepts(post, seq({ErrorTag::Det, ErrorTag::Spell})));
  EXPECT_TRUE(accepts(post, seq({ErrorTag::Spell, ErrorTag::Det})));
  const auto pre = build_constraint(ErrorTag::Spell, ConstraintMode::PrePostSigma);
  EXPECT_TRUE(accepts(pre, seq({ErrorTag::Det, ErrorTag::Spell, ErrorTag::Wo})));
  EXPECT_TRUE(accepts(pre, seq({ErrorTag::Self, ErrorTag::Spell})));
  for (ConstraintMode m : kModes) EXPECT_FALSE(accepts(build_constraint(ErrorTag::Det, m), {}));
}

TEST(Constrain, SelfIsReserved) {
  for (ConstraintMode m : kModes) EXPECT_THROW(build_constraint(ErrorTag::Self, m), ReservedTag);
}

TEST(Constrain, ModeNames) {
  for (ConstraintMode m : kModes) EXPECT_EQ(parse_constraint_mode(render_constraint_mode(m)), m);
  EXPECT_EQ(render_constraint_mode(ConstraintMode::PrePostSigma), "prepostsigma");
  EXPECT_THROW(parse_constraint_mode("direct"), Error);
}

TEST(Constrain, TwoStatesFinalOne) {
  for (ConstraintMode m : kModes) {
    const auto fst = build_constraint(ErrorTag::Wo, m);
    EXPECT_EQ(fst.num_states(), 2);
    EXPECT_EQ(fst.initial(), 0);
    EXPECT_EQ(fst.finals(), std::vector<int>{1});
    EXPECT_EQ(fst.has_sigma(), m != ConstraintMode::NoSigma);
  }
}

TEST(Constrain, DumpGolden) {
  EXPECT_EQ(build_constraint(ErrorTag::Spell, ConstraintMode::NoSigma).dump(),
            "0\tSELF\t0\n0\tSPELL\t1\n1\tSELF\t1\n1\tSPELL\t1\nFINAL:\n1\n");
  EXPECT_EQ(build_constraint(ErrorTag::Spell, ConstraintMode::PostSigma).dump(),
            "0\tSELF\t0\n0\tSPELL\t1\n1\tSIGMA\t1\nFINAL:\n1\n");
  EXPECT_EQ(build_constraint(ErrorTag::Spell, ConstraintMode::PrePostSigma).dump(),
            "0\tSIGMA\t0\n0\tSPELL\t1\n1\tSIGMA\t1\nFINAL:\n1\n");
}

TEST(Constrain, SpecificLabelBeatsSigma) {
  const auto pre = build_constraint(ErrorTag::Det, ConstraintMode::PrePostSigma);
  EXPECT_EQ(pre.step(0, ErrorTag::Det), 1);
  EXPECT_EQ(pre.step(0, ErrorTag::Wo), 0);
  EXPECT_EQ(pre.step(0, ErrorTag::Self), 0);
  const auto no = build_constraint(ErrorTag::Det, ConstraintMode::NoSigma);
  EXPECT_FALSE(no.step(0, ErrorTag::Wo).has_value());
}

TEST(Constrain, RegexOracleAndNesting) {
  std::mt19937_64 rng(17);
  std::vector<ErrorTag> tags;
  for (int k = 0; k < 5; ++k) tags.push_back(tag_at(rng() % kNumErrorTags));
  for (ErrorTag tag : tags) {
    const auto no = build_constraint(tag, ConstraintMode::NoSigma);
    const auto post = build_constraint(tag, ConstraintMode::PostSigma);
    const auto pre = build_constraint(tag, ConstraintMode::PrePostSigma);
    for (int i = 0; i < 10000; ++i) {
      const auto s = random_sequence(tag, rng);
      const bool a = accepts(no, s);
      const bool b = accepts(post, s);
      const bool c = accepts(pre, s);
      ASSERT_EQ(a, regex_oracle(ConstraintMode::NoSigma, tag, s));
      ASSERT_EQ(b, regex_oracle(ConstraintMode::PostSigma, tag, s));
      ASSERT_EQ(c, regex_oracle(ConstraintMode::PrePostSigma, tag, s));
      ASSERT_TRUE(!a || b);
      ASSERT_TRUE(!b || c);
    }
  }
}

TEST(Constrain, DecodeExamples) {
  RuleEngine engine;
  RuleScorer scorer;
  Corruptor corruptor(scorer, engine);
  SentenceContext ctx(tokenize("There were a lot of sheep."), engine);
  const auto out = constrained_decode(ctx, build_constraint(ErrorTag::Punct, ConstraintMode::NoSigma), 4, corruptor);
  bool has_punct = false;
  for (const auto& op : out.ops) {
    EXPECT_TRUE(op.tag == ErrorTag::Punct || op.tag == ErrorTag::Self);
    has_punct = has_punct || op.tag == ErrorTag::Punct;
  }
  EXPECT_TRUE(has_punct);
  EXPECT_EQ(detokenize(out.target), "There were a lot of sheep");

  SentenceContext one(tokenize("sheep"), engine);
  EXPECT_THROW(constrained_decode(one, build_constraint(ErrorTag::Wo, ConstraintMode::NoSigma), 4, corruptor),
               Infeasible);
  EXPECT_THROW(constrained_decode(ctx, build_constraint(ErrorTag::Det, ConstraintMode::NoSigma), 0, corruptor),
               Error);
}

TEST(Constrain, SoundnessOnFuzzCorpus) {
  RuleEngine engine;
  RuleScorer scorer;
  Corruptor corruptor(scorer, engine);
  const auto sentences = fuzz::fuzz_sentences(150, 23);
  std::mt19937_64 rng(3);
  std::size_t decoded = 0;
  for (const auto& s : sentences) {
    SentenceContext ctx(tokenize(s), engine);
    const ErrorTag tag = tag_at(rng() % kNumErrorTags);
    for (ConstraintMode m : kModes) {
      const auto fst = build_constraint(tag, m);
      try {
        const auto out = constrained_decode(ctx, fst, 4, corruptor);
        EXPECT_TRUE(accepts(fst, op_tags(out.ops))) << s;
        EXPECT_EQ(apply_ops(ctx.source(), out.ops), out.target);
        EXPECT_NEAR(corruptor.score_ops(ctx, out.ops), out.log_prob, 1e-9);
        ++decoded;
      } catch (const Infeasible&) {
      }
    }
  }
  EXPECT_GT(decoded, 300u);
}

TEST(Constrain, MatchesEnumerationOracleOnShortSentences) {
  RuleEngine engine;
  RuleScorer scorer;
  Corruptor corruptor(scorer, engine);
  const char* sentences[] = {"She likes cake.", "They were happy.", "He is tall.", "We saw mice.",
                             "I can't swim.", "The dog runs."};
  std::size_t compared = 0;
  for (const char* s : sentences) {
    SentenceContext ctx(tokenize(s), engine);
    for (ErrorTag tag : {ErrorTag::Punct, ErrorTag::VerbSva, ErrorTag::Det, ErrorTag::Spell, ErrorTag::Orth}) {
      for (ConstraintMode m : kModes) {
        const auto fst = build_constraint(tag, m);
        const double expected = oracle_best(ctx, fst, scorer);
        if (std::isinf(expected)) {
          EXPECT_THROW(constrained_decode(ctx, fst, 1000, corruptor), Infeasible) << s << " " << render_tag(tag);
          continue;
        }
        const auto out = constrained_decode(ctx, fst, 1000, corruptor);
        EXPECT_NEAR(out.log_prob, expected, 1e-9) << s << " " << render_tag(tag);
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 40u);
}

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "support/fuzz_corpus.hpp"
#include "tagcorrupt/errors.hpp"
#include "tagcorrupt/pipeline.hpp"

using namespace tagcorrupt;
namespace fs = std::filesystem;

namespace {

const std::string kSheep = "There were a lot of sheep.";

fs::path temp_dir() {
  auto dir = fs::temp_directory_path() / ("tagcorrupt_pipeline_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  const auto path = temp_dir() / name;
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TagDistribution single(ErrorTag t) { return TagDistribution::from_map({{t, 1.0}}); }

}  // namespace

TEST(Pipeline, ConditioningNames) {
  EXPECT_TRUE(parse_conditioning("direct").direct);
  const auto c = parse_conditioning("postsigma");
  EXPECT_FALSE(c.direct);
  EXPECT_EQ(c.mode, ConstraintMode::PostSigma);
  EXPECT_EQ(render_conditioning(c), "postsigma");
  EXPECT_THROW(parse_conditioning("sigma"), Error);
}

TEST(Pipeline, SeedsAreDistinct) {
  EXPECT_NE(sentence_seed(0, 0), sentence_seed(0, 1));
  EXPECT_NE(sentence_seed(0, 0), sentence_seed(1, 0));
  EXPECT_NE(cell_seed(0, 0, 0), cell_seed(0, 0, 1));
  EXPECT_EQ(cell_seed(5, 7, 3), cell_seed(5, 7, 3));
}

TEST(Pipeline, OnlineSheepNounInfl) {
  JobConfig cfg;
  const auto r = corrupt_corpus({kSheep}, cfg, single(ErrorTag::NounInfl));
  ASSERT_EQ(r.lines.size(), 1u);
  EXPECT_EQ(r.lines[0], "There were a lot of sheeps.\t" + kSheep);
  cfg.swap = true;
  EXPECT_EQ(corrupt_corpus({kSheep}, cfg, single(ErrorTag::NounInfl)).lines[0],
            kSheep + "\tThere were a lot of sheeps.");
}

TEST(Pipeline, FilteringAndSkipAccounting) {
  std::string long_line;
  for (int i = 0; i < 251; ++i) long_line += "word ";
  std::string limit_line;
  for (int i = 0; i < 250; ++i) limit_line += "w" + std::to_string(i) + " ";
  const std::vector<std::string> input = {kSheep, long_line, "", "sheep", limit_line, "   "};
  JobConfig cfg;
  const auto r = corrupt_corpus(input, cfg, single(ErrorTag::Wo));
  EXPECT_EQ(r.stats.input_lines, input.size());
  EXPECT_EQ(r.stats.written + r.stats.skipped, input.size());
  ASSERT_EQ(r.skipped.size(), 4u);
  EXPECT_EQ(r.skipped[0].line, 2u);
  EXPECT_EQ(r.skipped[0].reason, "too_long");
  EXPECT_EQ(r.skipped[1].reason, "empty");
  EXPECT_EQ(r.skipped[2].line, 4u);
  EXPECT_EQ(r.skipped[2].reason, "infeasible");
  EXPECT_EQ(r.skipped[3].line, 6u);
  // Redraws all land on WO, so the single-token line burns all five.
  EXPECT_EQ(r.stats.redraws, 5u);
}

TEST(Pipeline, WorkerCountDoesNotChangeOutput) {
  const auto sentences = fuzz::fuzz_sentences(300, 8);
  const auto dist = fuzz::skewed_distribution();
  for (Method m : {Method::Online, Method::OfflineOptimal, Method::OfflineProb}) {
    JobConfig cfg;
    cfg.method = m;
    cfg.seed = 99;
    const auto a = corrupt_corpus(sentences, cfg, dist);
    cfg.workers = 4;
    const auto b = corrupt_corpus(sentences, cfg, dist);
    EXPECT_EQ(a.lines, b.lines) << render_method(m);
    EXPECT_EQ(a.stats.decode_calls, b.stats.decode_calls);
    // Beam decoding leaves the optimal assignment independent of the seed.
    if (m == Method::OfflineOptimal) continue;
    cfg.seed = 100;
    EXPECT_NE(a.lines, corrupt_corpus(sentences, cfg, dist).lines);
  }
}

TEST(Pipeline, OfflineOptimalScoresEveryCell) {
  const std::vector<std::string> sentences = {kSheep, "She likes the red apples.", "They were happy."};
  JobConfig cfg;
  cfg.method = Method::OfflineOptimal;
  const auto dist = TagDistribution::from_map({{ErrorTag::Punct, 0.5}, {ErrorTag::VerbSva, 0.5}});
  const auto r = corrupt_corpus(sentences, cfg, dist);
  EXPECT_EQ(r.stats.matrix_calls, sentences.size() * kNumErrorTags);
  EXPECT_EQ(r.lines.size(), 3u);
  EXPECT_LE(r.stats.objective, 0.0);
}

TEST(Pipeline, ConstrainedConditioning) {
  JobConfig cfg;
  cfg.conditioning = parse_conditioning("nosigma");
  const auto r = corrupt_corpus({kSheep}, cfg, single(ErrorTag::Punct));
  ASSERT_EQ(r.lines.size(), 1u);
  EXPECT_EQ(r.lines[0], "There were a lot of sheep\t" + kSheep);
}

TEST(Pipeline, ScoreCacheIsReused) {
  const auto cache = (temp_dir() / "cache.bin").string();
  fs::remove(cache);
  const std::vector<std::string> sentences = {kSheep, "They were happy."};
  JobConfig cfg;
  cfg.method = Method::OfflineOptimal;
  cfg.score_cache = cache;
  const auto dist = single(ErrorTag::VerbSva);
  const auto first = corrupt_corpus(sentences, cfg, dist);
  EXPECT_EQ(first.stats.matrix_calls, 2 * kNumErrorTags);
  const auto second = corrupt_corpus(sentences, cfg, dist);
  EXPECT_EQ(second.stats.matrix_calls, 0u);
  EXPECT_EQ(first.lines, second.lines);
}

TEST(Pipeline, EstimateSheepPairs) {
  const auto path = write_file("sheep.tsv",
                               "There was a lot of sheep.\t" + kSheep + "\n"
                               "There were a lot of sheeps.\t" + kSheep + "\n"
                               "There were a lot of sheep\t" + kSheep + "\n");
  std::ostringstream log;
  const auto d = cmd_estimate(path, false, Lexicon::builtin(), log);
  EXPECT_NEAR(d[ErrorTag::VerbSva], 1.0 / 3, 1e-12);
  EXPECT_NEAR(d[ErrorTag::NounInfl], 1.0 / 3, 1e-12);
  EXPECT_NEAR(d[ErrorTag::Punct], 1.0 / 3, 1e-12);
  EXPECT_NE(log.str().find("edits 3"), std::string::npos);
}

TEST(Pipeline, EstimateErrors) {
  std::ostringstream log;
  const auto same = write_file("same.tsv", kSheep + "\t" + kSheep + "\n");
  EXPECT_THROW(cmd_estimate(same, false, Lexicon::builtin(), log), EmptyCorpus);
  const auto bad = write_file("bad.tsv", kSheep + "\t" + kSheep + "\nno tab here\n");
  try {
    cmd_estimate(bad, false, Lexicon::builtin(), log);
    FAIL() << "expected MalformedLine";
  } catch (const MalformedLine& e) {
    EXPECT_EQ(e.line_number, 2u);
  }
  EXPECT_THROW(cmd_estimate((temp_dir() / "missing.tsv").string(), false, Lexicon::builtin(), log), IoError);
}

TEST(Pipeline, EstimateByLabel) {
  const auto path = write_file("labels.tsv",
                               "There was a lot of sheep.\t" + kSheep + "\tA1\n"
                               "There were a lot of sheep\t" + kSheep + "\tB2\n"
                               "There were a lot of sheeps.\t" + kSheep + "\tB2\n");
  std::ostringstream log;
  const auto groups = cmd_estimate_by_label(path, false, Lexicon::builtin(), log);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].first, "A1");
  EXPECT_DOUBLE_EQ(groups[0].second[ErrorTag::VerbSva], 1.0);
  EXPECT_DOUBLE_EQ(groups[1].second[ErrorTag::Punct], 0.5);
}

TEST(Pipeline, EvalDistSingleTagAgainstUniform) {
  std::string pairs;
  for (int i = 0; i < 10; ++i) pairs += "There were a lot of sheeps.\t" + kSheep + "\n";
  const auto path = write_file("eval.tsv", pairs);
  const auto r = cmd_evaldist(path, TagDistribution::uniform(), 0.05, false, Lexicon::builtin());
  EXPECT_EQ(r.pairs, 10u);
  EXPECT_NEAR(r.tv, 0.96, 1e-12);
  EXPECT_FALSE(r.pass);
  const auto ok = cmd_evaldist(path, single(ErrorTag::NounInfl), 0.05, false, Lexicon::builtin());
  EXPECT_TRUE(ok.pass);
  std::ostringstream out;
  print_report(r, out);
  EXPECT_NE(out.str().find("result\tFAIL"), std::string::npos);
  EXPECT_THROW(cmd_evaldist(write_file("empty.tsv", ""), TagDistribution::uniform(), 0.05, false,
                            Lexicon::builtin()),
               EmptyCorpus);
}

TEST(Pipeline, AnnotateJsonLines) {
  std::istringstream in(kSheep + "\tThere were a lot of sheeps.\n" + kSheep + "\t" + kSheep + "\n");
  std::ostringstream out;
  EXPECT_EQ(cmd_annotate(in, out, Lexicon::builtin(), 2), 2u);
  std::istringstream lines(out.str());
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_NE(first.find("\"NOUN:INFL\""), std::string::npos);
  EXPECT_NE(first.find("\"sheeps\""), std::string::npos);
  EXPECT_NE(second.find("\"edits\":[]"), std::string::npos);
  std::istringstream bad("no tab\n");
  EXPECT_THROW(cmd_annotate(bad, out, Lexicon::builtin()), MalformedLine);
}

TEST(Pipeline, CorruptFileRoundTrip) {
  const auto input = write_file("in.txt", kSheep + "\n\nThey were happy.\n");
  const auto dist = write_file("dist.json", "{\"NOUN:INFL\": 0.5, \"VERB:SVA\": 0.5}");
  JobConfig cfg;
  cfg.input = input;
  cfg.output = (temp_dir() / "out.tsv").string();
  cfg.skip_log = (temp_dir() / "skips.tsv").string();
  cfg.dist_path = dist;
  std::ostringstream log;
  const auto st = cmd_corrupt(cfg, log);
  EXPECT_EQ(st.input_lines, 3u);
  EXPECT_EQ(st.written + st.skipped, 3u);
  EXPECT_EQ(slurp(cfg.skip_log), "2\tempty\n");
  const auto out = read_lines(cfg.output);
  EXPECT_EQ(out.size(), st.written);
  for (const auto& l : out) EXPECT_NE(l.find('\t'), std::string::npos);
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tagcorrupt/assign.hpp"
#include "tagcorrupt/constrain.hpp"
#include "tagcorrupt/corrupt.hpp"
#include "tagcorrupt/tags.hpp"

namespace tagcorrupt {

// Direct tag-prepended decoding, or one of the FST constraints.
struct Conditioning {
  bool direct = true;
  ConstraintMode mode = ConstraintMode::NoSigma;
};
Conditioning parse_conditioning(std::string_view text);  // direct|nosigma|postsigma|prepostsigma
std::string render_conditioning(const Conditioning& c);

struct JobConfig {
  std::string input;
  std::string output;
  Method method = Method::Online;
  Conditioning conditioning;
  DecodeOptions decode;
  std::uint64_t seed = 0;
  std::size_t max_words = 250;
  std::string dist_path;
  std::string lexicon_path;
  std::string scorer = "rule";  // rule | external:<command>
  std::size_t workers = 1;
  bool swap = false;  // write clean<TAB>corrupted instead
  std::string skip_log;
  std::string score_cache;
  std::size_t memory_budget_mb = 1024;
  std::optional<std::size_t> n_out;  // offline-prob draws; defaults to the retained count
};

// Worker-local objects; `decode_calls` and `matrix_calls` feed the audit.
struct RunStats {
  std::size_t input_lines = 0;
  std::size_t written = 0;
  std::size_t skipped = 0;
  std::uint64_t decode_calls = 0;
  std::uint64_t matrix_calls = 0;
  std::uint64_t redraws = 0;
  double objective = 0.0;
};

struct SkipEntry {
  std::size_t line = 0;  // 1-based
  std::string reason;    // too_long | empty | infeasible
};

// Seeds: splitmix64 over (seed, index) and (seed, index, tag).
std::uint64_t sentence_seed(std::uint64_t seed, std::uint64_t index);
std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t tag);

// In-memory form of cmd_corrupt: sentences are the input lines.
struct CorruptResult {
  std::vector<std::string> lines;  // output TSV lines without newline
  std::vector<SkipEntry> skipped;
  RunStats stats;
};
CorruptResult corrupt_corpus(const std::vector<std::string>& sentences, const JobConfig& config,
                             const TagDistribution& dist);

// File-level commands. Diagnostics go to `log`.
RunStats cmd_corrupt(const JobConfig& config, std::ostream& log);

// Pairs are `corrupted<TAB>clean` (swap = clean<TAB>corrupted); edits are the
// ones that turn clean into corrupted.
TagCountArray count_pair_tags(std::istream& in, bool swap, const Lexicon& lex);
TagDistribution cmd_estimate(const std::string& pairs_path, bool swap, const Lexicon& lex, std::ostream& log);
// Third TSV column is a group label (for example a CEFR level); one
// distribution per label.
std::vector<std::pair<std::string, TagDistribution>> cmd_estimate_by_label(const std::string& pairs_path,
                                                                           bool swap, const Lexicon& lex,
                                                                           std::ostream& log);

// `source<TAB>target` per line to annotation JSONL.
std::size_t cmd_annotate(std::istream& in, std::ostream& out, const Lexicon& lex, std::size_t workers = 1);

struct EvalReport {
  TagDistribution observed;
  TagDistribution target;
  TagCountArray counts{};
  std::size_t pairs = 0;
  double tv = 0.0;
  bool pass = false;
};
EvalReport cmd_evaldist(const std::string& pairs_path, const TagDistribution& target, double tolerance,
                        bool swap, const Lexicon& lex);
void print_report(const EvalReport& report, std::ostream& out);

std::vector<std::string> read_lines(const std::string& path);

}  // namespace tagcorrupt

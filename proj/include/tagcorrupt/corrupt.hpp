#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tagcorrupt/lexicon.hpp"
#include "tagcorrupt/tags.hpp"
#include "tagcorrupt/text.hpp"

namespace tagcorrupt {

// Log-probability sentinel for infeasible (sentence, tag) pairs.
inline constexpr double kMinScore = -1e9;

// Seq2Edits edit tuple (t, p, r): the op covers source tokens from the end of
// the previous op up to span_end. A SELF op copies its span; replacement is
// empty for SELF.
struct EditOp {
  ErrorTag tag = ErrorTag::Self;
  std::size_t span_end = 0;
  Tokens replacement;

  bool operator==(const EditOp&) const = default;
};

struct CorruptionCandidate {
  Tokens target;
  std::vector<EditOp> ops;
  double log_prob = 0.0;
};

Tokens apply_ops(std::span<const Token> source, std::span<const EditOp> ops);
std::vector<ErrorTag> op_tags(std::span<const EditOp> ops);

// One applicable corruption: replace source tokens [start, end) by
// `replacement` (start == end is an insertion).
struct Site {
  ErrorTag tag = ErrorTag::Other;
  std::size_t start = 0;
  std::size_t end = 0;
  Tokens replacement;
};

// Deterministic per-tag rule families.
class RuleEngine {
 public:
  static constexpr std::size_t kMaxSites = 64;

  explicit RuleEngine(const Lexicon& lex = Lexicon::builtin()) : lex_(&lex) {}

  // Unfiltered generator output in enumeration order.
  std::vector<Site> raw_sites(std::span<const Token> source, ErrorTag tag) const;
  // Generator output whose single edit the annotator classifies as `tag`,
  // deduplicated by target and capped at kMaxSites.
  std::vector<Site> sites(std::span<const Token> source, ErrorTag tag) const;

  const Lexicon& lexicon() const { return *lex_; }

 private:
  const Lexicon* lex_;
};

// Per-sentence cache of site lists. Not thread-safe; one per sentence.
class SentenceContext {
 public:
  SentenceContext(Tokens source, const RuleEngine& engine);

  const Tokens& source() const { return source_; }
  const std::string& source_text() const;
  const std::vector<Site>& sites(ErrorTag tag) const;
  std::size_t site_count(ErrorTag tag) const { return sites(tag).size(); }

 private:
  Tokens source_;
  const RuleEngine* engine_;
  mutable std::optional<std::string> text_;
  mutable std::array<std::optional<std::vector<Site>>, kNumErrorTags> cache_;
};

// Per-op log-probability model.
class Scorer {
 public:
  virtual ~Scorer() = default;
  // Score of `next` given the ops already emitted; finite and <= 0.
  virtual double score_op(const SentenceContext& ctx, std::span<const EditOp> prior,
                          const EditOp& next) = 0;
};

// log p_tag_prior(t) + log(1 / #sites of t); SELF scores 0.
class RuleScorer : public Scorer {
 public:
  RuleScorer();  // uniform prior
  explicit RuleScorer(const TagDistribution& prior);

  double score_op(const SentenceContext& ctx, std::span<const EditOp> prior,
                  const EditOp& next) override;

 private:
  std::array<double, kNumErrorTags> log_prior_{};
};

// Line protocol over a subprocess: one JSON object {"source", "tag", "target"}
// per line on its stdin, one float per line back. An edit op is scored as the
// source with that op alone applied; SELF scores 0.
class ExternalScorer : public Scorer {
 public:
  explicit ExternalScorer(const std::string& command);
  ~ExternalScorer() override;
  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  double score_op(const SentenceContext& ctx, std::span<const EditOp> prior,
                  const EditOp& next) override;
  double query(const std::string& source, ErrorTag tag, const std::string& target);
  std::uint64_t queries() const { return queries_; }

 private:
  struct Process;
  std::unique_ptr<Process> proc_;
  std::uint64_t queries_ = 0;
};

enum class DecodeMode { Beam, Sample };

struct DecodeOptions {
  DecodeMode mode = DecodeMode::Beam;
  std::size_t beam_size = 4;
  double temperature = 1.0;
};

DecodeMode parse_decode_mode(std::string_view text);

// 53-bit uniform in [0, 1) from a single generator call.
double uniform01(std::mt19937_64& rng);
// Index drawn with probability proportional to exp(logits[i] / temperature).
std::size_t sample_softmax(std::span<const double> logits, double temperature, std::mt19937_64& rng);

class Corruptor {
 public:
  Corruptor(Scorer& scorer, const RuleEngine& engine);

  // Up to `limit` single-edit candidates for tag, best first; ties keep
  // enumeration order. Empty when the tag does not apply.
  std::vector<CorruptionCandidate> propose(const SentenceContext& ctx, ErrorTag tag, std::size_t limit);
  // Throws Infeasible when propose is empty.
  CorruptionCandidate decode(const SentenceContext& ctx, ErrorTag tag, const DecodeOptions& options,
                             std::mt19937_64& rng);
  // Sum of per-op scores of the aligned edit script, or kMinScore when no
  // edit carries `tag`.
  double score_target(const SentenceContext& ctx, ErrorTag tag, std::span<const Token> target);
  // "<TAG> <sentence>" -> decode. Throws UnknownTag (SELF included), Infeasible.
  CorruptionCandidate corrupt_prepend(std::string_view tagged_input, const DecodeOptions& options,
                                      std::mt19937_64& rng);

  double score_ops(const SentenceContext& ctx, std::span<const EditOp> ops);
  CorruptionCandidate candidate_from_site(const SentenceContext& ctx, const Site& site);

  Scorer& scorer() { return *scorer_; }
  const RuleEngine& engine() const { return *engine_; }

  void count_decode() { ++decode_calls_; }
  std::uint64_t decode_calls() const { return decode_calls_; }
  std::uint64_t score_calls() const { return score_calls_; }

 private:
  Scorer* scorer_;
  const RuleEngine* engine_;
  std::uint64_t decode_calls_ = 0;
  std::uint64_t score_calls_ = 0;
};

// Ops for a single-site corruption: [SELF] edit [SELF].
std::vector<EditOp> ops_for_site(std::size_t source_len, const Site& site);

}  // namespace tagcorrupt

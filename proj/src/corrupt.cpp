#include "tagcorrupt/corrupt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tagcorrupt/annotate.hpp"
#include "tagcorrupt/errors.hpp"

namespace tagcorrupt {

Tokens apply_ops(std::span<const Token> source, std::span<const EditOp> ops) {
  Tokens out;
  std::size_t pos = 0;
  for (const auto& op : ops) {
    if (op.span_end < pos || op.span_end > source.size()) {
      throw Error("apply_ops: span ends must be non-decreasing and within the source");
    }
    if (op.tag == ErrorTag::Self) {
      out.insert(out.end(), source.begin() + static_cast<std::ptrdiff_t>(pos),
                 source.begin() + static_cast<std::ptrdiff_t>(op.span_end));
    } else {
      out.insert(out.end(), op.replacement.begin(), op.replacement.end());
    }
    pos = op.span_end;
  }
  if (pos != source.size()) throw Error("apply_ops: final op must end at the source length");
  return out;
}

std::vector<ErrorTag> op_tags(std::span<const EditOp> ops) {
  std::vector<ErrorTag> out;
  out.reserve(ops.size());
  for (const auto& op : ops) out.push_back(op.tag);
  return out;
}

std::vector<EditOp> ops_for_site(std::size_t source_len, const Site& site) {
  std::vector<EditOp> ops;
  if (site.start > 0) ops.push_back({ErrorTag::Self, site.start, {}});
  ops.push_back({site.tag, site.end, site.replacement});
  if (site.end < source_len) ops.push_back({ErrorTag::Self, source_len, {}});
  return ops;
}

SentenceContext::SentenceContext(Tokens source, const RuleEngine& engine)
    : source_(std::move(source)), engine_(&engine) {}

const std::string& SentenceContext::source_text() const {
  if (!text_) text_ = detokenize(source_);
  return *text_;
}

const std::vector<Site>& SentenceContext::sites(ErrorTag tag) const {
  if (!is_error_tag(tag)) throw ReservedTag("SELF has no corruption sites");
  auto& slot = cache_[index_of(tag)];
  if (!slot) slot = engine_->sites(source_, tag);
  return *slot;
}

RuleScorer::RuleScorer() : RuleScorer(TagDistribution::uniform()) {}

RuleScorer::RuleScorer(const TagDistribution& prior) {
  for (std::size_t i = 0; i < kNumErrorTags; ++i) {
    const double p = prior.probabilities()[i];
    log_prior_[i] = p > 0 ? std::log(p) : kMinScore;
  }
}

double RuleScorer::score_op(const SentenceContext& ctx, std::span<const EditOp>, const EditOp& next) {
  if (next.tag == ErrorTag::Self) return 0.0;
  const std::size_t n = std::max<std::size_t>(1, ctx.site_count(next.tag));
  return log_prior_[index_of(next.tag)] - std::log(static_cast<double>(n));
}

DecodeMode parse_decode_mode(std::string_view text) {
  if (text == "beam") return DecodeMode::Beam;
  if (text == "sample") return DecodeMode::Sample;
  throw Error("unknown decode mode: " + std::string(text));
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t sample_softmax(std::span<const double> logits, double temperature, std::mt19937_64& rng) {
  if (logits.empty()) throw Error("sample_softmax: empty support");
  if (!(temperature > 0)) throw Error("sample_softmax: temperature must be positive");
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> cdf(logits.size());
  double total = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    total += std::exp((logits[i] - top) / temperature);
    cdf[i] = total;
  }
  const double u = uniform01(rng) * total;
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), logits.size() - 1);
}

Corruptor::Corruptor(Scorer& scorer, const RuleEngine& engine) : scorer_(&scorer), engine_(&engine) {}

double Corruptor::score_ops(const SentenceContext& ctx, std::span<const EditOp> ops) {
  double total = 0;
  for (std::size_t k = 0; k < ops.size(); ++k) total += scorer_->score_op(ctx, ops.first(k), ops[k]);
  return total;
}

CorruptionCandidate Corruptor::candidate_from_site(const SentenceContext& ctx, const Site& site) {
  CorruptionCandidate c;
  c.ops = ops_for_site(ctx.source().size(), site);
  c.target = apply_ops(ctx.source(), c.ops);
  c.log_prob = score_ops(ctx, c.ops);
  return c;
}

std::vector<CorruptionCandidate> Corruptor::propose(const SentenceContext& ctx, ErrorTag tag,
                                                    std::size_t limit) {
  if (!is_error_tag(tag)) throw ReservedTag("SELF cannot be requested");
  if (limit == 0) throw Error("propose: limit must be at least 1");
  std::vector<CorruptionCandidate> out;
  for (const auto& site : ctx.sites(tag)) out.push_back(candidate_from_site(ctx, site));
  std::stable_sort(out.begin(), out.end(), [](const CorruptionCandidate& a, const CorruptionCandidate& b) {
    return a.log_prob > b.log_prob;
  });
  if (out.size() > limit) out.resize(limit);
  return out;
}

CorruptionCandidate Corruptor::decode(const SentenceContext& ctx, ErrorTag tag, const DecodeOptions& options,
                                      std::mt19937_64& rng) {
  ++decode_calls_;
  if (options.beam_size == 0) throw Error("beam size must be at least 1");
  if (options.mode == DecodeMode::Beam) {
    auto cands = propose(ctx, tag, options.beam_size);
    if (cands.empty()) throw Infeasible("no " + std::string(render_tag(tag)) + " corruption applies");
    return std::move(cands.front());
  }
  if (!(options.temperature > 0)) throw Error("temperature must be positive");
  auto cands = propose(ctx, tag, RuleEngine::kMaxSites);
  if (cands.empty()) throw Infeasible("no " + std::string(render_tag(tag)) + " corruption applies");
  std::vector<double> logits;
  for (const auto& c : cands) logits.push_back(c.log_prob);
  return std::move(cands[sample_softmax(logits, options.temperature, rng)]);
}

double Corruptor::score_target(const SentenceContext& ctx, ErrorTag tag, std::span<const Token> target) {
  ++score_calls_;
  const auto& src = ctx.source();
  std::vector<EditOp> ops;
  std::size_t pos = 0;
  bool has_tag = false;
  for (const auto& e : annotate_tokens(src, target, engine_->lexicon())) {
    if (e.src_start > pos) ops.push_back({ErrorTag::Self, e.src_start, {}});
    ops.push_back({e.tag, e.src_end, e.replacement});
    has_tag = has_tag || e.tag == tag;
    pos = e.src_end;
  }
  if (!has_tag) return kMinScore;
  if (pos < src.size()) ops.push_back({ErrorTag::Self, src.size(), {}});
  return score_ops(ctx, ops);
}

CorruptionCandidate Corruptor::corrupt_prepend(std::string_view tagged_input, const DecodeOptions& options,
                                               std::mt19937_64& rng) {
  const auto space = tagged_input.find(' ');
  const std::string_view label = tagged_input.substr(0, space);
  const ErrorTag tag = parse_tag(label);
  if (!is_error_tag(tag)) throw UnknownTag(std::string(label));
  const std::string_view sentence = space == std::string_view::npos ? "" : tagged_input.substr(space + 1);
  SentenceContext ctx(tokenize(sentence), *engine_);
  return decode(ctx, tag, options, rng);
}

}  // namespace tagcorrupt

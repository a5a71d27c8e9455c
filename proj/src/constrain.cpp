#include "tagcorrupt/constrain.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "tagcorrupt/errors.hpp"

namespace tagcorrupt {

ConstraintMode parse_constraint_mode(std::string_view text) {
  if (text == "nosigma") return ConstraintMode::NoSigma;
  if (text == "postsigma") return ConstraintMode::PostSigma;
  if (text == "prepostsigma") return ConstraintMode::PrePostSigma;
  throw Error("unknown constraint mode: " + std::string(text));
}

std::string_view render_constraint_mode(ConstraintMode mode) {
  switch (mode) {
    case ConstraintMode::NoSigma: return "nosigma";
    case ConstraintMode::PostSigma: return "postsigma";
    case ConstraintMode::PrePostSigma: return "prepostsigma";
  }
  return "nosigma";
}

ConstraintFst::ConstraintFst(int num_states, int initial, std::vector<int> finals, std::vector<FstArc> arcs)
    : num_states_(num_states), initial_(initial), finals_(std::move(finals)), arcs_(std::move(arcs)) {}

bool ConstraintFst::is_final(int state) const {
  return std::find(finals_.begin(), finals_.end(), state) != finals_.end();
}

bool ConstraintFst::has_sigma() const {
  return std::any_of(arcs_.begin(), arcs_.end(), [](const FstArc& a) { return a.label.sigma; });
}

std::vector<ErrorTag> ConstraintFst::mentioned_tags() const {
  std::vector<ErrorTag> out;
  for (const auto& a : arcs_) {
    if (!a.label.sigma && is_error_tag(a.label.tag) &&
        std::find(out.begin(), out.end(), a.label.tag) == out.end()) {
      out.push_back(a.label.tag);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<int> ConstraintFst::step(int state, ErrorTag label) const {
  std::optional<int> sigma;
  for (const auto& a : arcs_) {
    if (a.from != state) continue;
    if (a.label.sigma) {
      if (!sigma) sigma = a.to;
    } else if (a.label.tag == label) {
      return a.to;
    }
  }
  return sigma;
}

std::string ConstraintFst::dump() const {
  std::ostringstream out;
  for (const auto& a : arcs_) {
    out << a.from << '\t' << (a.label.sigma ? std::string_view("SIGMA") : render_tag(a.label.tag)) << '\t'
        << a.to << '\n';
  }
  out << "FINAL:\n";
  for (int f : finals_) out << f << '\n';
  return out.str();
}

ConstraintFst build_constraint(ErrorTag tag, ConstraintMode mode) {
  if (!is_error_tag(tag)) throw ReservedTag("SELF cannot be the constrained tag");
  const FstLabel self = FstLabel::of(ErrorTag::Self);
  const FstLabel t = FstLabel::of(tag);
  const FstLabel sigma = FstLabel::any();
  std::vector<FstArc> arcs;
  switch (mode) {
    case ConstraintMode::NoSigma:
      arcs = {{0, self, 0}, {0, t, 1}, {1, self, 1}, {1, t, 1}};
      break;
    case ConstraintMode::PostSigma:
      arcs = {{0, self, 0}, {0, t, 1}, {1, sigma, 1}};
      break;
    case ConstraintMode::PrePostSigma:
      arcs = {{0, sigma, 0}, {0, t, 1}, {1, sigma, 1}};
      break;
  }
  return ConstraintFst(2, 0, {1}, std::move(arcs));
}

bool accepts(const ConstraintFst& fst, std::span<const ErrorTag> tags) {
  int state = fst.initial();
  for (ErrorTag t : tags) {
    auto next = fst.step(state, t);
    if (!next) return false;
    state = *next;
  }
  return fst.is_final(state);
}

namespace {

struct Hyp {
  double score = 0;
  std::vector<EditOp> ops;
  std::vector<std::size_t> ranks;
  int state = 0;
  std::size_t pos = 0;
};

bool better(const Hyp& a, const Hyp& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.ranks < b.ranks;
}

struct RankedSite {
  const Site* site;
  std::size_t rank;
};

}  // namespace

CorruptionCandidate constrained_decode(const SentenceContext& ctx, const ConstraintFst& fst,
                                       std::size_t beam_size, Corruptor& corruptor) {
  if (beam_size == 0) throw Error("beam size must be at least 1");
  corruptor.count_decode();
  const std::size_t n = ctx.source().size();
  Scorer& scorer = corruptor.scorer();

  std::vector<ErrorTag> tags;
  if (fst.has_sigma()) {
    tags.assign(error_tags().begin(), error_tags().end());
  } else {
    tags = fst.mentioned_tags();
  }
  std::vector<RankedSite> sites;
  for (ErrorTag t : tags) {
    for (const auto& s : ctx.sites(t)) sites.push_back({&s, sites.size()});
  }
  std::stable_sort(sites.begin(), sites.end(),
                   [](const RankedSite& a, const RankedSite& b) { return a.site->start < b.site->start; });

  // Hypotheses that end right after an edit, keyed by (position, state).
  std::map<std::pair<std::size_t, int>, Hyp> buckets;
  std::optional<Hyp> best;

  auto extend = [&](const Hyp& h, bool initial) {
    for (const auto& rs : sites) {
      const Site& s = *rs.site;
      if (initial ? s.start < h.pos : s.start <= h.pos) continue;
      Hyp next = h;
      if (s.start > h.pos) {
        EditOp self{ErrorTag::Self, s.start, {}};
        auto st = fst.step(next.state, ErrorTag::Self);
        if (!st) continue;
        next.score += scorer.score_op(ctx, next.ops, self);
        next.ops.push_back(std::move(self));
        next.state = *st;
      }
      auto st = fst.step(next.state, s.tag);
      if (!st) continue;
      EditOp op{s.tag, s.end, s.replacement};
      next.score += scorer.score_op(ctx, next.ops, op);
      next.ops.push_back(std::move(op));
      next.state = *st;
      next.pos = s.end;
      next.ranks.push_back(rs.rank);
      auto key = std::make_pair(next.pos, next.state);
      auto it = buckets.find(key);
      if (it == buckets.end()) {
        buckets.emplace(key, std::move(next));
      } else if (better(next, it->second)) {
        it->second = std::move(next);
      }
    }
  };
  auto complete = [&](const Hyp& h) {
    Hyp done = h;
    if (h.pos < n) {
      EditOp self{ErrorTag::Self, n, {}};
      auto st = fst.step(done.state, ErrorTag::Self);
      if (!st) return;
      done.score += scorer.score_op(ctx, done.ops, self);
      done.ops.push_back(std::move(self));
      done.state = *st;
    }
    if (!fst.is_final(done.state)) return;
    if (!best || better(done, *best)) best = std::move(done);
  };

  Hyp start;
  start.state = fst.initial();
  extend(start, true);
  for (std::size_t p = 0; p <= n; ++p) {
    std::vector<Hyp> frontier;
    for (auto it = buckets.lower_bound({p, -1}); it != buckets.end() && it->first.first == p;) {
      frontier.push_back(std::move(it->second));
      it = buckets.erase(it);
    }
    std::sort(frontier.begin(), frontier.end(), better);
    if (frontier.size() > beam_size) frontier.resize(beam_size);
    for (const auto& h : frontier) {
      complete(h);
      extend(h, false);
    }
  }
  if (!best) throw Infeasible("no corruption satisfies the tag constraint");

  CorruptionCandidate out;
  out.target = apply_ops(ctx.source(), best->ops);
  out.ops = std::move(best->ops);
  out.log_prob = best->score;
  return out;
}

}  // namespace tagcorrupt

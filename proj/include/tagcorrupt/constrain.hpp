#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tagcorrupt/corrupt.hpp"
#include "tagcorrupt/tags.hpp"

namespace tagcorrupt {

enum class ConstraintMode { NoSigma, PostSigma, PrePostSigma };

// "nosigma", "postsigma", "prepostsigma".
ConstraintMode parse_constraint_mode(std::string_view text);
std::string_view render_constraint_mode(ConstraintMode mode);

// Arc label: a concrete tag (SELF included) or SIGMA, which matches any tag.
struct FstLabel {
  bool sigma = false;
  ErrorTag tag = ErrorTag::Self;

  static FstLabel any() { return {true, ErrorTag::Self}; }
  static FstLabel of(ErrorTag t) { return {false, t}; }
  bool operator==(const FstLabel&) const = default;
};

struct FstArc {
  int from = 0;
  FstLabel label;
  int to = 0;
};

// Acceptor over the tag tape. Concrete-label arcs take precedence over SIGMA.
class ConstraintFst {
 public:
  ConstraintFst(int num_states, int initial, std::vector<int> finals, std::vector<FstArc> arcs);

  int num_states() const { return num_states_; }
  int initial() const { return initial_; }
  bool is_final(int state) const;
  const std::vector<int>& finals() const { return finals_; }
  const std::vector<FstArc>& arcs() const { return arcs_; }
  bool has_sigma() const;
  // Concrete tags mentioned on arcs (SELF excluded).
  std::vector<ErrorTag> mentioned_tags() const;

  std::optional<int> step(int state, ErrorTag label) const;
  // "from<TAB>label<TAB>to" lines, then "FINAL:" and one final state per line.
  std::string dump() const;

 private:
  int num_states_;
  int initial_;
  std::vector<int> finals_;
  std::vector<FstArc> arcs_;
};

// Throws ReservedTag for SELF.
ConstraintFst build_constraint(ErrorTag tag, ConstraintMode mode);
bool accepts(const ConstraintFst& fst, std::span<const ErrorTag> tags);

// Search over non-overlapping site sequences; every op, SELF included, is fed
// to the FST and only final states may complete. Throws Infeasible.
CorruptionCandidate constrained_decode(const SentenceContext& ctx, const ConstraintFst& fst,
                                       std::size_t beam_size, Corruptor& corruptor);

}  // namespace tagcorrupt

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tagcorrupt/lexicon.hpp"
#include "tagcorrupt/tags.hpp"
#include "tagcorrupt/text.hpp"

namespace tagcorrupt {

// Untagged span edit produced by align: source tokens [src_start, src_end)
// become `replacement`.
struct EditSpan {
  std::size_t src_start = 0;
  std::size_t src_end = 0;
  Tokens replacement;
  bool transposition = false;

  bool operator==(const EditSpan&) const = default;
};

struct Edit {
  std::size_t src_start = 0;
  std::size_t src_end = 0;
  Tokens replacement;
  ErrorTag tag = ErrorTag::Other;

  bool operator==(const Edit&) const = default;
};

// Alignment costs in tenths of a unit.
namespace align_cost {
inline constexpr int kMatch = 0;
inline constexpr int kCaseSub = 1;
inline constexpr int kInflectionSub = 3;
inline constexpr int kSub = 10;
inline constexpr int kGap = 10;
inline constexpr int kTranspose = 10;
}  // namespace align_cost

int substitution_cost(const Token& a, const Token& b, const Lexicon& lex);

struct Alignment {
  int cost = 0;  // tenths
  std::vector<EditSpan> spans;
};

Alignment align(std::span<const Token> src, std::span<const Token> tgt,
                const Lexicon& lex = Lexicon::builtin());

ErrorTag classify(std::span<const Token> src, const EditSpan& span,
                  const Lexicon& lex = Lexicon::builtin());

std::vector<Edit> annotate_tokens(std::span<const Token> src, std::span<const Token> tgt,
                                  const Lexicon& lex = Lexicon::builtin());
std::vector<Edit> annotate_pair(std::string_view clean, std::string_view corrupted,
                                const Lexicon& lex = Lexicon::builtin());

// Applies non-overlapping edits given in source order.
Tokens apply_edits(std::span<const Token> src, std::span<const Edit> edits);

// Optimal string alignment distance (adjacent transpositions count once).
std::size_t damerau_distance(std::string_view a, std::string_view b);

struct AnnotatedPair {
  std::string source;
  std::string target;
  std::vector<Edit> edits;
};

TagCountArray count_edit_tags(std::span<const AnnotatedPair> pairs);
// Relative edit frequencies over all pairs; throws EmptyCorpus without edits.
TagDistribution estimate_distribution(std::span<const AnnotatedPair> pairs);

// {"source": ..., "target": ..., "edits": [{"start", "end", "replacement", "tag"}]}
std::string annotation_to_json(const AnnotatedPair& pair);

}  // namespace tagcorrupt

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>

namespace tagcorrupt {

// ERRANT main error types (no M:/R:/U: prefixes). Enumerators are declared in
// lexical order of their labels so that enum order doubles as the tie-break
// order used throughout. SELF marks copied source spans and is never part of
// a distribution.
enum class ErrorTag : std::uint8_t {
  Adj,
  AdjForm,
  Adv,
  Conj,
  Contr,
  Det,
  Morph,
  Noun,
  NounInfl,
  NounNum,
  NounPoss,
  Orth,
  Other,
  Part,
  Prep,
  Pron,
  Punct,
  Spell,
  Unk,
  Verb,
  VerbForm,
  VerbInfl,
  VerbSva,
  VerbTense,
  Wo,
  Self,
};

inline constexpr std::size_t kNumErrorTags = 25;

constexpr std::size_t index_of(ErrorTag tag) { return static_cast<std::size_t>(tag); }
constexpr ErrorTag tag_at(std::size_t index) { return static_cast<ErrorTag>(index); }
constexpr bool is_error_tag(ErrorTag tag) { return tag != ErrorTag::Self; }

// The 25 error tags, in enum (lexical) order.
const std::array<ErrorTag, kNumErrorTags>& error_tags();

std::string_view render_tag(ErrorTag tag);

// Case-sensitive. Accepts the 26 canonical labels plus "K" as an alias of
// UNK. Throws UnknownTag.
ErrorTag parse_tag(std::string_view text);

using TagCountArray = std::array<std::size_t, kNumErrorTags>;

// Probability simplex over the 25 error tags.
class TagDistribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  TagDistribution();  // uniform

  // Throws InvalidDistribution unless every entry is >= 0 and the entries sum
  // to 1 within kSumTolerance.
  static TagDistribution from_probabilities(const std::array<double, kNumErrorTags>& probs);
  // Missing tags read as 0. SELF is rejected.
  static TagDistribution from_map(const std::map<ErrorTag, double>& probs);
  static TagDistribution from_counts(const TagCountArray& counts);
  static TagDistribution uniform();

  double operator[](ErrorTag tag) const { return probs_[index_of(tag)]; }
  const std::array<double, kNumErrorTags>& probabilities() const { return probs_; }

  bool operator==(const TagDistribution&) const = default;

 private:
  explicit TagDistribution(const std::array<double, kNumErrorTags>& probs) : probs_(probs) {}
  std::array<double, kNumErrorTags> probs_{};
};

// Relative edit frequencies. Throws EmptyCorpus when no edit was counted.
TagDistribution estimate_distribution(const TagCountArray& edit_counts);

// Largest-remainder apportionment of dist * n; equal remainders go to the
// lexically smaller tag. Always sums to n.
TagCountArray target_counts(const TagDistribution& dist, std::size_t n);

// Total variation distance, 0.5 * sum |p - q|.
double tv_distance(const TagDistribution& p, const TagDistribution& q);

// Distribution file format: a JSON object mapping labels to weights. Missing
// tags read as 0; a sum within [0.99, 1.01] is renormalized, anything else
// throws InvalidDistribution.
TagDistribution parse_distribution_json(std::string_view json_text);
TagDistribution load_distribution(const std::string& path);
std::string distribution_to_json(const TagDistribution& dist, bool include_zeros = false);

}  // namespace tagcorrupt

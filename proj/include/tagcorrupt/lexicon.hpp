#pragma once

#include <array>
#include <functional>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tagcorrupt/text.hpp"

namespace tagcorrupt {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

template <class V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;
using StringSet = std::unordered_set<std::string, StringHash, std::equal_to<>>;

enum class WordClass { Det, Prep, Part, Conj, Pron, Adv };

enum class Pos { Punct, Det, Prep, Part, Conj, Pron, Adv, Aux, Noun, Verb, Adj };

enum class VerbForm { Base, Present, Third, Past, Participle, Gerund };

struct VerbEntry {
  std::string base, third, past, participle, gerund;
  bool irregular = false;
};

struct NounEntry {
  std::string singular, plural;
  bool irregular = false;
};

struct AdjEntry {
  std::string base, comparative, superlative;  // empty degrees: periphrastic
  bool irregular = false;
};

struct VerbFormRef {
  std::size_t entry;
  VerbForm form;
};

struct NounFormRef {
  std::size_t entry;
  bool plural;
};

struct AdjFormRef {
  std::size_t entry;
  int degree;  // 0 base, 1 comparative, 2 superlative
};

// Lexicon lookups for one word, resolved once so pairwise checks avoid hashing.
struct InflectionKey {
  std::string_view word;
  std::span<const VerbFormRef> verbs;
  std::span<const NounFormRef> nouns;
  std::span<const AdjFormRef> adjs;
  std::optional<std::size_t> bad_verb;
  std::optional<std::size_t> bad_noun;
};

struct PhraseRewrite {
  std::vector<std::string> from;
  std::vector<std::string> to;
};

// Read-only linguistic resources shared by the annotator and the corruption
// engine: the spelling lexicon, closed-class lists, inflection tables and
// rewrite tables. Immutable after construction; safe to share across threads.
class Lexicon {
 public:
  // Built-in resources compiled into the library.
  static const Lexicon& builtin();
  // Built-in tables with the spelling word list replaced by the file at path
  // (UTF-8, one word per line).
  static Lexicon with_word_list(const std::string& path);
  static Lexicon from_text(std::string_view words, std::string_view inflections,
                           std::string_view wordlists);

  bool in_lexicon(std::string_view lower_word) const;
  bool in_class(std::string_view lower_word, WordClass cls) const;
  bool is_modal(std::string_view lower_word) const;
  bool is_auxiliary(std::string_view lower_word) const;

  std::span<const VerbFormRef> verb_forms(std::string_view lower_word) const;
  std::span<const NounFormRef> noun_forms(std::string_view lower_word) const;
  std::span<const AdjFormRef> adj_forms(std::string_view lower_word) const;
  const VerbEntry& verb(std::size_t i) const { return verbs_[i]; }
  const NounEntry& noun(std::size_t i) const { return nouns_[i]; }
  const AdjEntry& adj(std::size_t i) const { return adjs_[i]; }
  std::string verb_form(std::size_t entry, VerbForm form) const;

  // Wrong regularizations of irregular (or "-es"-misinflected) forms.
  std::optional<std::size_t> noun_misinflection(std::string_view lower_word) const;
  std::optional<std::size_t> verb_misinflection(std::string_view lower_word) const;
  std::vector<std::string> noun_misinflections_of(std::size_t entry, bool plural) const;
  std::vector<std::string> verb_misinflections_of(std::size_t entry, VerbForm form) const;

  // Contraction table: full form -> clitic and clitic -> full forms.
  std::span<const std::string> contractions_of(std::string_view lower_word) const;
  std::span<const std::string> expansions_of(std::string_view lower_clitic) const;
  bool is_contraction_host(std::string_view lower_word) const;

  const std::vector<std::pair<std::vector<std::string>, std::string>>& orth_joins() const {
    return orth_joins_;
  }
  // Confusion set members for a word; pos is Adj, Noun or Verb (lemmas).
  std::vector<std::string> confusions(std::string_view lower_word, Pos pos) const;
  bool confusable(std::string_view a, std::string_view b, Pos pos) const;
  const std::vector<std::vector<std::string>>& morph_families() const { return morph_families_; }
  bool same_morph_family(std::string_view a, std::string_view b) const;
  const std::vector<PhraseRewrite>& other_rewrites() const { return other_rewrites_; }
  const std::vector<std::string>& class_words(WordClass cls) const {
    return class_lists_[static_cast<std::size_t>(cls)];
  }

  // True when one token is an inflectional variant of the other (shared
  // table lemma, or a regular -s/-es/-ed/-ing/-er/-est/'s relation).
  bool inflectional_variants(std::string_view a, std::string_view b) const;
  InflectionKey inflection_key(std::string_view lower_word) const;
  static bool inflectional_variants(const InflectionKey& a, const InflectionKey& b);

  // Context-sensitive part-of-speech guess for tokens[i].
  Pos guess_pos(std::span<const Token> tokens, std::size_t i) const;
  bool is_content(std::span<const Token> tokens, std::size_t i) const;
  bool is_nounish(std::span<const Token> tokens, std::size_t i) const;

 private:
  Lexicon() = default;
  void load_words(std::string_view text);
  void load_inflections(std::string_view text);
  void load_wordlists(std::string_view text);
  void index_tables();

  StringSet words_;
  std::array<StringSet, 6> classes_;
  std::array<std::vector<std::string>, 6> class_lists_;
  StringSet contraction_hosts_;

  std::vector<VerbEntry> verbs_;
  std::vector<NounEntry> nouns_;
  std::vector<AdjEntry> adjs_;
  StringMap<std::vector<VerbFormRef>> verb_index_;
  StringMap<std::vector<NounFormRef>> noun_index_;
  StringMap<std::vector<AdjFormRef>> adj_index_;
  StringMap<std::size_t> noun_bad_forms_;
  StringMap<std::size_t> verb_bad_forms_;

  StringMap<std::vector<std::string>> contract_;
  StringMap<std::vector<std::string>> expand_;
  std::vector<std::pair<std::vector<std::string>, std::string>> orth_joins_;
  std::array<std::vector<std::vector<std::string>>, 3> confusion_sets_;  // adj, noun, verb
  std::array<StringMap<std::vector<std::size_t>>, 3> confusion_index_;
  std::vector<std::vector<std::string>> morph_families_;
  StringMap<std::vector<std::size_t>> morph_index_;
  std::vector<PhraseRewrite> other_rewrites_;
};

std::string regular_plural(std::string_view singular);

}  // namespace tagcorrupt

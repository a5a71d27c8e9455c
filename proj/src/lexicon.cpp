#include "tagcorrupt/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "resources.hpp"
#include "tagcorrupt/errors.hpp"

namespace tagcorrupt {
namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line);
    pos = end + 1;
  }
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

constexpr std::string_view kModals[] = {"can", "could", "will", "would", "shall",
                                        "should", "may", "might", "must"};

std::size_t confusion_slot(Pos pos) {
  switch (pos) {
    case Pos::Adj: return 0;
    case Pos::Noun: return 1;
    default: return 2;
  }
}

}  // namespace

std::string regular_plural(std::string_view s) {
  std::string w(s);
  if (ends_with(w, "s") || ends_with(w, "x") || ends_with(w, "z") || ends_with(w, "ch") ||
      ends_with(w, "sh")) {
    return w + "es";
  }
  if (w.size() >= 2 && w.back() == 'y' && !is_vowel(w[w.size() - 2])) {
    return w.substr(0, w.size() - 1) + "ies";
  }
  return w + "s";
}

const Lexicon& Lexicon::builtin() {
  static const Lexicon lex = from_text(resources::lexicon_words(), resources::inflection_tables(),
                                       resources::word_lists());
  return lex;
}

Lexicon Lexicon::with_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_text(buffer.str(), resources::inflection_tables(), resources::word_lists());
}

Lexicon Lexicon::from_text(std::string_view words, std::string_view inflections,
                           std::string_view wordlists) {
  Lexicon lex;
  lex.load_words(words);
  lex.load_wordlists(wordlists);
  lex.load_inflections(inflections);
  lex.index_tables();
  return lex;
}

void Lexicon::load_words(std::string_view text) {
  for_each_line(text, [&](std::string_view line) {
    for (const auto& w : split_ws(line)) words_.insert(to_lower(w));
  });
}

void Lexicon::load_inflections(std::string_view text) {
  for_each_line(text, [&](std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    auto f = split_ws(line);
    if (f.empty()) return;
    const bool irregular = f.back() == "*";
    if (irregular) f.pop_back();
    if (f[0] == "V" && f.size() == 6) {
      verbs_.push_back({f[1], f[2], f[3], f[4], f[5], irregular});
    } else if (f[0] == "N" && f.size() == 3) {
      nouns_.push_back({f[1], f[2], irregular});
    } else if (f[0] == "A" && f.size() == 4) {
      adjs_.push_back({f[1], f[2] == "-" ? "" : f[2], f[3] == "-" ? "" : f[3], irregular});
    } else {
      throw Error("malformed inflection table line: " + std::string(line));
    }
  });
}

void Lexicon::load_wordlists(std::string_view text) {
  std::string section;
  for_each_line(text, [&](std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    if (line.front() == '[') {
      section = std::string(line.substr(1, line.find(']') - 1));
      return;
    }
    static const std::pair<std::string_view, WordClass> kClassSections[] = {
        {"DET", WordClass::Det},   {"PREP", WordClass::Prep}, {"PART", WordClass::Part},
        {"CONJ", WordClass::Conj}, {"PRON", WordClass::Pron}, {"ADV", WordClass::Adv}};
    for (const auto& [name, cls] : kClassSections) {
      if (section == name) {
        for (const auto& w : split_ws(line)) {
          classes_[static_cast<std::size_t>(cls)].insert(w);
          class_lists_[static_cast<std::size_t>(cls)].push_back(w);
        }
        return;
      }
    }
    if (section == "CONTRACTION") {
      auto f = split_ws(line);
      contract_[f.at(0)].push_back(f.at(1));
      expand_[f.at(1)].push_back(f.at(0));
    } else if (section == "CONTRACTION_HOSTS") {
      for (const auto& w : split_ws(line)) contraction_hosts_.insert(w);
    } else if (section == "ORTH") {
      const auto bar = line.find('|');
      orth_joins_.emplace_back(split_ws(line.substr(0, bar)), std::string(line.substr(bar + 1)));
    } else if (section == "CONFUSION_ADJ" || section == "CONFUSION_NOUN" ||
               section == "CONFUSION_VERB") {
      const std::size_t slot = section == "CONFUSION_ADJ" ? 0 : section == "CONFUSION_NOUN" ? 1 : 2;
      confusion_sets_[slot].push_back(split_ws(line));
    } else if (section == "MORPH") {
      morph_families_.push_back(split_ws(line));
    } else if (section == "OTHER") {
      const auto arrow = line.find("=>");
      other_rewrites_.push_back({split_ws(line.substr(0, arrow)), split_ws(line.substr(arrow + 2))});
    }
  });
}

void Lexicon::index_tables() {
  for (std::size_t i = 0; i < verbs_.size(); ++i) {
    const VerbEntry& v = verbs_[i];
    auto add = [&](const std::string& w, VerbForm f) {
      auto& refs = verb_index_[w];
      for (const auto& r : refs) {
        if (r.entry == i && r.form == f) return;
      }
      refs.push_back({i, f});
      words_.insert(w);
    };
    add(v.base, VerbForm::Base);
    add(v.third, VerbForm::Third);
    add(v.past, VerbForm::Past);
    add(v.participle, VerbForm::Participle);
    add(v.gerund, VerbForm::Gerund);
    if (v.base == "be") {
      add("am", VerbForm::Present);
      add("are", VerbForm::Present);
      add("were", VerbForm::Past);
    }
  }
  for (std::size_t i = 0; i < nouns_.size(); ++i) {
    noun_index_[nouns_[i].singular].push_back({i, false});
    if (nouns_[i].plural != nouns_[i].singular) {
      noun_index_[nouns_[i].plural].push_back({i, true});
    }
    words_.insert(nouns_[i].singular);
    words_.insert(nouns_[i].plural);
  }
  for (std::size_t i = 0; i < adjs_.size(); ++i) {
    adj_index_[adjs_[i].base].push_back({i, 0});
    if (!adjs_[i].comparative.empty()) adj_index_[adjs_[i].comparative].push_back({i, 1});
    if (!adjs_[i].superlative.empty()) adj_index_[adjs_[i].superlative].push_back({i, 2});
    words_.insert(adjs_[i].base);
  }
  for (const auto& list : class_lists_) {
    for (const auto& w : list) words_.insert(w);
  }
  // Misinflections must be out-of-lexicon to count as such.
  for (std::size_t i = 0; i < nouns_.size(); ++i) {
    for (bool plural : {false, true}) {
      for (const auto& bad : noun_misinflections_of(i, plural)) noun_bad_forms_.emplace(bad, i);
    }
  }
  for (std::size_t i = 0; i < verbs_.size(); ++i) {
    for (VerbForm f : {VerbForm::Base, VerbForm::Third, VerbForm::Past, VerbForm::Participle, VerbForm::Gerund}) {
      for (const auto& bad : verb_misinflections_of(i, f)) verb_bad_forms_.emplace(bad, i);
    }
  }
  for (std::size_t slot = 0; slot < 3; ++slot) {
    for (std::size_t s = 0; s < confusion_sets_[slot].size(); ++s) {
      for (const auto& w : confusion_sets_[slot][s]) confusion_index_[slot][w].push_back(s);
    }
  }
  for (std::size_t f = 0; f < morph_families_.size(); ++f) {
    for (const auto& w : morph_families_[f]) morph_index_[w].push_back(f);
  }
}

std::vector<std::string> Lexicon::noun_misinflections_of(std::size_t entry, bool plural) const {
  const NounEntry& n = nouns_[entry];
  std::vector<std::string> out;
  auto push = [&](std::string w) {
    if (w == n.singular || w == n.plural || words_.count(w) != 0 || verb_index_.count(w) != 0) return;
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(std::move(w));
  };
  if (n.irregular) {
    if (plural || n.plural == n.singular) {
      push(n.plural + "s");
      if (n.plural == n.singular) push(n.singular + "es");
    }
    if (!plural) {
      push(n.singular + "s");
      push(n.singular + "es");
    }
  } else {
    const std::string& sg = n.singular;
    if (ends_with(n.plural, "ies")) push(sg + "s");
    if (ends_with(n.plural, "es") && !ends_with(n.plural, "ies")) push(sg + "s");
    if (n.plural == sg + "s" && sg.back() != 'e' && sg.back() != 'y') push(sg + "es");
  }
  return out;
}

std::vector<std::string> Lexicon::verb_misinflections_of(std::size_t entry, VerbForm form) const {
  const VerbEntry& v = verbs_[entry];
  std::vector<std::string> out;
  if (v.base == "be") return out;
  auto push = [&](std::string w) {
    if (words_.count(w) != 0 || verb_index_.count(w) != 0 || noun_index_.count(w) != 0) return;
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(std::move(w));
  };
  const std::string& b = v.base;
  const char last = b.back();
  const bool consonant_end = std::string_view("aeiouwxy").find(last) == std::string_view::npos;
  if (form == VerbForm::Past || form == VerbForm::Participle) {
    const std::string& past = form == VerbForm::Past ? v.past : v.participle;
    if (v.irregular) {
      push(b + (last == 'e' ? "d" : "ed"));
    } else if (past.size() == b.size() + 3 && ends_with(past, "ied")) {
      push(b + "ed");
    } else if (past == b + last + "ed") {
      push(b + "ed");
    } else if (past == b + "ed" && consonant_end) {
      push(b + last + "ed");
    }
  } else if (form == VerbForm::Gerund) {
    if (last == 'e' && v.gerund == b.substr(0, b.size() - 1) + "ing") {
      push(b + "ing");
    } else if (v.gerund == b + last + "ing") {
      push(b + "ing");
    } else if (v.gerund == b + "ing" && last == 'e' && b.size() >= 3) {
      push(b.substr(0, b.size() - 1) + "ing");
    } else if (v.gerund == b + "ing" && consonant_end && b.size() >= 3) {
      push(b + last + "ing");
    }
  } else if (form == VerbForm::Base || form == VerbForm::Third || form == VerbForm::Present) {
    if (v.third == v.base + "s" && v.base.back() != 'e') push(v.base + "es");
    if (v.third == v.base + "es" || ends_with(v.third, "ies")) push(v.base + "s");
  }
  return out;
}

bool Lexicon::in_lexicon(std::string_view w) const { return words_.count(w) != 0; }

bool Lexicon::in_class(std::string_view w, WordClass cls) const {
  return classes_[static_cast<std::size_t>(cls)].count(w) != 0;
}

bool Lexicon::is_modal(std::string_view w) const {
  return std::find(std::begin(kModals), std::end(kModals), w) != std::end(kModals);
}

bool Lexicon::is_auxiliary(std::string_view w) const {
  if (is_modal(w)) return true;
  for (const auto& ref : verb_forms(w)) {
    const std::string& base = verbs_[ref.entry].base;
    if (base == "be" || base == "have" || base == "do") return true;
  }
  return false;
}

std::span<const VerbFormRef> Lexicon::verb_forms(std::string_view w) const {
  auto it = verb_index_.find(w);
  if (it == verb_index_.end()) return {};
  return it->second;
}

std::span<const NounFormRef> Lexicon::noun_forms(std::string_view w) const {
  auto it = noun_index_.find(w);
  if (it == noun_index_.end()) return {};
  return it->second;
}

std::span<const AdjFormRef> Lexicon::adj_forms(std::string_view w) const {
  auto it = adj_index_.find(w);
  if (it == adj_index_.end()) return {};
  return it->second;
}

std::string Lexicon::verb_form(std::size_t entry, VerbForm form) const {
  const VerbEntry& v = verbs_[entry];
  switch (form) {
    case VerbForm::Base: return v.base;
    case VerbForm::Present: return v.base == "be" ? "are" : v.base;
    case VerbForm::Third: return v.third;
    case VerbForm::Past: return v.past;
    case VerbForm::Participle: return v.participle;
    case VerbForm::Gerund: return v.gerund;
  }
  return v.base;
}

std::optional<std::size_t> Lexicon::noun_misinflection(std::string_view w) const {
  auto it = noun_bad_forms_.find(w);
  if (it == noun_bad_forms_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Lexicon::verb_misinflection(std::string_view w) const {
  auto it = verb_bad_forms_.find(w);
  if (it == verb_bad_forms_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::string> Lexicon::contractions_of(std::string_view w) const {
  auto it = contract_.find(w);
  if (it == contract_.end()) return {};
  return it->second;
}

std::span<const std::string> Lexicon::expansions_of(std::string_view w) const {
  auto it = expand_.find(w);
  if (it == expand_.end()) return {};
  return it->second;
}

bool Lexicon::is_contraction_host(std::string_view w) const {
  return contraction_hosts_.count(w) != 0;
}

namespace {

std::string lemma_for(const Lexicon& lex, std::string_view w, Pos pos) {
  if (pos == Pos::Noun) {
    auto forms = lex.noun_forms(w);
    if (!forms.empty()) return lex.noun(forms.front().entry).singular;
  } else if (pos == Pos::Verb) {
    auto forms = lex.verb_forms(w);
    if (!forms.empty()) return lex.verb(forms.front().entry).base;
  } else if (pos == Pos::Adj) {
    auto forms = lex.adj_forms(w);
    if (!forms.empty()) return lex.adj(forms.front().entry).base;
  }
  return std::string(w);
}

}  // namespace

std::vector<std::string> Lexicon::confusions(std::string_view w, Pos pos) const {
  const std::size_t slot = confusion_slot(pos);
  const std::string lemma = lemma_for(*this, w, pos);
  std::vector<std::string> out;
  auto it = confusion_index_[slot].find(lemma);
  if (it == confusion_index_[slot].end()) return out;
  for (std::size_t s : it->second) {
    for (const auto& m : confusion_sets_[slot][s]) {
      if (m != lemma && std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
  }
  return out;
}

bool Lexicon::confusable(std::string_view a, std::string_view b, Pos pos) const {
  const std::string lb = lemma_for(*this, b, pos);
  for (const auto& m : confusions(a, pos)) {
    if (m == lb) return true;
  }
  return false;
}

bool Lexicon::same_morph_family(std::string_view a, std::string_view b) const {
  auto ia = morph_index_.find(a);
  auto ib = morph_index_.find(b);
  if (ia == morph_index_.end() || ib == morph_index_.end()) return false;
  for (std::size_t x : ia->second) {
    if (std::find(ib->second.begin(), ib->second.end(), x) != ib->second.end()) return true;
  }
  return false;
}

bool Lexicon::inflectional_variants(std::string_view a, std::string_view b) const {
  return inflectional_variants(inflection_key(a), inflection_key(b));
}

InflectionKey Lexicon::inflection_key(std::string_view w) const {
  return {w, verb_forms(w), noun_forms(w), adj_forms(w), verb_misinflection(w), noun_misinflection(w)};
}

bool Lexicon::inflectional_variants(const InflectionKey& ka, const InflectionKey& kb) {
  const std::string_view a = ka.word;
  const std::string_view b = kb.word;
  if (a == b) return false;
  for (const auto& ra : ka.verbs) {
    for (const auto& rb : kb.verbs) {
      if (ra.entry == rb.entry) return true;
    }
    if (kb.bad_verb && *kb.bad_verb == ra.entry) return true;
  }
  for (const auto& ra : ka.nouns) {
    for (const auto& rb : kb.nouns) {
      if (ra.entry == rb.entry) return true;
    }
    if (kb.bad_noun && *kb.bad_noun == ra.entry) return true;
  }
  for (const auto& rb : kb.verbs) {
    if (ka.bad_verb && *ka.bad_verb == rb.entry) return true;
  }
  for (const auto& rb : kb.nouns) {
    if (ka.bad_noun && *ka.bad_noun == rb.entry) return true;
  }
  for (const auto& ra : ka.adjs) {
    for (const auto& rb : kb.adjs) {
      if (ra.entry == rb.entry) return true;
    }
  }
  std::string_view shorter = a.size() <= b.size() ? a : b;
  std::string_view longer = a.size() <= b.size() ? b : a;
  if (shorter.size() < 2) return false;
  if (longer.compare(0, shorter.size() - 1, shorter.substr(0, shorter.size() - 1)) != 0) return false;
  static constexpr std::string_view kSuffixes[] = {"s", "es", "ed", "d", "ing", "er", "est"};
  for (std::string_view suf : kSuffixes) {
    if (!ends_with(longer, suf)) continue;
    std::string_view stem = longer.substr(0, longer.size() - suf.size());
    if (stem == shorter) return true;
    if (!stem.empty() && stem.back() == 'i' && shorter.back() == 'y' &&
        stem.substr(0, stem.size() - 1) == shorter.substr(0, shorter.size() - 1)) {
      return true;
    }
    if (shorter.back() == 'e' && stem == shorter.substr(0, shorter.size() - 1)) return true;
  }
  return false;
}

Pos Lexicon::guess_pos(std::span<const Token> tokens, std::size_t i) const {
  const std::string& w = tokens[i].lower;
  if (is_punctuation(w)) return Pos::Punct;
  if (is_clitic(w)) return Pos::Aux;
  const std::string prev = i > 0 ? tokens[i - 1].lower : std::string();
  const bool prev_is_determiner = !prev.empty() &&
                                  (in_class(prev, WordClass::Det) ||
                                   prev == "my" || prev == "your" || prev == "his" || prev == "her" ||
                                   prev == "its" || prev == "our" || prev == "their" ||
                                   !adj_forms(prev).empty());
  const bool prev_is_subject = !prev.empty() && (in_class(prev, WordClass::Pron) || is_modal(prev) ||
                                                 prev == "to" || is_clitic(prev));
  const bool verb = !verb_forms(w).empty();
  const bool noun = !noun_forms(w).empty();
  const bool adj = !adj_forms(w).empty();

  if (is_auxiliary(w) && !(noun && prev_is_determiner)) return Pos::Aux;
  static constexpr WordClass kOrder[] = {WordClass::Det, WordClass::Pron, WordClass::Conj,
                                         WordClass::Prep, WordClass::Part, WordClass::Adv};
  for (WordClass cls : kOrder) {
    if (!in_class(w, cls)) continue;
    if (verb && prev_is_subject) return Pos::Verb;
    if ((noun || adj) && prev_is_determiner) return noun ? Pos::Noun : Pos::Adj;
    switch (cls) {
      case WordClass::Det: return Pos::Det;
      case WordClass::Pron: return Pos::Pron;
      case WordClass::Conj: return Pos::Conj;
      case WordClass::Prep: return Pos::Prep;
      case WordClass::Part: return Pos::Part;
      case WordClass::Adv: return Pos::Adv;
    }
  }
  if (verb && noun) return prev_is_determiner ? Pos::Noun : (prev_is_subject ? Pos::Verb : Pos::Noun);
  if (adj) return Pos::Adj;
  if (verb) return Pos::Verb;
  if (noun) return Pos::Noun;
  if (ends_with(w, "ly") && w.size() > 4) return Pos::Adv;
  static constexpr std::string_view kNounSuffixes[] = {"ness", "ship", "ment", "tion", "sion", "ity", "ism", "hood"};
  static constexpr std::string_view kAdjSuffixes[] = {"ous", "ful", "ive", "able", "ible", "less", "ical", "ish"};
  for (auto s : kNounSuffixes) {
    if (ends_with(w, s)) return Pos::Noun;
  }
  for (auto s : kAdjSuffixes) {
    if (ends_with(w, s)) return Pos::Adj;
  }
  if (prev_is_subject && (ends_with(w, "ed") || ends_with(w, "s"))) return Pos::Verb;
  if (ends_with(w, "ing") && !prev_is_determiner) return Pos::Verb;
  return Pos::Noun;
}

bool Lexicon::is_content(std::span<const Token> tokens, std::size_t i) const {
  switch (guess_pos(tokens, i)) {
    case Pos::Noun:
    case Pos::Verb:
    case Pos::Adj:
      return true;
    case Pos::Adv:
      return ends_with(tokens[i].lower, "ly");
    default:
      return false;
  }
}

bool Lexicon::is_nounish(std::span<const Token> tokens, std::size_t i) const {
  return guess_pos(tokens, i) == Pos::Noun;
}

}  // namespace tagcorrupt

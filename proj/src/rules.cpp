#include <algorithm>
#include <cctype>
#include <set>

#include "tagcorrupt/annotate.hpp"
#include "tagcorrupt/corrupt.hpp"

namespace tagcorrupt {
namespace {

using Out = std::vector<Site>;

bool is_word(const Token& t) { return !is_punctuation(t.surface) && !is_clitic(t.lower); }

bool capitalized(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])) != 0;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

// Gives `word` the capitalization of `like` (first letter only).
std::string match_case(const std::string& word, const Token& like) {
  return capitalized(like.surface) && like.surface != "I" ? capitalize(word) : word;
}

bool starts_with_vowel_sound(std::string_view w) {
  if (w.empty()) return false;
  const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(w[0])));
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || (c == 'u' && w.substr(0, 3) != "uni");
}

void add(Out& out, ErrorTag tag, std::size_t start, std::size_t end, std::vector<std::string> words) {
  Tokens rep;
  for (auto& w : words) rep.emplace_back(std::move(w));
  out.push_back({tag, start, end, std::move(rep)});
}

std::size_t final_punct_start(std::span<const Token> s) {
  std::size_t k = s.size();
  while (k > 0 && is_punctuation(s[k - 1].surface)) --k;
  return k;
}

struct Ctx {
  std::span<const Token> s;
  const Lexicon& lex;
  std::vector<Pos> pos;

  Ctx(std::span<const Token> src, const Lexicon& l) : s(src), lex(l) {
    for (std::size_t i = 0; i < s.size(); ++i) pos.push_back(lex.guess_pos(s, i));
  }
  const std::string& w(std::size_t i) const { return s[i].lower; }
  bool is(std::size_t i, Pos p) const { return i < s.size() && pos[i] == p; }
};

void gen_punct(const Ctx& c, Out& out) {
  const ErrorTag t = ErrorTag::Punct;
  for (std::size_t i = c.s.size(); i-- > 0;) {
    if (is_punctuation(c.s[i].surface)) add(out, t, i, i + 1, {});
  }
  static const std::vector<std::pair<std::string, std::vector<std::string>>> kSubs = {
      {".", {"!", ","}}, {",", {";", "."}}, {"!", {"."}}, {"?", {"."}}, {";", {","}}, {":", {",", ";"}}};
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    for (const auto& [from, tos] : kSubs) {
      if (c.s[i].surface != from) continue;
      for (const auto& to : tos) add(out, t, i, i + 1, {to});
    }
  }
  for (std::size_t i = 1; i < c.s.size(); ++i) {
    if (is_word(c.s[i - 1]) && is_word(c.s[i])) add(out, t, i, i, {","});
  }
  if (!c.s.empty() && !is_punctuation(c.s.back().surface)) add(out, t, c.s.size(), c.s.size(), {"."});
}

void gen_wo(const Ctx& c, Out& out) {
  struct Pair {
    std::size_t i;
    int content;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i + 1 < c.s.size(); ++i) {
    if (!is_word(c.s[i]) || !is_word(c.s[i + 1]) || c.w(i) == c.w(i + 1)) continue;
    pairs.push_back({i, static_cast<int>(c.lex.is_content(c.s, i)) +
                            static_cast<int>(c.lex.is_content(c.s, i + 1))});
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.content != b.content) return a.content > b.content;
    return a.i > b.i;
  });
  for (const auto& p : pairs) {
    Tokens rep{c.s[p.i + 1], c.s[p.i]};
    out.push_back({ErrorTag::Wo, p.i, p.i + 2, std::move(rep)});
  }
}

void gen_noun_poss(const Ctx& c, Out& out) {
  for (std::size_t i = c.s.size(); i-- > 0;) {
    if (c.w(i) == "'s" && i > 0 && c.is(i - 1, Pos::Noun)) {
      add(out, ErrorTag::NounPoss, i, i + 1, {});
    } else if (c.is(i, Pos::Noun) && is_alphabetic(c.w(i)) && (i + 1 >= c.s.size() || c.w(i + 1) != "'s")) {
      add(out, ErrorTag::NounPoss, i + 1, i + 1, {"'s"});
    }
  }
}

std::optional<std::string> toggle_number(const Ctx& c, std::size_t i) {
  const std::string& w = c.w(i);
  auto forms = c.lex.noun_forms(w);
  if (!forms.empty()) {
    const NounEntry& e = c.lex.noun(forms.front().entry);
    if (e.singular == e.plural) return std::nullopt;
    return forms.front().plural ? e.singular : e.plural;
  }
  if (!is_alphabetic(w) || w.size() < 3) return std::nullopt;
  if (w.back() == 's' && w[w.size() - 2] != 's' && w[w.size() - 2] != 'u' && w[w.size() - 2] != 'i') {
    if (w.size() > 4 && w.substr(w.size() - 3) == "ies") return w.substr(0, w.size() - 3) + "y";
    return w.substr(0, w.size() - 1);
  }
  return regular_plural(w);
}

void gen_noun_num(const Ctx& c, Out& out) {
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    if (!c.is(i, Pos::Noun) || (i > 0 && capitalized(c.s[i].surface))) continue;
    if (auto other = toggle_number(c, i)) add(out, ErrorTag::NounNum, i, i + 1, {match_case(*other, c.s[i])});
  }
}

void gen_orth(const Ctx& c, Out& out) {
  const ErrorTag t = ErrorTag::Orth;
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    for (const auto& [parts, joined] : c.lex.orth_joins()) {
      if (i + parts.size() > c.s.size()) continue;
      bool ok = true;
      for (std::size_t k = 0; k < parts.size() && ok; ++k) ok = c.w(i + k) == parts[k];
      if (ok) add(out, t, i, i + parts.size(), {match_case(joined, c.s[i])});
    }
  }
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    for (const auto& [parts, joined] : c.lex.orth_joins()) {
      if (c.w(i) != joined) continue;
      std::vector<std::string> split = parts;
      split[0] = match_case(split[0], c.s[i]);
      add(out, t, i, i + 1, split);
    }
  }
  if (!c.s.empty() && is_alphabetic(c.s[0].surface) && capitalized(c.s[0].surface) && c.s[0].surface != "I") {
    add(out, t, 0, 1, {c.s[0].lower});
  }
  for (std::size_t i = 1; i < c.s.size(); ++i) {
    if (is_alphabetic(c.s[i].surface) && !capitalized(c.s[i].surface)) add(out, t, i, i + 1, {capitalize(c.s[i].surface)});
  }
}

void gen_contr(const Ctx& c, Out& out) {
  const ErrorTag t = ErrorTag::Contr;
  for (std::size_t i = 1; i < c.s.size(); ++i) {
    const std::string& host = c.w(i - 1);
    if (!(c.lex.is_contraction_host(host) || c.lex.in_class(host, WordClass::Pron))) continue;
    for (const auto& clitic : c.lex.contractions_of(c.w(i))) add(out, t, i, i + 1, {clitic});
  }
  for (std::size_t i = 0; i + 1 < c.s.size(); ++i) {
    if (c.w(i + 1) != "not") continue;
    const std::string& aux = c.w(i);
    static const std::set<std::string> kNegatable = {"do", "does", "did", "is", "are", "was", "were",
                                                     "has", "have", "had", "could", "should", "would"};
    if (kNegatable.count(aux)) add(out, t, i, i + 2, {c.s[i].surface + "n", "'t"});
  }
  for (std::size_t i = 1; i < c.s.size(); ++i) {
    if (!is_clitic(c.w(i))) continue;
    if (c.w(i) == "'t" && c.w(i - 1).size() > 1 && c.w(i - 1).back() == 'n') {
      std::string aux = c.s[i - 1].surface.substr(0, c.s[i - 1].surface.size() - 1);
      if (!aux.empty()) add(out, t, i - 1, i + 1, {aux, "not"});
      continue;
    }
    auto exp = c.lex.expansions_of(c.w(i));
    if (!exp.empty()) add(out, t, i, i + 1, {exp.front()});
    if (c.w(i) != "'s") add(out, t, i, i + 1, {});
  }
}

void gen_verb_sva(const Ctx& c, Out& out) {
  static const std::vector<std::pair<std::string, std::string>> kPairs = {
      {"is", "are"}, {"are", "is"}, {"was", "were"}, {"were", "was"}, {"has", "have"},
      {"have", "has"}, {"does", "do"}, {"do", "does"}, {"am", "is"}};
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    const std::string& w = c.w(i);
    bool done = false;
    for (const auto& [a, b] : kPairs) {
      if (w == a) {
        add(out, ErrorTag::VerbSva, i, i + 1, {match_case(b, c.s[i])});
        done = true;
        break;
      }
    }
    if (done || !(c.is(i, Pos::Verb))) continue;
    for (const auto& ref : c.lex.verb_forms(w)) {
      const VerbEntry& v = c.lex.verb(ref.entry);
      if (v.base == "be" || v.base == "have" || v.base == "do") break;
      if (ref.form == VerbForm::Third) {
        add(out, ErrorTag::VerbSva, i, i + 1, {match_case(v.base, c.s[i])});
        break;
      }
      if (ref.form == VerbForm::Base && (i == 0 || !(c.lex.is_modal(c.w(i - 1)) || c.w(i - 1) == "to"))) {
        add(out, ErrorTag::VerbSva, i, i + 1, {match_case(v.third, c.s[i])});
        break;
      }
    }
  }
}

void gen_verb_tense(const Ctx& c, Out& out) {
  static const std::vector<std::pair<std::string, std::string>> kModals = {
      {"will", "would"}, {"would", "will"}, {"can", "could"}, {"could", "can"},
      {"may", "might"},  {"might", "may"},  {"shall", "should"}};
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    const std::string& w = c.w(i);
    bool done = false;
    for (const auto& [a, b] : kModals) {
      if (w == a) {
        add(out, ErrorTag::VerbTense, i, i + 1, {match_case(b, c.s[i])});
        done = true;
        break;
      }
    }
    if (done || !(c.is(i, Pos::Verb) || c.is(i, Pos::Aux))) continue;
    if (i > 0 && (c.lex.is_modal(c.w(i - 1)) || c.w(i - 1) == "to")) continue;
    for (const auto& ref : c.lex.verb_forms(w)) {
      const VerbEntry& v = c.lex.verb(ref.entry);
      std::string other;
      if (v.base == "be") {
        if (w == "was") other = "is";
        else if (w == "were") other = "are";
        else if (w == "is" || w == "am") other = "was";
        else if (w == "are") other = "were";
      } else if (ref.form == VerbForm::Past) {
        other = v.third;
        const std::string prev = i > 0 ? c.w(i - 1) : "";
        if (prev == "i" || prev == "you" || prev == "we" || prev == "they") other = v.base;
      } else if (ref.form == VerbForm::Third || ref.form == VerbForm::Base || ref.form == VerbForm::Present) {
        other = v.past;
      }
      if (!other.empty() && other != w) {
        add(out, ErrorTag::VerbTense, i, i + 1, {match_case(other, c.s[i])});
        break;
      }
    }
  }
}

void gen_verb_form(const Ctx& c, Out& out) {
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    if (!(c.is(i, Pos::Verb) || c.is(i, Pos::Aux)) || c.lex.is_modal(c.w(i))) continue;
    auto refs = c.lex.verb_forms(c.w(i));
    if (refs.empty()) continue;
    const auto& ref = refs.front();
    for (VerbForm f : {VerbForm::Gerund, VerbForm::Participle, VerbForm::Base}) {
      if (f == ref.form) continue;
      std::string other = c.lex.verb_form(ref.entry, f);
      if (other != c.w(i)) add(out, ErrorTag::VerbForm, i, i + 1, {match_case(other, c.s[i])});
    }
  }
}

// Irregular nouns first: "sheeps" is a likelier error than "lotes".
void gen_noun_infl(const Ctx& c, Out& out) {
  for (bool irregular : {true, false}) {
    for (std::size_t i = 0; i < c.s.size(); ++i) {
      if (c.is(i, Pos::Verb) || c.is(i, Pos::Aux)) continue;
      for (const auto& ref : c.lex.noun_forms(c.w(i))) {
        if (c.lex.noun(ref.entry).irregular != irregular) continue;
        for (const auto& bad : c.lex.noun_misinflections_of(ref.entry, ref.plural)) {
          add(out, ErrorTag::NounInfl, i, i + 1, {match_case(bad, c.s[i])});
        }
      }
    }
  }
}

void gen_verb_infl(const Ctx& c, Out& out) {
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    const bool after_aux = i > 0 && (c.is(i - 1, Pos::Aux) || c.w(i - 1) == "to");
    if (!(c.is(i, Pos::Verb) || c.is(i, Pos::Aux) || after_aux)) continue;
    for (const auto& ref : c.lex.verb_forms(c.w(i))) {
      for (const auto& bad : c.lex.verb_misinflections_of(ref.entry, ref.form)) {
        add(out, ErrorTag::VerbInfl, i, i + 1, {match_case(bad, c.s[i])});
      }
    }
  }
}

void gen_det(const Ctx& c, Out& out) {
  const ErrorTag t = ErrorTag::Det;
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    if (c.lex.in_class(c.w(i), WordClass::Det) && c.is(i, Pos::Det)) add(out, t, i, i + 1, {});
  }
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    const std::string& w = c.w(i);
    const std::string next = i + 1 < c.s.size() ? c.w(i + 1) : "";
    if (w == "a" || w == "an") {
      add(out, t, i, i + 1, {match_case("the", c.s[i])});
    } else if (w == "the") {
      add(out, t, i, i + 1, {match_case(starts_with_vowel_sound(next) ? "an" : "a", c.s[i])});
    } else if (w == "this" || w == "that") {
      add(out, t, i, i + 1, {match_case(w == "this" ? "that" : "this", c.s[i])});
    } else if (w == "these" || w == "those") {
      add(out, t, i, i + 1, {match_case(w == "these" ? "those" : "these", c.s[i])});
    }
  }
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    if (!c.is(i, Pos::Noun) || (i > 0 && capitalized(c.s[i].surface))) continue;
    if (i > 0 && (c.is(i - 1, Pos::Det) || c.is(i - 1, Pos::Adj) || c.is(i - 1, Pos::Pron) ||
                  c.is(i - 1, Pos::Noun) || c.w(i - 1) == "'s")) {
      continue;
    }
    if (i == 0) {
      add(out, t, 0, 1, {"The", c.s[0].lower});
    } else {
      add(out, t, i, i, {"the"});
    }
  }
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& prep_swaps() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> kSwaps = {
      {"in", {"on", "at"}},   {"on", {"in", "at"}},     {"at", {"in", "on"}},  {"of", {"for", "from"}},
      {"for", {"to", "of"}},  {"to", {"for", "at"}},    {"with", {"by", "of"}}, {"from", {"of", "by"}},
      {"about", {"of", "on"}}, {"into", {"in", "to"}},  {"by", {"with", "from"}}, {"during", {"in"}},
      {"over", {"on"}},       {"under", {"below"}},     {"after", {"since"}},  {"since", {"from"}}};
  return kSwaps;
}

void gen_prep(const Ctx& c, Out& out) {
  const ErrorTag t = ErrorTag::Prep;
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    if (c.lex.in_class(c.w(i), WordClass::Prep) && c.is(i, Pos::Prep)) add(out, t, i, i + 1, {});
  }
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    for (const auto& [from, tos] : prep_swaps()) {
      if (c.w(i) != from) continue;
      for (const auto& to : tos) add(out, t, i, i + 1, {match_case(to, c.s[i])});
    }
  }
  for (std::size_t i = 1; i + 1 < c.s.size(); ++i) {
    if (c.is(i, Pos::Noun) && c.is(i + 1, Pos::Noun)) add(out, t, i + 1, i + 1, {"of"});
  }
}

void gen_part(const Ctx& c, Out& out) {
  const ErrorTag t = ErrorTag::Part;
  const auto& parts = c.lex.class_words(WordClass::Part);
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    const std::string& w = c.w(i);
    if (!(c.lex.in_class(w, WordClass::Prep) || c.lex.in_class(w, WordClass::Part))) continue;
    for (const auto& p : parts) {
      if (p != w && damerau_distance(p, w) <= 1) add(out, t, i, i + 1, {match_case(p, c.s[i])});
    }
  }
  for (std::size_t i = 0; i + 1 < c.s.size(); ++i) {
    if (c.w(i) == "to" && !c.lex.verb_forms(c.w(i + 1)).empty() && c.is(i + 1, Pos::Verb)) {
      add(out, t, i, i + 1, {});
    }
  }
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    if (c.is(i, Pos::Verb) && !c.lex.verb_forms(c.w(i)).empty()) {
      for (const char* p : {"up", "out"}) add(out, t, i + 1, i + 1, {p});
    }
  }
}

void gen_pron(const Ctx& c, Out& out) {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> kSwaps = {
      {"there", {"it"}},  {"i", {"me"}},     {"me", {"i"}},        {"he", {"him"}},    {"him", {"he"}},
      {"she", {"her"}},   {"her", {"she"}},  {"we", {"us"}},       {"us", {"we"}},     {"they", {"them"}},
      {"them", {"they"}}, {"it", {"they"}},  {"my", {"mine"}},     {"your", {"yours"}}, {"their", {"them"}},
      {"our", {"us"}},    {"his", {"him"}},  {"its", {"it"}},      {"who", {"which"}}, {"which", {"who"}},
      {"you", {"your"}},  {"something", {"anything"}}, {"everyone", {"everybody"}},
      {"themselves", {"them"}}, {"himself", {"him"}}, {"herself", {"her"}}, {"myself", {"me"}}};
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    for (const auto& [from, tos] : kSwaps) {
      if (c.w(i) != from) continue;
      for (const auto& to : tos) add(out, ErrorTag::Pron, i, i + 1, {match_case(to, c.s[i])});
    }
  }
  for (std::size_t i = 1; i < c.s.size(); ++i) {
    if (c.is(i, Pos::Pron)) add(out, ErrorTag::Pron, i, i + 1, {});
  }
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    if (c.is(i, Pos::Verb) && i + 1 < c.s.size() && (c.is(i + 1, Pos::Det) || c.is(i + 1, Pos::Noun))) {
      add(out, ErrorTag::Pron, i + 1, i + 1, {"it"});
    }
  }
}

void gen_conj(const Ctx& c, Out& out) {
  const ErrorTag t = ErrorTag::Conj;
  if (!c.s.empty() && is_word(c.s[0]) && !c.lex.in_class(c.w(0), WordClass::Conj)) {
    const std::string first = c.s[0].surface == "I" ? "I" : c.s[0].lower;
    add(out, t, 0, 1, {"And", first});
  }
  static const std::vector<std::pair<std::string, std::vector<std::string>>> kSwaps = {
      {"and", {"but", "or"}}, {"but", {"and"}}, {"or", {"and"}}, {"so", {"but"}},
      {"because", {"so"}},    {"although", {"because"}}, {"while", {"because"}}, {"if", {"because"}}};
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    for (const auto& [from, tos] : kSwaps) {
      if (c.w(i) != from) continue;
      for (const auto& to : tos) add(out, t, i, i + 1, {match_case(to, c.s[i])});
    }
  }
  for (std::size_t i = 1; i < c.s.size(); ++i) {
    if (c.w(i) == "and" || c.w(i) == "but" || c.w(i) == "or") add(out, t, i, i + 1, {});
  }
  for (std::size_t i = 1; i < c.s.size(); ++i) {
    if (c.s[i].surface == "," && i + 1 < c.s.size() && is_word(c.s[i + 1])) add(out, t, i + 1, i + 1, {"and"});
  }
}

void gen_adv(const Ctx& c, Out& out) {
  const ErrorTag t = ErrorTag::Adv;
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    if (c.is(i, Pos::Adv)) add(out, t, i, i + 1, {});
  }
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    if (c.is(i, Pos::Aux) && !is_clitic(c.w(i))) add(out, t, i + 1, i + 1, {"also"});
    if (c.is(i, Pos::Adj)) add(out, t, i, i, {"very"});
    if (c.is(i, Pos::Verb)) add(out, t, i, i, {"really"});
  }
  const std::size_t end = final_punct_start(c.s);
  if (end > 0) add(out, t, end, end, {"too"});
}

void gen_confusion(const Ctx& c, Out& out, ErrorTag t) {
  const Pos want = t == ErrorTag::Adj ? Pos::Adj : t == ErrorTag::Noun ? Pos::Noun : Pos::Verb;
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    const std::string& w = c.w(i);
    const bool pos_ok = c.pos[i] == want || (want == Pos::Verb && c.pos[i] == Pos::Aux);
    if (!pos_ok || !is_alphabetic(w) || (i > 0 && capitalized(c.s[i].surface))) continue;
    std::vector<std::string> lemmas = c.lex.confusions(w, want);
    if (want == Pos::Noun) lemmas.push_back("thing");
    if (want == Pos::Verb && !c.lex.is_modal(w)) {
      lemmas.push_back("get");
      lemmas.push_back("make");
    }
    if (want == Pos::Adj) lemmas.push_back("nice");
    for (const auto& lemma : lemmas) {
      std::string form;
      if (want == Pos::Noun) {
        auto refs = c.lex.noun_forms(w);
        const bool plural = !refs.empty() && refs.front().plural;
        auto target = c.lex.noun_forms(lemma);
        if (target.empty()) {
          form = plural ? regular_plural(lemma) : lemma;
        } else {
          const NounEntry& e = c.lex.noun(target.front().entry);
          form = plural ? e.plural : e.singular;
        }
      } else if (want == Pos::Verb) {
        auto refs = c.lex.verb_forms(w);
        auto target = c.lex.verb_forms(lemma);
        if (refs.empty() || target.empty()) continue;
        VerbForm f = refs.front().form;
        if (c.lex.verb(refs.front().entry).base == "be" && (w == "am" || w == "are")) f = VerbForm::Present;
        if (c.lex.verb(refs.front().entry).base == "be" && w == "were") f = VerbForm::Past;
        form = c.lex.verb_form(target.front().entry, f);
      } else {
        auto refs = c.lex.adj_forms(w);
        auto target = c.lex.adj_forms(lemma);
        const int degree = refs.empty() ? 0 : refs.front().degree;
        if (target.empty()) {
          if (degree != 0) continue;
          form = lemma;
        } else {
          const AdjEntry& e = c.lex.adj(target.front().entry);
          form = degree == 0 ? e.base : degree == 1 ? e.comparative : e.superlative;
          if (form.empty()) continue;
        }
      }
      if (form != w) add(out, t, i, i + 1, {match_case(form, c.s[i])});
    }
  }
}

void gen_adj_form(const Ctx& c, Out& out) {
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    for (const auto& ref : c.lex.adj_forms(c.w(i))) {
      const AdjEntry& e = c.lex.adj(ref.entry);
      if (i > 0 && (c.w(i - 1) == "more" || c.w(i - 1) == "most")) break;
      if (ref.degree == 1) {
        add(out, ErrorTag::AdjForm, i, i, {"more"});
        if (!e.superlative.empty()) add(out, ErrorTag::AdjForm, i, i + 1, {match_case(e.superlative, c.s[i])});
      } else if (ref.degree == 2) {
        add(out, ErrorTag::AdjForm, i, i, {"most"});
        if (!e.comparative.empty()) add(out, ErrorTag::AdjForm, i, i + 1, {match_case(e.comparative, c.s[i])});
      } else {
        if (!e.comparative.empty()) add(out, ErrorTag::AdjForm, i, i + 1, {match_case(e.comparative, c.s[i])});
        add(out, ErrorTag::AdjForm, i, i, {"more"});
      }
      break;
    }
  }
}

void gen_morph(const Ctx& c, Out& out) {
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    const std::string& w = c.w(i);
    for (const auto& family : c.lex.morph_families()) {
      if (std::find(family.begin(), family.end(), w) == family.end()) continue;
      for (const auto& other : family) {
        if (other != w) add(out, ErrorTag::Morph, i, i + 1, {match_case(other, c.s[i])});
      }
    }
    if (c.is(i, Pos::Adv) && w.size() > 5 && w.substr(w.size() - 2) == "ly") {
      std::string stem = w.substr(0, w.size() - 2);
      if (stem.back() == 'i') stem.back() = 'y';
      if (c.lex.in_lexicon(stem)) add(out, ErrorTag::Morph, i, i + 1, {match_case(stem, c.s[i])});
    }
    if (c.is(i, Pos::Adj) && w.size() > 3 && is_alphabetic(w)) {
      std::string ly = w.back() == 'y' ? w.substr(0, w.size() - 1) + "ily" : w + "ly";
      if (c.lex.in_lexicon(ly)) add(out, ErrorTag::Morph, i, i + 1, {match_case(ly, c.s[i])});
    }
  }
}

void gen_spell(const Ctx& c, Out& out) {
  std::vector<std::size_t> words;
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    const std::string& w = c.s[i].surface;
    if (is_alphabetic(w) && w.size() >= 4 && c.lex.is_content(c.s, i)) words.push_back(i);
  }
  // Variant k of each word in turn, so sites spread over the sentence.
  auto variant = [](const std::string& w, int k) -> std::string {
    const std::size_t n = w.size();
    switch (k) {
      case 0: return w.substr(0, n / 2) + w.substr(n / 2 + 1);                      // drop middle
      case 1: return w.substr(0, n - 2) + w[n - 1] + w[n - 2];                      // swap last two
      case 2: return w.substr(0, n / 2 + 1) + w[n / 2] + w.substr(n / 2 + 1);       // double middle
      case 3: return w.substr(0, 1) + w[2] + w[1] + w.substr(3);                    // swap 2nd/3rd
      case 4: {                                                                     // vowel swap
        std::string v = w;
        for (std::size_t p = 1; p < n; ++p) {
          const char ch = v[p];
          if (ch == 'a' || ch == 'e' || ch == 'i' || ch == 'o' || ch == 'u') {
            v[p] = ch == 'e' ? 'a' : 'e';
            return v;
          }
        }
        return w;
      }
      case 5: return w.substr(0, n - 1);                                            // drop last
      default: return w;
    }
  };
  for (int k = 0; k < 6; ++k) {
    for (std::size_t i : words) {
      const std::string v = variant(c.s[i].surface, k);
      const std::string lower = to_lower(v);
      if (v == c.s[i].surface || c.lex.in_lexicon(lower) || !c.lex.verb_forms(lower).empty() ||
          !c.lex.noun_forms(lower).empty()) {
        continue;
      }
      add(out, ErrorTag::Spell, i, i + 1, {v});
    }
  }
}

void gen_unk(const Ctx& c, Out& out) {
  const std::size_t end = final_punct_start(c.s);
  for (std::size_t k = 1; k <= 3 && k < end; ++k) {
    if (!is_word(c.s[end - k])) break;
    add(out, ErrorTag::Unk, end - k, end, {});
  }
}

void gen_other(const Ctx& c, Out& out) {
  for (const auto& rw : c.lex.other_rewrites()) {
    for (std::size_t i = 0; i < c.s.size(); ++i) {
      if (i + rw.from.size() > c.s.size()) continue;
      bool ok = true;
      for (std::size_t k = 0; k < rw.from.size() && ok; ++k) ok = c.w(i + k) == rw.from[k];
      if (!ok) continue;
      std::vector<std::string> to = rw.to;
      if (!to.empty()) to[0] = match_case(to[0], c.s[i]);
      add(out, ErrorTag::Other, i, i + rw.from.size(), to);
    }
  }
  for (std::size_t i = 0; i + 1 < c.s.size(); ++i) {
    if (!(c.is(i, Pos::Det) && c.is(i + 1, Pos::Noun))) continue;
    auto refs = c.lex.noun_forms(c.w(i + 1));
    const bool plural = (!refs.empty() && refs.front().plural) || (refs.empty() && c.w(i + 1).back() == 's');
    const bool subject = i == 0;
    std::string pron = plural ? (subject ? "they" : "them") : "it";
    add(out, ErrorTag::Other, i, i + 2, {match_case(pron, c.s[i])});
  }
}

}  // namespace

std::vector<Site> RuleEngine::raw_sites(std::span<const Token> source, ErrorTag tag) const {
  Out out;
  if (source.empty()) return out;
  const Ctx c(source, *lex_);
  switch (tag) {
    case ErrorTag::Adj:
    case ErrorTag::Noun:
    case ErrorTag::Verb: gen_confusion(c, out, tag); break;
    case ErrorTag::AdjForm: gen_adj_form(c, out); break;
    case ErrorTag::Adv: gen_adv(c, out); break;
    case ErrorTag::Conj: gen_conj(c, out); break;
    case ErrorTag::Contr: gen_contr(c, out); break;
    case ErrorTag::Det: gen_det(c, out); break;
    case ErrorTag::Morph: gen_morph(c, out); break;
    case ErrorTag::NounInfl: gen_noun_infl(c, out); break;
    case ErrorTag::NounNum: gen_noun_num(c, out); break;
    case ErrorTag::NounPoss: gen_noun_poss(c, out); break;
    case ErrorTag::Orth: gen_orth(c, out); break;
    case ErrorTag::Other: gen_other(c, out); break;
    case ErrorTag::Part: gen_part(c, out); break;
    case ErrorTag::Prep: gen_prep(c, out); break;
    case ErrorTag::Pron: gen_pron(c, out); break;
    case ErrorTag::Punct: gen_punct(c, out); break;
    case ErrorTag::Spell: gen_spell(c, out); break;
    case ErrorTag::Unk: gen_unk(c, out); break;
    case ErrorTag::VerbForm: gen_verb_form(c, out); break;
    case ErrorTag::VerbInfl: gen_verb_infl(c, out); break;
    case ErrorTag::VerbSva: gen_verb_sva(c, out); break;
    case ErrorTag::VerbTense: gen_verb_tense(c, out); break;
    case ErrorTag::Wo: gen_wo(c, out); break;
    case ErrorTag::Self: break;
  }
  return out;
}

std::vector<Site> RuleEngine::sites(std::span<const Token> source, ErrorTag tag) const {
  std::vector<Site> out;
  std::set<std::string> seen;
  for (auto& site : raw_sites(source, tag)) {
    Tokens target(source.begin(), source.begin() + static_cast<std::ptrdiff_t>(site.start));
    target.insert(target.end(), site.replacement.begin(), site.replacement.end());
    target.insert(target.end(), source.begin() + static_cast<std::ptrdiff_t>(site.end), source.end());
    const std::string key = join_surface(target, "\x1f");
    if (!seen.insert(key).second) continue;
    if (target.size() == source.size() &&
        std::equal(target.begin(), target.end(), source.begin())) {
      continue;
    }
    const auto edits = annotate_tokens(source, target, *lex_);
    if (edits.size() != 1 || edits.front().tag != tag) continue;
    out.push_back(std::move(site));
    if (out.size() == kMaxSites) break;
  }
  return out;
}

}  // namespace tagcorrupt

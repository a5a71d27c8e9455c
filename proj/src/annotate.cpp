#include "tagcorrupt/annotate.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <optional>

#include <nlohmann/json.hpp>

#include "tagcorrupt/errors.hpp"

namespace tagcorrupt {
namespace {

enum class OpKind { Match, Sub, Del, Ins, Transpose };

struct AlignOp {
  OpKind kind;
  std::size_t i;  // source start
  std::size_t j;  // target start
  std::size_t src_len;
  std::size_t tgt_len;
};

bool all_punct(std::span<const Token> a, std::span<const Token> b) {
  if (a.empty() && b.empty()) return false;
  for (const auto& t : a) {
    if (!is_punctuation(t.surface)) return false;
  }
  for (const auto& t : b) {
    if (!is_punctuation(t.surface)) return false;
  }
  return true;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

int substitution_cost(const Token& a, const Token& b, const Lexicon& lex) {
  if (a.surface == b.surface) return align_cost::kMatch;
  if (a.lower == b.lower) return align_cost::kCaseSub;
  if (lex.inflectional_variants(a.lower, b.lower)) return align_cost::kInflectionSub;
  return align_cost::kSub;
}

namespace {

Alignment align_core(std::span<const Token> src, std::span<const Token> tgt, const Lexicon& lex) {
  const std::size_t n = src.size();
  const std::size_t m = tgt.size();
  const std::size_t w = m + 1;
  constexpr int kInf = std::numeric_limits<int>::max() / 4;
  std::vector<int> d((n + 1) * w, kInf);
  std::vector<InflectionKey> src_keys;
  std::vector<InflectionKey> tgt_keys;
  src_keys.reserve(n);
  tgt_keys.reserve(m);
  for (const auto& t : src) src_keys.push_back(lex.inflection_key(t.lower));
  for (const auto& t : tgt) {
    auto same = std::find_if(src_keys.begin(), src_keys.end(),
                             [&](const InflectionKey& k) { return k.word == t.lower; });
    tgt_keys.push_back(same != src_keys.end() ? *same : lex.inflection_key(t.lower));
  }
  std::vector<int> sub(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      int c = align_cost::kSub;
      if (src[i].surface == tgt[j].surface) {
        c = align_cost::kMatch;
      } else if (src[i].lower == tgt[j].lower) {
        c = align_cost::kCaseSub;
      } else if (Lexicon::inflectional_variants(src_keys[i], tgt_keys[j])) {
        c = align_cost::kInflectionSub;
      }
      sub[i * m + j] = c;
    }
  }
  auto at = [&](std::size_t i, std::size_t j) -> int& { return d[i * w + j]; };
  auto transposable = [&](std::size_t i, std::size_t j) {
    return i >= 2 && j >= 2 && src[i - 2].surface == tgt[j - 1].surface &&
           src[i - 1].surface == tgt[j - 2].surface && src[i - 1].surface != src[i - 2].surface;
  };
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) {
        at(i, j) = 0;
        continue;
      }
      int best = kInf;
      if (i > 0 && j > 0) best = std::min(best, at(i - 1, j - 1) + sub[(i - 1) * m + j - 1]);
      if (transposable(i, j)) best = std::min(best, at(i - 2, j - 2) + align_cost::kTranspose);
      if (i > 0) best = std::min(best, at(i - 1, j) + align_cost::kGap);
      if (j > 0) best = std::min(best, at(i, j - 1) + align_cost::kGap);
      at(i, j) = best;
    }
  }

  std::vector<AlignOp> ops;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const int cur = at(i, j);
    if (i > 0 && j > 0 && at(i - 1, j - 1) + sub[(i - 1) * m + j - 1] == cur) {
      const bool same = src[i - 1].surface == tgt[j - 1].surface;
      ops.push_back({same ? OpKind::Match : OpKind::Sub, i - 1, j - 1, 1, 1});
      --i;
      --j;
    } else if (transposable(i, j) && at(i - 2, j - 2) + align_cost::kTranspose == cur) {
      ops.push_back({OpKind::Transpose, i - 2, j - 2, 2, 2});
      i -= 2;
      j -= 2;
    } else if (i > 0 && at(i - 1, j) + align_cost::kGap == cur) {
      ops.push_back({OpKind::Del, i - 1, j, 1, 0});
      --i;
    } else {
      ops.push_back({OpKind::Ins, i, j - 1, 0, 1});
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());

  Alignment out;
  out.cost = at(n, m);
  bool open = false;
  bool open_punct = false;
  bool open_transpose = false;
  std::size_t tgt_start = 0;
  std::size_t tgt_end = 0;
  auto close = [&] {
    if (!open) return;
    out.spans.back().replacement.assign(tgt.begin() + static_cast<std::ptrdiff_t>(tgt_start),
                                        tgt.begin() + static_cast<std::ptrdiff_t>(tgt_end));
    open = false;
  };
  for (const auto& op : ops) {
    if (op.kind == OpKind::Match) {
      close();
      continue;
    }
    const bool punct = all_punct(src.subspan(op.i, op.src_len), tgt.subspan(op.j, op.tgt_len));
    const bool transpose = op.kind == OpKind::Transpose;
    if (open && (transpose || open_transpose || punct != open_punct)) close();
    if (!open) {
      out.spans.push_back({op.i, op.i, {}, transpose});
      tgt_start = op.j;
      open = true;
      open_punct = punct;
      open_transpose = transpose;
    }
    out.spans.back().src_end = op.i + op.src_len;
    tgt_end = op.j + op.tgt_len;
  }
  close();
  return out;
}

}  // namespace

Alignment align(std::span<const Token> src, std::span<const Token> tgt, const Lexicon& lex) {
  std::size_t prefix = 0;
  while (prefix < src.size() && prefix < tgt.size() && src[prefix].surface == tgt[prefix].surface) ++prefix;
  std::size_t suffix = 0;
  while (suffix < src.size() - prefix && suffix < tgt.size() - prefix &&
         src[src.size() - 1 - suffix].surface == tgt[tgt.size() - 1 - suffix].surface) {
    ++suffix;
  }
  Alignment out = align_core(src.subspan(prefix, src.size() - prefix - suffix),
                             tgt.subspan(prefix, tgt.size() - prefix - suffix), lex);
  for (auto& span : out.spans) {
    span.src_start += prefix;
    span.src_end += prefix;
  }
  return out;
}

std::size_t damerau_distance(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[n][m];
}

namespace {

// Classification view of a span after trimming tokens shared (case-
// insensitively) by both sides.
struct SpanView {
  std::span<const Token> src;  // whole source sentence
  std::size_t start;           // trimmed span start in src
  std::vector<std::string> s;  // lowercased source side
  std::vector<std::string> r;  // lowercased replacement side
  bool transposition;

  std::string prev() const { return start > 0 ? src[start - 1].lower : std::string(); }
  std::string next() const {
    const std::size_t end = start + s.size();
    return end < src.size() ? src[end].lower : std::string();
  }
  bool one_to_one() const { return s.size() == 1 && r.size() == 1; }
  bool pure_insertion() const { return s.empty() && !r.empty(); }
  bool pure_deletion() const { return r.empty() && !s.empty(); }
};

bool is_orth(std::span<const Token> s, std::span<const Token> r) {
  if (s.size() == r.size()) {
    bool differs = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k].lower != r[k].lower) return false;
      differs = differs || s[k].surface != r[k].surface;
    }
    return differs;
  }
  if (s.empty() || r.empty()) return false;
  std::string a;
  std::string b;
  for (const auto& t : s) a += t.lower;
  for (const auto& t : r) b += t.lower;
  return a == b;
}

bool contraction_pair(const Lexicon& lex, const std::string& a, const std::string& b) {
  for (const auto& e : lex.expansions_of(a)) {
    if (e == b) return true;
  }
  return false;
}

bool is_contr(const SpanView& v, const Lexicon& lex) {
  if (v.one_to_one()) {
    const auto& a = v.s[0];
    const auto& b = v.r[0];
    if (contraction_pair(lex, a, b) || contraction_pair(lex, b, a)) return true;
  }
  // [X not] <-> [X' 't]
  auto negation = [](const std::vector<std::string>& full, const std::vector<std::string>& con) {
    return full.size() == 2 && con.size() == 2 && full[1] == "not" && con[1] == "'t";
  };
  if (negation(v.s, v.r) || negation(v.r, v.s)) return true;
  const std::vector<std::string>& side = v.pure_deletion() ? v.s : v.r;
  if ((v.pure_deletion() || v.pure_insertion()) && side.size() == 1 && is_clitic(side[0])) {
    if (side[0] != "'s") return true;
    const std::string host = v.prev();
    return lex.is_contraction_host(host) || lex.in_class(host, WordClass::Pron);
  }
  return false;
}

bool is_poss(const SpanView& v, const Lexicon& lex) {
  const std::vector<std::string>& side = v.pure_deletion() ? v.s : v.r;
  if (!(v.pure_deletion() || v.pure_insertion()) || side.size() != 1) return false;
  if (side[0] != "'s" && side[0] != "'") return false;
  if (v.start == 0) return false;
  const Pos p = lex.guess_pos(v.src, v.start - 1);
  return p == Pos::Noun || p == Pos::Adj || p == Pos::Verb;
}

bool is_wo(const SpanView& v) {
  if (v.transposition) return true;
  if (v.s.size() < 2 || v.s.size() != v.r.size()) return false;
  auto a = v.s;
  auto b = v.r;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

bool same_noun_entry(const Lexicon& lex, const std::string& a, const std::string& b, bool& number_differs) {
  for (const auto& ra : lex.noun_forms(a)) {
    for (const auto& rb : lex.noun_forms(b)) {
      if (ra.entry == rb.entry && ra.plural != rb.plural) {
        number_differs = true;
        return true;
      }
    }
  }
  return false;
}

bool regular_number_pair(const std::string& a, const std::string& b) {
  if (a.size() < 2 || b.size() < 2) return false;
  const std::string& sg = a.size() < b.size() ? a : b;
  const std::string& pl = a.size() < b.size() ? b : a;
  return pl == regular_plural(sg) || pl == sg + "s";
}

bool is_noun_num(const SpanView& v, const Lexicon& lex) {
  if (!v.one_to_one()) return false;
  bool differs = false;
  if (same_noun_entry(lex, v.s[0], v.r[0], differs)) return true;
  if (!regular_number_pair(v.s[0], v.r[0])) return false;
  if (!lex.verb_forms(v.s[0]).empty() && !lex.verb_forms(v.r[0]).empty() &&
      lex.noun_forms(v.s[0]).empty()) {
    return false;
  }
  return lex.guess_pos(v.src, v.start) == Pos::Noun;
}

bool pair_in(const std::string& a, const std::string& b,
             std::initializer_list<std::pair<std::string_view, std::string_view>> pairs) {
  for (const auto& [x, y] : pairs) {
    if ((a == x && b == y) || (a == y && b == x)) return true;
  }
  return false;
}

bool verb_same_entry(const Lexicon& lex, const std::string& a, const std::string& b,
                     VerbForm& fa, VerbForm& fb) {
  for (const auto& ra : lex.verb_forms(a)) {
    for (const auto& rb : lex.verb_forms(b)) {
      if (ra.entry == rb.entry) {
        fa = ra.form;
        fb = rb.form;
        return true;
      }
    }
  }
  return false;
}

bool is_present(VerbForm f) { return f == VerbForm::Base || f == VerbForm::Present || f == VerbForm::Third; }

bool is_sva(const SpanView& v, const Lexicon& lex) {
  if (!v.one_to_one()) return false;
  const auto& a = v.s[0];
  const auto& b = v.r[0];
  if (pair_in(a, b, {{"is", "are"}, {"was", "were"}, {"has", "have"}, {"does", "do"}, {"am", "is"},
                     {"am", "are"}, {"doesn't", "don't"}, {"isn't", "aren't"}, {"wasn't", "weren't"}})) {
    return true;
  }
  VerbForm fa{};
  VerbForm fb{};
  if (!verb_same_entry(lex, a, b, fa, fb)) return false;
  if (a == "be" || b == "be") return false;
  return (fa == VerbForm::Third && (fb == VerbForm::Base || fb == VerbForm::Present)) ||
         (fb == VerbForm::Third && (fa == VerbForm::Base || fa == VerbForm::Present));
}

bool is_tense(const SpanView& v, const Lexicon& lex) {
  if (!v.one_to_one()) return false;
  const auto& a = v.s[0];
  const auto& b = v.r[0];
  if (pair_in(a, b, {{"will", "would"}, {"can", "could"}, {"may", "might"}, {"shall", "should"}})) {
    return true;
  }
  for (const auto& ra : lex.verb_forms(a)) {
    for (const auto& rb : lex.verb_forms(b)) {
      if (ra.entry != rb.entry) continue;
      if ((ra.form == VerbForm::Past && is_present(rb.form)) ||
          (rb.form == VerbForm::Past && is_present(ra.form))) {
        return true;
      }
    }
  }
  return false;
}

bool is_verb_form(const SpanView& v, const Lexicon& lex) {
  if (v.one_to_one()) {
    VerbForm fa{};
    VerbForm fb{};
    return verb_same_entry(lex, v.s[0], v.r[0], fa, fb) && v.s[0] != v.r[0];
  }
  return false;
}

bool is_adj_form(const SpanView& v, const Lexicon& lex) {
  if (v.s.empty() != v.r.empty()) {
    const auto& side = v.s.empty() ? v.r : v.s;
    return side.size() == 1 && (side[0] == "more" || side[0] == "most") &&
           !lex.adj_forms(v.next()).empty();
  }
  if (v.s.empty()) return false;
  std::optional<std::size_t> entry;
  int degrees_seen = 0;
  bool periphrastic = false;
  auto scan = [&](const std::vector<std::string>& side) {
    for (const auto& w : side) {
      if (w == "more" || w == "most") {
        periphrastic = true;
        continue;
      }
      auto forms = lex.adj_forms(w);
      if (forms.empty()) return false;
      bool matched = false;
      for (const auto& f : forms) {
        if (!entry) entry = f.entry;
        if (f.entry == *entry) {
          matched = true;
          degrees_seen |= 1 << f.degree;
        }
      }
      if (!matched) return false;
    }
    return true;
  };
  if (!scan(v.s) || !scan(v.r) || !entry) return false;
  return periphrastic || std::popcount(static_cast<unsigned>(degrees_seen)) > 1;
}

std::optional<ErrorTag> closed_class(const SpanView& v, const Lexicon& lex) {
  std::vector<std::string> all = v.s;
  all.insert(all.end(), v.r.begin(), v.r.end());
  if (all.empty()) return std::nullopt;
  auto all_in = [&](auto pred) { return std::all_of(all.begin(), all.end(), pred); };
  if (all_in([&](const std::string& w) { return lex.in_class(w, WordClass::Det); })) return ErrorTag::Det;
  const bool infinitive_to = [&] {
    const std::string next = v.next();
    for (const auto& ref : lex.verb_forms(next)) {
      if (ref.form == VerbForm::Base) return true;
    }
    return false;
  }();
  auto part_only = [&](const std::string& w) {
    return (lex.in_class(w, WordClass::Part) && !lex.in_class(w, WordClass::Prep)) ||
           (w == "to" && infinitive_to);
  };
  const bool any_part_only = std::any_of(all.begin(), all.end(), part_only);
  if (!any_part_only && all_in([&](const std::string& w) { return lex.in_class(w, WordClass::Prep); })) {
    return ErrorTag::Prep;
  }
  if (any_part_only && all_in([&](const std::string& w) {
        return lex.in_class(w, WordClass::Part) || lex.in_class(w, WordClass::Prep);
      })) {
    return ErrorTag::Part;
  }
  if (all_in([&](const std::string& w) { return lex.in_class(w, WordClass::Conj); })) return ErrorTag::Conj;
  if (all_in([&](const std::string& w) { return lex.in_class(w, WordClass::Pron); })) return ErrorTag::Pron;
  if (all_in([&](const std::string& w) {
        return lex.in_class(w, WordClass::Adv) || (ends_with(w, "ly") && w.size() > 4 && is_alphabetic(w));
      })) {
    return ErrorTag::Adv;
  }
  return std::nullopt;
}

std::string derivational_stem(const std::string& w) {
  static constexpr std::string_view kSuffixes[] = {
      "ational", "ization", "ation", "ition", "ness", "ment", "ship", "ence", "ance", "ical",
      "ably", "ibly", "able", "ible", "ally", "tion", "sion", "ity", "ful", "ous", "ive",
      "ise", "ize", "ify", "ant", "ent", "ion", "al", "ic", "ly", "y"};
  for (auto suf : kSuffixes) {
    if (w.size() > suf.size() + 3 && ends_with(w, suf)) return w.substr(0, w.size() - suf.size());
  }
  return w;
}

bool is_morph(const SpanView& v, const Lexicon& lex) {
  if (!v.one_to_one()) return false;
  const auto& a = v.s[0];
  const auto& b = v.r[0];
  if (a == b || !is_alphabetic(a) || !is_alphabetic(b)) return false;
  if (lex.same_morph_family(a, b)) return true;
  const std::string sa = derivational_stem(a);
  const std::string sb = derivational_stem(b);
  if (sa == a && sb == b) return false;
  const std::size_t common = std::min(sa.size(), sb.size());
  if (common < 4) return false;
  // Allow a final e/y alternation between stems (create/creation).
  auto trim = [](std::string s) {
    if (!s.empty() && (s.back() == 'e' || s.back() == 'y' || s.back() == 'i')) s.pop_back();
    return s;
  };
  return trim(sa) == trim(sb);
}

bool known_word(const Lexicon& lex, const std::string& w) {
  return lex.in_lexicon(w) || !lex.verb_forms(w).empty() || !lex.noun_forms(w).empty() ||
         !lex.adj_forms(w).empty();
}

bool is_spell(const SpanView& v, const Lexicon& lex) {
  if (!v.one_to_one()) return false;
  const auto& a = v.s[0];
  const auto& b = v.r[0];
  if (!is_alphabetic(b) || known_word(lex, b)) return false;
  return damerau_distance(a, b) <= 2;
}

std::optional<ErrorTag> open_class(const SpanView& v, const Lexicon& lex) {
  if (!v.one_to_one()) return std::nullopt;
  const auto& a = v.s[0];
  const auto& b = v.r[0];
  if (!lex.verb_forms(a).empty() && !lex.verb_forms(b).empty() &&
      lex.noun_forms(a).empty() == lex.noun_forms(b).empty() && lex.confusable(a, b, Pos::Verb)) {
    return ErrorTag::Verb;
  }
  if (lex.confusable(a, b, Pos::Noun)) return ErrorTag::Noun;
  if (lex.confusable(a, b, Pos::Adj)) return ErrorTag::Adj;
  if (lex.confusable(a, b, Pos::Verb)) return ErrorTag::Verb;
  switch (lex.guess_pos(v.src, v.start)) {
    case Pos::Noun: return ErrorTag::Noun;
    case Pos::Verb:
    case Pos::Aux: return ErrorTag::Verb;
    case Pos::Adj: return ErrorTag::Adj;
    default: return std::nullopt;
  }
}

}  // namespace

ErrorTag classify(std::span<const Token> src, const EditSpan& span, const Lexicon& lex) {
  const auto raw_src = src.subspan(span.src_start, span.src_end - span.src_start);
  const std::span<const Token> raw_rep(span.replacement);
  if (is_orth(raw_src, raw_rep)) return ErrorTag::Orth;

  std::size_t lo = 0;
  std::size_t hi_s = raw_src.size();
  std::size_t hi_r = raw_rep.size();
  if (!span.transposition) {
    while (lo < hi_s && lo < hi_r && raw_src[lo].lower == raw_rep[lo].lower) ++lo;
    while (hi_s > lo && hi_r > lo && raw_src[hi_s - 1].lower == raw_rep[hi_r - 1].lower) {
      --hi_s;
      --hi_r;
    }
  }
  SpanView v{src, span.src_start + lo, {}, {}, span.transposition};
  for (std::size_t k = lo; k < hi_s; ++k) v.s.push_back(raw_src[k].lower);
  for (std::size_t k = lo; k < hi_r; ++k) v.r.push_back(raw_rep[k].lower);
  if (v.s.empty() && v.r.empty()) return ErrorTag::Orth;

  const auto trimmed_src = raw_src.subspan(lo, hi_s - lo);
  const auto trimmed_rep = raw_rep.subspan(lo, hi_r - lo);
  if (all_punct(trimmed_src, trimmed_rep)) return ErrorTag::Punct;
  if (is_contr(v, lex)) return ErrorTag::Contr;
  if (is_poss(v, lex)) return ErrorTag::NounPoss;
  if (is_wo(v)) return ErrorTag::Wo;
  if (v.one_to_one()) {
    bool differs = false;
    if (auto e = lex.noun_misinflection(v.r[0]);
        e && (!lex.noun_forms(v.s[0]).empty() || same_noun_entry(lex, v.s[0], v.r[0], differs))) {
      return ErrorTag::NounInfl;
    }
    if (auto e = lex.verb_misinflection(v.r[0]); e && !lex.verb_forms(v.s[0]).empty()) {
      return ErrorTag::VerbInfl;
    }
    if (lex.noun_misinflection(v.s[0]) && !lex.noun_forms(v.r[0]).empty()) return ErrorTag::NounInfl;
    if (lex.verb_misinflection(v.s[0]) && !lex.verb_forms(v.r[0]).empty()) return ErrorTag::VerbInfl;
  }
  if (is_noun_num(v, lex)) return ErrorTag::NounNum;
  if (is_sva(v, lex)) return ErrorTag::VerbSva;
  if (is_tense(v, lex)) return ErrorTag::VerbTense;
  if (is_verb_form(v, lex)) return ErrorTag::VerbForm;
  if (is_adj_form(v, lex)) return ErrorTag::AdjForm;
  if (auto cls = closed_class(v, lex)) return *cls;
  if (is_morph(v, lex)) return ErrorTag::Morph;
  if (is_spell(v, lex)) return ErrorTag::Spell;
  if (auto open = open_class(v, lex)) return *open;
  if (v.pure_deletion()) return ErrorTag::Unk;
  return ErrorTag::Other;
}

std::vector<Edit> annotate_tokens(std::span<const Token> src, std::span<const Token> tgt,
                                  const Lexicon& lex) {
  std::vector<Edit> edits;
  for (auto& span : align(src, tgt, lex).spans) {
    const ErrorTag tag = classify(src, span, lex);
    edits.push_back({span.src_start, span.src_end, std::move(span.replacement), tag});
  }
  return edits;
}

std::vector<Edit> annotate_pair(std::string_view clean, std::string_view corrupted, const Lexicon& lex) {
  const Tokens src = tokenize(clean);
  const Tokens tgt = tokenize(corrupted);
  return annotate_tokens(src, tgt, lex);
}

Tokens apply_edits(std::span<const Token> src, std::span<const Edit> edits) {
  Tokens out;
  std::size_t pos = 0;
  for (const auto& e : edits) {
    if (e.src_start < pos || e.src_end < e.src_start || e.src_end > src.size()) {
      throw Error("apply_edits: edits overlap or are out of range");
    }
    out.insert(out.end(), src.begin() + static_cast<std::ptrdiff_t>(pos),
               src.begin() + static_cast<std::ptrdiff_t>(e.src_start));
    out.insert(out.end(), e.replacement.begin(), e.replacement.end());
    pos = e.src_end;
  }
  out.insert(out.end(), src.begin() + static_cast<std::ptrdiff_t>(pos), src.end());
  return out;
}

TagCountArray count_edit_tags(std::span<const AnnotatedPair> pairs) {
  TagCountArray counts{};
  for (const auto& p : pairs) {
    for (const auto& e : p.edits) ++counts[index_of(e.tag)];
  }
  return counts;
}

TagDistribution estimate_distribution(std::span<const AnnotatedPair> pairs) {
  return estimate_distribution(count_edit_tags(pairs));
}

std::string annotation_to_json(const AnnotatedPair& pair) {
  nlohmann::ordered_json j;
  j["source"] = pair.source;
  j["target"] = pair.target;
  j["edits"] = nlohmann::ordered_json::array();
  for (const auto& e : pair.edits) {
    nlohmann::ordered_json je;
    je["start"] = e.src_start;
    je["end"] = e.src_end;
    je["replacement"] = join_surface(e.replacement);
    je["tag"] = std::string(render_tag(e.tag));
    j["edits"].push_back(std::move(je));
  }
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace tagcorrupt

#include "tagcorrupt/text.hpp"

#include <algorithm>
#include <cctype>

namespace tagcorrupt {
namespace {

constexpr std::string_view kPeelable = ".,;:!?\"()'";

bool peelable(char c) { return kPeelable.find(c) != std::string_view::npos; }

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

void split_word(std::string_view word, Tokens& out) {
  std::size_t start = 0;
  for (std::size_t i = 1; i < word.size(); ++i) {
    if (word[i] == '\'') {
      out.emplace_back(std::string(word.substr(start, i - start)));
      start = i;
    }
  }
  out.emplace_back(std::string(word.substr(start)));
}

}  // namespace

Token::Token(std::string text) : surface(std::move(text)), lower(to_lower(surface)) {}

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_clitic(std::string_view token) {
  static constexpr std::string_view kClitics[] = {"'s", "'re", "'m", "'ve", "'ll", "'d", "'t"};
  const std::string lowered = to_lower(token);
  return std::find(std::begin(kClitics), std::end(kClitics), lowered) != std::end(kClitics);
}

Tokens tokenize(std::string_view sentence) {
  Tokens out;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    std::size_t j = i;
    while (j < sentence.size() && !is_space(sentence[j])) ++j;
    if (j == i) break;
    std::string_view chunk = sentence.substr(i, j - i);
    i = j;

    if (is_clitic(chunk)) {
      out.emplace_back(std::string(chunk));
      continue;
    }
    std::size_t lead = 0;
    while (lead < chunk.size() && peelable(chunk[lead])) ++lead;
    std::size_t trail = chunk.size();
    while (trail > lead && peelable(chunk[trail - 1])) --trail;
    for (std::size_t k = 0; k < lead; ++k) out.emplace_back(std::string(1, chunk[k]));
    if (trail > lead) split_word(chunk.substr(lead, trail - lead), out);
    for (std::size_t k = trail; k < chunk.size(); ++k) out.emplace_back(std::string(1, chunk[k]));
  }
  return out;
}

std::string detokenize(std::span<const Token> tokens) {
  static constexpr std::string_view kNoSpaceBefore = ".,;:!?)";
  std::string out;
  bool suppress_next_space = true;
  for (const Token& token : tokens) {
    const std::string& s = token.surface;
    const bool attach = (s.size() == 1 && kNoSpaceBefore.find(s[0]) != std::string_view::npos) ||
                        (s.size() > 1 && s[0] == '\'');
    if (!suppress_next_space && !attach) out.push_back(' ');
    out += s;
    suppress_next_space = (s == "(");
  }
  return out;
}

Tokens make_tokens(std::initializer_list<std::string_view> words) {
  Tokens out;
  out.reserve(words.size());
  for (std::string_view w : words) out.emplace_back(std::string(w));
  return out;
}

std::string join_surface(std::span<const Token> tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += sep;
    out += tokens[i].surface;
  }
  return out;
}

bool is_punctuation(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(),
                     [](unsigned char c) { return std::ispunct(c) != 0; });
}

bool is_alphabetic(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(),
                     [](unsigned char c) { return std::isalpha(c) != 0 || c == '-'; }) &&
         std::isalpha(static_cast<unsigned char>(token.front())) != 0;
}

std::size_t count_words(std::string_view sentence) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : sentence) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

}  // namespace tagcorrupt

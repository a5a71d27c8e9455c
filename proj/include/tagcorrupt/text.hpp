#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tagcorrupt {

struct Token {
  Token() = default;
  explicit Token(std::string text);

  std::string surface;
  std::string lower;  // ASCII case-folded surface

  bool operator==(const Token& other) const { return surface == other.surface; }
};

using Tokens = std::vector<Token>;

std::string to_lower(std::string_view text);

// Whitespace split, then leading/trailing punctuation characters (.,;:!?"()')
// become separate tokens and a word-internal apostrophe starts a new token
// ("I'm" -> I 'm).
Tokens tokenize(std::string_view sentence);

// Single-space join; no space before closing punctuation or apostrophe
// clitics, none after an opening parenthesis.
std::string detokenize(std::span<const Token> tokens);

Tokens make_tokens(std::initializer_list<std::string_view> words);
std::string join_surface(std::span<const Token> tokens, std::string_view sep = " ");

bool is_punctuation(std::string_view token);
bool is_alphabetic(std::string_view token);
// 's 're 'm 've 'll 'd 't
bool is_clitic(std::string_view token);
std::size_t count_words(std::string_view sentence);

}  // namespace tagcorrupt

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mugi {

using Token = std::string;

// Lowercases and splits on every non-alphanumeric codepoint. Bytes >= 0x80
// (UTF-8 lead and continuation bytes) count as alphanumeric so multi-byte
// letters stay inside their token; ASCII punctuation and whitespace split.
std::vector<Token> tokenize(std::string_view text);

// Number of tokens tokenize() would produce, without allocating them.
std::size_t token_count(std::string_view text);

// Longest prefix of `text` holding at most `max_tokens` tokens. The cut is
// placed right after the last kept token, so the prefix re-tokenizes to
// exactly the first `max_tokens` tokens of the input.
std::string_view truncate_to_tokens(std::string_view text, std::size_t max_tokens);

// Joins pieces with a single space.
std::string join_with_space(std::span<const std::string> pieces);
std::string join_with_space(std::string_view first, std::string_view second);

}  // namespace mugi

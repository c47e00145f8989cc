#include "mugi/text.hpp"

namespace mugi {
namespace {

bool is_token_byte(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char lower(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

// Calls visit(begin, end) for every token span, stopping early when it
// returns false.
template <typename Visit>
void for_each_token(std::string_view text, Visit&& visit) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && !is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
        if (i == n) break;
        std::size_t j = i;
        while (j < n && is_token_byte(static_cast<unsigned char>(text[j]))) ++j;
        if (!visit(i, j)) return;
        i = j;
    }
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    for_each_token(text, [&](std::size_t b, std::size_t e) {
        Token t;
        t.reserve(e - b);
        for (std::size_t k = b; k < e; ++k) t.push_back(lower(static_cast<unsigned char>(text[k])));
        tokens.push_back(std::move(t));
        return true;
    });
    return tokens;
}

std::size_t token_count(std::string_view text) {
    std::size_t count = 0;
    for_each_token(text, [&](std::size_t, std::size_t) {
        ++count;
        return true;
    });
    return count;
}

std::string_view truncate_to_tokens(std::string_view text, std::size_t max_tokens) {
    std::size_t kept = 0;
    std::size_t cut = text.size();
    bool truncated = false;
    for_each_token(text, [&](std::size_t, std::size_t e) {
        if (kept == max_tokens) {
            truncated = true;
            return false;
        }
        ++kept;
        cut = e;
        return true;
    });
    if (!truncated) return text;
    return text.substr(0, kept == 0 ? 0 : cut);
}

std::string join_with_space(std::span<const std::string> pieces) {
    std::string out;
    for (const auto& p : pieces) {
        if (!out.empty() || &p != pieces.data()) out.push_back(' ');
        out += p;
    }
    return out;
}

std::string join_with_space(std::string_view first, std::string_view second) {
    std::string out;
    out.reserve(first.size() + second.size() + 1);
    out.append(first);
    out.push_back(' ');
    out.append(second);
    return out;
}

}  // namespace mugi

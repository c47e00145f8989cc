#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mugi {

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

// 16 lowercase hex digits of fnv1a64(bytes).
std::string fingerprint_hex(std::string_view bytes);

}  // namespace mugi

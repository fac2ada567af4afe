#pragma once

#include <nlohmann/json.hpp>
#include <string>

namespace benchpress::runner {

/// Integral floating-point values become integers, recursively, so that
/// 1 and 1.0 serialize identically.
nlohmann::json normalize_numbers(const nlohmann::json& j);

/// Sorted keys, no whitespace, minimal numbers.
std::string canonical_json(const nlohmann::json& j);

/// 16 lowercase hex digits of the 64-bit FNV-1a hash of `text`.
std::string hex_hash(std::string_view text);

/// Scalar rendered for humans and for plugin command lines: strings raw,
/// numbers minimal, null as "null".
std::string scalar_text(const nlohmann::json& j);

}  // namespace benchpress::runner

#include "benchpress/runner/canonical.hpp"

#include <cmath>
#include <cstdio>

#include "benchpress/rng.hpp"

namespace benchpress::runner {

nlohmann::json normalize_numbers(const nlohmann::json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
    return j;
  }
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint64_t>();
    if (v <= static_cast<std::uint64_t>(INT64_MAX)) return static_cast<std::int64_t>(v);
    return j;
  }
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& x : j) out.push_back(normalize_numbers(x));
    return out;
  }
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : j.items()) out[k] = normalize_numbers(v);
    return out;
  }
  return j;
}

std::string canonical_json(const nlohmann::json& j) { return normalize_numbers(j).dump(); }

std::string hex_hash(std::string_view text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

std::string scalar_text(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  return canonical_json(j);
}

}  // namespace benchpress::runner

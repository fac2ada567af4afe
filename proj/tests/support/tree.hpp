#pragma once

// Results-tree snapshots for determinism checks.

#include <filesystem>
#include <map>
#include <sstream>
#include <string>

#include "benchpress/io.hpp"

namespace tree {

namespace fs = std::filesystem;

/// Blanks the time_s column (5th) of a benchmarks CSV; wall time is the only
/// field that legitimately differs between otherwise identical runs.
inline std::string mask_time_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::size_t start = 0;
    for (int k = 0; k < 4 && start != std::string::npos; ++k) {
      start = line.find(',', start);
      if (start != std::string::npos) ++start;
    }
    if (start != std::string::npos) {
      const std::size_t end = line.find(',', start);
      line = line.substr(0, start) + "*" + (end == std::string::npos ? "" : line.substr(end));
    }
    out += line + "\n";
  }
  return out;
}

/// Relative path -> file bytes, with timing files masked.
inline std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = fs::relative(e.path(), root).generic_string();
    std::string text = benchpress::io::read_file(e.path());
    if (e.path().filename() == "time.txt")
      text = "*";
    else if (e.path().filename() == "benchmarks.csv")
      text = mask_time_column(text);
    files[rel] = std::move(text);
  }
  return files;
}

/// First differing path, or empty when the snapshots agree.
inline std::string first_difference(const std::map<std::string, std::string>& a,
                                    const std::map<std::string, std::string>& b) {
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it == b.end()) return k + " (missing on the right)";
    if (it->second != v) return k;
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) return k + " (missing on the left)";
  return {};
}

}  // namespace tree

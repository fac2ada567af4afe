#include "benchpress/io.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

#include "benchpress/error.hpp"

namespace benchpress::io {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

/// Lines without terminators; trailing blank lines dropped.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(sep, start);
    if (end == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, end - start)));
    start = end + 1;
  }
}

std::vector<std::string> parse_labels(std::string_view line) {
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (auto cell : split(line, ',')) {
    std::string label(unquote(cell));
    if (label.empty()) throw ParseError("empty label in header");
    if (!seen.insert(label).second) throw ParseError("duplicate label '" + label + "' in header");
    labels.push_back(std::move(label));
  }
  return labels;
}

std::string line_no(std::size_t i) { return "line " + std::to_string(i + 1) + ": "; }

double require_number(std::string_view cell, std::size_t line) {
  auto v = parse_number(cell);
  if (!v) throw ParseError(line_no(line) + "non-numeric cell '" + std::string(cell) + "'");
  return *v;
}

std::optional<long long> as_integer(double v) {
  if (v != std::floor(v) || std::abs(v) > 9.0e15) return std::nullopt;
  return static_cast<long long>(v);
}

template <typename Fn>
auto with_path(const fs::path& path, Fn&& fn) {
  const std::string text = read_file(path);
  try {
    return fn(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void join_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_real(double v) {
  std::string s = format_number(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  static std::atomic<std::uint64_t> counter{0};
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(path.string() + ": cannot write file");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(path.string() + ": write failed");
  }
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------- data

DataMatrix parse_data(std::string_view text, const DataReadOptions& options) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty data file");
  DataMatrix m;
  m.labels = parse_labels(lines[0]);
  const std::size_t p = m.labels.size();

  std::vector<std::vector<double>> rows;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto cells = split(lines[l], ',');
    if (cells.size() != p)
      throw ParseError(line_no(l) + "expected " + std::to_string(p) + " fields, found " +
                       std::to_string(cells.size()));
    std::vector<double> row(p);
    for (std::size_t c = 0; c < p; ++c) row[c] = require_number(cells[c], l);
    rows.push_back(std::move(row));
  }

  bool categorical = false;
  if (options.discrete.value_or(true) && !rows.empty()) {
    bool ok = true;
    const int min_card = options.discrete ? 1 : 2;
    for (std::size_t c = 0; c < p && ok; ++c) {
      const auto card = as_integer(rows[0][c]);
      if (!card || *card < min_card) {
        ok = false;
        break;
      }
      for (std::size_t r = 1; r < rows.size() && ok; ++r) {
        const auto v = as_integer(rows[r][c]);
        ok = v && *v >= 0 && *v < *card;
      }
    }
    if (options.discrete && !ok)
      throw ParseError("categorical data requires a cardinality row and integer levels below it");
    categorical = ok;
  }
  if (options.discrete.value_or(false) && rows.empty())
    throw ParseError("categorical data requires a cardinality row");

  const std::size_t first = categorical ? 1 : 0;
  if (categorical) {
    m.cardinalities.emplace(p);
    for (std::size_t c = 0; c < p; ++c) (*m.cardinalities)[c] = static_cast<int>(rows[0][c]);
  }
  m.values.resize(static_cast<Eigen::Index>(rows.size() - std::min(first, rows.size())), static_cast<Eigen::Index>(p));
  for (std::size_t r = first; r < rows.size(); ++r)
    for (std::size_t c = 0; c < p; ++c)
      m.values(static_cast<Eigen::Index>(r - first), static_cast<Eigen::Index>(c)) = rows[r][c];
  m.validate();
  return m;
}

DataMatrix read_data(const fs::path& path, const DataReadOptions& options) {
  return with_path(path, [&](const std::string& text) { return parse_data(text, options); });
}

std::string format_data(const DataMatrix& data) {
  data.validate();
  std::string out;
  join_row(out, data.labels);
  std::vector<std::string> cells(data.cols());
  if (data.cardinalities) {
    for (std::size_t c = 0; c < data.cols(); ++c) cells[c] = std::to_string((*data.cardinalities)[c]);
    join_row(out, cells);
  }
  for (Eigen::Index r = 0; r < data.values.rows(); ++r) {
    for (std::size_t c = 0; c < data.cols(); ++c) cells[c] = format_number(data.values(r, static_cast<Eigen::Index>(c)));
    join_row(out, cells);
  }
  return out;
}

void write_data(const DataMatrix& data, const fs::path& path) { write_file_atomic(path, format_data(data)); }

// ---------------------------------------------------------------- adjacency matrices

namespace {

LabeledMatrix parse_square(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty matrix file");
  LabeledMatrix m;
  m.labels = parse_labels(lines[0]);
  const std::size_t p = m.labels.size();
  if (lines.size() - 1 != p)
    throw ParseError("matrix is not square: " + std::to_string(p) + " labels but " +
                     std::to_string(lines.size() - 1) + " rows");
  m.values.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < p; ++i) {
    const auto cells = split(lines[i + 1], ',');
    if (cells.size() != p)
      throw ParseError(line_no(i + 1) + "expected " + std::to_string(p) + " fields, found " +
                       std::to_string(cells.size()));
    for (std::size_t j = 0; j < p; ++j)
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = require_number(cells[j], i + 1);
  }
  return m;
}

}  // namespace

LabeledGraph parse_adjmat(std::string_view text) {
  const LabeledMatrix m = parse_square(text);
  const std::size_t p = m.labels.size();
  std::vector<std::uint8_t> adj(p * p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const double v = m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0 && v != 1.0)
        throw ParseError(line_no(i + 1) + "adjacency entry must be 0 or 1, found " + format_number(v));
      if (i == j && v != 0.0) throw ParseError(line_no(i + 1) + "nonzero diagonal entry");
      adj[i * p + j] = static_cast<std::uint8_t>(v);
    }
  }
  return LabeledGraph(m.labels, std::move(adj));
}

LabeledGraph read_adjmat(const fs::path& path) {
  return with_path(path, [](const std::string& text) { return parse_adjmat(text); });
}

std::string format_adjmat(const LabeledGraph& g) {
  std::string out;
  join_row(out, g.labels());
  const std::size_t p = g.size();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (j) out += ',';
      out += g.entry(i, j) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

void write_adjmat(const LabeledGraph& g, const fs::path& path) { write_file_atomic(path, format_adjmat(g)); }

LabeledMatrix read_labeled_matrix(const fs::path& path) {
  return with_path(path, [](const std::string& text) { return parse_square(text); });
}

// ---------------------------------------------------------------- trajectories

namespace {

std::vector<std::string_view> edge_tokens(std::string_view cell, std::size_t line) {
  if (cell.size() < 2 || cell.front() != '[' || cell.back() != ']')
    throw ParseError(line_no(line) + "edge list must be enclosed in [], found '" + std::string(cell) + "'");
  const std::string_view inner = trim(cell.substr(1, cell.size() - 2));
  if (inner.empty()) return {};
  auto toks = split(inner, ';');
  for (auto t : toks)
    if (t.empty()) throw ParseError(line_no(line) + "empty edge token");
  return toks;
}

/// Splits "x-y" / "x->y" at the first separator that leaves two known labels.
std::optional<TrajectoryEdge> resolve_edge(std::string_view tok, const std::map<std::string, std::size_t, std::less<>>& ids) {
  for (std::size_t pos = tok.find('-'); pos != std::string_view::npos; pos = tok.find('-', pos + 1)) {
    const bool directed = pos + 1 < tok.size() && tok[pos + 1] == '>';
    const auto l = ids.find(tok.substr(0, pos));
    const auto r = ids.find(tok.substr(pos + (directed ? 2 : 1)));
    if (l != ids.end() && r != ids.end() && l->second != r->second)
      return TrajectoryEdge{l->second, r->second, directed};
  }
  return std::nullopt;
}

/// Recovers [first, rest...] from the header tokens "first-x".
std::optional<std::vector<std::string>> labels_from_header(const std::vector<std::string_view>& toks) {
  const std::string_view t0 = toks.front();
  for (std::size_t pos = t0.find('-'); pos != std::string_view::npos; pos = t0.find('-', pos + 1)) {
    const std::string_view first = t0.substr(0, pos);
    if (first.empty()) continue;
    std::vector<std::string> labels{std::string(first)};
    std::set<std::string, std::less<>> seen{std::string(first)};
    bool ok = true;
    for (auto t : toks) {
      if (t.size() <= pos || t.substr(0, pos) != first || t[pos] != '-') {
        ok = false;
        break;
      }
      std::string_view rest = t.substr(pos + 1);
      if (!rest.empty() && rest.front() == '>') rest.remove_prefix(1);
      if (rest.empty() || !seen.insert(std::string(rest)).second) {
        ok = false;
        break;
      }
      labels.emplace_back(rest);
    }
    if (ok) return labels;
  }
  return std::nullopt;
}

std::vector<TrajectoryEdge> resolve_list(const std::vector<std::string_view>& toks,
                                         const std::map<std::string, std::size_t, std::less<>>& ids,
                                         std::size_t line) {
  std::vector<TrajectoryEdge> out;
  for (auto t : toks) {
    auto e = resolve_edge(t, ids);
    if (!e) throw ParseError(line_no(line) + "malformed edge token '" + std::string(t) + "'");
    out.push_back(*e);
  }
  return out;
}

std::string edge_list(const GraphTrajectory& traj, const std::vector<TrajectoryEdge>& edges) {
  std::string s = "[";
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (k) s += ';';
    s += traj.labels[edges[k].from];
    s += edges[k].directed ? "->" : "-";
    s += traj.labels[edges[k].to];
  }
  s += ']';
  return s;
}

std::string header_list(const std::vector<std::string>& labels) {
  std::string s = "[";
  for (std::size_t k = 1; k < labels.size(); ++k) {
    if (k > 1) s += ';';
    s += labels[0] + "-" + labels[k];
  }
  s += ']';
  return s;
}

}  // namespace

GraphTrajectory parse_trajectory(std::string_view text, const std::optional<std::vector<std::string>>& labels_hint) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]) != "index,score,added,removed")
    throw ParseError("line 1: expected header 'index,score,added,removed'");

  struct Row {
    std::int64_t index;
    double score;
    std::vector<std::string_view> added, removed;
    std::size_t line;
  };
  std::vector<Row> rows;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto cells = split(lines[l], ',');
    if (cells.size() != 4) throw ParseError(line_no(l) + "expected 4 fields, found " + std::to_string(cells.size()));
    std::int64_t index = 0;
    auto res = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), index);
    if (res.ec != std::errc() || res.ptr != cells[0].data() + cells[0].size())
      throw ParseError(line_no(l) + "malformed index '" + std::string(cells[0]) + "'");
    rows.push_back({index, require_number(cells[1], l), edge_tokens(cells[2], l), edge_tokens(cells[3], l), l});
  }
  if (rows.size() < 2 || rows[0].index != -2 || rows[1].index != -1)
    throw ParseError("trajectory must begin with the index -2 and -1 label rows");
  const Row& h2 = rows[0];
  const Row& h1 = rows[1];
  if (h2.score != 0.0 || !h2.removed.empty()) throw ParseError(line_no(h2.line) + "index -2 row must have score 0 and removed []");
  if (h1.score != 0.0 || !h1.added.empty()) throw ParseError(line_no(h1.line) + "index -1 row must have score 0 and added []");
  if (h2.added != h1.removed) throw ParseError(line_no(h1.line) + "index -1 removed list must repeat the index -2 added list");

  GraphTrajectory traj;
  if (h2.added.empty()) {
    traj.labels = labels_hint.value_or(std::vector<std::string>{});
    if (traj.labels.size() > 1) throw ParseError("header rows list no edges but " + std::to_string(traj.labels.size()) + " labels are expected");
  } else if (labels_hint) {
    traj.labels = *labels_hint;
  } else {
    auto derived = labels_from_header(h2.added);
    if (!derived) throw ParseError(line_no(h2.line) + "cannot recover labels from the header edges");
    traj.labels = std::move(*derived);
  }

  std::map<std::string, std::size_t, std::less<>> ids;
  for (std::size_t i = 0; i < traj.labels.size(); ++i) ids.emplace(traj.labels[i], i);
  if (ids.size() != traj.labels.size()) throw ParseError("duplicate trajectory labels");

  if (!h2.added.empty()) {
    // Header must be exactly first-x for every other label, in order.
    const auto header = resolve_list(h2.added, ids, h2.line);
    bool ok = header.size() + 1 == traj.labels.size();
    for (std::size_t k = 0; ok && k < header.size(); ++k) ok = header[k].from == 0 && header[k].to == k + 1;
    if (!ok) throw ParseError(line_no(h2.line) + "header edges do not match the expected labels");
  }

  for (std::size_t r = 2; r < rows.size(); ++r) {
    const Row& row = rows[r];
    traj.records.push_back(
        {row.index, row.score, resolve_list(row.added, ids, row.line), resolve_list(row.removed, ids, row.line)});
  }
  traj.validate();
  return traj;
}

GraphTrajectory read_trajectory(const fs::path& path, const std::optional<std::vector<std::string>>& labels_hint) {
  return with_path(path, [&](const std::string& text) { return parse_trajectory(text, labels_hint); });
}

std::string format_trajectory(const GraphTrajectory& traj) {
  const std::string header = header_list(traj.labels);
  std::string out = "index,score,added,removed\n";
  out += "-2,0.0," + header + ",[]\n";
  out += "-1,0.0,[]," + header + "\n";
  for (const auto& rec : traj.records) {
    out += std::to_string(rec.index);
    out += ',';
    out += format_real(rec.score);
    out += ',';
    out += edge_list(traj, rec.added);
    out += ',';
    out += edge_list(traj, rec.removed);
    out += '\n';
  }
  return out;
}

void write_trajectory(const GraphTrajectory& traj, const fs::path& path) {
  write_file_atomic(path, format_trajectory(traj));
}

}  // namespace benchpress::io

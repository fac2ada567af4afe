#include "benchpress/evalreport.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "benchpress/error.hpp"
#include "benchpress/io.hpp"

namespace benchpress::eval {

GraphType graph_type_from_string(const std::string& s) {
  if (s == "cpdag") return GraphType::Cpdag;
  if (s == "pattern") return GraphType::Pattern;
  if (s == "skeleton") return GraphType::Skeleton;
  if (s == "raw") return GraphType::Raw;
  throw InvalidArgument("unknown graph_type '" + s + "' (expected cpdag, pattern, skeleton or raw)");
}

std::string to_string(GraphType t) {
  switch (t) {
    case GraphType::Cpdag: return "cpdag";
    case GraphType::Pattern: return "pattern";
    case GraphType::Skeleton: return "skeleton";
    case GraphType::Raw: return "raw";
  }
  return "raw";
}

LabeledGraph prepare(const LabeledGraph& g, GraphType type) {
  switch (type) {
    case GraphType::Cpdag: return is_dag(g) ? cpdag(g) : g;
    case GraphType::Pattern: return is_dag(g) ? pattern_graph(g) : g;
    case GraphType::Skeleton: return skeleton(g);
    case GraphType::Raw: return g;
  }
  return g;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? io::format_number(*v) : std::string(); }
std::string cell(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string(); }

void append_row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  out += '\n';
}

LabeledGraph final_graph(const learn::Estimate& e) {
  if (const auto* g = std::get_if<LabeledGraph>(&e)) return *g;
  const auto& traj = std::get<GraphTrajectory>(e);
  return graph_at(traj, traj.last_index());
}

}  // namespace

std::vector<BenchmarkRow> benchmarks_table(const std::vector<RunRecord>& runs, GraphType type) {
  std::vector<BenchmarkRow> rows;
  rows.reserve(runs.size());
  for (const auto& run : runs) {
    BenchmarkRow row{run.id, run.params_hash, run.seed, run.param, run.result.status, {}, {}, {}};
    if (run.result.status != learn::Status::Failed) row.time_s = run.result.wall_time;
    if (run.result.status == learn::Status::Ok) {
      if (!run.truth) throw InvalidArgument("benchmarks for '" + run.id + "' need a true graph");
      if (!run.result.estimate) throw InvalidArgument("run '" + run.id + "' is ok but has no estimate");
      row.ntests = run.result.ntests;
      LabeledGraph est = final_graph(*run.result.estimate);
      if (est.labels() != run.truth->labels())
        throw InvalidArgument("estimate of '" + run.id + "' has labels that differ from the true graph");
      row.scores = metrics::compare(prepare(*run.truth, type), prepare(est, type));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<RocPoint> roc_aggregate(const std::vector<BenchmarkRow>& rows) {
  struct Key {
    std::string id, param;
    bool operator<(const Key& o) const {
      if (id != o.id) return id < o.id;
      const auto a = io::parse_number(param), b = io::parse_number(o.param);
      if (a && b && *a != *b) return *a < *b;
      if (a.has_value() != b.has_value()) return a.has_value();
      return param < o.param;
    }
  };
  std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : rows) {
    auto& g = groups[Key{r.id, r.param}];
    if (r.status != learn::Status::Ok || !r.scores) continue;
    const auto rates = metrics::tpr_fprp(*r.scores);
    if (!rates) continue;
    g.first.push_back(rates->first);
    g.second.push_back(rates->second);
  }
  std::vector<RocPoint> out;
  for (const auto& [key, g] : groups) {
    RocPoint pt;
    pt.id = key.id;
    pt.param = key.param;
    pt.n_ok = g.first.size();
    if (pt.n_ok > 0) {
      pt.median_tpr = quantile(g.first, 0.5);
      pt.tpr_q05 = quantile(g.first, 0.05);
      pt.tpr_q95 = quantile(g.first, 0.95);
      pt.median_fprp = quantile(g.second, 0.5);
      pt.fprp_q05 = quantile(g.second, 0.05);
      pt.fprp_q95 = quantile(g.second, 0.95);
    }
    out.push_back(std::move(pt));
  }
  return out;
}

std::string benchmarks_csv(const std::vector<BenchmarkRow>& rows) {
  std::string out = "id,params_hash,seed,status,time_s,ntests,tp,fp,fn,tpr,fprp,fnr,shd,f1\n";
  for (const auto& r : rows) {
    const auto& s = r.scores;
    append_row(out, {r.id, r.params_hash, cell(r.seed), learn::to_string(r.status), cell(r.time_s), cell(r.ntests),
                     s ? io::format_number(s->tp()) : "", s ? io::format_number(s->fp()) : "",
                     s ? std::to_string(s->fn) : "", s ? cell(s->tpr()) : "", s ? cell(s->fprp()) : "",
                     s ? cell(s->fnr()) : "", s ? std::to_string(s->shd) : "", s ? cell(s->f1()) : ""});
  }
  return out;
}

std::string roc_csv(const std::vector<RocPoint>& points) {
  std::string out = "id,param,median_fprp,median_tpr,tpr_q05,tpr_q95,n_ok\n";
  for (const auto& p : points)
    append_row(out, {p.id, p.param, cell(p.median_fprp), cell(p.median_tpr), cell(p.tpr_q05), cell(p.tpr_q95),
                     std::to_string(p.n_ok)});
  return out;
}

GraphStats graph_stats(const std::string& id, std::optional<std::int64_t> seed, const LabeledGraph& g) {
  GraphStats s;
  s.id = id;
  s.seed = seed;
  s.nodes = g.size();
  s.edges = g.num_edges();
  s.density = s.nodes ? static_cast<double>(s.edges) / static_cast<double>(s.nodes) : 0.0;
  for (std::size_t v = 0; v < g.size(); ++v) s.max_indegree = std::max(s.max_indegree, g.parents(v).size());
  return s;
}

std::string graph_stats_csv(const std::vector<GraphStats>& stats) {
  std::string out = "id,seed,nodes,edges,density,max_indegree\n";
  for (const auto& s : stats)
    append_row(out, {s.id, cell(s.seed), std::to_string(s.nodes), std::to_string(s.edges),
                     io::format_number(s.density), std::to_string(s.max_indegree)});
  return out;
}

Eigen::MatrixXd edge_posterior(const GraphTrajectory& traj, std::int64_t burn_in) {
  const std::int64_t last = traj.last_index();
  if (last < 0) throw InvalidArgument("empty trajectory");
  if (burn_in < 0 || burn_in > last) throw InvalidArgument("burn_in must lie in [0, " + std::to_string(last) + "]");
  const auto p = static_cast<Eigen::Index>(traj.labels.size());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
  for_each_segment(traj, burn_in, last, [&](std::int64_t first, std::int64_t end, const LabeledGraph& g, double) {
    const auto w = static_cast<double>(end - first + 1);
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j)
        if (g.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) acc(i, j) += w;
  });
  return acc / static_cast<double>(last + 1 - burn_in);
}

Functional functional_from_string(const std::string& s) {
  if (s == "size") return Functional::Size;
  if (s == "score") return Functional::Score;
  throw InvalidArgument("unknown functional '" + s + "' (expected size or score)");
}

std::vector<SeriesPoint> traj_functional(const GraphTrajectory& traj, Functional f, std::int64_t burn_in,
                                         std::int64_t thinning) {
  if (thinning < 1) throw InvalidArgument("thinning must be >= 1");
  const std::int64_t last = traj.last_index();
  if (burn_in < 0 || burn_in > last) throw InvalidArgument("burn_in must lie in [0, " + std::to_string(last) + "]");
  std::vector<SeriesPoint> out;
  for_each_segment(traj, burn_in, last, [&](std::int64_t first, std::int64_t end, const LabeledGraph& g, double score) {
    const double v = f == Functional::Size ? static_cast<double>(g.num_edges()) : score;
    const std::int64_t offset = (first - burn_in) % thinning;
    for (std::int64_t k = offset ? first + thinning - offset : first; k <= end; k += thinning) out.push_back({k, v});
  });
  return out;
}

std::vector<double> autocorr(const std::vector<double>& series, std::size_t lags) {
  const std::size_t n = series.size();
  if (n <= lags) throw InvalidArgument("series length must exceed the number of lags");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);
  double denom = 0.0;
  for (double x : series) denom += (x - mean) * (x - mean);
  if (denom == 0.0) throw InvalidArgument("autocorrelation of a constant series is undefined");
  std::vector<double> r(lags + 1);
  for (std::size_t k = 0; k <= lags; ++k) {
    double num = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) num += (series[t] - mean) * (series[t + k] - mean);
    r[k] = static_cast<double>(n) / static_cast<double>(n - k) * num / denom;
  }
  r[0] = 1.0;
  return r;
}

std::string matrix_csv(const std::vector<std::string>& labels, const Eigen::MatrixXd& m) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? "," : "") + labels[i];
  out += '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += io::format_number(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string series_csv(const std::vector<SeriesPoint>& series) {
  std::string out = "index,value\n";
  for (const auto& s : series) append_row(out, {std::to_string(s.index), io::format_number(s.value)});
  return out;
}

std::string autocorr_csv(const std::vector<double>& acf) {
  std::string out = "lag,acf\n";
  for (std::size_t k = 0; k < acf.size(); ++k) append_row(out, {std::to_string(k), io::format_number(acf[k])});
  return out;
}

}  // namespace benchpress::eval

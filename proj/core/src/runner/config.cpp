#include "benchpress/runner/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "benchpress/io.hpp"
#include "benchpress/runner/canonical.hpp"

namespace benchpress::runner {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string type_name(const json& j) { return j.type_name(); }

/// Reads fields of one JSON object, tracking which keys were consumed.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object, found " + type_name(j_));
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json* find(const std::string& key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  /// First present key of `keys` (aliases), all marked as consumed.
  std::pair<const json*, std::string> find_any(std::initializer_list<const char*> keys) {
    std::pair<const json*, std::string> hit{nullptr, *keys.begin()};
    for (const char* k : keys) {
      const json* v = find(k);
      if (v && !hit.first) hit = {v, k};
    }
    return hit;
  }
  const json& require(const std::string& key) {
    const json* v = find(key);
    if (!v) throw ConfigError(path_, "missing required key '" + key + "'");
    return *v;
  }

  double number(const json& v, const std::string& key) const {
    if (!v.is_number()) throw ConfigError(at(key), "expected a number, found " + type_name(v));
    return v.get<double>();
  }
  std::int64_t integer(const json& v, const std::string& key) const {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d == std::floor(d) && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
    }
    throw ConfigError(at(key), "expected an integer, found " + v.dump());
  }
  std::size_t count(const json& v, const std::string& key) const {
    const auto n = integer(v, key);
    if (n < 0) throw ConfigError(at(key), "expected a nonnegative integer, found " + v.dump());
    return static_cast<std::size_t>(n);
  }
  bool boolean(const json& v, const std::string& key) const {
    if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false, found " + v.dump());
    return v.get<bool>();
  }
  std::string string(const json& v, const std::string& key) const {
    if (!v.is_string()) throw ConfigError(at(key), "expected a string, found " + v.dump());
    return v.get<std::string>();
  }

  double number_or(const std::string& key, double fallback) {
    const json* v = find(key);
    return v && !v->is_null() ? number(*v, key) : fallback;
  }
  bool bool_or(const std::string& key, bool fallback) {
    const json* v = find(key);
    return v && !v->is_null() ? boolean(*v, key) : fallback;
  }
  void must_be_false(const std::string& key) {
    if (const json* v = find(key); v && !v->is_null() && boolean(*v, key))
      throw ConfigError(at(key), "only false is supported");
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) throw ConfigError(at(k), "unknown key");
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

ScoreSpec score_spec(Fields& f) {
  ScoreSpec s;
  const std::string name = f.string(f.require("score"), "score");
  if (name == "bde" || name == "bdeu")
    s.kind = ScoreKind::BDeu;
  else if (name == "bge")
    s.kind = ScoreKind::BGe;
  else
    throw ConfigError(f.at("score"), "unsupported score '" + name + "' (expected bde, bdeu or bge)");
  s.iss = f.number_or("iss", 1.0);
  if (!(s.iss > 0)) throw ConfigError(f.at("iss"), "must be positive");
  auto [mu, mu_key] = f.find_any({"iss.mu", "iss_mu"});
  if (mu && !mu->is_null()) s.am = f.number(*mu, mu_key);
  if (!(s.am > 0)) throw ConfigError(f.at(mu_key), "must be positive");
  auto [w, w_key] = f.find_any({"iss.w", "iss_w"});
  if (w && !w->is_null()) s.aw = f.number(*w, w_key);
  return s;
}

}  // namespace

bool is_native_algorithm(const std::string& module) {
  return module == "pcalg_pc" || module == "bnlearn_hc" || module == "bnlearn_tabu" || module == "structure_mcmc";
}

std::optional<double> timeout_of(const json& point, const std::string& json_path) {
  auto it = point.find("timeout");
  if (it == point.end() || it->is_null()) return std::nullopt;
  if (!it->is_number() || !(it->get<double>() > 0))
    throw ConfigError(json_path + ".timeout", "expected null or a positive number of seconds");
  return it->get<double>();
}

AlgorithmSpec algorithm_spec(const std::string& module, const json& point, const std::string& json_path) {
  Fields f(point, json_path);
  f.find("timeout");
  timeout_of(point, json_path);

  if (module == "pcalg_pc") {
    PcSpec s;
    s.options.alpha = f.number(f.require("alpha"), "alpha");
    if (!(s.options.alpha > 0 && s.options.alpha < 1)) throw ConfigError(f.at("alpha"), "must lie in (0, 1)");
    const std::string test = f.string(f.require("indepTest"), "indepTest");
    if (test == "gaussCItest")
      s.test = TestKind::FisherZ;
    else if (test == "binCItest" || test == "disCItest")
      s.test = TestKind::G2;
    else
      throw ConfigError(f.at("indepTest"), "unsupported test '" + test + "' (expected gaussCItest, binCItest or disCItest)");
    if (const json* m = f.find("mmax"); m && !m->is_null()) {
      if (m->is_string()) {
        if (m->get<std::string>() != "Inf") throw ConfigError(f.at("mmax"), "expected \"Inf\" or an integer");
      } else {
        s.options.max_cond = f.count(*m, "mmax");
      }
    }
    if (const json* v = f.find("u2pd"); v && f.string(*v, "u2pd") != "relaxed")
      throw ConfigError(f.at("u2pd"), "only \"relaxed\" is supported");
    if (const json* v = f.find("skelmethod"); v && f.string(*v, "skelmethod") != "stable")
      throw ConfigError(f.at("skelmethod"), "only \"stable\" is supported");
    f.must_be_false("conservative");
    f.must_be_false("majrule");
    f.must_be_false("solveconfl");
    f.bool_or("NAdelete", true);
    f.bool_or("verbose", false);
    if (const json* v = f.find("numCores"); v && !v->is_null() && f.count(*v, "numCores") < 1)
      throw ConfigError(f.at("numCores"), "must be at least 1");
    f.finish();
    return s;
  }
  if (module == "bnlearn_hc") {
    HcSpec s{score_spec(f)};
    f.finish();
    return s;
  }
  if (module == "bnlearn_tabu") {
    TabuSpec s{score_spec(f), {}};
    if (const json* v = f.find("tabu"); v && !v->is_null()) s.options.tabu_len = f.count(*v, "tabu");
    s.options.stagnation_max = s.options.tabu_len;
    auto [m, m_key] = f.find_any({"max.tabu", "max_tabu"});
    if (m && !m->is_null()) s.options.stagnation_max = f.count(*m, m_key);
    f.finish();
    return s;
  }
  if (module == "structure_mcmc") {
    McmcSpec s{score_spec(f), 0};
    s.iterations = f.count(f.require("iterations"), "iterations");
    f.finish();
    return s;
  }

  ExternalAlgSpec s;
  for (const auto& [k, v] : point.items()) {
    if (k == "timeout") continue;
    if (k == "command") {
      if (!v.is_null()) s.command = f.string(v, "command");
      continue;
    }
    if (v.is_object() || v.is_array()) throw ConfigError(f.at(k), "plugin parameters must be scalars");
    s.params[k] = scalar_text(v);
  }
  return s;
}

netgen::RandDagSpec rand_dag_spec(const json& params, const std::string& json_path) {
  Fields f(params, json_path);
  netgen::RandDagSpec s;
  s.n = f.count(f.require("n"), "n");
  s.d = f.number(f.require("d"), "d");
  if (const json* v = f.find("max_parents"); v && !v->is_null()) {
    if (v->is_string() && v->get<std::string>() == "Inf") {
    } else {
      s.max_parents = f.count(*v, "max_parents");
    }
  }
  s.method = f.find("method") ? f.string(params.at("method"), "method") : "er";
  if (s.method != "er") throw ConfigError(f.at("method"), "only method \"er\" is supported");
  for (const char* k : {"par1", "par2"})
    if (const json* v = f.find(k); v && !v->is_null()) throw ConfigError(f.at(k), "must be null for method \"er\"");
  f.bool_or("DAG", true);
  f.finish();
  try {
    netgen::validate(s);
  } catch (const InvalidArgument& e) {
    throw ConfigError(json_path, e.what());
  }
  return s;
}

netgen::BandSpec band_spec(const std::string& module, const json& params, const std::string& json_path) {
  Fields f(params, json_path);
  netgen::BandSpec s;
  s.p = f.count(f.require("dim"), "dim");
  if (s.p < 1) throw ConfigError(f.at("dim"), "must be at least 1");
  auto [w, key] = module == "bandmat" ? f.find_any({"bandwith", "bandwidth"}) : f.find_any({"max_bandwith", "max_bandwidth"});
  if (!w) throw ConfigError(json_path, "missing required key '" + key + "'");
  s.bandwidth = f.count(*w, key);
  if (s.bandwidth >= s.p) throw ConfigError(f.at(key), "must be smaller than dim");
  f.finish();
  return s;
}

std::pair<double, double> param_range(const std::string& module, const json& params, const std::string& json_path) {
  Fields f(params, json_path);
  const double lo = f.number(f.require("min"), "min"), hi = f.number(f.require("max"), "max");
  if (!(lo >= 0 && lo < hi)) throw ConfigError(json_path, "need 0 <= min < max");
  if (module == "bin_bn" && hi > 1) throw ConfigError(f.at("max"), "probabilities must not exceed 1");
  f.finish();
  return {lo, hi};
}

IidSpec iid_spec(const json& params, const std::string& json_path) {
  Fields f(params, json_path);
  IidSpec s;
  s.standardized = f.bool_or("standardized", false);
  const json& n = f.require("sample_sizes");
  if (n.is_array()) {
    for (std::size_t k = 0; k < n.size(); ++k) s.sample_sizes.push_back(f.count(n[k], "sample_sizes[" + std::to_string(k) + "]"));
  } else {
    s.sample_sizes.push_back(f.count(n, "sample_sizes"));
  }
  if (s.sample_sizes.empty()) throw ConfigError(f.at("sample_sizes"), "must not be empty");
  for (std::size_t n_k : s.sample_sizes) {
    if (n_k < 1) throw ConfigError(f.at("sample_sizes"), "sample sizes must be positive");
    if (s.standardized && n_k < 2) throw ConfigError(f.at("sample_sizes"), "standardization needs at least 2 samples");
  }
  f.finish();
  return s;
}

std::vector<json> expand_grid(const json& params, std::vector<std::string>* varied) {
  std::vector<json> points{json::object()};
  std::vector<std::string> names;
  for (const auto& [k, v] : params.items()) {
    if (v.is_array()) {
      names.push_back(k);
      std::vector<json> next;
      for (const auto& p : points)
        for (const auto& x : v) {
          json q = p;
          q[k] = x;
          next.push_back(std::move(q));
        }
      points = std::move(next);
    } else {
      for (auto& p : points) p[k] = v;
    }
  }
  if (varied) *varied = std::move(names);
  return points;
}

std::string param_label(const json& point, const std::vector<std::string>& varied) {
  if (varied.size() == 1) return scalar_text(point.at(varied[0]));
  std::string out;
  for (const auto& k : varied) {
    if (!out.empty()) out += ';';
    out += k + "=" + scalar_text(point.at(k));
  }
  return out;
}

std::vector<std::int64_t> DataTuple::seeds() const {
  std::vector<std::int64_t> out;
  if (!seed_range) return out;
  for (std::int64_t s = seed_range->first; s <= seed_range->second; ++s) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------- whole file

namespace {

const std::set<std::string> kGraphModules{"pcalg_randdag", "bandmat", "rand_bandmat"};
const std::set<std::string> kParamModules{"bin_bn", "sem_params"};
const std::set<std::string> kDataModules{"iid"};

void parse_resources(const json& res, BenchmarkConfig& cfg) {
  Fields top(res, "$.resources");
  std::set<std::string> all_ids;
  const auto section = [&](const std::string& name, std::map<std::string, ModuleObject>& out,
                           const std::set<std::string>* known) {
    const json* sec = top.find(name);
    if (!sec || sec->is_null()) return;
    const std::string sec_path = top.at(name);
    if (!sec->is_object()) throw ConfigError(sec_path, "expected an object of module lists");
    for (const auto& [module, list] : sec->items()) {
      const std::string mod_path = sec_path + "." + module;
      if (known && !known->count(module)) {
        std::string names;
        for (const auto& k : *known) names += (names.empty() ? "" : ", ") + k;
        throw ConfigError(mod_path, "unsupported module (supported: " + names + ")");
      }
      if (!list.is_array()) throw ConfigError(mod_path, "expected a list of objects");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string obj_path = mod_path + "[" + std::to_string(i) + "]";
        const json& obj = list[i];
        if (!obj.is_object()) throw ConfigError(obj_path, "expected an object");
        auto id_it = obj.find("id");
        if (id_it == obj.end() || !id_it->is_string() || id_it->get<std::string>().empty())
          throw ConfigError(obj_path, "missing string key 'id'");
        const std::string id = id_it->get<std::string>();
        if (!all_ids.insert(id).second) throw ConfigError(obj_path + ".id", "duplicate id '" + id + "'");
        json params = obj;
        params.erase("id");
        out.emplace(id, ModuleObject{name, module, id, std::move(params), obj_path});
      }
    }
  };
  section("graph", cfg.graphs, &kGraphModules);
  section("parameters", cfg.parameters, &kParamModules);
  section("data", cfg.data, &kDataModules);
  section("structure_learning_algorithms", cfg.algorithms, nullptr);
  top.finish();

  for (const auto& [id, m] : cfg.graphs) {
    if (m.module == "pcalg_randdag")
      rand_dag_spec(m.params, m.json_path);
    else
      band_spec(m.module, m.params, m.json_path);
  }
  for (const auto& [id, m] : cfg.parameters) param_range(m.module, m.params, m.json_path);
  for (const auto& [id, m] : cfg.data) iid_spec(m.params, m.json_path);
  for (const auto& [id, m] : cfg.algorithms) {
    if (!m.params.is_object()) throw ConfigError(m.json_path, "expected an object");
    for (const auto& point : expand_grid(m.params)) algorithm_spec(m.module, point, m.json_path);
    if (!is_native_algorithm(m.module) && !m.params.contains("command"))
      cfg.warnings.push_back("algorithm '" + id + "' (module " + m.module +
                             ") is not built in and has no \"command\"; its runs will fail");
  }
}

std::optional<fs::path> find_file(const fs::path& base, const std::vector<fs::path>& dirs, const std::string& ref,
                                  bool allow_dir) {
  std::vector<fs::path> candidates;
  for (const auto& d : dirs) candidates.push_back(base / d / ref);
  candidates.push_back(base / ref);
  if (fs::path(ref).is_absolute()) candidates.push_back(ref);
  for (const auto& c : candidates) {
    std::error_code ec;
    if (fs::is_regular_file(c, ec) || (allow_dir && fs::is_directory(c, ec))) return c;
  }
  return std::nullopt;
}

Source resolve(const json* v, const std::string& path, const std::map<std::string, ModuleObject>& modules,
               const fs::path& base, const std::vector<fs::path>& dirs, bool allow_dir) {
  Source s;
  if (!v || v->is_null()) return s;
  if (!v->is_string()) throw ConfigError(path, "expected an id, a file name or null");
  s.ref = v->get<std::string>();
  if (modules.count(s.ref)) {
    s.kind = Source::Kind::Module;
    return s;
  }
  auto file = find_file(base, dirs, s.ref, allow_dir);
  if (!file) throw ConfigError(path, "'" + s.ref + "' is neither a defined id nor an existing file");
  s.path = *file;
  s.kind = fs::is_directory(*file) ? Source::Kind::Directory : Source::Kind::File;
  return s;
}

void parse_tuples(const json& list, const std::string& path, BenchmarkConfig& cfg) {
  if (!list.is_array()) throw ConfigError(path, "expected a list of data setups");
  for (std::size_t i = 0; i < list.size(); ++i) {
    Fields f(list[i], path + "[" + std::to_string(i) + "]");
    DataTuple t;
    t.json_path = f.path();
    t.graph = resolve(f.find("graph_id"), f.at("graph_id"), cfg.graphs, cfg.base_dir, {"resources/adjmat/myadjmats"}, false);
    t.parameters = resolve(f.find("parameters_id"), f.at("parameters_id"), cfg.parameters, cfg.base_dir,
                           {"resources/parameters/myparams/sem_params"}, false);
    const json* d = f.find("data_id");
    if (!d || d->is_null()) throw ConfigError(f.at("data_id"), "a data_id is required");
    t.data = resolve(d, f.at("data_id"), cfg.data, cfg.base_dir, {"resources/data/mydatasets"}, true);

    const json* sr = f.find("seed_range");
    const bool fixed_data = t.data.kind != Source::Kind::Module;
    if (sr && !sr->is_null()) {
      if (!sr->is_array() || sr->size() != 2) throw ConfigError(f.at("seed_range"), "expected [first, last] or null");
      const auto lo = f.integer((*sr)[0], "seed_range[0]"), hi = f.integer((*sr)[1], "seed_range[1]");
      if (lo < 0 || hi < lo) throw ConfigError(f.at("seed_range"), "need 0 <= first <= last");
      t.seed_range = std::pair{lo, hi};
    }
    if (fixed_data && t.seed_range) throw ConfigError(f.at("seed_range"), "must be null when data_id is a fixed file or directory");
    if (!fixed_data && !t.seed_range) throw ConfigError(f.at("seed_range"), "generated data needs a seed range");
    f.finish();

    if (fixed_data) {
      if (t.parameters.kind != Source::Kind::None)
        throw ConfigError(f.at("parameters_id"), "must be null when data_id is a fixed file or directory");
      if (t.data.kind == Source::Kind::Directory && t.graph.kind != Source::Kind::None)
        throw ConfigError(f.at("graph_id"), "must be null when data_id is a directory");
      if (t.graph.kind == Source::Kind::Module)
        throw ConfigError(f.at("graph_id"), "a generated graph needs a seed_range; use a graph file with fixed data");
    } else {
      if (t.graph.kind == Source::Kind::None) throw ConfigError(f.at("graph_id"), "generated data needs a graph");
      if (t.parameters.kind == Source::Kind::None)
        throw ConfigError(f.at("parameters_id"), "generated data needs parameters");
    }
    if (t.parameters.kind == Source::Kind::File && t.graph.kind != Source::Kind::File)
      throw ConfigError(f.at("parameters_id"), "fixed parameters need a fixed graph file");
    if (t.graph.kind == Source::Kind::Module && t.parameters.kind != Source::Kind::None) {
      const ModuleObject& g = cfg.graphs.at(t.graph.ref);
      const bool dag = g.module == "pcalg_randdag" && g.params.value("DAG", true);
      if (!dag) throw ConfigError(f.at("parameters_id"), "parameter modules need a DAG but '" + g.id + "' is undirected");
    }
    cfg.tuples.push_back(std::move(t));
  }
}

std::vector<std::string> id_list(Fields& f, const std::string& key, const BenchmarkConfig& cfg) {
  std::vector<std::string> ids;
  const json* v = f.find(key);
  if (!v || v->is_null()) return ids;
  if (!v->is_array()) throw ConfigError(f.at(key), "expected a list of algorithm ids");
  for (std::size_t i = 0; i < v->size(); ++i) {
    const std::string p = f.at(key) + "[" + std::to_string(i) + "]";
    if (!(*v)[i].is_string()) throw ConfigError(p, "expected an algorithm id");
    const std::string id = (*v)[i].get<std::string>();
    if (!cfg.algorithms.count(id)) throw ConfigError(p, "undefined algorithm id '" + id + "'");
    ids.push_back(id);
  }
  return ids;
}

std::vector<McmcEval> mcmc_list(Fields& f, const std::string& key, const BenchmarkConfig& cfg, bool functional,
                                bool lags) {
  std::vector<McmcEval> out;
  const json* v = f.find(key);
  if (!v || v->is_null()) return out;
  if (!v->is_array()) throw ConfigError(f.at(key), "expected a list");
  for (std::size_t i = 0; i < v->size(); ++i) {
    Fields o((*v)[i], f.at(key) + "[" + std::to_string(i) + "]");
    McmcEval e;
    e.id = o.string(o.require("id"), "id");
    auto it = cfg.algorithms.find(e.id);
    if (it == cfg.algorithms.end()) throw ConfigError(o.at("id"), "undefined algorithm id '" + e.id + "'");
    if (it->second.module != "structure_mcmc")
      throw ConfigError(o.at("id"), "'" + e.id + "' does not produce an MCMC trajectory");
    if (const json* b = o.find("burn_in"); b && !b->is_null()) e.burn_in = static_cast<std::int64_t>(o.count(*b, "burn_in"));
    if (functional) {
      if (const json* t = o.find("thinning"); t && !t->is_null()) e.thinning = static_cast<std::int64_t>(o.count(*t, "thinning"));
      if (e.thinning < 1) throw ConfigError(o.at("thinning"), "must be at least 1");
      try {
        e.functional = eval::functional_from_string(o.string(o.require("functional"), "functional"));
      } catch (const InvalidArgument& ex) {
        throw ConfigError(o.at("functional"), ex.what());
      }
    }
    if (lags) e.lags = o.count(o.require("lags"), "lags");
    o.find("active");
    o.finish();
    out.push_back(std::move(e));
  }
  return out;
}

void parse_evaluation(const json& ev, const std::string& path, BenchmarkConfig& cfg) {
  cfg.evaluation_json = ev;
  if (ev.is_null()) return;
  Fields f(ev, path);
  Evaluation& e = cfg.evaluation;
  if (const json* b = f.find("benchmarks"); b && !b->is_null()) {
    Fields o(*b, f.at("benchmarks"));
    BenchmarksEval be;
    if (const json* v = o.find("filename_prefix"); v && !v->is_null()) be.filename_prefix = o.string(*v, "filename_prefix");
    if (be.filename_prefix.find("..") != std::string::npos || fs::path(be.filename_prefix).is_absolute())
      throw ConfigError(o.at("filename_prefix"), "must be a relative path without '..'");
    be.show_seed = o.bool_or("show_seed", be.show_seed);
    be.errorbar = o.bool_or("errorbar", be.errorbar);
    be.errorbarh = o.bool_or("errorbarh", be.errorbarh);
    be.scatter = o.bool_or("scatter", be.scatter);
    be.path = o.bool_or("path", be.path);
    be.text = o.bool_or("text", be.text);
    be.ids = id_list(o, "ids", cfg);
    if (const json* v = o.find("graph_type"); v && !v->is_null()) {
      try {
        be.graph_type = eval::graph_type_from_string(o.string(*v, "graph_type"));
      } catch (const InvalidArgument& ex) {
        throw ConfigError(o.at("graph_type"), ex.what());
      }
    }
    o.finish();
    e.benchmarks = std::move(be);
  }
  e.graph_true_plots = f.bool_or("graph_true_plots", false);
  e.graph_true_stats = f.bool_or("graph_true_stats", false);
  e.ggally_ggpairs = f.bool_or("ggally_ggpairs", false);
  e.graph_plots = id_list(f, "graph_plots", cfg);
  e.mcmc_traj_plots = mcmc_list(f, "mcmc_traj_plots", cfg, true, false);
  e.mcmc_heatmaps = mcmc_list(f, "mcmc_heatmaps", cfg, false, false);
  e.mcmc_autocorr_plots = mcmc_list(f, "mcmc_autocorr_plots", cfg, true, true);
  f.finish();
  if (e.ggally_ggpairs) cfg.warnings.push_back("ggally_ggpairs is accepted but produces no output");
}

}  // namespace

BenchmarkConfig parse_config_text(std::string_view text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  BenchmarkConfig cfg;
  cfg.base_dir = base_dir;
  Fields top(root, "$");
  parse_resources(top.require("resources"), cfg);
  Fields setup(top.require("benchmark_setup"), "$.benchmark_setup");
  parse_tuples(setup.require("data"), setup.at("data"), cfg);
  const json* ev = setup.find("evaluation");
  parse_evaluation(ev ? *ev : json(), setup.at("evaluation"), cfg);
  setup.finish();
  top.finish();
  return cfg;
}

BenchmarkConfig parse_config(const fs::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw ConfigError("$", e.what());
  }
  return parse_config_text(text, fs::absolute(path).parent_path());
}

}  // namespace benchpress::runner

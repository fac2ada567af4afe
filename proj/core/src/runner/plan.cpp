#include "benchpress/runner/plan.hpp"

#include <algorithm>
#include <map>

#include "benchpress/io.hpp"
#include "benchpress/rng.hpp"
#include "benchpress/runner/canonical.hpp"

namespace benchpress::runner {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Stage s) {
  switch (s) {
    case Stage::Graph: return "graph";
    case Stage::Parameters: return "parameters";
    case Stage::Data: return "data";
    case Stage::Learner: return "learner";
    case Stage::Evaluation: return "evaluation";
  }
  return "unknown";
}

std::size_t Plan::count(Stage s) const {
  return static_cast<std::size_t>(std::count_if(jobs.begin(), jobs.end(), [s](const Job& j) { return j.stage() == s; }));
}

namespace {

std::string seed_text(const std::optional<std::int64_t>& seed) {
  return seed ? " seed " + std::to_string(*seed) : std::string();
}

class Builder {
 public:
  explicit Builder(Plan& plan) : plan_(plan) {}

  std::size_t add(json key, std::vector<std::size_t> deps, std::string label, JobPayload payload,
                  const std::optional<std::int64_t>& seed) {
    key["stage"] = to_string(static_cast<Stage>(payload.index()));
    json inputs = json::array();
    for (std::size_t d : deps) inputs.push_back(plan_.jobs[d].hash);
    if (!deps.empty()) key["inputs"] = inputs;
    key = normalize_numbers(key);
    const std::string text = canonical_json(key);
    const std::string hash = hex_hash(text);
    if (auto it = by_hash_.find(hash); it != by_hash_.end()) return it->second;
    Job job;
    job.key = std::move(key);
    job.hash = hash;
    job.stream_seed = derive_seed(text, static_cast<std::uint64_t>(seed.value_or(0)));
    job.deps = std::move(deps);
    job.label = std::move(label);
    job.payload = std::move(payload);
    plan_.jobs.push_back(std::move(job));
    by_hash_.emplace(hash, plan_.jobs.size() - 1);
    return plan_.jobs.size() - 1;
  }

  std::string file_hash(const fs::path& p) {
    auto it = file_hashes_.find(p);
    if (it == file_hashes_.end()) it = file_hashes_.emplace(p, hex_hash(io::read_file(p))).first;
    return it->second;
  }

 private:
  Plan& plan_;
  std::map<std::string, std::size_t> by_hash_;
  std::map<fs::path, std::string> file_hashes_;
};

bool random_graph_module(const std::string& module) { return module != "bandmat"; }

struct Setup {
  json signature;
  std::optional<std::int64_t> seed;
  std::optional<std::size_t> graph_job;
  std::size_t data_job = 0;
};

}  // namespace

Plan make_plan(const BenchmarkConfig& config) {
  Plan plan;
  plan.config = config;
  const BenchmarkConfig& cfg = plan.config;
  Builder b(plan);

  const auto source_sig = [&](const Source& s, const std::map<std::string, ModuleObject>& modules) -> json {
    switch (s.kind) {
      case Source::Kind::None: return nullptr;
      case Source::Kind::Module: {
        const auto& m = modules.at(s.ref);
        return json{{"module", m.module}, {"params", m.params}};
      }
      default: return json{{"file", b.file_hash(s.path)}};
    }
  };

  // Setups in order: tuple, sample size or data file, then seed.
  std::vector<std::vector<Setup>> setups;
  for (const DataTuple& t : cfg.tuples) {
    const json graph_sig = source_sig(t.graph, cfg.graphs);
    const json params_sig = source_sig(t.parameters, cfg.parameters);

    const auto graph_job = [&](const std::optional<std::int64_t>& seed) -> std::optional<std::size_t> {
      if (t.graph.kind == Source::Kind::None) return std::nullopt;
      if (t.graph.kind == Source::Kind::File)
        return b.add(json{{"file", b.file_hash(t.graph.path)}}, {}, "graph " + t.graph.ref,
                     GraphJob{t.graph.ref, "", nullptr, t.graph.path, std::nullopt}, std::nullopt);
      const ModuleObject& m = cfg.graphs.at(t.graph.ref);
      const std::optional<std::int64_t> s = random_graph_module(m.module) ? seed : std::nullopt;
      json key{{"module", m.module}, {"params", m.params}};
      if (s) key["seed"] = *s;
      return b.add(key, {}, "graph " + m.id + seed_text(s), GraphJob{m.id, m.module, m.params, {}, s}, s);
    };

    if (t.data.kind == Source::Kind::Module) {
      const ModuleObject& dm = cfg.data.at(t.data.ref);
      const IidSpec iid = iid_spec(dm.params, dm.json_path);
      for (std::size_t n : iid.sample_sizes) {
        std::vector<Setup> group;
        const json data_params{{"standardized", iid.standardized}, {"sample_size", n}};
        for (std::int64_t seed : t.seeds()) {
          const std::size_t g = *graph_job(seed);
          std::size_t p;
          if (t.parameters.kind == Source::Kind::Module) {
            const ModuleObject& pm = cfg.parameters.at(t.parameters.ref);
            p = b.add(json{{"module", pm.module}, {"params", pm.params}, {"seed", seed}}, {g},
                      "parameters " + pm.id + seed_text(seed), ParamsJob{pm.module, pm.params, {}, g}, seed);
          } else {
            p = b.add(json{{"file", b.file_hash(t.parameters.path)}}, {g}, "parameters " + t.parameters.ref,
                      ParamsJob{"", nullptr, t.parameters.path, g}, std::nullopt);
          }
          const std::size_t d = b.add(json{{"module", dm.module}, {"params", data_params}, {"seed", seed}}, {g, p},
                                      "data " + dm.id + " n=" + std::to_string(n) + seed_text(seed),
                                      DataJob{{}, iid.standardized, n, g, p}, seed);
          group.push_back(Setup{json{{"graph", graph_sig},
                                     {"parameters", params_sig},
                                     {"data", {{"module", dm.module}, {"params", data_params}}}},
                                seed, g, d});
        }
        setups.push_back(std::move(group));
      }
    } else {
      std::vector<fs::path> files;
      if (t.data.kind == Source::Kind::Directory) {
        for (const auto& e : fs::directory_iterator(t.data.path))
          if (e.is_regular_file() && e.path().filename().string().front() != '.') files.push_back(e.path());
        std::sort(files.begin(), files.end());
        if (files.empty()) throw ConfigError(t.json_path + ".data_id", "directory '" + t.data.ref + "' has no files");
      } else {
        files.push_back(t.data.path);
      }
      for (const auto& f : files) {
        const std::optional<std::size_t> g = graph_job(std::nullopt);
        const std::string name = t.data.kind == Source::Kind::Directory ? t.data.ref + "/" + f.filename().string()
                                                                       : t.data.ref;
        const std::string fh = b.file_hash(f);
        const std::size_t d = b.add(json{{"file", fh}}, {}, "data " + name, DataJob{f, false, 0, std::nullopt, std::nullopt},
                                    std::nullopt);
        setups.push_back({Setup{json{{"graph", graph_sig}, {"parameters", nullptr}, {"data", {{"file", fh}}}},
                                std::nullopt, g, d}});
      }
    }
  }

  EvaluationJob eval;
  eval.num_setups = setups.size();
  for (const auto& [id, alg] : cfg.algorithms) {
    std::vector<std::string> varied;
    const std::vector<json> points = expand_grid(alg.params, &varied);
    for (const json& point : points) {
      const std::string param = param_label(point, varied);
      for (std::size_t k = 0; k < setups.size(); ++k) {
        const std::string params_hash = hex_hash(canonical_json(normalize_numbers(
            json{{"algorithm", {{"module", alg.module}, {"params", point}}}, {"setup", setups[k].front().signature}})));
        for (const Setup& s : setups[k]) {
          json key{{"module", alg.module}, {"params", point}, {"seed", nullptr}};
          if (s.seed) key["seed"] = *s.seed;
          std::string label = "learner " + id;
          if (!param.empty()) label += " [" + param + "]";
          const std::size_t l =
              b.add(key, {s.data_job}, label + seed_text(s.seed), LearnerJob{alg.module, point, alg.json_path, s.seed, s.data_job},
                    s.seed);
          eval.runs.push_back(RunRef{id, param, params_hash, s.seed, k, l, s.graph_job});
        }
      }
    }
  }

  const Evaluation& ev = cfg.evaluation;
  if (ev.benchmarks) {
    for (std::size_t k = 0; k < cfg.tuples.size(); ++k)
      if (cfg.tuples[k].graph.kind == Source::Kind::None)
        throw ConfigError("$.benchmark_setup.evaluation.benchmarks",
                          "benchmarks need a true graph, but data setup " + std::to_string(k) + " has graph_id null");
  }
  if (ev.empty()) return plan;

  std::vector<std::size_t> deps;
  for (std::size_t j = 0; j < plan.jobs.size(); ++j) {
    if (plan.jobs[j].stage() == Stage::Graph) eval.graph_jobs.push_back(j);
    if (plan.jobs[j].stage() == Stage::Graph || plan.jobs[j].stage() == Stage::Learner) deps.push_back(j);
  }
  json runs = json::array();
  for (const RunRef& r : eval.runs) {
    json run{{"id", r.id},
             {"param", r.param},
             {"params_hash", r.params_hash},
             {"setup", r.setup},
             {"learner", plan.jobs[r.learner_job].hash},
             {"seed", nullptr},
             {"truth", nullptr}};
    if (r.seed) run["seed"] = *r.seed;
    if (r.graph_job) run["truth"] = plan.jobs[*r.graph_job].hash;
    runs.push_back(std::move(run));
  }
  json graphs = json::array();
  for (std::size_t g : eval.graph_jobs) {
    const auto& gj = std::get<GraphJob>(plan.jobs[g].payload);
    graphs.push_back(json{{"id", gj.id}, {"seed", gj.seed ? json(*gj.seed) : json()}, {"hash", plan.jobs[g].hash}});
  }
  // Dependencies are listed explicitly in "runs" and "graphs"; "inputs" would repeat them.
  json key{{"evaluation", cfg.evaluation_json}, {"runs", runs}, {"graphs", graphs}};
  const std::size_t n_before = plan.jobs.size();
  plan.evaluation = b.add(key, {}, "evaluation", std::move(eval), std::nullopt);
  if (plan.jobs.size() > n_before) plan.jobs.back().deps = std::move(deps);
  return plan;
}

}  // namespace benchpress::runner

#include "benchpress/runner/execute.hpp"

#include <unistd.h>

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <thread>

#include "benchpress/evalreport.hpp"
#include "benchpress/io.hpp"
#include "benchpress/modelgen.hpp"
#include "benchpress/netgen.hpp"
#include "benchpress/plots.hpp"
#include "benchpress/runner/canonical.hpp"

namespace benchpress::runner {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(JobState s) {
  switch (s) {
    case JobState::Pending: return "pending";
    case JobState::Cached: return "cached";
    case JobState::Executed: return "executed";
    case JobState::Failed: return "failed";
    case JobState::Skipped: return "skipped";
  }
  return "unknown";
}

std::size_t RunReport::count(JobState s) const {
  std::size_t n = 0;
  for (const auto& o : outcomes) n += o.state == s;
  return n;
}

std::size_t RunReport::learner_count(learn::Status s) const {
  std::size_t n = 0;
  for (const auto& o : outcomes) n += o.learner_status == s;
  return n;
}

int RunReport::exit_code() const {
  return count(JobState::Failed) > 0 || learner_count(learn::Status::Failed) > 0 ? 1 : 0;
}

std::string RunReport::summary() const {
  const std::size_t n = outcomes.size();
  std::string s;
  if (count(JobState::Cached) == n)
    s = "all " + std::to_string(n) + " jobs cached";
  else
    s = std::to_string(n) + " jobs: " + std::to_string(count(JobState::Executed)) + " executed, " +
        std::to_string(count(JobState::Cached)) + " cached, " + std::to_string(count(JobState::Failed)) + " failed, " +
        std::to_string(count(JobState::Skipped)) + " skipped";
  s += "; learners: " + std::to_string(learner_count(learn::Status::Ok)) + " ok, " +
       std::to_string(learner_count(learn::Status::TimedOut)) + " timed_out, " +
       std::to_string(learner_count(learn::Status::Failed)) + " failed";
  return s;
}

fs::path default_results_dir() {
  if (const char* env = std::getenv("BENCHPRESS_RESULTS"); env && *env) return env;
  return "results";
}

fs::path job_dir(const fs::path& results_dir, const Job& job) {
  return results_dir / to_string(job.stage()) / job.hash;
}

namespace {

std::string key_text(const Job& job) { return canonical_json(job.key) + "\n"; }

json read_json(const fs::path& p) {
  try {
    return json::parse(io::read_file(p));
  } catch (const json::exception& e) {
    throw ParseError(p.string() + ": " + e.what());
  }
}

void write_json(const fs::path& p, const json& j) { io::write_file_atomic(p, j.dump(1) + "\n"); }

// ---------------------------------------------------------------- models on disk

json sem_to_json(const modelgen::GaussianSEM& sem) {
  const Eigen::MatrixXd adj = sem.weights.transpose();
  json rows = json::array();
  for (Eigen::Index i = 0; i < adj.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < adj.cols(); ++j) row.push_back(adj(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"type", "sem"},
              {"labels", sem.graph.labels()},
              {"weights", rows},
              {"noise_mean", sem.noise_mean},
              {"noise_sd", sem.noise_sd}};
}

modelgen::GaussianSEM sem_from_json(const LabeledGraph& g, const json& j) {
  const auto p = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd adj(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index k = 0; k < p; ++k) adj(i, k) = j.at("weights").at(i).at(k).get<double>();
  modelgen::GaussianSEM sem = modelgen::sem_from_weights(g, adj);
  sem.noise_mean = j.at("noise_mean").get<double>();
  sem.noise_sd = j.at("noise_sd").get<double>();
  return sem;
}

json bn_to_json(const modelgen::DiscreteBN& bn) {
  return json{{"type", "bin_bn"},
              {"labels", bn.graph.labels()},
              {"cardinalities", bn.cardinalities},
              {"cpts", bn.cpts}};
}

// ---------------------------------------------------------------- stage executors

struct Context {
  const Plan& plan;
  fs::path results;

  fs::path dir(std::size_t job) const { return job_dir(results, plan.jobs[job]); }
};

void run_graph(const Context&, const Job& job, const fs::path& out) {
  const auto& gj = std::get<GraphJob>(job.payload);
  LabeledGraph g;
  if (gj.module.empty()) {
    g = io::read_adjmat(gj.file);
  } else if (gj.module == "pcalg_randdag") {
    netgen::RandDagSpec spec = rand_dag_spec(gj.params, "$");
    spec.seed = job.stream_seed;
    g = netgen::gen_rand_dag(spec);
    if (!gj.params.value("DAG", true)) g = skeleton(g);
  } else {
    netgen::BandSpec spec = band_spec(gj.module, gj.params, "$");
    spec.seed = job.stream_seed;
    g = gj.module == "bandmat" ? netgen::gen_bandmat(spec) : netgen::gen_rand_bandmat(spec);
  }
  io::write_adjmat(g, out / "adjmat.csv");
}

void run_params(const Context& ctx, const Job& job, const fs::path& out) {
  const auto& pj = std::get<ParamsJob>(job.payload);
  const LabeledGraph g = io::read_adjmat(ctx.dir(pj.graph_job) / "adjmat.csv");
  if (!is_dag(g)) throw InvalidArgument("parameters need a DAG, but the graph has undirected edges or a cycle");
  json model;
  if (pj.module == "bin_bn") {
    const auto [a, b] = param_range(pj.module, pj.params, "$");
    model = bn_to_json(modelgen::sample_bin_bn(g, a, b, job.stream_seed));
  } else {
    modelgen::GaussianSEM sem;
    if (pj.module == "sem_params") {
      const auto [a, b] = param_range(pj.module, pj.params, "$");
      sem = modelgen::sample_sem_params(g, a, b, job.stream_seed);
    } else {
      const io::LabeledMatrix m = io::read_labeled_matrix(pj.file);
      if (m.labels != g.labels())
        throw InvalidArgument(pj.file.string() + ": weight matrix labels differ from the graph labels");
      sem = modelgen::sem_from_weights(g, m.values);
    }
    model = sem_to_json(sem);
    io::write_file_atomic(out / "weights.csv", eval::matrix_csv(g.labels(), sem.weights.transpose()));
  }
  write_json(out / "params.json", model);
}

void run_data(const Context& ctx, const Job& job, const fs::path& out) {
  const auto& dj = std::get<DataJob>(job.payload);
  DataMatrix data;
  if (!dj.file.empty()) {
    data = io::read_data(dj.file);
  } else {
    const LabeledGraph g = io::read_adjmat(ctx.dir(*dj.graph_job) / "adjmat.csv");
    const json model = read_json(ctx.dir(*dj.params_job) / "params.json");
    if (model.at("type") == "bin_bn") {
      modelgen::DiscreteBN bn{g, model.at("cardinalities").get<std::vector<int>>(),
                              model.at("cpts").get<std::vector<std::vector<double>>>()};
      data = modelgen::sample_iid_discrete(bn, dj.sample_size, job.stream_seed);
      if (dj.standardized) throw InvalidArgument("categorical data cannot be standardized");
    } else {
      data = modelgen::sample_iid_gaussian(sem_from_json(g, model), dj.sample_size, dj.standardized, job.stream_seed);
    }
  }
  io::write_data(data, out / "data.csv");
  write_json(out / "data.json", json{{"categorical", data.categorical()}});
}

std::unique_ptr<scores::LocalScore> make_score(const ScoreSpec& s, const DataMatrix& data) {
  if (s.kind == ScoreKind::BDeu) return std::make_unique<scores::BDeuScore>(data, s.iss);
  return std::make_unique<scores::BGeScore>(data, scores::BGeParams{s.am, s.aw});
}

learn::LearnerOutput run_native(const AlgorithmSpec& spec, const DataMatrix& data, std::uint64_t seed,
                                const learn::StopToken& stop) {
  if (const auto* pc = std::get_if<PcSpec>(&spec)) {
    std::unique_ptr<citests::CITest> test;
    if (pc->test == TestKind::FisherZ) {
      if (data.categorical()) throw InvalidArgument("gaussCItest needs continuous data");
      test = std::make_unique<citests::FisherZ>(data);
    } else {
      if (!data.categorical()) throw InvalidArgument("binCItest/disCItest need categorical data");
      test = std::make_unique<citests::G2Test>(data);
    }
    learn::PcResult r = learn::pc(*test, data.labels, pc->options, stop);
    return {std::move(r.graph), static_cast<std::int64_t>(r.ntests)};
  }
  const auto check_score = [&](const ScoreSpec& s) {
    if (s.kind == ScoreKind::BDeu && !data.categorical()) throw InvalidArgument("the bde/bdeu score needs categorical data");
    if (s.kind == ScoreKind::BGe && data.categorical()) throw InvalidArgument("the bge score needs continuous data");
  };
  if (const auto* hc = std::get_if<HcSpec>(&spec)) {
    check_score(hc->score);
    auto score = make_score(hc->score, data);
    return {learn::hill_climb(*score, data.labels, stop).dag, std::nullopt};
  }
  if (const auto* tb = std::get_if<TabuSpec>(&spec)) {
    check_score(tb->score);
    auto score = make_score(tb->score, data);
    return {learn::tabu(*score, data.labels, tb->options, stop).dag, std::nullopt};
  }
  const auto& mc = std::get<McmcSpec>(spec);
  check_score(mc.score);
  auto score = make_score(mc.score, data);
  return {learn::structure_mcmc(*score, data.labels, mc.iterations, seed, stop), std::nullopt};
}

learn::Status run_learner(const Context& ctx, const Job& job, const fs::path& out, std::string& message) {
  const auto& lj = std::get<LearnerJob>(job.payload);
  const fs::path data_dir = ctx.dir(lj.data_job);
  const bool categorical = read_json(data_dir / "data.json").at("categorical").get<bool>();
  const DataMatrix data = io::read_data(data_dir / "data.csv", io::DataReadOptions{categorical});
  const AlgorithmSpec spec = algorithm_spec(lj.module, lj.point, lj.json_path);
  const std::optional<double> timeout = timeout_of(lj.point, lj.json_path);

  learn::LearnerResult r;
  if (const auto* ext = std::get_if<ExternalAlgSpec>(&spec)) {
    if (!ext->command) {
      r.diagnostic = "module '" + lj.module + "' is not built in and no \"command\" is configured";
    } else {
      const learn::ExternalSpec es{*ext->command, ext->params, timeout};
      r = learn::run_external(es, fs::absolute(data_dir / "data.csv"), out,
                              static_cast<std::uint64_t>(lj.seed.value_or(0)));
      if (r.status == learn::Status::Ok) {
        const auto& g = std::get<LabeledGraph>(*r.estimate);
        if (g.labels() != data.labels) {
          r.status = learn::Status::Failed;
          r.estimate.reset();
          r.diagnostic = "plugin adjacency matrix labels differ from the data labels";
        }
      }
    }
    std::error_code ec;
    fs::remove(out / "adjmat.csv", ec);
  } else {
    r = learn::with_timeout(timeout, [&](const learn::StopToken& stop) {
      return run_native(spec, data, job.stream_seed, stop);
    });
  }

  if (r.estimate) {
    if (const auto* g = std::get_if<LabeledGraph>(&*r.estimate))
      io::write_adjmat(*g, out / "adjmat.csv");
    else
      io::write_trajectory(std::get<GraphTrajectory>(*r.estimate), out / "trajectory.csv");
  }
  io::write_file_atomic(out / "time.txt", io::format_number(r.wall_time) + "\n");
  io::write_file_atomic(out / "ntests.txt", (r.ntests ? std::to_string(*r.ntests) : std::string("None")) + "\n");
  write_json(out / "status.json",
             json{{"status", learn::to_string(r.status)}, {"diagnostic", r.diagnostic}, {"labels", data.labels}});
  message = r.diagnostic;
  return r.status;
}

// ---------------------------------------------------------------- evaluation

std::string seed_token(const std::optional<std::int64_t>& seed) {
  return seed ? "seed" + std::to_string(*seed) : std::string("fixed");
}

void run_evaluation(const Context& ctx, const Job& job, const fs::path& out) {
  const auto& ej = std::get<EvaluationJob>(job.payload);
  const Evaluation& ev = ctx.plan.config.evaluation;
  const std::string prefix = ev.benchmarks ? ev.benchmarks->filename_prefix : std::string();
  std::map<std::string, std::string> files;
  std::string notes;

  std::map<std::size_t, LabeledGraph> truths;
  const auto truth = [&](std::size_t g) -> const LabeledGraph& {
    auto it = truths.find(g);
    if (it == truths.end()) it = truths.emplace(g, io::read_adjmat(ctx.dir(g) / "adjmat.csv")).first;
    return it->second;
  };
  std::map<std::size_t, learn::LearnerResult> results;
  const auto result = [&](std::size_t l) -> const learn::LearnerResult& {
    auto it = results.find(l);
    if (it == results.end()) it = results.emplace(l, read_learner_result(ctx.dir(l))).first;
    return it->second;
  };

  if (ev.benchmarks) {
    const auto& be = *ev.benchmarks;
    const std::set<std::string> ids(be.ids.begin(), be.ids.end());
    std::vector<std::vector<eval::RunRecord>> per_setup(ej.num_setups);
    std::vector<eval::RunRecord> all;
    for (const RunRef& r : ej.runs) {
      if (!ids.empty() && !ids.count(r.id)) continue;
      eval::RunRecord rec{r.id, r.params_hash, r.seed, r.param, result(r.learner_job), {}};
      if (r.graph_job) rec.truth = truth(*r.graph_job);
      per_setup[r.setup].push_back(rec);
      all.push_back(std::move(rec));
    }
    files[prefix + "benchmarks.csv"] = eval::benchmarks_csv(eval::benchmarks_table(all, be.graph_type));
    for (std::size_t k = 0; k < ej.num_setups; ++k) {
      const auto rows = eval::benchmarks_table(per_setup[k], be.graph_type);
      const auto points = eval::roc_aggregate(rows);
      const std::string stem = prefix + (ej.num_setups == 1 ? std::string("roc") : "roc_" + std::to_string(k + 1));
      eval::RocPlotOptions opt;
      opt.title = ej.num_setups == 1 ? "ROC" : "ROC, data setup " + std::to_string(k + 1);
      opt.errorbar = be.errorbar;
      opt.errorbarh = be.errorbarh;
      opt.path = be.path;
      opt.text = be.text;
      opt.scatter = be.scatter;
      opt.show_seed = be.show_seed;
      files[stem + ".csv"] = eval::roc_csv(points);
      files[stem + ".svg"] = eval::roc_svg(points, rows, opt);
    }
  }

  if (ev.graph_true_stats || ev.graph_true_plots) {
    std::vector<eval::GraphStats> stats;
    for (std::size_t g : ej.graph_jobs) {
      const auto& gj = std::get<GraphJob>(ctx.plan.jobs[g].payload);
      const LabeledGraph& t = truth(g);
      stats.push_back(eval::graph_stats(gj.id, gj.seed, t));
      if (ev.graph_true_plots) {
        const std::string stem = prefix + "graph_true/" + gj.id + "_" + seed_token(gj.seed);
        const auto p = static_cast<Eigen::Index>(t.size());
        Eigen::MatrixXd m(p, p);
        for (Eigen::Index i = 0; i < p; ++i)
          for (Eigen::Index j = 0; j < p; ++j) m(i, j) = t.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        files[stem + ".csv"] = io::format_adjmat(t);
        files[stem + ".svg"] = eval::heatmap_svg(t.labels(), m, gj.id + " " + seed_token(gj.seed));
      }
    }
    if (ev.graph_true_stats) files[prefix + "graph_true_stats.csv"] = eval::graph_stats_csv(stats);
  }

  for (const std::string& id : ev.graph_plots) {
    for (const RunRef& r : ej.runs) {
      if (r.id != id) continue;
      const auto& res = result(r.learner_job);
      if (res.status != learn::Status::Ok) continue;
      LabeledGraph g;
      if (const auto* lg = std::get_if<LabeledGraph>(&*res.estimate))
        g = *lg;
      else {
        const auto& traj = std::get<GraphTrajectory>(*res.estimate);
        g = graph_at(traj, traj.last_index());
      }
      const auto p = static_cast<Eigen::Index>(g.size());
      Eigen::MatrixXd m(p, p);
      for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) m(i, j) = g.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      const std::string stem = prefix + "graph_plots/" + id + "/" + r.params_hash + "_" + seed_token(r.seed);
      files[stem + ".csv"] = io::format_adjmat(g);
      files[stem + ".svg"] = eval::heatmap_svg(g.labels(), m, id + " " + r.param + " " + seed_token(r.seed));
    }
  }

  const auto for_mcmc = [&](const McmcEval& e, const std::function<void(const RunRef&, const GraphTrajectory&)>& fn) {
    for (const RunRef& r : ej.runs) {
      if (r.id != e.id) continue;
      const auto& res = result(r.learner_job);
      if (res.status != learn::Status::Ok) continue;
      const auto& traj = std::get<GraphTrajectory>(*res.estimate);
      try {
        fn(r, traj);
      } catch (const InvalidArgument& ex) {
        notes += e.id + " " + r.params_hash + " " + seed_token(r.seed) + ": " + ex.what() + "\n";
      }
    }
  };
  const auto fname = [](eval::Functional f) { return f == eval::Functional::Size ? "size" : "score"; };
  for (const McmcEval& e : ev.mcmc_traj_plots)
    for_mcmc(e, [&](const RunRef& r, const GraphTrajectory& traj) {
      const auto series = eval::traj_functional(traj, e.functional, e.burn_in, e.thinning);
      const std::string stem = prefix + "mcmc_traj/" + e.id + "/" + r.params_hash + "_" + seed_token(r.seed);
      files[stem + ".csv"] = eval::series_csv(series);
      files[stem + ".svg"] = eval::series_svg(series, e.id + " " + seed_token(r.seed), fname(e.functional));
    });
  for (const McmcEval& e : ev.mcmc_heatmaps)
    for_mcmc(e, [&](const RunRef& r, const GraphTrajectory& traj) {
      const Eigen::MatrixXd m = eval::edge_posterior(traj, e.burn_in);
      const std::string stem = prefix + "mcmc_heatmap/" + e.id + "/" + r.params_hash + "_" + seed_token(r.seed);
      files[stem + ".csv"] = eval::matrix_csv(traj.labels, m);
      files[stem + ".svg"] = eval::heatmap_svg(traj.labels, m, e.id + " edge posterior " + seed_token(r.seed));
    });
  for (const McmcEval& e : ev.mcmc_autocorr_plots)
    for_mcmc(e, [&](const RunRef& r, const GraphTrajectory& traj) {
      std::vector<double> values;
      for (const auto& s : eval::traj_functional(traj, e.functional, e.burn_in, e.thinning)) values.push_back(s.value);
      const auto acf = eval::autocorr(values, e.lags);
      const std::string stem = prefix + "mcmc_autocorr/" + e.id + "/" + r.params_hash + "_" + seed_token(r.seed);
      files[stem + ".csv"] = eval::autocorr_csv(acf);
      files[stem + ".svg"] = eval::autocorr_svg(acf, e.id + " " + fname(e.functional) + " " + seed_token(r.seed));
    });

  if (!notes.empty()) files[prefix + "notes.txt"] = notes;
  for (const auto& [rel, content] : files) {
    const fs::path p = out / rel;
    fs::create_directories(p.parent_path());
    io::write_file_atomic(p, content);
  }
}

// ---------------------------------------------------------------- caching and commit

bool is_cached(const fs::path& dir, const Job& job) {
  std::error_code ec;
  if (!fs::is_regular_file(dir / "key.json", ec)) return false;
  try {
    if (io::read_file(dir / "key.json") != key_text(job)) return false;
    if (job.stage() == Stage::Learner)
      return read_json(dir / "status.json").at("status").get<std::string>() != "failed";
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

JobOutcome run_one(const Context& ctx, std::size_t idx) {
  static std::atomic<unsigned long> counter{0};
  const Job& job = ctx.plan.jobs[idx];
  const fs::path final_dir = ctx.dir(idx);
  const fs::path tmp = final_dir.parent_path() /
                       (".tmp-" + job.hash + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  JobOutcome o;
  try {
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    switch (job.stage()) {
      case Stage::Graph: run_graph(ctx, job, tmp); break;
      case Stage::Parameters: run_params(ctx, job, tmp); break;
      case Stage::Data: run_data(ctx, job, tmp); break;
      case Stage::Learner: o.learner_status = run_learner(ctx, job, tmp, o.message); break;
      case Stage::Evaluation: run_evaluation(ctx, job, tmp); break;
    }
    io::write_file_atomic(tmp / "key.json", key_text(job));
    fs::remove_all(final_dir);
    fs::rename(tmp, final_dir);
    o.state = JobState::Executed;
  } catch (const std::exception& e) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    o.state = JobState::Failed;
    o.learner_status.reset();
    o.message = e.what();
  }
  return o;
}

void copy_outputs(const fs::path& from, const fs::path& to) {
  for (const auto& e : fs::recursive_directory_iterator(from)) {
    if (!e.is_regular_file() || e.path().filename() == "key.json") continue;
    const fs::path dest = to / fs::relative(e.path(), from);
    fs::create_directories(dest.parent_path());
    io::write_file_atomic(dest, io::read_file(e.path()));
  }
}

/// Central FIFO served by a fixed set of workers; completions flow back to the scheduler.
class Pool {
 public:
  Pool(std::size_t n, std::function<JobOutcome(std::size_t)> work) : work_(std::move(work)) {
    for (std::size_t k = 0; k < n; ++k) threads_.emplace_back([this] { loop(); });
  }
  ~Pool() {
    {
      std::lock_guard lock(m_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  void submit(std::size_t job) {
    {
      std::lock_guard lock(m_);
      queue_.push_back(job);
    }
    cv_.notify_one();
  }

  std::pair<std::size_t, JobOutcome> wait() {
    std::unique_lock lock(m_);
    done_cv_.wait(lock, [this] { return !done_.empty(); });
    auto r = std::move(done_.front());
    done_.pop_front();
    return r;
  }

 private:
  void loop() {
    for (;;) {
      std::size_t job;
      {
        std::unique_lock lock(m_);
        cv_.wait(lock, [this] { return stop_ || !queue_.empty(); });
        if (stop_ && queue_.empty()) return;
        job = queue_.front();
        queue_.pop_front();
      }
      JobOutcome o = work_(job);
      {
        std::lock_guard lock(m_);
        done_.emplace_back(job, std::move(o));
      }
      done_cv_.notify_one();
    }
  }

  std::function<JobOutcome(std::size_t)> work_;
  std::vector<std::thread> threads_;
  std::mutex m_;
  std::condition_variable cv_, done_cv_;
  std::deque<std::size_t> queue_;
  std::deque<std::pair<std::size_t, JobOutcome>> done_;
  bool stop_ = false;
};

}  // namespace

learn::LearnerResult read_learner_result(const fs::path& dir) {
  const json status = read_json(dir / "status.json");
  learn::LearnerResult r;
  r.status = learn::status_from_string(status.at("status").get<std::string>());
  r.diagnostic = status.value("diagnostic", "");
  const auto labels = status.at("labels").get<std::vector<std::string>>();
  const std::string time = io::read_file(dir / "time.txt");
  const auto t = io::parse_number(time.substr(0, time.find('\n')));
  if (!t) throw ParseError((dir / "time.txt").string() + ": not a number");
  r.wall_time = *t;
  std::string nt = io::read_file(dir / "ntests.txt");
  nt = nt.substr(0, nt.find('\n'));
  if (nt != "None") {
    const auto n = io::parse_number(nt);
    if (!n) throw ParseError((dir / "ntests.txt").string() + ": not a count");
    r.ntests = static_cast<std::int64_t>(*n);
  }
  if (r.status == learn::Status::Ok) {
    if (fs::exists(dir / "adjmat.csv"))
      r.estimate = io::read_adjmat(dir / "adjmat.csv");
    else
      r.estimate = io::read_trajectory(dir / "trajectory.csv", labels);
  }
  return r;
}

RunReport execute(const Plan& plan, const ExecuteOptions& options) {
  if (options.cores < 1) throw InvalidArgument("cores must be at least 1");
  const Context ctx{plan, options.results_dir};
  const std::size_t n = plan.jobs.size();
  RunReport report;
  report.outcomes.resize(n);
  const auto log = [&](const std::string& s) {
    if (options.log) options.log(s);
  };

  if (options.report_only) {
    if (!plan.evaluation) throw InvalidArgument("the configuration requests no evaluation");
    std::string missing;
    for (std::size_t j = 0; j < n; ++j)
      if (plan.jobs[j].stage() != Stage::Evaluation && !is_cached(ctx.dir(j), plan.jobs[j]))
        missing += "\n  " + plan.jobs[j].label;
    if (!missing.empty()) throw Error("report needs cached results; run first. Missing:" + missing);
  }

  std::vector<std::vector<std::size_t>> dependents(n);
  std::vector<std::size_t> waiting(n);
  for (std::size_t j = 0; j < n; ++j) {
    waiting[j] = plan.jobs[j].deps.size();
    for (std::size_t d : plan.jobs[j].deps) dependents[d].push_back(j);
  }

  Pool pool(std::min(options.cores, std::max<std::size_t>(n, 1)), [&ctx](std::size_t j) { return run_one(ctx, j); });
  std::size_t in_flight = 0, finished = 0;
  std::deque<std::size_t> ready;
  for (std::size_t j = 0; j < n; ++j)
    if (waiting[j] == 0) ready.push_back(j);

  const auto progress = [&](std::size_t j) {
    const JobOutcome& o = report.outcomes[j];
    std::string line = "[" + std::to_string(finished) + "/" + std::to_string(n) + "] " + to_string(o.state) + " " +
                       plan.jobs[j].label;
    if (o.learner_status) line += " (" + learn::to_string(*o.learner_status) + ")";
    if (!o.message.empty() && (o.state == JobState::Failed || o.learner_status != learn::Status::Ok))
      line += ": " + o.message;
    log(line);
  };

  std::function<void(std::size_t)> settle = [&](std::size_t j) {
    ++finished;
    progress(j);
    const bool ok = report.outcomes[j].state == JobState::Cached || report.outcomes[j].state == JobState::Executed;
    for (std::size_t d : dependents[j]) {
      if (!ok && report.outcomes[d].state == JobState::Pending) {
        report.outcomes[d].state = JobState::Skipped;
        report.outcomes[d].message = "dependency failed: " + plan.jobs[j].label;
      }
      if (--waiting[d] == 0) {
        if (report.outcomes[d].state == JobState::Skipped)
          settle(d);
        else
          ready.push_back(d);
      }
    }
  };

  while (finished < n) {
    while (!ready.empty()) {
      const std::size_t j = ready.front();
      ready.pop_front();
      for (std::size_t d : plan.jobs[j].deps) {
        const JobState s = report.outcomes[d].state;
        if (s != JobState::Cached && s != JobState::Executed)
          throw std::logic_error("job dispatched before its dependency: " + plan.jobs[j].label);
      }
      const bool force = options.force || (options.report_only && plan.jobs[j].stage() == Stage::Evaluation);
      if (!force && is_cached(ctx.dir(j), plan.jobs[j])) {
        auto& o = report.outcomes[j];
        o.state = JobState::Cached;
        if (plan.jobs[j].stage() == Stage::Learner)
          o.learner_status = learn::status_from_string(read_json(ctx.dir(j) / "status.json").at("status").get<std::string>());
        settle(j);
        continue;
      }
      pool.submit(j);
      ++in_flight;
    }
    if (finished == n) break;
    auto [j, o] = pool.wait();
    --in_flight;
    report.outcomes[j] = std::move(o);
    settle(j);
  }

  if (plan.evaluation) {
    const JobState s = report.outcomes[*plan.evaluation].state;
    if (s == JobState::Cached || s == JobState::Executed)
      copy_outputs(ctx.dir(*plan.evaluation), options.results_dir / "output");
  }
  return report;
}

}  // namespace benchpress::runner

#include "moseg/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "moseg/errors.hpp"
#include "moseg/io.hpp"
#include "moseg/metrics.hpp"
#include "moseg/rng.hpp"
#include "moseg/spectral.hpp"

namespace moseg {

namespace {

constexpr std::uint64_t kInstanceStream = 30;
constexpr std::uint64_t kSolverStream = 31;

using Clock = std::chrono::steady_clock;

struct Cell {
  SyntheticConfig config;   // synthetic mode
  std::string problem_file;  // file mode
  std::string config_id;
  double noise = 0.0;
  int instance = 0;
  std::uint64_t instance_seed = 0;
};

std::string hex_id(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

MotionProblem materialize(const Cell& cell) {
  if (!cell.problem_file.empty()) return load_problem(cell.problem_file);
  SyntheticConfig cfg = cell.config;
  cfg.noise = cell.noise;
  cfg.seed = cell.instance_seed;
  MotionProblem problem = generate_instance(cfg);
  problem.id = cell.config_id + "-" + std::to_string(cell.instance);
  return problem;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MOSEG_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

bool is_sa(SweepSolver s) { return s == SweepSolver::v1_sa || s == SweepSolver::v2_sa; }
bool is_brute(SweepSolver s) { return s == SweepSolver::v1_brute || s == SweepSolver::v2_brute; }
bool is_v2(SweepSolver s) { return s == SweepSolver::v2_sa || s == SweepSolver::v2_brute; }

std::string field(double v) {
  if (v < 0.0) return "";
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(SweepSolver s) {
  switch (s) {
    case SweepSolver::v1_sa: return "v1-sa";
    case SweepSolver::v2_sa: return "v2-sa";
    case SweepSolver::v1_brute: return "v1-brute";
    case SweepSolver::v2_brute: return "v2-brute";
    case SweepSolver::synch: return "synch";
    case SweepSolver::random: return "random";
  }
  return "?";
}

SweepSolver sweep_solver_from_string(const std::string& s) {
  if (s == "v1-sa") return SweepSolver::v1_sa;
  if (s == "v2-sa") return SweepSolver::v2_sa;
  if (s == "v1-brute") return SweepSolver::v1_brute;
  if (s == "v2-brute") return SweepSolver::v2_brute;
  if (s == "synch" || s == "synch-like") return SweepSolver::synch;
  if (s == "random") return SweepSolver::random;
  throw DataError("unknown sweep solver '" + s + "'");
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  if (config.solvers.empty()) throw DataError("sweep: no solvers selected");
  if (config.instances < 1) throw DataError("sweep: instances must be >= 1");

  // Canonical cell order: config, noise, instance.
  std::vector<Cell> cells;
  if (!config.configs.empty()) {
    if (config.noise_grid.empty()) throw DataError("sweep: empty noise grid");
    for (std::size_t ci = 0; ci < config.configs.size(); ++ci) {
      const std::string id = hex_id(config.configs[ci].config_hash());
      for (std::size_t ni = 0; ni < config.noise_grid.size(); ++ni) {
        for (int t = 0; t < config.instances; ++t) {
          Cell cell;
          cell.config = config.configs[ci];
          cell.config_id = id;
          cell.noise = config.noise_grid[ni];
          cell.instance = t;
          cell.instance_seed = derive_seed(config.master_seed, kInstanceStream, ci,
                                           (ni << 32) | static_cast<std::uint64_t>(t));
          cells.push_back(std::move(cell));
        }
      }
    }
  } else if (!config.problem_files.empty()) {
    for (std::size_t fi = 0; fi < config.problem_files.size(); ++fi) {
      Cell cell;
      cell.problem_file = config.problem_files[fi];
      cell.config_id = std::filesystem::path(config.problem_files[fi]).stem().string();
      cell.noise = -1.0;  // unknown for files
      cell.instance = 0;
      cell.instance_seed = derive_seed(config.master_seed, kInstanceStream, fi, 0);
      cells.push_back(std::move(cell));
    }
  } else {
    throw DataError("sweep: neither synthetic configs nor problem files given");
  }

  const bool artifacts = !config.artifacts_dir.empty();
  if (artifacts) {
    std::filesystem::create_directories(std::filesystem::path(config.artifacts_dir) / "instances");
    std::filesystem::create_directories(std::filesystem::path(config.artifacts_dir) / "samples");
  }

  const std::size_t solver_count = config.solvers.size();
  std::vector<SweepRow> rows(cells.size() * solver_count);

  auto run_one = [&](std::size_t job) {
    const Cell& cell = cells[job / solver_count];
    const std::size_t si = job % solver_count;
    const SweepSolver solver = config.solvers[si];

    SweepRow& row = rows[job];
    row.config_id = cell.config_id;
    row.noise = cell.noise;
    row.instance = cell.instance;
    row.solver = to_string(solver);
    row.seed = derive_seed(config.master_seed, kSolverStream, job, 0);

    try {
      const MotionProblem problem = materialize(cell);
      row.n = problem.n;
      row.d = problem.d;
      row.k = problem.variable_count();

      std::string artifact_stem;
      if (artifacts) {
        artifact_stem = cell.config_id + "-" + num(std::max(cell.noise, 0.0)) + "-" +
                        std::to_string(cell.instance);
        if (si == 0)
          save_problem(problem, std::filesystem::path(config.artifacts_dir) / "instances" /
                                    (artifact_stem + ".json"));
      }

      BitVector y_gt;
      std::vector<std::vector<int>> counts;
      if (problem.ground_truth) {
        y_gt = labels_to_bits(*problem.ground_truth, problem.d);
        counts = all_motion_counts(*problem.ground_truth, problem.d);
      }

      const auto start = Clock::now();
      BitVector y;
      SampleSet samples;
      bool sampled = true;

      if (solver == SweepSolver::synch) {
        SpectralParams params;
        params.restarts = config.spectral_restarts;
        params.seed = row.seed;
        const Labeling labeling = spectral_segment(problem, params);
        y = labels_to_bits(labeling, problem.d);
        row.energy = static_cast<double>(consistency_error(problem, labeling));
        sampled = false;
      } else {
        QuboInstance qubo;
        if (is_v2(solver)) {
          if (counts.empty())
            throw DataError("v2 solver needs ground-truth motion counts");
          qubo = build_v2(problem, config.lambda2, config.lambda3, counts);
        } else {
          qubo = build_v1(problem, config.lambda1, config.fill);
        }
        if (is_sa(solver)) {
          AnnealParams params = config.anneal;
          params.seed = row.seed;
          samples = simulated_annealing(qubo, params);
        } else if (is_brute(solver)) {
          samples = brute_force(qubo, 1024);
        } else {
          samples = random_sampler(qubo, config.random_reads, row.seed);
        }
        const Sample& best = best_sample(samples);
        y = best.y;
        row.energy = best.energy;
        row.success_probability = success_probability(samples, best.energy);
      }
      row.wall_time_ms =
          std::chrono::duration<double, std::milli>(Clock::now() - start).count();

      const ViolationSummary v = violations(y, problem, nullptr);
      row.row_violations = v.row_violations;
      row.feasible = v.row_violations == 0;
      if (!y_gt.empty()) {
        row.accuracy_raw = accuracy(y, y_gt, problem.d, problem.total_points());
        row.accuracy_aligned =
            aligned_accuracy(y, y_gt, problem.d, problem.total_points()).value;
      }

      if (artifacts && sampled)
        save_samples(samples, std::filesystem::path(config.artifacts_dir) / "samples" /
                                  (artifact_stem + "-" + row.solver + ".json"));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  const int workers = resolve_workers(config.workers);
  const std::size_t jobs = rows.size();
  if (workers <= 1) {
    for (std::size_t job = 0; job < jobs; ++job) run_one(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t job = next.fetch_add(1); job < jobs; job = next.fetch_add(1))
          run_one(job);
      });
    for (auto& t : pool) t.join();
  }
  return rows;
}

void write_rows_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "config,n,d,k,noise,instance,solver,seed,accuracy_raw,accuracy_aligned,"
         "energy,feasible,row_violations,success_probability,wall_time_ms,error\n";
  for (const auto& r : rows) {
    out << r.config_id << ',' << r.n << ',' << r.d << ',' << r.k << ','
        << field(r.noise) << ',' << r.instance << ',' << r.solver << ',' << r.seed << ','
        << field(r.accuracy_raw) << ',' << field(r.accuracy_aligned) << ','
        << (r.error.empty() ? num(r.energy) : std::string()) << ','
        << (r.error.empty() ? (r.feasible ? "1" : "0") : "") << ','
        << (r.error.empty() ? std::to_string(r.row_violations) : std::string()) << ','
        << field(r.success_probability) << ',' << num(r.wall_time_ms) << ','
        << r.error << '\n';
  }
}

std::vector<SweepSummaryRow> summarize(const std::vector<SweepRow>& rows) {
  // Key preserves first-seen order for deterministic output.
  std::vector<SweepSummaryRow> out;
  std::map<std::string, std::size_t> index;
  std::map<std::size_t, std::vector<const SweepRow*>> groups;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    const std::string key = r.config_id + "|" + num(r.noise) + "|" + r.solver;
    auto [it, inserted] = index.try_emplace(key, out.size());
    if (inserted) {
      SweepSummaryRow s;
      s.config_id = r.config_id;
      s.n = r.n;
      s.d = r.d;
      s.k = r.k;
      s.noise = r.noise;
      s.solver = r.solver;
      out.push_back(std::move(s));
    }
    groups[it->second].push_back(&r);
  }

  for (auto& [idx, members] : groups) {
    SweepSummaryRow& s = out[idx];
    s.count = static_cast<int>(members.size());
    auto mean_of = [&](auto extract) {
      double total = 0.0;
      int n = 0;
      for (const SweepRow* r : members) {
        const double v = extract(*r);
        if (v >= 0.0) {
          total += v;
          ++n;
        }
      }
      return n > 0 ? total / n : -1.0;
    };
    auto std_of = [&](auto extract, double mean) {
      if (mean < 0.0) return -1.0;
      double total = 0.0;
      int n = 0;
      for (const SweepRow* r : members) {
        const double v = extract(*r);
        if (v >= 0.0) {
          total += (v - mean) * (v - mean);
          ++n;
        }
      }
      return n > 0 ? std::sqrt(total / n) : -1.0;
    };
    s.acc_raw_mean = mean_of([](const SweepRow& r) { return r.accuracy_raw; });
    s.acc_raw_std = std_of([](const SweepRow& r) { return r.accuracy_raw; }, s.acc_raw_mean);
    s.acc_aligned_mean = mean_of([](const SweepRow& r) { return r.accuracy_aligned; });
    s.acc_aligned_std =
        std_of([](const SweepRow& r) { return r.accuracy_aligned; }, s.acc_aligned_mean);
    double energy_total = 0.0;
    int feasible_total = 0;
    for (const SweepRow* r : members) {
      energy_total += r->energy;
      feasible_total += r->feasible ? 1 : 0;
    }
    s.energy_mean = energy_total / members.size();
    s.success_probability_mean =
        mean_of([](const SweepRow& r) { return r.success_probability; });
    s.feasible_rate = static_cast<double>(feasible_total) / members.size();
  }
  return out;
}

void write_summary_csv(const std::vector<SweepSummaryRow>& rows, std::ostream& out) {
  out << "config,n,d,k,noise,solver,count,acc_raw_mean,acc_raw_std,acc_aligned_mean,"
         "acc_aligned_std,energy_mean,success_probability_mean,feasible_rate\n";
  for (const auto& r : rows) {
    out << r.config_id << ',' << r.n << ',' << r.d << ',' << r.k << ',' << field(r.noise)
        << ',' << r.solver << ',' << r.count << ',' << field(r.acc_raw_mean) << ','
        << field(r.acc_raw_std) << ',' << field(r.acc_aligned_mean) << ','
        << field(r.acc_aligned_std) << ',' << num(r.energy_mean) << ','
        << field(r.success_probability_mean) << ',' << num(r.feasible_rate) << '\n';
  }
}

}  // namespace moseg

// moseg: motion segmentation as binary-matrix synchronization, compiled to
// QUBO form and solved classically. Subcommands: generate, build, solve,
// eval, sweep. Exit codes: 0 ok, 2 usage, 3 data error, 4 size guard.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "moseg/errors.hpp"
#include "moseg/io.hpp"
#include "moseg/metrics.hpp"
#include "moseg/problem.hpp"
#include "moseg/qubo.hpp"
#include "moseg/rng.hpp"
#include "moseg/samplers.hpp"
#include "moseg/spectral.hpp"
#include "moseg/sweep.hpp"
#include "moseg/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitGuard = 4;

// Synthetic-protocol weights; file-driven runs default to the dataset weights.
constexpr double kSyntheticLambda1 = 14.0;
constexpr double kSyntheticLambda2 = 27.5;
constexpr double kSyntheticLambda3 = 3.2;
constexpr double kDatasetLambda1 = 10.0;
constexpr double kDatasetLambda2 = 10.0;
constexpr double kDatasetLambda3 = 4.0;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

std::vector<double> parse_noise_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    // start:stop:step
    double start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::stringstream ss(text);
    ss >> start >> c1 >> stop >> c2 >> step;
    if (c1 != ':' || c2 != ':' || step <= 0)
      throw moseg::DataError("bad noise grid '" + text + "' (want start:stop:step)");
    for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

// "8,8" broadcast to all images, or "8,8;8,9;8,8" one group per image.
std::vector<std::vector<int>> parse_motion_counts(const std::string& text) {
  std::vector<std::vector<int>> out;
  std::stringstream ss(text);
  std::string group;
  while (std::getline(ss, group, ';'))
    if (!group.empty()) out.push_back(parse_int_list(group));
  return out;
}

std::vector<std::vector<int>> counts_from_problem(const moseg::MotionProblem& problem) {
  if (!problem.ground_truth)
    throw moseg::DataError(
        "v2 needs per-image motion counts; the problem has no ground truth to take "
        "them from (pass --counts)");
  return moseg::all_motion_counts(*problem.ground_truth, problem.d);
}

struct LambdaFlags {
  double lambda1 = -1.0;
  double lambda2 = -1.0;
  double lambda3 = -1.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--lambda1", lambda1, "row-constraint weight (v1)");
    cmd->add_option("--lambda2", lambda2, "row-constraint weight (v2)");
    cmd->add_option("--lambda3", lambda3, "count-constraint weight (v2)");
  }
  void resolve(bool synthetic) {
    if (lambda1 < 0) lambda1 = synthetic ? kSyntheticLambda1 : kDatasetLambda1;
    if (lambda2 < 0) lambda2 = synthetic ? kSyntheticLambda2 : kDatasetLambda2;
    if (lambda3 < 0) lambda3 = synthetic ? kSyntheticLambda3 : kDatasetLambda3;
  }
};

moseg::QuboInstance build_variant(const moseg::MotionProblem& problem,
                                  const std::string& variant, moseg::FillMode fill,
                                  const LambdaFlags& lambdas,
                                  const std::string& counts_flag) {
  if (moseg::variant_from_string(variant) == moseg::QuboVariant::v1)
    return moseg::build_v1(problem, lambdas.lambda1, fill);
  auto counts = counts_flag.empty() ? counts_from_problem(problem)
                                    : parse_motion_counts(counts_flag);
  if (counts.size() == 1) counts.resize(problem.n, counts[0]);
  return moseg::build_v2(problem, lambdas.lambda2, lambdas.lambda3, counts);
}

int cmd_generate(const moseg::SyntheticConfig& base, int instances,
                 const std::string& out_dir, bool sparse) {
  std::filesystem::create_directories(out_dir);
  const std::string id = [&] {
    std::ostringstream os;
    os << std::hex << base.config_hash();
    return os.str();
  }();
  std::cout << "config " << id << ": n=" << base.n << " d=" << base.d
            << " noise=" << base.noise << " instances=" << instances << "\n";
  for (int t = 0; t < instances; ++t) {
    moseg::SyntheticConfig cfg = base;
    cfg.seed = moseg::derive_seed(base.seed, 40, static_cast<std::uint64_t>(t));
    moseg::MotionProblem problem = moseg::generate_instance(cfg);
    problem.id = id + "-" + std::to_string(t);
    const auto path =
        std::filesystem::path(out_dir) / (id + "-" + std::to_string(t) + ".json");
    moseg::save_problem(problem, path, sparse);
    std::cout << path.string() << "  k=" << problem.variable_count() << "\n";
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"motion segmentation via QUBO synchronization"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write synthetic problem instances");
  moseg::SyntheticConfig gen_cfg;
  int gen_instances = 1;
  std::string gen_out = ".";
  std::string gen_point_counts, gen_motion_counts, gen_noise_side = "both";
  bool gen_sparse = false;
  std::uint64_t gen_seed = 0;
  gen->add_option("--n", gen_cfg.n, "image count")->default_val(3);
  gen->add_option("--d", gen_cfg.d, "motion count")->default_val(2);
  gen->add_option("--points", gen_cfg.points_per_image, "points per image")->default_val(16);
  gen->add_option("--point-counts", gen_point_counts, "explicit per-image point counts");
  gen->add_option("--motion-counts", gen_motion_counts,
                  "exact per-motion counts, e.g. '8,8' or '8,8;8,9'");
  gen->add_option("--noise", gen_cfg.noise, "label-switch fraction per edge")->default_val(0.0);
  gen->add_option("--noise-side", gen_noise_side, "both|one");
  gen->add_option("--instances", gen_instances, "instances to generate")->default_val(1);
  gen->add_option("--seed", gen_seed, "master seed")->default_val(0);
  gen->add_option("--out", gen_out, "output directory")->default_val(".");
  gen->add_flag("--sparse", gen_sparse, "write blocks as z_ones pairs");

  // build
  auto* build = app.add_subcommand("build", "compile a problem file into a QUBO file");
  std::string build_problem, build_out = "qubo.json";
  std::string build_variant_name = "v1", build_fill = "zeroed", build_counts;
  LambdaFlags build_lambdas;
  build->add_option("--problem", build_problem, "problem JSON file")->required();
  build->add_option("--variant", build_variant_name, "v1|v2");
  build->add_option("--fill", build_fill, "zeroed|literal (v1)");
  build->add_option("--counts", build_counts, "v2 motion counts override");
  build_lambdas.add_to(build);
  build->add_option("--out", build_out, "output QUBO file");

  // solve
  auto* solve = app.add_subcommand("solve", "build and solve one problem file");
  std::string solve_problem, solve_out, solve_report, solve_labels;
  std::string solve_variant = "v1", solve_fill = "zeroed", solve_counts;
  std::string solve_solver = "sa";
  LambdaFlags solve_lambdas;
  long long solve_reads = 1000;
  int solve_sweeps = 64;
  long long solve_keep = 0;
  std::uint64_t solve_seed = 0;
  bool solve_eval = false;
  solve->add_option("--problem", solve_problem, "problem JSON file")->required();
  solve->add_option("--variant", solve_variant, "v1|v2");
  solve->add_option("--fill", solve_fill, "zeroed|literal (v1)");
  solve->add_option("--counts", solve_counts, "v2 motion counts override");
  solve->add_option("--solver", solve_solver, "sa|brute|random|synch");
  solve->add_option("--reads", solve_reads, "samples to draw");
  solve->add_option("--sweeps", solve_sweeps, "annealing sweeps per read");
  solve->add_option("--keep", solve_keep, "truncate brute-force set to best N (0 = all)");
  solve->add_option("--seed", solve_seed, "solver seed");
  solve_lambdas.add_to(solve);
  solve->add_flag("--eval", solve_eval, "require ground truth and write a report");
  solve->add_option("--out", solve_out, "sample set output file");
  solve->add_option("--report", solve_report, "evaluation report output file");
  solve->add_option("--labels", solve_labels, "write decoded labeling JSON here");

  // eval
  auto* eval = app.add_subcommand("eval", "score a sample set against ground truth");
  std::string eval_problem, eval_samples, eval_out, eval_variant = "v1", eval_counts;
  eval->add_option("--problem", eval_problem, "problem JSON file")->required();
  eval->add_option("--samples", eval_samples, "sample set JSON file")->required();
  eval->add_option("--variant", eval_variant, "v1|v2 (v2 adds count diagnostics)");
  eval->add_option("--counts", eval_counts, "v2 motion counts override");
  eval->add_option("--out", eval_out, "report output file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "multi-instance evaluation matrix");
  std::string sweep_n = "3", sweep_noise = "0", sweep_solvers = "v1-sa,v2-sa";
  std::string sweep_motion_counts, sweep_point_counts, sweep_out = "sweep-out";
  std::vector<std::string> sweep_problems;
  int sweep_d = 2, sweep_points = 16, sweep_instances = 20, sweep_workers = 0;
  long long sweep_reads = 1000;
  int sweep_sweeps = 64;
  std::string sweep_fill = "zeroed";
  LambdaFlags sweep_lambdas;
  std::uint64_t sweep_seed = 0;
  bool sweep_no_artifacts = false;
  sweep->add_option("--n", sweep_n, "image counts, e.g. 3,4");
  sweep->add_option("--d", sweep_d, "motion count");
  sweep->add_option("--points", sweep_points, "points per image");
  sweep->add_option("--point-counts", sweep_point_counts, "explicit per-image point counts");
  sweep->add_option("--motion-counts", sweep_motion_counts, "exact per-motion counts");
  sweep->add_option("--noise-grid", sweep_noise, "comma list or start:stop:step");
  sweep->add_option("--instances", sweep_instances, "instances per cell");
  sweep->add_option("--problems", sweep_problems, "problem files instead of synthetic configs");
  sweep->add_option("--solvers", sweep_solvers,
                    "comma list of v1-sa,v2-sa,v1-brute,v2-brute,synch,random");
  sweep->add_option("--reads", sweep_reads, "sa/random reads");
  sweep->add_option("--sweeps", sweep_sweeps, "sa sweeps per read");
  sweep->add_option("--fill", sweep_fill, "zeroed|literal (v1)");
  sweep_lambdas.add_to(sweep);
  sweep->add_option("--seed", sweep_seed, "master seed");
  sweep->add_option("--workers", sweep_workers, "worker threads (or MOSEG_WORKERS)");
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_flag("--no-artifacts", sweep_no_artifacts, "skip per-row problem/sample files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (gen->parsed()) {
    gen_cfg.seed = gen_seed;
    gen_cfg.noise_side = moseg::noise_side_from_string(gen_noise_side);
    if (!gen_point_counts.empty()) gen_cfg.point_counts = parse_int_list(gen_point_counts);
    if (!gen_motion_counts.empty())
      gen_cfg.motion_counts = parse_motion_counts(gen_motion_counts);
    return cmd_generate(gen_cfg, gen_instances, gen_out, gen_sparse);
  }

  if (build->parsed()) {
    const moseg::MotionProblem problem = moseg::load_problem(build_problem);
    build_lambdas.resolve(/*synthetic=*/false);
    const moseg::QuboInstance qubo =
        build_variant(problem, build_variant_name, moseg::fill_from_string(build_fill),
                      build_lambdas, build_counts);
    moseg::save_qubo(qubo, build_out);
    std::cout << "wrote " << build_out << "  k=" << qubo.k << "\n";
    return kExitOk;
  }

  if (solve->parsed()) {
    const moseg::MotionProblem problem = moseg::load_problem(solve_problem);
    solve_lambdas.resolve(/*synthetic=*/false);
    if (solve_eval && !problem.ground_truth)
      throw moseg::DataError("--eval requested but the problem has no ground truth");

    moseg::SampleSet samples;
    if (solve_solver == "synch") {
      moseg::SpectralParams params;
      params.seed = solve_seed;
      const moseg::Labeling labeling = moseg::spectral_segment(problem, params);
      moseg::Sample s;
      s.y = moseg::labels_to_bits(labeling, problem.d);
      s.energy = static_cast<double>(moseg::consistency_error(problem, labeling));
      samples.solver = "synch";
      samples.seed = solve_seed;
      samples.reads = 1;
      samples.samples.push_back(std::move(s));
    } else {
      const moseg::QuboInstance qubo =
          build_variant(problem, solve_variant, moseg::fill_from_string(solve_fill),
                        solve_lambdas, solve_counts);
      if (solve_solver == "sa") {
        moseg::AnnealParams params;
        params.reads = solve_reads;
        params.sweeps = solve_sweeps;
        params.seed = solve_seed;
        samples = moseg::simulated_annealing(qubo, params);
      } else if (solve_solver == "brute") {
        samples = moseg::brute_force(qubo, solve_keep);
      } else if (solve_solver == "random") {
        samples = moseg::random_sampler(qubo, solve_reads, solve_seed);
      } else {
        throw moseg::DataError("unknown solver '" + solve_solver + "'");
      }
    }

    const moseg::Sample& best = moseg::best_sample(samples);
    std::cout << "solver=" << samples.solver << " best_energy=" << best.energy
              << " samples=" << samples.samples.size() << "\n";
    if (!solve_out.empty()) moseg::save_samples(samples, solve_out);

    if (problem.ground_truth) {
      // Count diagnostics only apply to the count-constrained variant.
      const bool use_counts = solve_solver != "synch" &&
                              moseg::variant_from_string(solve_variant) ==
                                  moseg::QuboVariant::v2;
      std::vector<std::vector<int>> counts;
      if (use_counts)
        counts = solve_counts.empty()
                     ? counts_from_problem(problem)
                     : parse_motion_counts(solve_counts);
      if (counts.size() == 1) counts.resize(problem.n, counts[0]);
      const moseg::BitVector y_gt =
          moseg::labels_to_bits(*problem.ground_truth, problem.d);
      const moseg::EvalReport report = moseg::evaluate(
          problem, best.y, y_gt, best.energy, use_counts ? &counts : nullptr);
      std::cout << "accuracy_raw=" << report.accuracy_raw
                << " accuracy_aligned=" << report.accuracy_aligned
                << " feasible=" << (report.feasible ? 1 : 0) << "\n";
      if (!solve_report.empty()) moseg::save_report(report, solve_report);
    } else if (!solve_report.empty()) {
      throw moseg::DataError("cannot write a report without ground truth");
    }

    if (!solve_labels.empty()) {
      const moseg::BitDecode decoded = moseg::bits_to_labels(best.y, problem);
      if (!decoded.feasible())
        throw moseg::DataError("best sample is infeasible; no labeling to write");
      std::ofstream out(solve_labels);
      out << "[";
      for (std::size_t i = 0; i < decoded.labeling->labels.size(); ++i) {
        if (i) out << ",";
        out << "[";
        const auto& img = decoded.labeling->labels[i];
        for (std::size_t a = 0; a < img.size(); ++a) {
          if (a) out << ",";
          out << img[a];
        }
        out << "]";
      }
      out << "]\n";
    }
    return kExitOk;
  }

  if (eval->parsed()) {
    const moseg::MotionProblem problem = moseg::load_problem(eval_problem);
    if (!problem.ground_truth)
      throw moseg::DataError("eval: problem has no ground truth");
    const moseg::SampleSet samples = moseg::load_samples(eval_samples);
    const moseg::Sample& best = moseg::best_sample(samples);
    const bool use_counts =
        moseg::variant_from_string(eval_variant) == moseg::QuboVariant::v2;
    std::vector<std::vector<int>> counts;
    if (use_counts)
      counts = eval_counts.empty() ? counts_from_problem(problem)
                                   : parse_motion_counts(eval_counts);
    if (counts.size() == 1) counts.resize(problem.n, counts[0]);
    const moseg::BitVector y_gt = moseg::labels_to_bits(*problem.ground_truth, problem.d);
    const moseg::EvalReport report = moseg::evaluate(problem, best.y, y_gt, best.energy,
                                                     use_counts ? &counts : nullptr);
    std::cout << moseg::report_to_json(report) << "\n";
    if (!eval_out.empty()) moseg::save_report(report, eval_out);
    return kExitOk;
  }

  if (sweep->parsed()) {
    moseg::SweepConfig config;
    config.instances = sweep_instances;
    config.master_seed = sweep_seed;
    config.workers = sweep_workers;
    config.anneal.reads = sweep_reads;
    config.anneal.sweeps = sweep_sweeps;
    config.random_reads = sweep_reads;
    config.fill = moseg::fill_from_string(sweep_fill);
    {
      std::stringstream ss(sweep_solvers);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) config.solvers.push_back(moseg::sweep_solver_from_string(item));
    }

    const bool synthetic = sweep_problems.empty();
    sweep_lambdas.resolve(synthetic);
    config.lambda1 = sweep_lambdas.lambda1;
    config.lambda2 = sweep_lambdas.lambda2;
    config.lambda3 = sweep_lambdas.lambda3;

    if (synthetic) {
      for (int n : parse_int_list(sweep_n)) {
        moseg::SyntheticConfig cfg;
        cfg.n = n;
        cfg.d = sweep_d;
        cfg.points_per_image = sweep_points;
        if (!sweep_point_counts.empty()) cfg.point_counts = parse_int_list(sweep_point_counts);
        if (!sweep_motion_counts.empty())
          cfg.motion_counts = parse_motion_counts(sweep_motion_counts);
        config.configs.push_back(std::move(cfg));
      }
      config.noise_grid = parse_noise_grid(sweep_noise);
    } else {
      config.problem_files = sweep_problems;
    }

    std::filesystem::create_directories(sweep_out);
    if (!sweep_no_artifacts) config.artifacts_dir = sweep_out;

    const auto rows = moseg::run_sweep(config);
    {
      std::ofstream out(std::filesystem::path(sweep_out) / "rows.csv");
      moseg::write_rows_csv(rows, out);
    }
    const auto summary = moseg::summarize(rows);
    {
      std::ofstream out(std::filesystem::path(sweep_out) / "summary.csv");
      moseg::write_summary_csv(summary, out);
    }
    moseg::write_summary_csv(summary, std::cout);
    int failures = 0;
    for (const auto& r : rows)
      if (!r.error.empty()) ++failures;
    if (failures > 0)
      std::cerr << failures << " of " << rows.size() << " rows failed (see rows.csv)\n";
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const moseg::SizeGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const moseg::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

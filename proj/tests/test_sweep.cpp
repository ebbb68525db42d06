#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "moseg/io.hpp"
#include "moseg/metrics.hpp"
#include "moseg/sweep.hpp"

using namespace moseg;

namespace {

SweepConfig tiny_sweep() {
  SweepConfig config;
  SyntheticConfig cfg;
  cfg.n = 2;
  cfg.d = 2;
  cfg.points_per_image = 4;
  config.configs = {cfg};
  config.noise_grid = {0.0, 0.25};
  config.instances = 3;
  config.solvers = {SweepSolver::v1_sa, SweepSolver::v2_sa, SweepSolver::synch,
                    SweepSolver::random};
  config.anneal.reads = 50;
  config.anneal.sweeps = 16;
  config.random_reads = 50;
  config.master_seed = 77;
  return config;
}

std::string rows_as_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  write_rows_csv(rows, os);
  return os.str();
}

}  // namespace

TEST_CASE("a sweep runs the full matrix in canonical order") {
  const SweepConfig config = tiny_sweep();
  const auto rows = run_sweep(config);
  REQUIRE(rows.size() == 2 * 3 * 4);  // noises x instances x solvers

  // canonical order: noise, instance, solver
  std::size_t idx = 0;
  for (double noise : {0.0, 0.25})
    for (int instance = 0; instance < 3; ++instance)
      for (const char* solver : {"v1-sa", "v2-sa", "synch", "random"}) {
        CHECK(rows[idx].noise == noise);
        CHECK(rows[idx].instance == instance);
        CHECK(rows[idx].solver == solver);
        CHECK(rows[idx].error.empty());
        CHECK(rows[idx].k == 16);
        ++idx;
      }
}

TEST_CASE("sweep output is deterministic under a fixed master seed") {
  const SweepConfig config = tiny_sweep();
  const std::string first = rows_as_csv(run_sweep(config));
  const std::string second = rows_as_csv(run_sweep(config));
  CHECK(first == second);

  SweepConfig reseeded = config;
  reseeded.master_seed = 78;
  CHECK(rows_as_csv(run_sweep(reseeded)) != first);
}

TEST_CASE("summary means equal the arithmetic mean of their rows") {
  const auto rows = run_sweep(tiny_sweep());
  const auto summary = summarize(rows);
  REQUIRE(!summary.empty());
  for (const auto& cell : summary) {
    double total = 0.0;
    int count = 0;
    for (const auto& row : rows) {
      if (row.config_id == cell.config_id && row.noise == cell.noise &&
          row.solver == cell.solver && row.error.empty() && row.accuracy_aligned >= 0) {
        total += row.accuracy_aligned;
        ++count;
      }
    }
    REQUIRE(count == cell.count);
    CHECK(cell.acc_aligned_mean == doctest::Approx(total / count).epsilon(1e-9));
  }
}

TEST_CASE("noiseless cells solve perfectly, random stays behind") {
  const auto summary = summarize(run_sweep(tiny_sweep()));
  for (const auto& cell : summary) {
    if (cell.noise == 0.0 && (cell.solver == "v1-sa" || cell.solver == "v2-sa"))
      CHECK(cell.acc_aligned_mean == 1.0);
    if (cell.solver == "random") CHECK(cell.acc_aligned_mean < 0.95);
  }
}

TEST_CASE("csv rows and summary have stable headers") {
  const auto rows = run_sweep(tiny_sweep());
  const std::string csv = rows_as_csv(rows);
  CHECK(csv.rfind("config,n,d,k,noise,instance,solver,seed,accuracy_raw,", 0) == 0);

  std::ostringstream os;
  write_summary_csv(summarize(rows), os);
  CHECK(os.str().rfind("config,n,d,k,noise,solver,count,acc_raw_mean,", 0) == 0);
}

TEST_CASE("guard failures are recorded per row and the sweep continues") {
  SweepConfig config = tiny_sweep();
  SyntheticConfig big;
  big.n = 3;
  big.d = 2;
  big.points_per_image = 16;  // k = 96, far over the brute-force guard
  config.configs = {big};
  config.noise_grid = {0.0};
  config.instances = 1;
  config.solvers = {SweepSolver::v1_brute, SweepSolver::v1_sa};
  config.anneal.reads = 10;
  config.anneal.sweeps = 8;

  const auto rows = run_sweep(config);
  REQUIRE(rows.size() == 2);
  CHECK(!rows[0].error.empty());  // brute guard tripped
  CHECK(rows[1].error.empty());   // annealer unaffected
}

TEST_CASE("artifacts re-derive the reported numbers") {
  const auto dir = std::filesystem::temp_directory_path() / "moseg-sweep-audit";
  std::filesystem::remove_all(dir);

  SweepConfig config = tiny_sweep();
  config.noise_grid = {0.25};
  config.instances = 2;
  config.solvers = {SweepSolver::v1_sa};
  config.artifacts_dir = dir.string();
  const auto rows = run_sweep(config);

  for (const auto& row : rows) {
    REQUIRE(row.error.empty());
    const auto stem = row.config_id + "-0.25-" + std::to_string(row.instance);
    const MotionProblem problem = load_problem(dir / "instances" / (stem + ".json"));
    const SampleSet samples = load_samples(dir / "samples" / (stem + "-v1-sa.json"));

    // the row's numbers must re-derive from the persisted files
    const QuboInstance qubo = build_v1(problem, config.lambda1, config.fill);
    const Sample& best = best_sample(samples);
    CHECK(energy(qubo, best.y) == doctest::Approx(best.energy).epsilon(1e-12));
    CHECK(best.energy == doctest::Approx(row.energy).epsilon(1e-12));
    const BitVector y_gt = labels_to_bits(*problem.ground_truth, problem.d);
    CHECK(accuracy(best.y, y_gt, problem.d, problem.total_points()) ==
          doctest::Approx(row.accuracy_raw).epsilon(1e-12));
    CHECK(violations(best.y, problem).row_violations == row.row_violations);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("file-driven sweeps work from saved problems") {
  const auto dir = std::filesystem::temp_directory_path() / "moseg-sweep-files";
  std::filesystem::create_directories(dir);

  SyntheticConfig cfg;
  cfg.n = 2;
  cfg.d = 2;
  cfg.points_per_image = 4;
  cfg.noise = 0.25;
  cfg.seed = 5;
  save_problem(generate_instance(cfg), dir / "a.json");
  cfg.seed = 6;
  save_problem(generate_instance(cfg), dir / "b.json");

  SweepConfig config;
  config.problem_files = {(dir / "a.json").string(), (dir / "b.json").string()};
  config.solvers = {SweepSolver::v1_brute};
  config.lambda1 = 10.0;
  const auto rows = run_sweep(config);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].config_id == "a");
  CHECK(rows[1].config_id == "b");
  for (const auto& row : rows) {
    CHECK(row.error.empty());
    CHECK(row.accuracy_aligned >= 0.0);
    CHECK(row.success_probability >= 0.0);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep validates its configuration") {
  SweepConfig empty;
  CHECK_THROWS_AS(run_sweep(empty), DataError);

  SweepConfig solverless = tiny_sweep();
  solverless.solvers.clear();
  CHECK_THROWS_AS(run_sweep(solverless), DataError);
}

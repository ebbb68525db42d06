#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "moseg/qubo.hpp"
#include "moseg/samplers.hpp"
#include "moseg/synthetic.hpp"

namespace moseg {

/// Solver matrix entries of a sweep: QUBO variant x sampler, plus the
/// spectral baseline (labeled synch-like, it approximates that method) and
/// the uniform-random floor.
enum class SweepSolver { v1_sa, v2_sa, v1_brute, v2_brute, synch, random };

std::string to_string(SweepSolver s);
SweepSolver sweep_solver_from_string(const std::string& s);

struct SweepConfig {
  /// Synthetic mode: configs x noise_grid x instances cells.
  std::vector<SyntheticConfig> configs;
  std::vector<double> noise_grid = {0.0};
  int instances = 20;
  /// File mode (used when configs is empty): one cell per problem file.
  std::vector<std::string> problem_files;

  std::vector<SweepSolver> solvers;
  double lambda1 = 14.0;
  double lambda2 = 27.5;
  double lambda3 = 3.2;
  FillMode fill = FillMode::zeroed;
  AnnealParams anneal;           ///< reads/sweeps for the sa solvers
  long long random_reads = 1000;  ///< reads of the random baseline
  int spectral_restarts = 10;
  std::uint64_t master_seed = 0;
  /// 0 = MOSEG_WORKERS env var, else 1.
  int workers = 0;
  /// When set, problems and sample sets are persisted here for auditing.
  std::string artifacts_dir;
};

/// One evaluation row. Negative accuracy / success probability means
/// "not available" (no ground truth / not a sampling solver) and serializes
/// as an empty CSV field.
struct SweepRow {
  std::string config_id;
  int n = 0;
  int d = 0;
  int k = 0;
  double noise = 0.0;
  int instance = 0;
  std::string solver;
  std::uint64_t seed = 0;
  double accuracy_raw = -1.0;
  double accuracy_aligned = -1.0;
  double energy = 0.0;
  bool feasible = false;
  int row_violations = 0;
  double success_probability = -1.0;
  double wall_time_ms = 0.0;
  std::string error;  ///< non-empty when this row failed; sweep continues
};

/// Mean/stddev aggregate of one (config, noise, solver) cell.
struct SweepSummaryRow {
  std::string config_id;
  int n = 0;
  int d = 0;
  int k = 0;
  double noise = 0.0;
  std::string solver;
  int count = 0;
  double acc_raw_mean = 0.0, acc_raw_std = 0.0;
  double acc_aligned_mean = 0.0, acc_aligned_std = 0.0;
  double energy_mean = 0.0;
  double success_probability_mean = 0.0;
  double feasible_rate = 0.0;
};

/// Run the full solver x instance x noise matrix. Rows come back in canonical
/// (config, noise, instance, solver) order regardless of worker scheduling;
/// per-row failures are recorded in the row and do not abort the sweep.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

void write_rows_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::vector<SweepSummaryRow> summarize(const std::vector<SweepRow>& rows);
void write_summary_csv(const std::vector<SweepSummaryRow>& rows, std::ostream& out);

}  // namespace moseg

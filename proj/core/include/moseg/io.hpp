#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "moseg/metrics.hpp"
#include "moseg/problem.hpp"
#include "moseg/qubo.hpp"
#include "moseg/samplers.hpp"

namespace moseg {

// Problem files: {"n", "d", "point_counts", "edges":[{"i","j","z" | "z_ones"}],
// "ground_truth" (optional), "seed", "id" (optional)}. Indices are 0-based.
// Blocks may be given dense ("z": row lists) or sparse ("z_ones": [h,k] pairs).
MotionProblem parse_problem(const std::string& json_text);
std::string problem_to_json(const MotionProblem& problem, bool sparse_blocks = false);
MotionProblem load_problem(const std::filesystem::path& path);
void save_problem(const MotionProblem& problem, const std::filesystem::path& path,
                  bool sparse_blocks = false);

// QUBO files: {"k", "quadratic_upper":[[i,j,v],...] (upper triangle, i <= j,
// nonzeros only), "linear", "offset", "meta"}.
QuboInstance parse_qubo(const std::string& json_text);
std::string qubo_to_json(const QuboInstance& qubo);
QuboInstance load_qubo(const std::filesystem::path& path);
void save_qubo(const QuboInstance& qubo, const std::filesystem::path& path);

// Sample sets: {"solver", "seed", "reads", "samples":[{"y":"0101...",
// "energy", "count"}], "wall_time_ms"}. Bitstrings are index 0 first.
SampleSet parse_samples(const std::string& json_text);
std::string samples_to_json(const SampleSet& set);
SampleSet load_samples(const std::filesystem::path& path);
void save_samples(const SampleSet& set, const std::filesystem::path& path);

std::string report_to_json(const EvalReport& report);
void save_report(const EvalReport& report, const std::filesystem::path& path);

std::string bits_to_string(const BitVector& y);
BitVector bits_from_string(const std::string& s);

}  // namespace moseg

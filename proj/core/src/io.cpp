#include "moseg/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "moseg/errors.hpp"

namespace moseg {

using nlohmann::json;

namespace {

json parse_or_throw(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DataError(std::string("malformed JSON in ") + what);
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

Eigen::MatrixXi parse_block(const json& edge, int rows, int cols) {
  Eigen::MatrixXi z = Eigen::MatrixXi::Zero(rows, cols);
  if (edge.contains("z")) {
    const auto& mat = edge.at("z");
    if (static_cast<int>(mat.size()) != rows)
      throw DataError("problem file: block row count mismatch");
    for (int r = 0; r < rows; ++r) {
      const auto& row = mat.at(r);
      if (static_cast<int>(row.size()) != cols)
        throw DataError("problem file: block column count mismatch");
      for (int c = 0; c < cols; ++c) z(r, c) = row.at(c).get<int>();
    }
  } else if (edge.contains("z_ones")) {
    for (const auto& pair : edge.at("z_ones")) {
      const int h = pair.at(0).get<int>();
      const int k = pair.at(1).get<int>();
      if (h < 0 || h >= rows || k < 0 || k >= cols)
        throw DataError("problem file: z_ones index out of range");
      z(h, k) = 1;
    }
  } else {
    throw DataError("problem file: edge needs a 'z' or 'z_ones' block");
  }
  return z;
}

}  // namespace

MotionProblem parse_problem(const std::string& json_text) {
  const json j = parse_or_throw(json_text, "problem file");
  MotionProblem problem;
  try {
    problem.n = j.at("n").get<int>();
    problem.d = j.at("d").get<int>();
    problem.point_counts = j.at("point_counts").get<std::vector<int>>();
    for (const auto& edge : j.at("edges")) {
      PartialSegmentation e;
      e.i = edge.at("i").get<int>();
      e.j = edge.at("j").get<int>();
      if (e.i < 0 || e.i >= problem.n || e.j < 0 || e.j >= problem.n)
        throw DataError("problem file: edge image index out of range");
      e.z = parse_block(edge, problem.point_counts.at(e.i), problem.point_counts.at(e.j));
      problem.edges.push_back(std::move(e));
    }
    if (j.contains("ground_truth") && !j.at("ground_truth").is_null()) {
      Labeling gt;
      gt.labels = j.at("ground_truth").get<std::vector<std::vector<int>>>();
      problem.ground_truth = std::move(gt);
    }
    if (j.contains("seed")) problem.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("id")) problem.id = j.at("id").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(std::string("problem file: ") + e.what());
  }
  problem.validate();
  return problem;
}

std::string problem_to_json(const MotionProblem& problem, bool sparse_blocks) {
  json j;
  j["n"] = problem.n;
  j["d"] = problem.d;
  j["point_counts"] = problem.point_counts;
  j["edges"] = json::array();
  for (const auto& e : problem.edges) {
    json edge;
    edge["i"] = e.i;
    edge["j"] = e.j;
    if (sparse_blocks) {
      json ones = json::array();
      for (int r = 0; r < e.z.rows(); ++r)
        for (int c = 0; c < e.z.cols(); ++c)
          if (e.z(r, c)) ones.push_back({r, c});
      edge["z_ones"] = std::move(ones);
    } else {
      json mat = json::array();
      for (int r = 0; r < e.z.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < e.z.cols(); ++c) row.push_back(e.z(r, c));
        mat.push_back(std::move(row));
      }
      edge["z"] = std::move(mat);
    }
    j["edges"].push_back(std::move(edge));
  }
  if (problem.ground_truth) j["ground_truth"] = problem.ground_truth->labels;
  j["seed"] = problem.seed;
  if (!problem.id.empty()) j["id"] = problem.id;
  return j.dump();
}

MotionProblem load_problem(const std::filesystem::path& path) {
  return parse_problem(read_file(path));
}

void save_problem(const MotionProblem& problem, const std::filesystem::path& path,
                  bool sparse_blocks) {
  write_file(path, problem_to_json(problem, sparse_blocks));
}

QuboInstance parse_qubo(const std::string& json_text) {
  const json j = parse_or_throw(json_text, "qubo file");
  QuboInstance q;
  try {
    q.k = j.at("k").get<int>();
    if (q.k < 1) throw DataError("qubo file: k must be >= 1");
    q.quadratic = Eigen::MatrixXd::Zero(q.k, q.k);
    q.linear = Eigen::VectorXd::Zero(q.k);
    for (const auto& entry : j.at("quadratic_upper")) {
      const int i = entry.at(0).get<int>();
      const int c = entry.at(1).get<int>();
      const double v = entry.at(2).get<double>();
      if (i < 0 || c < i || c >= q.k) throw DataError("qubo file: bad upper-triangle entry");
      q.quadratic(i, c) = v;
      q.quadratic(c, i) = v;
    }
    const auto lin = j.at("linear").get<std::vector<double>>();
    if (static_cast<int>(lin.size()) != q.k)
      throw DataError("qubo file: linear length != k");
    for (int i = 0; i < q.k; ++i) q.linear(i) = lin[i];
    q.offset = j.at("offset").get<double>();
    if (j.contains("meta")) {
      const auto& m = j.at("meta");
      if (m.contains("variant")) q.meta.variant = variant_from_string(m.at("variant"));
      if (m.contains("fill")) q.meta.fill = fill_from_string(m.at("fill"));
      if (m.contains("lambda1")) q.meta.lambda1 = m.at("lambda1").get<double>();
      if (m.contains("lambda2")) q.meta.lambda2 = m.at("lambda2").get<double>();
      if (m.contains("lambda3")) q.meta.lambda3 = m.at("lambda3").get<double>();
      if (m.contains("problem_id")) q.meta.problem_id = m.at("problem_id").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("qubo file: ") + e.what());
  }
  return q;
}

std::string qubo_to_json(const QuboInstance& qubo) {
  json j;
  j["k"] = qubo.k;
  json upper = json::array();
  for (int i = 0; i < qubo.k; ++i)
    for (int c = i; c < qubo.k; ++c)
      if (qubo.quadratic(i, c) != 0.0) upper.push_back({i, c, qubo.quadratic(i, c)});
  j["quadratic_upper"] = std::move(upper);
  std::vector<double> lin(qubo.linear.data(), qubo.linear.data() + qubo.k);
  j["linear"] = lin;
  j["offset"] = qubo.offset;
  json meta;
  meta["variant"] = to_string(qubo.meta.variant);
  if (qubo.meta.variant == QuboVariant::v1) {
    meta["fill"] = to_string(qubo.meta.fill);
    meta["lambda1"] = qubo.meta.lambda1;
  } else {
    meta["lambda2"] = qubo.meta.lambda2;
    meta["lambda3"] = qubo.meta.lambda3;
  }
  if (!qubo.meta.problem_id.empty()) meta["problem_id"] = qubo.meta.problem_id;
  j["meta"] = std::move(meta);
  return j.dump();
}

QuboInstance load_qubo(const std::filesystem::path& path) {
  return parse_qubo(read_file(path));
}

void save_qubo(const QuboInstance& qubo, const std::filesystem::path& path) {
  write_file(path, qubo_to_json(qubo));
}

std::string bits_to_string(const BitVector& y) {
  std::string s(y.size(), '0');
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i]) s[i] = '1';
  return s;
}

BitVector bits_from_string(const std::string& s) {
  BitVector y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw DataError("bitstring must contain only 0/1");
    y[i] = s[i] == '1';
  }
  return y;
}

SampleSet parse_samples(const std::string& json_text) {
  const json j = parse_or_throw(json_text, "sample file");
  SampleSet set;
  try {
    set.solver = j.at("solver").get<std::string>();
    set.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("reads")) set.reads = j.at("reads").get<long long>();
    set.wall_time_ms = j.at("wall_time_ms").get<double>();
    for (const auto& s : j.at("samples")) {
      Sample sample;
      sample.y = bits_from_string(s.at("y").get<std::string>());
      sample.energy = s.at("energy").get<double>();
      sample.count = s.at("count").get<long long>();
      set.samples.push_back(std::move(sample));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("sample file: ") + e.what());
  }
  return set;
}

std::string samples_to_json(const SampleSet& set) {
  json j;
  j["solver"] = set.solver;
  j["seed"] = set.seed;
  j["reads"] = set.reads;
  j["wall_time_ms"] = set.wall_time_ms;
  json samples = json::array();
  for (const auto& s : set.samples) {
    json entry;
    entry["y"] = bits_to_string(s.y);
    entry["energy"] = s.energy;
    entry["count"] = s.count;
    samples.push_back(std::move(entry));
  }
  j["samples"] = std::move(samples);
  return j.dump();
}

SampleSet load_samples(const std::filesystem::path& path) {
  return parse_samples(read_file(path));
}

void save_samples(const SampleSet& set, const std::filesystem::path& path) {
  write_file(path, samples_to_json(set));
}

std::string report_to_json(const EvalReport& report) {
  json j;
  j["accuracy_raw"] = report.accuracy_raw;
  j["accuracy_aligned"] = report.accuracy_aligned;
  j["permutation"] = report.permutation;
  j["row_violations"] = report.row_violations;
  j["count_violations"] = report.count_violations;
  j["feasible"] = report.feasible;
  j["energy"] = report.energy;
  return j.dump();
}

void save_report(const EvalReport& report, const std::filesystem::path& path) {
  write_file(path, report_to_json(report));
}

}  // namespace moseg

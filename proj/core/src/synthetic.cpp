#include "moseg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "moseg/errors.hpp"
#include "moseg/rng.hpp"

namespace moseg {

namespace {

constexpr std::uint64_t kLabelStream = 10;
constexpr std::uint64_t kEdgeStream = 11;

}  // namespace

NoiseSide noise_side_from_string(const std::string& s) {
  if (s == "both") return NoiseSide::both;
  if (s == "one") return NoiseSide::one;
  throw DataError("unknown noise side '" + s + "' (expected both or one)");
}

std::string to_string(NoiseSide side) { return side == NoiseSide::both ? "both" : "one"; }

std::vector<int> SyntheticConfig::resolved_point_counts() const {
  if (!point_counts.empty()) {
    if (static_cast<int>(point_counts.size()) != n)
      throw DataError("synthetic config: point_counts length != n");
    return point_counts;
  }
  if (!motion_counts.empty()) {
    std::vector<int> counts(n);
    for (int i = 0; i < n; ++i) {
      const auto& m = motion_counts.size() == 1 ? motion_counts[0] : motion_counts.at(i);
      counts[i] = std::accumulate(m.begin(), m.end(), 0);
    }
    return counts;
  }
  return std::vector<int>(n, points_per_image);
}

std::uint64_t SyntheticConfig::config_hash() const {
  std::uint64_t h = 0x6d736567ULL;  // "mseg"
  auto mix = [&h](std::uint64_t v) { h = splitmix64(h ^ v); };
  mix(static_cast<std::uint64_t>(n));
  mix(static_cast<std::uint64_t>(d));
  for (int c : resolved_point_counts()) mix(static_cast<std::uint64_t>(c));
  for (const auto& m : motion_counts)
    for (int c : m) mix(0x100 + static_cast<std::uint64_t>(c));
  mix(static_cast<std::uint64_t>(noise * 1e6));
  mix(complete_graph ? 1 : 0);
  for (const auto& [i, j] : edge_list) mix((static_cast<std::uint64_t>(i) << 20) | j);
  mix(noise_side == NoiseSide::both ? 0 : 1);
  return h;
}

MotionProblem generate_ground_truth(const SyntheticConfig& config) {
  if (config.n < 1 || config.d < 1) throw DataError("synthetic config: n and d must be >= 1");
  if (config.noise < 0.0 || config.noise > 1.0)
    throw DataError("synthetic config: noise must lie in [0, 1]");

  MotionProblem problem;
  problem.n = config.n;
  problem.d = config.d;
  problem.point_counts = config.resolved_point_counts();
  problem.seed = config.seed;

  if (!config.motion_counts.empty() &&
      !(config.motion_counts.size() == 1 ||
        static_cast<int>(config.motion_counts.size()) == config.n))
    throw DataError("synthetic config: motion_counts must hold 1 or n vectors");

  auto rng = make_rng(derive_seed(config.seed, kLabelStream));
  Labeling gt;
  gt.labels.resize(config.n);
  for (int i = 0; i < config.n; ++i) {
    const int pi = problem.point_counts[i];
    if (config.motion_counts.empty()) {
      std::uniform_int_distribution<int> pick(0, config.d - 1);
      gt.labels[i].resize(pi);
      for (int a = 0; a < pi; ++a) gt.labels[i][a] = pick(rng);
    } else {
      const auto& m =
          config.motion_counts.size() == 1 ? config.motion_counts[0] : config.motion_counts[i];
      if (static_cast<int>(m.size()) != config.d)
        throw DataError("synthetic config: motion count vector must have length d");
      if (std::accumulate(m.begin(), m.end(), 0) != pi)
        throw DataError("synthetic config: motion counts of image " + std::to_string(i) +
                        " do not sum to its point count");
      gt.labels[i].clear();
      gt.labels[i].reserve(pi);
      for (int k = 0; k < config.d; ++k) gt.labels[i].insert(gt.labels[i].end(), m[k], k);
      std::shuffle(gt.labels[i].begin(), gt.labels[i].end(), rng);
    }
  }

  std::vector<std::pair<int, int>> edges;
  if (config.complete_graph) {
    for (int i = 0; i < config.n; ++i)
      for (int j = i + 1; j < config.n; ++j) edges.emplace_back(i, j);
  } else {
    edges = config.edge_list;
  }
  for (const auto& [i, j] : edges) {
    PartialSegmentation e;
    e.i = i;
    e.j = j;
    e.z = relative_from_absolute(gt, i, j);
    problem.edges.push_back(std::move(e));
  }

  problem.ground_truth = std::move(gt);
  problem.validate();
  return problem;
}

void corrupt_labels(std::vector<int>& local_labels, int d, int corrupt_count,
                    std::mt19937_64& rng) {
  if (d < 2 || corrupt_count <= 0) return;
  const int m = static_cast<int>(local_labels.size());
  corrupt_count = std::min(corrupt_count, m);

  // Partial Fisher-Yates: the first corrupt_count slots of `order` are a
  // uniform sample without replacement.
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  for (int t = 0; t < corrupt_count; ++t) {
    std::uniform_int_distribution<int> pick(t, m - 1);
    std::swap(order[t], order[pick(rng)]);
  }
  std::uniform_int_distribution<int> shift(1, d - 1);
  for (int t = 0; t < corrupt_count; ++t) {
    int& label = local_labels[order[t]];
    label = (label + shift(rng)) % d;  // uniform over the other d-1 motions
  }
}

MotionProblem inject_noise(const MotionProblem& problem, double rho, std::uint64_t seed,
                           NoiseSide side) {
  if (!problem.ground_truth) throw DataError("inject_noise: problem has no ground truth");
  if (rho < 0.0 || rho > 1.0) throw DataError("inject_noise: rho must lie in [0, 1]");

  const Labeling& gt = *problem.ground_truth;
  MotionProblem noisy = problem;
  for (auto& e : noisy.edges) {
    const int pi = problem.point_counts[e.i];
    const int pj = problem.point_counts[e.j];
    std::vector<int> local = gt.labels[e.i];
    local.insert(local.end(), gt.labels[e.j].begin(), gt.labels[e.j].end());

    // floor with a nudge so that decimally-exact products (0.3 * 40) do not
    // round down an ulp short.
    auto corrupt_count = [rho](int points) {
      return static_cast<int>(std::floor(rho * points + 1e-9));
    };

    auto rng = make_rng(derive_seed(seed, kEdgeStream, static_cast<std::uint64_t>(e.i),
                                    static_cast<std::uint64_t>(e.j)));
    if (side == NoiseSide::both) {
      corrupt_labels(local, problem.d, corrupt_count(pi + pj), rng);
    } else {
      // Corrupt only the first image's points of the pair.
      std::vector<int> left(local.begin(), local.begin() + pi);
      corrupt_labels(left, problem.d, corrupt_count(pi), rng);
      std::copy(left.begin(), left.end(), local.begin());
    }

    Labeling pair;
    pair.labels = {std::vector<int>(local.begin(), local.begin() + pi),
                   std::vector<int>(local.begin() + pi, local.end())};
    e.z = relative_from_absolute(pair, 0, 1);
  }
  return noisy;
}

MotionProblem generate_instance(const SyntheticConfig& config) {
  MotionProblem gt = generate_ground_truth(config);
  if (config.noise == 0.0) return gt;
  return inject_noise(gt, config.noise, config.seed, config.noise_side);
}

}  // namespace moseg

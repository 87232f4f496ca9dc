#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace smoothreg {

// One splitmix64 scramble step.
std::uint64_t mix64(std::uint64_t x);

// Derives an independent stream seed from a base seed and a task path
// (experiment id, cell index, replicate index, purpose tag, ...).  Streams
// for different paths are decorrelated even when base seeds are small
// consecutive integers.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

// Deterministic generator used everywhere randomness is needed.  Normal
// draws go through our own polar Box-Muller transform rather than
// std::normal_distribution, whose output sequence is implementation
// defined; this keeps seeded runs reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed ^ 0x9e3779b97f4a7c15ull)) {}

  // U[0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double normal();
  Eigen::VectorXd normal_vector(Eigen::Index n);

  // k distinct indices from {0, ..., n-1} via partial Fisher-Yates; the
  // result order is random.
  std::vector<int> sample_without_replacement(int n, int k);

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace smoothreg

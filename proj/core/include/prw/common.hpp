#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace prw {

class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InfeasibleMarginalsError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

class DegenerateStepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A 64-bit seed. Identical seed + identical parameters gives a bit-identical
// sample stream on every platform (the engine and all distribution transforms
// below are fully specified, nothing is delegated to libstdc++ distributions).
struct Seed {
  std::uint64_t value = 0;
};

// SplitMix64 finalizer, used for seed mixing and stream splitting.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic sub-seed for a numbered stream (trial index, cell index, ...).
// Independent streams for distinct indices; stable across thread counts.
Seed derive_seed(Seed master, std::uint64_t stream);

// Seedable generator: mt19937_64 engine with hand-rolled transforms.
// Gaussian variates come from the Box-Muller transform (pairs cached).
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(splitmix64(seed.value)) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform on [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal();

  // uniform on {0, 1, ..., n-1} by rejection
  int uniform_int(int n);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace prw

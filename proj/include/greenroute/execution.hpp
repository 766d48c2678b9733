#pragma once

#include <cstdint>

namespace greenroute {

// Kernels that scan independent work items come in two flavours. `serial` is
// the reference loop kept for testing; `parallel` splits the same items over
// OpenMP threads and must produce bit-identical results.
enum class Execution { serial, parallel };

int max_threads();
void set_threads(int threads);  // <= 0 restores the OpenMP default

// SplitMix64 finaliser; used to derive independent per-trial and
// per-instance seeds from one user seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace greenroute

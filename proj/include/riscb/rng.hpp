#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace riscb {

// Deterministic random stream. Gaussian and bounded-int draws are generated
// from raw 64-bit engine output (Box-Muller, rejection sampling) so that a
// given seed produces the same sequence on every platform, which the
// reproducibility contract of the harness relies on.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), unbiased.
  int uniform_int(int n);

  // Standard normal via Box-Muller; second value of each pair is cached.
  double gaussian();

  // Circularly symmetric complex normal, unit variance (0.5 per component).
  std::complex<double> cgaussian() {
    return {gaussian() * kInvSqrt2, gaussian() * kInvSqrt2};
  }

 private:
  static constexpr double kInvSqrt2 = 0.70710678118654752440;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stream-id derivation for counter-based substreams: the result depends only
// on (master, purpose, index), never on how many draws other streams made.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose,
                          std::uint64_t index);

// Well-known purpose ids used by the harness.
namespace stream_purpose {
inline constexpr std::uint64_t kChannel = 1;
inline constexpr std::uint64_t kCodebookGen = 2;
inline constexpr std::uint64_t kCompositeEstimation = 3;
inline constexpr std::uint64_t kCascadedEstimation = 4;
inline constexpr std::uint64_t kRandomBaseline = 5;
}  // namespace stream_purpose

}  // namespace riscb

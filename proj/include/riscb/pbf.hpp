#pragma once

#include <vector>

#include "riscb/channel.hpp"
#include "riscb/codebook.hpp"
#include "riscb/rng.hpp"

namespace riscb {

// One labeled training sample from the scan phase: objective value measured
// with codebook entry rp_index active.
struct LabeledSample {
  int rp_index = -1;
  double objective_value = 0.0;
};

struct LearnResult {
  ReflectionPattern pattern;
  // Codebook index of the returned pattern; -1 for synthesized patterns.
  int chosen_index = -1;
  // Fusion only: weights degenerated and the rote winner was returned.
  bool used_rote_fallback = false;
};

// Pick the best-scoring codebook entry; ties go to the lowest index.
LearnResult rote_learn(const std::vector<LabeledSample>& samples,
                       const Codebook& cb);

// Superimpose the codebook patterns with weights proportional to the
// objective values (shifted to nonnegative unless values_are_nonnegative),
// then project each fused element back to the nearest legitimate phase.
// Elements whose fused coefficient vanishes inherit the rote winner's phase;
// if every weight vanishes the rote result is returned with a flag.
LearnResult fusion_learn(const std::vector<LabeledSample>& samples,
                         const Codebook& cb,
                         bool values_are_nonnegative = false);

enum class PbfObjective { received_power, achievable_rate };

struct AoOptions {
  PbfObjective objective = PbfObjective::received_power;
  double tx_power_mw = 1.0;     // achievable_rate only
  double noise_power_mw = 1.0;  // achievable_rate only
  double rel_tolerance = 1e-6;
  int max_sweeps = 50;
};

struct AoResult {
  ReflectionPattern pattern;
  double objective = 0.0;
  // Objective after the initial pattern and after every element update.
  std::vector<double> trace;
  int sweeps = 0;
  bool converged = false;
};

// Element-wise alternating optimization over the B-level phases, given the
// direct and per-element cascaded responses (true or estimated). Received
// power uses the closed-form alignment phase followed by quantization; rate
// enumerates the B levels. Both pick the exact per-coordinate optimum, so
// the trace never decreases. A final sweep whose improvement falls below
// rel_tolerance is rolled back, which makes the output a restart fixed point.
AoResult ao_optimize(const CascadedResponse& basis, int num_levels,
                     const ReflectionPattern& init, const AoOptions& opts = {});

// Matched-phase warm start: each element is set to the quantized phase that
// aligns its cascaded response with the direct response (with a flat
// reference when the direct link carries nothing).
ReflectionPattern matched_phase_init(const CascadedResponse& basis,
                                     int num_levels);

struct OracleResult {
  std::vector<double> phases_rad;  // continuous, one per element
  double power_gain = 0.0;         // (|h_d| + sum_m |g_m|)^2
  double received_power_mw = 0.0;  // power_gain * tx power
};

// Continuous phase alignment, the quadratic-law reference. Narrowband only:
// multi-tap realizations are rejected unless allow_narrowband_eval, which
// evaluates at subcarrier 0.
OracleResult continuous_alignment_oracle(const ChannelRealization& ch,
                                         double tx_power_mw,
                                         bool allow_narrowband_eval = false);

// Uniformly random legitimate pattern; same draw as a size-1 random codebook.
ReflectionPattern random_phase_baseline(int num_elements, int num_levels,
                                        RandomStream& rng);

}  // namespace riscb

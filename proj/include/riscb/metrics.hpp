#pragma once

#include "riscb/core.hpp"

namespace riscb {

// Mean over subcarriers of log2(1 + P*|h[k]|^2 / sigma^2), equal power per
// subcarrier. Powers are linear and only their ratio matters.
double achievable_rate(const CVec& h_eff, double tx_power_mw,
                       double noise_power_mw);

// R_e = (1 - tau/T) * R. Rejects tau outside [0, T].
double effective_rate(double rate_bps_hz, int tau_slots, int coherence_slots);

// P * mean_k |h[k]|^2, linear.
double received_power(const CVec& h_eff, double tx_power_mw);

enum class TrainingScheme { codebook, cascaded_ce, random_phase };

// Training slots tau consumed per coherence block by each scheme.
int training_overhead(TrainingScheme scheme, int num_elements,
                      int codebook_size, int pilots_per_subframe);

struct RateResult {
  double rate_bps_hz = 0.0;
  double effective_rate_bps_hz = 0.0;
  int tau_slots = 0;
  int coherence_slots = 0;
};

RateResult make_rate_result(double rate_bps_hz, int tau_slots,
                            int coherence_slots);

}  // namespace riscb

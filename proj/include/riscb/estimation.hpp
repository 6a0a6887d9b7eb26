#pragma once

#include <vector>

#include "riscb/channel.hpp"
#include "riscb/codebook.hpp"
#include "riscb/core.hpp"
#include "riscb/rng.hpp"

namespace riscb {

struct PilotConfig {
  double pilot_power_dbm = -20.0;
  double noise_power_dbm = -100.0;  // per subcarrier
  int pilots_per_subframe = 1;
  int n_subcarriers = 64;

  double pilot_power_mw() const { return db_to_linear(pilot_power_dbm); }
  double noise_power_mw() const { return db_to_linear(noise_power_dbm); }
  // Post-LS error variance per subcarrier for unit-modulus repeated pilots.
  double estimate_noise_var() const {
    return noise_power_mw() / (pilot_power_mw() * pilots_per_subframe);
  }
  void validate() const;
};

// Least-squares estimate of the end-to-end composite channel under one
// pattern, from one uplink subframe.
struct CompositeChannelEstimate {
  int rp_index = -1;
  CVec h_hat;
  double noise_var_per_subcarrier = 0.0;
};

CompositeChannelEstimate estimate_composite(const CVec& true_response,
                                            const PilotConfig& cfg,
                                            RandomStream& rng,
                                            int rp_index = -1);
CompositeChannelEstimate estimate_composite(const ChannelRealization& ch,
                                            const ReflectionPattern& rp,
                                            const PilotConfig& cfg,
                                            RandomStream& rng,
                                            int rp_index = -1);

// Training design for the cascaded estimator: one row of element reflection
// coefficients per subframe. The canonical design is the all-off subframe
// followed by the M columns of the order-M DFT (coefficients taken exactly,
// independent of the element phase grid).
struct TrainingDesign {
  CMat coefficients;  // n_subframes x M

  int subframes() const { return coefficients.rows(); }
  int elements() const { return coefficients.cols(); }

  static TrainingDesign canonical(int num_elements);
  static TrainingDesign from_patterns(const std::vector<ReflectionPattern>& rps);
};

struct CascadedChannelEstimate {
  CascadedResponse response;  // estimated direct + per-element responses
  double obs_noise_var = 0.0; // per normalized observation
  // Error variance per unknown (direct first, then element 0..M-1):
  // obs_noise_var * diag((A^H A)^-1).
  std::vector<double> unknown_noise_var;
  CMat observations;          // n_subframes x n_subcarriers, normalized
};

// Stacked least squares over the training subframes, recovering the direct
// response and all M per-element cascaded responses jointly. Throws if the
// design has fewer than M+1 subframes or is rank deficient.
CascadedChannelEstimate estimate_cascaded_ls(const ChannelRealization& ch,
                                             const TrainingDesign& design,
                                             const PilotConfig& cfg,
                                             RandomStream& rng);

// Pilot-slot breakdown of the conventional three-phase multi-user scheme.
struct ThreePhaseOverhead {
  int phase1_slots = 0;  // direct channels, K slots
  int phase2_slots = 0;  // reference user reflected channels, M slots
  int phase3_slots = 0;  // scaling factors, max(K-1, ceil((K-1)M/N))
  int total() const { return phase1_slots + phase2_slots + phase3_slots; }
};

ThreePhaseOverhead three_phase_overhead(int num_users, int num_elements,
                                        int bs_antennas);

enum class SignalingScheme { per_element, codebook, fusion };

// Control-link bits to configure the RIS once: M*log2(B) per-element,
// ceil(log2(Q)) for a codebook index, Q for fusion weights.
long long control_signaling_bits(SignalingScheme scheme, int num_elements,
                                 int num_levels, int codebook_size);

}  // namespace riscb

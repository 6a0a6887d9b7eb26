#include "riscb/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace riscb {

double achievable_rate(const CVec& h_eff, double tx_power_mw,
                       double noise_power_mw) {
  if (h_eff.empty())
    throw std::invalid_argument("achievable_rate: empty channel");
  if (tx_power_mw <= 0.0 || noise_power_mw <= 0.0)
    throw std::invalid_argument("achievable_rate: powers must be positive");
  double acc = 0.0;
  for (const Complex& h : h_eff)
    acc += std::log2(1.0 + tx_power_mw * std::norm(h) / noise_power_mw);
  return acc / static_cast<double>(h_eff.size());
}

double effective_rate(double rate_bps_hz, int tau_slots, int coherence_slots) {
  if (coherence_slots <= 0)
    throw std::invalid_argument("effective_rate: coherence time must be positive");
  if (tau_slots < 0 || tau_slots > coherence_slots)
    throw std::invalid_argument("effective_rate: tau must lie in [0, T]");
  return (1.0 - static_cast<double>(tau_slots) / coherence_slots) * rate_bps_hz;
}

double received_power(const CVec& h_eff, double tx_power_mw) {
  if (h_eff.empty())
    throw std::invalid_argument("received_power: empty channel");
  double acc = 0.0;
  for (const Complex& h : h_eff) acc += std::norm(h);
  return tx_power_mw * acc / static_cast<double>(h_eff.size());
}

int training_overhead(TrainingScheme scheme, int num_elements,
                      int codebook_size, int pilots_per_subframe) {
  if (pilots_per_subframe < 1)
    throw std::invalid_argument("training_overhead: pilots_per_subframe must be >= 1");
  switch (scheme) {
    case TrainingScheme::codebook:
      if (codebook_size < 1)
        throw std::invalid_argument("training_overhead: codebook size must be >= 1");
      return codebook_size * pilots_per_subframe;
    case TrainingScheme::cascaded_ce:
      if (num_elements < 1)
        throw std::invalid_argument("training_overhead: element count must be >= 1");
      return (num_elements + 1) * pilots_per_subframe;
    case TrainingScheme::random_phase:
      return pilots_per_subframe;
  }
  throw std::invalid_argument("training_overhead: unknown scheme");
}

RateResult make_rate_result(double rate_bps_hz, int tau_slots,
                            int coherence_slots) {
  RateResult r;
  r.rate_bps_hz = rate_bps_hz;
  r.tau_slots = tau_slots;
  r.coherence_slots = coherence_slots;
  r.effective_rate_bps_hz = effective_rate(rate_bps_hz, tau_slots, coherence_slots);
  return r;
}

}  // namespace riscb

#include "riscb/estimation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace riscb {

void PilotConfig::validate() const {
  if (pilots_per_subframe < 1)
    throw std::invalid_argument("pilot config: pilots_per_subframe must be >= 1");
  if (n_subcarriers < 1)
    throw std::invalid_argument("pilot config: n_subcarriers must be >= 1");
  if (!std::isfinite(pilot_power_dbm) || !std::isfinite(noise_power_dbm))
    throw std::invalid_argument("pilot config: powers must be finite");
}

CompositeChannelEstimate estimate_composite(const CVec& true_response,
                                            const PilotConfig& cfg,
                                            RandomStream& rng, int rp_index) {
  cfg.validate();
  if (static_cast<int>(true_response.size()) != cfg.n_subcarriers)
    throw std::invalid_argument("estimate_composite: response length mismatch");
  CompositeChannelEstimate est;
  est.rp_index = rp_index;
  est.noise_var_per_subcarrier = cfg.estimate_noise_var();
  const double sigma = std::sqrt(est.noise_var_per_subcarrier);
  est.h_hat.resize(true_response.size());
  for (std::size_t k = 0; k < true_response.size(); ++k)
    est.h_hat[k] = true_response[k] + sigma * rng.cgaussian();
  return est;
}

CompositeChannelEstimate estimate_composite(const ChannelRealization& ch,
                                            const ReflectionPattern& rp,
                                            const PilotConfig& cfg,
                                            RandomStream& rng, int rp_index) {
  return estimate_composite(compose_effective_channel(ch, rp, cfg.n_subcarriers),
                            cfg, rng, rp_index);
}

TrainingDesign TrainingDesign::canonical(int num_elements) {
  if (num_elements < 1)
    throw std::invalid_argument("training design: need at least one element");
  TrainingDesign d;
  d.coefficients = CMat(num_elements + 1, num_elements);
  for (int m = 0; m < num_elements; ++m) d.coefficients(0, m) = {0.0, 0.0};
  for (int q = 0; q < num_elements; ++q) {
    for (int m = 0; m < num_elements; ++m) {
      const double ang = -kTwoPi * q * m / num_elements;
      d.coefficients(q + 1, m) = {std::cos(ang), std::sin(ang)};
    }
  }
  return d;
}

TrainingDesign TrainingDesign::from_patterns(
    const std::vector<ReflectionPattern>& rps) {
  if (rps.empty())
    throw std::invalid_argument("training design: no patterns");
  const int m_elems = rps.front().size();
  TrainingDesign d;
  d.coefficients = CMat(static_cast<int>(rps.size()), m_elems);
  for (std::size_t i = 0; i < rps.size(); ++i) {
    if (rps[i].size() != m_elems)
      throw std::invalid_argument("training design: mixed pattern sizes");
    for (int m = 0; m < m_elems; ++m)
      d.coefficients(static_cast<int>(i), m) = rps[i].coefficient(m);
  }
  return d;
}

CascadedChannelEstimate estimate_cascaded_ls(const ChannelRealization& ch,
                                             const TrainingDesign& design,
                                             const PilotConfig& cfg,
                                             RandomStream& rng) {
  cfg.validate();
  const int m_elems = ch.elements();
  const int unknowns = m_elems + 1;
  const int subframes = design.subframes();
  if (design.elements() != m_elems)
    throw std::invalid_argument("estimate_cascaded_ls: design/channel size mismatch");
  if (subframes < unknowns)
    throw std::invalid_argument(
        "estimate_cascaded_ls: underdetermined, need at least M+1 training "
        "subframes (got " + std::to_string(subframes) + " for M = " +
        std::to_string(m_elems) + ")");

  const int n_sc = cfg.n_subcarriers;
  const CascadedResponse truth = frequency_response(ch, n_sc);

  // Design matrix: one row per subframe, unknowns are the direct response
  // followed by the per-element cascaded responses.
  Eigen::MatrixXcd a(subframes, unknowns);
  for (int i = 0; i < subframes; ++i) {
    a(i, 0) = {1.0, 0.0};
    for (int m = 0; m < m_elems; ++m) a(i, m + 1) = design.coefficients(i, m);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < unknowns)
    throw std::invalid_argument(
        "estimate_cascaded_ls: rank-deficient training design (rank " +
        std::to_string(qr.rank()) + " of " + std::to_string(unknowns) +
        " unknowns); patterns do not span direct + per-element responses");

  CascadedChannelEstimate est;
  est.obs_noise_var = cfg.estimate_noise_var();
  const double sigma = std::sqrt(est.obs_noise_var);

  // Normalized per-subframe composite observations.
  Eigen::MatrixXcd z(subframes, n_sc);
  est.observations = CMat(subframes, n_sc);
  for (int i = 0; i < subframes; ++i) {
    CVec coeffs(static_cast<std::size_t>(m_elems));
    for (int m = 0; m < m_elems; ++m)
      coeffs[static_cast<std::size_t>(m)] = design.coefficients(i, m);
    const CVec h = truth.compose(coeffs);
    for (int k = 0; k < n_sc; ++k) {
      const Complex obs = h[static_cast<std::size_t>(k)] + sigma * rng.cgaussian();
      z(i, k) = obs;
      est.observations(i, k) = obs;
    }
  }

  const Eigen::MatrixXcd x = qr.solve(z);  // unknowns x n_sc

  est.response.direct.resize(static_cast<std::size_t>(n_sc));
  est.response.per_element = CMat(m_elems, n_sc);
  for (int k = 0; k < n_sc; ++k) {
    est.response.direct[static_cast<std::size_t>(k)] = x(0, k);
    for (int m = 0; m < m_elems; ++m) est.response.per_element(m, k) = x(m + 1, k);
  }

  const Eigen::MatrixXcd cov = (a.adjoint() * a).inverse();
  est.unknown_noise_var.resize(static_cast<std::size_t>(unknowns));
  for (int j = 0; j < unknowns; ++j)
    est.unknown_noise_var[static_cast<std::size_t>(j)] =
        est.obs_noise_var * cov(j, j).real();
  return est;
}

ThreePhaseOverhead three_phase_overhead(int num_users, int num_elements,
                                        int bs_antennas) {
  if (num_users < 1 || num_elements < 1 || bs_antennas < 1)
    throw std::invalid_argument("three_phase_overhead: all counts must be >= 1");
  ThreePhaseOverhead oh;
  oh.phase1_slots = num_users;
  oh.phase2_slots = num_elements;
  const long long extra = static_cast<long long>(num_users - 1);
  const long long ceil_part =
      (extra * num_elements + bs_antennas - 1) / bs_antennas;
  oh.phase3_slots = static_cast<int>(std::max(extra, ceil_part));
  return oh;
}

namespace {

int ceil_log2(long long v) {
  int bits = 0;
  long long cap = 1;
  while (cap < v) {
    cap <<= 1;
    ++bits;
  }
  return bits;
}

}  // namespace

long long control_signaling_bits(SignalingScheme scheme, int num_elements,
                                 int num_levels, int codebook_size) {
  switch (scheme) {
    case SignalingScheme::per_element:
      if (num_elements < 1 || num_levels < 2)
        throw std::invalid_argument("control_signaling_bits: need M >= 1, B >= 2");
      return static_cast<long long>(num_elements) * ceil_log2(num_levels);
    case SignalingScheme::codebook:
      if (codebook_size < 1)
        throw std::invalid_argument("control_signaling_bits: need Q >= 1");
      return ceil_log2(codebook_size);
    case SignalingScheme::fusion:
      if (codebook_size < 1)
        throw std::invalid_argument("control_signaling_bits: need Q >= 1");
      return codebook_size;
  }
  throw std::invalid_argument("control_signaling_bits: unknown scheme");
}

}  // namespace riscb

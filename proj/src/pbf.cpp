#include "riscb/pbf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riscb/metrics.hpp"

namespace riscb {

namespace {

// Samples sorted into codebook order, validating full coverage of Q entries.
std::vector<double> values_by_index(const std::vector<LabeledSample>& samples,
                                    const Codebook& cb) {
  if (samples.empty())
    throw std::invalid_argument("learning: empty sample set");
  if (static_cast<int>(samples.size()) != cb.size())
    throw std::invalid_argument("learning: need exactly one sample per codebook entry");
  std::vector<double> values(samples.size());
  std::vector<bool> seen(samples.size(), false);
  for (const auto& s : samples) {
    if (s.rp_index < 0 || s.rp_index >= cb.size())
      throw std::invalid_argument("learning: sample index out of range");
    if (seen[static_cast<std::size_t>(s.rp_index)])
      throw std::invalid_argument("learning: duplicate sample for one entry");
    if (!std::isfinite(s.objective_value))
      throw std::invalid_argument("learning: non-finite objective value");
    seen[static_cast<std::size_t>(s.rp_index)] = true;
    values[static_cast<std::size_t>(s.rp_index)] = s.objective_value;
  }
  return values;
}

int argmax_lowest(const std::vector<double>& values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i)
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)])
      best = i;
  return best;
}

}  // namespace

LearnResult rote_learn(const std::vector<LabeledSample>& samples,
                       const Codebook& cb) {
  const auto values = values_by_index(samples, cb);
  const int best = argmax_lowest(values);
  return {cb.patterns[static_cast<std::size_t>(best)], best, false};
}

LearnResult fusion_learn(const std::vector<LabeledSample>& samples,
                         const Codebook& cb, bool values_are_nonnegative) {
  auto values = values_by_index(samples, cb);
  const LearnResult rote = rote_learn(samples, cb);

  if (values_are_nonnegative) {
    for (double v : values)
      if (v < 0.0)
        throw std::invalid_argument(
            "fusion_learn: negative objective despite nonnegative flag");
  } else {
    const double lo = *std::min_element(values.begin(), values.end());
    for (double& v : values) v -= lo;
  }
  double total = 0.0;
  for (double v : values) total += v;
  if (total <= 0.0) {
    LearnResult r = rote;
    r.used_rote_fallback = true;
    return r;
  }

  const int m_elems = cb.elements();
  CVec fused(static_cast<std::size_t>(m_elems), Complex{0.0, 0.0});
  for (int q = 0; q < cb.size(); ++q) {
    const double w = values[static_cast<std::size_t>(q)] / total;
    if (w == 0.0) continue;
    const auto& p = cb.patterns[static_cast<std::size_t>(q)];
    for (int m = 0; m < m_elems; ++m)
      fused[static_cast<std::size_t>(m)] += w * p.coefficient(m);
  }

  std::vector<int> idx(static_cast<std::size_t>(m_elems));
  for (int m = 0; m < m_elems; ++m) {
    const Complex f = fused[static_cast<std::size_t>(m)];
    if (std::abs(f) < 1e-12) {
      idx[static_cast<std::size_t>(m)] = rote.pattern.indices()[static_cast<std::size_t>(m)];
    } else {
      idx[static_cast<std::size_t>(m)] = quantize_phase(std::arg(f), cb.levels());
    }
  }
  return {ReflectionPattern(std::move(idx), cb.levels()), -1, false};
}

namespace {

double evaluate_objective(const CVec& h, const AoOptions& opts) {
  if (opts.objective == PbfObjective::achievable_rate)
    return achievable_rate(h, opts.tx_power_mw, opts.noise_power_mw);
  return received_power(h, 1.0);
}

}  // namespace

AoResult ao_optimize(const CascadedResponse& basis, int num_levels,
                     const ReflectionPattern& init, const AoOptions& opts) {
  const int m_elems = basis.elements();
  const int n_sc = basis.subcarriers();
  if (init.size() != m_elems)
    throw std::invalid_argument("ao_optimize: init pattern size mismatch");
  if (init.switched_off())
    throw std::invalid_argument("ao_optimize: init pattern must be active");
  if (num_levels < 2)
    throw std::invalid_argument("ao_optimize: need at least 2 levels");
  if (opts.max_sweeps < 1)
    throw std::invalid_argument("ao_optimize: max_sweeps must be >= 1");

  std::vector<int> idx = init.indices();
  if (init.levels() != num_levels)
    for (auto& v : idx)
      v = quantize_phase(kTwoPi * v / init.levels(), num_levels);

  auto coeff_of = [&](int level) {
    const double ang = kTwoPi * level / num_levels;
    return Complex{std::cos(ang), std::sin(ang)};
  };

  CVec current = basis.direct;
  for (int m = 0; m < m_elems; ++m) {
    const Complex c = coeff_of(idx[static_cast<std::size_t>(m)]);
    const auto g = basis.per_element.row(m);
    for (int k = 0; k < n_sc; ++k) current[static_cast<std::size_t>(k)] += c * g[k];
  }

  AoResult result{ReflectionPattern(idx, num_levels), 0.0, {}, 0, false};
  double obj = evaluate_objective(current, opts);
  result.trace.push_back(obj);

  CVec rest(static_cast<std::size_t>(n_sc));
  CVec cand(static_cast<std::size_t>(n_sc));
  std::vector<double> sweep_trace;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    // A sweep whose total improvement stays below tolerance is rolled back,
    // so the returned pattern is stable under restart.
    const double sweep_start_obj = obj;
    const std::vector<int> idx_before = idx;
    const CVec current_before = current;
    bool changed = false;
    sweep_trace.clear();
    for (int m = 0; m < m_elems; ++m) {
      const auto g = basis.per_element.row(m);
      const Complex c_old = coeff_of(idx[static_cast<std::size_t>(m)]);
      for (int k = 0; k < n_sc; ++k)
        rest[static_cast<std::size_t>(k)] =
            current[static_cast<std::size_t>(k)] - c_old * g[k];

      int best_level = idx[static_cast<std::size_t>(m)];
      if (opts.objective == PbfObjective::received_power) {
        // Power is const + 2*Re(c * sum_k conj(rest_k) g_k): the optimum
        // continuous phase cancels that inner product's angle, and the
        // nearest grid level is the discrete optimum.
        Complex inner{0.0, 0.0};
        for (int k = 0; k < n_sc; ++k)
          inner += std::conj(rest[static_cast<std::size_t>(k)]) * g[k];
        if (std::abs(inner) > 0.0)
          best_level = quantize_phase(-std::arg(inner), num_levels);
      } else {
        double best_val = -1.0;
        for (int b = 0; b < num_levels; ++b) {
          const Complex c = coeff_of(b);
          for (int k = 0; k < n_sc; ++k)
            cand[static_cast<std::size_t>(k)] =
                rest[static_cast<std::size_t>(k)] + c * g[k];
          const double val = evaluate_objective(cand, opts);
          if (val > best_val) {
            best_val = val;
            best_level = b;
          }
        }
      }

      if (best_level != idx[static_cast<std::size_t>(m)]) {
        idx[static_cast<std::size_t>(m)] = best_level;
        changed = true;
      }
      const Complex c_new = coeff_of(best_level);
      for (int k = 0; k < n_sc; ++k)
        current[static_cast<std::size_t>(k)] =
            rest[static_cast<std::size_t>(k)] + c_new * g[k];
      obj = evaluate_objective(current, opts);
      sweep_trace.push_back(obj);
    }
    result.sweeps = sweep + 1;
    if (!changed) {
      result.converged = true;
      break;
    }
    const double scale =
        std::abs(sweep_start_obj) > 0.0 ? std::abs(sweep_start_obj) : 1.0;
    if (obj - sweep_start_obj < opts.rel_tolerance * scale) {
      idx = idx_before;
      current = current_before;
      obj = sweep_start_obj;
      result.converged = true;
      break;
    }
    result.trace.insert(result.trace.end(), sweep_trace.begin(),
                        sweep_trace.end());
  }

  result.pattern = ReflectionPattern(idx, num_levels);
  result.objective = obj;
  return result;
}

ReflectionPattern matched_phase_init(const CascadedResponse& basis,
                                     int num_levels) {
  const int m_elems = basis.elements();
  const int n_sc = basis.subcarriers();
  if (m_elems < 1 || n_sc < 1)
    throw std::invalid_argument("matched_phase_init: empty channel basis");

  double direct_energy = 0.0;
  for (const Complex& d : basis.direct) direct_energy += std::norm(d);
  const bool use_direct = direct_energy > 0.0;

  std::vector<int> idx(static_cast<std::size_t>(m_elems), 0);
  for (int m = 0; m < m_elems; ++m) {
    const auto g = basis.per_element.row(m);
    Complex inner{0.0, 0.0};
    for (int k = 0; k < n_sc; ++k) {
      const Complex ref =
          use_direct ? basis.direct[static_cast<std::size_t>(k)] : Complex{1.0, 0.0};
      inner += std::conj(ref) * g[k];
    }
    if (std::abs(inner) > 0.0)
      idx[static_cast<std::size_t>(m)] = quantize_phase(-std::arg(inner), num_levels);
  }
  return ReflectionPattern(std::move(idx), num_levels);
}

OracleResult continuous_alignment_oracle(const ChannelRealization& ch,
                                         double tx_power_mw,
                                         bool allow_narrowband_eval) {
  if (tx_power_mw <= 0.0)
    throw std::invalid_argument("alignment oracle: tx power must be positive");
  const bool narrowband =
      ch.direct_taps.size() == 1 && ch.cascaded_taps.cols() == 1;
  if (!narrowband && !allow_narrowband_eval)
    throw std::invalid_argument(
        "alignment oracle: multi-tap channel has no closed form; pass the "
        "narrowband flag to evaluate at subcarrier 0");

  // Subcarrier-0 response is the plain tap sum.
  Complex h_d{0.0, 0.0};
  for (const Complex& t : ch.direct_taps) h_d += t;

  OracleResult r;
  r.phases_rad.resize(static_cast<std::size_t>(ch.elements()));
  const double ref_phase = std::abs(h_d) > 0.0 ? std::arg(h_d) : 0.0;
  double amp = std::abs(h_d);
  for (int m = 0; m < ch.elements(); ++m) {
    Complex g{0.0, 0.0};
    for (const Complex& t : ch.cascaded_taps.row(m)) g += t;
    const double g_phase = std::abs(g) > 0.0 ? std::arg(g) : 0.0;
    r.phases_rad[static_cast<std::size_t>(m)] =
        std::remainder(ref_phase - g_phase, kTwoPi);
    amp += std::abs(g);
  }
  r.power_gain = amp * amp;
  r.received_power_mw = r.power_gain * tx_power_mw;
  return r;
}

ReflectionPattern random_phase_baseline(int num_elements, int num_levels,
                                        RandomStream& rng) {
  return ReflectionPattern::uniform_random(num_elements, num_levels, rng);
}

}  // namespace riscb

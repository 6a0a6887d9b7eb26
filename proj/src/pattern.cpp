#include "riscb/pattern.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace riscb {

int quantize_phase(double theta_rad, int num_levels) {
  if (num_levels < 2)
    throw std::invalid_argument("quantize_phase: need at least 2 levels");
  if (!std::isfinite(theta_rad))
    throw std::invalid_argument("quantize_phase: non-finite angle");
  // Work in index space: distances |t - b| mod B are exact doubles, so the
  // lowest-index tie-break behaves the same on every platform.
  const double t = theta_rad * num_levels / kTwoPi;
  int best = 0;
  double best_dist = std::abs(std::remainder(t, static_cast<double>(num_levels)));
  for (int b = 1; b < num_levels; ++b) {
    const double d =
        std::abs(std::remainder(t - b, static_cast<double>(num_levels)));
    if (d < best_dist) {
      best_dist = d;
      best = b;
    }
  }
  return best;
}

ReflectionPattern::ReflectionPattern(std::vector<int> phase_indices,
                                     int num_levels)
    : indices_(std::move(phase_indices)), levels_(num_levels) {
  if (levels_ < 2)
    throw std::invalid_argument("ReflectionPattern: need at least 2 levels");
  if (indices_.empty())
    throw std::invalid_argument("ReflectionPattern: no elements");
  for (int idx : indices_) {
    if (idx < 0 || idx >= levels_)
      throw std::invalid_argument("ReflectionPattern: phase index out of range");
  }
}

ReflectionPattern::ReflectionPattern(std::vector<int> idx, int levels, bool off)
    : indices_(std::move(idx)), levels_(levels), off_(off) {}

ReflectionPattern ReflectionPattern::all_off(int num_elements, int num_levels) {
  if (num_elements < 1)
    throw std::invalid_argument("ReflectionPattern: no elements");
  if (num_levels < 2)
    throw std::invalid_argument("ReflectionPattern: need at least 2 levels");
  return ReflectionPattern(std::vector<int>(num_elements, 0), num_levels, true);
}

ReflectionPattern ReflectionPattern::uniform_random(int num_elements,
                                                    int num_levels,
                                                    RandomStream& rng) {
  if (num_elements < 1)
    throw std::invalid_argument("ReflectionPattern: no elements");
  if (num_levels < 2)
    throw std::invalid_argument("ReflectionPattern: need at least 2 levels");
  std::vector<int> idx(static_cast<std::size_t>(num_elements));
  for (auto& i : idx) i = rng.uniform_int(num_levels);
  return ReflectionPattern(std::move(idx), num_levels);
}

Complex ReflectionPattern::coefficient(int m) const {
  if (off_) return {0.0, 0.0};
  const double ang = phase(m);
  return {std::cos(ang), std::sin(ang)};
}

CVec ReflectionPattern::coefficients() const {
  CVec c(indices_.size());
  for (int m = 0; m < size(); ++m) c[static_cast<std::size_t>(m)] = coefficient(m);
  return c;
}

}  // namespace riscb

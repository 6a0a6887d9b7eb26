#pragma once

#include <vector>

#include "riscb/core.hpp"
#include "riscb/rng.hpp"

namespace riscb {

// Nearest of the B legitimate phases 2*pi*b/B to theta (angular distance,
// wrap-around aware). Ties break toward the lower index. Throws if B < 2.
int quantize_phase(double theta_rad, int num_levels);

// One complete RIS configuration: a discrete phase index per element.
// A pattern can also represent the all-off state (every element absorbing),
// in which case all reflection coefficients are zero.
class ReflectionPattern {
 public:
  ReflectionPattern(std::vector<int> phase_indices, int num_levels);

  static ReflectionPattern all_off(int num_elements, int num_levels);
  static ReflectionPattern uniform_random(int num_elements, int num_levels,
                                          RandomStream& rng);

  int size() const { return static_cast<int>(indices_.size()); }
  int levels() const { return levels_; }
  bool switched_off() const { return off_; }
  const std::vector<int>& indices() const { return indices_; }

  double phase(int m) const { return kTwoPi * indices_[m] / levels_; }
  Complex coefficient(int m) const;
  CVec coefficients() const;

  bool operator==(const ReflectionPattern&) const = default;

 private:
  ReflectionPattern(std::vector<int> idx, int levels, bool off);

  std::vector<int> indices_;
  int levels_ = 2;
  bool off_ = false;
};

}  // namespace riscb

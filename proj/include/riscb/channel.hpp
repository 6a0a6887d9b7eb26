#pragma once

#include "riscb/core.hpp"
#include "riscb/pattern.hpp"
#include "riscb/rng.hpp"

namespace riscb {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);

// Per-link small-scale + large-scale parameters. K-factor is linear: 0 gives
// Rayleigh taps, large K approaches a deterministic LoS-only link. The LoS
// component always sits in tap 0; the exponential power-delay profile
// p_l ~ exp(-decay*l) shapes the diffuse part across all taps.
struct LinkFading {
  double rician_k = 0.0;
  double pathloss_exponent = 2.0;
  int num_taps = 1;
};

struct FadingParams {
  LinkFading direct{0.0, 3.5, 4};
  LinkFading incident{10.0, 2.2, 4};
  LinkFading reflected{3.0, 2.2, 4};
  double pdp_decay = 1.0;

  Vec3 bs_pos{0.0, 0.0, 0.0};
  Vec3 ris_pos{50.0, 0.0, 0.0};
  Vec3 ue_pos{51.95, 2.2798026298317483, 0.0};  // ~3 m from the RIS
  double reference_distance_m = 1.0;
  double reference_gain_db = -30.0;  // path gain at the reference distance
  bool direct_blocked = false;

  // LoS phases across the RIS follow a planar-array steering model.
  // ris_cols = 0 lays the elements out as a single row.
  double element_spacing_wl = 0.5;
  int ris_cols = 0;
  double incident_azimuth_rad = 0.5235987755982988;    // 30 deg
  double incident_elevation_rad = 0.0;
  double reflected_azimuth_rad = -0.6981317007977318;  // -40 deg
  double reflected_elevation_rad = 0.0;

  double link_gain(const LinkFading& link, double dist_m) const;
  void validate() const;  // throws std::invalid_argument
};

// One draw of all three constituent channels, time domain. cascaded_taps
// caches the per-element convolution incident*reflected.
struct ChannelRealization {
  CVec direct_taps;    // L_d
  CMat incident_taps;  // M x L_1
  CMat reflected_taps; // M x L_2
  CMat cascaded_taps;  // M x (L_1 + L_2 - 1)

  int elements() const { return incident_taps.rows(); }
};

ChannelRealization draw_channel(const FadingParams& params, int num_elements,
                                RandomStream& rng);

// Frequency-domain view of a realization: the direct response plus one
// response per RIS element, so the composite channel under any pattern is
// direct + sum_m coeff_m * per_element[m]. Also the shape in which the
// cascaded channel estimator reports its output.
struct CascadedResponse {
  CVec direct;       // n_subcarriers
  CMat per_element;  // M x n_subcarriers

  int elements() const { return per_element.rows(); }
  int subcarriers() const { return static_cast<int>(direct.size()); }

  CVec compose(const ReflectionPattern& rp) const;
  CVec compose(const CVec& coefficients) const;
};

CascadedResponse frequency_response(const ChannelRealization& ch,
                                    int n_subcarriers);

// Noiseless end-to-end composite channel over n_subcarriers for one pattern.
CVec compose_effective_channel(const ChannelRealization& ch,
                               const ReflectionPattern& rp, int n_subcarriers);

}  // namespace riscb

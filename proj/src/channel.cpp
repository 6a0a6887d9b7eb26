#include "riscb/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace riscb {

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double FadingParams::link_gain(const LinkFading& link, double dist_m) const {
  return db_to_linear(reference_gain_db) *
         std::pow(dist_m / reference_distance_m, -link.pathloss_exponent);
}

namespace {

void check_link(const LinkFading& link, const char* name) {
  if (link.num_taps < 1)
    throw std::invalid_argument(std::string(name) + ": need at least one tap");
  if (link.rician_k < 0.0)
    throw std::invalid_argument(std::string(name) + ": negative K-factor");
  if (link.pathloss_exponent <= 0.0)
    throw std::invalid_argument(std::string(name) +
                                ": path-loss exponent must be positive");
}

// Normalized exponential power-delay profile, p_l ~ exp(-decay*l).
std::vector<double> pdp(int num_taps, double decay) {
  std::vector<double> p(static_cast<std::size_t>(num_taps));
  double total = 0.0;
  for (int l = 0; l < num_taps; ++l) {
    p[static_cast<std::size_t>(l)] = std::exp(-decay * l);
    total += p[static_cast<std::size_t>(l)];
  }
  for (auto& v : p) v /= total;
  return p;
}

// LoS amplitude in tap 0 plus circular Gaussian scatter on every tap. The
// expected total tap power equals link_power exactly.
void draw_taps(std::span<Complex> taps, double link_power, double rician_k,
               const std::vector<double>& profile, double los_phase,
               RandomStream& rng) {
  const double los_power = link_power * rician_k / (rician_k + 1.0);
  const double diffuse_power = link_power / (rician_k + 1.0);
  const Complex los = std::sqrt(los_power) *
                      Complex{std::cos(los_phase), std::sin(los_phase)};
  for (std::size_t l = 0; l < taps.size(); ++l) {
    taps[l] = std::sqrt(diffuse_power * profile[l]) * rng.cgaussian();
    if (l == 0) taps[l] += los;
  }
}

CVec convolve(std::span<const Complex> a, std::span<const Complex> b) {
  CVec out(a.size() + b.size() - 1, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

void FadingParams::validate() const {
  check_link(direct, "direct link");
  check_link(incident, "incident link");
  check_link(reflected, "reflected link");
  if (pdp_decay < 0.0)
    throw std::invalid_argument("fading: negative PDP decay");
  if (reference_distance_m <= 0.0)
    throw std::invalid_argument("fading: reference distance must be positive");
  if (!std::isfinite(reference_gain_db))
    throw std::invalid_argument("fading: reference gain must be finite");
  if (ris_cols < 0)
    throw std::invalid_argument("fading: ris_cols must be >= 0");
  if (distance(bs_pos, ue_pos) <= 0.0 || distance(bs_pos, ris_pos) <= 0.0 ||
      distance(ris_pos, ue_pos) <= 0.0)
    throw std::invalid_argument("fading: nodes must be at distinct positions");
}

ChannelRealization draw_channel(const FadingParams& params, int num_elements,
                                RandomStream& rng) {
  if (num_elements < 1)
    throw std::invalid_argument("draw_channel: need at least one RIS element");
  params.validate();

  const double d_direct = distance(params.bs_pos, params.ue_pos);
  const double d_incident = distance(params.bs_pos, params.ris_pos);
  const double d_reflected = distance(params.ris_pos, params.ue_pos);

  const double p_direct =
      params.direct_blocked ? 0.0 : params.link_gain(params.direct, d_direct);
  const double p_incident = params.link_gain(params.incident, d_incident);
  const double p_reflected = params.link_gain(params.reflected, d_reflected);

  const auto pdp_d = pdp(params.direct.num_taps, params.pdp_decay);
  const auto pdp_i = pdp(params.incident.num_taps, params.pdp_decay);
  const auto pdp_r = pdp(params.reflected.num_taps, params.pdp_decay);

  const int cols = params.ris_cols > 0 ? params.ris_cols : num_elements;
  const double u_in = std::sin(params.incident_azimuth_rad) *
                      std::cos(params.incident_elevation_rad);
  const double v_in = std::sin(params.incident_elevation_rad);
  const double u_out = std::sin(params.reflected_azimuth_rad) *
                       std::cos(params.reflected_elevation_rad);
  const double v_out = std::sin(params.reflected_elevation_rad);
  auto steering = [&](int m, double u, double v) {
    const int row = m / cols;
    const int col = m % cols;
    return -kTwoPi * params.element_spacing_wl * (col * u + row * v);
  };

  ChannelRealization ch;
  ch.direct_taps.resize(static_cast<std::size_t>(params.direct.num_taps));
  draw_taps(ch.direct_taps, p_direct, params.direct.rician_k, pdp_d, 0.0, rng);

  ch.incident_taps = CMat(num_elements, params.incident.num_taps);
  for (int m = 0; m < num_elements; ++m)
    draw_taps(ch.incident_taps.row(m), p_incident, params.incident.rician_k,
              pdp_i, steering(m, u_in, v_in), rng);

  ch.reflected_taps = CMat(num_elements, params.reflected.num_taps);
  for (int m = 0; m < num_elements; ++m)
    draw_taps(ch.reflected_taps.row(m), p_reflected, params.reflected.rician_k,
              pdp_r, steering(m, u_out, v_out), rng);

  ch.cascaded_taps =
      CMat(num_elements, params.incident.num_taps + params.reflected.num_taps - 1);
  for (int m = 0; m < num_elements; ++m) {
    const CVec casc = convolve(ch.incident_taps.row(m), ch.reflected_taps.row(m));
    auto dst = ch.cascaded_taps.row(m);
    for (std::size_t l = 0; l < casc.size(); ++l) dst[l] = casc[l];
  }
  return ch;
}

CVec CascadedResponse::compose(const ReflectionPattern& rp) const {
  if (rp.size() != elements())
    throw std::invalid_argument("compose: pattern size does not match channel");
  if (rp.switched_off()) return direct;
  return compose(rp.coefficients());
}

CVec CascadedResponse::compose(const CVec& coefficients) const {
  if (static_cast<int>(coefficients.size()) != elements())
    throw std::invalid_argument("compose: coefficient count does not match channel");
  CVec h = direct;
  for (int m = 0; m < elements(); ++m) {
    const Complex c = coefficients[static_cast<std::size_t>(m)];
    const auto g = per_element.row(m);
    for (std::size_t k = 0; k < h.size(); ++k) h[k] += c * g[k];
  }
  return h;
}

CascadedResponse frequency_response(const ChannelRealization& ch,
                                    int n_subcarriers) {
  const int total_taps = std::max(static_cast<int>(ch.direct_taps.size()),
                                  ch.cascaded_taps.cols());
  if (n_subcarriers < total_taps)
    throw std::invalid_argument(
        "frequency_response: need at least as many subcarriers as taps");
  CascadedResponse fr;
  fr.direct = freq_response(ch.direct_taps, n_subcarriers);
  fr.per_element = CMat(ch.elements(), n_subcarriers);
  for (int m = 0; m < ch.elements(); ++m) {
    const CVec h = freq_response(ch.cascaded_taps.row(m), n_subcarriers);
    auto dst = fr.per_element.row(m);
    for (std::size_t k = 0; k < h.size(); ++k) dst[k] = h[k];
  }
  return fr;
}

CVec compose_effective_channel(const ChannelRealization& ch,
                               const ReflectionPattern& rp, int n_subcarriers) {
  if (rp.size() != ch.elements())
    throw std::invalid_argument(
        "compose_effective_channel: pattern size does not match channel");
  CVec h = freq_response(ch.direct_taps, n_subcarriers);
  const int total_taps = std::max(static_cast<int>(ch.direct_taps.size()),
                                  ch.cascaded_taps.cols());
  if (n_subcarriers < total_taps)
    throw std::invalid_argument(
        "compose_effective_channel: need at least as many subcarriers as taps");
  if (rp.switched_off()) return h;
  for (int m = 0; m < ch.elements(); ++m) {
    const Complex c = rp.coefficient(m);
    const CVec g = freq_response(ch.cascaded_taps.row(m), n_subcarriers);
    for (std::size_t k = 0; k < h.size(); ++k) h[k] += c * g[k];
  }
  return h;
}

}  // namespace riscb

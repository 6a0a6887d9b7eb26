#include "riscb/core.hpp"

namespace riscb {

CVec freq_response(std::span<const Complex> taps, int n_subcarriers) {
  CVec h(static_cast<std::size_t>(n_subcarriers), Complex{0.0, 0.0});
  const double step = -kTwoPi / n_subcarriers;
  for (int k = 0; k < n_subcarriers; ++k) {
    Complex acc{0.0, 0.0};
    for (std::size_t l = 0; l < taps.size(); ++l) {
      const double ang = step * k * static_cast<double>(l);
      acc += taps[l] * Complex{std::cos(ang), std::sin(ang)};
    }
    h[static_cast<std::size_t>(k)] = acc;
  }
  return h;
}

}  // namespace riscb

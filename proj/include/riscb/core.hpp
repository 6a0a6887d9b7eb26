#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace riscb {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Dense row-major complex matrix. Just enough for tap tables and
// per-element frequency responses; no general linear algebra.
class CMat {
 public:
  CMat() = default;
  CMat(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

  Complex& operator()(int r, int c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  const Complex& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::span<Complex> row(int r) {
    return {data_.data() + static_cast<std::size_t>(r) * cols_,
            static_cast<std::size_t>(cols_)};
  }
  std::span<const Complex> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * cols_,
            static_cast<std::size_t>(cols_)};
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  bool operator==(const CMat&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  CVec data_;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Frequency response of a tap vector at n uniformly spaced subcarriers,
// H[k] = sum_l taps[l] * exp(-j*2*pi*k*l/n).
CVec freq_response(std::span<const Complex> taps, int n_subcarriers);

}  // namespace riscb

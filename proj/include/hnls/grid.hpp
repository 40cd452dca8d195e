#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hnls/fft.hpp"

namespace hnls {

/// Periodic collocation grid on the box [-L/2, L/2) with n points and the
/// matched discrete frequency set xi_k = 2 pi k / L, k in FFT layout
/// (0, 1, ..., n/2-1, -n/2, ..., -1). Cheap to copy; the FFT tables are
/// shared immutably between copies.
class Grid {
public:
  Grid(std::size_t n, double length) : n_(n), length_(length) {
    if (n < 8 || (n & (n - 1)) != 0)
      throw std::invalid_argument("Grid: n must be a power of two >= 8");
    if (!(length > 0.0) || !std::isfinite(length))
      throw std::invalid_argument("Grid: length must be positive and finite");
    dx_ = length / static_cast<double>(n);
    dxi_ = 2.0 * FftPlan::pi() / length;
    x_.resize(n);
    k_.resize(n);
    xi_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      x_[j] = -0.5 * length + dx_ * static_cast<double>(j);
      const long kk = j < n / 2 ? static_cast<long>(j)
                                : static_cast<long>(j) - static_cast<long>(n);
      k_[j] = kk;
      xi_[j] = dxi_ * static_cast<double>(kk);
    }
    plan_ = std::make_shared<const FftPlan>(n);
  }

  std::size_t n() const { return n_; }
  double length() const { return length_; }
  double dx() const { return dx_; }
  double dxi() const { return dxi_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& frequencies() const { return xi_; }
  const std::vector<long>& mode_indices() const { return k_; }
  std::size_t nyquist_index() const { return n_ / 2; }
  double max_frequency() const { return dxi_ * static_cast<double>(n_ / 2); }
  const FftPlan& plan() const { return *plan_; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }
  friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

private:
  std::size_t n_;
  double length_;
  double dx_;
  double dxi_;
  std::vector<double> x_;
  std::vector<long> k_;
  std::vector<double> xi_;
  std::shared_ptr<const FftPlan> plan_;
};

}  // namespace hnls

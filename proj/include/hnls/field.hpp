#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hnls/grid.hpp"

namespace hnls {

namespace detail {
inline bool all_finite(const std::vector<cplx>& v) {
  for (const cplx& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}
}  // namespace detail

/// Complex-valued state u(x_j) sampled on a Grid.
struct Field {
  Grid grid;
  std::vector<cplx> values;

  Field(Grid g, std::vector<cplx> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.n())
      throw std::invalid_argument("Field: values length does not match grid");
  }

  explicit Field(const Grid& g) : grid(g), values(g.n(), cplx{0.0, 0.0}) {}

  static Field sample(const Grid& g, const std::function<cplx(double)>& f) {
    Field out(g);
    for (std::size_t j = 0; j < g.n(); ++j) out.values[j] = f(g.x()[j]);
    return out;
  }

  bool finite() const { return detail::all_finite(values); }
};

/// Discrete Fourier coefficients u_hat(xi_k) in FFT layout, normalized so
/// that sum |u|^2 dx = sum |u_hat|^2 dxi (discrete Plancherel with the
/// quadrature weights dx and dxi = 2 pi / L).
struct Spectrum {
  Grid grid;
  std::vector<cplx> coeffs;

  Spectrum(Grid g, std::vector<cplx> c) : grid(std::move(g)), coeffs(std::move(c)) {
    if (coeffs.size() != grid.n())
      throw std::invalid_argument("Spectrum: coeffs length does not match grid");
  }

  explicit Spectrum(const Grid& g) : grid(g), coeffs(g.n(), cplx{0.0, 0.0}) {}

  bool finite() const { return detail::all_finite(coeffs); }
};

}  // namespace hnls

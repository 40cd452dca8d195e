#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "hnls/field.hpp"

namespace hnls {

namespace detail {

constexpr double sqrt_2pi = 2.506628274631000502415765284811;

// The collocation points carry the -L/2 offset, so e^{-i xi_k x_j} picks up
// e^{i pi k} = (-1)^k relative to the plain DFT. n is even, hence (-1)^k
// equals (-1)^m at storage index m.
inline void apply_offset_sign(std::vector<cplx>& a) {
  for (std::size_t m = 1; m < a.size(); m += 2) a[m] = -a[m];
}

}  // namespace detail

/// Forward transform: u_hat(xi_k) = dx/sqrt(2 pi) * sum_j u(x_j) e^{-i xi_k x_j}.
inline Spectrum forward(const Field& field) {
  if (!field.finite())
    throw std::invalid_argument("forward: field contains non-finite values");
  Spectrum out(field.grid, field.values);
  field.grid.plan().forward(out.coeffs.data());
  detail::apply_offset_sign(out.coeffs);
  const double scale = field.grid.dx() / detail::sqrt_2pi;
  for (cplx& z : out.coeffs) z *= scale;
  return out;
}

/// Inverse transform: u(x_j) = dxi/sqrt(2 pi) * sum_k u_hat(xi_k) e^{i xi_k x_j}.
inline Field inverse(const Spectrum& spectrum) {
  if (!spectrum.finite())
    throw std::invalid_argument("inverse: spectrum contains non-finite values");
  Field out(spectrum.grid, spectrum.coeffs);
  detail::apply_offset_sign(out.values);
  spectrum.grid.plan().inverse(out.values.data());
  const double scale = spectrum.grid.dxi() / detail::sqrt_2pi;
  for (cplx& z : out.values) z *= scale;
  return out;
}

/// Multiply coefficient k by (i xi_k)^order. The Nyquist mode is zeroed for
/// odd orders so derivatives of real fields stay real.
inline Spectrum spectral_derivative(const Spectrum& spectrum, int order) {
  if (order < 0 || order > 3)
    throw std::invalid_argument("spectral_derivative: order must be in {0,1,2,3}");
  Spectrum out = spectrum;
  if (order == 0) return out;
  const auto& xi = spectrum.grid.frequencies();
  for (std::size_t m = 0; m < out.coeffs.size(); ++m) {
    cplx mult{1.0, 0.0};
    for (int r = 0; r < order; ++r) mult *= cplx{0.0, xi[m]};
    out.coeffs[m] *= mult;
  }
  if (order % 2 == 1) out.coeffs[spectrum.grid.nyquist_index()] = cplx{0.0, 0.0};
  return out;
}

/// 2/3-rule dealiasing: zero all modes with |k| > n/3.
inline Spectrum dealias(const Spectrum& spectrum) {
  Spectrum out = spectrum;
  const auto& k = spectrum.grid.mode_indices();
  const double cut = static_cast<double>(spectrum.grid.n()) / 3.0;
  for (std::size_t m = 0; m < out.coeffs.size(); ++m)
    if (std::abs(static_cast<double>(k[m])) > cut) out.coeffs[m] = cplx{0.0, 0.0};
  return out;
}

/// Sharp frequency cutoff: zero all modes with |xi_k| > lambda.
inline Spectrum frequency_truncate(const Spectrum& spectrum, double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("frequency_truncate: lambda must be positive");
  Spectrum out = spectrum;
  const auto& xi = spectrum.grid.frequencies();
  for (std::size_t m = 0; m < out.coeffs.size(); ++m)
    if (std::abs(xi[m]) > lambda) out.coeffs[m] = cplx{0.0, 0.0};
  return out;
}

}  // namespace hnls

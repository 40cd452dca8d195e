#pragma once

#include <cmath>
#include <stdexcept>

namespace hnls {

/// The five real coefficients of
///   du/dt + i a u_xx + b u_xxx + i c |u|^2 u + d |u|^2 u_x + e u^2 conj(u)_x = 0.
struct EquationParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;

  void validate() const {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) &&
          std::isfinite(d) && std::isfinite(e)))
      throw std::invalid_argument("EquationParams: coefficients must be finite");
  }

  /// be != 0: the second conserved quantity I2 exists.
  bool has_i2() const { return b * e != 0.0; }
  /// b != 0: third-order dispersion present (required by the persistence theory).
  bool dispersive() const { return b != 0.0; }
};

/// Coefficients derived from EquationParams: the I2 weights and the Gronwall
/// rate a0 of the weighted-norm growth bound.
struct ConservedCoefficients {
  double C1;  // 3 b e
  double C2;  // -e (e + d) / 2
  double C3;  // 3 b c - a (d + e)
  double a0;  // 2|a| + 3|b| + |d + e| / 2

  static ConservedCoefficients from(const EquationParams& p) {
    p.validate();
    return {3.0 * p.b * p.e, -p.e * (p.e + p.d) / 2.0,
            3.0 * p.b * p.c - p.a * (p.d + p.e),
            2.0 * std::abs(p.a) + 3.0 * std::abs(p.b) + std::abs(p.d + p.e) / 2.0};
  }
};

}  // namespace hnls

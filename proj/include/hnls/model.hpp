#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "hnls/norms.hpp"
#include "hnls/params.hpp"
#include "hnls/spectral.hpp"

namespace hnls {

/// Dispersion relation of the free flow: phi(xi) = a xi^2 + b xi^3.
inline double linear_symbol(const EquationParams& p, double xi) {
  return p.a * xi * xi + p.b * xi * xi * xi;
}

namespace detail {

/// Evaluates N(u_hat) = -fft(F(u)) with F(u) = i c |u|^2 u + d |u|^2 u_x
/// + e u^2 conj(u_x), working on raw coefficient vectors in FFT layout.
/// Buffers are per-instance, so distinct workspaces may run concurrently.
class NonlinearityWorkspace {
public:
  explicit NonlinearityWorkspace(const Grid& g)
      : grid_(g), u_(g.n()), ux_(g.n()), fh_(g.n()) {}

  const Grid& grid() const { return grid_; }

  void eval(const std::vector<cplx>& uhat, const EquationParams& p,
            bool apply_dealias, std::vector<cplx>& out) {
    const std::size_t n = grid_.n();
    const auto& xi = grid_.frequencies();
    const double inv_scale = grid_.dxi() / sqrt_2pi;
    // physical field and its spectral x-derivative
    for (std::size_t m = 0; m < n; ++m) {
      const double sgn = (m & 1) ? -1.0 : 1.0;
      const cplx c = sgn * inv_scale * uhat[m];
      u_[m] = c;
      ux_[m] = cplx{0.0, xi[m]} * c;
    }
    ux_[grid_.nyquist_index()] = cplx{0.0, 0.0};
    grid_.plan().inverse(u_.data());
    grid_.plan().inverse(ux_.data());
    // pointwise F(u)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx uj = u_[j];
      const double mag2 = uj.real() * uj.real() + uj.imag() * uj.imag();
      fh_[j] = cplx{0.0, p.c} * mag2 * uj + p.d * mag2 * ux_[j] +
               p.e * uj * uj * std::conj(ux_[j]);
    }
    grid_.plan().forward(fh_.data());
    const double fwd_scale = grid_.dx() / sqrt_2pi;
    const double cut = static_cast<double>(n) / 3.0;
    const auto& k = grid_.mode_indices();
    out.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
      if (apply_dealias && std::abs(static_cast<double>(k[m])) > cut) {
        out[m] = cplx{0.0, 0.0};
      } else {
        const double sgn = (m & 1) ? -1.0 : 1.0;
        out[m] = -sgn * fwd_scale * fh_[m];
      }
    }
  }

private:
  static constexpr double sqrt_2pi = detail::sqrt_2pi;
  Grid grid_;
  std::vector<cplx> u_, ux_, fh_;
};

}  // namespace detail

/// F(u) = i c |u|^2 u + d |u|^2 u_x + e u^2 conj(u_x), u_x spectral, the
/// product dealiased by the 2/3 rule.
inline Field nonlinearity(const Field& u, const EquationParams& p,
                          bool apply_dealias = true) {
  if (!u.finite())
    throw std::invalid_argument("nonlinearity: field contains non-finite values");
  p.validate();
  detail::NonlinearityWorkspace ws(u.grid);
  std::vector<cplx> nh;
  ws.eval(forward(u).coeffs, p, apply_dealias, nh);
  Field out = inverse(Spectrum(u.grid, std::move(nh)));
  for (cplx& z : out.values) z = -z;  // workspace returns -fft(F)
  return out;
}

/// Free propagator U(t): multiply the spectrum by exp(i t phi(xi)).
inline Field apply_group(const Field& u, double t, const EquationParams& p) {
  p.validate();
  Spectrum sp = forward(u);
  const auto& xi = u.grid.frequencies();
  for (std::size_t m = 0; m < sp.coeffs.size(); ++m)
    sp.coeffs[m] *= std::polar(1.0, t * linear_symbol(p, xi[m]));
  return inverse(sp);
}

struct GaugeRemoveC3Result {
  EquationParams params;
  double alpha;
};

/// Phase/frame change removing the C3 term from I2: alpha = C3 / (6 b e),
/// new coefficients (a + 3 alpha b, b, c - alpha (e - d), d, e).
inline GaugeRemoveC3Result gauge_remove_C3(const EquationParams& p) {
  p.validate();
  if (!p.has_i2())
    throw std::invalid_argument("gauge_remove_C3: requires b*e != 0");
  const auto cc = ConservedCoefficients::from(p);
  const double alpha = cc.C3 / (6.0 * p.b * p.e);
  EquationParams q{p.a + 3.0 * alpha * p.b, p.b, p.c - alpha * (p.e - p.d), p.d, p.e};
  return {q, alpha};
}

struct GaugeToMkdvResult {
  Field v;
  EquationParams reduced;
};

/// Under c = (d - e) a / (3 b), maps u(.,t) to the complex-mKdV unknown
/// v(x,t) = exp(i((a/3b) x + (a^3/27b^2) t)) u(x + (a^2/3b) t, t). The shift
/// is a spectral phase; the multiplicative phase requires a/3b to sit on the
/// torus wavenumber lattice (2 pi / L) Z.
inline GaugeToMkdvResult gauge_to_mkdv(const Field& u, double t,
                                       const EquationParams& p) {
  p.validate();
  if (!p.dispersive())
    throw std::invalid_argument("gauge_to_mkdv: requires b != 0");
  const double target_c = (p.d - p.e) * p.a / (3.0 * p.b);
  if (std::abs(p.c - target_c) > 1e-10)
    throw std::invalid_argument(
        "gauge_to_mkdv: reduction condition c = (d-e)a/(3b) violated");
  const double beta = p.a / (3.0 * p.b);
  const double dxi = u.grid.dxi();
  const double m_real = beta / dxi;
  const double m_round = std::round(m_real);
  if (std::abs(m_real - m_round) > 1e-9 * std::max(1.0, std::abs(m_real))) {
    const double a_near = 3.0 * p.b * m_round * dxi;
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "gauge_to_mkdv: a/(3b) is not on the torus lattice (2pi/L)Z;"
                  " nearest admissible a = %.17g", a_near);
    throw std::invalid_argument(msg);
  }
  const double shift = p.a * p.a / (3.0 * p.b) * t;
  const double gamma = std::pow(p.a, 3) / (27.0 * p.b * p.b) * t;
  Spectrum sp = forward(u);
  const auto& xi = u.grid.frequencies();
  for (std::size_t m = 0; m < sp.coeffs.size(); ++m)
    sp.coeffs[m] *= std::polar(1.0, xi[m] * shift);
  Field v = inverse(sp);
  const auto& x = u.grid.x();
  for (std::size_t j = 0; j < v.values.size(); ++j)
    v.values[j] *= std::polar(1.0, beta * x[j] + gamma);
  return {std::move(v), EquationParams{0.0, p.b, 0.0, p.d, p.e}};
}

struct ResidualReport {
  std::vector<double> times;   // interior frame times
  std::vector<double> values;  // L2 norm of the discrete PDE residual
};

/// || du/dt + i a u_xx + b u_xxx + F(u) ||_{L2} at interior frames, du/dt by
/// centered difference. Frames must be uniformly spaced in time.
inline ResidualReport residual(const std::vector<double>& times,
                               const std::vector<Field>& frames,
                               const EquationParams& p) {
  if (times.size() != frames.size())
    throw std::invalid_argument("residual: times/frames size mismatch");
  if (frames.size() < 3)
    throw std::invalid_argument("residual: needs at least 3 frames");
  const double h = times[1] - times[0];
  for (std::size_t i = 1; i + 1 < times.size(); ++i)
    if (std::abs((times[i + 1] - times[i]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw std::invalid_argument("residual: frames not uniformly spaced");
  ResidualReport rep;
  for (std::size_t i = 1; i + 1 < frames.size(); ++i) {
    const Spectrum sp = forward(frames[i]);
    const Field uxx = inverse(spectral_derivative(sp, 2));
    const Field uxxx = inverse(spectral_derivative(sp, 3));
    const Field f = nonlinearity(frames[i], p);
    Field r(frames[i].grid);
    for (std::size_t j = 0; j < r.values.size(); ++j) {
      const cplx dt_u = (frames[i + 1].values[j] - frames[i - 1].values[j]) / (2.0 * h);
      r.values[j] = dt_u + cplx{0.0, p.a} * uxx.values[j] + p.b * uxxx.values[j] +
                    f.values[j];
    }
    rep.times.push_back(times[i]);
    rep.values.push_back(norm_l2(r));
  }
  return rep;
}

}  // namespace hnls

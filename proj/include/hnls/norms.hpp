#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hnls/params.hpp"
#include "hnls/spectral.hpp"

namespace hnls {

enum class NormKind { L2, HsDot, Hs, WeightedMu, WeightedMuDot, Xstheta };

/// Selects one of the norms of the weighted-Sobolev toolbox. s is the
/// Sobolev index (Hs, HsDot, Xstheta); theta in [0,1] is the weight exponent
/// (WeightedMu, WeightedMuDot, Xstheta).
struct NormRequest {
  NormKind kind = NormKind::L2;
  double s = 0.0;
  double theta = 0.0;

  void validate() const {
    if (!(s >= 0.0) || !std::isfinite(s))
      throw std::invalid_argument("NormRequest: s must be >= 0");
    if (!(theta >= 0.0 && theta <= 1.0))
      throw std::invalid_argument("NormRequest: theta must lie in [0,1]");
  }
};

namespace detail {

// |x|^{2 theta} with the theta = 0 weight identically 1 (including x = 0),
// so WeightedMuDot reduces exactly to L2 at the endpoint.
inline double mu_dot_weight(double x, double theta) {
  if (theta == 0.0) return 1.0;
  return std::pow(std::abs(x), 2.0 * theta);
}

inline double mu_weight(double x, double theta) {
  if (theta == 0.0) return 1.0;
  return std::pow(1.0 + x * x, theta);
}

inline double abs2(const cplx& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

}  // namespace detail

inline double norm_l2(const Field& u) {
  double s = 0.0;
  for (const cplx& z : u.values) s += detail::abs2(z);
  return std::sqrt(s * u.grid.dx());
}

inline double norm_hs(const Field& u, double s) {
  const Spectrum sp = forward(u);
  double acc = 0.0;
  const auto& xi = u.grid.frequencies();
  for (std::size_t m = 0; m < sp.coeffs.size(); ++m)
    acc += std::pow(1.0 + xi[m] * xi[m], s) * detail::abs2(sp.coeffs[m]);
  return std::sqrt(acc * u.grid.dxi());
}

inline double norm_hs_dot(const Field& u, double s) {
  const Spectrum sp = forward(u);
  double acc = 0.0;
  const auto& xi = u.grid.frequencies();
  for (std::size_t m = 0; m < sp.coeffs.size(); ++m)
    acc += detail::mu_dot_weight(xi[m], s) * detail::abs2(sp.coeffs[m]);
  return std::sqrt(acc * u.grid.dxi());
}

inline double norm_weighted_mu(const Field& u, double theta) {
  double acc = 0.0;
  const auto& x = u.grid.x();
  for (std::size_t j = 0; j < u.values.size(); ++j)
    acc += detail::mu_weight(x[j], theta) * detail::abs2(u.values[j]);
  return std::sqrt(acc * u.grid.dx());
}

inline double norm_weighted_mu_dot(const Field& u, double theta) {
  double acc = 0.0;
  const auto& x = u.grid.x();
  for (std::size_t j = 0; j < u.values.size(); ++j)
    acc += detail::mu_dot_weight(x[j], theta) * detail::abs2(u.values[j]);
  return std::sqrt(acc * u.grid.dx());
}

/// Dispatch over NormRequest. Sobolev kinds are evaluated in Fourier space,
/// weighted kinds in physical space with x measured from the box center;
/// Xstheta is the sum ||.||_{H^s} + ||.||_{L2(d mu_theta)}.
inline double norm(const Field& u, const NormRequest& req) {
  req.validate();
  switch (req.kind) {
    case NormKind::L2: return norm_l2(u);
    case NormKind::Hs: return norm_hs(u, req.s);
    case NormKind::HsDot: return norm_hs_dot(u, req.s);
    case NormKind::WeightedMu: return norm_weighted_mu(u, req.theta);
    case NormKind::WeightedMuDot: return norm_weighted_mu_dot(u, req.theta);
    case NormKind::Xstheta: return norm_hs(u, req.s) + norm_weighted_mu(u, req.theta);
  }
  throw std::logic_error("norm: unknown kind");
}

/// I1 = integral of |u|^2 dx (mass, Eq.-level conserved quantity).
inline double invariant_I1(const Field& u) {
  double acc = 0.0;
  for (const cplx& z : u.values) acc += detail::abs2(z);
  return acc * u.grid.dx();
}

/// I2 = C1 ||u_x||^2 + C2 ||u||_{L4}^4 + C3 Im int u conj(u_x) dx, defined for
/// be != 0. The quartic term is evaluated on the dealiased field.
inline double invariant_I2(const Field& u, const EquationParams& p) {
  if (!p.has_i2())
    throw std::invalid_argument("invariant_I2: requires b*e != 0");
  const auto cc = ConservedCoefficients::from(p);
  const Spectrum sp = forward(u);
  const Field ux = inverse(spectral_derivative(sp, 1));
  const Field ud = inverse(dealias(sp));
  double grad = 0.0, quart = 0.0, imt = 0.0;
  for (std::size_t j = 0; j < u.values.size(); ++j) {
    grad += detail::abs2(ux.values[j]);
    const double q = detail::abs2(ud.values[j]);
    quart += q * q;
    imt += std::imag(u.values[j] * std::conj(ux.values[j]));
  }
  const double dx = u.grid.dx();
  return cc.C1 * grad * dx + cc.C2 * quart * dx + cc.C3 * imt * dx;
}

/// Mixed space-time norm L^p_x L^q_t over uniformly spaced frames: inner
/// q-norm over time per grid point (trapezoidal in t; max over frames when
/// q = infinity), then the p-norm over space. p, q >= 1 or infinity.
inline double mixed_norm(const std::vector<double>& times,
                         const std::vector<Field>& frames, double p, double q) {
  if (times.empty() || times.size() != frames.size())
    throw std::invalid_argument("mixed_norm: empty or inconsistent trajectory");
  const bool pinf = std::isinf(p), qinf = std::isinf(q);
  if ((!pinf && !(p >= 1.0)) || (!qinf && !(q >= 1.0)))
    throw std::invalid_argument("mixed_norm: p, q must be >= 1 or infinity");
  double h = 0.0;
  if (times.size() > 1) {
    h = times[1] - times[0];
    for (std::size_t i = 1; i + 1 < times.size(); ++i)
      if (std::abs((times[i + 1] - times[i]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
        throw std::invalid_argument("mixed_norm: times not uniformly spaced");
  }
  const Grid& g = frames.front().grid;
  double outer = 0.0, outer_max = 0.0;
  for (std::size_t j = 0; j < g.n(); ++j) {
    double inner;
    if (qinf) {
      inner = 0.0;
      for (const Field& f : frames) inner = std::max(inner, std::abs(f.values[j]));
    } else if (frames.size() == 1) {
      inner = 0.0;  // zero-length time interval
    } else {
      double acc = 0.0;
      for (std::size_t i = 0; i < frames.size(); ++i) {
        const double w = (i == 0 || i + 1 == frames.size()) ? 0.5 : 1.0;
        acc += w * std::pow(std::abs(frames[i].values[j]), q);
      }
      inner = std::pow(acc * std::abs(h), 1.0 / q);
    }
    if (pinf)
      outer_max = std::max(outer_max, inner);
    else
      outer += std::pow(inner, p);
  }
  return pinf ? outer_max : std::pow(outer * g.dx(), 1.0 / p);
}

/// Grid realization of the Sobolev embedding constant:
/// max|u| <= C_s ||u||_{H^s} with C_s = (sum (1+xi^2)^{-s} dxi)^{1/2}.
inline double sobolev_embedding_constant(const Grid& g, double s) {
  if (!(s > 0.5))
    throw std::invalid_argument("sobolev_embedding_constant: requires s > 1/2");
  double acc = 0.0;
  for (double xi : g.frequencies()) acc += std::pow(1.0 + xi * xi, -s);
  return std::sqrt(acc * g.dxi());
}

/// Per-frame diagnostics attached to a trajectory. I2 is present only when
/// the run's coefficients have be != 0.
struct DiagnosticsRecord {
  double t = 0.0;
  double I1 = 0.0;
  std::optional<double> I2;
  double l2 = 0.0;
  double h1dot = 0.0;
  double h2dot = 0.0;
  std::vector<double> weighted_mu_dot;  // one entry per requested theta
  std::vector<double> x2theta;          // one entry per requested theta
  double edge_mass = 0.0;               // relative |u|^2 mass in outer 10% of box
};

/// Relative mass of |u|^2 within 5% of either box edge (|x| >= 0.45 L).
inline double edge_mass(const Field& u) {
  const double cut = 0.45 * u.grid.length();
  double outer = 0.0, total = 0.0;
  const auto& x = u.grid.x();
  for (std::size_t j = 0; j < u.values.size(); ++j) {
    const double q = detail::abs2(u.values[j]);
    total += q;
    if (std::abs(x[j]) >= cut) outer += q;
  }
  return total > 0.0 ? outer / total : 0.0;
}

inline DiagnosticsRecord compute_diagnostics(const Field& u, double t,
                                             const EquationParams& p,
                                             const std::vector<double>& thetas) {
  DiagnosticsRecord rec;
  rec.t = t;
  rec.I1 = invariant_I1(u);
  if (p.has_i2()) rec.I2 = invariant_I2(u, p);
  rec.l2 = norm_l2(u);
  rec.h1dot = norm_hs_dot(u, 1.0);
  rec.h2dot = norm_hs_dot(u, 2.0);
  const double h2 = norm_hs(u, 2.0);
  for (double th : thetas) {
    rec.weighted_mu_dot.push_back(norm_weighted_mu_dot(u, th));
    rec.x2theta.push_back(h2 + norm_weighted_mu(u, th));
  }
  rec.edge_mass = edge_mass(u);
  return rec;
}

/// Fixed CSV schema: t, I1, I2, l2, h1dot, h2dot, one column per theta for
/// each weighted kind, then edge_mass. I2 is written as nan when be = 0.
inline std::string diagnostics_csv_header(const std::vector<double>& thetas) {
  std::string h = "t,I1,I2,l2,h1dot,h2dot";
  char buf[64];
  for (double th : thetas) {
    std::snprintf(buf, sizeof(buf), ",mu_dot_theta_%g", th);
    h += buf;
  }
  for (double th : thetas) {
    std::snprintf(buf, sizeof(buf), ",x2_theta_%g", th);
    h += buf;
  }
  h += ",edge_mass";
  return h;
}

inline std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::string row = num(r.t) + "," + num(r.I1) + "," +
                    num(r.I2 ? *r.I2 : std::numeric_limits<double>::quiet_NaN()) +
                    "," + num(r.l2) + "," + num(r.h1dot) + "," + num(r.h2dot);
  for (double v : r.weighted_mu_dot) row += "," + num(v);
  for (double v : r.x2theta) row += "," + num(v);
  row += "," + num(r.edge_mass);
  return row;
}

}  // namespace hnls

#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "hnls/model.hpp"
#include "hnls/norms.hpp"

namespace hnls {

/// Fixed-step solver settings. The dispersive part is applied exactly, so dt
/// is constrained only by the nonlinearity: keep
/// dt <= 1 / max(1, sup|u|^2 * max|xi|) for stable RK4 stages.
struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  bool dealias = true;
  std::size_t record_every = 1;
  double boundary_guard = 1e-8;  // warn when relative edge mass exceeds this

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw std::invalid_argument("SolverConfig: dt must be positive");
    if (!std::isfinite(t_end))
      throw std::invalid_argument("SolverConfig: t_end must be finite");
    if (t_end != 0.0 && dt > std::abs(t_end))
      throw std::invalid_argument("SolverConfig: dt must not exceed |t_end|");
    if (record_every < 1)
      throw std::invalid_argument("SolverConfig: record_every must be >= 1");
    if (t_end != 0.0) {
      const double steps = std::abs(t_end) / dt;
      if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps))
        throw std::invalid_argument("SolverConfig: |t_end| must be a multiple of dt");
    }
  }

  long long steps() const {
    return t_end == 0.0 ? 0 : std::llround(std::abs(t_end) / dt);
  }
};

/// Time-stamped solution frames with per-frame diagnostics. Times are
/// strictly monotone (increasing forward, decreasing for reversed runs) and
/// all frames share one grid.
struct Trajectory {
  std::vector<double> times;
  std::vector<Field> frames;
  std::vector<DiagnosticsRecord> diagnostics;
  std::vector<std::string> warnings;
  bool blew_up = false;
  double blow_up_time = 0.0;
};

/// Interaction-picture (integrating-factor) RK4 for one fixed signed dt.
/// The stiff linear part exp(i t phi) is applied exactly; classical RK4
/// advances w(t) = U(-t) u(t), whose rate is -U(-t) F(U(t) w). Holds phase
/// tables and scratch buffers, so one instance is single-threaded but
/// distinct instances are independent.
class Stepper {
public:
  Stepper(const Grid& g, const EquationParams& p, double dt_signed,
          bool apply_dealias = true)
      : ws_(g), params_(p), dt_(dt_signed), dealias_(apply_dealias),
        e1_(g.n()), e2_(g.n()), n1_(g.n()), n2_(g.n()), n3_(g.n()),
        n4_(g.n()), stage_(g.n()) {
    p.validate();
    if (dt_signed == 0.0 || !std::isfinite(dt_signed))
      throw std::invalid_argument("Stepper: dt must be nonzero and finite");
    const auto& xi = g.frequencies();
    for (std::size_t m = 0; m < g.n(); ++m) {
      const double ph = linear_symbol(p, xi[m]);
      e1_[m] = std::polar(1.0, 0.5 * dt_signed * ph);
      e2_[m] = std::polar(1.0, dt_signed * ph);
    }
  }

  double dt() const { return dt_; }

  void advance(std::vector<cplx>& uhat) {
    const std::size_t n = uhat.size();
    ws_.eval(uhat, params_, dealias_, n1_);
    for (std::size_t m = 0; m < n; ++m)
      stage_[m] = e1_[m] * (uhat[m] + 0.5 * dt_ * n1_[m]);
    ws_.eval(stage_, params_, dealias_, n2_);
    for (std::size_t m = 0; m < n; ++m)
      stage_[m] = e1_[m] * uhat[m] + 0.5 * dt_ * n2_[m];
    ws_.eval(stage_, params_, dealias_, n3_);
    for (std::size_t m = 0; m < n; ++m)
      stage_[m] = e2_[m] * uhat[m] + dt_ * e1_[m] * n3_[m];
    ws_.eval(stage_, params_, dealias_, n4_);
    for (std::size_t m = 0; m < n; ++m)
      uhat[m] = e2_[m] * uhat[m] +
                (dt_ / 6.0) * (e2_[m] * n1_[m] + 2.0 * e1_[m] * (n2_[m] + n3_[m]) +
                               n4_[m]);
  }

  /// Blow-up guard: non-finite coefficients or |u_hat| beyond 1e12 indicate a
  /// discretization fault (the studied regime is globally well-posed).
  bool state_ok(const std::vector<cplx>& uhat) const {
    for (const cplx& z : uhat) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
      if (std::abs(z.real()) > 1e12 || std::abs(z.imag()) > 1e12) return false;
    }
    return true;
  }

private:
  detail::NonlinearityWorkspace ws_;
  EquationParams params_;
  double dt_;
  bool dealias_;
  std::vector<cplx> e1_, e2_;
  std::vector<cplx> n1_, n2_, n3_, n4_, stage_;
};

struct BlowUpError : std::runtime_error {
  explicit BlowUpError(double t)
      : std::runtime_error("integrator: state blew up at t = " + std::to_string(t)),
        t_blowup(t) {}
  double t_blowup;
};

/// One IFRK4 step of signed size dt starting from state u at time t.
inline Field step(const Field& u, double t, double dt, const EquationParams& p,
                  bool apply_dealias = true) {
  if (dt == 0.0 || !std::isfinite(dt))
    throw std::invalid_argument("step: dt must be nonzero and finite");
  if (!u.finite()) throw BlowUpError(t);
  Stepper stepper(u.grid, p, dt, apply_dealias);
  Spectrum sp = forward(u);
  stepper.advance(sp.coeffs);
  if (!stepper.state_ok(sp.coeffs)) throw BlowUpError(t + dt);
  return inverse(sp);
}

/// Fixed-step evolution with frame recording every record_every steps (the
/// initial and final states are always recorded). Negative t_end runs the
/// flow backward. On blow-up the trajectory ends at the last valid frame
/// with blew_up set.
inline Trajectory evolve(const Field& u0, const EquationParams& p,
                         const SolverConfig& config,
                         const std::vector<double>& diag_thetas = {}) {
  config.validate();
  if (!u0.finite())
    throw std::invalid_argument("evolve: initial data contains non-finite values");
  Trajectory traj;
  auto record = [&](double t, const Field& f) {
    traj.times.push_back(t);
    traj.frames.push_back(f);
    traj.diagnostics.push_back(compute_diagnostics(f, t, p, diag_thetas));
  };
  record(0.0, u0);
  const long long nsteps = config.steps();
  if (nsteps == 0) return traj;
  const double h = config.t_end > 0 ? config.dt : -config.dt;
  Stepper stepper(u0.grid, p, h, config.dealias);
  Spectrum sp = forward(u0);
  Spectrum prev = sp;
  for (long long i = 1; i <= nsteps; ++i) {
    prev.coeffs = sp.coeffs;
    stepper.advance(sp.coeffs);
    const double t = static_cast<double>(i) * h;
    if (!stepper.state_ok(sp.coeffs)) {
      traj.blew_up = true;
      traj.blow_up_time = t;
      const double t_prev = static_cast<double>(i - 1) * h;
      if (traj.times.back() != t_prev) record(t_prev, inverse(prev));
      char msg[96];
      std::snprintf(msg, sizeof(msg), "blow-up detected at t = %.6g; halting", t);
      traj.warnings.emplace_back(msg);
      break;
    }
    if (i % static_cast<long long>(config.record_every) == 0 || i == nsteps)
      record(t, inverse(sp));
  }
  double worst_edge = 0.0;
  for (const auto& d : traj.diagnostics) worst_edge = std::max(worst_edge, d.edge_mass);
  if (worst_edge > config.boundary_guard) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "edge mass %.3e exceeds boundary guard %.3e; box may be too small",
                  worst_edge, config.boundary_guard);
    traj.warnings.emplace_back(msg);
  }
  return traj;
}

/// Discrete PDE residual of a trajectory (centered time difference).
inline ResidualReport residual(const Trajectory& traj, const EquationParams& p) {
  return residual(traj.times, traj.frames, p);
}

inline double mixed_norm(const Trajectory& traj, double p, double q) {
  return mixed_norm(traj.times, traj.frames, p, q);
}

}  // namespace hnls

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hnls/norms.hpp"

namespace hnls {

/// Constants of the four admissibility conditions:
///   (ii)  ||f(t)||^2_{L2} <= C0 ||f(0)||^2_{L2}
///         ||f(t)||^2_{L2(dmu.)} <= C0t ||f(0)||^2_{L2(dmu.)} + C1t
///   (iii) sub-level mass below Theta is at most a gamma1 fraction, per theta
///   (iv)  initial weighted mass outside (-R,R) is at most a gamma2 fraction
struct LemmaWitness {
  double C0 = 1.0;
  double C0t = 1.0;
  double C1t = 0.0;
  double Theta = 1.0;
  double gamma1 = 0.5;
  double R = 1.0;
  double gamma2 = 0.5;
  double s = 1.0;
  double T = 1.0;

  void validate() const {
    if (!(C0 > 0.0) || !(C0t > 0.0) || !(C1t >= 0.0))
      throw std::invalid_argument("LemmaWitness: need C0, C0t > 0 and C1t >= 0");
    if (!(Theta > 0.0)) throw std::invalid_argument("LemmaWitness: Theta must be > 0");
    if (!(gamma1 > 0.0 && gamma1 < 1.0) || !(gamma2 > 0.0 && gamma2 < 1.0))
      throw std::invalid_argument("LemmaWitness: gamma1, gamma2 must lie in (0,1)");
    if (!(R > 0.0)) throw std::invalid_argument("LemmaWitness: R must be > 0");
    if (!(s > 0.5)) throw std::invalid_argument("LemmaWitness: s must be > 1/2");
    if (!(T >= 0.0)) throw std::invalid_argument("LemmaWitness: T must be >= 0");
  }
};

/// Derived interpolation constants: rho = (1-theta)/theta and
///   K0 = C0 R^{2 theta} (4/Theta)^{rho+1},
///   K1 = C0t / (rho (1-gamma2)) (4/Theta)^rho,
///   K2 = C1t / (rho R^{2 theta rho}).
struct LemmaConstants {
  double theta;
  double rho;
  double K0;
  double K1;
  double K2;
};

inline LemmaConstants lemma_constants(const LemmaWitness& w, double theta) {
  w.validate();
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument(
        "lemma_constants: theta must lie in (0,1); endpoints bypass the lemma");
  const double rho = (1.0 - theta) / theta;
  const double K0 = w.C0 * std::pow(w.R, 2.0 * theta) * std::pow(4.0 / w.Theta, rho + 1.0);
  const double K1 = w.C0t / (rho * (1.0 - w.gamma2)) * std::pow(4.0 / w.Theta, rho);
  const double K2 = w.C1t / (rho * std::pow(w.R, 2.0 * theta * rho));
  return {theta, rho, K0, K1, K2};
}

/// A time-indexed family of grid functions on [-T,T] with a designated
/// initial slice f(0,.).
struct FamilyMember {
  std::vector<double> times;
  std::vector<Field> frames;
  Field initial;
};

struct ConditionEntry {
  std::string condition;  // "i", "l2_growth", "weighted_growth", "sublevel_mass", "initial_tail"
  std::optional<double> t;
  std::optional<double> theta;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = false;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;
  bool overall_pass = true;
};

namespace detail {

inline double weighted_mu_dot_sq(const Field& f, double theta) {
  const double v = norm_weighted_mu_dot(f, theta);
  return v * v;
}

}  // namespace detail

/// Evaluates conditions (i)-(iv) for every frame (and every theta for (iii)),
/// reporting measured slack per entry.
inline ConditionReport check_conditions(const FamilyMember& member,
                                        const LemmaWitness& witness,
                                        const std::vector<double>& thetas) {
  witness.validate();
  if (member.frames.empty() || member.times.size() != member.frames.size())
    throw std::invalid_argument("check_conditions: empty or inconsistent member");
  for (double th : thetas)
    if (!(th >= 0.0 && th <= 1.0))
      throw std::invalid_argument("check_conditions: thetas must lie in [0,1]");

  ConditionReport rep;
  auto push = [&rep](ConditionEntry e) {
    e.slack = e.rhs - e.lhs;
    rep.overall_pass = rep.overall_pass && e.pass;
    rep.entries.push_back(std::move(e));
  };

  const Field& f0 = member.initial;
  const double f0_l2_sq = invariant_I1(f0);
  const double f0_mu_sq = detail::weighted_mu_dot_sq(f0, 1.0);
  const double dx = f0.grid.dx();

  for (std::size_t i = 0; i < member.frames.size(); ++i) {
    const Field& f = member.frames[i];
    const double t = member.times[i];

    std::size_t support = 0;
    for (const cplx& z : f.values)
      if (z != cplx{0.0, 0.0}) ++support;
    push({"support", t, std::nullopt, 0.0, static_cast<double>(support) * dx,
          0.0, support > 0});

    const double l2_sq = invariant_I1(f);
    push({"l2_growth", t, std::nullopt, l2_sq, witness.C0 * f0_l2_sq, 0.0,
          l2_sq <= witness.C0 * f0_l2_sq});

    const double mu_sq = detail::weighted_mu_dot_sq(f, 1.0);
    const double weighted_rhs = witness.C0t * f0_mu_sq + witness.C1t;
    push({"weighted_growth", t, std::nullopt, mu_sq, weighted_rhs, 0.0, mu_sq <= weighted_rhs});

    for (double th : thetas) {
      double sub = 0.0, total = 0.0;
      const auto& x = f.grid.x();
      for (std::size_t j = 0; j < f.values.size(); ++j) {
        const double q = detail::abs2(f.values[j]);
        const double w = detail::mu_dot_weight(x[j], th);
        total += w * q;
        if (q < witness.Theta) sub += w * q;
      }
      sub *= dx;
      total *= dx;
      push({"sublevel_mass", t, th, sub, witness.gamma1 * total, 0.0,
            sub <= witness.gamma1 * total});
    }
  }

  double outer = 0.0, total = 0.0;
  const auto& x0 = f0.grid.x();
  for (std::size_t j = 0; j < f0.values.size(); ++j) {
    const double q = x0[j] * x0[j] * detail::abs2(f0.values[j]);
    total += q;
    if (std::abs(x0[j]) >= witness.R) outer += q;
  }
  outer *= dx;
  total *= dx;
  push({"initial_tail", std::nullopt, std::nullopt, outer, witness.gamma2 * total, 0.0,
        outer <= witness.gamma2 * total});
  return rep;
}

struct InequalitySlack {
  double t;
  double lhs;             // ||f(t)||^2_{L2(dmu._theta)}
  double rhs_literal;     // H^s factor as stated
  double slack_literal;
  double rhs_corrected;   // H^s factor multiplied by C_s^{2 rho}
  double slack_corrected;
  bool pass;              // corrected slack >= 0
};

struct InequalityReport {
  double theta;
  double s;
  LemmaConstants constants;
  double sobolev_constant;
  std::vector<InequalitySlack> slacks;
  bool pass = true;
};

/// Checks the interpolation inequality
///   ||f(t)||^2_{L2(dmu._theta)} <= ||f(t)||^{2 rho}_{H^s} (K0 ||f(0)||^2_{L2}
///       + K1 ||f(0)||^2_{L2(dmu._theta)} + K2)
/// in the literal form (variant A, diagnostic) and with the H^s factor scaled
/// by the grid Sobolev-embedding constant C_s^{2 rho} (variant B, binding).
/// The member must come with a passing ConditionReport.
inline InequalityReport verify_inequality(const FamilyMember& member,
                                          const LemmaWitness& witness,
                                          double theta,
                                          const ConditionReport& conditions) {
  if (!conditions.overall_pass)
    throw std::invalid_argument(
        "verify_inequality: member has not passed check_conditions");
  const LemmaConstants lc = lemma_constants(witness, theta);
  InequalityReport rep;
  rep.theta = theta;
  rep.s = witness.s;
  rep.constants = lc;
  rep.sobolev_constant = sobolev_embedding_constant(member.initial.grid, witness.s);

  const double base = lc.K0 * invariant_I1(member.initial) +
                      lc.K1 * detail::weighted_mu_dot_sq(member.initial, theta) +
                      lc.K2;
  const double cs_pow = std::pow(rep.sobolev_constant, 2.0 * lc.rho);
  for (std::size_t i = 0; i < member.frames.size(); ++i) {
    const Field& f = member.frames[i];
    InequalitySlack s;
    s.t = member.times[i];
    s.lhs = detail::weighted_mu_dot_sq(f, theta);
    const double hfac = std::pow(norm_hs(f, witness.s), 2.0 * lc.rho);
    s.rhs_literal = hfac * base;
    s.slack_literal = s.rhs_literal - s.lhs;
    s.rhs_corrected = cs_pow * hfac * base;
    s.slack_corrected = s.rhs_corrected - s.lhs;
    s.pass = s.slack_corrected >= 0.0;
    rep.pass = rep.pass && s.pass;
    rep.slacks.push_back(s);
  }
  return rep;
}

/// Largest taper width b such that for every theta in a 101-point grid on
/// [0,1]:  (R0+b)^{2 theta + 1} - R0^{2 theta + 1} <= R0^{2 theta + 1} / (2 (T+1)^2).
inline double find_taper_width(double R0, double T) {
  if (!(R0 > 0.0) || !(T >= 0.0))
    throw std::invalid_argument("find_taper_width: need R0 > 0 and T >= 0");
  auto admissible = [&](double b) {
    for (int i = 0; i <= 100; ++i) {
      const double th = static_cast<double>(i) / 100.0;
      const double p = 2.0 * th + 1.0;
      const double lhs = std::pow(R0 + b, p) - std::pow(R0, p);
      if (lhs * 2.0 * (T + 1.0) * (T + 1.0) > std::pow(R0, p)) return false;
    }
    return true;
  };
  double lo = 0.0, hi = std::max(R0, 1.0);
  int guard = 0;
  while (admissible(hi)) {
    hi *= 2.0;
    if (++guard > 60)
      throw std::runtime_error("find_taper_width: failed to bracket");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? lo : hi) = mid;
  }
  return lo;
}

struct BuiltFamily {
  FamilyMember member;
  LemmaWitness witness;
  double taper_width;
};

/// Constructs a member of the plateau family: f = A on |x| <= R0, linear
/// taper to zero on [R0, R0+b] with b maximal admissible, and time slices
/// f(x)(1+|t|) on n_times points of [-T,T]. The witness is
/// (C0 = C0t = (1+T)^2, C1t = 0, Theta = A^2, gamma1 = 1/2, R = R0+b,
/// gamma2 = 1/2).
inline BuiltFamily build_example_family(const Grid& grid, double A, double R0,
                                        double T, std::size_t n_times) {
  if (!(A > 0.0) || !(R0 > 0.0) || !(T >= 0.0) || n_times < 1)
    throw std::invalid_argument("build_example_family: invalid parameters");
  if (R0 >= 0.5 * grid.length())
    throw std::invalid_argument("build_example_family: plateau exceeds the box");
  const double b = find_taper_width(R0, T);

  Field profile = Field::sample(grid, [&](double x) -> cplx {
    const double ax = std::abs(x);
    if (ax <= R0) return {A, 0.0};
    if (ax <= R0 + b) return {A * (1.0 - (ax - R0) / b), 0.0};
    return {0.0, 0.0};
  });

  FamilyMember member{{}, {}, profile};
  if (T == 0.0 || n_times == 1) {
    member.times = {0.0};
    member.frames.push_back(profile);
  } else {
    for (std::size_t i = 0; i < n_times; ++i) {
      const double t = -T + 2.0 * T * static_cast<double>(i) /
                                 static_cast<double>(n_times - 1);
      Field f = profile;
      const double scale = 1.0 + std::abs(t);
      for (cplx& z : f.values) z *= scale;
      member.times.push_back(t);
      member.frames.push_back(std::move(f));
    }
  }

  LemmaWitness w;
  w.C0 = w.C0t = (1.0 + T) * (1.0 + T);
  w.C1t = 0.0;
  w.Theta = A * A;
  w.gamma1 = 0.5;
  w.R = R0 + b;
  w.gamma2 = 0.5;
  w.s = 1.0;
  w.T = T;
  return {std::move(member), w, b};
}

/// Empirical witness for applying the lemma to solver output: the tightest
/// (ii) constants with 10% headroom, the largest sub-level threshold Theta
/// passing (iii) with gamma1 = 1/2 over a pooled-|f|^2 quantile grid, and the
/// smallest radius R giving (iv) with gamma2 = 1/2.
inline LemmaWitness estimate_witness(const FamilyMember& member,
                                     const std::vector<double>& thetas,
                                     double s = 1.0) {
  if (member.frames.empty() || member.times.size() != member.frames.size())
    throw std::invalid_argument("estimate_witness: empty member");
  for (const Field& f : member.frames) {
    bool nonzero = false;
    for (const cplx& z : f.values)
      if (z != cplx{0.0, 0.0}) { nonzero = true; break; }
    if (!nonzero)
      throw std::invalid_argument("estimate_witness: condition (i) fails (zero frame)");
  }

  const Field& f0 = member.initial;
  const double headroom = 1.1;
  LemmaWitness w;
  w.s = s;
  w.T = 0.0;
  for (double t : member.times) w.T = std::max(w.T, std::abs(t));

  const double f0_l2_sq = invariant_I1(f0);
  const double f0_mu_sq = detail::weighted_mu_dot_sq(f0, 1.0);
  if (f0_l2_sq == 0.0)
    throw std::invalid_argument("estimate_witness: zero initial slice");
  double max_l2 = 0.0, max_mu = 0.0;
  for (const Field& f : member.frames) {
    max_l2 = std::max(max_l2, invariant_I1(f));
    max_mu = std::max(max_mu, detail::weighted_mu_dot_sq(f, 1.0));
  }
  w.C0 = headroom * max_l2 / f0_l2_sq;
  if (f0_mu_sq > 0.0) {
    w.C0t = headroom * max_mu / f0_mu_sq;
    w.C1t = 0.0;
  } else {
    w.C0t = headroom;
    w.C1t = headroom * max_mu;
  }

  // Theta: grid search over quantiles of the pooled positive |f|^2 samples.
  std::vector<double> pool;
  for (const Field& f : member.frames)
    for (const cplx& z : f.values) {
      const double q = detail::abs2(z);
      if (q > 0.0) pool.push_back(q);
    }
  std::sort(pool.begin(), pool.end());
  w.gamma1 = 0.5;
  std::optional<double> best_theta_cand;
  const int n_cand = 60;
  for (int ic = 0; ic < n_cand; ++ic) {
    const double frac = 0.05 + (0.999 - 0.05) * static_cast<double>(ic) /
                                   static_cast<double>(n_cand - 1);
    const double cand =
        pool[std::min(pool.size() - 1,
                      static_cast<std::size_t>(frac * static_cast<double>(pool.size())))];
    if (!(cand > 0.0)) continue;
    bool ok = true;
    for (const Field& f : member.frames) {
      const auto& x = f.grid.x();
      for (double th : thetas) {
        double sub = 0.0, total = 0.0;
        for (std::size_t j = 0; j < f.values.size(); ++j) {
          const double q = detail::abs2(f.values[j]);
          const double wt = detail::mu_dot_weight(x[j], th);
          total += wt * q;
          if (q < cand) sub += wt * q;
        }
        if (sub > w.gamma1 * total) { ok = false; break; }
      }
      if (!ok) break;
    }
    if (ok && (!best_theta_cand || cand > *best_theta_cand)) best_theta_cand = cand;
  }
  if (!best_theta_cand)
    throw std::runtime_error("estimate_witness: no admissible Theta for condition (iii)");
  w.Theta = *best_theta_cand;

  // R: grow the inner radius until the outer weighted mass drops below half.
  w.gamma2 = 0.5;
  const auto& x0 = f0.grid.x();
  std::vector<std::size_t> order(x0.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(x0[a]) < std::abs(x0[b]);
  });
  double total = 0.0;
  for (std::size_t j = 0; j < x0.size(); ++j)
    total += x0[j] * x0[j] * detail::abs2(f0.values[j]);
  const double half_dx = 0.5 * f0.grid.dx();
  if (total == 0.0) {
    w.R = half_dx;  // (iv) is vacuous: all weighted mass sits at x = 0
    return w;
  }
  double inside = 0.0;
  for (std::size_t idx : order) {
    inside += x0[idx] * x0[idx] * detail::abs2(f0.values[idx]);
    if (total - inside <= w.gamma2 * total) {
      // R strictly between grid shells so {|x| >= R} excludes what was counted
      w.R = std::abs(x0[idx]) + half_dx;
      return w;
    }
  }
  throw std::runtime_error("estimate_witness: no admissible R for condition (iv)");
}

}  // namespace hnls

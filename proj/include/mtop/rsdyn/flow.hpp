#pragma once

#include <Eigen/Eigenvalues>
#include <string>
#include <vector>

#include "mtop/rsdyn/lax.hpp"

namespace mtop::rsdyn {

inline RSState axpy(const RSState& s, cplx h, const std::vector<cplx>& du, const std::vector<cplx>& dv) {
  RSState r = s;
  for (std::size_t j = 0; j < s.u.size(); ++j) {
    r.u[j] += h * du[j];
    r.udot[j] += h * dv[j];
  }
  return r;
}

// One classical RK4 step of u' = udot, udot' = accel(u, udot); h may be complex
// or negative (used for central differences and time reversal).
inline RSState rk4_step(const RSState& s, cplx h) {
  const auto a1 = accel_potential_form(s);
  const RSState s2 = axpy(s, 0.5 * h, s.udot, a1);
  const auto a2 = accel_potential_form(s2);
  const RSState s3 = axpy(s, 0.5 * h, s2.udot, a2);
  const auto a3 = accel_potential_form(s3);
  const RSState s4 = axpy(s, h, s3.udot, a3);
  const auto a4 = accel_potential_form(s4);
  RSState r = s;
  for (std::size_t j = 0; j < s.u.size(); ++j) {
    r.u[j] += h / 6.0 * (s.udot[j] + 2.0 * s2.udot[j] + 2.0 * s3.udot[j] + s4.udot[j]);
    r.udot[j] += h / 6.0 * (a1[j] + 2.0 * a2[j] + 2.0 * a3[j] + a4[j]);
  }
  return r;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<RSState> states;
  bool completed = true;
  int halvings = 0;
  std::string message;
};

// Fixed-step RK4 on [0, t_final]; a step that lands too close to a collision
// is retried with half the step (up to `max_halvings` times), after which the
// run stops and returns the partial trajectory.
inline Trajectory integrate(const RSState& s0, double t_final, double h, int sample_every = 1,
                            double margin = 1e-6, int max_halvings = 20) {
  if (!(h > 0.0)) throw ConfigError("integration step must be positive");
  if (t_final < 0.0) throw ConfigError("final time must be non-negative");
  s0.validate();
  Trajectory tr;
  tr.times.push_back(0.0);
  tr.states.push_back(s0);
  RSState s = s0;
  double t = 0.0;
  long step = 0;
  while (t < t_final - 1e-14 * std::max(1.0, t_final)) {
    double dt = std::min(h, t_final - t);
    int halved = 0;
    RSState next;
    for (;;) {
      bool ok = true;
      try {
        next = rk4_step(s, dt);
        ok = next.collision_margin() > margin;
      } catch (const PoleError&) {
        ok = false;
      }
      if (ok) break;
      if (++halved > max_halvings) {
        tr.completed = false;
        tr.message = "near-collision at t = " + std::to_string(t);
        return tr;
      }
      dt *= 0.5;
    }
    tr.halvings += halved;
    s = next;
    t += dt;
    if (++step % sample_every == 0 || t >= t_final - 1e-14 * std::max(1.0, t_final)) {
      tr.times.push_back(t);
      tr.states.push_back(s);
    }
  }
  return tr;
}

// || dL/dt - [M, L] || / ||dL/dt|| with dL/dt from central RK4 differences.
inline double check_lax_equation(const RSState& s, cplx zeta, double h) {
  const Mat Lp = lax(rk4_step(s, h), zeta), Lm = lax(rk4_step(s, -h), zeta);
  const Mat Ld = (Lp - Lm) / (2.0 * h);
  const Mat L = lax(s, zeta), M = mmat(s, zeta);
  const Mat C = M * L - L * M;
  const double scale = std::max(Ld.norm(), C.norm());
  return scale == 0.0 ? 0.0 : (Ld - C).norm() / scale;
}

struct DriftReport {
  double h1 = 0.0;
  double invariants = 0.0;  // max over zeta and coefficients
  double spectrum = 0.0;    // eigenvalue multisets at start and end
  bool completed = true;
};

inline double multiset_distance(Vec a, Vec b) {
  // greedy matching is enough for well-separated spectra
  double worst = 0.0;
  std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double best = 1e300;
    Eigen::Index arg = 0;
    for (Eigen::Index j = 0; j < b.size(); ++j)
      if (!used[static_cast<std::size_t>(j)] && std::abs(a(i) - b(j)) < best) {
        best = std::abs(a(i) - b(j));
        arg = j;
      }
    used[static_cast<std::size_t>(arg)] = true;
    worst = std::max(worst, best / (std::abs(a(i)) + 1e-300));
  }
  return worst;
}

inline DriftReport conservation_drift(const Trajectory& tr, const std::vector<cplx>& zetas) {
  DriftReport r;
  r.completed = tr.completed;
  const RSState& a = tr.states.front();
  const cplx h0 = hamiltonian_h1(a);
  for (const RSState& s : tr.states) r.h1 = std::max(r.h1, std::abs(hamiltonian_h1(s) - h0) / std::abs(h0));
  for (cplx zeta : zetas) {
    const auto c0 = spectral_invariants(a, zeta);
    double scale = 0.0;
    for (cplx c : c0) scale = std::max(scale, std::abs(c));
    for (const RSState& s : tr.states) {
      const auto c = spectral_invariants(s, zeta);
      for (std::size_t k = 0; k < c.size(); ++k) r.invariants = std::max(r.invariants, std::abs(c[k] - c0[k]) / scale);
    }
    Eigen::ComplexEigenSolver<Mat> e0(lax(a, zeta)), e1(lax(tr.states.back(), zeta));
    r.spectrum = std::max(r.spectrum, multiset_distance(e0.eigenvalues(), e1.eigenvalues()));
  }
  return r;
}

}  // namespace mtop::rsdyn

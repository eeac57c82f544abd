#pragma once

#include <algorithm>
#include <vector>

#include "mtop/tausolve/backlund.hpp"

namespace mtop::tausolve {

// Random evaluation points: u in a box, four nonzero times, spectral points
// on an annulus away from every string point.
struct Sampler {
  Rng rng;
  std::vector<cplx> avoid;
  double u_box = 0.6;
  double t_scale = 0.3;
  int n_times = 4;

  explicit Sampler(std::uint64_t seed, std::vector<cplx> poles = {}) : rng(seed), avoid(std::move(poles)) {}

  cplx u() { return rng.box(u_box, u_box); }
  TimeVector t() {
    TimeVector v;
    for (int k = 0; k < n_times; ++k) v.push_back(t_scale * rng.cnormal());
    return v;
  }
  cplx z() {
    for (;;) {
      const cplx w = std::polar(rng.uniform(1.2, 3.5), rng.uniform(0.0, 2.0 * kPi));
      bool ok = true;
      for (cplx p : avoid) ok = ok && std::abs(w - p) > 0.15;
      if (ok) return w;
    }
  }
};

struct HirotaNumericReport {
  double three_shift = 0.0;
  double lattice_shift = 0.0;
  int trials = 0;
  double max() const { return std::max(three_shift, lattice_shift); }
};

inline double term_residual(const std::vector<cplx>& terms) {
  cplx s = 0.0;
  double scale = 0.0;
  for (cplx x : terms) {
    s += x;
    scale += std::abs(x);
  }
  return scale == 0.0 ? 0.0 : std::abs(s) / scale;
}

// Exact (non-truncated) bilinear identities at random numeric points:
//   (z2 - z3) tau(t+[z1]) tau(t+[z2]+[z3]) + cyclic = 0
//   z2 tau_{u+1}(t+[z1]) tau_u(t+[z2]) - z1 tau_{u+1}(t+[z2]) tau_u(t+[z1])
//     + (z1 - z2) tau_{u+1}(t+[z1]+[z2]) tau_u(t) = 0
inline HirotaNumericReport check_hirota_numeric(const TauFunction& f, int trials, std::uint64_t seed) {
  Sampler smp(seed, f.poles);
  HirotaNumericReport r;
  for (int n = 0; n < trials; ++n) {
    const cplx u = smp.u();
    const TimeVector t = smp.t();
    const cplx z1 = smp.z(), z2 = smp.z(), z3 = smp.z();
    auto T = [&](cplx uu, std::initializer_list<cplx> zs) {
      Shifts s;
      for (cplx z : zs) s.push_back({1, z});
      return f(uu, t, s);
    };
    r.three_shift = std::max(r.three_shift, term_residual({(z2 - z3) * T(u, {z1}) * T(u, {z2, z3}),
                                                           (z3 - z1) * T(u, {z2}) * T(u, {z3, z1}),
                                                           (z1 - z2) * T(u, {z3}) * T(u, {z1, z2})}));
    r.lattice_shift = std::max(r.lattice_shift, term_residual({z2 * T(u + 1.0, {z1}) * T(u, {z2}),
                                                               -z1 * T(u + 1.0, {z2}) * T(u, {z1}),
                                                               (z1 - z2) * T(u + 1.0, {z1, z2}) * T(u, {})}));
    ++r.trials;
  }
  return r;
}

// Draws (u, t) until tau is safely away from zero.
inline std::pair<cplx, TimeVector> regular_point(const CasoratiModel& m, Sampler& smp) {
  for (int guard = 0; guard < 1000; ++guard) {
    const cplx u = smp.u();
    const TimeVector t = smp.t();
    const Mat c = casorati_matrix(m, u, t);
    if (std::abs(det(c)) > 1e-8 * hadamard_scale(c)) return {u, t};
  }
  throw DegenerateError("could not find a point where tau is nonzero");
}

struct BakerReport {
  double property = 0.0;      // B_i(u, t - [z^{-1}]) = B_i(u,t) - B_i(u+1,t)/z
  double string_cond = 0.0;   // sum_m b_{i,m} psi(p_i e^{2 gamma m}) = 0
  double tau_ratio = 0.0;     // determinant psi vs tau-ratio psi
  double truncation = 0.0;    // psi z^{-u} e^{-xi} = 1 + sum_k w_k z^{-k}
  double w1 = 0.0;            // w_1 = -d log tau / dt_1
  double wN = 0.0;            // w_N = (-1)^N det g tau_{u+1} / tau_u
  double adjoint = 0.0;       // first-column psi* vs tau-ratio psi*
  double adjoint_series = 0.0;// z^{-s} coefficients of tau(t+[z^{-1}]) vs column-shift determinants
  double diffdiff = 0.0;      // d psi/dt_1 = psi_{u+1} + d log(tau_{u+1}/tau_u)/dt_1 psi_u
  // finite-difference cross-checks (step 1e-6, judged against 1e-6)
  double dt1_fd = 0.0;        // d/dt_1 B_i(u) = B_i(u+1)
  double w1_fd = 0.0;         // w_1 against the numeric log-derivative of tau
  double diffdiff_fd = 0.0;   // analytic d psi/dt_1 against central differences
  int trials = 0;

  double max() const {
    return std::max({property, string_cond, tau_ratio, truncation, w1, wN, adjoint, adjoint_series, diffdiff});
  }
  double fd_max() const { return std::max({dt1_fd, w1_fd, diffdiff_fd}); }
};

inline constexpr double kFiniteDifferenceStep = 1e-6;

// dt_1-derivative by central differences on the first time.
template <class F>
cplx d_t1_numeric(F f, TimeVector t, double h = kFiniteDifferenceStep) {
  TimeVector tp = t, tm = t;
  tp[0] += h;
  tm[0] -= h;
  return (f(tp) - f(tm)) / (2.0 * h);
}

inline double check_diffdiff_at(const CasoratiModel& m, cplx u, const TimeVector& t, cplx z) {
  const cplx lhs = dbaker_t1(m, u, t, z);
  const cplx dlog = dtau_t1(m, u + 1.0, t) / tau(m, u + 1.0, t) - dtau_t1(m, u, t) / tau(m, u, t);
  const cplx rhs = baker(m, u + 1.0, t, z) + dlog * baker(m, u, t, z);
  return rel_residual(lhs, rhs);
}

inline double check_diffdiff(const CasoratiModel& m, int trials, std::uint64_t seed) {
  Sampler smp(seed, m.points());
  double worst = 0.0;
  for (int n = 0; n < trials; ++n) {
    auto [u, t] = regular_point(m, smp);
    worst = std::max(worst, check_diffdiff_at(m, u, t, smp.z()));
  }
  return worst;
}

// Coefficients of z^{-s}, s = 0..smax, of tau_u(t + [z^{-1}]) by a contour
// integral on a circle enclosing every string point.
inline std::vector<cplx> tau_plus_series_numeric(const CasoratiModel& m, cplx u, const TimeVector& t, int smax,
                                                 int K = 128) {
  double R = 0.0;
  for (cplx p : m.points()) R = std::max(R, std::abs(p));
  R *= 2.0;
  std::vector<cplx> out(static_cast<std::size_t>(smax + 1), 0.0);
  for (int k = 0; k < K; ++k) {
    const cplx z = std::polar(R, 2.0 * kPi * (k + 0.5) / K);
    const cplx v = tau_miwa_plus(m, u, t, z);
    for (int s = 0; s <= smax; ++s) out[static_cast<std::size_t>(s)] += v * std::pow(z, s);
  }
  for (cplx& c : out) c /= double(K);
  return out;
}

inline BakerReport check_baker(const CasoratiModel& m, int trials, std::uint64_t seed) {
  m.validate();
  Sampler smp(seed, m.points());
  BakerReport r;
  const int N = m.N();
  for (int n = 0; n < trials; ++n) {
    auto [u, t] = regular_point(m, smp);
    const cplx z = smp.z();
    const WCoeffs w = wcoeffs(m, u, t);

    for (int i = 0; i < N; ++i) {
      const cplx lhs = bfun(m, i, u, t, {{-1, z}});
      const cplx rhs = bfun(m, i, u, t) - bfun(m, i, u + 1.0, t) / z;
      r.property = std::max(r.property, rel_residual(lhs, rhs));
      const cplx fd = d_t1_numeric([&](const TimeVector& tt) { return bfun(m, i, u, tt); }, t);
      r.dt1_fd = std::max(r.dt1_fd, rel_residual(fd, bfun(m, i, u + 1.0, t)));

      // Each psi(P) = P^u e^xi (1 + sum_k w_k P^{-k}) is itself a cancelling
      // sum; the Casorati matrix is routinely ill-conditioned, so the sum is
      // judged against its uncancelled constituents.
      const StringData& s = m.strings[static_cast<std::size_t>(i)];
      cplx sum = 0.0;
      double scale = 0.0;
      for (int k = 0; k <= s.M; ++k) {
        const cplx P = s.point(m.gamma, k);
        const cplx logP = std::log(s.p) + 2.0 * m.gamma * s.m_value(k);
        const cplx b = s.b[static_cast<std::size_t>(k)];
        sum += b * baker(m, u, t, P, logP);
        double wsum = 1.0;
        for (std::size_t j = 0; j < w.w.size(); ++j) wsum += std::abs(w.w[j]) * std::pow(std::abs(P), -double(j + 1));
        scale += std::abs(b * std::exp(u * logP + xi_eval(t, P))) * wsum;
      }
      r.string_cond = std::max(r.string_cond, std::abs(sum) / scale);
    }

    r.tau_ratio = std::max(r.tau_ratio, rel_residual(baker(m, u, t, z), baker_from_tau(m, u, t, z)));

    r.truncation = std::max(r.truncation, rel_residual(baker_reduced(m, u, t, z), wpoly(w, z)));
    const cplx w1 = -dtau_t1(m, u, t) / tau(m, u, t);
    r.w1 = std::max(r.w1, rel_residual(w.w.front(), w1));
    const cplx w1_fd = -d_t1_numeric([&](const TimeVector& tt) { return tau(m, u, tt); }, t) / tau(m, u, t);
    r.w1_fd = std::max(r.w1_fd, rel_residual(w1, w1_fd));
    const cplx wN = (N % 2 ? -1.0 : 1.0) * det_g(m) * tau(m, u + 1.0, t) / tau(m, u, t);
    r.wN = std::max(r.wN, rel_residual(w.w.back(), wN));

    r.adjoint = std::max(r.adjoint, rel_residual(adjoint_baker(m, u, t, z), adjoint_baker_from_tau(m, u, t, z)));
    const std::vector<cplx> series = tau_plus_series_numeric(m, u, t, 4);
    for (int s = 0; s <= 4; ++s)
      r.adjoint_series = std::max(
          r.adjoint_series, rel_residual(series[static_cast<std::size_t>(s)], tau_plus_coefficient(m, u, t, s)));

    r.diffdiff = std::max(r.diffdiff, check_diffdiff_at(m, u, t, z));
    const cplx fd = d_t1_numeric([&](const TimeVector& tt) { return baker(m, u, tt, z); }, t);
    r.diffdiff_fd = std::max(r.diffdiff_fd, rel_residual(dbaker_t1(m, u, t, z), fd));
    ++r.trials;
  }
  return r;
}

}  // namespace mtop::tausolve

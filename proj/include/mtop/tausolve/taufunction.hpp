#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mtop/tausolve/casorati.hpp"

namespace mtop::tausolve {

// A tau-like function that can be evaluated at Miwa-shifted times. eval_plus
// adds one more shift t + [z^{-1}] for a batch of z (contour nodes share all
// the z-independent work); `poles` lists the points in z to keep away from.
using ZBatch = std::vector<cplx>;

struct TauFunction {
  std::string label;
  cplx gamma;
  std::function<cplx(cplx u, const TimeVector& t, const Shifts& s)> eval;
  std::function<std::vector<cplx>(cplx u, const TimeVector& t, const Shifts& s, const ZBatch& z)> eval_plus;
  std::vector<cplx> poles;

  cplx operator()(cplx u, const TimeVector& t, const Shifts& s = {}) const { return eval(u, t, s); }
};

inline TauFunction casorati_tau(const CasoratiModel& m, std::string label = "tau") {
  TauFunction f;
  f.label = std::move(label);
  f.gamma = m.gamma;
  f.eval = [m](cplx u, const TimeVector& t, const Shifts& s) { return tau(m, u, t, s); };
  f.eval_plus = [m](cplx u, const TimeVector& t, const Shifts& s, const ZBatch& zs) {
    return tau_miwa_plus_batch(m, u, t, zs, s);
  };
  f.poles = m.points();
  return f;
}

// Trapezoidal contour integral (1/2 pi i) \oint f(z) (z - z0)^{power-1} dz on
// |z - z0| = r; power 1 gives the residue, power 2 the double-pole coefficient.
inline cplx contour_moment(const std::function<ZBatch(const ZBatch&)>& f, cplx z0, double r, int K,
                           int power = 1) {
  ZBatch zs(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) zs[static_cast<std::size_t>(k)] = z0 + std::polar(r, 2.0 * kPi * k / K);
  const ZBatch v = f(zs);
  cplx sum = 0.0;
  for (int k = 0; k < K; ++k) sum += v[static_cast<std::size_t>(k)] * std::pow(zs[static_cast<std::size_t>(k)] - z0, power);
  return sum / double(K);
}

// A tenth of the distance to the nearest other singular point (or to 0); the
// trapezoidal error then decays like 10^{-K}.
inline double contour_radius(cplx z0, const std::vector<cplx>& poles) {
  double d = std::abs(z0);
  for (cplx p : poles)
    if (std::abs(p - z0) > 1e-12 * std::abs(z0)) d = std::min(d, std::abs(p - z0));
  return 0.1 * d;
}

inline constexpr int kContourPoints = 16;

// Two error sources compete: a large regular part g(z) costs eps |g| r / |c|
// and resolving z - z0 costs eps |z0| / r. When the first pass shows g
// dominating, retry at the radius balancing both (truncation stays tiny,
// since the radius only shrinks).
inline cplx residue(const std::function<ZBatch(const ZBatch&)>& f, cplx z0, const std::vector<cplx>& poles) {
  const double r0 = contour_radius(z0, poles);
  ZBatch zs(static_cast<std::size_t>(kContourPoints));
  for (int k = 0; k < kContourPoints; ++k) zs[static_cast<std::size_t>(k)] = z0 + std::polar(r0, 2.0 * kPi * k / kContourPoints);
  const ZBatch v = f(zs);
  cplx c = 0.0;
  for (std::size_t k = 0; k < zs.size(); ++k) c += v[k] * (zs[k] - z0);
  c /= double(kContourPoints);
  double g = 0.0;
  for (std::size_t k = 0; k < zs.size(); ++k) g = std::max(g, std::abs(v[k] * (zs[k] - z0) - c) / r0);
  if (g == 0.0 || std::abs(c) == 0.0) return c;
  const double best = std::sqrt(std::max(std::abs(z0), r0) * std::abs(c) / g);
#ifdef MTOP_DEBUG_RESIDUE
  std::fprintf(stderr, "RES r0=%g best=%g c=%g g=%g z0=%g\n", r0, best, std::abs(c), g, std::abs(z0));
#endif
  if (best > 0.5 * r0) return c;
  return contour_moment(f, z0, std::max(best, 1e-3 * r0), kContourPoints, 1);
}

// Laurent fit in x = e^{gamma u} on |x| = 1.
struct LaurentFit {
  std::map<int, cplx> coeffs;  // nonzero exponents only
  int lowest = 0, highest = 0;
  double fit_residual = 0.0;   // off-circle reconstruction mismatch
  bool zero = true;
  int degree() const { return zero ? -1 : (highest - lowest) / 2; }
};

inline LaurentFit laurent_fit(const std::function<cplx(cplx)>& f_of_u, cplx gamma, int K = 64,
                              double threshold = 1e-9) {
  std::vector<cplx> vals(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) vals[static_cast<std::size_t>(k)] = f_of_u(cplx(0.0, 2.0 * kPi * k / K) / gamma);
  LaurentFit fit;
  std::map<int, cplx> all;
  double big = 0.0;
  for (int n = -K / 2; n < K / 2; ++n) {
    cplx c = 0.0;
    for (int k = 0; k < K; ++k) c += vals[static_cast<std::size_t>(k)] * std::polar(1.0, -2.0 * kPi * k * n / K);
    c /= double(K);
    all[n] = c;
    big = std::max(big, std::abs(c));
  }
  for (const auto& [n, c] : all)
    if (big > 0.0 && std::abs(c) > threshold * big) {
      if (fit.zero) fit.lowest = n;
      fit.highest = n;
      fit.zero = false;
      fit.coeffs[n] = c;
    }
  // check at a point off the unit circle
  const cplx x = std::polar(1.3, 0.7);
  cplx rec = 0.0;
  for (const auto& [n, c] : fit.coeffs) rec += c * std::pow(x, n);
  const cplx direct = f_of_u(std::log(x) / gamma);
  fit.fit_residual = rel_residual(rec, direct);
  return fit;
}

// Trigonometric degree of u -> tau_u(t) (number of roots per period pi i/gamma).
inline int trig_degree(const TauFunction& f, const TimeVector& t, LaurentFit* out = nullptr) {
  LaurentFit fit = laurent_fit([&](cplx u) { return f(u, t); }, f.gamma);
  if (fit.fit_residual > 1e-8)
    throw ConsistencyError(f.label + " is not a Laurent polynomial in e^{gamma u} (fit residual " +
                           std::to_string(fit.fit_residual) + ")");
  if (out) *out = fit;
  return fit.degree();
}

}  // namespace mtop::tausolve

#pragma once

#include <vector>

#include "mtop/qvertex/eigen.hpp"
#include "mtop/rsdyn/flow.hpp"

namespace mtop::rsdyn {

struct BridgeState {
  int index = 0;
  std::vector<cplx> u0;
  std::vector<cplx> udot_residue;  // -res_{u=u_k} Theta_1(u) / T^empty(u)
  std::vector<cplx> udot_taylor;   // implicit-function first derivative of the zeros
  std::vector<cplx> uddot_rs;      // RS acceleration at (u_k, udot_k)
  std::vector<cplx> uddot_taylor;  // second derivative of the zeros
  double first = 0.0;
  double second = 0.0;
};

inline double vec_residual(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    d += std::norm(a[j] - b[j]);
    na += std::norm(a[j]);
    nb += std::norm(b[j]);
  }
  return rel_residual(std::sqrt(d), std::sqrt(na), std::sqrt(nb));
}

// Residue of a meromorphic f(u) at u0 by the trapezoidal rule on a circle.
inline cplx residue_u(const std::function<cplx(cplx)>& f, cplx u0, double r, int K = 64) {
  cplx s = 0.0;
  for (int k = 0; k < K; ++k) {
    const cplx e = std::polar(r, 2.0 * kPi * k / K);
    s += f(u0 + e) * e;
  }
  return s / double(K);
}

// Quarter of the distance from u_k to the nearest other zero of T^empty
// (zeros repeat with period i pi / gamma).
inline double root_radius(cplx gamma, const std::vector<cplx>& roots, std::size_t k) {
  const cplx period = cplx(0.0, kPi) / gamma;
  double d = std::abs(period);
  for (std::size_t j = 0; j < roots.size(); ++j)
    for (int n = -2; n <= 2; ++n) {
      if (j == k && n == 0) continue;
      d = std::min(d, std::abs(roots[j] + double(n) * period - roots[k]));
    }
  return 0.25 * d;
}

inline BridgeState bridge_rs9(const qvertex::ModelConfig& cfg, const qvertex::EigenTau& et) {
  const std::vector<qvertex::RootTaylor> taylor = qvertex::zeros_taylor(et, cfg.inhom);
  const qvertex::Scalar th0 = et.t1_coefficient(0), th1 = et.t1_coefficient(1);
  BridgeState b;
  b.index = et.index;
  for (std::size_t k = 0; k < taylor.size(); ++k) {
    b.u0.push_back(taylor[k].u0);
    b.udot_taylor.push_back(taylor[k].udot);
    b.uddot_taylor.push_back(taylor[k].uddot);
    const double r = root_radius(cfg.gamma, cfg.inhom, k);
    const cplx res = residue_u(
        [&](cplx u) { return th1.evaluate(u, cfg.gamma) / th0.evaluate(u, cfg.gamma); }, cfg.inhom[k], r);
    b.udot_residue.push_back(-res);
  }
  b.uddot_rs = accel(RSState{cfg.gamma, b.u0, b.udot_residue});
  b.first = vec_residual(b.udot_residue, b.udot_taylor);
  b.second = vec_residual(b.uddot_rs, b.uddot_taylor);
  return b;
}

struct BridgeReport {
  qvertex::SectorLabel sector;
  std::vector<BridgeState> states;
  double first = 0.0;
  double second = 0.0;
  double min_velocity_separation = 0.0;  // between distinct eigenstates
};

inline BridgeReport bridge_sector(const qvertex::ModelConfig& cfg, const qvertex::SectorLabel& sector, int D,
                                  std::uint64_t seed, qvertex::FusionConvention conv = {}) {
  if (D < 2) throw ConfigError("the bridge needs truncation D >= 2");
  const qvertex::MasterT m = qvertex::build_master(cfg, D, conv);
  const qvertex::Diagonalization dg = qvertex::diagonalize_master(m, sector, seed);
  BridgeReport r;
  r.sector = sector;
  for (const auto& et : dg.states) {
    r.states.push_back(bridge_rs9(cfg, et));
    r.first = std::max(r.first, r.states.back().first);
    r.second = std::max(r.second, r.states.back().second);
  }
  r.min_velocity_separation = 1e300;
  for (std::size_t a = 0; a < r.states.size(); ++a)
    for (std::size_t b = a + 1; b < r.states.size(); ++b)
      r.min_velocity_separation =
          std::min(r.min_velocity_separation, vec_residual(r.states[a].udot_residue, r.states[b].udot_residue));
  if (r.states.size() < 2) r.min_velocity_separation = 0.0;
  return r;
}

}  // namespace mtop::rsdyn

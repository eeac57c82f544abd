#pragma once

#include <vector>

#include "mtop/qvertex/model.hpp"
#include "mtop/tausolve/model.hpp"

namespace mtop::tausolve {

// Top (sign = +1) or bottom (sign = -1) Laurent coefficient of tau_u(0) in
// x = e^{gamma u} divided by prod_i b_{i, sign M_i/2}:
//   prod_{j<k} (y_j - y_k) / prod_i y_i^N,  y_i = p_i e^{sign gamma M_i}.
inline cplx edge_vandermonde(const CasoratiModel& m, int sign) {
  const int N = m.N();
  std::vector<cplx> y;
  for (const auto& s : m.strings) y.push_back(s.p * std::exp(double(sign) * m.gamma * double(s.M)));
  cplx v = 1.0;
  for (int j = 0; j < N; ++j) {
    for (int k = j + 1; k < N; ++k) v *= y[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(k)];
    v /= std::pow(y[static_cast<std::size_t>(j)], N);
  }
  return v;
}

// Value the edge product must reach so that tau_u(0) has the top/bottom
// coefficients (+-1)^L e^{-+gamma sum u_n} of T^empty(u).
inline cplx edge_target(const CasoratiModel& m, const std::vector<cplx>& inhom, int sign) {
  cplx su = 0.0;
  for (cplx u : inhom) su += u;
  const double s = (sign < 0 && m.L() % 2) ? -1.0 : 1.0;
  return s * std::exp(-double(sign) * m.gamma * su);
}

inline cplx edge_product(const CasoratiModel& m, int sign) {
  cplx b = 1.0;
  for (const auto& s : m.strings) b *= sign > 0 ? s.upper_edge() : s.lower_edge();
  return b;
}

// max over both signs of the relative mismatch in the edge-coefficient constraint
inline double check_b_constraint(const CasoratiModel& m, const std::vector<cplx>& inhom) {
  if (static_cast<int>(inhom.size()) != m.L())
    throw ConfigError("expected " + std::to_string(m.L()) + " inhomogeneities");
  double worst = 0.0;
  for (int sign : {1, -1})
    worst = std::max(worst, rel_residual(edge_product(m, sign) * edge_vandermonde(m, sign), edge_target(m, inhom, sign)));
  return worst;
}

// Strings from the twist and a sector, random interior b_{i,m}, edges solved
// from the constraint.
inline CasoratiModel model_from_inhomogeneities(const qvertex::ModelConfig& cfg, const qvertex::SectorLabel& sector,
                                                std::uint64_t seed) {
  cfg.validate();
  sector.validate(cfg);
  CasoratiModel m;
  m.gamma = cfg.gamma;
  Rng rng(seed);
  for (int i = 0; i < cfg.N; ++i) {
    StringData s;
    s.p = cfg.twist[static_cast<std::size_t>(i)];
    s.M = sector.M[static_cast<std::size_t>(i)];
    for (int k = 0; k <= s.M; ++k) s.b.push_back(rng.cnormal());
    m.strings.push_back(std::move(s));
  }
  cplx vp = edge_vandermonde(m, 1), vm = edge_vandermonde(m, -1);
  if (std::abs(vp) < 1e-12 || std::abs(vm) < 1e-12)
    throw DegenerateError("string edge points coincide: edge coefficients cannot be solved");
  const cplx need_p = edge_target(m, cfg.inhom, 1) / vp, need_m = edge_target(m, cfg.inhom, -1) / vm;

  // Rescale one string with M >= 1 at each edge; with every M = 0 the two
  // constraints coincide and one b_{i,0} is enough.
  int k = -1;
  for (int i = 0; i < m.N(); ++i)
    if (m.strings[static_cast<std::size_t>(i)].M > 0) k = i;
  if (k < 0) {
    m.strings[0].b[0] *= need_p / edge_product(m, 1);
  } else {
    StringData& s = m.strings[static_cast<std::size_t>(k)];
    s.b.back() *= need_p / edge_product(m, 1);
    s.b.front() *= need_m / edge_product(m, -1);
  }
  m.validate();
  return m;
}

}  // namespace mtop::tausolve

#pragma once

#include <vector>

#include "mtop/qvertex/eigen.hpp"

namespace mtop::qvertex {

// Whether the sector coefficient formulas carry an extra L!/(M_1!...M_N!).
// Omit is the self-consistent normalization (T(u,0) = T^empty(u) forces it);
// Include is kept to show that the extra factor breaks it for mixed sectors.
enum class MultinomialFactor { Omit, Include };

inline double multinomial_factor(const SectorLabel& s, MultinomialFactor f) {
  return f == MultinomialFactor::Include ? static_cast<double>(multinomial(s.M)) : 1.0;
}

// sum_k t_k sum_a z_a^k as a TimePoly of weight <= cap.
inline TimePoly power_sum_exponent(const std::vector<cplx>& z, int cap) {
  TimePoly x(cap);
  for (int k = 1; k <= cap; ++k) {
    cplx pk = 0.0;
    for (cplx za : z) pk += std::pow(za, k);
    x.add_term(symfun::mono_t(k), pk);
  }
  return x;
}

struct TopCoeffReport {
  double top = 0.0;
  double bottom = 0.0;
  double max() const { return std::max(top, bottom); }
};

// Top and bottom Laurent coefficients of T^lambda on a sector against
// (+-1)^L e^{-+gamma sum u} s_lambda(d~) exp(sum_k t_k sum_a p_a^k e^{+-gamma k M_a}).
inline TopCoeffReport check_top_coeffs(const MasterT& m, const SectorLabel& sector,
                                       MultinomialFactor f = MultinomialFactor::Omit) {
  const ModelConfig& cfg = m.cfg;
  const Mat P = sector_projector(cfg, sector);
  TopCoeffReport rep;
  for (int sign : {1, -1}) {
    std::vector<cplx> z;
    for (int a = 0; a < cfg.N; ++a)
      z.push_back(cfg.twist[static_cast<std::size_t>(a)] *
                  std::exp(double(sign) * cfg.gamma * double(sector.M[static_cast<std::size_t>(a)])));
    const TimePoly gen = symfun::exp_series(power_sum_exponent(z, m.D));
    const cplx pre = std::pow(double(sign), cfg.L) * std::exp(-double(sign) * cfg.gamma * cfg.sum_inhom()) *
                     multinomial_factor(sector, f);
    double worst = 0.0;
    for (const auto& [p, op] : m.T) {
      const cplx expected = pre * symfun::apply_schur_diffop(p, gen);
      const int e = sign * cfg.L;
      const Mat actual = op.has(e) ? Mat(op.at(e) * P) : Mat(Mat::Zero(P.rows(), P.cols()));
      worst = std::max(worst, rel_residual(actual, Mat(expected * P)));
    }
    (sign > 0 ? rep.top : rep.bottom) = worst;
  }
  return rep;
}

// C(t) from tau = C(t) prod sinh(gamma(u - u_i(t))): the top and bottom
// coefficients give C^2 = (-1)^L 4^L G_top G_bottom.
inline TimePoly prefactor_from_coeffs(const EigenTau& et) {
  TimePoly prod = et.coefficient(et.L) * et.coefficient(-et.L);
  prod *= std::pow(-1.0, et.L);
  return symfun::sqrt_series(prod) * std::pow(2.0, et.L);
}

// 2^L exp(sum_k t_k sum_a p_a^k cosh(gamma M_a k))
inline TimePoly prefactor_formula(const ModelConfig& cfg, const SectorLabel& sector, int D,
                                  MultinomialFactor f = MultinomialFactor::Omit) {
  TimePoly x(D);
  for (int k = 1; k <= D; ++k) {
    cplx c = 0.0;
    for (int a = 0; a < cfg.N; ++a)
      c += std::pow(cfg.twist[static_cast<std::size_t>(a)], k) *
           std::cosh(cfg.gamma * double(sector.M[static_cast<std::size_t>(a)] * k));
    x.add_term(symfun::mono_t(k), c);
  }
  return symfun::exp_series(x) * (std::pow(2.0, cfg.L) * multinomial_factor(sector, f));
}

inline double check_prefactor_C(const ModelConfig& cfg, const EigenTau& et,
                                MultinomialFactor f = MultinomialFactor::Omit) {
  const TimePoly a = prefactor_from_coeffs(et), b = prefactor_formula(cfg, et.sector, et.D, f);
  return rel_residual((a - b).norm(), a.norm(), b.norm());
}

}  // namespace mtop::qvertex

#pragma once

#include <Eigen/Eigenvalues>
#include <map>
#include <vector>

#include "mtop/qvertex/master.hpp"

namespace mtop::qvertex {

// One joint eigenvalue of the master T-operator: theta_lambda(x) for every
// stored lambda, so that tau_u(t) = sum_lambda s_lambda(t) theta_lambda(u).
struct EigenTau {
  SectorLabel sector;
  int index = 0;
  Vec vector;
  cplx gamma;
  int L = 0;
  int D = 0;
  std::map<Partition, Scalar> theta;

  Scalar get(const Partition& lambda) const {
    auto it = theta.find(lambda);
    return it == theta.end() ? Scalar() : it->second;
  }

  cplx evaluate(cplx u, const TimeVector& t) const {
    cplx sum = 0.0;
    for (const auto& [p, th] : theta) sum += symfun::schur_numeric(p, t) * th.evaluate(u, gamma);
    return sum;
  }

  // Coefficient of x^e as a polynomial in the times (weight <= D).
  TimePoly coefficient(int e) const {
    TimePoly r(D);
    for (const auto& [p, th] : theta)
      if (th.has(e)) r += symfun::schur(p, D) * th.at(e);
    return r;
  }

  // Theta_n = sum_{|lambda| = n} [t_1^n] s_lambda * theta_lambda.
  Scalar t1_coefficient(int n) const {
    Scalar r;
    for (const auto& [p, th] : theta) {
      if (p.size() != n) continue;
      const cplx c = symfun::schur(p, n).coefficient(symfun::mono_t(1, n));
      r += th * c;
    }
    if (n == 0) r = get(Partition{});
    return r;
  }
};

struct Diagonalization {
  std::vector<EigenTau> states;
  // max over stored operators and Laurent coefficients of |offdiag| / |all|
  double offdiag_residual = 0.0;
};

inline Diagonalization diagonalize_master(const MasterT& m, const SectorLabel& sector,
                                          std::uint64_t seed, double tol = 1e-8) {
  const std::vector<int> idx = sector_indices(m.cfg, sector);
  const auto n = static_cast<Eigen::Index>(idx.size());
  auto restrict = [&](const Mat& a) {
    Mat r(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) r(i, j) = a(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    return r;
  };

  Rng rng(seed);
  Mat mix = Mat::Zero(n, n);
  for (const Partition& p : {Partition{1}, Partition{2}}) {
    auto it = m.T.find(p);
    if (it == m.T.end()) continue;
    for (const auto& [e, c] : it->second.coeffs()) mix += rng.cnormal() * restrict(c);
  }
  Eigen::ComplexEigenSolver<Mat> solver(mix);
  if (solver.info() != Eigen::Success) throw ConsistencyError("eigensolver failed in sector " + sector.str());
  const Mat V = solver.eigenvectors();
  const Eigen::PartialPivLU<Mat> lu(V);
  const Mat Vinv = lu.inverse();

  Diagonalization out;
  out.states.resize(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    EigenTau& et = out.states[static_cast<std::size_t>(k)];
    et.sector = sector;
    et.index = static_cast<int>(k);
    et.gamma = m.cfg.gamma;
    et.L = m.cfg.L;
    et.D = m.D;
    et.vector = Vec::Zero(m.cfg.dim());
    for (Eigen::Index i = 0; i < n; ++i) et.vector(idx[static_cast<std::size_t>(i)]) = V(i, k);
    et.vector.normalize();
  }
  for (const auto& [p, op] : m.T) {
    std::vector<Scalar> th(static_cast<std::size_t>(n));
    for (const auto& [e, c] : op.coeffs()) {
      const Mat d = Vinv * restrict(c) * V;
      const Mat off = d - Mat(d.diagonal().asDiagonal());
      if (d.norm() > 0) out.offdiag_residual = std::max(out.offdiag_residual, off.norm() / d.norm());
      for (Eigen::Index k = 0; k < n; ++k) th[static_cast<std::size_t>(k)].add(e, d(k, k));
    }
    for (Eigen::Index k = 0; k < n; ++k)
      out.states[static_cast<std::size_t>(k)].theta.emplace(p, th[static_cast<std::size_t>(k)]);
  }
  if (out.offdiag_residual > tol)
    throw ConsistencyError("master T-operator not simultaneously diagonal in sector " +
                           sector.str() + " (relative off-diagonal " +
                           std::to_string(out.offdiag_residual) + ")");
  return out;
}

struct RootTaylor {
  cplx u0;    // u_k(0)
  cplx udot;  // du_k/dt_1 at 0
  cplx uddot; // d^2u_k/dt_1^2 at 0
};

// Implicit-function Taylor data of the roots of tau_u(t_1, 0, 0, ...) near
// t_1 = 0, starting from the inhomogeneities.
inline std::vector<RootTaylor> zeros_taylor(const EigenTau& et, const std::vector<cplx>& inhom) {
  if (et.D < 2) throw ConfigError("zeros_taylor needs truncation D >= 2");
  for (std::size_t i = 0; i < inhom.size(); ++i)
    for (std::size_t j = i + 1; j < inhom.size(); ++j)
      if (std::abs(std::sinh(et.gamma * (inhom[i] - inhom[j]))) < 1e-8)
        throw DegenerateError("coincident inhomogeneities: roots are not simple");
  const cplx g = et.gamma;
  const Scalar th0 = et.t1_coefficient(0), th1 = et.t1_coefficient(1), th2 = et.t1_coefficient(2);
  const Scalar d0 = th0.derivative(g), dd0 = d0.derivative(g), d1 = th1.derivative(g);
  std::vector<RootTaylor> out;
  for (cplx uk : inhom) {
    const cplx p = d0.evaluate(uk, g);
    if (std::abs(p) < 1e-300) throw DegenerateError("root of T^empty is not simple");
    const cplx a = -th1.evaluate(uk, g) / p;
    const cplx b = -(0.5 * dd0.evaluate(uk, g) * a * a + d1.evaluate(uk, g) * a + th2.evaluate(uk, g)) / p;
    out.push_back({uk, a, 2.0 * b});
  }
  return out;
}

}  // namespace mtop::qvertex

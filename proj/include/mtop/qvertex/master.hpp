#pragma once

#include <map>
#include <vector>

#include "mtop/qvertex/cbr.hpp"
#include "mtop/symfun/schur.hpp"

namespace mtop::qvertex {

using symfun::TimePoly;
using symfun::TimeVector;

// Basis states whose site labels have occupation numbers M.
inline std::vector<int> sector_indices(const ModelConfig& cfg, const SectorLabel& sector) {
  sector.validate(cfg);
  std::vector<int> out;
  for (int i = 0; i < cfg.dim(); ++i) {
    std::vector<int> count(static_cast<std::size_t>(cfg.N), 0);
    for (int s : basis_labels(i, cfg.N, cfg.L)) ++count[static_cast<std::size_t>(s)];
    if (count == sector.M) out.push_back(i);
  }
  return out;
}

// Orthogonal projector onto the joint H_a eigenspace with eigenvalues M_a.
inline Mat sector_projector(const ModelConfig& cfg, const SectorLabel& sector) {
  Mat P = Mat::Zero(cfg.dim(), cfg.dim());
  for (int i : sector_indices(cfg, sector)) P(i, i) = 1.0;
  return P;
}

inline long long multinomial(const std::vector<int>& M) {
  long long r = 1;
  int n = 0;
  for (int m : M)
    for (int k = 1; k <= m; ++k) r = r * (++n) / k;
  return r;
}

// T^lambda for all |lambda| <= D with at most N rows in the conjugate
// (longer first columns vanish identically and are not stored).
struct MasterT {
  ModelConfig cfg;
  int D = 0;
  FusionConvention fusion;
  std::map<Partition, QOperator> T;
  std::map<Partition, double> division_residual;
  std::vector<cplx> column_normalization;

  QOperator get(const Partition& lambda) const {
    if (lambda.size() > D) throw ConfigError("partition " + lambda.str() + " exceeds the master cap");
    auto it = T.find(lambda);
    return it == T.end() ? QOperator() : it->second;
  }

  std::vector<Partition> partitions() const {
    std::vector<Partition> out;
    for (const auto& [p, op] : T) out.push_back(p);
    return out;
  }

  // T(u, t) at numeric times as a Laurent operator in x.
  QOperator evaluate_t(const TimeVector& t) const {
    QOperator r;
    for (const auto& [p, op] : T) r += op * symfun::schur_numeric(p, t);
    return r;
  }
};

inline MasterT build_master(const ModelConfig& cfg, int D, FusionConvention conv = {},
                            double tol = 1e-10) {
  cfg.validate();
  if (D < 1 || D > kMaxWeight)
    throw ConfigError("truncation D must lie in 1.." + std::to_string(kMaxWeight));
  MasterT m;
  m.cfg = cfg;
  m.D = D;
  m.fusion = conv;
  const ColumnFamily cols(cfg, conv, tol);
  for (const auto& c : cols.cols) m.column_normalization.push_back(c.normalization);
  for (const Partition& p : symfun::partitions_up_to(D)) {
    if (p.first_column() > cfg.N) continue;
    CbrResult r = cbr_from_cols(cfg, p, cols, tol);
    m.T.emplace(p, std::move(r.op));
    m.division_residual.emplace(p, r.division_residual);
  }
  return m;
}

// Coefficients of z^{-s} in T(u, sign [z^{-1}]) = sum_lambda s_lambda(sign [z^{-1}]) T^lambda.
inline std::map<int, QOperator> generating_series(const MasterT& m, int sign) {
  std::map<int, QOperator> out;
  for (const auto& [p, op] : m.T) {
    const symfun::ZSeries z = symfun::miwa_shift(symfun::schur(p, p.size()), sign, 0, 1);
    for (const auto& [key, poly] : z.terms()) {
      const cplx c = poly.constant_term();
      if (std::abs(c) > 1e-12) out[-key[0]] += op * c;
    }
  }
  return out;
}

inline double commutator_residual(const Mat& a, const Mat& b) {
  const double s = a.norm() * b.norm();
  return s == 0.0 ? 0.0 : commutator(a, b).norm() / s;
}

}  // namespace mtop::qvertex

#pragma once

#include <vector>

#include "mtop/qvertex/model.hpp"
#include "mtop/qvertex/rmatrix.hpp"

namespace mtop::qvertex {

// tr_aux(R_{1,aux}(u - u_1) ... R_{L,aux}(u - u_L) twist) for a site R-matrix
// with layout site (x) aux. Built site by site as an aux-space matrix whose
// entries are Laurent operators on the sites absorbed so far.
inline QOperator monodromy_trace(const QOperator& site_r, int site_dim, int aux_dim,
                                 const std::vector<cplx>& aux_twist,
                                 const std::vector<cplx>& inhom, cplx gamma) {
  const auto d = static_cast<std::size_t>(aux_dim);
  if (aux_twist.size() != d) throw ConfigError("aux twist has the wrong size");
  using Row = std::vector<QOperator>;
  std::vector<Row> M(d, Row(d));
  for (std::size_t a = 0; a < d; ++a) M[a][a] = identity_op(1);
  for (cplx ul : inhom) {
    const QOperator r = site_r.shift(-ul, gamma);
    std::vector<Row> B(d, Row(d));
    for (const auto& [e, c] : r.coeffs())
      for (int g = 0; g < aux_dim; ++g)
        for (int b = 0; b < aux_dim; ++b) {
          Mat blk(site_dim, site_dim);
          for (int s = 0; s < site_dim; ++s)
            for (int t = 0; t < site_dim; ++t) blk(s, t) = c(s * aux_dim + g, t * aux_dim + b);
          B[static_cast<std::size_t>(g)][static_cast<std::size_t>(b)].add(e, blk);
        }
    std::vector<Row> next(d, Row(d));
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t g = 0; g < d; ++g)
          if (!M[a][g].is_zero() && !B[g][b].is_zero()) next[a][b] += kron(M[a][g], B[g][b]);
    M = std::move(next);
  }
  QOperator T;
  for (std::size_t a = 0; a < d; ++a) T += M[a][a] * aux_twist[a];
  return T;
}

// T^empty(u) = prod_l (x e^{-gamma u_l} - x^{-1} e^{gamma u_l}) = 2^L prod sinh(gamma(u - u_l)).
inline BinomialProduct t_empty_factors(const ModelConfig& cfg) {
  BinomialProduct p;
  for (cplx ul : cfg.inhom) p.alphas.push_back(std::exp(-cfg.gamma * ul));
  return p;
}

inline Scalar t_empty(const ModelConfig& cfg) { return t_empty_factors(cfg).expand(); }

// det g T^empty(u + 1)
inline Scalar t_fullcolumn(const ModelConfig& cfg) {
  return t_empty(cfg).shift(1.0, cfg.gamma) * cfg.det_twist();
}

inline QOperator transfer_fundamental(const ModelConfig& cfg, RFault fault = RFault::None) {
  return monodromy_trace(r_fundamental(cfg.N, cfg.gamma, fault), cfg.N, cfg.N, cfg.twist,
                         cfg.inhom, cfg.gamma);
}

struct ColumnTransfer {
  QOperator op;
  // Scalar applied to match the top coefficient on the all-ones state.
  cplx normalization = 1.0;
  // Relative deviation of T^N from det g T^empty(u+1) (only for a = N).
  double anchor_residual = 0.0;
};

inline cplx elementary_symmetric(const std::vector<cplx>& z, int a) {
  std::vector<cplx> e(static_cast<std::size_t>(a + 1), 0.0);
  e[0] = 1.0;
  for (cplx zi : z)
    for (int k = a; k >= 1; --k) e[static_cast<std::size_t>(k)] += zi * e[static_cast<std::size_t>(k - 1)];
  return e[static_cast<std::size_t>(a)];
}

// One-column transfer matrix T^a by fusion, 0 <= a (zero for a > N).
inline ColumnTransfer transfer_column(const ModelConfig& cfg, int a, FusionConvention conv = {},
                                      double tol = 1e-10) {
  const int dim = cfg.dim();
  ColumnTransfer out;
  if (a < 0 || a > cfg.N) {
    out.op = QOperator();
    return out;
  }
  if (a == 0) {
    out.op = times_identity(t_empty(cfg), dim);
    return out;
  }
  const int w = binomial(cfg.N, a);
  QOperator raw = monodromy_trace(r_fused(cfg.N, cfg.gamma, a, conv, tol), cfg.N, w,
                                  fused_twist(cfg.twist, a), cfg.inhom, cfg.gamma);
  // Top coefficient on |1...1>: e^{-gamma sum u} e_a(q^L p_1, p_2, ..., p_N).
  std::vector<cplx> z = cfg.twist;
  z[0] *= std::pow(cfg.q(), cfg.L);
  const cplx expected = std::exp(-cfg.gamma * cfg.sum_inhom()) * elementary_symmetric(z, a);
  if (!raw.has(cfg.L) || raw.at(cfg.L)(0, 0) == cplx(0.0))
    throw ConsistencyError("fused transfer matrix has a vanishing top coefficient");
  out.normalization = expected / raw.at(cfg.L)(0, 0);
  out.op = raw * out.normalization;
  if (a == cfg.N) {
    const QOperator ref = times_identity(t_fullcolumn(cfg), dim);
    out.anchor_residual = rel_residual((out.op - ref).norm(), out.op.norm(), ref.norm());
    if (out.anchor_residual > tol)
      throw ConsistencyError("T^N differs from the quantum determinant (relative " +
                             std::to_string(out.anchor_residual) + ")");
  }
  return out;
}

// One-row transfer matrix T_s from the spin-s representation (N = 2).
inline QOperator transfer_onerow_spin(const ModelConfig& cfg, int s) {
  if (cfg.N != 2) throw ConfigError("spin-s transfer matrices need N = 2");
  if (s < 0) return QOperator();
  const SpinRep rep = spin_rep(s, cfg.gamma);
  return monodromy_trace(r_spin(rep), 2, rep.dim(), rep.twist_image(cfg.twist[0], cfg.twist[1]),
                         cfg.inhom, cfg.gamma);
}

// Site operator e^{(l)}_{ab} and the magnon-number operators.
inline Mat site_op(int N, int L, int l, const Mat& small) {
  return kron(kron(Mat::Identity(ipow(N, l), ipow(N, l)), small),
              Mat::Identity(ipow(N, L - l - 1), ipow(N, L - l - 1)));
}

inline Mat magnon_number(const ModelConfig& cfg, int a) {
  Mat H = Mat::Zero(cfg.dim(), cfg.dim());
  for (int l = 0; l < cfg.L; ++l) H += site_op(cfg.N, cfg.L, l, unit(cfg.N, a, a));
  return H;
}

}  // namespace mtop::qvertex

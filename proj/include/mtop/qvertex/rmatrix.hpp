#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "mtop/qvertex/laurent.hpp"
#include "mtop/qvertex/model.hpp"

namespace mtop::qvertex {

inline Mat unit(int n, int a, int b) {
  Mat m = Mat::Zero(n, n);
  m(a, b) = 1.0;
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

inline QOperator kron(const QOperator& a, const QOperator& b) {
  QOperator r;
  for (const auto& [ea, va] : a.coeffs())
    for (const auto& [eb, vb] : b.coeffs()) r.add(ea + eb, kron(va, vb));
  return r;
}

// Embeds an operator on factors (i, j) of a tensor product with the given
// factor dimensions; factor 0 is the most significant.
inline Mat embed_two(const Mat& op, int i, int j, const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  int total = 1;
  for (int d : dims) total *= d;
  std::vector<int> stride(static_cast<std::size_t>(n), 1);
  for (int k = n - 2; k >= 0; --k)
    stride[static_cast<std::size_t>(k)] = stride[static_cast<std::size_t>(k + 1)] * dims[static_cast<std::size_t>(k + 1)];
  const int di = dims[static_cast<std::size_t>(i)], dj = dims[static_cast<std::size_t>(j)];
  const int si = stride[static_cast<std::size_t>(i)], sj = stride[static_cast<std::size_t>(j)];
  Mat out = Mat::Zero(total, total);
  for (int row = 0; row < total; ++row) {
    const int ai = (row / si) % di, aj = (row / sj) % dj;
    const int rest = row - ai * si - aj * sj;
    for (int bi = 0; bi < di; ++bi)
      for (int bj = 0; bj < dj; ++bj) {
        const cplx v = op(ai * dj + aj, bi * dj + bj);
        if (v != cplx(0.0)) out(row, rest + bi * si + bj * sj) = v;
      }
  }
  return out;
}

inline QOperator embed_two(const QOperator& op, int i, int j, const std::vector<int>& dims) {
  return op.map([&](const Mat& m) { return embed_two(m, i, j, dims); });
}

enum class RFault { None, ExchangeSign };

// Fundamental trigonometric R-matrix on C^N (x) C^N as a Laurent polynomial
// of degree one in x. The exchange term carries x^{sign(b-a)}.
inline QOperator r_fundamental(int N, cplx gamma, RFault fault = RFault::None) {
  const cplx q = std::exp(gamma);
  const int n = N * N;
  Mat up = Mat::Zero(n, n), down = Mat::Zero(n, n);
  const cplx ex = (fault == RFault::ExchangeSign ? -1.0 : 1.0) * (q - 1.0 / q);
  for (int a = 0; a < N; ++a) {
    up(a * N + a, a * N + a) = q;
    down(a * N + a, a * N + a) = -1.0 / q;
    for (int b = 0; b < N; ++b) {
      if (a == b) continue;
      up(a * N + b, a * N + b) = 1.0;
      down(a * N + b, a * N + b) = -1.0;
      // e_ab (x) e_ba maps |b, a> to |a, b>
      (b > a ? up : down)(a * N + b, b * N + a) = ex;
    }
  }
  QOperator r(1, up);
  r.add(-1, down);
  return r;
}

inline Mat r_eval(int N, cplx gamma, cplx u, RFault fault = RFault::None) {
  return r_fundamental(N, gamma, fault).evaluate(u, gamma);
}

struct CheckResult {
  double residual = 0.0;
  int trials = 0;
};

// R12(u1-u2) R13(u1-u3) R23(u2-u3) against the reversed product.
inline CheckResult check_ybe(int N, cplx gamma, int trials, Rng& rng, RFault fault = RFault::None) {
  CheckResult out;
  const std::vector<int> dims{N, N, N};
  const QOperator r = r_fundamental(N, gamma, fault);
  for (int k = 0; k < trials; ++k) {
    const cplx u1 = rng.box(1.0, 1.0), u2 = rng.box(1.0, 1.0), u3 = rng.box(1.0, 1.0);
    const Mat r12 = embed_two(r.evaluate(u1 - u2, gamma), 0, 1, dims);
    const Mat r13 = embed_two(r.evaluate(u1 - u3, gamma), 0, 2, dims);
    const Mat r23 = embed_two(r.evaluate(u2 - u3, gamma), 1, 2, dims);
    out.residual = std::max(out.residual, rel_residual(r12 * r13 * r23, r23 * r13 * r12));
    ++out.trials;
  }
  return out;
}

// R(u) g(x)g = g(x)g R(u) for random diagonal g.
inline CheckResult check_g_invariance(int N, cplx gamma, int trials, Rng& rng,
                                      RFault fault = RFault::None) {
  CheckResult out;
  const QOperator r = r_fundamental(N, gamma, fault);
  for (int k = 0; k < trials; ++k) {
    Vec g(N);
    for (int a = 0; a < N; ++a) g(a) = rng.cnormal();
    const Mat gg = kron(Mat(g.asDiagonal()), Mat(g.asDiagonal()));
    const Mat ru = r.evaluate(rng.box(1.0, 1.0), gamma);
    out.residual = std::max(out.residual, rel_residual(ru * gg, gg * ru));
    ++out.trials;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fusion

enum class Staircase { Descending, Ascending };
enum class AntisymSign { MinusQ, MinusQInv };

struct FusionConvention {
  Staircase staircase = Staircase::Descending;
  AntisymSign sign = AntisymSign::MinusQ;

  std::string str() const {
    return std::string(staircase == Staircase::Descending ? "u,u-1,...,u-a+1" : "u-a+1,...,u") +
           (sign == AntisymSign::MinusQ ? " / (-q)^inv" : " / (-1/q)^inv");
  }
  bool operator==(const FusionConvention&) const = default;
};

inline int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

inline std::vector<std::vector<int>> combinations(int N, int a) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == a) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < N; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// Orthonormal basis (columns) of the image of the q-antisymmetrizer on
// (C^N)^{(x)a}: one column per i_1 < ... < i_a, sum_sigma c^{inv(sigma)} e_{i_sigma}.
inline Mat antisym_basis(int N, int a, cplx gamma, AntisymSign sign = AntisymSign::MinusQ) {
  const cplx q = std::exp(gamma);
  const cplx c = sign == AntisymSign::MinusQ ? -q : -1.0 / q;
  const int dim = ipow(N, a);
  const auto combs = combinations(N, a);
  Mat Q = Mat::Zero(dim, static_cast<Eigen::Index>(combs.size()));
  std::vector<int> perm(static_cast<std::size_t>(a));
  for (std::size_t col = 0; col < combs.size(); ++col) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      int inv = 0;
      for (int i = 0; i < a; ++i)
        for (int j = i + 1; j < a; ++j)
          if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inv;
      int idx = 0;
      for (int k = 0; k < a; ++k) idx = idx * N + combs[col][static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
      Q(idx, static_cast<Eigen::Index>(col)) += std::pow(c, inv);
    } while (std::next_permutation(perm.begin(), perm.end()));
    Q.col(static_cast<Eigen::Index>(col)).normalize();
  }
  return Q;
}

// Orthogonal projector onto the q-antisymmetrized subspace; zero for a > N.
inline Mat antisymmetrizer(int N, int a, cplx gamma, AntisymSign sign = AntisymSign::MinusQ) {
  if (a < 0) throw ConfigError("antisymmetrizer needs a >= 0");
  const int dim = ipow(N, a);
  if (a > N) return Mat::Zero(dim, dim);
  const Mat Q = antisym_basis(N, a, gamma, sign);
  return Q * Q.adjoint();
}

// prod_j R_{0,j}(v - shift_j) on site (x) aux_1 (x) ... (x) aux_a.
inline QOperator fused_raw(int N, cplx gamma, int a, Staircase st, RFault fault = RFault::None) {
  std::vector<int> dims(static_cast<std::size_t>(a + 1), N);
  const QOperator r = r_fundamental(N, gamma, fault);
  QOperator out = identity_op(ipow(N, a + 1));
  for (int j = 0; j < a; ++j) {
    const int shift = st == Staircase::Descending ? j : a - 1 - j;
    out = out * embed_two(r.shift(-cplx(shift), gamma), 0, j + 1, dims);
  }
  return out;
}

// Leakage of the fused product out of the antisymmetrized image at a
// numeric spectral parameter: |(1 - P) F P| / |F|.
inline double fusion_leakage(int N, cplx gamma, int a, FusionConvention conv, cplx v) {
  const Mat F = fused_raw(N, gamma, a, conv.staircase).evaluate(v, gamma);
  const Mat P = kron(Mat::Identity(N, N), antisymmetrizer(N, a, gamma, conv.sign));
  const Mat I = Mat::Identity(P.rows(), P.cols());
  return ((I - P) * F * P).norm() / F.norm();
}

struct FusionSelection {
  FusionConvention chosen;
  std::vector<std::pair<FusionConvention, double>> leakage;
};

// Picks the convention whose fused product preserves the antisymmetrized
// image, testing every a in 2..N at a few random spectral parameters.
inline FusionSelection select_fusion_convention(int N, cplx gamma, Rng& rng, int samples = 3) {
  FusionSelection sel;
  std::vector<cplx> vs;
  for (int k = 0; k < samples; ++k) vs.push_back(rng.box(1.0, 1.0));
  double best = 1e300;
  for (Staircase st : {Staircase::Descending, Staircase::Ascending}) {
    for (AntisymSign sg : {AntisymSign::MinusQ, AntisymSign::MinusQInv}) {
      const FusionConvention conv{st, sg};
      double worst = 0.0;
      for (int a = 2; a <= N; ++a)
        for (cplx v : vs) worst = std::max(worst, fusion_leakage(N, gamma, a, conv, v));
      sel.leakage.emplace_back(conv, worst);
      if (worst < best) {
        best = worst;
        sel.chosen = conv;
      }
    }
  }
  return sel;
}

// Fused site R-matrix restricted to the antisymmetrized image W, layout
// site (x) W, with the scalar prod_{k=1}^{a-1} (x q^{-k} - x^{-1} q^k)
// divided out.
inline QOperator r_fused(int N, cplx gamma, int a, FusionConvention conv = {}, double tol = 1e-10) {
  if (a < 1 || a > N) throw ConfigError("fused R-matrix needs 1 <= a <= N");
  if (a == 1) return r_fundamental(N, gamma);
  const Mat Q = antisym_basis(N, a, gamma, conv.sign);
  const Mat left = kron(Mat::Identity(N, N), Mat(Q.adjoint()));
  const Mat right = kron(Mat::Identity(N, N), Q);
  const QOperator raw =
      fused_raw(N, gamma, a, conv.staircase).map([&](const Mat& m) { return Mat(left * m * right); });
  BinomialProduct scalar;
  for (int k = 1; k < a; ++k) scalar.alphas.push_back(std::exp(-gamma * cplx(k)));
  return divide_exact(raw, scalar, tol);
}

// Twist on W: g^{(x)a} is diagonal in the antisymmetrized basis.
inline std::vector<cplx> fused_twist(const std::vector<cplx>& twist, int a) {
  std::vector<cplx> out;
  for (const auto& comb : combinations(static_cast<int>(twist.size()), a)) {
    cplx p = 1.0;
    for (int i : comb) p *= twist[static_cast<std::size_t>(i)];
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spin-s evaluation representation of the N = 2 algebra

struct SpinRep {
  int s = 0;
  cplx gamma;
  // L^{+}_{ab}, L^{-}_{ab}, a,b in {0,1}; absent triangles are zero.
  std::array<std::array<Mat, 2>, 2> Lp, Lm;

  int dim() const { return s + 1; }
  std::vector<cplx> twist_image(cplx p1, cplx p2) const {
    std::vector<cplx> out;
    for (int k = 0; k <= s; ++k) out.push_back(std::pow(p1, s - k) * std::pow(p2, k));
    return out;
  }
};

inline cplx qnumber(int n, cplx q) { return (std::pow(q, n) - std::pow(q, -n)) / (q - 1.0 / q); }

// Basis v_k, k = 0..s, with h_1 = s - k, h_2 = k.
inline SpinRep spin_rep(int s, cplx gamma) {
  if (s < 0) throw ConfigError("spin label must be >= 0");
  SpinRep rep;
  rep.s = s;
  rep.gamma = gamma;
  const cplx q = std::exp(gamma);
  const int d = s + 1;
  Mat h1 = Mat::Zero(d, d), h2 = Mat::Zero(d, d), F = Mat::Zero(d, d), E = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    h1(k, k) = std::pow(q, s - k);
    h2(k, k) = std::pow(q, k);
  }
  for (int k = 0; k < s; ++k) {
    F(k + 1, k) = qnumber(k + 1, q) * qnumber(s - k, q);
    E(k, k + 1) = 1.0;
  }
  rep.Lp[0][0] = h1;
  rep.Lp[1][1] = h2;
  rep.Lm[0][0] = h1.inverse();
  rep.Lm[1][1] = h2.inverse();
  rep.Lp[0][1] = (q - 1.0 / q) * F;
  rep.Lp[1][0] = Mat::Zero(d, d);
  rep.Lm[1][0] = -(q - 1.0 / q) * E;
  rep.Lm[0][1] = Mat::Zero(d, d);
  return rep;
}

// x sum_{a<=b} e_ab (x) L^+_ab - x^{-1} sum_{a>=b} e_ab (x) L^-_ab, layout
// site (x) aux.
inline QOperator r_spin(const SpinRep& rep) {
  QOperator r;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      if (a <= b) r.add(1, kron(unit(2, a, b), rep.Lp[a][b]));
      if (a >= b) r.add(-1, Mat(-kron(unit(2, a, b), rep.Lm[a][b])));
    }
  return r;
}

}  // namespace mtop::qvertex

#pragma once

#include <Eigen/LU>
#include <vector>

#include "mtop/symfun/timepoly.hpp"
#include "mtop/tausolve/model.hpp"

namespace mtop::tausolve {

using symfun::TimeVector;
using symfun::xi_eval;

// t -> t + sign [z^{-1}], i.e. t_k -> t_k + sign z^{-k}/k.
struct MiwaShift {
  int sign = 1;
  cplx z;
};
using Shifts = std::vector<MiwaShift>;

inline Shifts with_shift(Shifts s, int sign, cplx z) {
  s.push_back({sign, z});
  return s;
}

// exp(xi(t + shifts, P)) in closed form: each shift contributes (1 - P/z)^{-sign}.
inline cplx exp_xi(const TimeVector& t, const Shifts& shifts, cplx P) {
  cplx f = std::exp(xi_eval(t, P));
  for (const MiwaShift& s : shifts) {
    const cplx w = 1.0 - P / s.z;
    if (s.sign > 0) {
      if (std::abs(w) < 1e-14) throw PoleError("Miwa shift point sits on a string point");
      f /= w;
    } else {
      f *= w;
    }
  }
  return f;
}

inline cplx bfun(const CasoratiModel& m, int i, cplx u, const TimeVector& t, const Shifts& shifts = {}) {
  const StringData& s = m.strings.at(static_cast<std::size_t>(i));
  cplx sum = 0.0;
  for (int k = 0; k <= s.M; ++k)
    sum += s.b[static_cast<std::size_t>(k)] * std::exp(2.0 * m.gamma * s.m_value(k) * u) *
           exp_xi(t, shifts, s.point(m.gamma, k));
  return std::exp(u * std::log(s.p)) * sum;
}

// prod_i p_i^{-u}, principal logarithms; cancels the p_i^u inside B_i exactly.
inline cplx gauge(const CasoratiModel& m, cplx u) {
  cplx l = 0.0;
  for (const auto& s : m.strings) l += std::log(s.p);
  return std::exp(-u * l);
}

inline cplx det_g(const CasoratiModel& m) {
  cplx d = 1.0;
  for (const auto& s : m.strings) d *= s.p;
  return d;
}

inline cplx det(const Mat& a) {
  if (a.rows() == 0) return 1.0;
  if (a.rows() == 1) return a(0, 0);
  return a.partialPivLu().determinant();
}

// d det(A) given the entrywise derivative dA (column expansion).
inline cplx det_derivative(const Mat& a, const Mat& da) {
  cplx s = 0.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    Mat b = a;
    b.col(k) = da.col(k);
    s += det(b);
  }
  return s;
}

// [B_i(u - j)]_{i, j=1..N}
inline Mat casorati_matrix(const CasoratiModel& m, cplx u, const TimeVector& t, const Shifts& shifts = {}) {
  const int n = m.N();
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 1; j <= n; ++j) a(i, j - 1) = bfun(m, i, u - double(j), t, shifts);
  return a;
}

// tau_u(t + shifts), every column evaluated at the shifted times.
inline cplx tau(const CasoratiModel& m, cplx u, const TimeVector& t, const Shifts& shifts = {}) {
  if (m.N() == 0) return 1.0;
  return gauge(m, u) * det(casorati_matrix(m, u, t, shifts));
}

// d tau / d t_1: only the first column survives, B_i(u-1) -> B_i(u).
inline cplx dtau_t1(const CasoratiModel& m, cplx u, const TimeVector& t, const Shifts& shifts = {}) {
  if (m.N() == 0) return 0.0;
  Mat a = casorati_matrix(m, u, t, shifts);
  for (int i = 0; i < m.N(); ++i) a(i, 0) = bfun(m, i, u, t, shifts);
  return gauge(m, u) * det(a);
}

inline double hadamard_scale(const Mat& a) {
  double s = 1.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) s *= a.col(k).norm();
  return s;
}

inline void require_regular(const Mat& casorati, const char* what) {
  if (std::abs(det(casorati)) <= 1e-13 * hadamard_scale(casorati))
    throw PoleError(std::string(what) + ": tau vanishes at this point");
}

inline void require_off_strings(const CasoratiModel& m, cplx z) {
  for (cplx P : m.points())
    if (std::abs(z - P) <= 1e-12 * std::abs(P)) throw PoleError("z lies on a string point");
}

// tau_u(t + shifts + [z^{-1}]) with the z-dependence confined to the first column.
inline cplx tau_miwa_plus(const CasoratiModel& m, cplx u, const TimeVector& t, cplx z,
                          const Shifts& shifts = {}) {
  require_off_strings(m, z);
  if (m.N() == 0) return 1.0;
  Mat a = casorati_matrix(m, u, t, shifts);
  const Shifts sz = with_shift(shifts, 1, z);
  for (int i = 0; i < m.N(); ++i) a(i, 0) = bfun(m, i, u - 1.0, t, sz);
  return gauge(m, u) * det(a);
}

inline std::vector<cplx> tau_miwa_plus_batch(const CasoratiModel& m, cplx u, const TimeVector& t,
                                             const std::vector<cplx>& zs, const Shifts& shifts = {}) {
  std::vector<cplx> out;
  out.reserve(zs.size());
  if (m.N() == 0) return std::vector<cplx>(zs.size(), 1.0);
  Mat a = casorati_matrix(m, u, t, shifts);
  const cplx g = gauge(m, u);
  Shifts sz = with_shift(shifts, 1, 0.0);
  for (cplx z : zs) {
    require_off_strings(m, z);
    sz.back().z = z;
    for (int i = 0; i < m.N(); ++i) a(i, 0) = bfun(m, i, u - 1.0, t, sz);
    out.push_back(g * det(a));
  }
  return out;
}

// Coefficient of z^{-s} in tau_u(t + [z^{-1}]): first column B_i(u + s - 1).
inline cplx tau_plus_coefficient(const CasoratiModel& m, cplx u, const TimeVector& t, int s) {
  if (m.N() == 0) return s == 0 ? 1.0 : 0.0;
  Mat a = casorati_matrix(m, u, t);
  for (int i = 0; i < m.N(); ++i) a(i, 0) = bfun(m, i, u + double(s) - 1.0, t);
  return gauge(m, u) * det(a);
}

// z^{-u} e^{-xi} psi: the (N+1)x(N+1) determinant over the Casorati determinant.
inline cplx baker_reduced(const CasoratiModel& m, cplx u, const TimeVector& t, cplx z) {
  const int n = m.N();
  const Mat c = casorati_matrix(m, u, t);
  require_regular(c, "Baker-Akhiezer function");
  Mat a(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    a(0, k) = std::pow(z, -k);
    for (int i = 0; i < n; ++i) a(i + 1, k) = bfun(m, i, u - double(k), t);
  }
  return det(a) / det(c);
}

// psi with z^u = exp(u log_z); the explicit log lets string points carry the
// branch p^u e^{2 gamma m u} used inside B_i.
inline cplx baker(const CasoratiModel& m, cplx u, const TimeVector& t, cplx z, cplx log_z) {
  return std::exp(u * log_z + xi_eval(t, z)) * baker_reduced(m, u, t, z);
}

inline cplx baker(const CasoratiModel& m, cplx u, const TimeVector& t, cplx z) {
  return baker(m, u, t, z, std::log(z));
}

// psi through the tau ratio z^u e^xi tau(t - [z^{-1}]) / tau(t)
inline cplx baker_from_tau(const CasoratiModel& m, cplx u, const TimeVector& t, cplx z) {
  return std::exp(u * std::log(z) + xi_eval(t, z)) * tau(m, u, t, {{-1, z}}) / tau(m, u, t);
}

// psi* from the first-column determinant over the Casorati determinant.
inline cplx adjoint_baker(const CasoratiModel& m, cplx u, const TimeVector& t, cplx z) {
  const Mat c = casorati_matrix(m, u, t);
  require_regular(c, "adjoint Baker-Akhiezer function");
  return std::exp(-u * std::log(z) - xi_eval(t, z)) * tau_miwa_plus(m, u, t, z) / (gauge(m, u) * det(c));
}

inline cplx adjoint_baker_from_tau(const CasoratiModel& m, cplx u, const TimeVector& t, cplx z) {
  return std::exp(-u * std::log(z) - xi_eval(t, z)) * tau(m, u, t, {{1, z}}) / tau(m, u, t);
}

// w_1..w_N from B_i(u) + sum_k B_i(u-k) w_k = 0.
struct WCoeffs {
  std::vector<cplx> w;
};

inline WCoeffs wcoeffs(const CasoratiModel& m, cplx u, const TimeVector& t) {
  const int n = m.N();
  const Mat a = casorati_matrix(m, u, t);
  if (std::abs(det(a)) <= 1e-13 * hadamard_scale(a))
    throw DegenerateError("Casorati system is singular at this point");
  Vec rhs(n);
  for (int i = 0; i < n; ++i) rhs(i) = -bfun(m, i, u, t);
  const Vec w = a.fullPivLu().solve(rhs);
  return {std::vector<cplx>(w.data(), w.data() + n)};
}

inline cplx wpoly(const WCoeffs& w, cplx z) {
  cplx s = 1.0;
  for (std::size_t k = 0; k < w.w.size(); ++k) s += w.w[k] * std::pow(z, -static_cast<int>(k + 1));
  return s;
}

// d psi / d t_1 from the column derivatives of both determinants.
inline cplx dbaker_t1(const CasoratiModel& m, cplx u, const TimeVector& t, cplx z) {
  const int n = m.N();
  const Mat c = casorati_matrix(m, u, t);
  require_regular(c, "Baker-Akhiezer function");
  Mat dc(n, n), a(n + 1, n + 1), da(n + 1, n + 1);
  for (int j = 1; j <= n; ++j)
    for (int i = 0; i < n; ++i) dc(i, j - 1) = bfun(m, i, u - double(j) + 1.0, t);
  for (int k = 0; k <= n; ++k) {
    a(0, k) = std::pow(z, -k);
    da(0, k) = 0.0;
    for (int i = 0; i < n; ++i) {
      a(i + 1, k) = bfun(m, i, u - double(k), t);
      da(i + 1, k) = bfun(m, i, u - double(k) + 1.0, t);
    }
  }
  const cplx d0 = det(c), d1 = det(a);
  const cplx reduced = d1 / d0;
  const cplx dreduced = (det_derivative(a, da) * d0 - d1 * det_derivative(c, dc)) / (d0 * d0);
  return std::exp(u * std::log(z) + xi_eval(t, z)) * (z * reduced + dreduced);
}

}  // namespace mtop::tausolve

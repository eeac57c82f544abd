#pragma once

#include <functional>
#include <map>
#include <vector>

#include "mtop/symfun/partition.hpp"
#include "mtop/symfun/timepoly.hpp"
#include "mtop/symfun/zseries.hpp"

namespace mtop::symfun {

namespace detail {

// Sum over partitions mu of k of prod_j (sign_j t_j)^{m_j} / m_j!, which is the
// t^k coefficient of exp(sum_j sign_j t_j z^j).
inline TimePoly exp_coefficient(int k, int cap, bool alternating) {
  TimePoly out(cap);
  if (k < 0) return out;
  if (k == 0) return TimePoly::constant(1.0, cap);
  for (const Partition& mu : partitions_of(k)) {
    Monomial m(static_cast<std::size_t>(mu.first_row()), 0);
    for (int part : mu.parts()) ++m[static_cast<std::size_t>(part - 1)];
    cplx c = 1.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
      c /= std::tgamma(m[j] + 1.0);
      if (alternating && (j % 2 == 1) && (m[j] % 2 == 1)) c = -c;
    }
    out.add_term(m, c);
  }
  return out;
}

// Laplace expansion along the first row, memoized on the set of used columns.
inline TimePoly det(const std::vector<std::vector<TimePoly>>& a, int cap) {
  const std::size_t n = a.size();
  if (n == 0) return TimePoly::constant(1.0, cap);
  std::map<unsigned, TimePoly> memo;
  std::function<TimePoly(std::size_t, unsigned)> rec = [&](std::size_t row, unsigned used) {
    if (row == n) return TimePoly::constant(1.0, cap);
    if (auto it = memo.find(used); it != memo.end()) return it->second;
    TimePoly sum(cap);
    int sign = 1;
    for (std::size_t col = 0; col < n; ++col) {
      if (used & (1u << col)) continue;
      if (!a[row][col].is_zero()) {
        TimePoly minor = rec(row + 1, used | (1u << col));
        TimePoly term = TimePoly::mul_capped(a[row][col], minor, cap);
        if (sign < 0) sum -= term; else sum += term;
      }
      sign = -sign;
    }
    memo.emplace(used, sum);
    return sum;
  };
  return rec(0, 0u);
}

}  // namespace detail

// Complete-type polynomial: sum_k h_k z^k = exp(xi(t, z)).
inline TimePoly hpoly(int k, int cap) { return detail::exp_coefficient(k, cap, false); }

// Elementary-type polynomial: sum_k e_k z^k = exp(-xi(t, -z)).
inline TimePoly epoly(int k, int cap) { return detail::exp_coefficient(k, cap, true); }

inline TimePoly schur_h_determinant(const Partition& lambda, int cap) {
  const int n = lambda.length();
  std::vector<std::vector<TimePoly>> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)].push_back(hpoly(lambda[i] - i + j, cap));
  return detail::det(a, cap);
}

inline TimePoly schur_e_determinant(const Partition& lambda, int cap) {
  const Partition c = conjugate(lambda);
  const int n = c.length();
  std::vector<std::vector<TimePoly>> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)].push_back(epoly(c[i] - i + j, cap));
  return detail::det(a, cap);
}

// Schur polynomial from both Jacobi-Trudi determinants; they must agree.
inline TimePoly schur(const Partition& lambda, int cap, double tol = 1e-12) {
  if (cap < lambda.size())
    throw ConfigError("schur " + lambda.str() + " needs weight cap >= " +
                      std::to_string(lambda.size()));
  TimePoly h = schur_h_determinant(lambda, cap);
  TimePoly e = schur_e_determinant(lambda, cap);
  const double res = rel_residual((h - e).norm(), h.norm(), e.norm());
  if (res > tol)
    throw ConsistencyError("Jacobi-Trudi determinants disagree for " + lambda.str() +
                           " (residual " + std::to_string(res) + ")");
  return h;
}

inline std::map<Partition, TimePoly> schur_table(int max_size, int max_rows, int cap) {
  std::map<Partition, TimePoly> out;
  for (const Partition& p : partitions_up_to(max_size, max_rows)) out.emplace(p, schur(p, cap));
  return out;
}

// s_lambda(d~) P at t = 0, where d~ = (d/dt_1, d/dt_2 / 2, d/dt_3 / 3, ...).
inline cplx apply_schur_diffop(const Partition& lambda, const TimePoly& p) {
  if (p.cap() < lambda.size())
    throw ConfigError("apply_schur_diffop needs weight cap >= |lambda|");
  const TimePoly s = schur(lambda, lambda.size());
  cplx sum = 0.0;
  for (const auto& [m, c] : s.terms()) {
    double factor = 1.0;
    for (std::size_t k = 0; k < m.size(); ++k)
      factor *= std::tgamma(m[k] + 1.0) / std::pow(static_cast<double>(k + 1), m[k]);
    sum += c * factor * p.coefficient(m);
  }
  return sum;
}

inline cplx schur_numeric(const Partition& lambda, const TimeVector& t) {
  return schur(lambda, lambda.size()).evaluate(t);
}

// s_lambda(t + sum_{i in plus}[z_i^{-1}] - sum_{i in minus}[z_i^{-1}]).
inline ZSeries schur_shifted(const TimePoly& s, std::size_t nvars, const std::vector<std::size_t>& plus,
                             const std::vector<std::size_t>& minus = {}) {
  ZSeries out = ZSeries::from_time(s, nvars, s.cap());
  for (std::size_t v : plus) out = miwa_shift(out, +1, v);
  for (std::size_t v : minus) out = miwa_shift(out, -1, v);
  return out;
}

}  // namespace mtop::symfun

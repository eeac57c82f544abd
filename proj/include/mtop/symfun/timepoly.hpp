#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "mtop/core.hpp"

namespace mtop::symfun {

// Exponent vector of a monomial in the times: entry k-1 is the power of t_k.
// Trailing zeros are always trimmed so equal monomials compare equal.
using Monomial = std::vector<int>;

inline void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

// Graded weight: t_k carries weight k.
inline int weight(const Monomial& m) {
  int w = 0;
  for (std::size_t i = 0; i < m.size(); ++i) w += static_cast<int>(i + 1) * m[i];
  return w;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

// t_k^p as a monomial.
inline Monomial mono_t(int k, int p = 1) {
  Monomial m(static_cast<std::size_t>(k), 0);
  m[static_cast<std::size_t>(k - 1)] = p;
  trim(m);
  return m;
}

// "1^2 3^1" style key used in JSON reports (k^p for each nonzero power).
inline std::string mono_key(const Monomial& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    if (!s.empty()) s += " ";
    s += std::to_string(i + 1) + "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

// Numeric assignment t_1..t_K (finite support).
using TimeVector = std::vector<cplx>;

// Polynomial in t_1, t_2, ... truncated at graded weight <= cap. Every ring
// operation discards terms above the cap, so identities checked on TimePoly
// coefficients are exact within it.
class TimePoly {
 public:
  explicit TimePoly(int cap = 0) : cap_(cap) {
    if (cap < 0) throw ConfigError("TimePoly weight cap must be >= 0");
  }

  static TimePoly constant(cplx c, int cap) {
    TimePoly p(cap);
    p.add_term({}, c);
    return p;
  }
  static TimePoly variable(int k, int cap) {
    TimePoly p(cap);
    p.add_term(mono_t(k), 1.0);
    return p;
  }

  int cap() const { return cap_; }
  const std::map<Monomial, cplx>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Monomial m, cplx c) {
    trim(m);
    if (weight(m) > cap_ || c == cplx(0.0)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
      it->second += c;
      if (it->second == cplx(0.0)) terms_.erase(it);
    }
  }

  cplx coefficient(const Monomial& m) const {
    Monomial key = m;
    trim(key);
    auto it = terms_.find(key);
    return it == terms_.end() ? cplx(0.0) : it->second;
  }
  cplx constant_term() const { return coefficient({}); }

  // Largest index k with t_k present.
  int max_variable() const {
    int k = 0;
    for (const auto& [m, c] : terms_) k = std::max(k, static_cast<int>(m.size()));
    return k;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& [m, c] : terms_) s += std::norm(c);
    return std::sqrt(s);
  }

  TimePoly with_cap(int cap) const {
    TimePoly r(cap);
    for (const auto& [m, c] : terms_) r.add_term(m, c);
    return r;
  }

  TimePoly& operator+=(const TimePoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  TimePoly& operator-=(const TimePoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  TimePoly& operator*=(cplx s) {
    if (s == cplx(0.0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend TimePoly operator+(TimePoly a, const TimePoly& b) { return a += b; }
  friend TimePoly operator-(TimePoly a, const TimePoly& b) { return a -= b; }
  friend TimePoly operator*(TimePoly a, cplx s) { return a *= s; }
  friend TimePoly operator*(cplx s, TimePoly a) { return a *= s; }

  // Product truncated at the smaller of the two caps.
  friend TimePoly operator*(const TimePoly& a, const TimePoly& b) {
    return mul_capped(a, b, std::min(a.cap_, b.cap_));
  }

  static TimePoly mul_capped(const TimePoly& a, const TimePoly& b, int cap) {
    TimePoly r(cap);
    for (const auto& [ma, ca] : a.terms_) {
      const int wa = weight(ma);
      if (wa > cap) continue;
      for (const auto& [mb, cb] : b.terms_) {
        if (wa + weight(mb) > cap) continue;
        r.add_term(mono_mul(ma, mb), ca * cb);
      }
    }
    return r;
  }

  // Partial derivative in t_k.
  TimePoly derivative(int k) const {
    TimePoly r(cap_);
    const auto idx = static_cast<std::size_t>(k - 1);
    for (const auto& [m, c] : terms_) {
      if (idx >= m.size() || m[idx] == 0) continue;
      Monomial d = m;
      d[idx] -= 1;
      r.add_term(std::move(d), c * static_cast<double>(m[idx]));
    }
    return r;
  }

  cplx evaluate(const TimeVector& t) const {
    cplx sum = 0.0;
    for (const auto& [m, c] : terms_) {
      cplx term = c;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        const cplx ti = i < t.size() ? t[i] : cplx(0.0);
        term *= std::pow(ti, m[i]);
      }
      sum += term;
    }
    return sum;
  }

  bool operator==(const TimePoly& o) const { return cap_ == o.cap_ && terms_ == o.terms_; }

 private:
  int cap_;
  std::map<Monomial, cplx> terms_;
};

// exp(X) truncated at X's cap; X must have zero constant term.
inline TimePoly exp_series(const TimePoly& x) {
  if (x.constant_term() != cplx(0.0))
    throw ConfigError("exp_series needs a zero constant term");
  TimePoly result = TimePoly::constant(1.0, x.cap());
  TimePoly power = TimePoly::constant(1.0, x.cap());
  for (int n = 1; n <= x.cap(); ++n) {
    power = power * x;
    if (power.is_zero()) break;
    result += power * (1.0 / std::tgamma(n + 1.0));
  }
  return result;
}

// sqrt(c0 (1 + X)) = sqrt(c0) * sum binom(1/2, n) X^n, principal sqrt(c0).
inline TimePoly sqrt_series(const TimePoly& p) {
  const cplx c0 = p.constant_term();
  if (c0 == cplx(0.0)) throw DegenerateError("sqrt_series needs a nonzero constant term");
  TimePoly x = p * (1.0 / c0);
  x -= TimePoly::constant(1.0, p.cap());
  TimePoly result = TimePoly::constant(1.0, p.cap());
  TimePoly power = TimePoly::constant(1.0, p.cap());
  double binom = 1.0;
  for (int n = 1; n <= p.cap(); ++n) {
    binom *= (0.5 - (n - 1)) / n;
    power = power * x;
    if (power.is_zero()) break;
    result += power * binom;
  }
  return result * std::sqrt(c0);
}

// xi(t, z) = sum_k t_k z^k
inline cplx xi_eval(const TimeVector& t, cplx z) {
  cplx sum = 0.0;
  cplx zk = 1.0;
  for (const cplx& tk : t) {
    zk *= z;
    sum += tk * zk;
  }
  return sum;
}

}  // namespace mtop::symfun

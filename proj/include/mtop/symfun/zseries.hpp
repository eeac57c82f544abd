#pragma once

#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "mtop/symfun/timepoly.hpp"

namespace mtop::symfun {

// Exponents of the auxiliary variables z_1..z_m. Shift bookkeeping only ever
// produces non-positive exponents; prefactors such as (z_1 - z_2) add +1.
using ZKey = std::vector<int>;

inline int z_weight(const ZKey& k) { return -std::accumulate(k.begin(), k.end(), 0); }

// Series in z_1^{-1}..z_m^{-1} with TimePoly coefficients. Each z_i^{-1}
// carries weight 1 and t_k weight k; terms of joint weight above the cap are
// dropped, which makes Miwa substitution t -> t +- [z^{-1}] exact within it.
class ZSeries {
 public:
  ZSeries(std::size_t nvars, int cap) : nvars_(nvars), cap_(cap) {}

  static ZSeries from_time(const TimePoly& p, std::size_t nvars, int cap) {
    ZSeries s(nvars, cap);
    s.add(ZKey(nvars, 0), p);
    return s;
  }

  std::size_t nvars() const { return nvars_; }
  int cap() const { return cap_; }
  const std::map<ZKey, TimePoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Adds z^key * p, truncated so that z-weight + t-weight <= cap.
  void add(const ZKey& key, const TimePoly& p) {
    const int tcap = cap_ - z_weight(key);
    if (tcap < 0) return;
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      TimePoly q = p.with_cap(tcap);
      if (!q.is_zero()) terms_.emplace(key, std::move(q));
      return;
    }
    it->second += p.with_cap(tcap);
    if (it->second.is_zero()) terms_.erase(it);
  }

  TimePoly coefficient(const ZKey& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? TimePoly(std::max(cap_ - z_weight(key), 0)) : it->second;
  }

  ZSeries& operator+=(const ZSeries& o) {
    for (const auto& [k, p] : o.terms_) add(k, p);
    return *this;
  }
  ZSeries& operator-=(const ZSeries& o) {
    for (const auto& [k, p] : o.terms_) add(k, p * cplx(-1.0));
    return *this;
  }
  ZSeries& operator*=(cplx s) {
    for (auto& [k, p] : terms_) p *= s;
    if (s == cplx(0.0)) terms_.clear();
    return *this;
  }
  friend ZSeries operator+(ZSeries a, const ZSeries& b) { return a += b; }
  friend ZSeries operator-(ZSeries a, const ZSeries& b) { return a -= b; }
  friend ZSeries operator*(ZSeries a, cplx s) { return a *= s; }

  friend ZSeries operator*(const ZSeries& a, const ZSeries& b) {
    ZSeries r(a.nvars_, std::min(a.cap_, b.cap_));
    for (const auto& [ka, pa] : a.terms_) {
      for (const auto& [kb, pb] : b.terms_) {
        ZKey k(a.nvars_);
        for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
        const int tcap = r.cap_ - z_weight(k);
        if (tcap < 0) continue;
        r.add(k, TimePoly::mul_capped(pa, pb, tcap));
      }
    }
    return r;
  }

  // Multiplies by z_var^power; the cap moves with the weight so no term is lost.
  ZSeries times_z(std::size_t var, int power) const {
    ZSeries r(nvars_, cap_ - power);
    for (const auto& [k, p] : terms_) {
      ZKey nk = k;
      nk[var] += power;
      r.terms_.emplace(std::move(nk), p);
    }
    return r;
  }

  // Restricts to terms of joint weight <= cap (a smaller cap).
  ZSeries with_cap(int cap) const {
    ZSeries r(nvars_, cap);
    for (const auto& [k, p] : terms_) r.add(k, p);
    return r;
  }

  cplx evaluate(const TimeVector& t, const std::vector<cplx>& z) const {
    cplx sum = 0.0;
    for (const auto& [k, p] : terms_) {
      cplx zf = 1.0;
      for (std::size_t i = 0; i < k.size(); ++i) zf *= std::pow(z[i], k[i]);
      sum += zf * p.evaluate(t);
    }
    return sum;
  }

 private:
  std::size_t nvars_;
  int cap_;
  std::map<ZKey, TimePoly> terms_;
};

namespace detail {

// Expands prod_k (t_k + sign z^{-k}/k)^{e_k} for one monomial, with
// coefficient c, into `out` at z-key offset `base`.
inline void expand_miwa(const Monomial& m, cplx c, int sign, std::size_t var,
                        const ZKey& base, ZSeries& out) {
  Monomial rest(m.size(), 0);
  std::function<void(std::size_t, cplx, int)> rec = [&](std::size_t k, cplx coef, int zpow) {
    if (k == m.size()) {
      ZKey key = base;
      key[var] -= zpow;
      TimePoly p(std::max(out.cap() - z_weight(key), 0));
      p.add_term(rest, coef);
      out.add(key, p);
      return;
    }
    const int e = m[k];
    const double kk = static_cast<double>(k + 1);
    double binom = 1.0;
    for (int j = 0; j <= e; ++j) {
      rest[k] = e - j;
      rec(k + 1, coef * binom * std::pow(sign / kk, j), zpow + static_cast<int>(k + 1) * j);
      binom = binom * (e - j) / (j + 1);
    }
    rest[k] = 0;
  };
  rec(0, c, 0);
}

}  // namespace detail

// Substitutes t_k -> t_k + sign * z_var^{-k} / k in every coefficient of s.
inline ZSeries miwa_shift(const ZSeries& s, int sign, std::size_t var) {
  if (sign != 1 && sign != -1) throw ConfigError("Miwa shift sign must be +1 or -1");
  if (var >= s.nvars()) throw ConfigError("Miwa shift variable out of range");
  ZSeries out(s.nvars(), s.cap());
  for (const auto& [key, p] : s.terms())
    for (const auto& [m, c] : p.terms()) detail::expand_miwa(m, c, sign, var, key, out);
  return out;
}

inline ZSeries miwa_shift(const TimePoly& p, int sign, std::size_t var, std::size_t nvars) {
  return miwa_shift(ZSeries::from_time(p, nvars, p.cap()), sign, var);
}

}  // namespace mtop::symfun

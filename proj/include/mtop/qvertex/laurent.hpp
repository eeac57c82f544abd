#pragma once

#include <map>
#include <vector>

#include "mtop/core.hpp"

namespace mtop::qvertex {

namespace detail {
inline double coef_norm(const cplx& c) { return std::abs(c); }
inline double coef_norm(const Mat& m) { return m.norm(); }
inline bool coef_zero(const cplx& c) { return c == cplx(0.0); }
inline bool coef_zero(const Mat& m) { return m.size() == 0 || m.isZero(0.0); }
}  // namespace detail

// Laurent polynomial in x = e^{gamma u} with coefficients C (cplx or Mat).
// Missing exponents are zero; the empty polynomial is the zero element.
template <class C>
class Laurent {
 public:
  Laurent() = default;
  Laurent(int e, C c) { add(e, std::move(c)); }

  const std::map<int, C>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  bool has(int e) const { return c_.count(e) > 0; }
  const C& at(int e) const { return c_.at(e); }
  int min_exp() const { return c_.empty() ? 0 : c_.begin()->first; }
  int max_exp() const { return c_.empty() ? 0 : c_.rbegin()->first; }

  void add(int e, const C& v) {
    if (detail::coef_zero(v)) return;
    auto it = c_.find(e);
    if (it == c_.end()) {
      c_.emplace(e, v);
    } else {
      it->second += v;
      if (detail::coef_zero(it->second)) c_.erase(it);
    }
  }

  Laurent& operator+=(const Laurent& o) {
    for (const auto& [e, v] : o.c_) add(e, v);
    return *this;
  }
  Laurent& operator-=(const Laurent& o) {
    for (const auto& [e, v] : o.c_) add(e, C(-v));
    return *this;
  }
  Laurent& operator*=(cplx s) {
    if (s == cplx(0.0)) c_.clear();
    for (auto& [e, v] : c_) v *= s;
    return *this;
  }
  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator*(Laurent a, cplx s) { return a *= s; }
  friend Laurent operator*(cplx s, Laurent a) { return a *= s; }

  // u -> u + delta: the x^e coefficient picks up e^{gamma e delta}.
  Laurent shift(cplx delta, cplx gamma) const {
    Laurent r;
    for (const auto& [e, v] : c_) r.c_.emplace(e, C(v * std::exp(gamma * cplx(e) * delta)));
    return r;
  }

  // d/du
  Laurent derivative(cplx gamma) const {
    Laurent r;
    for (const auto& [e, v] : c_)
      if (e != 0) r.c_.emplace(e, C(v * (gamma * cplx(e))));
    return r;
  }

  C evaluate_x(cplx x) const {
    C sum = c_.empty() ? C() : C(c_.begin()->second * cplx(0.0));
    for (const auto& [e, v] : c_) sum += v * std::pow(x, e);
    return sum;
  }
  C evaluate(cplx u, cplx gamma) const {
    C sum = c_.empty() ? C() : C(c_.begin()->second * cplx(0.0));
    for (const auto& [e, v] : c_) sum += v * std::exp(gamma * cplx(e) * u);
    return sum;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& [e, v] : c_) s += std::pow(detail::coef_norm(v), 2);
    return std::sqrt(s);
  }

  // Exponents in [-L, L] with the parity of L.
  bool parity_ok(int L) const {
    for (const auto& [e, v] : c_)
      if (e < -L || e > L || ((e - L) % 2 != 0)) return false;
    return true;
  }

  template <class F>
  auto map(F&& f) const {
    using R = std::decay_t<decltype(f(std::declval<const C&>()))>;
    Laurent<R> r;
    for (const auto& [e, v] : c_) r.add(e, f(v));
    return r;
  }

 private:
  std::map<int, C> c_;
};

using QOperator = Laurent<Mat>;
using Scalar = Laurent<cplx>;

template <class A, class B>
struct ProductType {
  using type = Mat;
};
template <>
struct ProductType<cplx, cplx> {
  using type = cplx;
};

template <class A, class B>
auto operator*(const Laurent<A>& a, const Laurent<B>& b) {
  using R = typename ProductType<A, B>::type;
  Laurent<R> r;
  for (const auto& [ea, va] : a.coeffs())
    for (const auto& [eb, vb] : b.coeffs()) r.add(ea + eb, R(va * vb));
  return r;
}

inline QOperator identity_op(int dim) { return QOperator(0, Mat::Identity(dim, dim)); }

inline QOperator times_identity(const Scalar& s, int dim) {
  return s.map([dim](const cplx& c) { return Mat(c * Mat::Identity(dim, dim)); });
}

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

// Product of binomial factors lead * prod_i (alpha_i x - alpha_i^{-1} x^{-1}).
// Keeping the factored form makes shifts and exact division cheap and stable.
struct BinomialProduct {
  cplx lead = 1.0;
  std::vector<cplx> alphas;

  Scalar expand() const {
    Scalar r(0, lead);
    for (cplx a : alphas) r = r * (Scalar(1, a) + Scalar(-1, -1.0 / a));
    return r;
  }
  // u -> u + delta
  BinomialProduct shifted(cplx delta, cplx gamma) const {
    BinomialProduct r = *this;
    for (cplx& a : r.alphas) a *= std::exp(gamma * delta);
    return r;
  }
  BinomialProduct& operator*=(const BinomialProduct& o) {
    lead *= o.lead;
    alphas.insert(alphas.end(), o.alphas.begin(), o.alphas.end());
    return *this;
  }
  cplx evaluate(cplx u, cplx gamma) const {
    const cplx x = std::exp(gamma * u);
    cplx v = lead;
    for (cplx a : alphas) v *= a * x - 1.0 / (a * x);
    return v;
  }
};

namespace detail {

// p = (alpha x - 1/(alpha x)) * q, solved for q. Sweeps from the end where the
// recurrence contracts; the remainder is not inspected here.
template <class C>
Laurent<C> divide_binomial(const Laurent<C>& p, cplx alpha) {
  Laurent<C> q;
  if (p.is_zero()) return q;
  const int lo = p.min_exp(), hi = p.max_exp();
  if (hi - lo < 2) return q;
  auto coef = [&](int e) -> C {
    return p.has(e) ? p.at(e) : C(p.coeffs().begin()->second * cplx(0.0));
  };
  std::map<int, C> out;
  if (std::abs(alpha) >= 1.0) {
    // p_e = alpha q_{e-1} - alpha^{-1} q_{e+1}, from the top.
    for (int e = hi; e >= lo + 2; e -= 1) {
      C v = coef(e);
      if (auto it = out.find(e + 1); it != out.end()) v += it->second * (1.0 / alpha);
      out[e - 1] = v * (1.0 / alpha);
    }
  } else {
    // q_{e+1} = alpha (alpha q_{e-1} - p_e), from the bottom.
    for (int e = lo; e <= hi - 2; e += 1) {
      C v = coef(e) * cplx(-1.0);
      if (auto it = out.find(e - 1); it != out.end()) v += it->second * alpha;
      out[e + 1] = v * alpha;
    }
  }
  for (auto& [e, v] : out) q.add(e, v);
  return q;
}

}  // namespace detail

// Exact quotient p / d. Throws ConsistencyError when the remainder relative
// norm exceeds tol; the achieved residual is written to *residual.
template <class C>
Laurent<C> divide_exact(const Laurent<C>& p, const BinomialProduct& d, double tol,
                        double* residual = nullptr) {
  if (d.lead == cplx(0.0)) throw DegenerateError("division by the zero polynomial");
  Laurent<C> q = p * (1.0 / d.lead);
  for (cplx a : d.alphas) q = detail::divide_binomial(q, a);
  const Laurent<C> back = d.expand() * q;
  const double res = rel_residual((back - p).norm(), back.norm(), p.norm());
  if (residual) *residual = res;
  if (!p.is_zero() && res > tol)
    throw ConsistencyError("Laurent division leaves a remainder (relative " +
                           std::to_string(res) + ")");
  return q;
}

}  // namespace mtop::qvertex

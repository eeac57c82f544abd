#pragma once

#include <functional>
#include <map>
#include <vector>

#include "mtop/qvertex/eigen.hpp"
#include "mtop/symfun/zseries.hpp"

namespace mtop::qvertex {

using symfun::Monomial;
using symfun::ZKey;
using symfun::ZSeries;

struct HirotaReport {
  double three_shift = 0.0;
  double lattice_shift = 0.0;
  int keys = 0;  // coefficients inspected (both equations)
  double max() const { return std::max(three_shift, lattice_shift); }
};

namespace detail {

// One term of a bilinear identity: z-prefactor (as a ZSeries in the shift
// variables), Miwa shifts of the first and second factor.
struct BilinearTerm {
  std::vector<std::pair<ZKey, double>> prefactor;
  std::vector<std::size_t> first, second;
};

inline ZKey zk(std::size_t nvars, std::size_t var, int power) {
  ZKey k(nvars, 0);
  k[var] = power;
  return k;
}

// (z_2 - z_3) T(t+[z_1]) T(t+[z_2]+[z_3]) + cyclic
inline std::vector<BilinearTerm> three_shift_terms() {
  return {{{{zk(3, 1, 1), 1.0}, {zk(3, 2, 1), -1.0}}, {0}, {1, 2}},
          {{{zk(3, 2, 1), 1.0}, {zk(3, 0, 1), -1.0}}, {1}, {0, 2}},
          {{{zk(3, 0, 1), 1.0}, {zk(3, 1, 1), -1.0}}, {2}, {0, 1}}};
}

// z_2 T(u+1,t+[z_1]) T(u,t+[z_2]) - z_1 T(u+1,t+[z_2]) T(u,t+[z_1])
//   + (z_1 - z_2) T(u+1,t+[z_1]+[z_2]) T(u,t)
inline std::vector<BilinearTerm> lattice_shift_terms() {
  return {{{{zk(2, 1, 1), 1.0}}, {0}, {1}},
          {{{zk(2, 0, 1), -1.0}}, {1}, {0}},
          {{{zk(2, 0, 1), 1.0}, {zk(2, 1, 1), -1.0}}, {0, 1}, {}}};
}

using CoeffKey = std::pair<ZKey, Monomial>;

inline ZSeries abs_series(const ZSeries& s) {
  ZSeries r(s.nvars(), s.cap());
  for (const auto& [k, p] : s.terms()) {
    TimePoly q(p.cap());
    for (const auto& [m, v] : p.terms()) q.add_term(m, std::abs(v));
    r.add(k, q);
  }
  return r;
}

// C_{lambda mu}: the bilinear form's coefficient series for the product
// T^lambda T^mu, truncated at joint weight D - 1, together with the same sum
// taken over absolute values (the scale against which cancellation is judged).
struct BilinearCoefficient {
  ZSeries value;
  ZSeries magnitude;
};

inline std::map<std::pair<Partition, Partition>, BilinearCoefficient> bilinear_coefficients(
    const std::vector<Partition>& parts, int D, std::size_t nvars,
    const std::vector<BilinearTerm>& terms) {
  std::map<std::pair<Partition, std::vector<std::size_t>>, std::pair<ZSeries, ZSeries>> shifted;
  auto S = [&](const Partition& p, const std::vector<std::size_t>& vars) -> const std::pair<ZSeries, ZSeries>& {
    auto key = std::make_pair(p, vars);
    auto it = shifted.find(key);
    if (it == shifted.end()) {
      ZSeries z = symfun::schur_shifted(symfun::schur(p, D), nvars, vars);
      ZSeries a = abs_series(z);
      it = shifted.emplace(key, std::make_pair(std::move(z), std::move(a))).first;
    }
    return it->second;
  };
  std::map<std::pair<Partition, Partition>, BilinearCoefficient> out;
  for (const Partition& a : parts)
    for (const Partition& b : parts) {
      if (a.size() + b.size() > D) continue;
      BilinearCoefficient c{ZSeries(nvars, D - 1), ZSeries(nvars, D - 1)};
      for (const BilinearTerm& t : terms) {
        const auto& sa = S(a, t.first);
        const auto& sb = S(b, t.second);
        const ZSeries prod = sa.first * sb.first;
        const ZSeries mag = sa.second * sb.second;
        for (const auto& [k, s] : t.prefactor) {
          std::size_t var = 0;
          while (k[var] == 0) ++var;
          c.value += prod.times_z(var, k[var]) * cplx(s);
          c.magnitude += mag.times_z(var, k[var]) * cplx(std::abs(s));
        }
      }
      if (!c.magnitude.is_zero()) out.emplace(std::make_pair(a, b), std::move(c));
    }
  return out;
}

// max over coefficients of |sum C X| / (sum |C| |X|)
template <class V>
double bilinear_residual(const std::map<std::pair<Partition, Partition>, BilinearCoefficient>& coeffs,
                         const std::function<V(const Partition&, const Partition&)>& product,
                         int* keys) {
  std::map<CoeffKey, V> sum;
  std::map<CoeffKey, double> scale;
  for (const auto& [pq, c] : coeffs) {
    const V x = product(pq.first, pq.second);
    const double xn = x.norm();
    for (const auto& [zkey, poly] : c.value.terms())
      for (const auto& [mono, v] : poly.terms()) sum[{zkey, mono}] += x * v;
    for (const auto& [zkey, poly] : c.magnitude.terms())
      for (const auto& [mono, v] : poly.terms()) scale[{zkey, mono}] += std::abs(v) * xn;
  }
  double worst = 0.0;
  for (const auto& [key, v] : sum) worst = std::max(worst, v.norm() / (scale[key] + 1e-300));
  if (keys) *keys += static_cast<int>(scale.size());
  return worst;
}

}  // namespace detail

// Truncated bilinear identities for T^lambda supplied as Laurent objects
// (operators or eigenvalues); value(lambda) must return T^lambda(u).
template <class V>
HirotaReport check_hirota_truncated(const std::vector<Partition>& parts, int D, cplx gamma,
                                    const std::function<V(const Partition&)>& value) {
  if (D < 2) throw ConfigError("truncated Hirota check needs D >= 2");
  std::map<Partition, V> base, up;
  for (const Partition& p : parts) {
    base.emplace(p, value(p));
    up.emplace(p, base.at(p).shift(1.0, gamma));
  }
  HirotaReport r;
  const auto c2 = detail::bilinear_coefficients(parts, D, 3, detail::three_shift_terms());
  r.three_shift = detail::bilinear_residual<V>(
      c2, [&](const Partition& a, const Partition& b) { return V(base.at(a) * base.at(b)); }, &r.keys);
  const auto c3 = detail::bilinear_coefficients(parts, D, 2, detail::lattice_shift_terms());
  r.lattice_shift = detail::bilinear_residual<V>(
      c3, [&](const Partition& a, const Partition& b) { return V(up.at(a) * base.at(b)); }, &r.keys);
  return r;
}

inline HirotaReport check_hirota_quantum(const MasterT& m) {
  return check_hirota_truncated<QOperator>(m.partitions(), m.D, m.cfg.gamma,
                                           [&](const Partition& p) { return m.get(p); });
}

inline HirotaReport check_hirota_quantum(const EigenTau& et) {
  std::vector<Partition> parts;
  for (const auto& [p, th] : et.theta) parts.push_back(p);
  return check_hirota_truncated<Scalar>(parts, et.D, et.gamma,
                                        [&](const Partition& p) { return et.get(p); });
}

}  // namespace mtop::qvertex

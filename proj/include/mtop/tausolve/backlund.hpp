#pragma once

#include <algorithm>
#include <vector>

#include "mtop/tausolve/taufunction.hpp"

namespace mtop::tausolve {

// One stage of the undressing chain. `removed` holds original string indices
// (0-based) in removal order.
struct BacklundStage {
  std::vector<int> removed;
  TauFunction residue_form;  // exact residues, row by row
  TauFunction contour_form;  // the same residues by numerical contour integration
  TauFunction minor_form;
  int expected_degree = 0;

  std::vector<int> remaining(int N) const {
    std::vector<int> r;
    for (int j = 0; j < N; ++j)
      if (std::find(removed.begin(), removed.end(), j) == removed.end()) r.push_back(j);
    return r;
  }
};

inline std::string stage_label(const std::vector<int>& removed) {
  std::string s = "tau[";
  for (std::size_t k = 0; k < removed.size(); ++k) s += (k ? "," : "") + std::to_string(removed[k] + 1);
  return s + "]";
}

// (prod_{i in I} b_{i,-M_i/2}) times the Casorati tau of the remaining strings.
inline TauFunction minor_form(const CasoratiModel& m, const std::vector<int>& removed) {
  cplx pref = 1.0;
  for (int i : removed) pref *= m.strings.at(static_cast<std::size_t>(i)).lower_edge();
  const CasoratiModel rest = m.without(removed);
  TauFunction f = casorati_tau(rest, stage_label(removed) + " (minor)");
  auto e = f.eval;
  auto ep = f.eval_plus;
  f.eval = [e, pref](cplx u, const TimeVector& t, const Shifts& s) { return pref * e(u, t, s); };
  f.eval_plus = [ep, pref](cplx u, const TimeVector& t, const Shifts& s, const ZBatch& zs) {
    ZBatch v = ep(u, t, s, zs);
    for (cplx& x : v) x *= pref;
    return v;
  };
  return f;
}

inline BacklundStage backlund_start(const CasoratiModel& m) {
  m.validate();
  return {{}, casorati_tau(m), casorati_tau(m), minor_form(m, {}), m.L()};
}

namespace detail {

// One removal: string i with lower end z0 and the sign/p prefactor below.
struct Removal {
  int i;
  cplx z0;
  cplx pref;
  double M;
};

// e^{gamma M (u+1) - xi(t + shifts, z0)} times the constant prefactor.
inline cplx removal_factor(const Removal& r, cplx gamma, cplx u, const TimeVector& t, const Shifts& sh) {
  cplx f = r.pref * std::exp(gamma * r.M * (u + 1.0) - xi_eval(t, r.z0));
  for (const MiwaShift& w : sh) f *= std::pow(1.0 - r.z0 / w.z, w.sign);
  return f;
}

// Coefficient of 1/(z - z0) in B_i(U, t + shifts + [z^{-1}]): only the k = 0
// term has its pole there, and z/(z - z0) leaves z0.
inline cplx residue_entry(const CasoratiModel& m, const Removal& r, cplx U, const TimeVector& t, const Shifts& sh) {
  const StringData& s = m.strings[static_cast<std::size_t>(r.i)];
  return r.z0 * s.b.front() * std::exp(2.0 * m.gamma * s.m_value(0) * U + U * std::log(s.p)) *
         exp_xi(t, sh, r.z0);
}

// Unrolls E_k(u, t, S) = F_k(u, t, S) res_{z = z_k} E_{k-1}(u + 1, t, S + [z^{-1}]).
// Every shift z_j ends up in all rows; the pole at z_k sits only in row i_k,
// and the determinant is linear in that row, so its residue replaces the row
// by its pole coefficients.
inline cplx unrolled_residue(const CasoratiModel& m, const std::vector<Removal>& rs, cplx u, const TimeVector& t,
                             const Shifts& sh) {
  const int k = static_cast<int>(rs.size());
  const int N = m.N();
  const cplx U = u + double(k);
  Shifts all = sh;
  cplx G = gauge(m, U);
  // F_j at u + (k - j) with the shifts of the later removals (1-based j)
  for (int j = k; j >= 1; --j) {
    G *= removal_factor(rs[static_cast<std::size_t>(j - 1)], m.gamma, u + double(k - j), t, all);
    all.push_back({1, rs[static_cast<std::size_t>(j - 1)].z0});
  }
  Mat a(N, N);
  for (int row = 0; row < N; ++row) {
    const auto it = std::find_if(rs.begin(), rs.end(), [row](const Removal& r) { return r.i == row; });
    if (it == rs.end()) {
      for (int c = 1; c <= N; ++c) a(row, c - 1) = bfun(m, row, U - double(c), t, all);
      continue;
    }
    Shifts others;
    for (const MiwaShift& w : all)
      if (w.z != it->z0) others.push_back(w);
    for (int c = 1; c <= N; ++c) a(row, c - 1) = residue_entry(m, *it, U - double(c), t, others);
  }
  return G * det(a);
}

inline TauFunction plus_from_eval(TauFunction f) {
  auto ev = f.eval;
  f.eval_plus = [ev](cplx u, const TimeVector& t, const Shifts& sh, const ZBatch& zs) {
    ZBatch v;
    Shifts s2 = with_shift(sh, 1, 0.0);
    for (cplx z : zs) {
      s2.back().z = z;
      v.push_back(ev(u, t, s2));
    }
    return v;
  };
  return f;
}

}  // namespace detail

// Residue extraction at the lower end p_i e^{-gamma M_i} of string i:
//   (-1)^pos (prod_{j remaining after} p_j) e^{gamma M_i (u+1) - xi(t, z0)}
//     res_{z = z0} tau_{u+1}(t + [z^{-1}])
// with pos the 0-based position of i among the strings still present.
// residue_form takes the residues exactly; contour_form integrates them
// numerically, which loses digits when the residue is exponentially smaller
// than the regular part around it.
inline BacklundStage backlund_remove(const CasoratiModel& m, const BacklundStage& parent, int i) {
  const int N = m.N();
  if (i < 0 || i >= N) throw ConfigError("string index out of range");
  if (std::find(parent.removed.begin(), parent.removed.end(), i) != parent.removed.end())
    throw ConfigError("string " + std::to_string(i + 1) + " already removed");
  const StringData& s = m.strings[static_cast<std::size_t>(i)];

  BacklundStage out;
  out.removed = parent.removed;
  out.removed.push_back(i);
  out.expected_degree = parent.expected_degree - s.M;
  out.minor_form = minor_form(m, out.removed);

  // the removals so far, recovered from the parent's chain
  std::vector<detail::Removal> rs;
  {
    std::vector<int> alive(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) alive[static_cast<std::size_t>(j)] = j;
    for (int r : out.removed) {
      const int at = static_cast<int>(std::find(alive.begin(), alive.end(), r) - alive.begin());
      const StringData& sr = m.strings[static_cast<std::size_t>(r)];
      cplx pr = at % 2 ? -1.0 : 1.0;
      for (int j : alive)
        if (j != r) pr *= m.strings[static_cast<std::size_t>(j)].p;
      rs.push_back({r, sr.point(m.gamma, 0), pr, double(sr.M)});
      alive.erase(alive.begin() + at);
    }
  }

  TauFunction f;
  f.label = stage_label(out.removed) + " (residue)";
  f.gamma = m.gamma;
  f.eval = [m, rs](cplx u, const TimeVector& t, const Shifts& sh) { return detail::unrolled_residue(m, rs, u, t, sh); };
  f.poles = m.points();
  out.residue_form = detail::plus_from_eval(std::move(f));

  TauFunction c;
  c.label = stage_label(out.removed) + " (contour)";
  c.gamma = m.gamma;
  const TauFunction par = parent.contour_form;
  const detail::Removal last = rs.back();
  const cplx gamma = m.gamma;
  c.eval = [par, last, gamma](cplx u, const TimeVector& t, const Shifts& sh) {
    const cplx r = residue([&](const ZBatch& zs) { return par.eval_plus(u + 1.0, t, sh, zs); }, last.z0, par.poles);
    return detail::removal_factor(last, gamma, u, t, sh) * r;
  };
  // keep every original string point: removed ones are only removable
  // singularities, but they still limit the contour radius numerically
  c.poles = par.poles;
  out.contour_form = detail::plus_from_eval(std::move(c));
  return out;
}

// Stage 0 (the original tau) followed by one stage per removed string.
inline std::vector<BacklundStage> backlund_chain(const CasoratiModel& m, const std::vector<int>& order) {
  std::vector<int> seen;
  for (int i : order) {
    if (std::find(seen.begin(), seen.end(), i) != seen.end()) throw ConfigError("chain indices must be distinct");
    seen.push_back(i);
  }
  std::vector<BacklundStage> chain{backlund_start(m)};
  for (int i : order) chain.push_back(backlund_remove(m, chain.back(), i));
  return chain;
}

}  // namespace mtop::tausolve

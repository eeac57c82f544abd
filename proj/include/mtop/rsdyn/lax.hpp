#pragma once

#include <vector>

#include "mtop/core.hpp"

namespace mtop::rsdyn {

inline constexpr double kSingular = 1e-12;

inline cplx checked_coth(cplx z, const char* what) {
  const cplx s = std::sinh(z);
  if (std::abs(s) < kSingular) throw PoleError(std::string(what) + ": singular argument");
  return std::cosh(z) / s;
}

// Phi(u, zeta) = coth(gamma u) + coth(gamma zeta)
inline cplx phi(cplx gamma, cplx u, cplx zeta) {
  return checked_coth(gamma * u, "Phi") + checked_coth(gamma * zeta, "Phi");
}

// sinh(gamma(u + zeta)) / (sinh(gamma u) sinh(gamma zeta))
inline cplx phi_product_form(cplx gamma, cplx u, cplx zeta) {
  const cplx a = std::sinh(gamma * u), b = std::sinh(gamma * zeta);
  if (std::abs(a) < kSingular || std::abs(b) < kSingular) throw PoleError("Phi: singular argument");
  return std::sinh(gamma * (u + zeta)) / (a * b);
}

// V(u) = coth(gamma u) - coth(gamma (u + 1))
inline cplx vpot(cplx gamma, cplx u) {
  return checked_coth(gamma * u, "V") - checked_coth(gamma * (u + 1.0), "V");
}

struct RSState {
  cplx gamma;
  std::vector<cplx> u;
  std::vector<cplx> udot;

  int size() const { return static_cast<int>(u.size()); }

  // smallest |sinh(gamma(u_jk + s))|, s in {-1, 0, 1}, over pairs
  double collision_margin() const {
    double m = 1e300;
    for (int j = 0; j < size(); ++j)
      for (int k = 0; k < size(); ++k) {
        if (j == k) continue;
        const cplx d = u[static_cast<std::size_t>(j)] - u[static_cast<std::size_t>(k)];
        for (double s : {-1.0, 0.0, 1.0}) m = std::min(m, std::abs(std::sinh(gamma * (d + s))));
      }
    return m;
  }

  void validate() const {
    if (u.size() != udot.size()) throw ConfigError("positions and velocities differ in length");
    if (u.empty()) throw ConfigError("RS state needs at least one particle");
    if (std::abs(std::sinh(gamma)) < kSingular) throw ConfigError("gamma must be nonzero");
    if (collision_margin() < 1e-10) throw PoleError("RS particles collide");
  }
};

inline cplx ujk(const RSState& s, int j, int k) {
  return s.u[static_cast<std::size_t>(j)] - s.u[static_cast<std::size_t>(k)];
}

// L_jk = gamma udot_j Phi(u_jk - 1, zeta)
inline Mat lax(const RSState& s, cplx zeta) {
  s.validate();
  const int n = s.size();
  Mat L(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) L(j, k) = s.gamma * s.udot[static_cast<std::size_t>(j)] * phi(s.gamma, ujk(s, j, k) - 1.0, zeta);
  return L;
}

// M_jj = gamma [(coth(gamma zeta) - coth gamma) udot_j + sum_{l != j} udot_l V(u_jl)]
// M_jk = gamma udot_j Phi(u_jk, zeta), j != k
inline Mat mmat(const RSState& s, cplx zeta) {
  s.validate();
  const int n = s.size();
  const cplx g = s.gamma;
  const cplx c = checked_coth(g * zeta, "M") - checked_coth(g, "M");
  Mat M(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (j == k) {
        cplx d = c * s.udot[static_cast<std::size_t>(j)];
        for (int l = 0; l < n; ++l)
          if (l != j) d += s.udot[static_cast<std::size_t>(l)] * vpot(g, ujk(s, j, l));
        M(j, j) = g * d;
      } else {
        M(j, k) = g * s.udot[static_cast<std::size_t>(j)] * phi(g, ujk(s, j, k), zeta);
      }
    }
  return M;
}

// udd_j = gamma udot_j sum_k udot_k (V(u_jk) - V(u_kj))
inline std::vector<cplx> accel_potential_form(const RSState& s) {
  const int n = s.size();
  std::vector<cplx> a(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    cplx sum = 0.0;
    for (int k = 0; k < n; ++k)
      if (k != j) sum += s.udot[static_cast<std::size_t>(k)] * (vpot(s.gamma, ujk(s, j, k)) - vpot(s.gamma, ujk(s, k, j)));
    a[static_cast<std::size_t>(j)] = s.gamma * s.udot[static_cast<std::size_t>(j)] * sum;
  }
  return a;
}

// udd_j = -2 gamma sinh^2 gamma sum_k udot_j udot_k cosh(gamma u_jk)
//           / (sinh(gamma(u_jk - 1)) sinh(gamma u_jk) sinh(gamma(u_jk + 1)))
inline std::vector<cplx> accel_sinh_form(const RSState& s) {
  const int n = s.size();
  const cplx g = s.gamma;
  const cplx sg = std::sinh(g);
  std::vector<cplx> a(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    cplx sum = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const cplx d = ujk(s, j, k);
      sum += s.udot[static_cast<std::size_t>(j)] * s.udot[static_cast<std::size_t>(k)] * std::cosh(g * d) /
             (std::sinh(g * (d - 1.0)) * std::sinh(g * d) * std::sinh(g * (d + 1.0)));
    }
    a[static_cast<std::size_t>(j)] = -2.0 * g * sg * sg * sum;
  }
  return a;
}

inline double accel_forms_residual(const RSState& s) {
  const auto a = accel_potential_form(s), b = accel_sinh_form(s);
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    diff += std::norm(a[j] - b[j]);
    na += std::norm(a[j]);
    nb += std::norm(b[j]);
  }
  return rel_residual(std::sqrt(diff), std::sqrt(na), std::sqrt(nb));
}

inline std::vector<cplx> accel(const RSState& s) {
  s.validate();
  return accel_potential_form(s);
}

inline cplx hamiltonian_h1(const RSState& s) {
  cplx h = 0.0;
  for (cplx v : s.udot) h += v;
  return h;
}

// Coefficients c_0..c_n of det(L - z) = sum_k c_k z^k (Faddeev-LeVerrier).
inline std::vector<cplx> charpoly(const Mat& A) {
  const auto n = A.rows();
  std::vector<cplx> c(static_cast<std::size_t>(n + 1), 0.0);
  // det(z - A) = z^n + a_1 z^{n-1} + ... + a_n
  std::vector<cplx> a(static_cast<std::size_t>(n + 1), 0.0);
  a[0] = 1.0;
  Mat Mk = Mat::Zero(n, n);
  const Mat I = Mat::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    Mk = A * Mk + a[static_cast<std::size_t>(k - 1)] * I;
    a[static_cast<std::size_t>(k)] = -(A * Mk).trace() / double(k);
  }
  // det(A - z) = (-1)^n det(z - A)
  const double sgn = n % 2 ? -1.0 : 1.0;
  for (Eigen::Index k = 0; k <= n; ++k) c[static_cast<std::size_t>(n - k)] = sgn * a[static_cast<std::size_t>(k)];
  return c;
}

inline std::vector<cplx> spectral_invariants(const RSState& s, cplx zeta) { return charpoly(lax(s, zeta)); }

}  // namespace mtop::rsdyn

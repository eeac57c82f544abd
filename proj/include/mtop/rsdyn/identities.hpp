#pragma once

#include "mtop/rsdyn/lax.hpp"

namespace mtop::rsdyn {

struct PhiIdentityReport {
  double forms = 0.0;        // coth+coth vs sinh ratio
  double symmetry = 0.0;     // Phi(u, zeta) = Phi(zeta, u)
  double addition = 0.0;     // Phi(u-1)Phi(v) - Phi(u)Phi(v-1) = Phi(u+v-1)(V(-u) - V(-v))
  double derivative = 0.0;   // d/du Phi(u-1) = gamma(coth(gamma zeta) - coth gamma - V(-u))Phi(u-1) - gamma Phi(-1)Phi(u)
  double max() const { return std::max({forms, symmetry, addition, derivative}); }
};

inline PhiIdentityReport check_phi_identities(cplx gamma, int trials, std::uint64_t seed) {
  Rng rng(seed);
  PhiIdentityReport r;
  const cplx g = gamma;
  for (int n = 0; n < trials; ++n) {
    const cplx u = rng.box(1.5, 1.5), v = rng.box(1.5, 1.5), z = rng.box(1.5, 1.5);
    r.forms = std::max(r.forms, rel_residual(phi(g, u, z), phi_product_form(g, u, z)));
    r.symmetry = std::max(r.symmetry, rel_residual(phi(g, u, z), phi(g, z, u)));
    const cplx t1 = phi(g, u - 1.0, z) * phi(g, v, z), t2 = phi(g, u, z) * phi(g, v - 1.0, z);
    const cplx rhs = phi(g, u + v - 1.0, z) * (vpot(g, -u) - vpot(g, -v));
    r.addition = std::max(r.addition, std::abs(t1 - t2 - rhs) / (std::abs(t1) + std::abs(t2) + std::abs(rhs)));
    const cplx sh = std::sinh(g * (u - 1.0));
    const cplx lhs = -g / (sh * sh);
    const cplx a = g * (coth(g * z) - coth(g) - vpot(g, -u)) * phi(g, u - 1.0, z);
    const cplx b = g * phi(g, -1.0, z) * phi(g, u, z);
    r.derivative = std::max(r.derivative, std::abs(lhs - (a - b)) / (std::abs(lhs) + std::abs(a) + std::abs(b)));
  }
  return r;
}

}  // namespace mtop::rsdyn

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mtop/core.hpp"

namespace mtop::tausolve {

// One string: base point p, length M, and b_m for m = -M/2, ..., M/2
// (stored in that order, so b[0] is the lower edge and b[M] the upper one).
struct StringData {
  cplx p;
  int M = 0;
  std::vector<cplx> b;

  double m_value(int k) const { return -0.5 * M + k; }
  cplx point(cplx gamma, int k) const { return p * std::exp(2.0 * gamma * m_value(k)); }
  cplx lower_edge() const { return b.front(); }
  cplx upper_edge() const { return b.back(); }
};

struct CasoratiModel {
  cplx gamma{0.3, 0.0};
  std::vector<StringData> strings;

  int N() const { return static_cast<int>(strings.size()); }
  int L() const {
    int l = 0;
    for (const auto& s : strings) l += s.M;
    return l;
  }

  std::vector<cplx> points() const {
    std::vector<cplx> out;
    for (const auto& s : strings)
      for (int k = 0; k <= s.M; ++k) out.push_back(s.point(gamma, k));
    return out;
  }

  void validate() const {
    if (strings.empty()) throw ConfigError("a Casorati model needs at least one string");
    if (std::abs(gamma) < 1e-8) throw ConfigError("gamma must be nonzero");
    for (std::size_t i = 0; i < strings.size(); ++i) {
      const StringData& s = strings[i];
      const std::string tag = "string " + std::to_string(i + 1);
      if (s.M < 0) throw ConfigError(tag + ": M must be non-negative");
      if (static_cast<int>(s.b.size()) != s.M + 1)
        throw ConfigError(tag + ": expected " + std::to_string(s.M + 1) + " coefficients b_m");
      if (std::abs(s.p) < 1e-12) throw ConfigError(tag + ": p must be nonzero");
      if (std::abs(s.lower_edge()) < 1e-14 || std::abs(s.upper_edge()) < 1e-14)
        throw ConfigError(tag + ": edge coefficients must be nonzero");
    }
    const auto pts = points();
    double scale = 0.0;
    for (cplx z : pts) scale = std::max(scale, std::abs(z));
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        if (std::abs(pts[i] - pts[j]) < 1e-9 * scale)
          throw ConfigError("string points are not pairwise distinct");
  }

  // Same model with some strings removed (indices into strings).
  CasoratiModel without(const std::vector<int>& removed) const {
    CasoratiModel r;
    r.gamma = gamma;
    for (int i = 0; i < N(); ++i)
      if (std::find(removed.begin(), removed.end(), i) == removed.end())
        r.strings.push_back(strings[static_cast<std::size_t>(i)]);
    return r;
  }
};

}  // namespace mtop::tausolve

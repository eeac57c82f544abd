#pragma once

#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "mtop/core.hpp"

namespace mtop::qvertex {

inline constexpr int kMaxQuantumDim = 4096;
inline constexpr int kMaxWeight = 6;

inline int ipow(int base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
    if (r > (1LL << 40)) return -1;
  }
  return static_cast<int>(r);
}

// Chain data: anisotropy, rank, length, inhomogeneities, diagonal twist.
struct ModelConfig {
  cplx gamma{0.3, 0.0};
  int N = 2;
  int L = 1;
  std::vector<cplx> inhom;
  std::vector<cplx> twist;

  cplx q() const { return std::exp(gamma); }
  int dim() const { return ipow(N, L); }
  cplx det_twist() const {
    cplx d = 1.0;
    for (cplx p : twist) d *= p;
    return d;
  }
  cplx sum_inhom() const { return std::accumulate(inhom.begin(), inhom.end(), cplx(0.0)); }

  void validate() const {
    if (N < 2) throw ConfigError("N must be >= 2");
    if (L < 1) throw ConfigError("L must be >= 1");
    const int d = dim();
    if (d < 0 || d > kMaxQuantumDim)
      throw ConfigError("quantum space dimension N^L exceeds the cap of " +
                        std::to_string(kMaxQuantumDim));
    if (static_cast<int>(inhom.size()) != L)
      throw ConfigError("expected " + std::to_string(L) + " inhomogeneities");
    if (static_cast<int>(twist.size()) != N)
      throw ConfigError("expected " + std::to_string(N) + " twist eigenvalues");
    if (std::abs(gamma) < 1e-8) throw ConfigError("gamma must be nonzero");
    const cplx qq = q();
    for (int n = 1; n <= 64; ++n)
      if (std::abs(std::pow(qq, n) - 1.0) < 1e-9)
        throw ConfigError("q is a root of unity (order " + std::to_string(n) + ")");
    for (cplx p : twist)
      if (std::abs(p) < 1e-12) throw ConfigError("twist eigenvalues must be nonzero");
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        const cplx ratio = twist[static_cast<std::size_t>(i)] / twist[static_cast<std::size_t>(j)];
        for (int n = -2 * L; n <= 2 * L; ++n) {
          const cplx s = std::exp(2.0 * gamma * cplx(n));
          if (std::abs(ratio - s) < 1e-8 * (std::abs(ratio) + std::abs(s)))
            throw ConfigError("twist not in general position: p_" + std::to_string(i + 1) +
                              "/p_" + std::to_string(j + 1) + " = e^{2 gamma n}, n=" +
                              std::to_string(n));
        }
      }
    }
  }
};

// Joint eigenvalues M_a of the magnon-number operators; sum M_a = L.
struct SectorLabel {
  std::vector<int> M;

  int total() const { return std::accumulate(M.begin(), M.end(), 0); }
  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < M.size(); ++i) s += (i ? "," : "") + std::to_string(M[i]);
    return s + ")";
  }
  bool operator==(const SectorLabel&) const = default;
  auto operator<=>(const SectorLabel&) const = default;

  void validate(const ModelConfig& cfg) const {
    if (static_cast<int>(M.size()) != cfg.N)
      throw ConfigError("sector label needs N = " + std::to_string(cfg.N) + " entries");
    for (int m : M)
      if (m < 0) throw ConfigError("sector occupation numbers must be non-negative");
    if (total() != cfg.L)
      throw ConfigError("sector " + str() + " violates sum M_a = L = " + std::to_string(cfg.L));
  }
};

inline std::vector<SectorLabel> all_sectors(int N, int L) {
  std::vector<SectorLabel> out;
  std::vector<int> cur(static_cast<std::size_t>(N), 0);
  std::function<void(int, int)> rec = [&](int a, int left) {
    if (a == N - 1) {
      cur[static_cast<std::size_t>(a)] = left;
      out.push_back({cur});
      return;
    }
    for (int m = left; m >= 0; --m) {
      cur[static_cast<std::size_t>(a)] = m;
      rec(a + 1, left - m);
    }
  };
  rec(0, L);
  return out;
}

// Basis state index -> single-site labels (site 1 most significant).
inline std::vector<int> basis_labels(int index, int N, int L) {
  std::vector<int> s(static_cast<std::size_t>(L));
  for (int l = L - 1; l >= 0; --l) {
    s[static_cast<std::size_t>(l)] = index % N;
    index /= N;
  }
  return s;
}

}  // namespace mtop::qvertex

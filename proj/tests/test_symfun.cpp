#include <gtest/gtest.h>

#include "mtop/symfun.hpp"

using namespace mtop;
using namespace mtop::symfun;

namespace {

// k h_k = sum_{j=1..k} j t_j h_{k-j}: independent recursion for the complete
// polynomials, e_k likewise with alternating signs.
TimePoly newton_h(int k, int cap, bool alternating) {
  std::vector<TimePoly> h{TimePoly::constant(1.0, cap)};
  for (int n = 1; n <= k; ++n) {
    TimePoly acc(cap);
    for (int j = 1; j <= n; ++j) {
      const double sign = (alternating && j % 2 == 0) ? -1.0 : 1.0;
      acc += TimePoly::variable(j, cap) * h[static_cast<std::size_t>(n - j)] * cplx(sign * j);
    }
    h.push_back(acc * cplx(1.0 / n));
  }
  return h.back();
}

double diff(const TimePoly& a, const TimePoly& b) {
  return rel_residual((a - b).norm(), a.norm(), b.norm());
}

}  // namespace

TEST(Partition, ConjugateAndSize) {
  EXPECT_EQ(conjugate(Partition{}), Partition{});
  EXPECT_EQ(conjugate(Partition{2, 1}), (Partition{2, 1}));
  EXPECT_EQ(conjugate(Partition{3, 1}), (Partition{2, 1, 1}));
  for (int n = 0; n <= 7; ++n) {
    for (const Partition& p : partitions_of(n)) {
      EXPECT_EQ(conjugate(conjugate(p)), p);
      EXPECT_EQ(conjugate(p).size(), p.size());
      EXPECT_EQ(p.size(), n);
    }
  }
  EXPECT_EQ(partitions_of(5).size(), 7u);
  EXPECT_EQ(partitions_of(6, 2).size(), 4u);
  EXPECT_THROW(Partition({1, 2}), ConfigError);
  EXPECT_THROW(Partition({2, -1}), ConfigError);
  EXPECT_EQ((Partition{2, 1, 0, 0}).length(), 2);
}

TEST(TimePoly, TruncationAndDerivative) {
  const int cap = 4;
  TimePoly t1 = TimePoly::variable(1, cap), t3 = TimePoly::variable(3, cap);
  TimePoly p = t1 * t1 * t1 * t1 * t1;
  EXPECT_TRUE(p.is_zero());
  TimePoly q = t1 * t3 + t1 * t1;
  EXPECT_EQ(q.terms().size(), 2u);
  for (const auto& [m, c] : q.terms()) EXPECT_LE(weight(m), cap);
  TimePoly d = q.derivative(1);
  EXPECT_EQ(d.coefficient(mono_t(3)), cplx(1.0));
  EXPECT_EQ(d.coefficient(mono_t(1)), cplx(2.0));
  EXPECT_EQ(mono_key(mono_mul(mono_t(1, 2), mono_t(3))), "1^2 3^1");
  EXPECT_EQ(mono_key({}), "1");
}

TEST(TimePoly, ExpAndSqrtSeries) {
  const int cap = 5;
  TimePoly x = TimePoly::variable(1, cap) * cplx(0.3) + TimePoly::variable(2, cap) * cplx(-1.1, 0.2);
  TimePoly e = exp_series(x);
  TimePoly e2 = exp_series(x * cplx(2.0));
  EXPECT_LT(diff(e * e, e2), 1e-14);
  TimePoly s = sqrt_series(e2 * cplx(4.0, 1.0));
  EXPECT_LT(diff(s * s, e2 * cplx(4.0, 1.0)), 1e-14);
  EXPECT_THROW(exp_series(TimePoly::constant(1.0, 2)), ConfigError);
}

TEST(Symfun, HAndEPolynomials) {
  const int cap = 6;
  EXPECT_EQ(hpoly(0, cap), TimePoly::constant(1.0, cap));
  EXPECT_EQ(hpoly(1, cap), TimePoly::variable(1, cap));
  EXPECT_TRUE(hpoly(-1, cap).is_zero());
  TimePoly h3 = hpoly(3, cap);
  EXPECT_NEAR(std::abs(h3.coefficient(mono_t(1, 3)) - 1.0 / 6.0), 0.0, 1e-15);
  EXPECT_EQ(h3.coefficient(mono_mul(mono_t(1), mono_t(2))), cplx(1.0));
  EXPECT_EQ(h3.coefficient(mono_t(3)), cplx(1.0));
  EXPECT_EQ(h3.terms().size(), 3u);
  TimePoly e2 = epoly(2, cap);
  EXPECT_EQ(e2.coefficient(mono_t(1, 2)), cplx(0.5));
  EXPECT_EQ(e2.coefficient(mono_t(2)), cplx(-1.0));
  for (int k = 0; k <= cap; ++k) {
    EXPECT_LT(diff(hpoly(k, cap), newton_h(k, cap, false)), 1e-14) << k;
    EXPECT_LT(diff(epoly(k, cap), newton_h(k, cap, true)), 1e-14) << k;
  }
}

TEST(Symfun, SchurValues) {
  EXPECT_EQ(schur({}, 3), TimePoly::constant(1.0, 3));
  for (int j = 1; j <= 5; ++j) EXPECT_LT(diff(schur(row_partition(j), 6), hpoly(j, 6)), 1e-14);
  TimePoly s21 = schur({2, 1}, 3);
  EXPECT_NEAR(std::abs(s21.coefficient(mono_t(1, 3)) - 1.0 / 3.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s21.coefficient(mono_t(3)) + 1.0), 0.0, 1e-15);
  EXPECT_EQ(s21.terms().size(), 2u);
  EXPECT_THROW(schur({2, 1}, 2), ConfigError);
}

TEST(Symfun, JacobiTrudiEquivalence) {
  for (const Partition& p : partitions_up_to(6)) {
    TimePoly h = schur_h_determinant(p, 6), e = schur_e_determinant(p, 6);
    EXPECT_LT(diff(h, e), 1e-12) << p.str();
  }
}

TEST(Symfun, CauchyLittlewood) {
  // sum_lambda s_lambda(t) s_lambda(t') = exp(sum k t_k t'_k), compared
  // coefficient-wise: [t^m t'^m'] = delta_{mm'} prod k^{e_k} / e_k!.
  const int W = 6;
  for (int n = 0; n <= W; ++n) {
    std::vector<TimePoly> s;
    for (const Partition& p : partitions_of(n)) s.push_back(schur(p, n));
    std::vector<Monomial> monos;
    for (const Partition& mu : partitions_of(n)) {
      Monomial m(static_cast<std::size_t>(mu.first_row()), 0);
      for (int part : mu.parts()) ++m[static_cast<std::size_t>(part - 1)];
      monos.push_back(m);
    }
    for (const Monomial& a : monos) {
      for (const Monomial& b : monos) {
        cplx lhs = 0.0;
        double scale = 0.0;
        for (const TimePoly& sp : s) {
          lhs += sp.coefficient(a) * sp.coefficient(b);
          scale += std::abs(sp.coefficient(a) * sp.coefficient(b));
        }
        double rhs = 0.0;
        if (a == b) {
          rhs = 1.0;
          for (std::size_t k = 0; k < a.size(); ++k)
            rhs *= std::pow(static_cast<double>(k + 1), a[k]) / std::tgamma(a[k] + 1.0);
        }
        EXPECT_LT(std::abs(lhs - rhs) / (scale + std::abs(rhs)), 1e-12) << mono_key(a) << " / " << mono_key(b);
      }
    }
  }
}

TEST(Symfun, Orthogonality) {
  const auto parts = partitions_up_to(5);
  for (const Partition& l : parts) {
    for (const Partition& m : parts) {
      const cplx v = apply_schur_diffop(l, schur(m, 5));
      EXPECT_LT(std::abs(v - (l == m ? 1.0 : 0.0)), 1e-12) << l.str() << " " << m.str();
    }
  }
  EXPECT_EQ(apply_schur_diffop({}, TimePoly::constant(1.0, 0)), cplx(1.0));
  EXPECT_THROW(apply_schur_diffop({2}, TimePoly::constant(1.0, 1)), ConfigError);
}

TEST(Symfun, MiwaShift) {
  TimePoly t1 = TimePoly::variable(1, 3);
  ZSeries z = miwa_shift(t1, +1, 0, 1);
  EXPECT_EQ(z.coefficient({0}), t1);
  EXPECT_EQ(z.coefficient({-1}).constant_term(), cplx(1.0));
  EXPECT_EQ(z.terms().size(), 2u);

  // Selection rule at t = 0.
  for (const Partition& p : partitions_up_to(5)) {
    const TimePoly s = schur(p, p.size());
    ZSeries plus = miwa_shift(s, +1, 0, 1), minus = miwa_shift(s, -1, 0, 1);
    for (int k = 0; k <= 5; ++k) {
      const cplx cp = plus.coefficient({-k}).constant_term();
      const cplx cm = minus.coefficient({-k}).constant_term();
      const double ep = (p.is_row() && k == p.size()) ? 1.0 : 0.0;
      const double em = (p.is_column() && k == p.size()) ? ((k % 2) ? -1.0 : 1.0) : 0.0;
      EXPECT_LT(std::abs(cp - ep), 1e-12) << p.str() << " k=" << k;
      EXPECT_LT(std::abs(cm - em), 1e-12) << p.str() << " k=" << k;
    }
  }
}

TEST(Symfun, MiwaShiftNumeric) {
  // Truncated series evaluated at small z^{-1} against direct evaluation.
  Rng rng(7);
  TimeVector t{rng.cnormal() * 0.3, rng.cnormal() * 0.3, rng.cnormal() * 0.3};
  const cplx z(25.0, 10.0);
  const Partition lam{2, 1};
  const int cap = 12;
  ZSeries sh = miwa_shift(schur(lam, cap), +1, 0, 1);
  TimeVector ts = t;
  ts.resize(cap);
  for (int k = 1; k <= cap; ++k) ts[static_cast<std::size_t>(k - 1)] += std::pow(z, -k) / double(k);
  EXPECT_LT(rel_residual(sh.evaluate(t, {z}), schur_numeric(lam, ts)), 1e-12);
}

TEST(Symfun, XiAndNumeric) {
  EXPECT_EQ(xi_eval({}, 3.0), cplx(0.0));
  EXPECT_EQ(xi_eval({2.0}, 3.0), cplx(6.0));
  EXPECT_EQ(xi_eval({1.0, 0.5}, 2.0), cplx(4.0));
  EXPECT_EQ(schur_numeric({1}, {2.0}), cplx(2.0));
  EXPECT_EQ(schur_numeric({2}, {1.0, 0.0}), cplx(0.5));
  EXPECT_EQ(schur_numeric({}, {1.0, 2.0}), cplx(1.0));
}

TEST(ZSeries, ProductRespectsJointWeight) {
  const int cap = 4;
  ZSeries a = miwa_shift(hpoly(2, cap), +1, 0, 2);
  ZSeries b = miwa_shift(hpoly(2, cap), -1, 1, 2);
  ZSeries c = a * b;
  for (const auto& [k, p] : c.terms())
    for (const auto& [m, v] : p.terms()) EXPECT_LE(z_weight(k) + weight(m), cap);
  ZSeries shifted = c.times_z(0, 1);
  EXPECT_EQ(shifted.cap(), cap - 1);
}

#include <gtest/gtest.h>

#include "mtop/tausolve.hpp"

using namespace mtop;
using namespace mtop::tausolve;

namespace {

CasoratiModel make(const std::vector<int>& Ms, const std::vector<cplx>& ps, std::uint64_t seed) {
  CasoratiModel m;
  m.gamma = {0.3, 0.1};
  Rng rng(seed);
  for (std::size_t i = 0; i < Ms.size(); ++i) {
    StringData s;
    s.p = ps[i];
    s.M = Ms[i];
    for (int k = 0; k <= s.M; ++k) s.b.push_back(rng.cnormal());
    m.strings.push_back(s);
  }
  m.validate();
  return m;
}

CasoratiModel soliton() { return make({1, 1}, {{1.3, 0.1}, {0.6, -0.2}}, 1); }
CasoratiModel mixed() { return make({2, 1}, {{1.3, 0.1}, {0.6, -0.2}}, 2); }
CasoratiModel three() { return make({1, 2, 1}, {{1.3, 0.1}, {0.6, -0.2}, {0.9, 0.5}}, 3); }

}  // namespace

TEST(Casorati, SingleStringClosedForm) {
  const CasoratiModel m = make({1}, {{1.2, 0.3}}, 4);
  const StringData& s = m.strings[0];
  const cplx g = m.gamma, u{0.3, -0.2};
  const TimeVector t = {{0.1, 0.2}, {-0.05, 0.1}};
  cplx expect = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double mm = k - 0.5;
    const cplx P = s.p * std::exp(2.0 * g * mm);
    expect += s.b[k] * std::exp(2.0 * g * mm * (u - 1.0)) * std::exp(t[0] * P + t[1] * P * P);
  }
  expect /= s.p;
  EXPECT_LT(rel_residual(tau(m, u, t), expect), 1e-14);
  EXPECT_EQ(tau(m.without({0}), u, t), cplx(1.0));
}

TEST(Casorati, MiwaShiftClosedForm) {
  const cplx P{0.7, 0.2}, z{2.1, -0.9};
  TimeVector t = {{0.1, 0.05}, {0.2, -0.1}};
  TimeVector shifted = t;
  shifted.resize(200, 0.0);
  for (int k = 1; k <= 200; ++k) shifted[k - 1] += -std::pow(z, -k) / double(k);
  const cplx direct = std::exp(xi_eval(shifted, P));
  EXPECT_LT(rel_residual(exp_xi(t, {{-1, z}}, P), direct), 1e-14);
}

TEST(Casorati, DerivativeReplacesFirstColumn) {
  const CasoratiModel m = mixed();
  const cplx u{0.2, 0.1};
  const TimeVector t = {{0.1, -0.2}, {0.05, 0.02}};
  const double h = 1e-6;
  TimeVector tp = t, tm = t;
  tp[0] += h;
  tm[0] -= h;
  const cplx fd = (tau(m, u, tp) - tau(m, u, tm)) / (2.0 * h);
  EXPECT_LT(rel_residual(dtau_t1(m, u, t), fd), 1e-8);
}

TEST(Casorati, Validation) {
  CasoratiModel m = soliton();
  m.strings[0].b.front() = 0.0;
  EXPECT_THROW(m.validate(), ConfigError);
  m = soliton();
  m.strings[1].p = m.strings[0].p;
  EXPECT_THROW(m.validate(), ConfigError);
  m = soliton();
  m.strings[0].b.pop_back();
  EXPECT_THROW(m.validate(), ConfigError);
  m = soliton();
  EXPECT_THROW(tau_miwa_plus(m, 0.1, {}, m.points()[0]), PoleError);
  EXPECT_THROW(backlund_chain(m, {0, 0}), ConfigError);
}

TEST(Hirota, SolitonAndMixedModels) {
  for (const CasoratiModel& m : {soliton(), mixed(), three()}) {
    const auto h = check_hirota_numeric(casorati_tau(m), 100, 7);
    EXPECT_EQ(h.trials, 100);
    EXPECT_LT(h.three_shift, 1e-10);
    EXPECT_LT(h.lattice_shift, 1e-10);
  }
}

TEST(Hirota, PerturbationIsDetected) {
  TauFunction f = casorati_tau(mixed());
  auto base = f.eval;
  f.eval = [base](cplx u, const TimeVector& t, const Shifts& s) { return base(u, t, s) + 0.05; };
  EXPECT_GT(check_hirota_numeric(f, 10, 7).max(), 1e-4);
}

TEST(Baker, Coherence) {
  for (const CasoratiModel& m : {soliton(), mixed(), three()}) {
    const BakerReport r = check_baker(m, 50, 9);
    EXPECT_EQ(r.trials, 50);
    EXPECT_LT(r.string_cond, 1e-9);
    EXPECT_LT(r.tau_ratio, 1e-9);
    EXPECT_LT(r.w1, 1e-9);
    EXPECT_LT(r.wN, 1e-9);
    EXPECT_LT(r.diffdiff, 1e-9);
    EXPECT_LT(r.max(), 1e-9);
    EXPECT_LT(r.fd_max(), 1e-6);
  }
}

TEST(Baker, LastCoefficientNeedsDetG) {
  const CasoratiModel m = mixed();
  const cplx u{0.15, -0.1};
  const TimeVector t = {{0.1, 0.1}, {-0.1, 0.05}};
  const WCoeffs w = wcoeffs(m, u, t);
  const cplx ratio = (m.N() % 2 ? -1.0 : 1.0) * tau(m, u + 1.0, t) / tau(m, u, t);
  EXPECT_LT(rel_residual(w.w.back(), det_g(m) * ratio), 1e-12);
  // without det g the relation holds only when det g = 1
  EXPECT_GT(rel_residual(w.w.back(), ratio), 0.1);
}

TEST(Baker, TruncatedSeriesInZ) {
  const CasoratiModel m = soliton();
  const cplx u{0.1, 0.2}, z{2.0, 1.0};
  const TimeVector t = {{0.05, 0.0}};
  const WCoeffs w = wcoeffs(m, u, t);
  const cplx psi = baker(m, u, t, z);
  EXPECT_LT(rel_residual(psi * std::exp(-u * std::log(z) - xi_eval(t, z)), wpoly(w, z)), 1e-12);
}

TEST(Degree, LaurentFitOfKnownPolynomial) {
  const cplx g{0.3, 0.1};
  const LaurentFit f = laurent_fit([&](cplx u) { return 3.0 * std::exp(2.0 * g * u) + cplx(0.5, 1.0) * std::exp(-2.0 * g * u); }, g);
  EXPECT_EQ(f.lowest, -2);
  EXPECT_EQ(f.highest, 2);
  EXPECT_EQ(f.degree(), 2);
  EXPECT_LT(f.fit_residual, 1e-12);
}

TEST(Degree, EqualsTotalStringLength) {
  for (const CasoratiModel& m : {soliton(), mixed(), three()}) EXPECT_EQ(trig_degree(casorati_tau(m), {{0.1, 0.2}}), m.L());
}

TEST(Backlund, ChainsAgreeWithMinors) {
  const CasoratiModel m = three();
  for (const std::vector<int>& order : {std::vector<int>{0, 1, 2}, {2, 0, 1}, {1, 2, 0}}) {
    const auto chain = backlund_chain(m, order);
    ASSERT_EQ(chain.size(), 4u);
    int expected = m.L();
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const auto& st = chain[k];
      if (k > 0) expected -= m.strings[static_cast<std::size_t>(order[k - 1])].M;
      EXPECT_EQ(st.expected_degree, expected);
      EXPECT_EQ(trig_degree(st.residue_form, {}), expected) << stage_label(st.removed);
      Sampler smp(5, m.points());
      double worst = 0.0;
      for (int n = 0; n < 20; ++n) {
        const cplx u = smp.u();
        const TimeVector t = smp.t();
        worst = std::max(worst, rel_residual(st.residue_form(u, t), st.minor_form(u, t)));
      }
      EXPECT_LT(worst, 1e-10) << stage_label(st.removed);
      EXPECT_LT(check_hirota_numeric(st.residue_form, 20, 3).max(), 1e-10) << stage_label(st.removed);
    }
    // fully undressed: a constant
    const cplx c = chain.back().residue_form(0.3, {{0.2, 0.1}});
    EXPECT_LT(rel_residual(chain.back().residue_form(-0.4, {}), c), 1e-12);
  }
}

TEST(Backlund, ContourMatchesExactResidues) {
  // moderate times keep the contour well conditioned
  const CasoratiModel m = three();
  const auto chain = backlund_chain(m, {2, 0});
  for (std::size_t k = 1; k < chain.size(); ++k) {
    for (const TimeVector& t : {TimeVector{{0.1, 0.05}}, TimeVector{{-0.1, 0.1}, {0.05, 0.0}}}) {
      const cplx u{0.2, -0.1};
      EXPECT_LT(rel_residual(chain[k].contour_form(u, t), chain[k].residue_form(u, t)), 1e-10);
      const Shifts sh{{1, {1.7, 0.9}}};
      EXPECT_LT(rel_residual(chain[k].contour_form(u, t, sh), chain[k].residue_form(u, t, sh)), 1e-10);
    }
  }
}

TEST(Backlund, SubdominantResidueStaysAccurate) {
  // the residue at the lower string end carries e^{xi(t, z0)}, far below the
  // other terms of the same string here; the contour loses digits, the exact
  // form does not
  const CasoratiModel m = make({2, 1}, {{1.3, 0.1}, {0.6, -0.2}}, 5);
  const auto chain = backlund_chain(m, {0});
  const TimeVector t = {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {2.0, 0.0}};
  const cplx u{0.1, 0.0};
  EXPECT_LT(rel_residual(chain[1].residue_form(u, t), chain[1].minor_form(u, t)), 1e-12);
  EXPECT_GT(rel_residual(chain[1].contour_form(u, t), chain[1].minor_form(u, t)), 1e-10);
}

TEST(Backlund, MixedModelChain) {
  const CasoratiModel m = mixed();
  const auto chain = backlund_chain(m, {1, 0});
  EXPECT_EQ(trig_degree(chain[1].residue_form, {}), 2);
  EXPECT_EQ(trig_degree(chain[2].residue_form, {}), 0);
  for (const auto& st : chain) EXPECT_LT(check_hirota_numeric(st.residue_form, 20, 4).max(), 1e-10);
}

TEST(Construct, EdgeConstraintFromInhomogeneities) {
  qvertex::ModelConfig cfg;
  cfg.gamma = {0.3, 0.05};
  cfg.N = 2;
  cfg.L = 3;
  cfg.inhom = {{0.1, 0.05}, {-0.25, 0.1}, {0.4, -0.08}};
  cfg.twist = {1.3, {0.7, 0.2}};
  for (const auto& s : qvertex::all_sectors(2, 3)) {
    const CasoratiModel m = model_from_inhomogeneities(cfg, s, 11);
    EXPECT_LT(check_b_constraint(m, cfg.inhom), 1e-12) << s.str();
    EXPECT_EQ(m.L(), 3);
    EXPECT_EQ(trig_degree(casorati_tau(m), {}), 3) << s.str();
    EXPECT_LT(check_hirota_numeric(casorati_tau(m), 20, 2).max(), 1e-10) << s.str();
  }
  EXPECT_THROW(model_from_inhomogeneities(cfg, qvertex::SectorLabel{{1, 1}}, 1), ConfigError);
}

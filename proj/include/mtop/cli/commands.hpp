#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mtop/io.hpp"
#include "mtop/qvertex.hpp"
#include "mtop/rsdyn.hpp"
#include "mtop/tausolve.hpp"

namespace mtop::cli {

using io::json;
using qvertex::SectorLabel;

// Command-line overrides layered on top of the config file.
struct Options {
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, double>> tolerances;
  std::string side = "quantum";
  std::string csv;
  bool exchange_sign_fault = false;
};

struct RunConfig {
  json raw;
  std::optional<qvertex::ModelConfig> model;
  int D = 3;
  std::uint64_t seed = 1;
  int trials = 100;
  std::vector<SectorLabel> sectors;  // empty: every sector
  Tolerances tol;
  Options opts;

  const qvertex::ModelConfig& need_model() const {
    if (!model) throw ConfigError("this command needs a 'model' section");
    return *model;
  }
  const json& section(const char* key) const {
    static const json empty = json::object();
    return raw.contains(key) ? raw.at(key) : empty;
  }
  std::vector<SectorLabel> sectors_or_all() const {
    const auto& c = need_model();
    return sectors.empty() ? qvertex::all_sectors(c.N, c.L) : sectors;
  }
};

inline SectorLabel parse_sector(const json& j) {
  try {
    return {j.get<std::vector<int>>()};
  } catch (const json::exception&) {
    throw ConfigError("sector: expected a list of integers");
  }
}

inline RunConfig load_config(const json& j, const Options& opts) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig rc;
  rc.raw = j;
  rc.opts = opts;
  if (j.contains("model")) rc.model = io::parse_model(j.at("model"));
  rc.D = io::get_or<int>(j, "D", 3);
  rc.seed = opts.seed ? *opts.seed : io::get_or<std::uint64_t>(j, "seed", 1);
  rc.trials = io::get_or<int>(j, "trials", 100);
  if (rc.trials < 1) throw ConfigError("trials must be positive");
  if (j.contains("sector")) {
    const json& s = j.at("sector");
    if (s.is_array() && !s.empty() && s[0].is_array()) {
      for (const auto& e : s) rc.sectors.push_back(parse_sector(e));
    } else {
      rc.sectors.push_back(parse_sector(s));
    }
    for (const auto& s2 : rc.sectors) s2.validate(rc.need_model());
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances: expected an object");
    for (const auto& [name, v] : t.items()) {
      if (!v.is_number()) throw ConfigError("tolerance '" + name + "' must be a number");
      rc.tol.set(name, v.get<double>());
    }
  }
  for (const auto& [name, v] : opts.tolerances) rc.tol.set(name, v);
  return rc;
}

namespace detail {

// Runs one group of checks; numerical failures become failing entries, config
// errors propagate.
template <class F>
void guarded(io::Report& rep, const std::string& name, F&& body) {
  try {
    body();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    rep.error(name, e.what());
  }
}

inline json scalar_json(const qvertex::Scalar& s) {
  json j = json::object();
  for (const auto& [e, c] : s.coeffs()) j[std::to_string(e)] = io::cplx_json(c);
  return j;
}

inline json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(io::cplx_json(v(i)));
  return a;
}

inline double op_commutator(const qvertex::QOperator& a, const Mat& h) {
  double worst = 0.0;
  for (const auto& [e, c] : a.coeffs()) {
    const double s = c.norm() * h.norm();
    if (s > 0) worst = std::max(worst, (c * h - h * c).norm() / s);
  }
  return worst;
}

inline qvertex::FusionConvention fusion(const RunConfig& rc, io::Report& rep) {
  const auto& cfg = rc.need_model();
  Rng rng(rc.seed);
  const auto sel = qvertex::select_fusion_convention(cfg.N, cfg.gamma, rng);
  json l = json::array();
  double chosen = 0.0;
  for (const auto& [conv, leak] : sel.leakage) {
    l.push_back({{"staircase", conv.staircase == qvertex::Staircase::Descending ? "descending" : "ascending"},
                 {"sign", conv.sign == qvertex::AntisymSign::MinusQ ? "-q" : "-1/q"},
                 {"leakage", leak}});
    if (conv.staircase == sel.chosen.staircase && conv.sign == sel.chosen.sign) chosen = leak;
  }
  rep.data()["fusion"] = l;
  rep.check("fusion projector leakage", chosen, rc.tol["fusion"]);
  return sel.chosen;
}

struct NamedModel {
  std::string name;
  tausolve::CasoratiModel model;
  std::optional<std::vector<cplx>> inhom;  // set when built from a vertex model
};

// classical.models / classical.model, else one model per sector from the
// vertex-model data.
inline std::vector<NamedModel> classical_models(const RunConfig& rc) {
  const json& c = rc.section("classical");
  std::vector<NamedModel> out;
  if (c.contains("models")) {
    const json& ms = c.at("models");
    if (!ms.is_array()) throw ConfigError("classical.models: expected a list");
    for (std::size_t k = 0; k < ms.size(); ++k)
      out.push_back({io::get_or<std::string>(ms[k], "name", "model " + std::to_string(k)),
                     io::parse_casorati(ms[k]), std::nullopt});
  } else if (c.contains("model")) {
    out.push_back({"model", io::parse_casorati(c.at("model")), std::nullopt});
  } else {
    const auto& cfg = rc.need_model();
    for (const auto& s : rc.sectors_or_all())
      out.push_back({"sector " + s.str(), tausolve::model_from_inhomogeneities(cfg, s, rc.seed), cfg.inhom});
  }
  return out;
}

}  // namespace detail

// R-matrix: Yang-Baxter equation and GL(N) invariance at random points.
inline io::Report cmd_ybe(const RunConfig& rc) {
  io::Report rep("ybe", rc.seed);
  const json& y = rc.section("ybe");
  const cplx gamma = y.contains("gamma") ? io::parse_cplx(y.at("gamma"), "ybe.gamma") : rc.need_model().gamma;
  std::vector<int> Ns;
  if (y.contains("N")) {
    Ns = y.at("N").is_array() ? y.at("N").get<std::vector<int>>() : std::vector<int>{y.at("N").get<int>()};
  } else {
    Ns = {rc.need_model().N};
  }
  const int trials = io::get_or<int>(y, "trials", rc.trials);
  const auto fault = rc.opts.exchange_sign_fault ? qvertex::RFault::ExchangeSign : qvertex::RFault::None;
  rep.data()["gamma"] = io::cplx_json(gamma);
  rep.data()["N"] = Ns;
  rep.data()["trials"] = trials;
  rep.data()["fault"] = rc.opts.exchange_sign_fault ? "exchange-sign" : "none";
  Rng rng(rc.seed);
  for (int N : Ns) {
    if (N < 2) throw ConfigError("N must be >= 2");
    const std::string tag = " N=" + std::to_string(N);
    detail::guarded(rep, "ybe" + tag, [&] {
      rep.check("yang-baxter" + tag, qvertex::check_ybe(N, gamma, trials, rng, fault).residual, rc.tol["ybe"]);
      rep.check("g-invariance" + tag, qvertex::check_g_invariance(N, gamma, trials, rng, fault).residual,
                rc.tol["ybe"]);
    });
  }
  return rep;
}

// Master T-operator: fusion, bilinear-relation division, duality, commuting
// family, sectors, top coefficients and the eigenvalue prefactor.
inline io::Report cmd_master(const RunConfig& rc) {
  io::Report rep("master", rc.seed);
  const auto& cfg = rc.need_model();
  rep.data()["model"] = io::model_json(cfg);
  rep.data()["D"] = rc.D;
  detail::guarded(rep, "master", [&] {
    const auto conv = detail::fusion(rc, rep);
    const qvertex::MasterT m = qvertex::build_master(cfg, rc.D, conv, rc.tol["cbr_division"]);
    double div = 0.0;
    for (const auto& [p, r] : m.division_residual) div = std::max(div, r);
    rep.check("exact division", div, rc.tol["cbr_division"]);
    bool parity = true;
    for (const auto& [p, op] : m.T) parity = parity && op.parity_ok(cfg.L);
    rep.expect("Laurent exponents in [-L, L] with parity of L", parity);

    if (cfg.N == 2) {
      const qvertex::SpinRowFamily rows(cfg, rc.D);
      double dual = 0.0, spin = 0.0;
      for (const auto& [p, op] : m.T) {
        const auto r = qvertex::cbr_from_rows(cfg, p, rows, rc.tol["cbr_division"]);
        dual = std::max(dual, rel_residual((r.op - op).norm(), r.op.norm(), op.norm()));
        if (p.is_row() && !p.empty()) {
          const auto s = rows(p.size());
          spin = std::max(spin, rel_residual((s - op).norm(), s.norm(), op.norm()));
        }
      }
      rep.check("row and column determinants agree", dual, rc.tol["cbr_duality"]);
      rep.check("one-row operators match spin-s transfer matrices", spin, rc.tol["cbr_duality"]);
    } else {
      rep.data()["duality"] = "row family available only for N = 2";
    }

    // commuting family at random spectral parameters
    Rng rng(rc.seed + 1);
    const int cap = std::min(rc.D, 3);
    double comm = 0.0;
    for (int n = 0; n < 5; ++n) {
      const cplx u = rng.box(1.0, 1.0), v = rng.box(1.0, 1.0);
      for (const auto& [a, opa] : m.T) {
        if (a.size() > cap) continue;
        const Mat A = opa.evaluate(u, cfg.gamma);
        for (const auto& [b, opb] : m.T)
          if (b.size() <= cap) comm = std::max(comm, qvertex::commutator_residual(A, opb.evaluate(v, cfg.gamma)));
      }
    }
    rep.check("commuting family", comm, rc.tol["commute"]);

    json states = json::array();
    for (const auto& sec : rc.sectors_or_all()) {
      const std::string tag = " " + sec.str();
      detail::guarded(rep, "sector" + tag, [&] {
        double cons = 0.0;
        for (int a = 0; a < cfg.N; ++a) {
          const Mat H = qvertex::magnon_number(cfg, a);
          for (const auto& [p, op] : m.T) cons = std::max(cons, detail::op_commutator(op, H));
        }
        rep.check("magnon numbers conserved" + tag, cons, rc.tol["sector"]);
        const auto dg = qvertex::diagonalize_master(m, sec, rc.seed, rc.tol["diagonal"]);
        rep.check("simultaneous diagonalization" + tag, dg.offdiag_residual, rc.tol["diagonal"]);
        const auto tc = qvertex::check_top_coeffs(m, sec);
        rep.check("top coefficient" + tag, tc.top, rc.tol["top_coeffs"]);
        rep.check("bottom coefficient" + tag, tc.bottom, rc.tol["top_coeffs"]);
        double pref = 0.0;
        for (const auto& et : dg.states) {
          pref = std::max(pref, qvertex::check_prefactor_C(cfg, et));
          json th = json::object();
          for (const auto& [p, s] : et.theta) th[p.str()] = detail::scalar_json(s);
          states.push_back({{"sector", sec.M}, {"index", et.index}, {"vector", detail::vec_json(et.vector)},
                            {"theta", th}});
        }
        rep.check("eigenvalue prefactor C(t)" + tag, pref, rc.tol["top_coeffs"]);
      });
    }
    rep.data()["eigenstates"] = states;
  });
  return rep;
}

inline io::Report cmd_hirota_quantum(const RunConfig& rc) {
  io::Report rep("hirota", rc.seed);
  const auto& cfg = rc.need_model();
  rep.data()["side"] = "quantum";
  rep.data()["model"] = io::model_json(cfg);
  rep.data()["D"] = rc.D;
  detail::guarded(rep, "hirota", [&] {
    const auto conv = detail::fusion(rc, rep);
    const qvertex::MasterT m = qvertex::build_master(cfg, rc.D, conv, rc.tol["cbr_division"]);
    const auto h = qvertex::check_hirota_quantum(m);
    rep.data()["coefficients"] = h.keys;
    rep.check("bilinear identity I (operators)", h.three_shift, rc.tol["hirota_quantum"]);
    rep.check("bilinear identity II (operators)", h.lattice_shift, rc.tol["hirota_quantum"]);
    for (const auto& sec : rc.sectors_or_all()) {
      const std::string tag = " " + sec.str();
      detail::guarded(rep, "eigenvalues" + tag, [&] {
        const auto dg = qvertex::diagonalize_master(m, sec, rc.seed, rc.tol["diagonal"]);
        double worst = 0.0;
        for (const auto& et : dg.states) worst = std::max(worst, qvertex::check_hirota_quantum(et).max());
        rep.check("bilinear identities (eigenvalues)" + tag, worst, rc.tol["hirota_quantum"]);
      });
    }
  });
  return rep;
}

inline io::Report cmd_hirota_classical(const RunConfig& rc) {
  io::Report rep("hirota", rc.seed);
  rep.data()["side"] = "classical";
  rep.data()["trials"] = rc.trials;
  json models = json::array();
  for (const auto& nm : detail::classical_models(rc)) {
    models.push_back({{"name", nm.name}, {"model", io::casorati_json(nm.model)}});
    const std::string tag = " [" + nm.name + "]";
    detail::guarded(rep, "classical" + tag, [&] {
      const auto h = tausolve::check_hirota_numeric(tausolve::casorati_tau(nm.model), rc.trials, rc.seed);
      rep.check("bilinear identity I" + tag, h.three_shift, rc.tol["hirota_classical"]);
      rep.check("bilinear identity II" + tag, h.lattice_shift, rc.tol["hirota_classical"]);
      const int deg = tausolve::trig_degree(tausolve::casorati_tau(nm.model), {});
      rep.expect("trigonometric degree equals sum of string lengths" + tag, deg == nm.model.L(),
                 "degree " + std::to_string(deg) + ", expected " + std::to_string(nm.model.L()));
    });
  }
  rep.data()["models"] = models;
  return rep;
}

inline io::Report cmd_hirota(const RunConfig& rc, const std::string& side) {
  if (side == "quantum") return cmd_hirota_quantum(rc);
  if (side == "classical") return cmd_hirota_classical(rc);
  throw ConfigError("side must be 'quantum' or 'classical'");
}

// Classical tau-function: Baker-Akhiezer checks and the undressing chain.
inline io::Report cmd_backlund(const RunConfig& rc) {
  io::Report rep("backlund", rc.seed);
  const json& b = rc.section("backlund");
  const int trials = io::get_or<int>(b, "trials", 20);
  const int baker_trials = io::get_or<int>(b, "baker_trials", 50);
  json out = json::array();
  for (const auto& nm : detail::classical_models(rc)) {
    const auto& m = nm.model;
    const std::string tag = " [" + nm.name + "]";
    json entry = {{"name", nm.name}, {"model", io::casorati_json(m)}};
    std::vector<int> order;
    if (b.contains("order")) {
      for (int k : b.at("order").get<std::vector<int>>()) {
        if (k < 1 || k > m.N()) throw ConfigError("backlund.order entries must lie in 1..N");
        order.push_back(k - 1);
      }
    } else {
      for (int k = 0; k < m.N(); ++k) order.push_back(k);
    }
    detail::guarded(rep, "backlund" + tag, [&] {
      if (nm.inhom) rep.check("edge constraint" + tag, tausolve::check_b_constraint(m, *nm.inhom), rc.tol["pointwise"]);
      const auto bk = tausolve::check_baker(m, baker_trials, rc.seed);
      rep.check("Baker-Akhiezer identities" + tag, bk.max(), rc.tol["baker"]);
      rep.check("Baker-Akhiezer finite differences" + tag, bk.fd_max(), 1e-6);
      const auto chain = tausolve::backlund_chain(m, order);
      json stages = json::array();
      for (const auto& st : chain) {
        const std::string lab = " " + tausolve::stage_label(st.removed) + tag;
        tausolve::Sampler smp(rc.seed + 7, m.points());
        double agree = 0.0;
        for (int k = 0; k < trials; ++k) {
          const cplx u = smp.u();
          const auto t = smp.t();
          agree = std::max(agree, rel_residual(st.residue_form(u, t), st.minor_form(u, t)));
        }
        rep.check("residue form equals minor" + lab, agree, rc.tol["backlund"]);
        tausolve::LaurentFit fit;
        const int deg = tausolve::trig_degree(st.residue_form, {}, &fit);
        rep.expect("degree" + lab, deg == st.expected_degree,
                   "degree " + std::to_string(deg) + ", expected " + std::to_string(st.expected_degree));
        const auto h = tausolve::check_hirota_numeric(st.residue_form, trials, rc.seed + 3);
        rep.check("bilinear identities" + lab, h.max(), rc.tol["hirota_classical"]);
        // numerical contour vs exact residues at t = 0, where it is well conditioned
        const double contour = rel_residual(st.contour_form(0.1, {}), st.residue_form(0.1, {}));
        stages.push_back({{"label", tausolve::stage_label(st.removed)}, {"degree", deg},
                          {"expected_degree", st.expected_degree}, {"agreement", agree}, {"hirota", h.max()},
                          {"contour_deviation", contour}});
      }
      entry["stages"] = stages;
    });
    out.push_back(entry);
  }
  rep.data()["models"] = out;
  return rep;
}

// Ruijsenaars-Schneider flow: equations of motion, Lax pair, conservation.
inline io::Report cmd_rs(const RunConfig& rc) {
  io::Report rep("rs", rc.seed);
  const json& r = io::require(rc.raw, "rs");
  rsdyn::RSState s;
  s.gamma = r.contains("gamma") ? io::parse_cplx(r.at("gamma"), "rs.gamma") : rc.need_model().gamma;
  s.u = io::parse_cplx_list(io::require(r, "u"), "rs.u");
  s.udot = io::parse_cplx_list(io::require(r, "udot"), "rs.udot");
  try {
    s.validate();
  } catch (const PoleError& e) {
    throw ConfigError(std::string("rs initial state: ") + e.what());
  }
  std::vector<cplx> zetas = r.contains("zeta") ? io::parse_cplx_list(r.at("zeta"), "rs.zeta")
                                               : std::vector<cplx>{{0.7, 0.3}, {-0.5, 0.4}};
  const double t_final = io::get_or<double>(r, "t_final", 1.0);
  const double h = io::get_or<double>(r, "h", 1e-3);
  const double lax_h = io::get_or<double>(r, "lax_h", 1e-5);
  const int every = io::get_or<int>(r, "sample_every", 10);
  if (every < 1) throw ConfigError("rs.sample_every must be positive");
  rep.data()["gamma"] = io::cplx_json(s.gamma);
  rep.data()["t_final"] = t_final;
  rep.data()["h"] = h;

  detail::guarded(rep, "rs identities", [&] {
    rep.check("Phi identities", rsdyn::check_phi_identities(s.gamma, rc.trials, rc.seed).max(), rc.tol["rs_forms"]);
  });
  detail::guarded(rep, "rs flow", [&] {
    const auto tr = rsdyn::integrate(s, t_final, h, every);
    rep.expect("integration completed", tr.completed, tr.message);
    rep.data()["halvings"] = tr.halvings;
    double forms = 0.0, mom = 0.0, lax = 0.0;
    for (const auto& st : tr.states) {
      forms = std::max(forms, rsdyn::accel_forms_residual(st));
      const auto a = rsdyn::accel(st);
      cplx sum = 0.0;
      double scale = 0.0;
      for (cplx x : a) {
        sum += x;
        scale += std::abs(x);
      }
      if (scale > 0) mom = std::max(mom, std::abs(sum) / scale);
    }
    for (const auto& st : {tr.states.front(), tr.states.back()})
      for (cplx z : zetas) lax = std::max(lax, rsdyn::check_lax_equation(st, z, lax_h));
    rep.check("equations of motion forms agree", forms, rc.tol["rs_forms"]);
    rep.check("total acceleration vanishes", mom, rc.tol["pointwise"]);
    rep.check("Lax equation", lax, rc.tol["lax"]);
    const auto d = rsdyn::conservation_drift(tr, zetas);
    rep.check("H1 drift", d.h1, rc.tol["drift"]);
    rep.check("spectral invariant drift", d.invariants, rc.tol["drift"]);
    rep.check("Lax spectrum drift", d.spectrum, rc.tol["drift"]);
    rep.data()["final"] = {{"u", io::cplx_list_json(tr.states.back().u)},
                           {"udot", io::cplx_list_json(tr.states.back().udot)}};
    if (!rc.opts.csv.empty()) io::write_text(rc.opts.csv, io::trajectory_csv(tr));
  });
  return rep;
}

// Quantum-classical bridge: velocities from eigenvalue residues, accelerations
// from the RS equations against the motion of the zeros.
inline io::Report cmd_bridge(const RunConfig& rc) {
  io::Report rep("bridge", rc.seed);
  const auto& cfg = rc.need_model();
  const int D = std::max(2, rc.D);
  rep.data()["model"] = io::model_json(cfg);
  rep.data()["D"] = D;
  json out = json::array();
  for (const auto& sec : rc.sectors_or_all()) {
    const std::string tag = " " + sec.str();
    detail::guarded(rep, "bridge" + tag, [&] {
      const auto br = rsdyn::bridge_sector(cfg, sec, D, rc.seed);
      rep.check("velocities from residues" + tag, br.first, rc.tol["bridge_first"]);
      rep.check("accelerations from RS" + tag, br.second, rc.tol["bridge_second"]);
      if (br.states.size() > 1)
        rep.expect("eigenstates give distinct velocities" + tag, br.min_velocity_separation > 1e-6,
                   "min separation " + io::fmt(br.min_velocity_separation));
      for (const auto& st : br.states)
        out.push_back({{"sector", sec.M}, {"index", st.index}, {"udot", io::cplx_list_json(st.udot_residue)},
                       {"uddot", io::cplx_list_json(st.uddot_rs)}, {"first", st.first}, {"second", st.second}});
    });
  }
  rep.data()["states"] = out;
  return rep;
}

}  // namespace mtop::cli

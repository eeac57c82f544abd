#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtop/qvertex/model.hpp"
#include "mtop/rsdyn/flow.hpp"
#include "mtop/symfun/timepoly.hpp"
#include "mtop/tausolve/model.hpp"

namespace mtop::io {

using nlohmann::json;

// complex: plain number or [re, im]
inline cplx parse_cplx(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(what + ": expected a number or [re, im]");
}

inline json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline std::vector<cplx> parse_cplx_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected a list");
  std::vector<cplx> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_cplx(j[k], what + "[" + std::to_string(k) + "]"));
  return out;
}

inline json cplx_list_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(cplx_json(z));
  return a;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline qvertex::ModelConfig parse_model(const json& j) {
  qvertex::ModelConfig c;
  c.gamma = parse_cplx(require(j, "gamma"), "gamma");
  c.N = get_or<int>(j, "N", 2);
  c.L = get_or<int>(j, "L", 1);
  c.inhom = parse_cplx_list(require(j, "inhom"), "inhom");
  c.twist = parse_cplx_list(require(j, "twist"), "twist");
  c.validate();
  return c;
}

inline json model_json(const qvertex::ModelConfig& c) {
  return {{"gamma", cplx_json(c.gamma)}, {"N", c.N}, {"L", c.L},
          {"inhom", cplx_list_json(c.inhom)}, {"twist", cplx_list_json(c.twist)}};
}

inline tausolve::CasoratiModel parse_casorati(const json& j) {
  tausolve::CasoratiModel m;
  m.gamma = parse_cplx(require(j, "gamma"), "gamma");
  const json& strings = require(j, "strings");
  if (!strings.is_array()) throw ConfigError("strings: expected a list");
  for (std::size_t i = 0; i < strings.size(); ++i) {
    const std::string tag = "strings[" + std::to_string(i) + "]";
    tausolve::StringData s;
    s.p = parse_cplx(require(strings[i], "p"), tag + ".p");
    s.M = get_or<int>(strings[i], "M", 0);
    s.b = parse_cplx_list(require(strings[i], "b"), tag + ".b");
    m.strings.push_back(std::move(s));
  }
  m.validate();
  return m;
}

inline json casorati_json(const tausolve::CasoratiModel& m) {
  json strings = json::array();
  for (const auto& s : m.strings) strings.push_back({{"p", cplx_json(s.p)}, {"M", s.M}, {"b", cplx_list_json(s.b)}});
  return {{"gamma", cplx_json(m.gamma)}, {"strings", strings}};
}

// {"1^2 3^1": [re, im], ...}
inline json timepoly_json(const symfun::TimePoly& p) {
  json j = json::object();
  for (const auto& [m, c] : p.terms()) j[symfun::mono_key(m)] = cplx_json(c);
  return j;
}

inline std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Report: one entry per check, first failing check named. The timestamp is
// the only nondeterministic field and lives in header.generated_at.
class Report {
 public:
  explicit Report(std::string command, std::uint64_t seed) {
    doc_["header"] = {{"command", std::move(command)}, {"seed", seed}, {"generated_at", timestamp()}};
    doc_["checks"] = json::array();
  }

  bool check(const std::string& name, double residual, double tolerance) {
    const bool ok = residual < tolerance;
    doc_["checks"].push_back({{"name", name}, {"residual", residual}, {"tolerance", tolerance}, {"pass", ok}});
    if (!ok && first_failure_.empty()) first_failure_ = name;
    return ok;
  }

  bool expect(const std::string& name, bool ok, const std::string& detail = "") {
    json c = {{"name", name}, {"pass", ok}};
    if (!detail.empty()) c["detail"] = detail;
    doc_["checks"].push_back(std::move(c));
    if (!ok && first_failure_.empty()) first_failure_ = name;
    return ok;
  }

  void error(const std::string& name, const std::string& what) {
    doc_["checks"].push_back({{"name", name}, {"pass", false}, {"error", what}});
    if (first_failure_.empty()) first_failure_ = name;
  }

  json& data() { return doc_["data"]; }
  bool passed() const { return first_failure_.empty(); }
  const std::string& first_failure() const { return first_failure_; }

  json finish() const {
    json d = doc_;
    d["pass"] = passed();
    if (!passed()) d["first_failure"] = first_failure_;
    return d;
  }

 private:
  json doc_;
  std::string first_failure_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

inline json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// t, Re u_j, Im u_j, ..., Re udot_j, Im udot_j, ...
inline std::string trajectory_csv(const rsdyn::Trajectory& tr) {
  std::ostringstream os;
  const int n = tr.states.empty() ? 0 : tr.states.front().size();
  os << "t";
  for (int j = 1; j <= n; ++j) os << ",re_u" << j << ",im_u" << j;
  for (int j = 1; j <= n; ++j) os << ",re_udot" << j << ",im_udot" << j;
  os << "\n";
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    os << fmt(tr.times[k]);
    for (cplx u : tr.states[k].u) os << "," << fmt(u.real()) << "," << fmt(u.imag());
    for (cplx v : tr.states[k].udot) os << "," << fmt(v.real()) << "," << fmt(v.imag());
    os << "\n";
  }
  return os.str();
}

}  // namespace mtop::io

// mtop: run one family of checks from a JSON config and emit a JSON report.
//
// exit codes: 0 all checks pass, 1 a check failed, 2 bad config or arguments

#include <CLI11.hpp>
#include <iostream>

#include "mtop/cli/commands.hpp"

namespace {

std::pair<std::string, double> parse_tolerance(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw mtop::ConfigError("--tolerance expects name=value, got '" + s + "'");
  try {
    std::size_t used = 0;
    const std::string num = s.substr(eq + 1);
    const double v = std::stod(num, &used);
    if (used != num.size()) throw std::invalid_argument("trailing characters");
    return {s.substr(0, eq), v};
  } catch (const std::exception&) {
    throw mtop::ConfigError("--tolerance value in '" + s + "' is not a number");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks for the master T-operator, tau-functions and RS dynamics"};
  app.require_subcommand(1);

  std::string config_path, out_path, fault;
  std::vector<std::string> tolerances;
  std::uint64_t seed = 0;
  mtop::cli::Options opts;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--tolerance", tolerances, "name=value, repeatable");
  };

  auto* ybe = app.add_subcommand("ybe", "Yang-Baxter equation and GL(N) invariance");
  common(ybe);
  ybe->add_option("--inject-fault", fault, "deliberately break the R-matrix")->check(CLI::IsMember({"exchange-sign"}));
  auto* master = app.add_subcommand("master", "master T-operator and its eigenvalues");
  common(master);
  auto* hirota = app.add_subcommand("hirota", "bilinear identities");
  common(hirota);
  hirota->add_option("--side", opts.side, "quantum or classical")->check(CLI::IsMember({"quantum", "classical"}));
  auto* backlund = app.add_subcommand("backlund", "Baker-Akhiezer checks and the undressing chain");
  common(backlund);
  auto* rs = app.add_subcommand("rs", "RS flow, Lax equation and conservation");
  common(rs);
  rs->add_option("--csv", opts.csv, "write the sampled trajectory as CSV");
  auto* bridge = app.add_subcommand("bridge", "quantum-classical correspondence");
  common(bridge);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (const auto& t : tolerances) opts.tolerances.push_back(parse_tolerance(t));
    if (app.get_subcommands().front()->count("--seed")) opts.seed = seed;
    opts.exchange_sign_fault = fault == "exchange-sign";
    const auto rc = mtop::cli::load_config(mtop::io::read_json_file(config_path), opts);

    CLI::App* sub = app.get_subcommands().front();
    mtop::io::Report rep = sub == ybe        ? mtop::cli::cmd_ybe(rc)
                           : sub == master   ? mtop::cli::cmd_master(rc)
                           : sub == hirota   ? mtop::cli::cmd_hirota(rc, opts.side)
                           : sub == backlund ? mtop::cli::cmd_backlund(rc)
                           : sub == rs       ? mtop::cli::cmd_rs(rc)
                                             : mtop::cli::cmd_bridge(rc);
    const std::string text = rep.finish().dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      mtop::io::write_text(out_path, text);
    }
    if (!rep.passed()) {
      std::cerr << "FAIL: " << rep.first_failure() << "\n";
      return 1;
    }
    return 0;
  } catch (const mtop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mtop::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

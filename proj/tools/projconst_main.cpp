#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "projconst/cli.hpp"
#include "projconst/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lower bounds for minimal projections onto hyperplanes"};
  app.name("projconst");

  std::string command;
  app.add_option("command", command,
                 "space | params | ledger | classify | minproj | verify | "
                 "corollary")
      ->required()
      ->check(CLI::IsMember({"space", "params", "ledger", "classify",
                             "minproj", "verify", "corollary"}));

  std::string config_path;
  app.add_option("--config", config_path, "JSON space definition");
  bool json_out = false;
  app.add_flag("--json", json_out, "print the JSON report on stdout");
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "override the search seed");
  std::size_t restarts = 0;
  auto* restarts_opt =
      app.add_option("--restarts", restarts, "override search restarts");
  std::size_t corollary_n = 4;
  app.add_option("--n", corollary_n, "dimension for the corollary command");
  std::string lemma;
  app.add_option("--lemma", lemma, "restrict verify to a single lemma")
      ->check(CLI::IsMember({"funkcjonaly", "objetosc", "modul", "modul2",
                             "markov", "vandermonde", "zawezenie"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    std::optional<projconst::SpaceConfig> config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "projconst: cannot open " << config_path << "\n";
        return 2;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      config = projconst::parse_config(buf.str());
    }

    projconst::RunFlags flags;
    flags.json = json_out;
    if (seed_opt->count() > 0) flags.seed = seed;
    if (restarts_opt->count() > 0) flags.restarts = restarts;
    flags.corollary_n = corollary_n;
    flags.lemma = lemma;

    projconst::RunOutcome out = projconst::run_suite(command, config, flags);
    const std::string text = projconst::report_text(out.report);
    if (json_out) {
      std::cout << out.report.dump(2) << "\n";
      std::cerr << text;
    } else {
      std::cout << text;
    }
    return out.exit_code;
  } catch (const projconst::ParseError& e) {
    std::cerr << "projconst: config error: " << e.what() << "\n";
    return 2;
  } catch (const projconst::Error& e) {
    std::cerr << "projconst: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "projconst: " << e.what() << "\n";
    return 2;
  }
}

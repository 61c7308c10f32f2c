#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "projconst/params.hpp"
#include "projconst/verify.hpp"

namespace projconst {

struct SpaceConfig {
  std::size_t n = 0;
  std::size_t m = 0;
  int p = 1;
  std::vector<std::vector<Rational>> functionals;  // m rows of n entries
  std::optional<Vector> hyperplane;
  std::optional<WitnessMap> witnesses;
  SearchConfig search;

  FunctionalFamily family() const;
};

// Accepts rational entries as "a/b" strings and decimals as JSON numbers.
// Builds the family once to validate it, so a config that parses is usable.
SpaceConfig parse_config(const std::string& text);

struct RunFlags {
  bool json = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> restarts;
  std::size_t corollary_n = 4;
  std::string lemma;
};

struct RunOutcome {
  nlohmann::json report;
  int exit_code = 0;  // 0 all verdicts true, 1 some verdict false, 2 input
};

// Dispatches one subcommand and assembles its report. The report carries no
// wall-clock data; runtime is counted in objective evaluations so the same
// config and seed produce byte-identical JSON.
RunOutcome run_suite(const std::string& command,
                     const std::optional<SpaceConfig>& config,
                     const RunFlags& flags);

// Short human-readable rendering of a report.
std::string report_text(const nlohmann::json& report);

}  // namespace projconst

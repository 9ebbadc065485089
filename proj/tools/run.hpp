#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace mtstab::cli {

using Json = nlohmann::json;

/// Partial parameter sets selectable with --preset.  "fig3" is complete;
/// "typical" covers D, omega, nu_minus, f_cat and requires d, u_plus, k from
/// the config.
Json preset_params(const std::string& name);

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 2 ran fine but verdict negative
  Json verdict;
  std::vector<std::string> artifacts;
};

/// Executes one analysis stage described by a config document.  Writes the
/// stage's CSV/JSON artifacts into config["output_dir"] and returns the
/// verdict JSON (which embeds the resolved config).  Errors surface as
/// exceptions; the CLI maps them to exit code 1.
RunOutcome run(Json config);

}  // namespace mtstab::cli

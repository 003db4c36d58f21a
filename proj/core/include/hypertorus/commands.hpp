#pragma once

#include <string>

#include "hypertorus/circle.hpp"
#include "hypertorus/config.hpp"

namespace hypertorus {

/// Batch entry points behind the CLI subcommands. Each runs its computation,
/// writes the JSON report to cfg.out_path (stdout when empty; sibling .csv
/// file for tabular payloads when a path is given) and returns the process
/// exit code: 0 success/expected, 2 identity failure, 3 unexpected probe
/// verdict. Usage and configuration problems throw std::invalid_argument /
/// std::runtime_error, which the CLI maps to exit code 1.
int cmd_verify(const RunConfig& cfg);
int cmd_probe(const RunConfig& cfg, const std::string& target, const std::string& phi_spec);
int cmd_primitive(const RunConfig& cfg);
int cmd_orbit(const RunConfig& cfg);

/// Parses a circle-function spec: "one", "cos:k" or "sin:k" with 1 <= k <= 8.
/// Returns the canonical display name through `display`.
CircleFunction parse_phi_spec(const std::string& spec, std::string* display);

}  // namespace hypertorus

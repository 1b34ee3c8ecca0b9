#pragma once

#include <ostream>
#include <string>

#include "config.hpp"

namespace cavcool::cli {

inline constexpr const char* kVersion = "0.1.0";

int cmd_derive(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);
int cmd_steady(const RunConfig& cfg);
int cmd_analyze(const RunConfig& cfg);
int cmd_stability(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_oracle(const RunConfig& cfg);
int cmd_compare(const RunConfig& cfg);
int cmd_keys(std::ostream& os);

/// Writes "# key = value" provenance lines for the resolved configuration.
void write_provenance(std::ostream& os, const std::string& command, const RunConfig& cfg);

}  // namespace cavcool::cli

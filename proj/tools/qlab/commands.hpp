#pragma once

#include "config.hpp"
#include "report.hpp"

namespace qlab::cli {

/// Runs the configured experiment. Throws ConfigError for inputs that only
/// turn out to be invalid once loaded (for example a psi file on another grid).
Report run(const ExperimentConfig& cfg);

}  // namespace qlab::cli

#pragma once

// Library entry points for the CLI tasks. Each command runs one job
// deterministically, writes its artifacts into the configured output
// directory and returns the process exit code:
//   0 pass, 1 assertion/tolerance failure, 2 config error, 3 I/O failure.

#include "cliffspec/config.hpp"
#include "cliffspec/resolvents.hpp"
#include "cliffspec/spectrum.hpp"

namespace cliffspec {

int cmd_scan(const JobConfig& cfg);
int cmd_verify(const JobConfig& cfg);
int cmd_series(const JobConfig& cfg);
int cmd_kernel(const JobConfig& cfg);

/// Dispatch on cfg.task.
int run_job(const JobConfig& cfg);

/// Deterministic target at pseudo-distance d_S = fraction * eps from the
/// center, cycling through real-part, modulus and mixed displacements.
Paravector series_target(const Paravector& q, double eps, double fraction, int index);

} // namespace cliffspec

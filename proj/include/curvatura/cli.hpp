#pragma once

#include <cstdint>
#include <string>

namespace curvatura {

// Exit codes: 0 ok, 1 property failure, 2 parse error, 3 immersion failure,
// 4 undefined quantity requested, 5 grid failure budget exceeded.
enum ExitCode {
  kExitOk = 0,
  kExitPropertyFailure = 1,
  kExitParse = 2,
  kExitImmersion = 3,
  kExitUndefined = 4,
  kExitGridBudget = 5,
};

struct RunConfig {
  std::string command;  // point | curves | grid | verify
  std::string surface_path;
  bool have_at = false;
  double s0 = 0.0, t0 = 0.0;
  bool have_range = false;
  double s_min = -1.0, s_max = 1.0, t_min = -1.0, t_max = 1.0;
  int resolution = 21;
  double tol = 1e-8;
  bool tol_overridden = false;
  int samples = 64;
  bool samples_overridden = false;
  std::uint64_t seed = 1;
  bool seed_overridden = false;
  std::string format = "json";  // json | csv | svg
  std::string out_path = "-";   // "-" writes to stdout
  bool require_paired = false;
  std::string inject_bug;   // "", or "psi-sign-flip" (verify smoke hook)
  double count_scale = 1.0; // scales the verify battery sample counts
};

int cmd_point(const RunConfig& config);
int cmd_curves(const RunConfig& config);
int cmd_grid(const RunConfig& config);
int cmd_verify(const RunConfig& config);

/// Dispatch on config.command; exceptions are mapped to exit codes with a
/// message on stderr.
int run_command(const RunConfig& config);

}  // namespace curvatura

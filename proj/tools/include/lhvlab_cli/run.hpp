#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "lhvlab_cli/scene.hpp"

namespace lhvlab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kInput = 2;
inline constexpr int kIndeterminate = 4;
inline constexpr int kCapacity = 5;
inline constexpr int kLocal = 10;
inline constexpr int kNonlocal = 11;
inline constexpr int kUnsteerable = 20;
inline constexpr int kSteerable = 21;
}  // namespace exit_code

struct RunOutcome {
  int exit_code = exit_code::kOk;
  std::string report;   // JSON document; empty for input errors
  std::string summary;  // human-readable, for stderr
};

/// Runs the scene's task. Solver failures are folded into the outcome
/// (exit code plus an error report) rather than thrown.
RunOutcome run_scene(const Scene& scene);

/// Loads, overrides, runs and writes the report to `out_path` (or `out`
/// when absent). The summary and any error go to `err`.
int run_file(const std::string& scene_path, const std::optional<std::string>& out_path,
             const ParamOverrides& overrides, std::ostream& out, std::ostream& err);

}  // namespace lhvlab::cli

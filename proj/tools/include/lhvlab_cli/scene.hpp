#pragma once

// Scene files: a bipartite state, the two parties' measurements, a task and
// solver parameters, read from JSON with schema version 1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhvlab/quantum.hpp"

namespace lhvlab::cli {

enum class Task { Bell, SteerAB, SteerBA, Criterion, ConstructMeasurements };

const char* task_name(Task t);

struct SolverParams {
  double dist_tol;
  double gap_tol;
  double feas_tol;
  std::size_t max_iters;
  std::size_t threads = 1;
  std::uint64_t seed = 0;

  static SolverParams defaults();
};

/// Command-line values that take precedence over the scene's params.
struct ParamOverrides {
  std::optional<double> dist_tol;
  std::optional<double> gap_tol;
  std::optional<double> feas_tol;
  std::optional<std::size_t> max_iters;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
};

struct Scene {
  Task task;
  DensityMatrix state;
  std::size_t dim_a;
  std::size_t dim_b;
  std::vector<Povm> alice;
  std::vector<Povm> bob;
  SolverParams params;
};

/// Validation failure tied to a place in the scene file.
class SceneError : public std::runtime_error {
 public:
  SceneError(const std::string& source, std::size_t line, const std::string& pointer,
             const std::string& message);

  std::size_t line() const noexcept { return line_; }
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::size_t line_;
  std::string pointer_;
};

/// `source` names the input in error messages.
Scene parse_scene(const std::string& text, const std::string& source = "<scene>");
Scene load_scene(const std::string& path);

void apply_overrides(SolverParams& params, const ParamOverrides& overrides);

}  // namespace lhvlab::cli

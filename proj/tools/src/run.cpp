#include "lhvlab_cli/run.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "lhvlab/bell.hpp"
#include "lhvlab/errors.hpp"
#include "lhvlab/steering.hpp"
#include "lhvlab/strategies.hpp"
#include "lhvlab_cli/json_writer.hpp"

namespace lhvlab::cli {

namespace {

void write_parameters(JsonWriter& w, const SolverParams& p) {
  w.key("parameters").begin_object();
  w.key("dist_tol").value(p.dist_tol);
  w.key("gap_tol").value(p.gap_tol);
  w.key("feas_tol").value(p.feas_tol);
  w.key("max_iters").value(static_cast<std::uint64_t>(p.max_iters));
  w.key("threads").value(static_cast<std::uint64_t>(p.threads));
  w.key("seed").value(p.seed);
  w.end_object();
}

void write_assignment(JsonWriter& w, const DeterministicStrategy& s) {
  w.value(std::span<const std::uint32_t>(s.assignment()));
}

void write_povm(JsonWriter& w, const Povm& p) {
  w.begin_array();
  for (const auto& e : p.effects()) w.value(e.matrix());
  w.end_array();
}

// Everything task-specific; the caller wraps it with header and timing.
struct TaskResult {
  int code = exit_code::kOk;
  std::string verdict;
  std::ostringstream summary;
};

SteeringOptions steering_options(const SolverParams& p) {
  SteeringOptions o;
  o.dist_tol = p.dist_tol;
  o.gap_tol = p.gap_tol;
  o.max_iters = p.max_iters;
  o.threads = p.threads;
  return o;
}

void run_bell(const Scene& s, TaskResult& r, JsonWriter& w) {
  const MeasurementAssemblage alice(s.alice), bob(s.bob);
  const CorrelationTensor p = correlations_of(s.state, alice, bob);
  BellOptions opts;
  opts.feas_tol = s.params.feas_tol;
  const BellVerdict v = decide_bell_local(p, opts);

  w.key("scenario").begin_object();
  w.key("outcomes_a").value(static_cast<std::uint64_t>(p.outcomes_a()));
  w.key("outcomes_b").value(static_cast<std::uint64_t>(p.outcomes_b()));
  w.key("settings_a").value(static_cast<std::uint64_t>(p.settings_a()));
  w.key("settings_b").value(static_cast<std::uint64_t>(p.settings_b()));
  w.end_object();
  w.key("correlations").value(p.values());

  if (v.tag == BellTag::Local) {
    r.code = exit_code::kLocal;
    r.verdict = "Local";
    const auto& m = *v.model;
    const auto sa = enumerate_strategies(p.settings_a(), p.outcomes_a());
    const auto sb = enumerate_strategies(p.settings_b(), p.outcomes_b());
    w.key("certificate").begin_object();
    w.key("type").value("local_model");
    w.key("strategies_a").value(static_cast<std::uint64_t>(m.strategies_a));
    w.key("strategies_b").value(static_cast<std::uint64_t>(m.strategies_b));
    w.key("weights").value(m.weights);
    w.key("support").begin_array();
    std::size_t support = 0;
    for (std::size_t k = 0; k < m.strategies_a; ++k)
      for (std::size_t j = 0; j < m.strategies_b; ++j) {
        if (m.weight(k, j) <= 0.0) continue;
        ++support;
        w.begin_object();
        w.key("alice");
        write_assignment(w, sa.strategy(k));
        w.key("bob");
        write_assignment(w, sb.strategy(j));
        w.key("weight").value(m.weight(k, j));
        w.end_object();
      }
    w.end_array();
    w.end_object();
    w.key("residuals").begin_object();
    w.key("reconstruction_max_abs").value(v.residual);
    w.end_object();
    r.summary << "Local: mixture of " << support << " deterministic strategy pairs reproduces P(ab|xy) within "
              << format_double(v.residual) << "\n";
  } else {
    r.code = exit_code::kNonlocal;
    r.verdict = "Nonlocal";
    const auto& wt = *v.witness;
    w.key("certificate").begin_object();
    w.key("type").value("bell_witness");
    w.key("coefficients").value(wt.coefficients);
    w.key("local_bound").value(wt.local_bound);
    w.key("value_on_target").value(wt.value_on_target);
    w.key("margin").value(wt.margin());
    w.end_object();
    w.key("residuals").begin_object();
    w.key("lp_infeasibility").value(v.residual);
    w.end_object();
    r.summary << "Nonlocal: witness value " << format_double(wt.value_on_target) << " below local bound "
              << format_double(wt.local_bound) << " (margin " << format_double(wt.margin()) << ")\n";
  }
}

void run_steering(const Scene& s, TaskResult& r, JsonWriter& w) {
  const bool ab = s.task == Task::SteerAB;
  const Assemblage sigma =
      ab ? assemblage_of(s.state, MeasurementAssemblage(s.alice))
         : assemblage_of(swap_parties(s.state, s.dim_a, s.dim_b), MeasurementAssemblage(s.bob));
  const SteeringVerdict v = decide_unsteerable(sigma, steering_options(s.params));

  w.key("direction").value(ab ? "A->B" : "B->A");
  w.key("assemblage").begin_array();
  for (std::size_t x = 0; x < sigma.settings(); ++x) {
    w.begin_array();
    for (std::size_t a = 0; a < sigma.outcomes(); ++a) w.value(sigma.member(a, x));
    w.end_array();
  }
  w.end_array();

  if (v.tag == SteeringTag::Unsteerable) {
    r.code = exit_code::kUnsteerable;
    r.verdict = "Unsteerable";
    const auto& m = *v.model;
    const auto space = enumerate_strategies(m.settings, m.outcomes);
    w.key("certificate").begin_object();
    w.key("type").value("lhs_model");
    w.key("settings").value(static_cast<std::uint64_t>(m.settings));
    w.key("outcomes").value(static_cast<std::uint64_t>(m.outcomes));
    w.key("strategies").begin_array();
    for (std::size_t k = 0; k < m.tau.size(); ++k) {
      w.begin_object();
      w.key("assignment");
      write_assignment(w, space.strategy(k));
      w.key("weight").value(m.weight(k));
      w.key("tau").value(m.tau[k]);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    r.summary << "Unsteerable (" << (ab ? "A->B" : "B->A") << "): LHS model over " << m.tau.size()
              << " strategies within distance " << format_double(v.distance) << "\n";
  } else {
    r.code = exit_code::kSteerable;
    r.verdict = "Steerable";
    const auto& wt = *v.witness;
    w.key("certificate").begin_object();
    w.key("type").value("steering_witness");
    w.key("functionals").begin_array();
    for (std::size_t x = 0; x < wt.settings; ++x) {
      w.begin_array();
      for (std::size_t a = 0; a < wt.outcomes; ++a) w.value(wt.functional(a, x));
      w.end_array();
    }
    w.end_array();
    w.key("lhs_bound").value(wt.lhs_bound);
    w.key("value_on_target").value(wt.value_on_target);
    w.key("margin").value(wt.margin());
    w.end_object();
    r.summary << "Steerable (" << (ab ? "A->B" : "B->A") << "): witness value "
              << format_double(wt.value_on_target) << " exceeds LHS bound " << format_double(wt.lhs_bound)
              << "; distance to LHS set >= " << format_double(v.distance_lower_bound) << "\n";
  }
  w.key("residuals").begin_object();
  w.key("distance").value(v.distance);
  w.key("distance_lower_bound").value(v.distance_lower_bound);
  w.key("fw_gap").value(v.fw_gap);
  w.key("iterations").value(static_cast<std::uint64_t>(v.iterations));
  w.end_object();
}

void run_criterion(const Scene& s, TaskResult& r, JsonWriter& w) {
  const auto cert = criterion_disjoint_bases(s.state, s.alice[0], s.alice[1]);
  if (!cert) {
    r.code = exit_code::kOk;
    r.verdict = "NoCertificate";
    w.key("certificate").null();
    r.summary << "No certificate: the conditional states are not all rank one with disjoint directions "
                 "(this is not a claim of unsteerability)\n";
    return;
  }
  r.code = exit_code::kSteerable;
  r.verdict = "Steerable";
  w.key("certificate").begin_object();
  w.key("type").value("disjoint_bases");
  w.key("e").value(cert->e);
  w.key("f").value(cert->f);
  w.key("c").value(cert->c);
  w.key("d").value(cert->d);
  w.end_object();
  r.summary << "Steerable: every conditional state of P and Q is rank one and the two direction families are "
               "disjoint\n";
}

void run_construct(const Scene& s, TaskResult& r, JsonWriter& w) {
  const auto pair = steering_measurements_for_pure(s.state);
  r.code = exit_code::kOk;
  r.verdict = "Constructed";
  w.key("certificate").begin_object();
  w.key("type").value("measurement_pair");
  w.key("schmidt_coefficients").value(pair.schmidt_coefficients);
  w.key("rotation").value(pair.rotation);
  w.key("p");
  write_povm(w, pair.p);
  w.key("q");
  write_povm(w, pair.q);
  w.end_object();
  r.summary << "Constructed P, Q for Schmidt rank " << pair.schmidt_coefficients.size() << "\n";
}

std::string error_report(const Scene& s, const char* verdict, int code, const std::string& message,
                         const std::function<void(JsonWriter&)>& extra) {
  JsonWriter w;
  w.begin_object();
  w.key("schema").value(1);
  w.key("tool").value("lhvlab");
  w.key("version").value(kToolVersion);
  w.key("task").value(task_name(s.task));
  w.key("verdict").value(verdict);
  w.key("exit_code").value(code);
  write_parameters(w, s.params);
  w.key("error").value(message);
  if (extra) extra(w);
  w.end_object();
  return w.str() + "\n";
}

}  // namespace

RunOutcome run_scene(const Scene& scene) {
  RunOutcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    TaskResult r;
    JsonWriter body;
    body.begin_object();
    body.key("schema").value(1);
    body.key("tool").value("lhvlab");
    body.key("version").value(kToolVersion);
    body.key("task").value(task_name(scene.task));
    write_parameters(body, scene.params);
    body.key("result").begin_object();
    switch (scene.task) {
      case Task::Bell: run_bell(scene, r, body); break;
      case Task::SteerAB:
      case Task::SteerBA: run_steering(scene, r, body); break;
      case Task::Criterion: run_criterion(scene, r, body); break;
      case Task::ConstructMeasurements: run_construct(scene, r, body); break;
    }
    body.end_object();
    body.key("verdict").value(r.verdict);
    body.key("exit_code").value(r.code);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    body.key("wall_time_seconds").value(secs);
    body.end_object();
    out.exit_code = r.code;
    out.report = body.str() + "\n";
    out.summary = r.summary.str();
  } catch (const IndeterminateError& e) {
    out.exit_code = exit_code::kIndeterminate;
    out.report = error_report(scene, "Indeterminate", out.exit_code, e.what(), [&](JsonWriter& w) {
      w.key("distance").value(e.distance());
      w.key("fw_gap").value(e.gap());
    });
    out.summary = std::string("Indeterminate: ") + e.what() + "\n";
  } catch (const CapacityError& e) {
    out.exit_code = exit_code::kCapacity;
    out.report = error_report(scene, "CapacityExceeded", out.exit_code, e.what(), [&](JsonWriter& w) {
      w.key("required").value(static_cast<std::uint64_t>(e.required()));
      w.key("cap").value(static_cast<std::uint64_t>(e.cap()));
    });
    out.summary = std::string("Capacity exceeded: ") + e.what() + "\n";
  } catch (const NotEntangledError& e) {
    out.exit_code = exit_code::kInput;
    out.summary = std::string("input error: ") + e.what() + "\n";
  } catch (const DomainError& e) {
    out.exit_code = exit_code::kInput;
    out.summary = std::string("input error: ") + e.what() + "\n";
  } catch (const DimensionError& e) {
    out.exit_code = exit_code::kInput;
    out.summary = std::string("input error: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    out.exit_code = exit_code::kInternal;
    out.report = error_report(scene, "Error", out.exit_code, e.what(), {});
    out.summary = std::string("internal error: ") + e.what() + "\n";
  }
  return out;
}

int run_file(const std::string& scene_path, const std::optional<std::string>& out_path,
             const ParamOverrides& overrides, std::ostream& out, std::ostream& err) {
  std::optional<Scene> scene;
  try {
    scene = load_scene(scene_path);
  } catch (const SceneError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInput;
  }
  apply_overrides(scene->params, overrides);

  const RunOutcome r = run_scene(*scene);
  if (!r.report.empty()) {
    if (out_path) {
      std::ofstream f(*out_path, std::ios::binary);
      if (!f || !(f << r.report)) {
        err << "error: cannot write report to " << *out_path << "\n";
        return exit_code::kInternal;
      }
    } else {
      out << r.report;
    }
  }
  err << r.summary;
  return r.exit_code;
}

}  // namespace lhvlab::cli

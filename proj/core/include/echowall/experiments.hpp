#pragma once

/// Batch experiment drivers: Monte-Carlo pose sweeps measuring the fraction
/// of bad positions, and the bundled demonstration scenarios.

#include <cstdint>
#include <string>
#include <vector>

#include "echowall/detector.hpp"
#include "echowall/sampling.hpp"
#include "echowall/simulator.hpp"

namespace echowall {

enum class ScalarMode { kExact, kFloat };

/// A reproducible sweep: fixed seed implies byte-identical outputs.
struct ExperimentSpec {
  std::string scene_path;
  std::string config_path;  ///< optional override of the scene's mic block
  ScalarMode mode = ScalarMode::kExact;
  PoseSampler sampler;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
};

struct BadPoseExample {
  std::size_t index = 0;
  std::string pose_json;
  std::vector<std::vector<double>> ghost_mirrors;
};

struct MonteCarloResult {
  std::size_t n_poses = 0;
  std::size_t n_bad = 0;
  double bad_fraction = 0.0;
  std::vector<BadPoseExample> example_bad_poses;  ///< up to 10, smallest pose index first
  std::string csv;  ///< per-pose table, fixed column order
};

/// File-driven entry point used by the CLI.
MonteCarloResult montecarlo_bad_fraction(const ExperimentSpec& spec);

/// In-memory sweep over sampled poses; parallel over poses with
/// deterministic aggregation.
template <class S>
MonteCarloResult montecarlo_run(const Scene<S>& scene, const VehicleConfig<S>& config,
                                const PoseSampler& sampler, std::size_t samples,
                                std::uint64_t seed, const DetectOptions& dopt = {},
                                const EvalOptions& eopt = {});

std::string montecarlo_to_json(const MonteCarloResult& result);

/// Named demonstration scenes, rebuilt from scratch on every call and
/// verified against their defining claims (exact arithmetic):
///   fig_bad_stack           four horizontal walls deceiving the array; a
///                           ghost below the microphones is detected
///   fig_nonhorizontal_stack different speaker, inclined walls, the exact
///                           same mirror-point stack and ghost
///   fig_really_good         2D two-wall wedge whose mixed tuple passes the
///                           matching test yet no ghost is emitted
struct ScenarioResult {
  std::string name;
  std::string scene_json;        ///< scene + vehicle bundle
  std::string report_json;       ///< detection/evaluation report
  std::string certificate_json;  ///< stack certificate when applicable
  bool claim_holds = false;
  std::string claim;  ///< what was checked
};

ScenarioResult scenario(const std::string& name);

std::vector<std::string> scenario_names();

}  // namespace echowall

#include "echowall/experiments.hpp"

#include <sstream>

#include <json.hpp>

#include "echowall/parallel.hpp"
#include "echowall/scene_io.hpp"

namespace echowall {

using nlohmann::json;

namespace {

template <class S>
std::string csv_scalar(const S& v) {
  return scalar_traits<S>::to_string(v);
}

}  // namespace

template <class S>
MonteCarloResult montecarlo_run(const Scene<S>& scene, const VehicleConfig<S>& config,
                                const PoseSampler& sampler, std::size_t samples,
                                std::uint64_t seed, const DetectOptions& dopt,
                                const EvalOptions& eopt) {
  scene.validate();
  config.validate();
  if (scene.dimension == 2 && sampler.hover_range > 0.0)
    throw BadInput("hover offsets need a 3D scene");
  if (scene.dimension == 3 && scene.speaker_mode == SpeakerMode::kMounted)
    throw UnsupportedConfiguration("mounted loudspeaker is only supported in 2D scenes");

  struct Row {
    bool bad = false;
    int n_detected = 0;
    int n_ghosts = 0;
    std::string pose_fields;  // rot_c,rot_s,tx,ty,tz
    std::string pose_json;
    std::vector<std::vector<double>> ghost_mirrors;
  };
  std::vector<Row> rows(samples);

  SimOptions sopt;
  sopt.audibility = eopt.audibility;
  sopt.tol = dopt.tol;

  parallel_for(samples, [&](std::size_t i) {
    Rng rng = rng_for(seed, i);
    Pose<S> pose = sample_pose<S>(rng, sampler, scene.dimension);
    EchoRecord<S> rec = simulate_echoes(scene, config, pose, sopt);
    DetectResult<S> det = detect(squared_distances(rec), config.mics_at(pose),
                                 scene.speaker_at(pose, config), dopt);
    EvaluationReport<S> rep = evaluate(det.walls, scene, config, pose, eopt);

    Row& row = rows[i];
    row.bad = rep.is_bad_position;
    row.n_detected = static_cast<int>(det.walls.size());
    row.n_ghosts = static_cast<int>(rep.ghosts.size());
    std::ostringstream fields;
    fields << csv_scalar(pose.rot_c) << ',' << csv_scalar(pose.rot_s) << ','
           << csv_scalar(pose.tx) << ',' << csv_scalar(pose.ty) << ',' << csv_scalar(pose.tz);
    row.pose_fields = fields.str();
    if (row.bad) {
      row.pose_json = pose_to_json(pose);
      for (const DetectedWall<S>& g : rep.ghosts) {
        std::vector<double> m;
        for (int k = 0; k < g.mirror.dim(); ++k) m.push_back(to_double(g.mirror[k]));
        row.ghost_mirrors.push_back(std::move(m));
      }
    }
  });

  MonteCarloResult result;
  result.n_poses = samples;
  std::ostringstream csv;
  csv << "index,rot_c,rot_s,tx,ty,tz,n_detected,n_ghosts,bad\n";
  for (std::size_t i = 0; i < samples; ++i) {
    const Row& row = rows[i];
    if (row.bad) {
      ++result.n_bad;
      if (result.example_bad_poses.size() < 10)
        result.example_bad_poses.push_back(BadPoseExample{i, row.pose_json, row.ghost_mirrors});
    }
    csv << i << ',' << row.pose_fields << ',' << row.n_detected << ',' << row.n_ghosts << ','
        << (row.bad ? 1 : 0) << '\n';
  }
  result.bad_fraction = samples == 0 ? 0.0 : static_cast<double>(result.n_bad) / samples;
  result.csv = csv.str();
  return result;
}

template MonteCarloResult montecarlo_run<double>(const Scene<double>&, const VehicleConfig<double>&,
                                                 const PoseSampler&, std::size_t, std::uint64_t,
                                                 const DetectOptions&, const EvalOptions&);
template MonteCarloResult montecarlo_run<Rational>(const Scene<Rational>&,
                                                   const VehicleConfig<Rational>&,
                                                   const PoseSampler&, std::size_t, std::uint64_t,
                                                   const DetectOptions&, const EvalOptions&);

namespace {

template <class S>
MonteCarloResult run_from_files(const ExperimentSpec& spec) {
  SceneFile<S> file = load_scene_file<S>(spec.scene_path);
  VehicleConfig<S> config = file.config;
  if (!spec.config_path.empty()) {
    VehicleConfig<S> override_config = load_config_file<S>(spec.config_path);
    if (!override_config.speaker_offset) override_config.speaker_offset = config.speaker_offset;
    config = std::move(override_config);
  }
  return montecarlo_run<S>(file.scene, config, spec.sampler, spec.samples, spec.seed);
}

}  // namespace

MonteCarloResult montecarlo_bad_fraction(const ExperimentSpec& spec) {
  if (spec.samples < 1) throw BadInput("sample count must be at least 1");
  if (spec.mode == ScalarMode::kExact) return run_from_files<Rational>(spec);
  return run_from_files<double>(spec);
}

std::string montecarlo_to_json(const MonteCarloResult& result) {
  json examples = json::array();
  for (const BadPoseExample& e : result.example_bad_poses) {
    json ghosts = json::array();
    for (const auto& m : e.ghost_mirrors) ghosts.push_back(m);
    examples.push_back(json{{"index", e.index},
                            {"pose", e.pose_json.empty() ? json() : json::parse(e.pose_json)},
                            {"ghost_mirrors", std::move(ghosts)}});
  }
  json j{{"n_poses", result.n_poses},
         {"n_bad", result.n_bad},
         {"bad_fraction", result.bad_fraction},
         {"example_bad_poses", std::move(examples)}};
  return j.dump(2) + "\n";
}

}  // namespace echowall

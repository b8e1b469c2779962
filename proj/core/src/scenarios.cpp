#include <sstream>

#include "echowall/cayley_menger.hpp"
#include "echowall/experiments.hpp"
#include "echowall/scene_io.hpp"
#include "echowall/stacks.hpp"

namespace echowall {

namespace {

using Q = Rational;

Q q(long num, long den = 1) { return make_rational(num, den); }

/// Four microphones matching the sketch: three in the x-z plane at
/// heights 4, 5, 6 plus one off-plane at height 7, pairwise-distinct
/// heights so the stacked mirror points are pairwise distinct.
VehicleConfig<Q> sketch_vehicle() {
  VehicleConfig<Q> config;
  config.mic_offsets = {
      Vec<Q>(q(4), q(0), q(4)),
      Vec<Q>(q(8), q(0), q(5)),
      Vec<Q>(q(10), q(0), q(6)),
      Vec<Q>(q(6), q(3), q(7)),
  };
  config.validate();
  return config;
}

struct Pipeline {
  DetectResult<Q> det;
  EvaluationReport<Q> rep;
};

Pipeline run_pipeline(const Scene<Q>& scene, const VehicleConfig<Q>& config, const Pose<Q>& pose) {
  EchoRecord<Q> rec = simulate_echoes(scene, config, pose);
  DetectResult<Q> det = detect(squared_distances(rec), config.mics_at(pose),
                               scene.speaker_at(pose, config), DetectOptions{});
  EvaluationReport<Q> rep = evaluate(det.walls, scene, config, pose, EvalOptions{});
  return {std::move(det), std::move(rep)};
}

bool ghost_at(const EvaluationReport<Q>& rep, const Vec<Q>& expected) {
  for (const DetectedWall<Q>& g : rep.ghosts)
    if (g.mirror == expected) return true;
  return false;
}

ScenarioResult scenario_stack(const std::string& name, const Vec<Q>& speaker,
                              bool expect_horizontal) {
  VehicleConfig<Q> config = sketch_vehicle();
  Pose<Q> pose = Pose<Q>::identity();

  StackScene<Q> built = make_stack(config, pose, q(7), q(0), q(8), speaker);
  Pipeline pipe = run_pipeline(built.scene, config, pose);

  const Vec<Q> expected_ghost(q(7), q(0), q(0));
  bool ghost_found = ghost_at(pipe.rep, expected_ghost);
  bool ghost_below = true;
  for (const Vec<Q>& m : config.mic_offsets)
    if (!(expected_ghost.z() < m.z())) ghost_below = false;

  bool horizontal = true;
  for (const Wall<Q>& w : built.scene.walls) {
    // A horizontal wall has normal proportional to e_z: x and y parts zero.
    if (!scalar_traits<Q>::is_zero(w.plane.normal().x()) ||
        !scalar_traits<Q>::is_zero(w.plane.normal().y()))
      horizontal = false;
  }

  bool all_true_walls_found = pipe.rep.missed.empty();

  ScenarioResult out;
  out.name = name;
  out.scene_json = scene_to_json(built.scene, config);
  out.report_json = report_to_json(pipe.rep);
  out.certificate_json = certificate_to_json(built.certificate);
  out.claim_holds = pipe.rep.is_bad_position && ghost_found && ghost_below &&
                    all_true_walls_found && (horizontal == expect_horizontal) &&
                    built.certificate.ghost == expected_ghost;
  std::ostringstream claim;
  claim << "deceptive stack with " << (expect_horizontal ? "horizontal" : "inclined")
        << " walls: ghost mirror at (7, 0, 0) below every microphone, all real walls still found";
  out.claim = claim.str();
  return out;
}

ScenarioResult scenario_really_good() {
  // Two walls meeting at (4, 0), symmetric about the x-axis; the first
  // microphone sits on the symmetry axis so both echoes coincide there.
  Vec<Q> wall_tip(q(4), q(0));
  Plane<Q> w1(Vec<Q>(q(3), q(-5)), wall_tip);
  Plane<Q> w2(Vec<Q>(q(3), q(5)), wall_tip);

  Scene<Q> scene;
  scene.dimension = 2;
  scene.walls = {Wall<Q>{w1, std::nullopt}, Wall<Q>{w2, std::nullopt}};
  scene.speaker_mode = SpeakerMode::kFixed;
  scene.speaker_position = Vec<Q>(q(0), q(0));
  scene.validate();

  VehicleConfig<Q> config;
  config.mic_offsets = {
      Vec<Q>(q(1), q(0)),
      Vec<Q>(q(-3, 2), q(1)),
      Vec<Q>(q(-3, 2), q(-1)),
  };
  config.validate();

  Pose<Q> pose = Pose<Q>::identity();
  std::vector<Vec<Q>> mics = config.mics_at(pose);
  Vec<Q> s1 = mirror_point(w1, scene.speaker_position);
  Vec<Q> s2 = mirror_point(w2, scene.speaker_position);

  // The mixed tuple: wall-2 echo at microphone 1, wall-1 echoes elsewhere.
  std::vector<Q> mixed = {(s2 - mics[0]).norm2(), (s1 - mics[1]).norm2(), (s1 - mics[2]).norm2()};
  MicGram<Q> gram = MicGram<Q>::from_points(mics);
  bool mixed_passes = scalar_traits<Q>::is_zero(cm_det(mixed, gram));
  bool coincide = (s1 - mics[0]).norm2() == (s2 - mics[0]).norm2();

  EchoRecord<Q> rec = simulate_echoes(scene, config, pose);
  bool merged = rec.range2.at(0).size() == 1;

  Pipeline pipe = run_pipeline(scene, config, pose);
  bool both_found = pipe.rep.true_walls_found.size() == 2 && pipe.rep.missed.empty();

  ScenarioResult out;
  out.name = "fig_really_good";
  out.scene_json = scene_to_json(scene, config);
  out.report_json = report_to_json(pipe.rep);
  out.claim_holds = mixed_passes && coincide && merged && both_found && pipe.rep.ghosts.empty() &&
                    !pipe.rep.is_bad_position;
  out.claim =
      "wedge scene: both wall echoes reach microphone 1 simultaneously, the mixed tuple "
      "passes the matching test, yet both walls are recovered and no ghost is emitted";
  return out;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"fig_bad_stack", "fig_nonhorizontal_stack", "fig_really_good"};
}

ScenarioResult scenario(const std::string& name) {
  if (name == "fig_bad_stack")
    return scenario_stack(name, Vec<Q>(q(7), q(0), q(2)), /*expect_horizontal=*/true);
  if (name == "fig_nonhorizontal_stack")
    return scenario_stack(name, Vec<Q>(q(6), q(0), q(7, 2)), /*expect_horizontal=*/false);
  if (name == "fig_really_good") return scenario_really_good();
  throw BadInput("unknown scenario: " + name +
                 " (expected fig_bad_stack | fig_nonhorizontal_stack | fig_really_good)");
}

}  // namespace echowall

#include <doctest.h>

#include "echowall/simulator.hpp"
#include "test_support.hpp"

using namespace echowall;
using namespace echowall_test;
using Q = Rational;

namespace {

Q q(long num, long den = 1) { return make_rational(num, den); }

Scene<Q> single_wall_scene() {
  Scene<Q> scene;
  scene.dimension = 3;
  scene.walls = {Wall<Q>{Plane<Q>(Vec<Q>(q(0), q(0), q(1)), Vec<Q>(q(0), q(0), q(5))), std::nullopt}};
  scene.speaker_position = Vec<Q>(q(0), q(0), q(0));
  scene.sound_speed = q(1);
  scene.emission_time = q(0);
  return scene;
}

VehicleConfig<Q> mic_at_origin_config() {
  VehicleConfig<Q> config;
  config.mic_offsets = {Vec<Q>(q(0), q(0), q(0)), Vec<Q>(q(1), q(0), q(0)),
                        Vec<Q>(q(0), q(1), q(0)), Vec<Q>(q(0), q(0), q(1))};
  return config;
}

Scene<Q> wedge_scene_2d() {
  Vec<Q> tip(q(4), q(0));
  Scene<Q> scene;
  scene.dimension = 2;
  scene.walls = {Wall<Q>{Plane<Q>(Vec<Q>(q(3), q(-5)), tip), std::nullopt},
                 Wall<Q>{Plane<Q>(Vec<Q>(q(3), q(5)), tip), std::nullopt}};
  scene.speaker_position = Vec<Q>(q(0), q(0));
  return scene;
}

VehicleConfig<Q> wedge_config_2d() {
  VehicleConfig<Q> config;
  config.mic_offsets = {Vec<Q>(q(1), q(0)), Vec<Q>(q(-3, 2), q(1)), Vec<Q>(q(-3, 2), q(-1))};
  return config;
}

}  // namespace

TEST_CASE("single wall, unit sound speed: one echo at t = 10") {
  Scene<Q> scene = single_wall_scene();
  VehicleConfig<Q> config = mic_at_origin_config();
  EchoRecord<Q> rec = simulate_echoes(scene, config, Pose<Q>::identity());
  REQUIRE(rec.range2.size() == 4);
  REQUIRE(rec.range2[0].size() == 1);
  CHECK(rec.range2[0][0] == q(100));  // mirror at (0,0,10), distance 10
  CHECK(rec.times_seconds()[0][0] == doctest::Approx(10.0));
}

TEST_CASE("squared distances follow the emission-time formula") {
  EchoRecord<Q> a = EchoRecord<Q>::from_times({{10.0}}, 0.0, 1.0);
  CHECK(squared_distances(a)[0][0] == q(100));
  EchoRecord<Q> b = EchoRecord<Q>::from_times({{3.0}}, 1.0, 2.0);
  CHECK(squared_distances(b)[0][0] == q(16));
  CHECK_THROWS_AS(EchoRecord<Q>::from_times({{0.5}}, 1.0, 2.0), BadInput);
}

TEST_CASE("wedge scene merges the on-axis microphone's two arrivals") {
  Scene<Q> scene = wedge_scene_2d();
  VehicleConfig<Q> config = wedge_config_2d();
  EchoRecord<Q> rec = simulate_echoes(scene, config, Pose<Q>::identity());
  CHECK(rec.range2[0].size() == 1);  // both wall echoes coincide on the axis
  CHECK(rec.range2[1].size() == 2);
  CHECK(rec.range2[2].size() == 2);
}

TEST_CASE("forward/backward exactness on random scenes") {
  Rng rng = rng_for(2001, 0);
  for (int i = 0; i < 50; ++i) {
    RandomSceneOptions opt;
    opt.n_walls = 3;
    RandomScene<Q> rs = random_scene<Q>(rng, opt);
    PoseSampler sampler;
    Pose<Q> pose = sample_pose<Q>(rng, sampler, 3);
    EchoRecord<Q> rec = simulate_echoes(rs.scene, rs.config, pose);
    std::vector<Vec<Q>> mics = rs.config.mics_at(pose);

    for (size_t m = 0; m < mics.size(); ++m) {
      CHECK(rec.range2[m].size() == 3);  // generic: all distances distinct
      std::vector<Q> expected;
      for (const Wall<Q>& w : rs.scene.walls)
        expected.push_back((mirror_point(w.plane, rs.scene.speaker_position) - mics[m]).norm2());
      std::sort(expected.begin(), expected.end());
      CHECK(rec.range2[m] == expected);
    }
  }
}

TEST_CASE("echo count collapses when two mirror distances coincide") {
  // Two horizontal walls above and below, microphone exactly between the
  // mirror images.
  Scene<Q> scene;
  scene.dimension = 3;
  scene.walls = {
      Wall<Q>{Plane<Q>(Vec<Q>(q(0), q(0), q(1)), Vec<Q>(q(0), q(0), q(2))), std::nullopt},
      Wall<Q>{Plane<Q>(Vec<Q>(q(0), q(0), q(1)), Vec<Q>(q(0), q(0), q(-2))), std::nullopt},
  };
  scene.speaker_position = Vec<Q>(q(0), q(0), q(0));
  VehicleConfig<Q> config = mic_at_origin_config();
  EchoRecord<Q> rec = simulate_echoes(scene, config, Pose<Q>::identity());
  CHECK(rec.range2[0].size() == 1);  // mirrors at z = +-4, equidistant from origin
  CHECK(rec.range2[1].size() == 1);  // still equidistant after moving in x
  CHECK(rec.range2[3].size() == 2);  // off-center in z: distances split
}

TEST_CASE("record is invariant under translating scene and pose together") {
  Rng rng = rng_for(2002, 0);
  RandomSceneOptions opt;
  opt.n_walls = 3;
  RandomScene<Q> rs = random_scene<Q>(rng, opt);
  PoseSampler sampler;
  Pose<Q> pose = sample_pose<Q>(rng, sampler, 3);
  EchoRecord<Q> base = simulate_echoes(rs.scene, rs.config, pose);

  Vec<Q> shift(q(3), q(-2), q(0));
  Scene<Q> moved = rs.scene;
  moved.speaker_position = moved.speaker_position + shift;
  moved.walls.clear();
  for (const Wall<Q>& w : rs.scene.walls)
    moved.walls.push_back(Wall<Q>{Plane<Q>(w.plane.normal(), w.plane.anchor() + shift), std::nullopt});
  Pose<Q> translated = pose;
  translated.tx = translated.tx + shift.x();
  translated.ty = translated.ty + shift.y();

  EchoRecord<Q> after = simulate_echoes(moved, rs.config, translated);
  CHECK(after.range2 == base.range2);
}

TEST_CASE("audibility: footprint containment of the specular point") {
  // Unit square footprint on the plane z = 5.
  Wall<Q> wall{Plane<Q>(Vec<Q>(q(0), q(0), q(1)), Vec<Q>(q(0), q(0), q(5))),
               WallExtent<Q>{Vec<Q>(q(0), q(0), q(5)),
                             {Vec<Q>(q(1), q(0), q(0)), Vec<Q>(q(0), q(1), q(0))}}};
  Vec<Q> speaker(q(1, 2), q(1, 2), q(0));
  CHECK(audible(wall, speaker, Vec<Q>(q(1, 2), q(1, 2), q(1))));   // straight above center
  CHECK_FALSE(audible(wall, speaker, Vec<Q>(q(100), q(1, 2), q(1))));  // exits the footprint
  CHECK(audible(wall, speaker, Vec<Q>(q(3, 2), q(1, 2), q(0))));   // specular point on the edge

  Wall<Q> infinite{wall.plane, std::nullopt};
  CHECK(audible(infinite, speaker, Vec<Q>(q(100), q(1, 2), q(1))));

  // Microphone on the far side of the wall: no first-order path.
  CHECK_FALSE(audible(wall, speaker, Vec<Q>(q(1, 2), q(1, 2), q(11))));
}

TEST_CASE("finite walls drop inaudible echoes from the record") {
  Scene<Q> scene;
  scene.dimension = 3;
  scene.walls = {Wall<Q>{Plane<Q>(Vec<Q>(q(0), q(0), q(1)), Vec<Q>(q(0), q(0), q(5))),
                         WallExtent<Q>{Vec<Q>(q(0), q(0), q(5)),
                                       {Vec<Q>(q(1), q(0), q(0)), Vec<Q>(q(0), q(1), q(0))}}}};
  scene.speaker_position = Vec<Q>(q(1, 2), q(1, 2), q(0));
  VehicleConfig<Q> config = mic_at_origin_config();

  SimOptions on;
  EchoRecord<Q> rec = simulate_echoes(scene, config, Pose<Q>::identity(), on);
  CHECK(rec.range2[0].size() == 1);  // specular point (1/4, 1/4, 5): inside

  Pose<Q> far = Pose<Q>::identity();
  far.tx = q(3);  // moves every specular point beyond x = 1
  EchoRecord<Q> silent = simulate_echoes(scene, config, far, on);
  for (const auto& mic : silent.range2) CHECK(mic.size() == 0);

  SimOptions off;
  off.audibility = false;
  EchoRecord<Q> all = simulate_echoes(scene, config, far, off);
  for (const auto& mic : all.range2) CHECK(mic.size() == 1);
}

TEST_CASE("speaker on a wall plane is rejected") {
  Scene<Q> scene = single_wall_scene();
  scene.speaker_position = Vec<Q>(q(1), q(2), q(5));  // on z = 5
  CHECK_THROWS_AS(scene.validate(), DegenerateMirror);
  CHECK_THROWS_AS(simulate_echoes(scene, mic_at_origin_config(), Pose<Q>::identity()),
                  DegenerateMirror);
}

TEST_CASE("mounted speaker moves with the pose; 3D mounts are refused") {
  Scene<Q> scene2d = wedge_scene_2d();
  scene2d.speaker_mode = SpeakerMode::kMounted;
  VehicleConfig<Q> config = wedge_config_2d();
  config.speaker_offset = Vec<Q>(q(1, 4), q(0));

  Pose<Q> pose = Pose<Q>::from_circle_param(q(1, 3), q(1), q(-2));
  CHECK(scene2d.speaker_at(pose, config) == apply_pose(pose, *config.speaker_offset));

  Scene<Q> scene3d = single_wall_scene();
  scene3d.speaker_mode = SpeakerMode::kMounted;
  CHECK_THROWS_AS(scene3d.validate(), UnsupportedConfiguration);
}

TEST_CASE("float simulation rounds like a measurement") {
  Scene<double> scene;
  scene.dimension = 3;
  scene.walls = {
      Wall<double>{Plane<double>(Vec<double>(0, 0, 1), Vec<double>(0, 0, 5)), std::nullopt}};
  scene.speaker_position = Vec<double>(0.3, 0.4, 0.0);
  scene.sound_speed = 343.0;
  VehicleConfig<double> config;
  config.mic_offsets = {Vec<double>(0, 0, 0), Vec<double>(0.5, 0, 0), Vec<double>(0, 0.5, 0),
                        Vec<double>(0, 0, 0.5)};
  EchoRecord<double> rec = simulate_echoes(scene, config, Pose<double>::identity());
  Vec<double> mirror = mirror_point(scene.walls[0].plane, scene.speaker_position);
  double exact_d2 = (mirror - config.mic_offsets[0]).norm2();
  CHECK(rec.range2[0][0] == doctest::Approx(exact_d2).epsilon(1e-12));
}

// Acceptance suite: one verdict line per criterion, nonzero exit if any
// criterion fails or overruns its time budget. Every zero assertion below
// runs in exact rational arithmetic unless the criterion is explicitly
// about the float pipeline.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "echowall/cayley_menger.hpp"
#include "echowall/detector.hpp"
#include "echowall/experiments.hpp"
#include "echowall/sampling.hpp"
#include "echowall/scene_io.hpp"
#include "echowall/simulator.hpp"
#include "echowall/stacks.hpp"

using namespace echowall;
using Q = Rational;

namespace {

Q q(long num, long den = 1) { return make_rational(num, den); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

Vec<Q> random_point_q(Rng& rng, int dim, long box = 8, int den_bits = 20) {
  Vec<Q> p(dim);
  for (int k = 0; k < dim; ++k) p[k] = random_rational(rng, box, den_bits);
  return p;
}

std::vector<Vec<Q>> random_mics_q(Rng& rng, int dim) {
  for (;;) {
    std::vector<Vec<Q>> mics;
    for (int i = 0; i < dim + 1; ++i) mics.push_back(random_point_q(rng, dim, 4));
    if (affine_rank(mics) == dim) return mics;
  }
}

// ---------------------------------------------------------------------------
// 1. Matched tuples vanish exactly: 10^4 random rational scenes.
Outcome criterion_matched_vanishing() {
  Rng rng = rng_for(101, 0);
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    std::vector<Vec<Q>> mics = random_mics_q(rng, 3);
    Vec<Q> source = random_point_q(rng, 3);
    std::vector<Q> u;
    for (const Vec<Q>& m : mics) u.push_back((source - m).norm2());
    if (!scalar_traits<Q>::is_zero(cm_det(u, MicGram<Q>::from_points(mics))))
      return {false, "nonzero determinant at trial " + std::to_string(i)};
  }
  return {true, std::to_string(trials) + "/" + std::to_string(trials) + " exact zeros"};
}

// ---------------------------------------------------------------------------
// 2. Degree-8 homogeneity under alpha in {2, 3, 1/2}: 10^3 random instances.
Outcome criterion_homogeneity() {
  Rng rng = rng_for(102, 0);
  const int trials = 1000;
  const Q alphas[] = {q(2), q(3), q(1, 2)};
  for (int i = 0; i < trials; ++i) {
    std::vector<Vec<Q>> mics = random_mics_q(rng, 3);
    MicGram<Q> gram = MicGram<Q>::from_points(mics);
    std::vector<Q> u(4);
    for (Q& v : u) v = random_rational(rng, 60) + Q(70);
    Q base = cm_det(u, gram);
    for (const Q& alpha : alphas) {
      Q a2 = alpha * alpha;
      std::vector<Q> su(4);
      for (int k = 0; k < 4; ++k) su[static_cast<size_t>(k)] = a2 * u[static_cast<size_t>(k)];
      std::vector<Vec<Q>> smics;
      for (const Vec<Q>& m : mics) smics.push_back(m * alpha);
      Q expect = a2 * a2 * a2 * a2 * base;
      if (!(cm_det(su, MicGram<Q>::from_points(smics)) == expect))
        return {false, "scaling identity failed at trial " + std::to_string(i)};
    }
  }
  return {true, std::to_string(trials) + " instances x 3 scale factors, all exact"};
}

// ---------------------------------------------------------------------------
// 3. Completeness: every audible wall recovered with its exact mirror point.
Outcome criterion_completeness() {
  Rng rng = rng_for(103, 0);
  const int trials = 1000;
  PoseSampler sampler;
  for (int i = 0; i < trials; ++i) {
    RandomSceneOptions opt;
    opt.n_walls = 3;
    RandomScene<Q> rs = random_scene<Q>(rng, opt);
    Pose<Q> pose = sample_pose<Q>(rng, sampler, 3);
    std::vector<Vec<Q>> mics = rs.config.mics_at(pose);

    EchoRecord<Q> rec = simulate_echoes(rs.scene, rs.config, pose);
    DetectResult<Q> det = detect(squared_distances(rec), mics, rs.scene.speaker_position);
    for (const Wall<Q>& w : rs.scene.walls) {
      Vec<Q> s = mirror_point(w.plane, rs.scene.speaker_position);
      bool found = false;
      for (const DetectedWall<Q>& d : det.walls)
        if (d.mirror == s && d.plane == w.plane) found = true;
      if (!found) return {false, "missed wall in scene " + std::to_string(i)};
    }
  }
  return {true, std::to_string(trials) + " scenes, every wall exactly recovered"};
}

// ---------------------------------------------------------------------------
// Shared driver for criteria 4 and 5.
Outcome shadow_sweep(double hover_range, std::uint64_t seed) {
  Rng rng = rng_for(seed, 0);
  const int n_scenes = 10;
  const std::size_t n_poses = 1000;
  std::size_t total_bad = 0;
  for (int s = 0; s < n_scenes; ++s) {
    RandomSceneOptions opt;
    opt.n_walls = 4;
    RandomScene<Q> rs = random_scene<Q>(rng, opt);
    // Stack-freeness is pose-invariant for this group: microphone height
    // gaps do not change under planar motion or joint vertical shifts.
    if (check_stack(rs.scene, rs.config, Pose<Q>::identity()))
      return {false, "sampled a stacked arrangement (resample the seed)"};
    PoseSampler sampler;
    sampler.hover_range = hover_range;
    MonteCarloResult result =
        montecarlo_run<Q>(rs.scene, rs.config, sampler, n_poses, seed + 1 + s);
    total_bad += result.n_bad;
    if (result.n_bad != 0)
      return {false, "scene " + std::to_string(s) + ": " + std::to_string(result.n_bad) +
                         " bad poses"};
  }
  std::ostringstream detail;
  detail << n_scenes << " scenes x " << n_poses << " poses, bad_fraction = 0 exactly";
  return {total_bad == 0, detail.str()};
}

Outcome criterion_ground_shadow() { return shadow_sweep(0.0, 104); }
Outcome criterion_hover_shadow() { return shadow_sweep(2.0, 105); }

// ---------------------------------------------------------------------------
// 6. Stack persistence over an 11x11x11 pose grid, ghost recovered exactly.
Outcome criterion_stack_persistence() {
  Rng rng = rng_for(106, 0);
  VehicleConfig<Q> config = vehicle_with_z_levels<Q>(rng, 4);
  Vec<Q> speaker(q(5), q(-3), q(2));
  StackScene<Q> built = make_stack(config, Pose<Q>::identity(), q(1), q(2), q(4), speaker);

  std::size_t checked = 0;
  for (int a = -5; a <= 5; ++a) {
    for (int b = -5; b <= 5; ++b) {
      for (int c = -5; c <= 5; ++c) {
        Pose<Q> pose = Pose<Q>::from_circle_param(q(a, 25), q(b, 8), q(c, 8));
        EchoRecord<Q> rec = simulate_echoes(built.scene, config, pose);
        DetectResult<Q> det = detect(squared_distances(rec), config.mics_at(pose), speaker);
        EvaluationReport<Q> rep = evaluate(det.walls, built.scene, config, pose);
        bool ghost_exact = false;
        for (const DetectedWall<Q>& g : rep.ghosts)
          if (g.mirror == built.certificate.ghost) ghost_exact = true;
        if (!rep.is_bad_position || !ghost_exact) {
          std::ostringstream detail;
          detail << "grid point (" << a << "," << b << "," << c << ") not deceived";
          return {false, detail.str()};
        }
        ++checked;
      }
    }
  }
  return {true, "ghost detected with exact mirror point at all " + std::to_string(checked) +
                    " grid poses"};
}

// ---------------------------------------------------------------------------
// 7. The wedge scene: a passing mixed tuple but an empty ghost list.
Outcome criterion_wedge() {
  ScenarioResult result = scenario("fig_really_good");
  if (!result.claim_holds) return {false, "scenario claim failed"};
  return {true, "mixed tuple vanishes, report shows two walls and zero ghosts"};
}

// ---------------------------------------------------------------------------
// 8. 2D sweeps with fixed and mounted speakers.
Outcome criterion_planar_shadow() {
  const int n_scenes = 10;
  const std::size_t n_poses = 1000;
  for (int mounted = 0; mounted <= 1; ++mounted) {
    Rng rng = rng_for(108 + mounted, 0);
    for (int s = 0; s < n_scenes; ++s) {
      RandomSceneOptions opt;
      opt.dimension = 2;
      opt.n_walls = 3;
      opt.mounted_speaker = mounted == 1;
      RandomScene<Q> rs = random_scene<Q>(rng, opt);
      PoseSampler sampler;
      MonteCarloResult result =
          montecarlo_run<Q>(rs.scene, rs.config, sampler, n_poses, 200 + s);
      if (result.n_bad != 0)
        return {false, std::string(mounted ? "mounted" : "fixed") + " scene " +
                           std::to_string(s) + ": " + std::to_string(result.n_bad) + " bad"};
    }
  }
  return {true, "10 fixed + 10 mounted scenes x 1000 poses, zero ghosts"};
}

// ---------------------------------------------------------------------------
// 9. Stacks are vanishingly rare generically, and the 3-parameter
//    construction certifies every time.
Outcome criterion_stack_rarity() {
  CodimSummary summary = codim_experiment<Q>(4, 10000, 109);
  if (summary.generic_stacks_found != 0)
    return {false, std::to_string(summary.generic_stacks_found) + " stacks in generic draws"};
  if (summary.constructed_certified != summary.constructed_samples)
    return {false, "constructive family failed to certify"};
  if (summary.param_count != 3) return {false, "unexpected parameter count"};
  std::ostringstream detail;
  detail << summary.generic_samples << " generic arrangements: 0 stacks; "
         << summary.constructed_samples << "/" << summary.constructed_samples
         << " constructed stacks certified; 3 free parameters";
  return {true, detail.str()};
}

// ---------------------------------------------------------------------------
// 10. Float pipeline reproduces the exact plane sets at default thresholds.
template <class SceneT>
Scene<double> scene_to_float(const SceneT& scene) {
  Scene<double> out;
  out.dimension = scene.dimension;
  out.speaker_mode = scene.speaker_mode;
  if (scene.speaker_mode == SpeakerMode::kFixed)
    out.speaker_position = scene.speaker_position.to_double_vec();
  out.sound_speed = to_double(scene.sound_speed);
  out.emission_time = to_double(scene.emission_time);
  for (const Wall<Q>& w : scene.walls)
    out.walls.push_back(Wall<double>{
        Plane<double>(w.plane.normal().to_double_vec(), w.plane.anchor().to_double_vec()),
        std::nullopt});
  return out;
}

Outcome criterion_float_consistency() {
  Rng rng = rng_for(110, 0);
  const int trials = 100;
  double worst_mirror_err = 0.0;

  for (int i = 0; i < trials; ++i) {
    RandomSceneOptions opt;
    opt.n_walls = 3;
    RandomScene<Q> rs = random_scene<Q>(rng, opt);
    Pose<Q> pose = Pose<Q>::identity();
    EchoRecord<Q> rec = simulate_echoes(rs.scene, rs.config, pose);
    DetectResult<Q> det =
        detect(squared_distances(rec), rs.config.mics_at(pose), rs.scene.speaker_position);

    Scene<double> fscene = scene_to_float(rs.scene);
    VehicleConfig<double> fconfig;
    for (const Vec<Q>& m : rs.config.mic_offsets) fconfig.mic_offsets.push_back(m.to_double_vec());
    Pose<double> fpose = Pose<double>::identity();
    EchoRecord<double> frec = simulate_echoes(fscene, fconfig, fpose);
    DetectResult<double> fdet = detect(squared_distances(frec), fconfig.mics_at(fpose),
                                       fscene.speaker_position);

    if (fdet.walls.size() != det.walls.size())
      return {false, "plane-set size mismatch at scene " + std::to_string(i) + ": exact " +
                         std::to_string(det.walls.size()) + ", float " +
                         std::to_string(fdet.walls.size())};
    for (const DetectedWall<Q>& d : det.walls) {
      double best = 1e300;
      for (const DetectedWall<double>& f : fdet.walls)
        best = std::min(best, f.mirror.distance_inf(d.mirror.to_double_vec()));
      worst_mirror_err = std::max(worst_mirror_err, best);
      if (best >= 1e-9)
        return {false, "mirror error " + std::to_string(best) + " at scene " + std::to_string(i)};
    }
  }

  // The stack scene of criterion 6, rendered in floats: exactly the same
  // ghost must appear, and nothing else.
  Rng rng6 = rng_for(106, 0);
  VehicleConfig<Q> config = vehicle_with_z_levels<Q>(rng6, 4);
  Vec<Q> speaker(q(5), q(-3), q(2));
  StackScene<Q> built = make_stack(config, Pose<Q>::identity(), q(1), q(2), q(4), speaker);
  EchoRecord<Q> rec = simulate_echoes(built.scene, config, Pose<Q>::identity());
  DetectResult<Q> det =
      detect(squared_distances(rec), config.mics_at(Pose<Q>::identity()), speaker);

  Scene<double> fstack = scene_to_float(built.scene);
  VehicleConfig<double> fconfig;
  for (const Vec<Q>& m : config.mic_offsets) fconfig.mic_offsets.push_back(m.to_double_vec());
  EchoRecord<double> frec = simulate_echoes(fstack, fconfig, Pose<double>::identity());
  DetectResult<double> fdet = detect(squared_distances(frec),
                                     fconfig.mics_at(Pose<double>::identity()),
                                     fstack.speaker_position);
  if (fdet.walls.size() != det.walls.size())
    return {false, "stack scene: float detected " + std::to_string(fdet.walls.size()) +
                       " walls, exact " + std::to_string(det.walls.size())};
  double ghost_err = 1e300;
  for (const DetectedWall<double>& f : fdet.walls)
    ghost_err = std::min(ghost_err,
                         f.mirror.distance_inf(built.certificate.ghost.to_double_vec()));
  if (ghost_err >= 1e-9) return {false, "float stack ghost off by " + std::to_string(ghost_err)};

  std::ostringstream detail;
  detail << trials << " scenes + stack scene: plane sets identical, worst mirror error "
         << worst_mirror_err;
  return {true, detail.str()};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "matched-tuple vanishing", 30, criterion_matched_vanishing},
      {2, "degree-8 homogeneity", 10, criterion_homogeneity},
      {3, "detection completeness", 60, criterion_completeness},
      {4, "ground sweep: zero bad poses", 300, criterion_ground_shadow},
      {5, "hover sweep: zero bad poses", 300, criterion_hover_shadow},
      {6, "stack persistence on the pose grid", 60, criterion_stack_persistence},
      {7, "wedge scene: no ghost from the mixed tuple", 1, criterion_wedge},
      {8, "planar sweeps, fixed and mounted speaker", 120, criterion_planar_shadow},
      {9, "stack rarity vs the constructive family", 30, criterion_stack_rarity},
      {10, "float-mode consistency", 60, criterion_float_consistency},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = elapsed < c.budget_s;
    bool pass = outcome.pass && in_budget;
    if (!pass) ++failures;
    std::printf("[%s] %2d %s: %s (%.2f s, budget %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id,
                c.name, outcome.detail.c_str(), elapsed, c.budget_s,
                in_budget ? "" : " [over budget]");
    std::fflush(stdout);
  }
  if (failures == 0) {
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
  }
  std::printf("%d criteria FAILED\n", failures);
  return 1;
}

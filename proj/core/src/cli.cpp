#include "echowall/cli.hpp"

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "echowall/experiments.hpp"
#include "echowall/scene_io.hpp"
#include "echowall/stacks.hpp"

namespace echowall {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitUnsupported = 3;

struct PoseFlags {
  std::string rot_t;  // rational circle parameter
  bool half_turn = false;
  std::optional<double> theta;
  std::string tx = "0", ty = "0", tz = "0";
};

void add_pose_flags(CLI::App* cmd, PoseFlags& flags) {
  cmd->add_option("--rot-t", flags.rot_t,
                  "rotation as rational circle parameter t -> ((1-t^2)/(1+t^2), 2t/(1+t^2))");
  cmd->add_flag("--half-turn", flags.half_turn, "compose the rotation with a half turn");
  cmd->add_option("--theta", flags.theta, "rotation angle in radians (float mode only)");
  cmd->add_option("--tx", flags.tx, "translation x (meters; rationals allowed in exact mode)");
  cmd->add_option("--ty", flags.ty, "translation y");
  cmd->add_option("--tz", flags.tz, "vertical offset (hover); 0 for ground poses");
}

template <class S>
Pose<S> pose_from_flags(const PoseFlags& flags) {
  S tx, ty, tz;
  if constexpr (scalar_traits<S>::exact) {
    tx = parse_rational(flags.tx);
    ty = parse_rational(flags.ty);
    tz = parse_rational(flags.tz);
    if (flags.theta)
      throw BadInput("--theta is float-mode only; use --rot-t for exact rotations");
  } else {
    tx = parse_rational(flags.tx).get_d();
    ty = parse_rational(flags.ty).get_d();
    tz = parse_rational(flags.tz).get_d();
  }
  if (flags.theta) {
    if constexpr (!scalar_traits<S>::exact)
      return Pose<double>::from_angle(*flags.theta, tx, ty, tz);
  }
  S t = S(0);
  if (!flags.rot_t.empty()) {
    if constexpr (scalar_traits<S>::exact)
      t = parse_rational(flags.rot_t);
    else
      t = parse_rational(flags.rot_t).get_d();
  }
  return Pose<S>::from_circle_param(t, std::move(tx), std::move(ty), std::move(tz),
                                    flags.half_turn);
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty())
    out << text;
  else
    write_text_file(out_path, text);
}

template <class S>
VehicleConfig<S> resolve_config(const SceneFile<S>& file, const std::string& config_path) {
  if (config_path.empty()) return file.config;
  VehicleConfig<S> config = load_config_file<S>(config_path);
  if (!config.speaker_offset) config.speaker_offset = file.config.speaker_offset;
  return config;
}

struct CommonFlags {
  std::string scene_path;
  std::string config_path;
  std::string mode = "exact";
  std::string out_path;
  double threshold = Tolerances{}.match_residual;
  std::string audibility = "on";
  bool prune = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool needs_scene = true) {
  auto* scene = cmd->add_option("--scene", flags.scene_path, "scene file (JSON)");
  if (needs_scene) scene->required();
  cmd->add_option("--config", flags.config_path, "vehicle config override file (JSON)");
  cmd->add_option("--mode", flags.mode, "arithmetic mode: exact | float")
      ->check(CLI::IsMember({"exact", "float"}));
  cmd->add_option("--out", flags.out_path, "output path (default: stdout)");
  cmd->add_option("--threshold", flags.threshold, "float-mode matching residual threshold");
  cmd->add_option("--audibility", flags.audibility, "honor finite wall footprints: on | off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_flag("--prune", flags.prune, "enable the triangle-inequality tuple prune");
}

template <class S>
int do_simulate(const CommonFlags& common, const PoseFlags& pose_flags, std::ostream& out) {
  SceneFile<S> file = load_scene_file<S>(common.scene_path);
  VehicleConfig<S> config = resolve_config(file, common.config_path);
  Pose<S> pose = pose_from_flags<S>(pose_flags);
  SimOptions sopt;
  sopt.audibility = common.audibility == "on";
  EchoRecord<S> rec = simulate_echoes(file.scene, config, pose, sopt);
  emit(echo_record_to_json(rec), common.out_path, out);
  return kExitOk;
}

template <class S>
int do_detect(const CommonFlags& common, const PoseFlags& pose_flags, std::ostream& out) {
  SceneFile<S> file = load_scene_file<S>(common.scene_path);
  VehicleConfig<S> config = resolve_config(file, common.config_path);
  Pose<S> pose = pose_from_flags<S>(pose_flags);
  SimOptions sopt;
  sopt.audibility = common.audibility == "on";
  DetectOptions dopt;
  dopt.tol.match_residual = common.threshold;
  dopt.interval_prune = common.prune;
  EchoRecord<S> rec = simulate_echoes(file.scene, config, pose, sopt);
  DetectResult<S> det = detect(squared_distances(rec), config.mics_at(pose),
                               file.scene.speaker_at(pose, config), dopt);
  emit(detect_result_to_json(det), common.out_path, out);
  return kExitOk;
}

template <class S>
int do_evaluate(const CommonFlags& common, const PoseFlags& pose_flags, std::ostream& out) {
  SceneFile<S> file = load_scene_file<S>(common.scene_path);
  VehicleConfig<S> config = resolve_config(file, common.config_path);
  Pose<S> pose = pose_from_flags<S>(pose_flags);
  SimOptions sopt;
  sopt.audibility = common.audibility == "on";
  DetectOptions dopt;
  dopt.tol.match_residual = common.threshold;
  dopt.interval_prune = common.prune;
  EvalOptions eopt;
  eopt.audibility = sopt.audibility;
  EchoRecord<S> rec = simulate_echoes(file.scene, config, pose, sopt);
  DetectResult<S> det = detect(squared_distances(rec), config.mics_at(pose),
                               file.scene.speaker_at(pose, config), dopt);
  EvaluationReport<S> rep = evaluate(det.walls, file.scene, config, pose, eopt);
  emit(report_to_json(rep), common.out_path, out);
  return kExitOk;
}

template <class S>
int do_stack_check(const CommonFlags& common, const PoseFlags& pose_flags, std::ostream& out) {
  SceneFile<S> file = load_scene_file<S>(common.scene_path);
  VehicleConfig<S> config = resolve_config(file, common.config_path);
  Pose<S> pose = pose_from_flags<S>(pose_flags);
  auto cert = check_stack(file.scene, config, pose);
  if (cert)
    emit(certificate_to_json(*cert), common.out_path, out);
  else
    emit("none\n", common.out_path, out);
  return kExitOk;
}

int dispatch_exit_code(const std::exception& e, std::ostream& err) {
  if (dynamic_cast<const UnsupportedConfiguration*>(&e)) {
    err << "unsupported configuration: " << e.what() << "\n";
    return kExitUnsupported;
  }
  if (dynamic_cast<const BadInput*>(&e)) {
    err << "bad input: " << e.what() << "\n";
    return kExitBadInput;
  }
  err << "error: " << e.what() << "\n";
  return kExitError;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"echowall: first-order echo simulation and wall detection"};
  app.require_subcommand(1);

  CommonFlags common;
  PoseFlags pose_flags;

  CLI::App* c_sim = app.add_subcommand("simulate", "generate first-order echo arrivals");
  add_common_flags(c_sim, common);
  add_pose_flags(c_sim, pose_flags);

  CLI::App* c_det = app.add_subcommand("detect", "reconstruct walls from simulated echoes");
  add_common_flags(c_det, common);
  add_pose_flags(c_det, pose_flags);

  CLI::App* c_eval = app.add_subcommand("evaluate", "detect and classify against ground truth");
  add_common_flags(c_eval, common);
  add_pose_flags(c_eval, pose_flags);

  CLI::App* c_make = app.add_subcommand("stack-make", "construct a deceptive wall arrangement");
  CommonFlags make_common;
  PoseFlags make_pose;
  std::string axis_x = "0", axis_y = "0", z1 = "1";
  std::vector<std::string> speaker_coords;
  std::string cert_path;
  add_common_flags(c_make, make_common, /*needs_scene=*/false);
  add_pose_flags(c_make, make_pose);
  c_make->add_option("--axis-x", axis_x, "x of the vertical mirror-point line")->required();
  c_make->add_option("--axis-y", axis_y, "y of the vertical mirror-point line")->required();
  c_make->add_option("--z1", z1, "height of the first mirror point")->required();
  c_make->add_option("--speaker", speaker_coords, "fixed speaker position (3 coordinates)")
      ->expected(3)
      ->required();
  c_make->add_option("--cert", cert_path, "certificate output path (default: stdout)");

  CLI::App* c_check = app.add_subcommand("stack-check", "search a scene for a deceptive stack");
  add_common_flags(c_check, common);
  add_pose_flags(c_check, pose_flags);

  CLI::App* c_mc = app.add_subcommand("montecarlo", "sample poses and measure the bad fraction");
  CommonFlags mc_common;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double pose_box = 4.0;
  double hover_range = 0.0;
  std::string csv_path;
  add_common_flags(c_mc, mc_common);
  c_mc->add_option("--samples", samples, "number of sampled poses");
  c_mc->add_option("--seed", seed, "RNG seed; fixed seed gives byte-identical outputs");
  c_mc->add_option("--pose-box", pose_box, "translation box half-width (meters)");
  c_mc->add_option("--hover-range", hover_range, "vertical offset range; 0 = ground vehicle");
  c_mc->add_option("--csv", csv_path, "write the per-pose CSV table here");

  CLI::App* c_scn = app.add_subcommand("scenario", "run a bundled demonstration scene");
  std::string scenario_name;
  std::string out_dir;
  c_scn->add_option("name", scenario_name, "fig_bad_stack | fig_nonhorizontal_stack | fig_really_good")
      ->required();
  c_scn->add_option("--out-dir", out_dir, "write scene/report/certificate JSON files here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    const bool exact = common.mode == "exact";
    if (c_sim->parsed())
      return exact ? do_simulate<Rational>(common, pose_flags, out)
                   : do_simulate<double>(common, pose_flags, out);
    if (c_det->parsed())
      return exact ? do_detect<Rational>(common, pose_flags, out)
                   : do_detect<double>(common, pose_flags, out);
    if (c_eval->parsed())
      return exact ? do_evaluate<Rational>(common, pose_flags, out)
                   : do_evaluate<double>(common, pose_flags, out);
    if (c_check->parsed())
      return exact ? do_stack_check<Rational>(common, pose_flags, out)
                   : do_stack_check<double>(common, pose_flags, out);

    if (c_make->parsed()) {
      // Stack construction is exact: the certificate is an identity witness.
      using Q = Rational;
      VehicleConfig<Q> config;
      if (!make_common.config_path.empty()) {
        config = load_config_file<Q>(make_common.config_path);
      } else if (!make_common.scene_path.empty()) {
        config = load_scene_file<Q>(make_common.scene_path).config;
      } else {
        Rng rng = rng_for(1, 0);
        config = vehicle_with_z_levels<Q>(rng, 4);
      }
      Pose<Q> pose = pose_from_flags<Q>(make_pose);
      Vec<Q> speaker(parse_rational(speaker_coords.at(0)), parse_rational(speaker_coords.at(1)),
                     parse_rational(speaker_coords.at(2)));
      StackScene<Q> built = make_stack(config, pose, parse_rational(axis_x),
                                       parse_rational(axis_y), parse_rational(z1), speaker);
      emit(scene_to_json(built.scene, config), make_common.out_path, out);
      emit(certificate_to_json(built.certificate), cert_path, out);
      return kExitOk;
    }

    if (c_mc->parsed()) {
      ExperimentSpec spec;
      spec.scene_path = mc_common.scene_path;
      spec.config_path = mc_common.config_path;
      spec.mode = mc_common.mode == "exact" ? ScalarMode::kExact : ScalarMode::kFloat;
      spec.samples = samples;
      spec.seed = seed;
      spec.sampler.box = pose_box;
      spec.sampler.hover_range = hover_range;
      MonteCarloResult result = montecarlo_bad_fraction(spec);
      if (!csv_path.empty()) write_text_file(csv_path, result.csv);
      emit(montecarlo_to_json(result), mc_common.out_path, out);
      return kExitOk;
    }

    if (c_scn->parsed()) {
      ScenarioResult result = scenario(scenario_name);
      if (!out_dir.empty()) {
        write_text_file(out_dir + "/scene.json", result.scene_json);
        write_text_file(out_dir + "/report.json", result.report_json);
        if (!result.certificate_json.empty())
          write_text_file(out_dir + "/certificate.json", result.certificate_json);
      }
      out << result.name << ": " << (result.claim_holds ? "ok" : "CLAIM FAILED") << " - "
          << result.claim << "\n";
      return result.claim_holds ? kExitOk : kExitError;
    }
  } catch (const std::exception& e) {
    return dispatch_exit_code(e, err);
  }

  err << "no subcommand selected\n";
  return kExitBadInput;
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace echowall

#include "echowall/scene_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace echowall {

using nlohmann::json;

namespace {

template <class S>
S scalar_from_json(const json& j) {
  if (j.is_string()) {
    Rational q = parse_rational(j.get<std::string>());
    if constexpr (scalar_traits<S>::exact)
      return q;
    else
      return q.get_d();
  }
  if (j.is_number_integer()) return scalar_traits<S>::from_int(j.get<long>());
  if (j.is_number_float()) return scalar_traits<S>::from_double(j.get<double>());
  throw BadInput("expected a number or a numeric string");
}

template <class S>
json scalar_to_json(const S& v) {
  if constexpr (scalar_traits<S>::exact) {
    if (v.get_den() == 1 && mpz_fits_slong_p(v.get_num_mpz_t()))
      return json(v.get_num().get_si());
    return json(v.get_str());
  } else {
    return json(v);
  }
}

template <class S>
Vec<S> vec_from_json(const json& j, int expect_dim) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) throw BadInput("expected a 2- or 3-vector");
  if (expect_dim > 0 && static_cast<int>(j.size()) != expect_dim)
    throw BadInput("vector dimension mismatch");
  Vec<S> out(static_cast<int>(j.size()));
  for (int i = 0; i < out.dim(); ++i) out[i] = scalar_from_json<S>(j[static_cast<size_t>(i)]);
  return out;
}

template <class S>
json vec_to_json(const Vec<S>& v) {
  json out = json::array();
  for (int i = 0; i < v.dim(); ++i) out.push_back(scalar_to_json<S>(v[i]));
  return out;
}

template <class S>
json plane_to_json(const Plane<S>& p) {
  return json{{"normal", vec_to_json(p.normal())},
              {"anchor", vec_to_json(p.anchor())},
              {"offset", scalar_to_json(p.offset())}};
}

template <class S>
json detected_wall_to_json(const DetectedWall<S>& w) {
  json tuple = json::array();
  for (const S& d : w.tuple) tuple.push_back(scalar_to_json(d));
  return json{{"mirror", vec_to_json(w.mirror)}, {"plane", plane_to_json(w.plane)},
              {"residual", w.residual},          {"support", w.support},
              {"tuple", tuple}};
}

}  // namespace

template <class S>
SceneFile<S> parse_scene_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw BadInput(std::string("scene file is not valid JSON: ") + e.what());
  }
  try {
    SceneFile<S> out;
    out.scene.dimension = j.at("dimension").get<int>();
    const int dim = out.scene.dimension;
    if (dim != 2 && dim != 3) throw BadInput("dimension must be 2 or 3");

    for (const json& jw : j.at("walls")) {
      Vec<S> normal = vec_from_json<S>(jw.at("normal"), dim);
      Vec<S> anchor = vec_from_json<S>(jw.at("anchor"), dim);
      Wall<S> wall{Plane<S>(std::move(normal), std::move(anchor)), std::nullopt};
      if (jw.contains("extent")) {
        WallExtent<S> ext;
        ext.origin = jw["extent"].contains("origin")
                         ? vec_from_json<S>(jw["extent"]["origin"], dim)
                         : wall.plane.anchor();
        ext.edges.push_back(vec_from_json<S>(jw["extent"].at("e1"), dim));
        if (dim == 3) ext.edges.push_back(vec_from_json<S>(jw["extent"].at("e2"), dim));
        wall.extent = std::move(ext);
      }
      out.scene.walls.push_back(std::move(wall));
    }

    const json& sp = j.at("speaker");
    std::string mode = sp.at("mode").get<std::string>();
    if (mode == "fixed") {
      out.scene.speaker_mode = SpeakerMode::kFixed;
      out.scene.speaker_position = vec_from_json<S>(sp.at("position"), dim);
    } else if (mode == "mounted") {
      out.scene.speaker_mode = SpeakerMode::kMounted;
      out.config.speaker_offset = vec_from_json<S>(sp.at("offset"), dim);
    } else {
      throw BadInput("speaker mode must be \"fixed\" or \"mounted\"");
    }

    for (const json& jm : j.at("mics"))
      out.config.mic_offsets.push_back(vec_from_json<S>(jm, dim));

    if (j.contains("c")) out.scene.sound_speed = scalar_from_json<S>(j["c"]);
    if (j.contains("t0")) out.scene.emission_time = scalar_from_json<S>(j["t0"]);

    out.scene.validate();
    out.config.validate();
    return out;
  } catch (const json::exception& e) {
    throw BadInput(std::string("malformed scene file: ") + e.what());
  }
}

template <class S>
SceneFile<S> load_scene_file(const std::string& path) {
  return parse_scene_json<S>(read_text_file(path));
}

template <class S>
std::string scene_to_json(const Scene<S>& scene, const VehicleConfig<S>& config) {
  json j;
  j["dimension"] = scene.dimension;
  j["walls"] = json::array();
  for (const Wall<S>& w : scene.walls) {
    json jw{{"normal", vec_to_json(w.plane.normal())}, {"anchor", vec_to_json(w.plane.anchor())}};
    if (w.extent) {
      json je{{"origin", vec_to_json(w.extent->origin)},
              {"e1", vec_to_json(w.extent->edges.at(0))}};
      if (w.extent->edges.size() > 1) je["e2"] = vec_to_json(w.extent->edges.at(1));
      jw["extent"] = std::move(je);
    }
    j["walls"].push_back(std::move(jw));
  }
  if (scene.speaker_mode == SpeakerMode::kFixed) {
    j["speaker"] = json{{"mode", "fixed"}, {"position", vec_to_json(scene.speaker_position)}};
  } else {
    if (!config.speaker_offset) throw BadInput("mounted scene without a speaker offset");
    j["speaker"] = json{{"mode", "mounted"}, {"offset", vec_to_json(*config.speaker_offset)}};
  }
  j["mics"] = json::array();
  for (const Vec<S>& m : config.mic_offsets) j["mics"].push_back(vec_to_json(m));
  j["c"] = scalar_to_json(scene.sound_speed);
  j["t0"] = scalar_to_json(scene.emission_time);
  return j.dump(2) + "\n";
}

template <class S>
VehicleConfig<S> load_config_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw BadInput(std::string("config file is not valid JSON: ") + e.what());
  }
  try {
    VehicleConfig<S> config;
    for (const json& jm : j.at("mics")) config.mic_offsets.push_back(vec_from_json<S>(jm, -1));
    if (j.contains("speaker_offset"))
      config.speaker_offset = vec_from_json<S>(j["speaker_offset"], -1);
    config.validate();
    return config;
  } catch (const json::exception& e) {
    throw BadInput(std::string("malformed config file: ") + e.what());
  }
}

template <class S>
Pose<S> parse_pose_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw BadInput(std::string("pose is not valid JSON: ") + e.what());
  }
  try {
    S tx = j.contains("tx") ? scalar_from_json<S>(j["tx"]) : S(0);
    S ty = j.contains("ty") ? scalar_from_json<S>(j["ty"]) : S(0);
    S tz = j.contains("tz") ? scalar_from_json<S>(j["tz"]) : S(0);
    if (j.contains("rot_c") || j.contains("rot_s")) {
      return Pose<S>::from_rotation(scalar_from_json<S>(j.at("rot_c")),
                                    scalar_from_json<S>(j.at("rot_s")), std::move(tx),
                                    std::move(ty), std::move(tz));
    }
    if (j.contains("theta")) {
      if constexpr (scalar_traits<S>::exact)
        throw BadInput("exact mode needs a rational rotation: use \"t\" or rot_c/rot_s");
      else
        return Pose<double>::from_angle(j["theta"].get<double>(), tx, ty, tz);
    }
    S t = j.contains("t") ? scalar_from_json<S>(j["t"]) : S(0);
    bool half_turn = j.contains("half_turn") && j["half_turn"].get<bool>();
    return Pose<S>::from_circle_param(t, std::move(tx), std::move(ty), std::move(tz), half_turn);
  } catch (const json::exception& e) {
    throw BadInput(std::string("malformed pose: ") + e.what());
  }
}

template <class S>
std::string pose_to_json(const Pose<S>& pose) {
  json j{{"rot_c", scalar_to_json(pose.rot_c)},
         {"rot_s", scalar_to_json(pose.rot_s)},
         {"tx", scalar_to_json(pose.tx)},
         {"ty", scalar_to_json(pose.ty)},
         {"tz", scalar_to_json(pose.tz)}};
  return j.dump();
}

template <class S>
std::string detect_result_to_json(const DetectResult<S>& result) {
  json walls = json::array();
  for (const DetectedWall<S>& w : result.walls) walls.push_back(detected_wall_to_json(w));
  json j{{"walls", std::move(walls)},
         {"diagnostics",
          json{{"tuples_tested", result.diag.tuples_tested},
               {"tuples_passed", result.diag.tuples_passed},
               {"tuples_pruned", result.diag.tuples_pruned},
               {"dropped_inconsistent", result.diag.dropped_inconsistent},
               {"dropped_degenerate", result.diag.dropped_degenerate}}}};
  return j.dump(2) + "\n";
}

template <class S>
std::string report_to_json(const EvaluationReport<S>& report) {
  json found = json::array();
  for (const DetectedWall<S>& w : report.true_walls_found) found.push_back(detected_wall_to_json(w));
  json ghosts = json::array();
  for (const DetectedWall<S>& w : report.ghosts) ghosts.push_back(detected_wall_to_json(w));
  json missed = json::array();
  for (const Plane<S>& p : report.missed) missed.push_back(plane_to_json(p));
  json j{{"true_walls_found", std::move(found)},
         {"ghosts", std::move(ghosts)},
         {"missed", std::move(missed)},
         {"is_bad_position", report.is_bad_position}};
  return j.dump(2) + "\n";
}

template <class S>
std::string certificate_to_json(const StackCertificate<S>& cert) {
  json deltas = json::array();
  for (const S& d : cert.deltas) deltas.push_back(scalar_to_json(d));
  json j{{"wall_indices", cert.wall_indices},
         {"axis", json::array({scalar_to_json(cert.axis_x), scalar_to_json(cert.axis_y)})},
         {"ghost", vec_to_json(cert.ghost)},
         {"deltas", std::move(deltas)}};
  return j.dump(2) + "\n";
}

template <class S>
std::string echo_record_to_json(const EchoRecord<S>& rec) {
  json times = json::array();
  for (const auto& mic : rec.times_seconds()) times.push_back(mic);
  json range2 = json::array();
  for (const auto& mic : rec.range2) {
    json row = json::array();
    for (const S& d : mic) row.push_back(scalar_to_json(d));
    range2.push_back(std::move(row));
  }
  json j{{"times", std::move(times)},
         {"range2", std::move(range2)},
         {"t0", scalar_to_json(rec.emission_time)},
         {"c", scalar_to_json(rec.sound_speed)}};
  return j.dump(2) + "\n";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BadInput("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw BadInput("cannot write file: " + path);
  out << text;
  if (!out) throw BadInput("failed writing file: " + path);
}

// Explicit instantiations for both scalar modes.
#define ECHOWALL_INSTANTIATE_IO(S)                                                      \
  template SceneFile<S> parse_scene_json<S>(const std::string&);                       \
  template SceneFile<S> load_scene_file<S>(const std::string&);                        \
  template std::string scene_to_json<S>(const Scene<S>&, const VehicleConfig<S>&);     \
  template VehicleConfig<S> load_config_file<S>(const std::string&);                   \
  template Pose<S> parse_pose_json<S>(const std::string&);                             \
  template std::string pose_to_json<S>(const Pose<S>&);                                \
  template std::string detect_result_to_json<S>(const DetectResult<S>&);               \
  template std::string report_to_json<S>(const EvaluationReport<S>&);                  \
  template std::string certificate_to_json<S>(const StackCertificate<S>&);             \
  template std::string echo_record_to_json<S>(const EchoRecord<S>&);

ECHOWALL_INSTANTIATE_IO(double)
ECHOWALL_INSTANTIATE_IO(Rational)

#undef ECHOWALL_INSTANTIATE_IO

}  // namespace echowall

#pragma once

/// JSON file formats shared by the CLI subcommands.
///
/// Scene file:
///   {
///     "dimension": 3,
///     "walls": [{"anchor": [..], "normal": [..],
///                "extent": {"e1": [..], "e2": [..]}}, ...],
///     "speaker": {"mode": "fixed", "position": [..]}
///              | {"mode": "mounted", "offset": [..]},
///     "mics": [[..], ...],
///     "c": 343.0,
///     "t0": 0.0
///   }
/// Lengths are meters, times seconds. Numbers may be JSON numbers or
/// strings; strings accept exact fractions ("7/2") and decimals. In exact
/// mode JSON numbers are taken at their binary value (every double is a
/// rational), so a file round-trips losslessly through either mode.

#include <string>

#include "echowall/detector.hpp"
#include "echowall/geometry.hpp"
#include "echowall/simulator.hpp"
#include "echowall/stacks.hpp"

namespace echowall {

template <class S>
struct SceneFile {
  Scene<S> scene;
  VehicleConfig<S> config;
};

template <class S>
SceneFile<S> parse_scene_json(const std::string& text);

template <class S>
SceneFile<S> load_scene_file(const std::string& path);

template <class S>
std::string scene_to_json(const Scene<S>& scene, const VehicleConfig<S>& config);

/// Optional override file: {"mics": [[..],...], "speaker_offset": [..]}.
template <class S>
VehicleConfig<S> load_config_file(const std::string& path);

/// Pose JSON: {"t": "1/3", "half_turn": false, "tx": .., "ty": .., "tz": ..}
/// or float mode {"theta": 0.7, ...}. Fields default to the identity.
template <class S>
Pose<S> parse_pose_json(const std::string& text);

template <class S>
std::string pose_to_json(const Pose<S>& pose);

template <class S>
std::string detect_result_to_json(const DetectResult<S>& result);

template <class S>
std::string report_to_json(const EvaluationReport<S>& report);

template <class S>
std::string certificate_to_json(const StackCertificate<S>& cert);

template <class S>
std::string echo_record_to_json(const EchoRecord<S>& rec);

/// Fixed-format double for CSV cells ("%.17g"): byte-stable across runs.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace echowall

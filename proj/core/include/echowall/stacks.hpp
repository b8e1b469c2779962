#pragma once

/// Construction and certification of deceptive wall arrangements: four
/// mirror points on a common vertical line whose z-gaps are exactly twice
/// the microphones' z-gaps. Reflecting any stacked mirror point across the
/// horizontal plane through its microphone lands on one common point, so
/// the per-microphone echoes are indistinguishable from echoes of a wall
/// that does not exist. The construction works in mirror-point space first;
/// walls are derived from the mirror points afterwards.

#include <optional>
#include <vector>

#include "echowall/detector.hpp"
#include "echowall/errors.hpp"
#include "echowall/geometry.hpp"
#include "echowall/sampling.hpp"
#include "echowall/scalar.hpp"
#include "echowall/simulator.hpp"
#include "echowall/vec.hpp"

namespace echowall {

/// Number of free scalar parameters in the constructive stack family:
/// the vertical-line axis (x, y) and the height of the first mirror point.
inline constexpr int kStackParamCount = 3;

/// Witness that a scene contains a stack for the given microphone layout.
/// wall_indices[i] is the wall assigned to microphone i (repetition
/// allowed: microphones sharing a z-coordinate share a mirror point).
template <class S>
struct StackCertificate {
  std::vector<int> wall_indices;
  S axis_x{};
  S axis_y{};
  Vec<S> ghost;          ///< the common reflected point; 3D
  std::vector<S> deltas; ///< z(s_i) - z(s_1), the offsets satisfying the doubling law

  /// The defining conditions, re-checked from scratch: mirror points of the
  /// assigned walls share (x, y) = axis, their z-gaps double the microphone
  /// z-gaps, and every per-microphone reflection gives the same ghost.
  static bool valid(const StackCertificate& cert, const std::vector<Vec<S>>& mirrors,
                    const std::vector<Vec<S>>& mics, double tol = 0.0) {
    if (cert.wall_indices.size() != mics.size()) return false;
    auto close = [tol](const S& a, const S& b) {
      if constexpr (scalar_traits<S>::exact)
        return a == b;
      else
        return std::abs(to_double(a) - to_double(b)) <= tol;
    };
    const Vec<S>& s0 = mirrors[static_cast<size_t>(cert.wall_indices[0])];
    if (!close(s0.x(), cert.axis_x) || !close(s0.y(), cert.axis_y)) return false;
    for (size_t i = 0; i < mics.size(); ++i) {
      const Vec<S>& si = mirrors[static_cast<size_t>(cert.wall_indices[i])];
      if (!close(si.x(), cert.axis_x) || !close(si.y(), cert.axis_y)) return false;
      if (!close(si.z() - s0.z(), S(2) * (mics[i].z() - mics[0].z()))) return false;
      // Reflection of s_i at the horizontal plane through m_i.
      S gz = S(2) * mics[i].z() - si.z();
      if (!close(gz, cert.ghost.z())) return false;
    }
    return true;
  }
};

template <class S>
struct StackScene {
  Scene<S> scene;
  StackCertificate<S> certificate;
};

/// Core construction from explicit microphone world positions: place the
/// mirror points on the vertical line through axis with
/// z(s_i) = z1 + 2 (z(m_i) - z(m_1)), then derive one wall per mirror point
/// as the bisector plane with respect to the fixed speaker. Coincident
/// mirror points collapse to one wall.
template <class S>
StackScene<S> make_stack_from_mics(const std::vector<Vec<S>>& mic_world, S axis_x, S axis_y, S z1,
                                   const Vec<S>& speaker) {
  if (mic_world.empty() || mic_world[0].dim() != 3)
    throw BadInput("stack construction needs 3D microphone positions");

  StackScene<S> out;
  out.scene.dimension = 3;
  out.scene.speaker_mode = SpeakerMode::kFixed;
  out.scene.speaker_position = speaker;

  std::vector<Vec<S>> mirrors;
  mirrors.reserve(mic_world.size());
  for (const Vec<S>& m : mic_world) {
    S z = z1 + S(2) * (m.z() - mic_world[0].z());
    mirrors.emplace_back(axis_x, axis_y, std::move(z));
  }

  StackCertificate<S> cert;
  cert.axis_x = axis_x;
  cert.axis_y = axis_y;
  cert.ghost = Vec<S>(axis_x, axis_y, S(2) * mic_world[0].z() - z1);
  for (const Vec<S>& s : mirrors) {
    if (s == speaker) throw DegenerateMirror("a stacked mirror point coincides with the speaker");
    cert.deltas.push_back(s.z() - mirrors[0].z());
  }

  // One wall per distinct mirror point.
  std::vector<Vec<S>> distinct;
  for (const Vec<S>& s : mirrors) {
    int found = -1;
    for (size_t k = 0; k < distinct.size(); ++k)
      if (distinct[k] == s) {
        found = static_cast<int>(k);
        break;
      }
    if (found < 0) {
      distinct.push_back(s);
      out.scene.walls.push_back(Wall<S>{plane_from_mirror(speaker, s), std::nullopt});
      found = static_cast<int>(distinct.size()) - 1;
    }
    cert.wall_indices.push_back(found);
  }
  out.certificate = std::move(cert);
  return out;
}

/// Construction from a vehicle configuration and pose.
template <class S>
StackScene<S> make_stack(const VehicleConfig<S>& config, const Pose<S>& pose, S axis_x, S axis_y,
                         S z1, const Vec<S>& speaker) {
  return make_stack_from_mics(config.mics_at(pose), std::move(axis_x), std::move(axis_y),
                              std::move(z1), speaker);
}

/// Search a scene for a stack with respect to the posed microphones: every
/// assignment of walls to microphones (with repetition) is checked against
/// the defining conditions. Exact in rational mode; float mode uses the
/// given tolerance on coordinates.
template <class S>
std::optional<StackCertificate<S>> check_stack(const Scene<S>& scene,
                                               const VehicleConfig<S>& config, const Pose<S>& pose,
                                               double tol = 1e-9) {
  if (scene.dimension != 3) return std::nullopt;  // stacks are a 3D phenomenon
  if (scene.speaker_mode != SpeakerMode::kFixed)
    throw BadInput("stack checking assumes a fixed loudspeaker");

  std::vector<Vec<S>> mics = config.mics_at(pose);
  std::vector<Vec<S>> mirrors;
  mirrors.reserve(scene.walls.size());
  for (const Wall<S>& w : scene.walls)
    mirrors.push_back(mirror_point(w.plane, scene.speaker_position));

  const int n_mics = static_cast<int>(mics.size());
  const int n_walls = static_cast<int>(scene.walls.size());
  auto close = [tol](const S& a, const S& b) {
    if constexpr (scalar_traits<S>::exact)
      return a == b;
    else
      return std::abs(to_double(a) - to_double(b)) <= tol;
  };

  std::vector<int> assign(static_cast<size_t>(n_mics), 0);
  for (;;) {
    bool ok = true;
    const Vec<S>& s0 = mirrors[static_cast<size_t>(assign[0])];
    for (int i = 1; i < n_mics && ok; ++i) {
      const Vec<S>& si = mirrors[static_cast<size_t>(assign[static_cast<size_t>(i)])];
      if (!close(si.x(), s0.x()) || !close(si.y(), s0.y()) ||
          !close(si.z() - s0.z(), S(2) * (mics[static_cast<size_t>(i)].z() - mics[0].z())))
        ok = false;
    }
    if (ok) {
      StackCertificate<S> cert;
      cert.wall_indices = assign;
      cert.axis_x = s0.x();
      cert.axis_y = s0.y();
      cert.ghost = Vec<S>(s0.x(), s0.y(), S(2) * mics[0].z() - s0.z());
      for (int i = 0; i < n_mics; ++i)
        cert.deltas.push_back(mirrors[static_cast<size_t>(assign[static_cast<size_t>(i)])].z() -
                              s0.z());
      return cert;
    }
    int pos = n_mics - 1;
    while (pos >= 0) {
      if (++assign[static_cast<size_t>(pos)] < n_walls) break;
      assign[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return std::nullopt;
}

/// Fraction of poses in a grid at which the detection pipeline reports at
/// least one ghost wall.
template <class S>
struct PersistenceResult {
  std::size_t n_poses = 0;
  std::size_t n_bad = 0;
  double bad_fraction = 0.0;
};

template <class S>
PersistenceResult<S> persistence_region(const Scene<S>& scene, const VehicleConfig<S>& config,
                                        const std::vector<Pose<S>>& pose_grid,
                                        const DetectOptions& dopt = {},
                                        const EvalOptions& eopt = {}) {
  PersistenceResult<S> result;
  result.n_poses = pose_grid.size();
  SimOptions sopt;
  sopt.audibility = eopt.audibility;
  sopt.tol = dopt.tol;
  for (const Pose<S>& pose : pose_grid) {
    EchoRecord<S> rec = simulate_echoes(scene, config, pose, sopt);
    DetectResult<S> det = detect(squared_distances(rec), config.mics_at(pose),
                                 scene.speaker_at(pose, config), dopt);
    EvaluationReport<S> rep = evaluate(det.walls, scene, config, pose, eopt);
    if (rep.is_bad_position) ++result.n_bad;
  }
  result.bad_fraction =
      result.n_poses == 0 ? 0.0 : static_cast<double>(result.n_bad) / result.n_poses;
  return result;
}

/// Empirical probe of how rare stacks are. Generic random wall arrangements
/// should never contain one (the stack conditions cut down the wall
/// configuration space by 3(l-1) dimensions for l distinct microphone
/// z-levels), while the constructive 3-parameter family certifies every
/// time.
struct CodimSummary {
  int z_levels = 0;
  std::size_t generic_samples = 0;
  std::size_t generic_stacks_found = 0;
  std::size_t constructed_samples = 0;
  std::size_t constructed_certified = 0;
  int param_count = kStackParamCount;
};

template <class S>
CodimSummary codim_experiment(int z_levels, std::size_t samples, std::uint64_t seed) {
  CodimSummary summary;
  summary.z_levels = z_levels;

  Rng cfg_rng = rng_for(seed, 0);
  VehicleConfig<S> config = vehicle_with_z_levels<S>(cfg_rng, z_levels);
  Pose<S> pose = Pose<S>::identity();

  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = rng_for(seed, i + 1);
    RandomSceneOptions opt;
    opt.dimension = 3;
    opt.n_walls = 4;
    RandomScene<S> sample = random_scene<S>(rng, opt);
    ++summary.generic_samples;
    if (check_stack(sample.scene, config, pose)) ++summary.generic_stacks_found;
  }

  std::size_t constructive = std::min<std::size_t>(samples, 256);
  for (std::size_t i = 0; i < constructive; ++i) {
    Rng rng = rng_for(seed ^ 0x5ca1ab1eULL, i);
    S ax, ay, z1;
    Vec<S> speaker(3);
    if constexpr (scalar_traits<S>::exact) {
      ax = random_rational(rng, 8);
      ay = random_rational(rng, 8);
      z1 = random_rational(rng, 8);
      speaker = Vec<S>(random_rational(rng, 8), random_rational(rng, 8), random_rational(rng, 8));
    } else {
      ax = sample_uniform<double>(rng, -8, 8);
      ay = sample_uniform<double>(rng, -8, 8);
      z1 = sample_uniform<double>(rng, -8, 8);
      speaker = Vec<S>(sample_uniform<double>(rng, -8, 8), sample_uniform<double>(rng, -8, 8),
                       sample_uniform<double>(rng, -8, 8));
    }
    ++summary.constructed_samples;
    try {
      StackScene<S> built = make_stack(config, pose, ax, ay, z1, speaker);
      if (check_stack(built.scene, config, pose)) ++summary.constructed_certified;
    } catch (const DegenerateMirror&) {
      // A mirror landed on the speaker; counts as constructed-but-degenerate.
    }
  }
  return summary;
}

}  // namespace echowall

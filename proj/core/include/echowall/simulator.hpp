#pragma once

/// First-order echo simulation: for each wall, sound behaves as if emitted
/// from the mirror point of the loudspeaker, so the arrival time at a
/// microphone is t0 + |s - m| / c. Only single reflections are generated.

#include <algorithm>
#include <optional>
#include <vector>

#include "echowall/errors.hpp"
#include "echowall/geometry.hpp"
#include "echowall/linalg.hpp"
#include "echowall/scalar.hpp"
#include "echowall/vec.hpp"

namespace echowall {

/// Optional finite footprint of a wall: the parallelogram (segment in 2D)
/// {origin + a*e1 (+ b*e2)} with a, b in [0, 1]. Edges must span the plane.
template <class S>
struct WallExtent {
  Vec<S> origin;
  std::vector<Vec<S>> edges;  // 1 edge in 2D, 2 edges in 3D
};

template <class S>
struct Wall {
  Plane<S> plane;
  std::optional<WallExtent<S>> extent;
};

/// Speaker placement: fixed in the room, or mounted on the vehicle and
/// carried by the pose. Mounted speakers are a 2D-only feature; 3D scenes
/// with a mounted speaker are rejected outright.
enum class SpeakerMode { kFixed, kMounted };

template <class S>
struct Scene {
  int dimension = 3;
  std::vector<Wall<S>> walls;
  SpeakerMode speaker_mode = SpeakerMode::kFixed;
  Vec<S> speaker_position;  // kFixed only
  S sound_speed = S(343);
  S emission_time = S(0);

  void validate() const {
    if (dimension != 2 && dimension != 3) throw BadInput("scene dimension must be 2 or 3");
    if (walls.empty()) throw BadInput("scene needs at least one wall");
    for (const Wall<S>& w : walls) {
      if (w.plane.dim() != dimension) throw BadInput("wall dimension mismatch");
      if (w.extent) {
        if (static_cast<int>(w.extent->edges.size()) != dimension - 1)
          throw BadInput("wall extent needs dimension-1 edge vectors");
        for (const Vec<S>& e : w.extent->edges) {
          S d = w.plane.normal().dot(e);
          bool in_plane;
          if constexpr (scalar_traits<S>::exact)
            in_plane = scalar_traits<S>::is_zero(d);
          else
            in_plane = std::abs(to_double(d)) <= 1e-9 * e.norm();
          if (!in_plane) throw BadInput("wall extent edges must lie in the wall plane");
        }
      }
    }
    if (speaker_mode == SpeakerMode::kMounted) {
      if (dimension == 3)
        throw UnsupportedConfiguration("mounted loudspeaker is only supported in 2D scenes");
    } else {
      if (speaker_position.dim() != dimension) throw BadInput("speaker dimension mismatch");
      for (const Wall<S>& w : walls)
        if (scalar_traits<S>::is_zero(w.plane.signed_eval(speaker_position)))
          throw DegenerateMirror("fixed speaker lies on a wall plane");
    }
  }

  /// Speaker world position for a pose (identity for fixed speakers).
  Vec<S> speaker_at(const Pose<S>& pose, const VehicleConfig<S>& config) const {
    if (speaker_mode == SpeakerMode::kFixed) return speaker_position;
    if (!config.speaker_offset) throw BadInput("mounted speaker needs a speaker offset");
    return apply_pose(pose, *config.speaker_offset);
  }
};

/// Per-microphone first-order echo arrivals.
///
/// Arrivals are stored as squared ranges c^2 (t - t0)^2 rather than as raw
/// times: exact arithmetic is not closed under the square root that a time
/// needs, while the squared range is already the quantity the detection
/// pipeline consumes. Times are recoverable as t0 + sqrt(range2)/c.
template <class S>
struct EchoRecord {
  std::vector<std::vector<S>> range2;  // per mic, sorted, deduplicated
  S emission_time = S(0);
  S sound_speed = S(343);

  /// Build from raw arrival times (the measurement-side view). Applies
  /// c^2 (t - t0)^2 per entry. Entries before the emission time are invalid.
  static EchoRecord from_times(const std::vector<std::vector<double>>& times, double t0, double c,
                               double merge_gap_s = 1e-12) {
    EchoRecord rec;
    rec.emission_time = S(t0);
    rec.sound_speed = S(c);
    rec.range2.reserve(times.size());
    for (const auto& mic_times : times) {
      std::vector<double> sorted = mic_times;
      std::sort(sorted.begin(), sorted.end());
      std::vector<S> out;
      double last = -1.0;
      for (double t : sorted) {
        if (t < t0) throw BadInput("arrival time precedes the emission time");
        if (!out.empty() && t - last < merge_gap_s) continue;  // coincident arrivals merge
        double r = c * (t - t0);
        out.push_back(S(r * r));
        last = t;
      }
      rec.range2.push_back(std::move(out));
    }
    return rec;
  }

  /// Arrival times in seconds (narrowed to double in exact mode).
  std::vector<std::vector<double>> times_seconds() const {
    std::vector<std::vector<double>> out;
    out.reserve(range2.size());
    double t0 = to_double(emission_time);
    double c = to_double(sound_speed);
    for (const auto& mic : range2) {
      std::vector<double> ts;
      ts.reserve(mic.size());
      for (const S& d : mic) ts.push_back(t0 + std::sqrt(to_double(d)) / c);
      out.push_back(std::move(ts));
    }
    return out;
  }
};

/// The per-microphone sets of squared distances c^2 (t - t0)^2 that feed
/// the matching relation.
template <class S>
std::vector<std::vector<S>> squared_distances(const EchoRecord<S>& rec) {
  return rec.range2;
}

/// Whether a microphone receives the first-order echo of a wall: the
/// specular reflection point must exist and, for finite walls, lie inside
/// the footprint (boundary inclusive). Infinite walls are always audible.
template <class S>
bool audible(const Wall<S>& wall, const Vec<S>& speaker, const Vec<S>& mic) {
  if (!wall.extent) return true;
  Vec<S> s = mirror_point(wall.plane, speaker);
  Vec<S> dir = mic - s;
  S denom = wall.plane.normal().dot(dir);
  if (scalar_traits<S>::is_zero(denom)) return false;  // path parallel to the wall
  S tstar = (wall.plane.offset() - wall.plane.normal().dot(s)) / denom;
  if constexpr (scalar_traits<S>::exact) {
    if (tstar < S(0) || S(1) < tstar) return false;  // crossing outside the segment
  } else {
    double tf = to_double(tstar);
    if (tf < 0.0 || tf > 1.0) return false;
  }
  Vec<S> q = s + dir * tstar;

  // In-plane coordinates of q relative to the footprint origin.
  const WallExtent<S>& ext = *wall.extent;
  Vec<S> rel = q - ext.origin;
  const int k = static_cast<int>(ext.edges.size());
  SquareMatrix<S> gram(k);
  std::vector<S> rhs(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    rhs[static_cast<size_t>(i)] = ext.edges[static_cast<size_t>(i)].dot(rel);
    for (int j = 0; j < k; ++j)
      gram.at(i, j) = ext.edges[static_cast<size_t>(i)].dot(ext.edges[static_cast<size_t>(j)]);
  }
  std::vector<S> coords;
  try {
    coords = solve_linear(std::move(gram), std::move(rhs));
  } catch (const IllConditioned&) {
    throw BadInput("wall extent edges are linearly dependent");
  }
  for (const S& a : coords) {
    if constexpr (scalar_traits<S>::exact) {
      if (a < S(0) || S(1) < a) return false;
    } else {
      double v = to_double(a);
      if (v < 0.0 || v > 1.0) return false;
    }
  }
  return true;
}

struct SimOptions {
  bool audibility = true;  ///< honor finite wall footprints (infinite walls unaffected)
  Tolerances tol;
};

/// Generate the first-order echo record for a scene, vehicle configuration
/// and pose. Exact mode stores |s - m|^2 directly; float mode goes through
/// the time domain (sqrt, divide, re-square) so realistic rounding enters
/// exactly where a measurement would introduce it.
template <class S>
EchoRecord<S> simulate_echoes(const Scene<S>& scene, const VehicleConfig<S>& config,
                              const Pose<S>& pose, const SimOptions& opt = {}) {
  Vec<S> speaker = scene.speaker_at(pose, config);
  std::vector<Vec<S>> mics = config.mics_at(pose);

  std::vector<Vec<S>> mirrors;
  mirrors.reserve(scene.walls.size());
  for (const Wall<S>& w : scene.walls) {
    if (scalar_traits<S>::is_zero(w.plane.signed_eval(speaker)))
      throw DegenerateMirror("speaker lies on a wall plane");
    mirrors.push_back(mirror_point(w.plane, speaker));
  }

  EchoRecord<S> rec;
  rec.emission_time = scene.emission_time;
  rec.sound_speed = scene.sound_speed;
  rec.range2.resize(mics.size());

  for (size_t i = 0; i < mics.size(); ++i) {
    std::vector<S>& out = rec.range2[i];
    for (size_t wi = 0; wi < scene.walls.size(); ++wi) {
      if (opt.audibility && !audible(scene.walls[wi], speaker, mics[i])) continue;
      S d2 = (mirrors[wi] - mics[i]).norm2();
      if constexpr (!scalar_traits<S>::exact) {
        // Round-trip through the measured time.
        double r = std::sqrt(to_double(d2));
        double t = to_double(scene.emission_time) + r / to_double(scene.sound_speed);
        double rr = to_double(scene.sound_speed) * (t - to_double(scene.emission_time));
        d2 = rr * rr;
      }
      out.push_back(std::move(d2));
    }
    std::sort(out.begin(), out.end());
    if constexpr (scalar_traits<S>::exact) {
      out.erase(std::unique(out.begin(), out.end()), out.end());
    } else {
      // Merge arrivals closer than the time gap threshold.
      double t0 = to_double(scene.emission_time);
      double c = to_double(scene.sound_speed);
      std::vector<S> merged;
      double last_t = 0.0;
      for (const S& d : out) {
        double t = t0 + std::sqrt(to_double(d)) / c;
        if (!merged.empty() && t - last_t < opt.tol.merge_time_gap_s) continue;
        merged.push_back(d);
        last_t = t;
      }
      out = std::move(merged);
    }
  }
  return rec;
}

}  // namespace echowall

#pragma once

/// Seeded random generation of rational scenes, microphone layouts and
/// vehicle poses. All sampling is deterministic given (seed, index), so
/// sweeps can run in parallel and still aggregate identically.
///
/// Exact-mode randomness uses rationals: pose rotations are rational points
/// on the unit circle via t -> ((1-t^2)/(1+t^2), 2t/(1+t^2)) with a fair
/// half-turn coin to cover the angle excluded by the parametrization.
/// Sampling is uniform in the parameter t, not in angle; only the
/// zero-measure / positive-volume dichotomy matters for the experiments.

#include <cstdint>
#include <random>

#include "echowall/geometry.hpp"
#include "echowall/scalar.hpp"
#include "echowall/simulator.hpp"
#include "echowall/vec.hpp"

namespace echowall {

/// SplitMix64; used to derive independent per-sample streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng rng_for(std::uint64_t seed, std::uint64_t stream) { return Rng(mix_seed(seed, stream)); }

/// Uniform rational in [-max_abs, max_abs] with a random odd denominator of
/// about 2^den_bits; odd denominators keep sampled points off any fixed
/// dyadic grid a degenerate variety might align with.
inline Rational random_rational(Rng& rng, long max_abs, int den_bits = 20) {
  std::uniform_int_distribution<long> dden(1L << (den_bits - 1), (1L << den_bits) - 1);
  long den = dden(rng) | 1L;
  std::uniform_int_distribution<long> dnum(-max_abs * den, max_abs * den);
  return make_rational(dnum(rng), den);
}

/// Uniform rational in [-max_abs, max_abs] on a dyadic grid with the given
/// denominator bits; cheap denominators for hot paths.
inline Rational random_rational_dyadic(Rng& rng, long max_abs, int denom_bits) {
  long den = 1L << denom_bits;
  std::uniform_int_distribution<long> dnum(-max_abs * den, max_abs * den);
  return make_rational(dnum(rng), den);
}

template <class S>
S sample_uniform(Rng& rng, double lo, double hi);

template <>
inline double sample_uniform<double>(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

template <>
inline Rational sample_uniform<Rational>(Rng& rng, double lo, double hi) {
  // Uniform on a fine rational grid inside [lo, hi].
  const long kSteps = 1L << 24;
  std::uniform_int_distribution<long> d(0, kSteps);
  Rational t = make_rational(d(rng), kSteps);
  Rational a(lo), b(hi);
  return a + (b - a) * t;
}

/// How pose samples are drawn.
struct PoseSampler {
  double box = 4.0;          ///< translations uniform in [-box, box]^2
  double hover_range = 0.0;  ///< tz uniform in [-hover_range, hover_range]; 0 = ground
  double t_range = 3.0;      ///< rotation parameter range (exact mode)
};

template <class S>
Pose<S> sample_pose(Rng& rng, const PoseSampler& sampler, int dimension) {
  S tx = sample_uniform<S>(rng, -sampler.box, sampler.box);
  S ty = sample_uniform<S>(rng, -sampler.box, sampler.box);
  S tz = S(0);
  if (dimension == 3 && sampler.hover_range > 0.0)
    tz = sample_uniform<S>(rng, -sampler.hover_range, sampler.hover_range);
  if constexpr (scalar_traits<S>::exact) {
    long den = 1L << 20;
    long span = static_cast<long>(sampler.t_range * static_cast<double>(den));
    std::uniform_int_distribution<long> dnum(-span, span);
    Rational t = make_rational(dnum(rng), den);
    bool half_turn = (rng() & 1u) != 0;
    return Pose<S>::from_circle_param(t, std::move(tx), std::move(ty), std::move(tz), half_turn);
  } else {
    std::uniform_real_distribution<double> dtheta(0.0, 2.0 * 3.14159265358979323846);
    return Pose<double>::from_angle(dtheta(rng), tx, ty, tz);
  }
}

/// A random vehicle: microphone offsets jittered off a fixed affine basis so
/// the non-degeneracy invariant holds with margin, on a small dyadic grid to
/// keep exact-mode arithmetic fast in pose sweeps. 2D configs can carry a
/// mounted-speaker offset.
template <class S>
VehicleConfig<S> random_vehicle(Rng& rng, int dimension, bool with_speaker_offset = false) {
  auto jitter = [&rng]() -> S {
    if constexpr (scalar_traits<S>::exact)
      return random_rational_dyadic(rng, 1, 8) / S(16);  // within 1/16 m
    else
      return sample_uniform<double>(rng, -0.0625, 0.0625);
  };
  const S half = scalar_traits<S>::from_fraction(1, 2);
  for (int attempt = 0; attempt < 16; ++attempt) {
    VehicleConfig<S> config;
    if (dimension == 3) {
      config.mic_offsets = {
          Vec<S>(jitter(), jitter(), jitter()),
          Vec<S>(half + jitter(), jitter(), jitter()),
          Vec<S>(jitter(), half + jitter(), jitter()),
          Vec<S>(jitter(), jitter(), half + jitter()),
      };
    } else {
      config.mic_offsets = {
          Vec<S>(jitter(), jitter()),
          Vec<S>(half + jitter(), jitter()),
          Vec<S>(jitter(), half + jitter()),
      };
    }
    if (with_speaker_offset) {
      if (dimension == 3) throw UnsupportedConfiguration("mounted speaker is 2D-only");
      config.speaker_offset = Vec<S>(jitter(), jitter());
    }
    try {
      config.validate();
    } catch (const IllConditioned&) {
      continue;  // degenerate draw
    }
    return config;
  }
  throw IllConditioned("could not sample a non-degenerate vehicle");
}

/// A vehicle whose four microphones take exactly l distinct z-coordinates
/// (l in {2, 3, 4}), non-coplanar by construction; x-y positions jittered.
template <class S>
VehicleConfig<S> vehicle_with_z_levels(Rng& rng, int l) {
  if (l < 2 || l > 4) throw BadInput("z-level count must be 2, 3 or 4");
  auto q = [](long num, long den) { return scalar_traits<S>::from_fraction(num, den); };
  std::vector<S> z;
  switch (l) {
    case 2:
      z = {q(0, 1), q(0, 1), q(1, 2), q(1, 2)};
      break;
    case 3:
      z = {q(0, 1), q(0, 1), q(1, 2), q(3, 4)};
      break;
    default:
      z = {q(0, 1), q(1, 4), q(1, 2), q(3, 4)};
      break;
  }
  auto jitter = [&rng]() -> S {
    if constexpr (scalar_traits<S>::exact)
      return random_rational_dyadic(rng, 1, 8) / S(16);
    else
      return sample_uniform<double>(rng, -0.0625, 0.0625);
  };
  const S half = scalar_traits<S>::from_fraction(1, 2);
  const S quarter = scalar_traits<S>::from_fraction(1, 4);
  for (int attempt = 0; attempt < 16; ++attempt) {
    VehicleConfig<S> config;
    // The x-y pattern keeps the four points non-coplanar for every z layout.
    config.mic_offsets = {
        Vec<S>(jitter(), jitter(), z[0]),
        Vec<S>(half + jitter(), jitter(), z[1]),
        Vec<S>(jitter(), half + jitter(), z[2]),
        Vec<S>(half + jitter(), quarter + jitter(), z[3]),
    };
    try {
      config.validate();
    } catch (const IllConditioned&) {
      continue;
    }
    return config;
  }
  throw IllConditioned("could not sample a non-degenerate vehicle");
}

struct RandomSceneOptions {
  int dimension = 3;
  int n_walls = 4;
  double box = 8.0;            ///< mirror points sampled in [-box, box]^dim
  bool mounted_speaker = false;  ///< 2D only
  int coord_den_bits = 10;     ///< denominator size of sampled coordinates
};

template <class S>
struct RandomScene {
  Scene<S> scene;
  VehicleConfig<S> config;
};

/// A random scene: a fixed (or mounted) speaker plus walls derived from
/// random rational mirror points, so every wall is a generic plane and the
/// forward simulation is exact.
template <class S>
RandomScene<S> random_scene(Rng& rng, const RandomSceneOptions& opt = {}) {
  RandomScene<S> out;
  out.config = random_vehicle<S>(rng, opt.dimension, opt.mounted_speaker);
  out.scene.dimension = opt.dimension;

  auto coord = [&rng, &opt]() {
    if constexpr (scalar_traits<S>::exact)
      return random_rational(rng, static_cast<long>(opt.box), opt.coord_den_bits);
    else
      return sample_uniform<double>(rng, -opt.box, opt.box);
  };

  Vec<S> speaker(opt.dimension);
  for (int i = 0; i < opt.dimension; ++i) speaker[i] = coord();
  if (opt.mounted_speaker) {
    out.scene.speaker_mode = SpeakerMode::kMounted;
    // Mirror points are still sampled relative to a nominal speaker spot.
  } else {
    out.scene.speaker_mode = SpeakerMode::kFixed;
    out.scene.speaker_position = speaker;
  }

  for (int w = 0; w < opt.n_walls; ++w) {
    for (;;) {
      Vec<S> mirror(opt.dimension);
      for (int i = 0; i < opt.dimension; ++i) mirror[i] = coord();
      if (mirror == speaker) continue;  // degenerate draw
      Wall<S> wall{plane_from_mirror(speaker, mirror), std::nullopt};
      bool duplicate = false;
      for (const Wall<S>& other : out.scene.walls) {
        if constexpr (scalar_traits<S>::exact) {
          if (other.plane == wall.plane) duplicate = true;
        } else {
          if (other.plane.approx_equal(wall.plane, 1e-12)) duplicate = true;
        }
      }
      if (duplicate) continue;
      out.scene.walls.push_back(std::move(wall));
      break;
    }
  }
  out.scene.validate();
  return out;
}

}  // namespace echowall

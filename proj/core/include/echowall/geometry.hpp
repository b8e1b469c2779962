#pragma once

/// Points, oriented planes, sqrt-free reflections and rigid vehicle poses.
/// Everything here is a pure function over immutable values; exact-mode
/// results are closed under the rationals.

#include <cassert>
#include <optional>
#include <vector>

#include "echowall/errors.hpp"
#include "echowall/scalar.hpp"
#include "echowall/vec.hpp"

namespace echowall {

/// Oriented plane {x : <normal, x> = offset}, canonicalized on construction
/// so equal geometric planes compare equal:
///   exact mode: scaled so the first nonzero normal component is +1;
///   float mode: unit normal with the first sufficiently-nonzero component
///   positive.
/// In 2D a "plane" is a line; the formulas are dimension-agnostic.
template <class S>
class Plane {
 public:
  Plane(Vec<S> normal, Vec<S> anchor) : normal_(std::move(normal)), anchor_(std::move(anchor)) {
    assert(normal_.dim() == anchor_.dim());
    canonicalize();
    offset_ = normal_.dot(anchor_);
  }

  const Vec<S>& normal() const { return normal_; }
  const Vec<S>& anchor() const { return anchor_; }
  const S& offset() const { return offset_; }
  int dim() const { return normal_.dim(); }

  /// <normal, p> - offset: zero on the plane, sign gives the side.
  S signed_eval(const Vec<S>& p) const { return normal_.dot(p) - offset_; }

  /// Identical canonical representation. Exact mode: same geometric plane.
  bool operator==(const Plane& r) const { return normal_ == r.normal_ && offset_ == r.offset_; }
  bool operator!=(const Plane& r) const { return !(*this == r); }

  /// Float-mode geometric closeness of canonical forms.
  bool approx_equal(const Plane& r, double tol) const {
    if (dim() != r.dim()) return false;
    for (int i = 0; i < dim(); ++i)
      if (std::abs(to_double(normal_[i]) - to_double(r.normal_[i])) > tol) return false;
    return std::abs(to_double(offset_) - to_double(r.offset_)) <=
           tol * (1.0 + std::abs(to_double(offset_)));
  }

  /// Strict ordering on the canonical form; used for deterministic output.
  bool before(const Plane& r) const {
    for (int i = 0; i < dim(); ++i) {
      if (normal_[i] < r.normal_[i]) return true;
      if (r.normal_[i] < normal_[i]) return false;
    }
    return offset_ < r.offset_;
  }

 private:
  void canonicalize() {
    if constexpr (scalar_traits<S>::exact) {
      int lead = -1;
      for (int i = 0; i < normal_.dim(); ++i) {
        if (!scalar_traits<S>::is_zero(normal_[i])) {
          lead = i;
          break;
        }
      }
      if (lead < 0) throw InvalidPlane("plane normal is zero");
      S inv = normal_[lead];
      for (int i = 0; i < normal_.dim(); ++i) normal_[i] = normal_[i] / inv;
    } else {
      double n2 = to_double(normal_.norm2());
      if (n2 == 0.0) throw InvalidPlane("plane normal is zero");
      double inv = 1.0 / std::sqrt(n2);
      for (int i = 0; i < normal_.dim(); ++i) normal_[i] = normal_[i] * S(inv);
      // Sign: first component that is clearly nonzero decides.
      for (int i = 0; i < normal_.dim(); ++i) {
        double c = to_double(normal_[i]);
        if (std::abs(c) > 1e-9) {
          if (c < 0.0)
            for (int j = 0; j < normal_.dim(); ++j) normal_[j] = -normal_[j];
          break;
        }
      }
    }
  }

  Vec<S> normal_;
  Vec<S> anchor_;
  S offset_{};
};

/// Reflection of p across the plane, computed without square roots:
/// p - 2 <p - anchor, n> / <n, n> * n. Involution.
template <class S>
Vec<S> reflect_point(const Plane<S>& plane, const Vec<S>& p) {
  const Vec<S>& n = plane.normal();
  S nn = n.norm2();
  if (scalar_traits<S>::is_zero(nn)) throw InvalidPlane("plane normal is zero");
  S scale = S(2) * (p.dot(n) - plane.offset()) / nn;
  return p - n * scale;
}

/// Mirror point of the loudspeaker with respect to a wall: echoes from the
/// wall arrive as if emitted here.
template <class S>
Vec<S> mirror_point(const Plane<S>& wall, const Vec<S>& speaker) {
  return reflect_point(wall, speaker);
}

/// Recover the wall from its mirror point: the perpendicular bisector of
/// [speaker, s]. Throws DegenerateMirror when s == speaker (the wall would
/// pass through the loudspeaker).
template <class S>
Plane<S> plane_from_mirror(const Vec<S>& speaker, const Vec<S>& s) {
  Vec<S> n = s - speaker;
  bool zero = true;
  for (int i = 0; i < n.dim(); ++i)
    if (!scalar_traits<S>::is_zero(n[i])) zero = false;
  if (zero) throw DegenerateMirror("mirror point coincides with the speaker");
  Vec<S> mid = (speaker + s) * scalar_traits<S>::from_fraction(1, 2);
  return Plane<S>(std::move(n), std::move(mid));
}

/// Rigid vehicle pose: planar rotation (cos, sin) plus translation. The
/// vertical offset tz is zero for ground vehicles and free in hover mode.
/// Exact-mode rotations come from the rational parametrization of the unit
/// circle, t -> ((1-t^2)/(1+t^2), 2t/(1+t^2)), optionally composed with a
/// half turn to reach the excluded point (-1, 0).
template <class S>
struct Pose {
  S rot_c{};
  S rot_s{};
  S tx{};
  S ty{};
  S tz{};

  static Pose identity() {
    Pose p;
    p.rot_c = S(1);
    p.rot_s = S(0);
    p.tx = S(0);
    p.ty = S(0);
    p.tz = S(0);
    return p;
  }

  static Pose from_rotation(S c, S s, S tx, S ty, S tz = S(0),
                            const Tolerances& tol = Tolerances{}) {
    S unit = c * c + s * s - S(1);
    if constexpr (scalar_traits<S>::exact) {
      if (!scalar_traits<S>::is_zero(unit)) throw BadInput("rotation is not on the unit circle");
    } else {
      if (std::abs(to_double(unit)) > tol.pose_orthogonality)
        throw BadInput("rotation is not orthogonal within tolerance");
    }
    Pose p;
    p.rot_c = std::move(c);
    p.rot_s = std::move(s);
    p.tx = std::move(tx);
    p.ty = std::move(ty);
    p.tz = std::move(tz);
    return p;
  }

  /// Rational point on the unit circle from the parameter t; half_turn
  /// rotates by an extra pi.
  static Pose from_circle_param(const S& t, S tx, S ty, S tz = S(0), bool half_turn = false) {
    S t2 = t * t;
    S den = S(1) + t2;
    S c = (S(1) - t2) / den;
    S s = (S(2) * t) / den;
    if (half_turn) {
      c = -c;
      s = -s;
    }
    Pose p;
    p.rot_c = std::move(c);
    p.rot_s = std::move(s);
    p.tx = std::move(tx);
    p.ty = std::move(ty);
    p.tz = std::move(tz);
    return p;
  }

  static Pose from_angle(double theta, double tx, double ty, double tz = 0.0)
    requires(!scalar_traits<S>::exact)
  {
    Pose p;
    p.rot_c = std::cos(theta);
    p.rot_s = std::sin(theta);
    p.tx = tx;
    p.ty = ty;
    p.tz = tz;
    return p;
  }

  bool is_ground() const { return scalar_traits<S>::is_zero(tz); }
};

/// R p + t with the planar block structure: x,y rotate and translate, z
/// passes through (shifted by tz in hover mode). 2D points must have tz = 0.
template <class S>
Vec<S> apply_pose(const Pose<S>& pose, const Vec<S>& p) {
  assert(p.dim() == 2 || p.dim() == 3);
  S nx = pose.rot_c * p[0] - pose.rot_s * p[1] + pose.tx;
  S ny = pose.rot_s * p[0] + pose.rot_c * p[1] + pose.ty;
  if (p.dim() == 2) {
    assert(scalar_traits<S>::is_zero(pose.tz));
    return Vec<S>(std::move(nx), std::move(ny));
  }
  return Vec<S>(std::move(nx), std::move(ny), p[2] + pose.tz);
}

/// Group composition: apply_pose(compose(f, g), p) == apply_pose(f, apply_pose(g, p)).
template <class S>
Pose<S> compose(const Pose<S>& f, const Pose<S>& g) {
  Pose<S> out;
  out.rot_c = f.rot_c * g.rot_c - f.rot_s * g.rot_s;
  out.rot_s = f.rot_s * g.rot_c + f.rot_c * g.rot_s;
  out.tx = f.rot_c * g.tx - f.rot_s * g.ty + f.tx;
  out.ty = f.rot_s * g.tx + f.rot_c * g.ty + f.ty;
  out.tz = f.tz + g.tz;
  return out;
}

/// Affine rank of a point set: Gram-Schmidt on edge vectors from the first
/// point, counting directions whose residual survives. Exact mode accepts a
/// direction iff the residual is nonzero; float mode iff its squared norm
/// exceeds (rel_tol * original_norm)^2.
template <class S>
int affine_rank(const std::vector<Vec<S>>& points, double rel_tol = 1e-10) {
  assert(!points.empty());
  std::vector<Vec<S>> basis;  // unnormalized, pairwise orthogonal
  for (size_t k = 1; k < points.size(); ++k) {
    Vec<S> v = points[k] - points[0];
    S orig2 = v.norm2();
    for (const Vec<S>& b : basis) {
      S coeff = v.dot(b) / b.norm2();
      v = v - b * coeff;
    }
    S res2 = v.norm2();
    bool keep;
    if constexpr (scalar_traits<S>::exact) {
      keep = !scalar_traits<S>::is_zero(res2);
    } else {
      keep = to_double(res2) > rel_tol * rel_tol * to_double(orig2);
    }
    if (keep) basis.push_back(std::move(v));
  }
  return static_cast<int>(basis.size());
}

/// True iff the points fail to span their ambient dimension affinely.
template <class S>
bool is_coplanar(const std::vector<Vec<S>>& points, double rel_tol = 1e-10) {
  assert(!points.empty());
  return affine_rank(points, rel_tol) < points[0].dim();
}

/// 2D alias: true iff all points lie on a common line.
template <class S>
bool is_collinear(const std::vector<Vec<S>>& points, double rel_tol = 1e-10) {
  assert(!points.empty());
  assert(points[0].dim() == 2);
  return affine_rank(points, rel_tol) < 2;
}

/// Microphone offsets in the vehicle frame, plus the mount point of a
/// vehicle-carried loudspeaker when present. 3D configurations carry four
/// non-coplanar microphones, 2D configurations three non-collinear ones.
template <class S>
struct VehicleConfig {
  std::vector<Vec<S>> mic_offsets;
  std::optional<Vec<S>> speaker_offset;

  int dimension() const { return mic_offsets.empty() ? 0 : mic_offsets[0].dim(); }

  void validate(double rel_tol = 1e-10) const {
    int dim = dimension();
    if (dim == 3) {
      if (mic_offsets.size() != 4) throw BadInput("3D configurations need exactly 4 microphones");
      if (is_coplanar(mic_offsets, rel_tol))
        throw IllConditioned("the four microphones lie on a common plane");
    } else if (dim == 2) {
      if (mic_offsets.size() != 3) throw BadInput("2D configurations need exactly 3 microphones");
      if (is_collinear(mic_offsets, rel_tol))
        throw IllConditioned("the three microphones lie on a common line");
    } else {
      throw BadInput("microphone offsets must be 2D or 3D");
    }
    if (speaker_offset && speaker_offset->dim() != dim)
      throw BadInput("speaker offset dimension mismatch");
  }

  /// World microphone positions at the given pose.
  std::vector<Vec<S>> mics_at(const Pose<S>& pose) const {
    std::vector<Vec<S>> out;
    out.reserve(mic_offsets.size());
    for (const Vec<S>& m : mic_offsets) out.push_back(apply_pose(pose, m));
    return out;
  }
};

}  // namespace echowall

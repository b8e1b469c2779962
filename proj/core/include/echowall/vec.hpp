#pragma once

/// Small fixed-capacity point/vector type used for 2D and 3D scenes.
/// Unused slots stay value-initialized (zero), so equality and hashing are
/// well defined across same-dimension values.

#include <array>
#include <cassert>
#include <cstdint>
#include <initializer_list>

#include "echowall/scalar.hpp"

namespace echowall {

template <class S>
class Vec {
 public:
  Vec() = default;
  explicit Vec(int dim) : dim_(dim) { assert(dim >= 0 && dim <= 3); }
  Vec(S x, S y) : dim_(2) {
    c_[0] = std::move(x);
    c_[1] = std::move(y);
  }
  Vec(S x, S y, S z) : dim_(3) {
    c_[0] = std::move(x);
    c_[1] = std::move(y);
    c_[2] = std::move(z);
  }

  static Vec zero(int dim) { return Vec(dim); }

  int dim() const { return dim_; }

  const S& operator[](int i) const {
    assert(i >= 0 && i < dim_);
    return c_[static_cast<size_t>(i)];
  }
  S& operator[](int i) {
    assert(i >= 0 && i < dim_);
    return c_[static_cast<size_t>(i)];
  }

  const S& x() const { return (*this)[0]; }
  const S& y() const { return (*this)[1]; }
  const S& z() const { return (*this)[2]; }

  Vec operator+(const Vec& r) const {
    assert(dim_ == r.dim_);
    Vec out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = (*this)[i] + r[i];
    return out;
  }
  Vec operator-(const Vec& r) const {
    assert(dim_ == r.dim_);
    Vec out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = (*this)[i] - r[i];
    return out;
  }
  Vec operator-() const {
    Vec out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = -(*this)[i];
    return out;
  }
  Vec operator*(const S& s) const {
    Vec out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = (*this)[i] * s;
    return out;
  }
  friend Vec operator*(const S& s, const Vec& v) { return v * s; }

  S dot(const Vec& r) const {
    assert(dim_ == r.dim_);
    S acc = (*this)[0] * r[0];
    for (int i = 1; i < dim_; ++i) acc += (*this)[i] * r[i];
    return acc;
  }

  /// Squared Euclidean norm; stays inside S (no square roots).
  S norm2() const { return dot(*this); }

  /// Euclidean norm as double (exact values are narrowed).
  double norm() const { return std::sqrt(to_double(norm2())); }

  bool operator==(const Vec& r) const {
    if (dim_ != r.dim_) return false;
    for (int i = 0; i < dim_; ++i)
      if (!((*this)[i] == r[i])) return false;
    return true;
  }
  bool operator!=(const Vec& r) const { return !(*this == r); }

  /// Max |component| difference as double; for float-mode closeness checks.
  double distance_inf(const Vec& r) const {
    assert(dim_ == r.dim_);
    double worst = 0.0;
    for (int i = 0; i < dim_; ++i) {
      double d = std::abs(to_double((*this)[i]) - to_double(r[i]));
      if (d > worst) worst = d;
    }
    return worst;
  }

  Vec<double> to_double_vec() const {
    Vec<double> out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = to_double((*this)[i]);
    return out;
  }

 private:
  std::array<S, 3> c_{};
  int dim_ = 0;
};

using Vec3d = Vec<double>;
using Vec3q = Vec<Rational>;

}  // namespace echowall

#pragma once

/// Scalar modes. Every geometric kernel in this library is generic over a
/// scalar type S, instantiated with either `double` or `Rational` (an exact
/// arbitrary-precision rational). Exact mode makes "determinant == 0" an
/// honest test with no false positives; float mode models a realistic
/// pipeline and is validated against exact mode.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "echowall/errors.hpp"

namespace echowall {

using Rational = mpq_class;
using Integer = mpz_class;

/// Rational from numerator/denominator, canonicalized.
inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double from_int(long v) { return static_cast<double>(v); }
  static double from_fraction(long num, long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double from_double(double v) { return v; }
  static double to_double(double v) { return v; }
  static bool is_zero(double v) { return v == 0.0; }
  static std::string to_string(double v);
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational from_int(long v) { return Rational(v); }
  static Rational from_fraction(long num, long den) { return make_rational(num, den); }
  // Exact: a double is a dyadic rational.
  static Rational from_double(double v) { return Rational(v); }
  static double to_double(const Rational& v) { return v.get_d(); }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static std::string to_string(const Rational& v) { return v.get_str(); }
};

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.get_d(); }

inline double abs_double(double v) { return std::abs(v); }
inline double abs_double(const Rational& v) { return std::abs(v.get_d()); }

/// Parse "p/q", plain integers, and decimal/scientific literals ("3.25",
/// "-1e-3") into an exact rational.
Rational parse_rational(const std::string& text);

/// Float-mode tolerances, centralized so experiments can sweep them.
/// Exact mode ignores every field: its zero tests are literal.
struct Tolerances {
  double coplanar_rel = 1e-10;        ///< affine-rank pivot cutoff, relative to scale
  double match_residual = 1e-8;       ///< scale-free zero test for the matching determinant
  double merge_time_gap_s = 1e-12;    ///< coincident echo arrivals merge below this gap
  double mirror_dedup_m = 1e-9;       ///< detected mirror points closer than this are one wall
  double plane_match_m = 1e-9;        ///< evaluation: detected-vs-true mirror distance
  double trilateration_drop_rel = 1e-6;  ///< drop tuples with RMS above this times scene scale
  double pose_orthogonality = 1e-12;  ///< |c^2 + s^2 - 1| bound for float rotations
};

}  // namespace echowall

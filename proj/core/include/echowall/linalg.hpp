#pragma once

/// Dense determinant and solve kernels for the small matrices used by the
/// matching relation (up to 6x6) and trilateration (up to 3x3).
/// Exact determinants run fraction-free (Bareiss) over integers after
/// clearing denominators; float determinants use LU with partial pivoting.

#include <cassert>
#include <cmath>
#include <vector>

#include "echowall/errors.hpp"
#include "echowall/scalar.hpp"

namespace echowall {

/// Row-major square matrix, minimal on purpose.
template <class S>
struct SquareMatrix {
  int n = 0;
  std::vector<S> a;

  explicit SquareMatrix(int size) : n(size), a(static_cast<size_t>(size) * size) {}

  S& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const S& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

/// Fraction-free Bareiss elimination; exact for integer entries.
/// Consumes its argument.
inline Integer det_bareiss(std::vector<Integer> m, int n) {
  auto at = [&](int i, int j) -> Integer& { return m[static_cast<size_t>(i) * n + j]; };
  Integer prev(1);
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (sgn(at(k, k)) == 0) {
      int pivot = -1;
      for (int i = k + 1; i < n; ++i) {
        if (sgn(at(i, k)) != 0) {
          pivot = i;
          break;
        }
      }
      if (pivot < 0) return Integer(0);
      for (int j = k; j < n; ++j) std::swap(at(k, j), at(pivot, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        at(i, j) = (at(k, k) * at(i, j) - at(i, k) * at(k, j)) / prev;
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  Integer out = at(n - 1, n - 1);
  if (sign < 0) out = -out;
  return out;
}

/// LU with partial pivoting; returns 0 on exact singularity.
inline double det_lu(std::vector<double> m, int n) {
  auto at = [&](int i, int j) -> double& { return m[static_cast<size_t>(i) * n + j]; };
  double det = 1.0;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    double best = std::abs(at(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(at(i, k));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != k) {
      for (int j = k; j < n; ++j) std::swap(at(k, j), at(pivot, j));
      det = -det;
    }
    det *= at(k, k);
    for (int i = k + 1; i < n; ++i) {
      double f = at(i, k) / at(k, k);
      for (int j = k + 1; j < n; ++j) at(i, j) -= f * at(k, j);
    }
  }
  return det;
}

template <class S>
S determinant(const SquareMatrix<S>& m);

template <>
inline double determinant<double>(const SquareMatrix<double>& m) {
  return det_lu(m.a, m.n);
}

template <>
inline Rational determinant<Rational>(const SquareMatrix<Rational>& m) {
  std::vector<Integer> scaled;
  Integer lcm(1);
  for (const Rational& q : m.a) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
  scaled.resize(m.a.size());
  for (size_t i = 0; i < m.a.size(); ++i) {
    Integer factor = lcm / m.a[i].get_den();
    scaled[i] = m.a[i].get_num() * factor;
  }
  Integer det_scaled = det_bareiss(std::move(scaled), m.n);
  // det(L * A) = L^n det(A)
  Integer denom(1);
  mpz_pow_ui(denom.get_mpz_t(), lcm.get_mpz_t(), static_cast<unsigned long>(m.n));
  Rational out(det_scaled, denom);
  out.canonicalize();
  return out;
}

/// Solve A x = b by Gaussian elimination. Exact over rationals (zero pivot
/// means singular); partial pivoting in float mode. Throws IllConditioned
/// on singularity.
template <class S>
std::vector<S> solve_linear(SquareMatrix<S> a, std::vector<S> b) {
  const int n = a.n;
  assert(static_cast<int>(b.size()) == n);
  for (int k = 0; k < n; ++k) {
    int pivot = -1;
    if constexpr (scalar_traits<S>::exact) {
      for (int i = k; i < n; ++i) {
        if (!scalar_traits<S>::is_zero(a.at(i, k))) {
          pivot = i;
          break;
        }
      }
    } else {
      double best = 0.0;
      for (int i = k; i < n; ++i) {
        double v = std::abs(to_double(a.at(i, k)));
        if (v > best) {
          best = v;
          pivot = i;
        }
      }
      if (best == 0.0) pivot = -1;
    }
    if (pivot < 0) throw IllConditioned("singular linear system");
    if (pivot != k) {
      for (int j = k; j < n; ++j) std::swap(a.at(k, j), a.at(pivot, j));
      std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(pivot)]);
    }
    for (int i = k + 1; i < n; ++i) {
      S f = a.at(i, k) / a.at(k, k);
      for (int j = k; j < n; ++j) a.at(i, j) = a.at(i, j) - f * a.at(k, j);
      b[static_cast<size_t>(i)] = b[static_cast<size_t>(i)] - f * b[static_cast<size_t>(k)];
    }
  }
  std::vector<S> x(static_cast<size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    S acc = b[static_cast<size_t>(i)];
    for (int j = i + 1; j < n; ++j) acc = acc - a.at(i, j) * x[static_cast<size_t>(j)];
    x[static_cast<size_t>(i)] = acc / a.at(i, i);
  }
  return x;
}

}  // namespace echowall

#pragma once

/// The matching kernel. For n microphones with squared inter-microphone
/// distances D and a tuple u of squared source-to-microphone distances, the
/// bordered determinant
///
///       | 0    u1 ... un  1 |
///       | u1  D11 ... D1n 1 |
///   f = | ...             . |
///       | un  Dn1 ... Dnn 1 |
///       | 1    1  ...  1  0 |
///
/// vanishes exactly when all n distances are consistent with one common
/// source point in the ambient dimension. The kernel is generic in n, so the
/// 2D (n = 3) and 3D (n = 4) pipelines share one implementation.

#include <cassert>
#include <vector>

#include "echowall/errors.hpp"
#include "echowall/linalg.hpp"
#include "echowall/scalar.hpp"
#include "echowall/vec.hpp"

namespace echowall {

/// Symmetric matrix of squared inter-microphone distances. Construction
/// validates realizability in the intended dimension, so malformed configs
/// are rejected at the boundary.
template <class S>
class MicGram {
 public:
  /// From explicit entries (row-major n x n). Throws BadInput if the matrix
  /// is not symmetric with a zero diagonal and nonnegative entries, or not
  /// realizable by n points in R^dim.
  MicGram(std::vector<S> entries, int n, int dim) : n_(n), d_(std::move(entries)) {
    if (static_cast<int>(d_.size()) != n * n) throw BadInput("distance matrix size mismatch");
    for (int i = 0; i < n; ++i) {
      if (!scalar_traits<S>::is_zero(at(i, i))) throw BadInput("distance matrix diagonal must be zero");
      for (int j = 0; j < i; ++j) {
        if (!(at(i, j) == at(j, i))) throw BadInput("distance matrix must be symmetric");
        if (to_double(at(i, j)) < 0.0) throw BadInput("squared distances must be nonnegative");
      }
    }
    if (!realizable_in(dim)) throw BadInput("distances are not realizable in the scene dimension");
  }

  /// From microphone positions.
  static MicGram from_points(const std::vector<Vec<S>>& mics) {
    int n = static_cast<int>(mics.size());
    std::vector<S> d(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[static_cast<size_t>(i) * n + j] = (mics[i] - mics[j]).norm2();
    MicGram g;
    g.n_ = n;
    g.d_ = std::move(d);
    return g;
  }

  int size() const { return n_; }
  const S& at(int i, int j) const { return d_[static_cast<size_t>(i) * n_ + j]; }

  /// True iff the distances embed as n points in R^dim: the Gram matrix
  /// anchored at the first point must be positive semidefinite with rank at
  /// most dim. Exact in rational mode, pivot-thresholded in float mode.
  bool realizable_in(int dim, double rel_tol = 1e-9) const {
    int m = n_ - 1;
    SquareMatrix<S> g(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        g.at(i, j) =
            (at(0, i + 1) + at(0, j + 1) - at(i + 1, j + 1)) / scalar_traits<S>::from_int(2);
    double scale = 0.0;
    for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(to_double(g.at(i, i))));
    int rank = 0;
    for (int k = 0; k < m; ++k) {
      // Pick the largest remaining diagonal pivot.
      int pivot = k;
      double best = to_double(g.at(k, k));
      for (int i = k + 1; i < m; ++i) {
        double v = to_double(g.at(i, i));
        if (v > best) {
          best = v;
          pivot = i;
        }
      }
      if (pivot != k) {
        for (int j = 0; j < m; ++j) std::swap(g.at(k, j), g.at(pivot, j));
        for (int i = 0; i < m; ++i) std::swap(g.at(i, k), g.at(i, pivot));
      }
      bool diag_zero;
      if constexpr (scalar_traits<S>::exact) {
        int s = sgn(Rational(g.at(k, k)));
        if (s < 0) return false;  // negative pivot: not PSD
        diag_zero = (s == 0);
      } else {
        double v = to_double(g.at(k, k));
        if (v < -rel_tol * scale) return false;
        diag_zero = (v <= rel_tol * scale);
      }
      if (diag_zero) {
        // PSD forces the whole remaining row to vanish.
        for (int j = k; j < m; ++j) {
          if constexpr (scalar_traits<S>::exact) {
            if (!scalar_traits<S>::is_zero(g.at(k, j))) return false;
          } else {
            if (std::abs(to_double(g.at(k, j))) > rel_tol * scale) return false;
          }
        }
        continue;
      }
      ++rank;
      if (rank > dim) return false;
      // Row operations only; the remaining block is the Schur complement,
      // which stays symmetric, and rows above k are never read again.
      for (int i = k + 1; i < m; ++i) {
        S f = g.at(i, k) / g.at(k, k);
        for (int j = k; j < m; ++j) g.at(i, j) = g.at(i, j) - f * g.at(k, j);
      }
    }
    return true;
  }

 private:
  MicGram() = default;
  int n_ = 0;
  std::vector<S> d_;
};

/// The bordered matrix, verbatim: size (n + 2) x (n + 2).
template <class S>
SquareMatrix<S> cm_matrix(const std::vector<S>& u, const MicGram<S>& gram) {
  const int n = gram.size();
  if (static_cast<int>(u.size()) != n) throw BadInput("distance tuple size mismatch");
  SquareMatrix<S> m(n + 2);
  for (int i = 0; i < n; ++i) {
    m.at(0, i + 1) = u[static_cast<size_t>(i)];
    m.at(i + 1, 0) = u[static_cast<size_t>(i)];
    m.at(i + 1, n + 1) = S(1);
    m.at(n + 1, i + 1) = S(1);
    for (int j = 0; j < n; ++j) m.at(i + 1, j + 1) = gram.at(i, j);
  }
  m.at(0, n + 1) = S(1);
  m.at(n + 1, 0) = S(1);
  return m;
}

/// The matching determinant itself. Exact in rational mode. Homogeneous of
/// degree n in the distance entries: scaling every squared distance by a^2
/// scales the value by a^(2(n+2)-4), e.g. a^8 for n = 4.
template <class S>
S cm_det(const std::vector<S>& u, const MicGram<S>& gram) {
  return determinant(cm_matrix(u, gram));
}

/// True iff the squared-distance matrix embeds as points in R^dim.
template <class S>
bool realizability_check(const MicGram<S>& gram, int dim, double rel_tol = 1e-9) {
  return gram.realizable_in(dim, rel_tol);
}

/// Scale-free zero test for float mode: |f| normalized by the fourth power
/// of the mean nonzero squared distance in the bordered matrix's distance
/// block. Degree-8 homogeneity (n = 4) makes the quotient invariant under
/// global scene scaling; for n = 3 the normalization exponent is 3.
inline double cm_residual(const std::vector<double>& u, const MicGram<double>& gram) {
  const int n = gram.size();
  double sum = 0.0;
  int count = 0;
  for (double v : u) {
    if (v != 0.0) {
      sum += 2.0 * std::abs(v);  // border row and column
      count += 2;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (gram.at(i, j) != 0.0) {
        sum += std::abs(gram.at(i, j));
        ++count;
      }
  if (count == 0) throw DegenerateScale("all distances are zero");
  double mean = sum / count;
  double norm = 1.0;
  // Degree of f in the distance entries is (n + 2) - 2.
  for (int k = 0; k < n; ++k) norm *= mean;
  return std::abs(cm_det(u, gram)) / norm;
}

}  // namespace echowall

#pragma once

/// Wall detection from first-order echoes. Every tuple in the Cartesian
/// product of the per-microphone squared-distance sets is tested against the
/// matching determinant; tuples that pass are trilaterated to a mirror point
/// and converted to a wall. The full product is enumerated by default; an
/// optional triangle-inequality prune exists behind a flag.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "echowall/cayley_menger.hpp"
#include "echowall/errors.hpp"
#include "echowall/geometry.hpp"
#include "echowall/linalg.hpp"
#include "echowall/scalar.hpp"
#include "echowall/simulator.hpp"
#include "echowall/vec.hpp"

namespace echowall {

template <class S>
struct TrilaterationResult {
  Vec<S> point;
  double rms_m;  ///< RMS mismatch between given and recomputed distances, meters
};

/// Solve |s - m_j|^2 = d_j for the unique source point. Subtracting the
/// first equation from the others gives a square linear system
///   2 <m_j - m_0, s> = (|m_j|^2 - |m_0|^2) - (d_j - d_0),
/// solvable exactly in rational mode. Requires n = dim + 1 affinely
/// independent microphones.
template <class S>
TrilaterationResult<S> trilaterate(const std::vector<S>& d2, const std::vector<Vec<S>>& mics,
                                   double coplanar_rel = 1e-10) {
  const int n = static_cast<int>(mics.size());
  if (n == 0 || d2.size() != mics.size()) throw BadInput("trilateration size mismatch");
  const int dim = mics[0].dim();
  if (n != dim + 1) throw BadInput("trilateration needs dimension+1 microphones");
  if (affine_rank(mics, coplanar_rel) < dim)
    throw IllConditioned("microphones are affinely dependent");

  SquareMatrix<S> a(dim);
  std::vector<S> b(static_cast<size_t>(dim));
  for (int j = 1; j <= dim; ++j) {
    Vec<S> row = mics[static_cast<size_t>(j)] - mics[0];
    for (int k = 0; k < dim; ++k) a.at(j - 1, k) = S(2) * row[k];
    b[static_cast<size_t>(j - 1)] =
        (mics[static_cast<size_t>(j)].norm2() - mics[0].norm2()) -
        (d2[static_cast<size_t>(j)] - d2[0]);
  }
  std::vector<S> x = solve_linear(std::move(a), std::move(b));
  Vec<S> point(dim);
  for (int k = 0; k < dim; ++k) point[k] = std::move(x[static_cast<size_t>(k)]);

  bool exact_consistent = true;
  double sq_sum = 0.0;
  for (int j = 0; j < n; ++j) {
    S back = (point - mics[static_cast<size_t>(j)]).norm2();
    if constexpr (scalar_traits<S>::exact) {
      if (!(back == d2[static_cast<size_t>(j)])) exact_consistent = false;
    }
    double diff = std::sqrt(std::max(0.0, to_double(back))) -
                  std::sqrt(std::max(0.0, to_double(d2[static_cast<size_t>(j)])));
    sq_sum += diff * diff;
  }
  double rms = std::sqrt(sq_sum / n);
  if constexpr (scalar_traits<S>::exact) {
    if (exact_consistent) rms = 0.0;
  }
  return {std::move(point), rms};
}

/// A wall reconstructed by the detector, with provenance.
template <class S>
struct DetectedWall {
  Vec<S> mirror;
  Plane<S> plane;
  double residual = 0.0;     ///< trilateration RMS of the representative tuple, meters
  std::vector<S> tuple;      ///< the squared-distance tuple that produced it
  int support = 1;           ///< number of distinct tuples reproducing this plane
};

struct DetectDiagnostics {
  std::uint64_t tuples_tested = 0;
  std::uint64_t tuples_passed = 0;
  std::uint64_t tuples_pruned = 0;
  std::uint64_t dropped_inconsistent = 0;  ///< passed the zero test, failed trilateration
  std::uint64_t dropped_degenerate = 0;    ///< trilaterated onto the speaker itself
};

template <class S>
struct DetectResult {
  std::vector<DetectedWall<S>> walls;  ///< sorted by canonical plane key
  DetectDiagnostics diag;
};

struct DetectOptions {
  Tolerances tol;
  bool interval_prune = false;  ///< optional sorted-distance prune; off by default
};

namespace detail {

/// Zero test for the matching determinant over one Cartesian product.
/// Exact mode scales every candidate distance by one common denominator up
/// front and runs fraction-free elimination over integers, reusing buffers
/// across tuples.
class ExactTupleTester {
 public:
  ExactTupleTester(const std::vector<std::vector<Rational>>& d_sets, const MicGram<Rational>& gram)
      : n_(gram.size()) {
    Integer lcm(1);
    auto fold = [&lcm](const Rational& q) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
    };
    for (const auto& set : d_sets)
      for (const Rational& q : set) fold(q);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) fold(gram.at(i, j));

    scaled_sets_.resize(d_sets.size());
    for (size_t i = 0; i < d_sets.size(); ++i) {
      scaled_sets_[i].reserve(d_sets[i].size());
      for (const Rational& q : d_sets[i])
        scaled_sets_[i].push_back(q.get_num() * (lcm / Integer(q.get_den())));
    }
    scaled_gram_.resize(static_cast<size_t>(n_) * n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        const Rational& q = gram.at(i, j);
        scaled_gram_[static_cast<size_t>(i) * n_ + j] = q.get_num() * (lcm / Integer(q.get_den()));
      }
    one_ = lcm;
    const int m = n_ + 2;
    work_.assign(static_cast<size_t>(m) * m, Integer(0));
  }

  /// True iff the determinant vanishes for the tuple selected by idx.
  bool vanishes(const std::vector<int>& idx) {
    const int m = n_ + 2;
    auto at = [&](int i, int j) -> Integer& { return work_[static_cast<size_t>(i) * m + j]; };
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) at(i, j) = 0;
    for (int i = 0; i < n_; ++i) {
      const Integer& u = scaled_sets_[static_cast<size_t>(i)][static_cast<size_t>(idx[i])];
      at(0, i + 1) = u;
      at(i + 1, 0) = u;
      at(i + 1, n_ + 1) = one_;
      at(n_ + 1, i + 1) = one_;
      for (int j = 0; j < n_; ++j) at(i + 1, j + 1) = scaled_gram_[static_cast<size_t>(i) * n_ + j];
    }
    at(0, n_ + 1) = one_;
    at(n_ + 1, 0) = one_;

    // In-place Bareiss with scratch reuse; only zero-ness is needed.
    Integer prev(1);
    for (int k = 0; k < m - 1; ++k) {
      if (sgn(at(k, k)) == 0) {
        int pivot = -1;
        for (int i = k + 1; i < m; ++i)
          if (sgn(at(i, k)) != 0) {
            pivot = i;
            break;
          }
        if (pivot < 0) return true;  // whole column zero: singular
        for (int j = k; j < m; ++j) std::swap(at(k, j), at(pivot, j));
      }
      for (int i = k + 1; i < m; ++i) {
        for (int j = k + 1; j < m; ++j) {
          mpz_mul(t1_.get_mpz_t(), at(k, k).get_mpz_t(), at(i, j).get_mpz_t());
          mpz_submul(t1_.get_mpz_t(), at(i, k).get_mpz_t(), at(k, j).get_mpz_t());
          mpz_divexact(at(i, j).get_mpz_t(), t1_.get_mpz_t(), prev.get_mpz_t());
        }
        at(i, k) = 0;
      }
      prev = at(k, k);
    }
    return sgn(at(m - 1, m - 1)) == 0;
  }

 private:
  int n_;
  Integer one_;
  std::vector<std::vector<Integer>> scaled_sets_;
  std::vector<Integer> scaled_gram_;
  std::vector<Integer> work_;
  Integer t1_;
};

}  // namespace detail

/// Algorithm core: enumerate the Cartesian product of per-microphone
/// squared-distance sets, keep tuples whose matching determinant vanishes,
/// trilaterate each survivor and emit the corresponding wall. Detection
/// never consults ground truth. Output is sorted by canonical plane key and
/// deduplicated (minimum-residual representative, support counted).
template <class S>
DetectResult<S> detect(const std::vector<std::vector<S>>& d_sets, const std::vector<Vec<S>>& mics,
                       const Vec<S>& speaker, const DetectOptions& opt = {}) {
  const int n = static_cast<int>(mics.size());
  if (n == 0) throw BadInput("no microphones");
  const int dim = mics[0].dim();
  if (n != dim + 1) throw BadInput("detection needs dimension+1 microphones");
  if (static_cast<int>(d_sets.size()) != n)
    throw BadInput("per-microphone distance sets size mismatch");
  if (affine_rank(mics, opt.tol.coplanar_rel) < dim)
    throw IllConditioned("microphones are affinely dependent");

  DetectResult<S> out;
  for (const auto& set : d_sets)
    if (set.empty()) return out;  // some microphone heard nothing

  MicGram<S> gram = MicGram<S>::from_points(mics);

  // Pairwise distances for the optional prune (meters, float view).
  std::vector<double> mic_dist;
  std::vector<std::vector<double>> ranges(d_sets.size());
  if (opt.interval_prune) {
    mic_dist.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        mic_dist[static_cast<size_t>(i) * n + j] = std::sqrt(to_double(gram.at(i, j)));
    for (size_t i = 0; i < d_sets.size(); ++i)
      for (const S& d : d_sets[i]) ranges[i].push_back(std::sqrt(to_double(d)));
  }

  std::optional<detail::ExactTupleTester> exact_tester;
  if constexpr (scalar_traits<S>::exact) exact_tester.emplace(d_sets, gram);

  std::vector<DetectedWall<S>> clusters;
  std::vector<int> idx(static_cast<size_t>(n), 0);
  std::vector<S> tuple(static_cast<size_t>(n));

  for (;;) {
    ++out.diag.tuples_tested;
    bool pruned = false;
    if (opt.interval_prune) {
      // Two echoes of one source differ by at most the microphone spacing.
      for (int i = 0; i < n && !pruned; ++i)
        for (int j = i + 1; j < n; ++j) {
          double gap = std::abs(ranges[static_cast<size_t>(i)][static_cast<size_t>(idx[i])] -
                                ranges[static_cast<size_t>(j)][static_cast<size_t>(idx[j])]);
          if (gap > mic_dist[static_cast<size_t>(i) * n + j] + 1e-9) {
            pruned = true;
            break;
          }
        }
    }
    if (pruned) {
      ++out.diag.tuples_pruned;
    } else {
      for (int i = 0; i < n; ++i)
        tuple[static_cast<size_t>(i)] = d_sets[static_cast<size_t>(i)][static_cast<size_t>(idx[i])];

      bool passes;
      if constexpr (scalar_traits<S>::exact) {
        passes = exact_tester->vanishes(idx);
      } else {
        passes = cm_residual(tuple, gram) < opt.tol.match_residual;
      }

      if (passes) {
        ++out.diag.tuples_passed;
        TrilaterationResult<S> tri = trilaterate(tuple, mics, opt.tol.coplanar_rel);
        double scale = 0.0;
        for (const S& d : tuple) scale = std::max(scale, std::sqrt(std::max(0.0, to_double(d))));
        if (tri.rms_m > opt.tol.trilateration_drop_rel * std::max(scale, 1e-300)) {
          ++out.diag.dropped_inconsistent;
        } else {
          bool degenerate = tri.point == speaker;
          if constexpr (!scalar_traits<S>::exact)
            degenerate = tri.point.distance_inf(speaker) < opt.tol.mirror_dedup_m;
          if (degenerate) {
            ++out.diag.dropped_degenerate;
          } else {
            Plane<S> plane = plane_from_mirror(speaker, tri.point);
            // Cluster with existing detections.
            DetectedWall<S>* home = nullptr;
            for (DetectedWall<S>& c : clusters) {
              bool same;
              if constexpr (scalar_traits<S>::exact)
                same = (c.plane == plane);
              else
                same = c.mirror.distance_inf(tri.point) < opt.tol.mirror_dedup_m;
              if (same) {
                home = &c;
                break;
              }
            }
            if (home) {
              ++home->support;
              if (tri.rms_m < home->residual) {
                home->mirror = tri.point;
                home->plane = plane;
                home->residual = tri.rms_m;
                home->tuple = tuple;
              }
            } else {
              clusters.push_back(DetectedWall<S>{tri.point, plane, tri.rms_m, tuple, 1});
            }
          }
        }
      }
    }

    // Odometer over the Cartesian product.
    int pos = n - 1;
    while (pos >= 0) {
      if (++idx[static_cast<size_t>(pos)] < static_cast<int>(d_sets[static_cast<size_t>(pos)].size()))
        break;
      idx[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }

  std::sort(clusters.begin(), clusters.end(),
            [](const DetectedWall<S>& a, const DetectedWall<S>& b) { return a.plane.before(b.plane); });
  out.walls = std::move(clusters);
  return out;
}

/// Classification of a detection run against ground truth. A detected plane
/// matching no true wall is a ghost; a wall audible to every microphone but
/// absent from the output is missed (the detection guarantee makes that an
/// implementation bug, and tests treat it as failure).
template <class S>
struct EvaluationReport {
  std::vector<DetectedWall<S>> true_walls_found;
  std::vector<DetectedWall<S>> ghosts;
  std::vector<Plane<S>> missed;
  bool is_bad_position = false;
};

struct EvalOptions {
  Tolerances tol;
  bool audibility = true;
};

template <class S>
EvaluationReport<S> evaluate(const std::vector<DetectedWall<S>>& detected, const Scene<S>& scene,
                             const VehicleConfig<S>& config, const Pose<S>& pose,
                             const EvalOptions& opt = {}) {
  Vec<S> speaker = scene.speaker_at(pose, config);
  std::vector<Vec<S>> mics = config.mics_at(pose);

  std::vector<Vec<S>> true_mirrors;
  true_mirrors.reserve(scene.walls.size());
  for (const Wall<S>& w : scene.walls) true_mirrors.push_back(mirror_point(w.plane, speaker));

  EvaluationReport<S> report;
  std::vector<bool> wall_found(scene.walls.size(), false);
  for (const DetectedWall<S>& d : detected) {
    bool matched = false;
    for (size_t k = 0; k < scene.walls.size(); ++k) {
      bool same;
      if constexpr (scalar_traits<S>::exact)
        same = (d.plane == scene.walls[k].plane);
      else
        same = d.mirror.distance_inf(true_mirrors[k]) < opt.tol.plane_match_m;
      if (same) {
        matched = true;
        wall_found[k] = true;
      }
    }
    if (matched)
      report.true_walls_found.push_back(d);
    else
      report.ghosts.push_back(d);
  }

  for (size_t k = 0; k < scene.walls.size(); ++k) {
    if (wall_found[k]) continue;
    bool all_hear = true;
    for (const Vec<S>& m : mics) {
      if (opt.audibility && !audible(scene.walls[k], speaker, m)) {
        all_hear = false;
        break;
      }
    }
    if (all_hear) report.missed.push_back(scene.walls[k].plane);
  }

  report.is_bad_position = !report.ghosts.empty();
  return report;
}

}  // namespace echowall

#include <doctest.h>

#include <algorithm>

#include "echowall/cayley_menger.hpp"
#include "test_support.hpp"

using namespace echowall;
using namespace echowall_test;
using Q = Rational;

namespace {

Q q(long num, long den = 1) { return make_rational(num, den); }

MicGram<Q> gram_of(const std::vector<Vec<Q>>& mics) { return MicGram<Q>::from_points(mics); }

}  // namespace

TEST_CASE("bordered matrix layout") {
  std::vector<Vec<Q>> mics = {Vec<Q>(q(0), q(0), q(0)), Vec<Q>(q(0), q(0), q(0)),
                              Vec<Q>(q(0), q(0), q(0)), Vec<Q>(q(0), q(0), q(0))};
  MicGram<Q> gram = gram_of(mics);
  std::vector<Q> u(4, q(0));
  SquareMatrix<Q> m = cm_matrix(u, gram);
  REQUIRE(m.n == 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      bool border_one = (i == 5 && j != 5) || (j == 5 && i != 5);
      CHECK(m.at(i, j) == (border_one ? q(1) : q(0)));
    }
}

TEST_CASE("2D case is the same pattern one size down") {
  std::vector<Vec<Q>> mics = {Vec<Q>(q(0), q(0)), Vec<Q>(q(0), q(0)), Vec<Q>(q(0), q(0))};
  MicGram<Q> gram = gram_of(mics);
  std::vector<Q> u(3, q(0));
  SquareMatrix<Q> m = cm_matrix(u, gram);
  REQUIRE(m.n == 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      bool border_one = (i == 4 && j != 4) || (j == 4 && i != 4);
      CHECK(m.at(i, j) == (border_one ? q(1) : q(0)));
    }
}

TEST_CASE("matched tuple from the unit simplex vanishes") {
  std::vector<Vec<Q>> mics = {Vec<Q>(q(0), q(0), q(0)), Vec<Q>(q(1), q(0), q(0)),
                              Vec<Q>(q(0), q(1), q(0)), Vec<Q>(q(0), q(0), q(1))};
  std::vector<Q> u = matched_tuple(Vec<Q>(q(2), q(3), q(5)), mics);
  CHECK(scalar_traits<Q>::is_zero(cm_det(u, gram_of(mics))));
}

TEST_CASE("matched tuples vanish exactly for random rational scenes") {
  Rng rng = rng_for(1001, 0);
  for (int i = 0; i < 2000; ++i) {
    std::vector<Vec<Q>> mics = random_mics<Q>(rng, 3);
    std::vector<Q> u = matched_tuple(random_point<Q>(rng, 3), mics);
    CHECK(scalar_traits<Q>::is_zero(cm_det(u, gram_of(mics))));
  }
}

TEST_CASE("determinant agrees with the cofactor oracle") {
  Rng rng = rng_for(1002, 0);
  for (int i = 0; i < 50; ++i) {
    SquareMatrix<Q> m(6);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) m.at(r, c) = random_rational(rng, 5);
    CHECK(determinant(m) == cofactor_det(m));
  }
  for (int i = 0; i < 50; ++i) {
    SquareMatrix<double> m(5);
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c) m.at(r, c) = sample_uniform<double>(rng, -5, 5);
    CHECK(determinant(m) == doctest::Approx(cofactor_det(m)).epsilon(1e-10));
  }
}

TEST_CASE("mismatched tuples do not vanish in generic scenes") {
  Rng rng = rng_for(1003, 0);
  int nonzero = 0;
  const int trials = 500;
  for (int i = 0; i < trials; ++i) {
    std::vector<Vec<Q>> mics = random_mics<Q>(rng, 3);
    Vec<Q> s1 = random_point<Q>(rng, 3);
    Vec<Q> s2 = random_point<Q>(rng, 3);
    std::vector<Q> u = matched_tuple(s1, mics);
    u[1] = (s2 - mics[1]).norm2();  // one echo from a different mirror point
    Q value = cm_det(u, gram_of(mics));
    // Oracle route for the same matrix.
    CHECK(value == cofactor_det(cm_matrix(u, gram_of(mics))));
    if (!scalar_traits<Q>::is_zero(value)) ++nonzero;
  }
  CHECK(nonzero == trials);
}

TEST_CASE("degree-8 homogeneity for four microphones") {
  Rng rng = rng_for(1004, 0);
  const Q alphas[] = {q(2), q(3), q(1, 2)};
  for (int i = 0; i < 100; ++i) {
    std::vector<Vec<Q>> mics = random_mics<Q>(rng, 3);
    MicGram<Q> gram = gram_of(mics);
    std::vector<Q> u(4);
    for (Q& v : u) v = random_rational(rng, 50) + Q(60);  // arbitrary, not matched
    Q base = cm_det(u, gram);
    for (const Q& alpha : alphas) {
      Q a2 = alpha * alpha;
      std::vector<Q> su(4);
      for (int k = 0; k < 4; ++k) su[static_cast<size_t>(k)] = a2 * u[static_cast<size_t>(k)];
      std::vector<Vec<Q>> smics;
      for (const Vec<Q>& m : mics) smics.push_back(m * alpha);
      Q scaled = cm_det(su, gram_of(smics));
      Q factor = a2 * a2 * a2 * a2;  // alpha^8
      CHECK(scaled == factor * base);
    }
  }
}

TEST_CASE("degree-6 homogeneity for three microphones") {
  Rng rng = rng_for(1005, 0);
  for (int i = 0; i < 50; ++i) {
    std::vector<Vec<Q>> mics = random_mics<Q>(rng, 2);
    std::vector<Q> u(3);
    for (Q& v : u) v = random_rational(rng, 50) + Q(60);
    Q base = cm_det(u, gram_of(mics));
    Q a2 = q(4);  // alpha = 2
    std::vector<Q> su(3);
    for (int k = 0; k < 3; ++k) su[static_cast<size_t>(k)] = a2 * u[static_cast<size_t>(k)];
    std::vector<Vec<Q>> smics;
    for (const Vec<Q>& m : mics) smics.push_back(m * q(2));
    CHECK(cm_det(su, gram_of(smics)) == a2 * a2 * a2 * base);
  }
}

TEST_CASE("determinant is invariant under simultaneous permutation") {
  Rng rng = rng_for(1006, 0);
  for (int i = 0; i < 50; ++i) {
    std::vector<Vec<Q>> mics = random_mics<Q>(rng, 3);
    std::vector<Q> u(4);
    for (Q& v : u) v = random_rational(rng, 40) + Q(50);
    Q base = cm_det(u, gram_of(mics));

    std::vector<int> perm = {0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Vec<Q>> pm(4, Vec<Q>(3));
    std::vector<Q> pu(4);
    for (int k = 0; k < 4; ++k) {
      pm[static_cast<size_t>(k)] = mics[static_cast<size_t>(perm[static_cast<size_t>(k)])];
      pu[static_cast<size_t>(k)] = u[static_cast<size_t>(perm[static_cast<size_t>(k)])];
    }
    CHECK(cm_det(pu, gram_of(pm)) == base);
  }
}

TEST_CASE("float residual: matched tuples sit far below the threshold") {
  Rng rng = rng_for(1007, 0);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    std::vector<Vec<double>> mics = random_mics<double>(rng, 3);
    std::vector<double> u = matched_tuple(random_point<double>(rng, 3), mics);
    worst = std::max(worst, cm_residual(u, MicGram<double>::from_points(mics)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("float residual: mismatched tuples sit far above the threshold") {
  Rng rng = rng_for(1008, 0);
  double best = 1e300;
  for (int i = 0; i < 500; ++i) {
    std::vector<Vec<double>> mics = random_mics<double>(rng, 3);
    Vec<double> s1 = random_point<double>(rng, 3);
    Vec<double> s2 = random_point<double>(rng, 3);
    std::vector<double> u = matched_tuple(s1, mics);
    u[2] = (s2 - mics[2]).norm2();
    best = std::min(best, cm_residual(u, MicGram<double>::from_points(mics)));
  }
  // Two orders above the default 1e-8 zero threshold on this seeded draw;
  // the typical value is far larger still.
  CHECK(best > 1e-6);
}

TEST_CASE("float residual is invariant under global scaling") {
  Rng rng = rng_for(1009, 0);
  for (int i = 0; i < 50; ++i) {
    std::vector<Vec<double>> mics = random_mics<double>(rng, 3);
    Vec<double> s1 = random_point<double>(rng, 3);
    Vec<double> s2 = random_point<double>(rng, 3);
    std::vector<double> u = matched_tuple(s1, mics);
    u[0] = (s2 - mics[0]).norm2();
    double r1 = cm_residual(u, MicGram<double>::from_points(mics));

    const double scale = 1000.0;
    std::vector<Vec<double>> big;
    for (const Vec<double>& m : mics) big.push_back(m * scale);
    std::vector<double> bu(4);
    for (int k = 0; k < 4; ++k) bu[static_cast<size_t>(k)] = u[static_cast<size_t>(k)] * scale * scale;
    double r2 = cm_residual(bu, MicGram<double>::from_points(big));
    CHECK(r2 == doctest::Approx(r1).epsilon(1e-12));
  }
}

TEST_CASE("residual needs a nonzero scale") {
  std::vector<Vec<double>> mics(4, Vec<double>(0, 0, 0));
  std::vector<double> u(4, 0.0);
  CHECK_THROWS_AS(cm_residual(u, MicGram<double>::from_points(mics)), DegenerateScale);
}

TEST_CASE("realizability of distance matrices") {
  std::vector<Vec<Q>> tetra = {Vec<Q>(q(0), q(0), q(0)), Vec<Q>(q(1), q(0), q(0)),
                               Vec<Q>(q(1, 2), q(1), q(0)), Vec<Q>(q(1, 2), q(1, 2), q(1))};
  MicGram<Q> gram = gram_of(tetra);
  CHECK(realizability_check(gram, 3));
  CHECK_FALSE(realizability_check(gram, 2));

  Rng rng = rng_for(1010, 0);
  for (int i = 0; i < 50; ++i) {
    MicGram<Q> g = gram_of(random_mics<Q>(rng, 3));
    CHECK(realizability_check(g, 3));
  }

  // A flat (rank-2) cloud embeds in the plane.
  std::vector<Vec<Q>> flat = {Vec<Q>(q(0), q(0), q(0)), Vec<Q>(q(1), q(0), q(0)),
                              Vec<Q>(q(0), q(1), q(0)), Vec<Q>(q(3), q(2), q(0))};
  CHECK(realizability_check(gram_of(flat), 2));
}

TEST_CASE("distance matrix constructor validates") {
  // Asymmetric.
  std::vector<Q> bad = {q(0), q(1), q(2), q(0)};
  CHECK_THROWS_AS(MicGram<Q>(bad, 2, 1), BadInput);
  // Nonzero diagonal.
  std::vector<Q> diag = {q(1), q(1), q(1), q(0)};
  CHECK_THROWS_AS(MicGram<Q>(diag, 2, 1), BadInput);
  // Violates the triangle structure so badly it cannot embed anywhere real:
  // three points pairwise 1 apart cannot live in one dimension.
  std::vector<Q> line = {q(0), q(1), q(1), q(1), q(0), q(1), q(1), q(1), q(0)};
  CHECK_THROWS_AS(MicGram<Q>(line, 3, 1), BadInput);
  CHECK_NOTHROW(MicGram<Q>(line, 3, 2));
}

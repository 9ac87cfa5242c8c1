#include <gtest/gtest.h>

#include <complex>

#include "ipspace/point_config.hpp"
#include "ipspace/polarization.hpp"
#include "test_util.hpp"

using namespace ipspace;
using testutil::vec;

TEST(Polarization, RealExamples) {
  const auto l2 = testutil::lp(2, 2);
  EXPECT_EQ(polarize_real(l2, vec({1, 0}), vec({0, 1})), 0.0);
  EXPECT_NEAR(polarize_real(l2, vec({1, 0}), vec({1, 1})), 1.0, 1e-15);
  EXPECT_NEAR(polarize_real(l2, vec({3, 4}), vec({3, 4})), 25.0, 1e-13);
}

TEST(Polarization, BasePointTranslates) {
  const auto l2 = testutil::lp(2, 2);
  const Vector b = vec({5, -2});
  EXPECT_NEAR(polarize_real(l2, vec({1, 0}) + b, vec({1, 1}) + b, b), 1.0, 1e-13);
}

TEST(Polarization, RealRequiresRealView) {
  const auto c = NormedSpace::complex(2, PNorm{2});
  EXPECT_THROW(polarize_real(c, vec({1, 0, 0, 0}), vec({1, 0, 0, 0})), InvalidArgument);
  EXPECT_THROW(polarize_real(testutil::lp(2, 2), vec({1, 0}), vec({1, 0, 0})), DimensionMismatch);
}

TEST(Polarization, QuadraticFormRecoversInnerProduct) {
  std::mt19937_64 rng(21);
  for (int n : {2, 3, 5}) {
    const Matrix q = testutil::random_spd(n, rng);
    const auto s = NormedSpace::real(n, QuadraticForm{q});
    for (int t = 0; t < 1000 / 3; ++t) {
      const Vector u = testutil::gaussian(n, rng), v = testutil::gaussian(n, rng);
      double uqv = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) uqv += u[i] * q(i, j) * v[j];
      const double scale = 1.0 + s.norm(u) * s.norm(v);
      EXPECT_NEAR(polarize_real(s, u, v), uqv, 1e-10 * scale);
    }
  }
}

TEST(Polarization, AdditivityFailsOffEuclidean) {
  std::mt19937_64 rng(22);
  for (const auto& s : {testutil::lp(2, 1), testutil::linf(2), testutil::lp(3, 3)}) {
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
      const Index n = s.real_dim();
      const Vector f = testutil::gaussian(n, rng), g = testutil::gaussian(n, rng),
                   h = testutil::gaussian(n, rng);
      worst = std::max(worst, std::abs(polarize_real(s, f + g, h) - polarize_real(s, f, h) -
                                       polarize_real(s, g, h)));
    }
    EXPECT_GT(worst, 1e-3);
  }
}

TEST(Polarization, GramExamples) {
  const auto l2 = testutil::lp(2, 2);
  const auto g1 = gram_matrix(l2, {vec({0, 0}), vec({1, 0}), vec({0, 1})}, 0);
  EXPECT_TRUE(g1.entries.isApprox(Matrix::Identity(2, 2)));
  EXPECT_FALSE(g1.is_singular());
  EXPECT_EQ(g1.point_indices, (std::vector<std::size_t>{1, 2}));

  const auto g2 = gram_matrix(l2, {vec({0, 0}), vec({1, 0}), vec({2, 0})}, 0);
  Matrix expect(2, 2);
  expect << 1, 2, 2, 4;
  EXPECT_TRUE(g2.entries.isApprox(expect, 1e-15));
  EXPECT_TRUE(g2.is_singular());
  EXPECT_EQ(g2.numerical_rank(), 1);

  // one non-base point, any norm
  const auto l1 = testutil::lp(2, 1);
  const auto g3 = gram_matrix(l1, {vec({1, 1}), vec({3, -1})}, 0);
  ASSERT_EQ(g3.size(), 1);
  EXPECT_DOUBLE_EQ(g3.entries(0, 0), 16.0);

  EXPECT_THROW(gram_matrix(l2, {vec({0, 0})}, 1), InvalidArgument);
}

TEST(Polarization, GramIsSymmetricAndEntryIsPolarization) {
  std::mt19937_64 rng(23);
  const auto s = testutil::lp(3, 1.5);
  std::vector<Vector> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(testutil::gaussian(3, rng));
  const auto g = gram_matrix(PointConfig(s, pts), 2);
  EXPECT_EQ(g.base_index, 2u);
  for (Index i = 0; i < g.size(); ++i)
    for (Index j = 0; j < g.size(); ++j) {
      EXPECT_EQ(g.entries(i, j), g.entries(j, i));
      EXPECT_NEAR(g.entries(i, j),
                  polarize_real(s, pts[g.point_indices[i]], pts[g.point_indices[j]], pts[2]),
                  1e-12 * (1 + std::abs(g.entries(i, j))));
    }
}

TEST(Polarization, GramRankBoundedBySpan) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 6;
    const int r = 1 + trial % 4;
    Matrix basis(k, r);
    for (int c = 0; c < r; ++c) basis.col(c) = testutil::gaussian(k, rng);
    std::vector<Vector> pts{Vector::Zero(k)};
    for (int i = 0; i < 7; ++i) pts.push_back(basis * testutil::gaussian(r, rng));
    const auto s = testutil::random_quadratic(k, 100 + trial);
    const auto g = gram_matrix(s, pts, 0);
    EXPECT_LE(g.numerical_rank(), r);
    EXPECT_TRUE(g.is_singular());
  }
}

TEST(Polarization, ComplexExamples) {
  const auto c2 = NormedSpace::complex(2, PNorm{2});
  const auto a = polarize_complex(c2, vec({1, 0, 0, 0}), vec({0, 1, 0, 0})).value();
  EXPECT_NEAR(a.real(), 0.0, 1e-15);
  EXPECT_NEAR(a.imag(), -1.0, 1e-15);
  const auto b = polarize_complex(c2, vec({1, 0, 0, 0}), vec({1, 0, 0, 0})).value();
  EXPECT_NEAR(b.real(), 1.0, 1e-15);
  EXPECT_NEAR(b.imag(), 0.0, 1e-15);
  const auto c = polarize_complex(c2, vec({1, 0, 0, 0}), vec({0, 0, 1, 0})).value();
  EXPECT_NEAR(std::abs(c), 0.0, 1e-15);
  EXPECT_THROW(polarize_complex(testutil::lp(2, 2), vec({1, 0}), vec({1, 0})), NotComplexSpace);
}

TEST(Polarization, ComplexMatchesHermitianSum) {
  std::mt19937_64 rng(25);
  const auto c3 = NormedSpace::complex(3, PNorm{2});
  const auto j = ComplexStructure::for_dim(3);
  for (int t = 0; t < 1000; ++t) {
    const Vector f = testutil::gaussian(6, rng), g = testutil::gaussian(6, rng);
    std::vector<std::complex<double>> fc, gc;
    for (int k = 0; k < 3; ++k) {
      fc.emplace_back(f[2 * k], f[2 * k + 1]);
      gc.emplace_back(g[2 * k], g[2 * k + 1]);
    }
    const auto fg = polarize_complex(c3, f, g).value();
    const auto gf = polarize_complex(c3, g, f).value();
    const double scale = 1.0 + f.norm() * g.norm();
    EXPECT_LT(std::abs(fg - oracle::hermitian(fc, gc)), 1e-10 * scale);
    EXPECT_LT(std::abs(fg - std::conj(gf)), 1e-10 * scale);
    const auto ifg = polarize_complex(c3, j.apply(f), g).value();
    EXPECT_LT(std::abs(ifg - std::complex<double>(0, 1) * fg), 1e-10 * scale);
  }
}

TEST(Polarization, ParallelogramExamples) {
  std::mt19937_64 rng(26);
  const auto l2 = testutil::lp(4, 2);
  for (int t = 0; t < 100; ++t) {
    const Vector f = testutil::gaussian(4, rng), g = testutil::gaussian(4, rng);
    EXPECT_NEAR(parallelogram_residual(l2, f, g), 0.0, 1e-12 * (1 + f.squaredNorm() + g.squaredNorm()));
    EXPECT_EQ(parallelogram_residual(testutil::lp(4, 1.3), f, Vector::Zero(4)), 0.0);
  }
  EXPECT_DOUBLE_EQ(parallelogram_residual(testutil::lp(2, 1), vec({1, 0}), vec({0, 1})), 4.0);
  EXPECT_DOUBLE_EQ(parallelogram_residual(testutil::linf(2), vec({1, 0}), vec({0, 1})), -2.0);
}

TEST(Polarization, GramFromDistancesMatchesPoints) {
  std::mt19937_64 rng(27);
  const auto l2 = testutil::lp(3, 2);
  std::vector<Vector> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(testutil::gaussian(3, rng));
  Matrix d(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) d(i, j) = (pts[i] - pts[j]).norm();
  EXPECT_TRUE(gram_from_distances(d).isApprox(gram_matrix(l2, pts, 0).entries, 1e-12));
}

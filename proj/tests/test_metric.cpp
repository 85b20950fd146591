#include "support.hpp"

#include <gtest/gtest.h>

#include <Eigen/LU>

#include <cmath>
#include <numeric>

namespace nf = nullframe;
using nf::Matrix;
using nf::PseudoMetric;
using nf::Vector;

namespace {

Vector unit(int n, int i) { return Vector::Unit(n, i); }

Matrix columns(std::initializer_list<Vector> vs) {
  Matrix m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
  Eigen::Index c = 0;
  for (const Vector& v : vs) m.col(c++) = v;
  return m;
}

Matrix golden_derivatives(double s) { return nf::derivatives(*nf::testing::golden_curve(), s, 5); }

void expect_step_invariants(const nf::SequenceReport& r, int n) {
  ASSERT_EQ(static_cast<int>(r.nullity.size()), n + 1);
  ASSERT_EQ(static_cast<int>(r.index.size()), n + 1);
  EXPECT_EQ(r.nullity[0], 0);
  EXPECT_EQ(r.index[0], 0);
  EXPECT_EQ(r.nullity[n], 0);
  EXPECT_EQ(r.index[n], 2);
  int total = 0;
  for (int i = 1; i <= n; ++i) {
    EXPECT_LE(std::abs(r.nullity[i] - r.nullity[i - 1]), 1) << "i=" << i;
    EXPECT_GE(r.index[i] - r.index[i - 1], 0) << "i=" << i;
    EXPECT_LE(r.index[i] - r.index[i - 1], 1) << "i=" << i;
    total += std::abs(r.nullity[i] - r.nullity[i - 1]);
  }
  EXPECT_EQ(total % 2, 0);
  EXPECT_EQ(r.degeneration_degree, total / 2);
}

}  // namespace

TEST(Metric, InnerExamples) {
  const PseudoMetric g(5);
  EXPECT_EQ(g.inner(unit(5, 0), unit(5, 0)), -1.0);
  EXPECT_EQ(g.inner(unit(5, 2), unit(5, 3)), 0.0);
  const auto f = nf::testing::golden_frame(0.0);
  EXPECT_NEAR(g.inner(f.L1, f.N1), 1.0, 1e-15);
}

TEST(Metric, StandardBasisSignature) {
  for (int n = 4; n <= 9; ++n) {
    const PseudoMetric g(n);
    const Matrix gram = g.gram(Matrix::Identity(n, n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) EXPECT_EQ(gram(i, j), i == j ? (i < 2 ? -1.0 : 1.0) : 0.0);
    }
    const auto p = nf::subspace_profile(g, Matrix::Identity(n, n));
    EXPECT_EQ(p.rank, n);
    EXPECT_EQ(p.radical_dim, 0);
    EXPECT_EQ(p.index, 2);
  }
}

TEST(Metric, RejectsMismatchedDimensions) {
  EXPECT_THROW(PseudoMetric(3), nf::InputError);
  const PseudoMetric g(5);
  EXPECT_THROW(g.inner(Vector::Ones(4), Vector::Ones(5)), nf::InputError);
  EXPECT_THROW(g.gram(Matrix::Ones(6, 2)), nf::InputError);
}

TEST(Metric, BilinearAndSymmetric) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + trial % 5;
    const PseudoMetric g(n);
    Vector x(n), y(n), z(n);
    for (int i = 0; i < n; ++i) {
      x(i) = normal(rng);
      y(i) = normal(rng);
      z(i) = normal(rng);
    }
    const double a = normal(rng), b = normal(rng);
    const double scale = 10 * (x.norm() + y.norm()) * z.norm() * (std::abs(a) + std::abs(b) + 1);
    EXPECT_NEAR(g.inner(a * x + b * y, z), a * g.inner(x, z) + b * g.inner(y, z), 1e-15 * scale);
    EXPECT_EQ(g.inner(x, y), g.inner(y, x));
  }
}

TEST(Metric, GramExamples) {
  const PseudoMetric g(5);
  const Matrix e12 = g.gram(columns({unit(5, 0), unit(5, 1)}));
  EXPECT_EQ(e12, (Matrix(2, 2) << -1, 0, 0, -1).finished());
  const auto f = nf::testing::golden_frame(1.0);
  EXPECT_LT(g.gram(columns({f.L1, f.L2})).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(g.gram(Matrix(5, 0)).size(), 0);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Matrix vs(5, 3);
  for (Eigen::Index i = 0; i < vs.size(); ++i) vs.data()[i] = normal(rng);
  const Matrix gram = g.gram(vs);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(gram(i, j), g.inner(vs.col(i), vs.col(j)), 1e-14);
  }
}

TEST(Metric, SubspaceProfileExamples) {
  const PseudoMetric g(5);
  const auto p = nf::subspace_profile(g, columns({unit(5, 0), unit(5, 2)}));
  EXPECT_EQ(p.rank, 2);
  EXPECT_EQ(p.radical_dim, 0);
  EXPECT_EQ(p.index, 1);

  const Matrix d = golden_derivatives(1.0);
  const auto q = nf::subspace_profile(g, d.leftCols(2));
  EXPECT_EQ(q.radical_dim, 2);
  EXPECT_EQ(q.index, 0);

  const auto empty = nf::subspace_profile(g, Matrix(5, 0));
  EXPECT_EQ(empty.rank, 0);
  EXPECT_EQ(empty.radical_dim, 0);
  EXPECT_EQ(empty.index, 0);

  EXPECT_THROW(nf::subspace_profile(g, d, 0.0), nf::InputError);
}

TEST(Metric, ProfileMatchesExactIntegerInertia) {
  // Random integer systems, half of them built from the null lattice vectors
  // e1 +- e3, e2 +- e4 so that degenerate spans are common.
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> small(-2, 2);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 4 + trial % 4;
    const int m = 1 + static_cast<int>(rng() % n);
    std::vector<std::vector<long>> cols(m, std::vector<long>(n, 0));
    for (auto& c : cols) {
      if (trial % 2 == 0) {
        for (auto& x : c) x = small(rng);
      } else {
        const int a = small(rng), b = small(rng), c12 = small(rng), d = small(rng);
        c[0] = a + b;
        c[2] = a - b;
        c[1] = c12 + d;
        c[3] = c12 - d;
        if (n > 4 && rng() % 3 == 0) c[4] = small(rng);
      }
    }
    Matrix vs(n, m);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) vs(i, j) = static_cast<double>(cols[j][i]);
    }
    // Exact oracle: span dimension from the coordinates, inertia from the Gram matrix.
    std::vector<std::vector<nf::testing::Wide>> coords(m, std::vector<nf::testing::Wide>(n));
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) coords[j][i] = cols[j][i];
    }
    const int span = nf::testing::exact_rank(coords);
    const auto gram = nf::testing::integer_gram(cols);
    const auto inertia = nf::testing::exact_inertia(gram);
    const int gram_rank = inertia.positive + inertia.negative;

    const auto p = nf::subspace_profile(PseudoMetric(n), vs);
    EXPECT_EQ(p.rank, gram_rank) << "trial " << trial;
    EXPECT_EQ(p.index, inertia.negative) << "trial " << trial;
    EXPECT_EQ(p.radical_dim, span - gram_rank) << "trial " << trial;
  }
}

TEST(Metric, ExactOracleSelfCheck) {
  const std::vector<std::vector<nf::testing::Wide>> a = {{-1, -1, 0}, {-1, -1, 0}, {0, 0, 2}};
  const auto r = nf::testing::exact_inertia(a);
  EXPECT_EQ(r.negative, 1);  // eigenvalues -2, 0, 2
  EXPECT_EQ(r.positive, 1);
  EXPECT_EQ(r.zero, 1);
  const std::vector<std::vector<nf::testing::Wide>> b = {{-1, 0, 0}, {0, 0, 0}, {0, 0, 2}};
  const auto q = nf::testing::exact_inertia(b);
  EXPECT_EQ(q.negative, 1);
  EXPECT_EQ(q.positive, 1);
  EXPECT_EQ(q.zero, 1);
}

TEST(Metric, ProfileInvariantUnderScaling) {
  const PseudoMetric g(5);
  const Matrix d = golden_derivatives(0.7);
  for (int k = 1; k <= 5; ++k) {
    const auto base = nf::subspace_profile(g, d.leftCols(k));
    Matrix scaled = d.leftCols(k);
    for (int c = 0; c < k; ++c) scaled.col(c) *= std::pow(-3.0, c) * 1e3;
    const auto s = nf::subspace_profile(g, scaled);
    EXPECT_EQ(s.rank, base.rank);
    EXPECT_EQ(s.radical_dim, base.radical_dim);
    EXPECT_EQ(s.index, base.index);
    const auto tiny = nf::subspace_profile(g, d.leftCols(k) * 1e-6);
    EXPECT_EQ(tiny.rank, base.rank);
    EXPECT_EQ(tiny.radical_dim, base.radical_dim);
  }
}

TEST(Metric, GoldenSequence) {
  const PseudoMetric g(5);
  for (double s : {0.2, 0.5, 1.0}) {
    const auto r = nf::sequence_report(g, golden_derivatives(s));
    EXPECT_EQ(r.nullity, (std::vector<int>{0, 1, 2, 2, 1, 0}));
    EXPECT_EQ(r.index, (std::vector<int>{0, 0, 0, 0, 1, 2}));
    EXPECT_EQ(r.degeneration_degree, 2);
  }
  EXPECT_EQ(nf::family_nullity(7), (std::vector<int>{0, 1, 2, 2, 1, 0, 0, 0}));
}

TEST(Metric, SpacelikeFirstBasisIsNondegenerate) {
  const PseudoMetric g(5);
  const auto r = nf::sequence_report(g, columns({unit(5, 2), unit(5, 3), unit(5, 4), unit(5, 0), unit(5, 1)}));
  EXPECT_EQ(r.nullity, (std::vector<int>(6, 0)));
  EXPECT_EQ(r.index, (std::vector<int>{0, 0, 0, 0, 1, 2}));
  EXPECT_EQ(r.degeneration_degree, 0);
}

TEST(Metric, DependentSystemIsRejected) {
  const PseudoMetric g(5);
  Matrix d = golden_derivatives(0.5);
  d.col(3) = 2 * d.col(0) - d.col(1);
  try {
    nf::sequence_report(g, d);
    FAIL() << "expected ClassificationError";
  } catch (const nf::ClassificationError& e) {
    EXPECT_NE(std::string(e.what()).find("4"), std::string::npos) << e.what();
  }
  EXPECT_THROW(nf::sequence_report(g, d.leftCols(4)), nf::InputError);
}

TEST(Metric, Orientation) {
  EXPECT_EQ(nf::orientation_sign(Matrix::Identity(5, 5)), 1);
  Matrix swapped = Matrix::Identity(5, 5);
  swapped.col(0).swap(swapped.col(1));
  EXPECT_EQ(nf::orientation_sign(swapped), -1);
  const Matrix d = golden_derivatives(1.0);
  const double det = d.determinant();
  EXPECT_EQ(nf::orientation_sign(d), det > 0 ? 1 : -1);
  EXPECT_NEAR(det, -1.0, 1e-12);  // the golden derivative system is negatively oriented
  EXPECT_EQ(nf::orientation_sign(d), -1);
  Matrix singular = Matrix::Identity(5, 5);
  singular.col(4) = singular.col(3);
  EXPECT_THROW(nf::orientation_sign(singular), nf::NumericalError);
}

TEST(Metric, RandomAdmissibleBasesSatisfyStepInvariants) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal;
  int family_count = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + trial % 4;
    const PseudoMetric g(n);
    Matrix basis(n, n);
    const bool frame_based = trial % 2 == 1;
    if (!frame_based) {
      for (Eigen::Index i = 0; i < basis.size(); ++i) basis.data()[i] = normal(rng);
    } else {
      // A Cartan frame template under a random isometry, mixed by an upper
      // triangular matrix; the flag of leading spans is unchanged, so the
      // nullity sequence must be the family pattern.
      const Matrix frame = nf::testing::random_initial_state(n, rng).rightCols(n);
      Matrix mix = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        mix(i, i) = (rng() % 2 ? 1 : -1) * (0.5 + std::abs(normal(rng)));
        for (int j = i + 1; j < n; ++j) mix(i, j) = normal(rng);
      }
      basis = frame * mix;
    }
    const auto r = nf::sequence_report(g, basis);
    expect_step_invariants(r, n);
    if (frame_based) {
      EXPECT_EQ(r.nullity, nf::family_nullity(n)) << "trial " << trial;
      EXPECT_EQ(r.degeneration_degree, 2);
      ++family_count;
    }
  }
  EXPECT_EQ(family_count, 50);
}

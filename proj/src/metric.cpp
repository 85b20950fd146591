#include <nullframe/metric.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace nullframe {

namespace {

Matrix normalized_columns(const Matrix& vectors) {
  Matrix scaled = vectors;
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
    const double norm = scaled.col(j).norm();
    if (norm > 0.0) scaled.col(j) /= norm;
  }
  return scaled;
}

int count_above(const Eigen::VectorXd& values, double threshold) {
  int count = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i)) > threshold) ++count;
  }
  return count;
}

std::string join(const std::vector<int>& values) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
  out << '}';
  return out.str();
}

}  // namespace

int numerical_rank(const Matrix& vectors, double tol) {
  if (vectors.cols() == 0 || vectors.rows() == 0) return 0;
  const Matrix scaled = normalized_columns(vectors);
  Eigen::JacobiSVD<Matrix> svd(scaled);
  const Eigen::VectorXd sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  return count_above(sigma, tol * sigma(0));
}

SubspaceProfile subspace_profile(const PseudoMetric& metric, const Matrix& vectors, double tol) {
  if (!(tol > 0.0)) throw InputError("subspace tolerance must be positive");
  SubspaceProfile profile;
  profile.tolerance_used = tol;
  if (vectors.cols() == 0) return profile;

  const Matrix scaled = normalized_columns(vectors);
  const Matrix gram = metric.gram(scaled);
  Eigen::SelfAdjointEigenSolver<Matrix> eigen(gram, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd lambda = eigen.eigenvalues();
  const double largest = lambda.cwiseAbs().maxCoeff();
  const double threshold = tol * std::max(1.0, largest);
  profile.tolerance_used = threshold;

  profile.rank = count_above(lambda, threshold);
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -threshold) ++profile.index;
  }
  const int span = numerical_rank(vectors, tol);
  profile.radical_dim = std::max(0, span - profile.rank);
  return profile;
}

SequenceReport sequence_report(const PseudoMetric& metric, const Matrix& basis, double tol) {
  const int n = metric.dimension();
  if (basis.rows() != n || basis.cols() != n) {
    throw InputError("sequence report needs " + std::to_string(n) + " vectors of dimension " +
                     std::to_string(n));
  }
  SequenceReport report;
  report.nullity.assign(n + 1, 0);
  report.index.assign(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    const Matrix prefix = basis.leftCols(i);
    const int rank = numerical_rank(prefix, tol);
    if (rank < i) {
      throw ClassificationError("derivative system is linearly dependent: the first " +
                                std::to_string(i) + " vectors span only " + std::to_string(rank) +
                                " dimensions");
    }
    const SubspaceProfile p = subspace_profile(metric, prefix, tol);
    report.nullity[i] = p.radical_dim;
    report.index[i] = p.index;
  }

  int total = 0;
  for (int i = 1; i <= n; ++i) {
    const int dr = report.nullity[i] - report.nullity[i - 1];
    const int dq = report.index[i] - report.index[i - 1];
    if (std::abs(dr) > 1 || dq < 0 || dq > 1) {
      throw NumericalError("sequence step invariant violated at i=" + std::to_string(i) +
                           ": nullity " + join(report.nullity) + ", index " + join(report.index) +
                           " (tolerance too tight or too loose)");
    }
    total += std::abs(dr);
  }
  if (report.nullity[n] != 0 || report.index[n] != PseudoMetric::index || total % 2 != 0) {
    throw NumericalError("full-space sequence values inconsistent with an index-2 form: nullity " +
                         join(report.nullity) + ", index " + join(report.index));
  }
  report.degeneration_degree = total / 2;
  return report;
}

int orientation_sign(const Matrix& basis) {
  if (basis.rows() != basis.cols() || basis.rows() == 0) {
    throw InputError("orientation needs a square, nonempty coordinate matrix");
  }
  const double det = normalized_columns(basis).determinant();
  if (!(std::abs(det) >= 1e-12)) {
    throw NumericalError("orientation is ambiguous: normalized determinant " + std::to_string(det));
  }
  return det > 0.0 ? 1 : -1;
}

std::vector<int> family_nullity(int dimension) {
  std::vector<int> r(dimension + 1, 0);
  const int pattern[] = {0, 1, 2, 2, 1, 0};
  for (int i = 0; i < 6 && i <= dimension; ++i) r[i] = pattern[i];
  return r;
}

}  // namespace nullframe

#include "dasopt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dasopt {

namespace {

void require_square(const ComplexMatrix& a, const char* op) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(op) + ": matrix must be square, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

// Full self-adjoint factorization with descending eigenvalues.
void full_evd(const ComplexMatrix& a, ComplexMatrix& vectors, RealVector& values) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitianize(a));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_evd: eigensolver failed to converge");
  }
  const auto n = a.rows();
  values.resize(n);
  vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {  // Eigen sorts ascending; flip
    values[i] = es.eigenvalues()[n - 1 - i];
    vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
}

HermitianEvd retain_positive(const ComplexMatrix& vectors, const RealVector& values, double rank_tol) {
  const double max_eig = values.size() > 0 ? values[0] : 0.0;
  const double cutoff = std::max(rank_tol * max_eig, 0.0);
  Eigen::Index r = 0;
  while (r < values.size() && values[r] > cutoff) ++r;
  HermitianEvd out;
  out.basis = vectors.leftCols(r);
  out.eigenvalues = values.head(r);
  return out;
}

}  // namespace

ComplexMatrix hermitianize(const ComplexMatrix& a) {
  return 0.5 * (a + a.adjoint());
}

HermitianEvd hermitian_evd(const ComplexMatrix& a, double rank_tol) {
  require_square(a, "hermitian_evd");
  if (rank_tol < 0) throw std::invalid_argument("hermitian_evd: rank_tol must be nonnegative");
  ComplexMatrix vectors;
  RealVector values;
  full_evd(a, vectors, values);
  if (values.size() > 0) {
    const double max_eig = std::max(values[0], 0.0);
    if (values[values.size() - 1] < -rank_tol * std::max(max_eig, std::abs(values[0]))) {
      throw std::invalid_argument("hermitian_evd: input is not positive semidefinite");
    }
  }
  return retain_positive(vectors, values, rank_tol);
}

HermitianEvd gram_evd(const ComplexMatrix& f, double rank_tol) {
  const auto rows = f.rows();
  const auto cols = f.cols();
  if (rows < cols) {
    // Factor the small Gram matrix f f^H and map the eigenvectors back.
    ComplexMatrix vectors;
    RealVector values;
    full_evd(f * f.adjoint(), vectors, values);
    HermitianEvd small = retain_positive(vectors, values, rank_tol);
    HermitianEvd out;
    out.eigenvalues = small.eigenvalues;
    out.basis = f.adjoint() * small.basis *
                small.eigenvalues.array().sqrt().inverse().matrix().asDiagonal();
    return out;
  }
  ComplexMatrix vectors;
  RealVector values;
  full_evd(f.adjoint() * f, vectors, values);
  return retain_positive(vectors, values, rank_tol);
}

double log_det_rate(const ComplexMatrix& h, const ComplexMatrix& q, double psd_tol) {
  require_square(q, "log_det_rate");
  if (h.cols() != q.rows()) {
    throw std::invalid_argument("log_det_rate: channel has " + std::to_string(h.cols()) +
                                " columns but covariance is " + std::to_string(q.rows()) + "x" +
                                std::to_string(q.cols()));
  }
  if (!is_psd(q, psd_tol)) {
    throw std::invalid_argument("log_det_rate: covariance is not positive semidefinite");
  }
  const ComplexMatrix s = hermitianize(h * q * h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s, Eigen::EigenvaluesOnly);
  double rate = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    rate += std::log2(1.0 + std::max(es.eigenvalues()[i], 0.0));
  }
  return rate;
}

bool is_psd(const ComplexMatrix& a, double tol) {
  require_square(a, "is_psd");
  if (a.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitianize(a), Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return es.eigenvalues()[0] >= -tol * scale;
}

}  // namespace dasopt

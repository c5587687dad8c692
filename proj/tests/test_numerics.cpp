#include <cmath>
#include <complex>

#include "dasopt/numerics.hpp"
#include "dasopt/rng.hpp"
#include "doctest.h"

using namespace dasopt;
using Complex = std::complex<double>;

namespace {

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale = 1.0) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = scale * rng.cnormal();
  }
  return m;
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("hermitian_evd on the identity") {
  const auto evd = hermitian_evd(ComplexMatrix::Identity(2, 2), 1e-12);
  REQUIRE(evd.eigenvalues.size() == 2);
  CHECK(evd.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(evd.eigenvalues[1] == doctest::Approx(1.0));
  const ComplexMatrix gram = evd.basis.adjoint() * evd.basis;
  CHECK(max_abs(gram - ComplexMatrix::Identity(2, 2)) < 1e-10);
}

TEST_CASE("hermitian_evd truncates a rank-1 diagonal") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  const auto evd = hermitian_evd(a, 1e-10);
  REQUIRE(evd.eigenvalues.size() == 1);
  CHECK(evd.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(std::abs(evd.basis(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(evd.basis(1, 0)) < 1e-12);
}

TEST_CASE("hermitian_evd of an outer product recovers the direction") {
  Rng rng(42);
  const ComplexMatrix h = random_matrix(5, 1, rng);
  const ComplexMatrix a = h * h.adjoint();
  const auto evd = hermitian_evd(a, 1e-10);
  REQUIRE(evd.eigenvalues.size() == 1);
  CHECK(evd.eigenvalues[0] == doctest::Approx(h.squaredNorm()));
  // Eigenvector matches h up to a phase.
  const Complex overlap = (evd.basis.col(0).adjoint() * h)(0, 0);
  CHECK(std::abs(overlap) == doctest::Approx(h.norm()));
  const ComplexMatrix rebuilt = evd.basis * evd.eigenvalues.asDiagonal() * evd.basis.adjoint();
  CHECK(max_abs(a - rebuilt) <= 1e-8 * max_abs(a));
}

TEST_CASE("hermitian_evd input checks") {
  CHECK_THROWS_AS(hermitian_evd(ComplexMatrix::Zero(2, 3), 1e-10), std::invalid_argument);
  ComplexMatrix indefinite = ComplexMatrix::Zero(2, 2);
  indefinite(0, 0) = 1.0;
  indefinite(1, 1) = -1.0;
  CHECK_THROWS_AS(hermitian_evd(indefinite, 1e-9), std::invalid_argument);
}

TEST_CASE("hermitian_evd reconstruction over random PSD inputs") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 6);
    const int k = 1 + static_cast<int>(rng.uniform() * 6);
    const ComplexMatrix x = random_matrix(n, k, rng);
    const ComplexMatrix a = x * x.adjoint();
    const auto evd = hermitian_evd(a, 1e-12);
    const ComplexMatrix rebuilt = evd.basis * evd.eigenvalues.asDiagonal() * evd.basis.adjoint();
    CHECK(max_abs(a - rebuilt) <= 1e-8 * std::max(1.0, max_abs(a)));
    const ComplexMatrix gram = evd.basis.adjoint() * evd.basis;
    CHECK(max_abs(gram - ComplexMatrix::Identity(gram.rows(), gram.cols())) < 1e-10);
  }
}

TEST_CASE("gram_evd agrees with the direct factorization on wide and tall inputs") {
  Rng rng(19);
  for (Eigen::Index rows : {2, 6}) {
    const ComplexMatrix f = random_matrix(rows, 4, rng);
    const ComplexMatrix a = f.adjoint() * f;
    const auto via_gram = gram_evd(f, 1e-10);
    const auto direct = hermitian_evd(a, 1e-10);
    REQUIRE(via_gram.eigenvalues.size() == direct.eigenvalues.size());
    for (Eigen::Index i = 0; i < direct.eigenvalues.size(); ++i) {
      CHECK(via_gram.eigenvalues[i] == doctest::Approx(direct.eigenvalues[i]).epsilon(1e-9));
    }
    const ComplexMatrix rebuilt =
        via_gram.basis * via_gram.eigenvalues.asDiagonal() * via_gram.basis.adjoint();
    CHECK(max_abs(a - rebuilt) <= 1e-8 * std::max(1.0, max_abs(a)));
  }
}

TEST_CASE("retained rank of a generic channel Gram matrix is min(N, M)") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 4);
    const int m = 1 + static_cast<int>(rng.uniform() * 8);
    const ComplexMatrix h = random_matrix(n, m, rng);
    const auto evd = hermitian_evd(h.adjoint() * h, 1e-10);
    CHECK(evd.eigenvalues.size() == std::min(n, m));
  }
}

TEST_CASE("log_det_rate basics") {
  ComplexMatrix h(1, 1), q(1, 1);
  h(0, 0) = 1.0;
  q(0, 0) = 3.0;
  CHECK(log_det_rate(h, q) == doctest::Approx(2.0));  // log2(4)

  Rng rng(11);
  const ComplexMatrix h2 = random_matrix(3, 5, rng);
  CHECK(log_det_rate(h2, ComplexMatrix::Zero(5, 5)) == doctest::Approx(0.0));
}

TEST_CASE("log_det_rate matches the 2x2 determinant identity") {
  Rng rng(23);
  const ComplexMatrix h = random_matrix(2, 4, rng);
  const ComplexMatrix s = ComplexMatrix::Identity(2, 2) + h * h.adjoint();
  const Complex det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
  CHECK(log_det_rate(h, ComplexMatrix::Identity(4, 4)) ==
        doctest::Approx(std::log2(det.real())).epsilon(1e-10));
}

TEST_CASE("log_det_rate input checks") {
  Rng rng(31);
  const ComplexMatrix h = random_matrix(2, 3, rng);
  CHECK_THROWS_AS(log_det_rate(h, ComplexMatrix::Identity(4, 4)), std::invalid_argument);
  ComplexMatrix not_psd = ComplexMatrix::Identity(3, 3);
  not_psd(2, 2) = -1.0;
  CHECK_THROWS_AS(log_det_rate(h, not_psd), std::invalid_argument);
}

TEST_CASE("log_det_rate is monotone in the covariance") {
  Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const ComplexMatrix h = random_matrix(2, 4, rng);
    const ComplexMatrix x1 = random_matrix(4, 2, rng);
    const ComplexMatrix x2 = random_matrix(4, 3, rng);
    const ComplexMatrix q1 = x1 * x1.adjoint();
    const ComplexMatrix q2 = x2 * x2.adjoint();
    CHECK(log_det_rate(h, q1 + q2) >= log_det_rate(h, q1) - 1e-12);
  }
}

TEST_CASE("is_psd") {
  CHECK(is_psd(ComplexMatrix::Identity(3, 3), 1e-9));
  ComplexMatrix indefinite = ComplexMatrix::Zero(2, 2);
  indefinite(0, 0) = 1.0;
  indefinite(1, 1) = -1.0;
  CHECK_FALSE(is_psd(indefinite, 1e-9));
  CHECK_THROWS_AS(is_psd(ComplexMatrix::Zero(2, 3), 1e-9), std::invalid_argument);

  // Weighted Gram matrices are PSD.
  Rng rng(5);
  const ComplexMatrix h = random_matrix(3, 6, rng);
  RealVector b(6);
  for (int i = 0; i < 6; ++i) b[i] = 0.5 + rng.uniform();
  const RealVector inv_sqrt = b.array().sqrt().inverse();
  const ComplexMatrix g = inv_sqrt.asDiagonal() * (h.adjoint() * h) * inv_sqrt.asDiagonal();
  CHECK(is_psd(g, 1e-9));
}

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace dasopt {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Truncated eigendecomposition of a Hermitian PSD matrix:
/// A ~ basis * diag(eigenvalues) * basis^H, eigenvalues sorted descending,
/// basis semi-unitary (basis^H * basis = I_r).
struct HermitianEvd {
  ComplexMatrix basis;     // M x r
  RealVector eigenvalues;  // r entries, all > rank_tol * max eigenvalue
};

/// Returns (a + a^H) / 2. Applied before every factorization to suppress
/// the Hermitian roundoff drift that accumulates across solver iterations.
ComplexMatrix hermitianize(const ComplexMatrix& a);

/// Eigendecomposition of a Hermitian PSD matrix, keeping only eigenvalues
/// above rank_tol times the largest one (the numerical rank).
/// Throws std::invalid_argument on non-square input and on any eigenvalue
/// below -rank_tol * max eigenvalue (input not PSD).
HermitianEvd hermitian_evd(const ComplexMatrix& a, double rank_tol);

/// Eigendecomposition of f^H * f (cols x cols) computed through whichever
/// Gram matrix of f is smaller. For a wide f (rows << cols) this reduces an
/// M x M factorization to an N x N one; the eigenbasis is mapped back as
/// f^H * V * D^{-1/2}, which is exactly semi-unitary.
HermitianEvd gram_evd(const ComplexMatrix& f, double rank_tol);

/// log2 det(I + h * q * h^H) for a channel h (N x M) and a Hermitian PSD
/// covariance q (M x M). Always >= 0. Throws on dimension mismatch or when
/// q fails the PSD check beyond psd_tol.
double log_det_rate(const ComplexMatrix& h, const ComplexMatrix& q, double psd_tol = 1e-9);

/// True iff the smallest eigenvalue of the (symmetrized) input is at least
/// -tol * max(1, max|a_ij|). Throws on non-square input.
bool is_psd(const ComplexMatrix& a, double tol);

}  // namespace dasopt

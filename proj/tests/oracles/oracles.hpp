#pragma once

// Test-only reference implementations. Each one takes a different route from the
// library code it checks, so agreement is evidence rather than tautology.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Moments of psi(x) = exp(-x^T Z x / 2), Z = A + iB complex symmetric, A > 0.
/// |psi|^2 gives Var(x) = (2A)^-1 = Sigma; then Cov(x,p) = -Sigma B and
/// <pp> = A Sigma A + B Sigma B. Returned in xx..pp ordering.
Matrix wavefunction_covariance(const Matrix &a, const Matrix &b);

/// e^{-i t x^T J x / 2} applied to the squeezed product state: Z = mu I + i t J.
Matrix quenched_wavefunction_covariance(const Matrix &j, double mu, double t);

/// Conditions the joint Gaussian on exact values of the momenta of `measured` by
/// inverting the precision matrix of the (kept quadratures, measured momenta) marginal.
Matrix precision_conditioning(const Matrix &cov, const std::vector<std::size_t> &measured);

/// Mean shift of the kept quadratures per unit outcome, via the same precision route.
Matrix precision_mean_map(const Matrix &cov, const std::vector<std::size_t> &measured);

/// -sum lambda_k ln lambda_k for the thermal ladder lambda_k = n^k / (n+1)^{k+1}, n = nu - 1/2.
double thermal_ladder_entropy(double nu);

/// Symplectic eigenvalues from the general (non-symmetric) eigenproblem of Omega V.
std::vector<double> eigen_spectrum(const Matrix &cov);

/// Random symplectic matrix on n modes built from shears and a GL(n) block.
Matrix random_symplectic(std::size_t n, std::mt19937_64 &rng, double scale = 0.5);

Matrix omega(std::size_t n);

/// Pure state (1/2) S S^T.
Matrix random_pure_covariance(std::size_t n, std::mt19937_64 &rng);

double bisect(const std::function<double(double)> &f, double lo, double hi, double tol = 1e-13);

/// Hyperbolic distance in the Poincare disk.
double poincare_distance(double x1, double y1, double x2, double y2);

} // namespace oracle

#pragma once

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ispec {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

// Partial-pivot LU determinants; a singular matrix yields 0.
Complex det(const ComplexMatrix& a);
double det(const RealMatrix& a);

// log|det| and the unit phase, for determinants beyond double range.
struct LogDet {
  double log_abs = 0.0;
  Complex phase{1.0, 0.0};
  bool singular = false;
};
LogDet log_det(const ComplexMatrix& a);

struct PfaffianResult {
  double value = 0.0;
  bool odd_dimension = false;
};

// Parlett-Reid elimination with pivoting. Throws NotSkew if
// |A + A^T| exceeds skew_tol times max(1, max|A|). Odd dimension gives 0
// with the flag set.
PfaffianResult pfaffian(const RealMatrix& a, double skew_tol = 1e-12);

// Reciprocal condition estimate below which a matrix counts as singular.
inline constexpr double kNearSingularRcond = 1e-12;

// (A^{-1})_{rc} for the requested pairs from one factorization. Throws
// NearSingular when the reciprocal condition number is below rcond_min.
std::vector<Complex> inverse_entries(const ComplexMatrix& a, std::span<const std::pair<int, int>> pairs,
                                     double rcond_min = kNearSingularRcond);

// Full inverse with the same singularity guard.
ComplexMatrix checked_inverse(const ComplexMatrix& a, double rcond_min = kNearSingularRcond);

// Trapezoidal Fourier coefficients psi_k = (1/M) sum_j f(zeta_j) zeta_j^{-k},
// zeta_j = exp(2 pi i j / M), for k in [k_min, k_max]. samples[j] = f(zeta_j).
// Requires M >= 4 max(|k_min|, |k_max|).
std::vector<ComplexMatrix> fourier_coeffs(std::span<const ComplexMatrix> samples, int k_min, int k_max);

std::vector<ComplexMatrix> fourier_coeffs(const std::function<ComplexMatrix(Complex)>& f, int grid, int k_min,
                                          int k_max);

Complex unit_root(int j, int grid);

}  // namespace ispec

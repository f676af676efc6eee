#include "ispec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ispec/error.hpp"

namespace ispec {

Complex det(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidArgument, "det of a non-square matrix");
  if (a.rows() == 0) return 1.0;
  return a.partialPivLu().determinant();
}

double det(const RealMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidArgument, "det of a non-square matrix");
  if (a.rows() == 0) return 1.0;
  return a.partialPivLu().determinant();
}

LogDet log_det(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidArgument, "det of a non-square matrix");
  LogDet out;
  if (a.rows() == 0) return out;
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const ComplexMatrix& f = lu.matrixLU();
  Complex phase = static_cast<double>(lu.permutationP().determinant());
  for (Eigen::Index k = 0; k < f.rows(); ++k) {
    const double r = std::abs(f(k, k));
    if (r == 0.0) {
      out.singular = true;
      out.log_abs = -std::numeric_limits<double>::infinity();
      out.phase = 0.0;
      return out;
    }
    out.log_abs += std::log(r);
    phase *= f(k, k) / r;
  }
  out.phase = phase / std::abs(phase);
  return out;
}

PfaffianResult pfaffian(const RealMatrix& input, double skew_tol) {
  if (input.rows() != input.cols()) throw Error(ErrorCode::InvalidArgument, "pfaffian of a non-square matrix");
  const Eigen::Index n = input.rows();
  if (n == 0) return {1.0, false};
  const double scale = std::max(1.0, input.cwiseAbs().maxCoeff());
  if ((input + input.transpose()).cwiseAbs().maxCoeff() > skew_tol * scale) {
    throw Error(ErrorCode::NotSkew, "matrix is not skew-symmetric");
  }
  if (n % 2 == 1) return {0.0, true};

  RealMatrix a = input;
  double result = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index pivot;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&pivot);
    pivot += k + 1;
    if (pivot != k + 1) {
      a.row(k + 1).swap(a.row(pivot));
      a.col(k + 1).swap(a.col(pivot));
      result = -result;
    }
    const double akk1 = a(k, k + 1);
    if (akk1 == 0.0) return {0.0, false};
    result *= akk1;
    if (k + 2 < n) {
      const Eigen::Index r = n - k - 2;
      Eigen::VectorXd tau = a.row(k).tail(r).transpose() / akk1;
      Eigen::VectorXd col = a.col(k + 1).tail(r);
      a.bottomRightCorner(r, r).noalias() += tau * col.transpose() - col * tau.transpose();
    }
  }
  return {result, false};
}

namespace {

Eigen::PartialPivLU<ComplexMatrix> guarded_lu(const ComplexMatrix& a, double rcond_min) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidArgument, "inverse of a non-square matrix");
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const double rc = lu.rcond();
  if (!(rc >= rcond_min)) {
    throw Error(ErrorCode::NearSingular, "reciprocal condition number " + std::to_string(rc));
  }
  return lu;
}

}  // namespace

std::vector<Complex> inverse_entries(const ComplexMatrix& a, std::span<const std::pair<int, int>> pairs,
                                     double rcond_min) {
  auto lu = guarded_lu(a, rcond_min);
  std::vector<int> cols;
  for (const auto& [r, c] : pairs) {
    if (r < 0 || c < 0 || r >= a.rows() || c >= a.cols()) throw Error(ErrorCode::InvalidArgument, "index out of range");
    if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
  }
  ComplexMatrix rhs = ComplexMatrix::Zero(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) rhs(cols[k], static_cast<Eigen::Index>(k)) = 1.0;
  ComplexMatrix x = lu.solve(rhs);
  std::vector<Complex> out;
  out.reserve(pairs.size());
  for (const auto& [r, c] : pairs) {
    auto k = std::find(cols.begin(), cols.end(), c) - cols.begin();
    out.push_back(x(r, k));
  }
  return out;
}

ComplexMatrix checked_inverse(const ComplexMatrix& a, double rcond_min) { return guarded_lu(a, rcond_min).inverse(); }

Complex unit_root(int j, int grid) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid);
  return {std::cos(angle), std::sin(angle)};
}

std::vector<ComplexMatrix> fourier_coeffs(std::span<const ComplexMatrix> samples, int k_min, int k_max) {
  const int M = static_cast<int>(samples.size());
  if (k_min > k_max) throw Error(ErrorCode::InvalidArgument, "empty coefficient range");
  if (M == 0 || M < 4 * std::max(std::abs(k_min), std::abs(k_max))) {
    throw Error(ErrorCode::InvalidArgument, "grid too coarse for the requested coefficients");
  }
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k) {
    ComplexMatrix acc = ComplexMatrix::Zero(samples[0].rows(), samples[0].cols());
    for (int j = 0; j < M; ++j) {
      // exp(-2 pi i j k / M) with the exponent reduced mod M for accuracy.
      const int e = static_cast<int>((static_cast<long long>(j) * k % M + M) % M);
      acc += samples[j] * std::conj(unit_root(e, M));
    }
    out.push_back(acc / static_cast<double>(M));
  }
  return out;
}

std::vector<ComplexMatrix> fourier_coeffs(const std::function<ComplexMatrix(Complex)>& f, int grid, int k_min,
                                          int k_max) {
  std::vector<ComplexMatrix> samples;
  samples.reserve(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) samples.push_back(f(unit_root(j, grid)));
  return fourier_coeffs(samples, k_min, k_max);
}

}  // namespace ispec

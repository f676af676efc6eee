#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

// exp by Taylor series with argument halving.
inline double exp_series(double x) {
  int halvings = 0;
  while (std::fabs(x) > 0.125) {
    x *= 0.5;
    ++halvings;
  }
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= x / k;
    sum += term;
  }
  for (int k = 0; k < halvings; ++k) sum *= sum;
  return sum;
}

inline double tanh_series(double x) {
  const double e = exp_series(2.0 * x);
  return (e - 1.0) / (e + 1.0);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double sinh_series(double x) { return 0.5 * (exp_series(x) - exp_series(-x)); }

// Root of sinh(2 beta Jh) sinh(2 beta Jv) = 1.
inline double onsager_beta(double jh, double jv) {
  return bisect([&](double b) { return sinh_series(2 * b * jh) * sinh_series(2 * b * jv) - 1.0; }, 1e-6, 5.0);
}

using Cx = std::complex<double>;
using CMat = std::vector<std::vector<Cx>>;

// Laplace expansion along the first row.
inline Cx cofactor_det(const CMat& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  Cx total = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    CMat minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Cx> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(a[r][k]);
      }
      minor.push_back(row);
    }
    total += (c % 2 ? -1.0 : 1.0) * a[0][c] * cofactor_det(minor);
  }
  return total;
}

// Pfaffian as a signed sum over perfect pairings, for small dimension.
inline double pairing_pfaffian(const std::vector<std::vector<double>>& a) {
  std::vector<int> idx(a.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<int>(k);
  std::function<double(std::vector<int>)> rec = [&](std::vector<int> rest) -> double {
    if (rest.empty()) return 1.0;
    double sum = 0.0;
    const int first = rest[0];
    for (std::size_t k = 1; k < rest.size(); ++k) {
      std::vector<int> next;
      for (std::size_t q = 1; q < rest.size(); ++q) {
        if (q != k) next.push_back(rest[q]);
      }
      sum += ((k - 1) % 2 ? -1.0 : 1.0) * a[first][rest[k]] * rec(next);
    }
    return sum;
  };
  return rec(idx);
}

// Ising partition function on a W x H torus by direct summation.
inline double ising_torus_z(int W, int H, const std::function<double(int, int)>& jh,
                            const std::function<double(int, int)>& jv, double beta) {
  const int N = W * H;
  double z = 0.0;
  for (unsigned c = 0; c < (1u << N); ++c) {
    auto sp = [&](int x, int y) { return (c >> (((y % H + H) % H) * W + ((x % W + W) % W)) & 1u) ? -1 : 1; };
    double e = 0.0;
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        e += jh(x, y) * sp(x, y) * sp(x + 1, y) + jv(x, y) * sp(x, y) * sp(x, y + 1);
      }
    }
    z += std::exp(beta * e);
  }
  return z;
}

}  // namespace oracle

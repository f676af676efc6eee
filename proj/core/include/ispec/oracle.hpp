#pragma once

#include <array>
#include <complex>
#include <vector>

#include "ispec/fisher_graph.hpp"
#include "ispec/linalg.hpp"
#include "ispec/model.hpp"

namespace ispec {

enum class Boundary { Torus, Free };

struct SpinEnumeration {
  int width = 0;
  int height = 0;
  // Z = exp(log_shift) * z_scaled; the shift is beta * sum |J| over bonds.
  double log_shift = 0.0;
  long double z_scaled = 0.0L;
  double log_z = 0.0;
  // Row-major over site ids y*width + x, both indices.
  std::vector<double> correlations;
  // q[k]: scaled weight of configurations with k minus spins, field zero.
  std::vector<long double> q;
  double magnetisation = 0.0;

  double corr(int a, int b) const { return correlations[static_cast<std::size_t>(a) * width * height + b]; }
};

inline constexpr int kMaxEnumeratedSites = 20;

// Exact sums over all spin configurations of the (s m) x (t n) lattice.
// Field h enters as exp(h sum sigma). Throws TooLarge beyond 20 sites.
SpinEnumeration enumerate_spin(const PeriodicIsingModel& model, double beta, int s, int t,
                               Boundary boundary = Boundary::Torus, double h = 0.0);

struct LeeYangResult {
  std::vector<std::complex<double>> roots;
  double max_deviation = 0.0;
};

// Roots of Q(z) = sum q_k z^k; all lie on |z| = 1 for ferromagnets.
LeeYangResult lee_yang_check(const PeriodicIsingModel& model, double beta, int s, int t,
                             Boundary boundary = Boundary::Torus);

struct DimerEnumeration {
  double z = 0.0;
  std::array<std::array<double, 2>, 2> sectors{};  // [crosses_x parity][crosses_y parity]
  std::vector<double> edge_probability;
  long long matchings = 0;
};

inline constexpr int kMaxEnumeratedVertices = 36;

// Exhaustive perfect matchings. Throws TooLarge beyond 36 vertices.
DimerEnumeration enumerate_dimer(const FisherGraph& graph);

enum class TransferMode {
  // Exact correlation on the infinite cylinder.
  Cylinder,
  // Cylinder correlation with the tunnelling decay between the two lowest
  // sectors removed; approximates the infinite-plane value above beta_c.
  SymmetryBroken,
};

// Row-to-row transfer over one vertical period for a cylinder of
// circumference t domains (width t m). Dense, for small widths.
struct TransferMatrix {
  int t = 0;
  int width = 0;
  RealMatrix q;
};

TransferMatrix transfer_matrix(const PeriodicIsingModel& model, double beta, int t);

struct TransferOptions {
  int max_iterations = 20000;
  double tol = 1e-14;
};

// <sigma_{0,0} sigma_{dx, i n}> on the infinite cylinder of circumference t
// domains, by power iteration in the two spin-flip sectors. dx = 0 is the
// axis correlation. Width t m may be at most 16.
double transfer_corr(const PeriodicIsingModel& model, double beta, int t, int i,
                     TransferMode mode = TransferMode::Cylinder, int dx = 0, const TransferOptions& opt = {});

// Same correlation on a finite torus of t x s domains from the dense
// transfer matrix, for comparison with enumerate_spin.
double transfer_torus_corr(const PeriodicIsingModel& model, double beta, int s, int t, int i, int dx = 0);

}  // namespace ispec

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ispec/fisher_graph.hpp"
#include "ispec/linalg.hpp"
#include "ispec/model.hpp"
#include "ispec/spectral.hpp"

namespace ispec {

struct SymbolOptions {
  int grid = 256;  // circle samples M, used for both Fourier integrals
  int k_max = 64;
  int threads = 0;
};

// Matrix symbol of the block Toeplitz matrices for correlations along the
// vertical line through column 0. Block order: the U terminals of sites
// (0,0..l0-1), then the D terminals of sites (0,1..l0).
struct ToeplitzSymbol {
  int l0 = 0;
  int block_dim = 0;
  int k_max = 0;
  std::vector<ComplexMatrix> coeffs;   // psi_k for k in [-k_max, k_max]
  std::vector<ComplexMatrix> samples;  // psi(zeta_j), zeta_j = exp(2 pi i j / M)
  std::vector<double> line_weights;    // tanh(beta Jv(0,r)), r < l0
  double prefactor = 1.0;              // prod (1 - tau_r^2)^2

  int grid() const noexcept { return static_cast<int>(samples.size()); }
  ComplexMatrix coeff(int k) const;
  // Truncated Fourier series at zeta.
  ComplexMatrix eval(Complex zeta) const;
};

ToeplitzSymbol build_symbol(const PeriodicIsingModel& model, double beta, const SymbolOptions& opt = {});

struct CorrelationResult {
  int n = 0;
  double corr_sq = 0.0;
  double clipped = 0.0;  // magnitude removed when a tiny negative value was clipped to 0
  std::optional<double> widom_limit;
  std::optional<double> fitted_alpha;

  double corr() const;
};

// <sigma_{0,0} sigma_{0,N}>^2 for N a positive multiple of l0.
CorrelationResult spin_corr_sq(const ToeplitzSymbol& symbol, int n);
CorrelationResult spin_corr_sq(const PeriodicIsingModel& model, double beta, int n, const SymbolOptions& opt = {});

// N x N block Toeplitz matrix T_{jk} = psi_{j-k}.
ComplexMatrix block_toeplitz(const ToeplitzSymbol& symbol, int blocks);

struct WidomResult {
  double g = 0.0;      // geometric mean of det psi
  double g_times_prefactor = 0.0;
  double e = 0.0;      // det(I - H[psi] H[psi~^{-1}]) on the truncation
  double max_identity_deviation = 0.0;  // max_j |prefactor det psi(zeta_j) - 1|
};

WidomResult widom_limit(const ToeplitzSymbol& symbol, int truncation = 64);

struct DecayFit {
  double alpha = 0.0;
  double log_k = 0.0;
  double r_squared = 0.0;
};

struct SeriesPoint {
  int n = 0;
  double value = 0.0;
};

// Least squares of log(value - limit) against n; alpha = -slope.
DecayFit decay_fit(std::span<const SeriesPoint> series, double limit = 0.0);

// Frobenius norm of I - T_n[psi] T_n[psi^{-1}] - H_n[psi] H_n[psi~^{-1}]
// over the leading truncation/4 block rows and columns, n = truncation.
double toeplitz_hankel_residual(const ToeplitzSymbol& symbol, int truncation);
// Same for a scalar or matrix symbol given by samples on the circle.
double toeplitz_hankel_residual(std::span<const ComplexMatrix> samples, int truncation);

// Vertex of the infinite periodic Fisher lattice: fundamental-domain cell
// plus a vertex id of the single-domain graph.
struct LatticeVertex {
  int cx = 0;
  int cy = 0;
  int local = 0;
};

struct LatticeEdge {
  LatticeVertex u;
  LatticeVertex v;
  double weight = 1.0;
};

// The translate to cell (cx,cy) of edge edge_id of the single-domain graph.
LatticeEdge lattice_edge(const FisherGraph& domain, int edge_id, int cx, int cy);

// Entries of the inverse infinite Kasteleyn matrix between a fixed set of
// local vertices, by a trapezoidal double integral.
class InverseKernel {
 public:
  InverseKernel(const KasteleynOperator& op, std::vector<int> locals, int grid, int threads = 0);
  Complex entry(const LatticeVertex& a, const LatticeVertex& b) const;

 private:
  std::vector<int> locals_;
  int grid_;
  int dim_;
  std::vector<ComplexMatrix> blocks_;  // per (z,w) sample: inverse restricted to locals
};

// Probability that all edges occur in the infinite-volume dimer measure.
double edge_probability(const KasteleynOperator& op, std::span<const LatticeEdge> edges, int grid = 128,
                        int threads = 0);
double edge_probability(const InverseKernel& kernel, std::span<const LatticeEdge> edges);

// Probability that all edges (ids of the torus graph) occur on the finite torus.
double torus_edge_probability(const KasteleynOperator& op, std::span<const int> edge_ids);

}  // namespace ispec

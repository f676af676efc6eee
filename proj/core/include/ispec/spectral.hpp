#pragma once

#include <array>
#include <vector>

#include "ispec/fisher_graph.hpp"
#include "ispec/linalg.hpp"
#include "ispec/model.hpp"

namespace ispec {

// Kasteleyn matrix of one fundamental domain. Entry (u,v) of K(z,w) is
// base(u,v) * z^{phase_x(u,v)} * w^{phase_y(u,v)}; z marks edges crossing
// the horizontal cut (vertical translation), w the vertical cut.
struct KasteleynOperator {
  FisherGraph graph;
  RealMatrix base;
  Eigen::MatrixXi phase_x;
  Eigen::MatrixXi phase_y;
  // sector_sign[a][b]: sign of every matching term with a crosses_x and b
  // crosses_y parities in Pf K(1,1).
  std::array<std::array<int, 2>, 2> sector_sign{};
  // Coefficients c[theta][tau] with Z = |sum c Pf K((-1)^theta, (-1)^tau)|.
  std::array<std::array<double, 2>, 2> combination{};

  int dim() const noexcept { return static_cast<int>(base.rows()); }
};

// Kasteleyn operator of an s x t torus (or one domain) for given weights.
KasteleynOperator assemble(const FisherGraph& graph);
KasteleynOperator assemble(const PeriodicIsingModel& model, const EdgeWeightMap& w);
// HighTemp uses tanh(beta J) on the lattice itself; LowTemp uses
// exp(-2 beta J) on the dual lattice.
KasteleynOperator assemble(const PeriodicIsingModel& model, double beta, WeightKind kind);

ComplexMatrix eval_K(const KasteleynOperator& op, Complex z, Complex w);
Complex eval_P(const KasteleynOperator& op, Complex z, Complex w);

// Real skew matrix K((-1)^theta, (-1)^tau).
RealMatrix corner_matrix(const KasteleynOperator& op, int theta, int tau);

struct CornerReport {
  // pf[theta][tau], normalised so that all four equal 1 at zero external weight.
  std::array<std::array<double, 2>, 2> pf{};
  double min_abs = 0.0;
  int argmin_theta = 0;
  int argmin_tau = 0;

  // (z,w) of the argmin corner.
  int corner_z() const noexcept { return argmin_theta ? -1 : 1; }
  int corner_w() const noexcept { return argmin_tau ? -1 : 1; }
};

CornerReport corner_pfaffians(const KasteleynOperator& op);

// Dimer partition function from the four Pfaffians.
double dimer_partition(const KasteleynOperator& op);

struct CriticalResult {
  double beta_c = 0.0;
  CornerReport corners;
  int iterations = 0;
};

// Bisection of the normalised Pf K(1,1) on the even x even replication.
CriticalResult critical_beta(const PeriodicIsingModel& model, double tol = 1e-12);

// Normalised Pf K(1,1) with tanh weights on the even x even replication.
double crossing_function(const PeriodicIsingModel& even_model, double beta);

// Smallest replication of the model with even periods.
PeriodicIsingModel even_replication(const PeriodicIsingModel& model);

struct TorusScan {
  int grid = 0;
  std::vector<double> abs_p;  // row-major: index a*grid + b for z = e^{2 pi i a/grid}, w = e^{2 pi i b/grid}
  double min_abs = 0.0;
  int argmin_a = 0;
  int argmin_b = 0;
  bool at_corner = false;

  double at(int a, int b) const { return abs_p[static_cast<std::size_t>(a) * grid + b]; }
};

TorusScan scan_torus(const KasteleynOperator& op, int grid, int threads = 1);

struct NodeHessian {
  int corner_theta = 0;
  int corner_tau = 0;
  double p_at_node = 0.0;
  // Second derivatives of P(z0 e^{i theta}, w0 e^{i phi}).
  double h_tt = 0.0;
  double h_tp = 0.0;
  double h_pp = 0.0;
  double a() const noexcept { return 0.5 * h_tt; }
  double b() const noexcept { return h_tp; }
  double c() const noexcept { return 0.5 * h_pp; }
  double discriminant() const noexcept { return b() * b() - 4.0 * a() * c(); }
  bool nondegenerate() const noexcept { return a() > 0.0 && c() > 0.0 && discriminant() < 0.0; }
};

// Throws NodeNotFound unless some corner has |P| <= node_tol.
NodeHessian node_hessian(const KasteleynOperator& op, double step = 1e-4, double node_tol = 1e-6);

struct DualityReport {
  double beta = 0.0;
  double tol = 0.0;
  CornerReport high;
  CornerReport low;
  // low.pf / high.pf per corner; the identity predicts +-C with C below.
  std::array<std::array<double, 2>, 2> ratio{};
  double predicted_c = 0.0;
  std::array<std::array<bool, 2>, 2> vanishes{};
};

// Throws DualityViolation if the zero sets disagree at threshold sqrt(tol).
DualityReport duality_check(const PeriodicIsingModel& model, double beta, double tol = 1e-12);

}  // namespace ispec

#include "ispec/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ispec/error.hpp"
#include "ispec/parallel.hpp"

namespace ispec {
namespace {

int permutation_sign(const std::vector<int>& perm) {
  std::vector<char> seen(perm.size(), 0);
  int sign = 1;
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (seen[start]) continue;
    std::size_t len = 0;
    for (std::size_t k = start; !seen[k]; k = static_cast<std::size_t>(perm[k])) {
      seen[k] = 1;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

// Sign of the Pfaffian term of a matching in K(1,1).
int matching_sign(const FisherGraph& g, const std::vector<int>& matching) {
  std::vector<int> perm;
  perm.reserve(g.vertices.size());
  int sign = 1;
  for (int e : matching) {
    perm.push_back(g.edges[e].u);
    perm.push_back(g.edges[e].v);
    sign *= g.edges[e].sign;
  }
  if (perm.size() != g.vertices.size()) throw Error(ErrorCode::BijectionFailure, "matching is not perfect");
  return sign * permutation_sign(perm);
}

void set_sector_signs(KasteleynOperator& op) {
  const FisherGraph& g = op.graph;
  std::vector<char> column(g.edges.size(), 0);
  std::vector<char> row(g.edges.size(), 0);
  for (int y = 0; y < g.height(); ++y) column[g.edge_id(0, y, kVerticalSlot)] = 1;
  for (int x = 0; x < g.width(); ++x) row[g.edge_id(x, 0, kHorizontalSlot)] = 1;
  std::vector<char> both(g.edges.size(), 0);
  for (std::size_t e = 0; e < both.size(); ++e) both[e] = column[e] | row[e];
  const std::vector<char> empty(g.edges.size(), 0);

  op.sector_sign[0][0] = matching_sign(g, complete_matching(g, empty));
  op.sector_sign[1][0] = matching_sign(g, complete_matching(g, column));
  op.sector_sign[0][1] = matching_sign(g, complete_matching(g, row));
  op.sector_sign[1][1] = matching_sign(g, complete_matching(g, both));
  for (int th = 0; th < 2; ++th) {
    for (int ta = 0; ta < 2; ++ta) {
      double c = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          c += op.sector_sign[a][b] * ((th * a + ta * b) % 2 ? -1.0 : 1.0);
        }
      }
      op.combination[th][ta] = 0.25 * c;
    }
  }
}

Complex int_power(Complex x, int e) {
  if (e == 0) return 1.0;
  return e > 0 ? x : 1.0 / x;
}

}  // namespace

KasteleynOperator assemble(const FisherGraph& graph) {
  KasteleynOperator op;
  op.graph = graph;
  const auto V = static_cast<Eigen::Index>(graph.vertices.size());
  op.base = RealMatrix::Zero(V, V);
  op.phase_x = Eigen::MatrixXi::Zero(V, V);
  op.phase_y = Eigen::MatrixXi::Zero(V, V);
  for (const FisherEdge& e : graph.edges) {
    const double k = e.sign * e.weight;
    op.base(e.u, e.v) += k;
    op.base(e.v, e.u) -= k;
    if (e.crosses_x) {
      op.phase_x(e.u, e.v) = 1;
      op.phase_x(e.v, e.u) = -1;
    }
    if (e.crosses_y) {
      op.phase_y(e.u, e.v) = 1;
      op.phase_y(e.v, e.u) = -1;
    }
  }
  set_sector_signs(op);
  return op;
}

KasteleynOperator assemble(const PeriodicIsingModel& model, const EdgeWeightMap& w) {
  return assemble(build_fisher(model, w, 1, 1));
}

KasteleynOperator assemble(const PeriodicIsingModel& model, double beta, WeightKind kind) {
  const EdgeWeightMap w =
      kind == WeightKind::HighTemp ? weights(model, beta, WeightKind::HighTemp) : dual_lattice_weights(model, beta);
  return assemble(model, w);
}

ComplexMatrix eval_K(const KasteleynOperator& op, Complex z, Complex w) {
  if (z == 0.0 || w == 0.0) throw Error(ErrorCode::InvalidArgument, "z and w must be nonzero");
  ComplexMatrix k = op.base.cast<Complex>();
  for (Eigen::Index c = 0; c < k.cols(); ++c) {
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      const int px = op.phase_x(r, c);
      const int py = op.phase_y(r, c);
      if (px != 0) k(r, c) *= int_power(z, px);
      if (py != 0) k(r, c) *= int_power(w, py);
    }
  }
  return k;
}

Complex eval_P(const KasteleynOperator& op, Complex z, Complex w) { return det(eval_K(op, z, w)); }

RealMatrix corner_matrix(const KasteleynOperator& op, int theta, int tau) {
  RealMatrix k = op.base;
  for (Eigen::Index c = 0; c < k.cols(); ++c) {
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      if ((theta && op.phase_x(r, c) != 0) != (tau && op.phase_y(r, c) != 0)) k(r, c) = -k(r, c);
    }
  }
  return k;
}

CornerReport corner_pfaffians(const KasteleynOperator& op) {
  CornerReport rep;
  rep.min_abs = std::numeric_limits<double>::infinity();
  for (int th = 0; th < 2; ++th) {
    for (int ta = 0; ta < 2; ++ta) {
      const double v = op.sector_sign[0][0] * pfaffian(corner_matrix(op, th, ta)).value;
      rep.pf[th][ta] = v;
      if (std::abs(v) < rep.min_abs) {
        rep.min_abs = std::abs(v);
        rep.argmin_theta = th;
        rep.argmin_tau = ta;
      }
    }
  }
  return rep;
}

double dimer_partition(const KasteleynOperator& op) {
  double z = 0.0;
  for (int th = 0; th < 2; ++th) {
    for (int ta = 0; ta < 2; ++ta) z += op.combination[th][ta] * pfaffian(corner_matrix(op, th, ta)).value;
  }
  return std::abs(z);
}

PeriodicIsingModel even_replication(const PeriodicIsingModel& model) {
  return replicate(model, model.m() % 2 ? 2 : 1, model.n() % 2 ? 2 : 1);
}

double crossing_function(const PeriodicIsingModel& even_model, double beta) {
  const KasteleynOperator op = assemble(even_model, beta, WeightKind::HighTemp);
  return op.sector_sign[0][0] * pfaffian(op.base).value;
}

CriticalResult critical_beta(const PeriodicIsingModel& model, double tol) {
  if (!(tol >= 1e-13)) throw Error(ErrorCode::InvalidArgument, "tolerance must be at least 1e-13");
  const PeriodicIsingModel even = even_replication(model);
  CriticalResult out;
  double lo = 0.0;
  double hi = 1.0;
  while (crossing_function(even, hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    ++out.iterations;
    if (hi > 1e3) throw Error(ErrorCode::NoSignChange, "no sign change of Pf K(1,1) below beta = 1e3");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (crossing_function(even, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++out.iterations;
  }
  out.beta_c = 0.5 * (lo + hi);
  out.corners = corner_pfaffians(assemble(even, out.beta_c, WeightKind::HighTemp));
  return out;
}

TorusScan scan_torus(const KasteleynOperator& op, int grid, int threads) {
  if (grid < 4) throw Error(ErrorCode::InvalidArgument, "scan grid must be at least 4");
  TorusScan scan;
  scan.grid = grid;
  scan.abs_p.assign(static_cast<std::size_t>(grid) * grid, 0.0);
  parallel_for(static_cast<std::size_t>(grid), resolve_threads(threads), [&](std::size_t a) {
    const Complex z = unit_root(static_cast<int>(a), grid);
    for (int b = 0; b < grid; ++b) {
      scan.abs_p[a * grid + b] = std::abs(eval_P(op, z, unit_root(b, grid)));
    }
  });
  scan.min_abs = std::numeric_limits<double>::infinity();
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      if (scan.at(a, b) < scan.min_abs) {
        scan.min_abs = scan.at(a, b);
        scan.argmin_a = a;
        scan.argmin_b = b;
      }
    }
  }
  auto corner = [grid](int k) { return k == 0 || (grid % 2 == 0 && k == grid / 2); };
  scan.at_corner = corner(scan.argmin_a) && corner(scan.argmin_b);
  return scan;
}

NodeHessian node_hessian(const KasteleynOperator& op, double step, double node_tol) {
  const CornerReport rep = corner_pfaffians(op);
  const double p_node = rep.min_abs * rep.min_abs;
  if (!(p_node <= node_tol)) throw Error(ErrorCode::NodeNotFound, "no corner of the torus is a zero of P");
  NodeHessian h;
  h.corner_theta = rep.argmin_theta;
  h.corner_tau = rep.argmin_tau;
  h.p_at_node = p_node;
  const double z0 = rep.argmin_theta ? -1.0 : 1.0;
  const double w0 = rep.argmin_tau ? -1.0 : 1.0;
  auto f = [&](double dt, double dp) {
    return eval_P(op, z0 * std::polar(1.0, dt), w0 * std::polar(1.0, dp)).real();
  };
  const double f0 = f(0.0, 0.0);
  const double s2 = step * step;
  h.h_tt = (f(step, 0.0) - 2.0 * f0 + f(-step, 0.0)) / s2;
  h.h_pp = (f(0.0, step) - 2.0 * f0 + f(0.0, -step)) / s2;
  h.h_tp = (f(step, step) - f(step, -step) - f(-step, step) + f(-step, -step)) / (4.0 * s2);
  return h;
}

DualityReport duality_check(const PeriodicIsingModel& model, double beta, double tol) {
  DualityReport rep;
  rep.beta = beta;
  rep.tol = tol;
  rep.high = corner_pfaffians(assemble(model, beta, WeightKind::HighTemp));
  rep.low = corner_pfaffians(assemble(model, beta, WeightKind::LowTemp));
  double c = std::pow(2.0, -model.sites());
  for (int i = 0; i < model.m(); ++i) {
    for (int j = 0; j < model.n(); ++j) {
      c *= (1.0 + std::exp(-2.0 * beta * model.jh(i, j))) * (1.0 + std::exp(-2.0 * beta * model.jv(i, j)));
    }
  }
  rep.predicted_c = c;
  const double threshold = std::sqrt(tol);
  for (int th = 0; th < 2; ++th) {
    for (int ta = 0; ta < 2; ++ta) {
      const bool high_zero = std::abs(rep.high.pf[th][ta]) < threshold;
      const bool low_zero = std::abs(rep.low.pf[th][ta]) < threshold;
      if (high_zero != low_zero) {
        throw Error(ErrorCode::DualityViolation, "corner zero sets of the two weight systems differ");
      }
      rep.vanishes[th][ta] = high_zero;
      rep.ratio[th][ta] = rep.high.pf[th][ta] != 0.0 ? rep.low.pf[th][ta] / rep.high.pf[th][ta]
                                                      : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return rep;
}

}  // namespace ispec

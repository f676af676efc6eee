#include "ispec/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "ispec/error.hpp"
#include "ispec/parallel.hpp"

namespace ispec {
namespace {

int wrap(long long k, int period) {
  long long r = k % period;
  return static_cast<int>(r < 0 ? r + period : r);
}

Complex int_power_on_circle(int j, long long e, int grid) { return unit_root(wrap(static_cast<long long>(j) * e, grid), grid); }

ComplexMatrix coeff_or_zero(const std::vector<ComplexMatrix>& c, int k_max, int k, Eigen::Index dim) {
  if (k < -k_max || k > k_max) return ComplexMatrix::Zero(dim, dim);
  return c[static_cast<std::size_t>(k + k_max)];
}

// Finite-section residual of the Toeplitz-Hankel identity from two
// coefficient tables over [-k_max, k_max].
double th_residual(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& ainv, int k_max,
                   Eigen::Index d, int n) {
  const int window = std::max(1, n / 4);
  auto A = [&](int k) { return coeff_or_zero(a, k_max, k, d); };
  auto Ai = [&](int k) { return coeff_or_zero(ainv, k_max, k, d); };
  double sum = 0.0;
  for (int j = 0; j < window; ++j) {
    for (int k = 0; k < window; ++k) {
      ComplexMatrix r = ComplexMatrix::Zero(d, d);
      if (j == k) r.setIdentity();
      for (int l = 0; l < n; ++l) r -= A(j - l) * Ai(l - k);
      for (int p = 0; p < n; ++p) r -= A(j + p + 1) * Ai(-(p + k + 1));
      sum += r.squaredNorm();
    }
  }
  return std::sqrt(sum);
}

std::vector<ComplexMatrix> pointwise_inverse(std::span<const ComplexMatrix> samples) {
  std::vector<ComplexMatrix> inv;
  inv.reserve(samples.size());
  for (const auto& s : samples) inv.push_back(checked_inverse(s));
  return inv;
}

}  // namespace

ComplexMatrix ToeplitzSymbol::coeff(int k) const { return coeff_or_zero(coeffs, k_max, k, block_dim); }

ComplexMatrix ToeplitzSymbol::eval(Complex zeta) const {
  ComplexMatrix acc = ComplexMatrix::Zero(block_dim, block_dim);
  for (int k = -k_max; k <= k_max; ++k) acc += coeff(k) * std::pow(zeta, k);
  return acc;
}

double CorrelationResult::corr() const { return std::sqrt(std::max(corr_sq, 0.0)); }

ToeplitzSymbol build_symbol(const PeriodicIsingModel& model, double beta, const SymbolOptions& opt) {
  const int M = opt.grid;
  if (M < 8 || opt.k_max < 0 || M < 4 * opt.k_max) {
    throw Error(ErrorCode::InvalidArgument, "symbol grid must be at least 4 k_max");
  }
  const KasteleynOperator op = assemble(model, beta, WeightKind::HighTemp);
  const FisherGraph& g = op.graph;
  const int n = model.n();
  const int d = 2 * n;

  std::vector<int> offset(d);
  std::vector<int> vertex(d);
  for (int r = 0; r < n; ++r) {
    offset[r] = 0;
    vertex[r] = g.vertex_id(0, r, GadgetRole::U);
    offset[n + r] = r + 1 == n ? 1 : 0;
    vertex[n + r] = g.vertex_id(0, r + 1, GadgetRole::D);
  }

  // inner[q] = (1/M) sum_p K(z_q, w_p)^{-1} restricted to the line vertices.
  std::vector<ComplexMatrix> inner(static_cast<std::size_t>(M));
  parallel_for(static_cast<std::size_t>(M), resolve_threads(opt.threads), [&](std::size_t q) {
    const Complex z = unit_root(static_cast<int>(q), M);
    ComplexMatrix acc = ComplexMatrix::Zero(d, d);
    ComplexMatrix rhs = ComplexMatrix::Zero(op.dim(), d);
    for (int b = 0; b < d; ++b) rhs(vertex[b], b) = 1.0;
    for (int p = 0; p < M; ++p) {
      const ComplexMatrix k = eval_K(op, z, unit_root(p, M));
      Eigen::PartialPivLU<ComplexMatrix> lu(k);
      if (!(lu.rcond() >= kNearSingularRcond)) {
        throw Error(ErrorCode::NearSingular, "Kasteleyn matrix is singular on the unit torus");
      }
      const ComplexMatrix x = lu.solve(rhs);
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) acc(a, b) += x(vertex[a], b);
      }
    }
    inner[q] = acc / static_cast<double>(M);
  });

  ToeplitzSymbol sym;
  sym.l0 = n;
  sym.block_dim = d;
  sym.k_max = opt.k_max;
  sym.prefactor = 1.0;
  for (int r = 0; r < n; ++r) {
    const double tau = std::tanh(beta * model.jv(0, r));
    sym.line_weights.push_back(tau);
    sym.prefactor *= (1.0 - tau * tau) * (1.0 - tau * tau);
  }

  ComplexMatrix correction = ComplexMatrix::Zero(d, d);
  for (int r = 0; r < n; ++r) {
    const double tau = sym.line_weights[r];
    const double s = op.base(vertex[r], vertex[n + r]) >= 0.0 ? 1.0 : -1.0;
    const double c = tau / (1.0 - tau * tau);
    correction(r, n + r) -= s * c;
    correction(n + r, r) += s * c;
  }

  sym.samples.resize(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) {
    const ComplexMatrix& gz = inner[static_cast<std::size_t>((M - j) % M)];
    ComplexMatrix psi(d, d);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) psi(a, b) = int_power_on_circle(j, -(offset[a] - offset[b]), M) * gz(a, b);
    }
    sym.samples[static_cast<std::size_t>(j)] = psi + correction;
  }
  sym.coeffs = fourier_coeffs(sym.samples, -opt.k_max, opt.k_max);
  return sym;
}

ComplexMatrix block_toeplitz(const ToeplitzSymbol& symbol, int blocks) {
  const int d = symbol.block_dim;
  ComplexMatrix t = ComplexMatrix::Zero(static_cast<Eigen::Index>(d) * blocks, static_cast<Eigen::Index>(d) * blocks);
  for (int j = 0; j < blocks; ++j) {
    for (int k = 0; k < blocks; ++k) {
      const int diff = j - k;
      if (diff < -symbol.k_max || diff > symbol.k_max) continue;
      t.block(static_cast<Eigen::Index>(d) * j, static_cast<Eigen::Index>(d) * k, d, d) =
          symbol.coeffs[static_cast<std::size_t>(diff + symbol.k_max)];
    }
  }
  return t;
}

CorrelationResult spin_corr_sq(const ToeplitzSymbol& symbol, int n) {
  if (n < 1 || n % symbol.l0 != 0) throw Error(ErrorCode::InvalidArgument, "N must be a positive multiple of l0");
  const int blocks = n / symbol.l0;
  const LogDet ld = log_det(block_toeplitz(symbol, blocks));
  CorrelationResult res;
  res.n = n;
  if (ld.singular) return res;
  const double value = ld.phase.real() * std::exp(blocks * std::log(symbol.prefactor) + ld.log_abs);
  if (value < 0.0) {
    res.clipped = -value;
    res.corr_sq = 0.0;
  } else {
    res.corr_sq = value;
  }
  return res;
}

CorrelationResult spin_corr_sq(const PeriodicIsingModel& model, double beta, int n, const SymbolOptions& opt) {
  return spin_corr_sq(build_symbol(model, beta, opt), n);
}

WidomResult widom_limit(const ToeplitzSymbol& symbol, int truncation) {
  if (truncation < 1) throw Error(ErrorCode::InvalidArgument, "truncation must be positive");
  const int M = symbol.grid();
  const int d = symbol.block_dim;
  WidomResult out;
  Complex log_sum = 0.0;
  for (const auto& s : symbol.samples) {
    const Complex dt = det(s);
    log_sum += std::log(dt);
    out.max_identity_deviation = std::max(out.max_identity_deviation, std::abs(symbol.prefactor * dt - 1.0));
  }
  out.g = std::exp((log_sum / static_cast<double>(M)).real());
  out.g_times_prefactor = out.g * symbol.prefactor;

  const int k_inv = std::min(2 * truncation, M / 4);
  const auto inv = fourier_coeffs(pointwise_inverse(symbol.samples), -k_inv, k_inv);
  const Eigen::Index size = static_cast<Eigen::Index>(d) * truncation;
  ComplexMatrix h1 = ComplexMatrix::Zero(size, size);
  ComplexMatrix h2 = ComplexMatrix::Zero(size, size);
  for (int j = 0; j < truncation; ++j) {
    for (int k = 0; k < truncation; ++k) {
      h1.block(static_cast<Eigen::Index>(d) * j, static_cast<Eigen::Index>(d) * k, d, d) = symbol.coeff(j + k + 1);
      h2.block(static_cast<Eigen::Index>(d) * j, static_cast<Eigen::Index>(d) * k, d, d) =
          coeff_or_zero(inv, k_inv, -(j + k + 1), d);
    }
  }
  out.e = det(ComplexMatrix(ComplexMatrix::Identity(size, size) - h1 * h2)).real();
  return out;
}

DecayFit decay_fit(std::span<const SeriesPoint> series, double limit) {
  if (series.size() < 5) throw Error(ErrorCode::InvalidArgument, "decay fit needs at least 5 points");
  std::vector<double> x, y;
  for (const auto& p : series) {
    const double r = p.value - limit;
    if (!(r > 0.0)) throw Error(ErrorCode::NonPositiveResidual, "series is not above its limit");
    x.push_back(p.n);
    y.push_back(std::log(r));
  }
  const double k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "decay fit needs distinct N values");
  const double slope = sxy / sxx;
  DecayFit fit;
  fit.alpha = -slope;
  fit.log_k = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.log_k + slope * x[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

double toeplitz_hankel_residual(std::span<const ComplexMatrix> samples, int truncation) {
  if (truncation < 1 || samples.empty()) throw Error(ErrorCode::InvalidArgument, "empty symbol or truncation");
  const int M = static_cast<int>(samples.size());
  const int k_max = std::min(2 * truncation, M / 4);
  const auto a = fourier_coeffs(samples, -k_max, k_max);
  const auto ainv = fourier_coeffs(pointwise_inverse(samples), -k_max, k_max);
  return th_residual(a, ainv, k_max, samples[0].rows(), truncation);
}

double toeplitz_hankel_residual(const ToeplitzSymbol& symbol, int truncation) {
  return toeplitz_hankel_residual(std::span<const ComplexMatrix>(symbol.samples), truncation);
}

LatticeEdge lattice_edge(const FisherGraph& domain, int edge_id, int cx, int cy) {
  if (edge_id < 0 || edge_id >= static_cast<int>(domain.edges.size())) {
    throw Error(ErrorCode::InvalidArgument, "edge id out of range");
  }
  const FisherEdge& e = domain.edges[static_cast<std::size_t>(edge_id)];
  return LatticeEdge{{cx, cy, e.u}, {cx + (e.crosses_y ? 1 : 0), cy + (e.crosses_x ? 1 : 0), e.v}, e.weight};
}

InverseKernel::InverseKernel(const KasteleynOperator& op, std::vector<int> locals, int grid, int threads)
    : locals_(std::move(locals)), grid_(grid), dim_(static_cast<int>(locals_.size())) {
  if (grid_ < 4) throw Error(ErrorCode::InvalidArgument, "kernel grid must be at least 4");
  blocks_.resize(static_cast<std::size_t>(grid_) * grid_);
  parallel_for(static_cast<std::size_t>(grid_), resolve_threads(threads), [&](std::size_t q) {
    const Complex z = unit_root(static_cast<int>(q), grid_);
    ComplexMatrix rhs = ComplexMatrix::Zero(op.dim(), dim_);
    for (int b = 0; b < dim_; ++b) rhs(locals_[b], b) = 1.0;
    for (int p = 0; p < grid_; ++p) {
      Eigen::PartialPivLU<ComplexMatrix> lu(eval_K(op, z, unit_root(p, grid_)));
      if (!(lu.rcond() >= kNearSingularRcond)) {
        throw Error(ErrorCode::NearSingular, "Kasteleyn matrix is singular on the unit torus");
      }
      const ComplexMatrix x = lu.solve(rhs);
      ComplexMatrix blk(dim_, dim_);
      for (int a = 0; a < dim_; ++a) {
        for (int b = 0; b < dim_; ++b) blk(a, b) = x(locals_[a], b);
      }
      blocks_[q * grid_ + static_cast<std::size_t>(p)] = std::move(blk);
    }
  });
}

Complex InverseKernel::entry(const LatticeVertex& a, const LatticeVertex& b) const {
  auto pos = [&](int local) {
    auto it = std::find(locals_.begin(), locals_.end(), local);
    if (it == locals_.end()) throw Error(ErrorCode::InvalidArgument, "vertex not covered by this kernel");
    return static_cast<int>(it - locals_.begin());
  };
  const int ia = pos(a.local);
  const int ib = pos(b.local);
  const long long dy = a.cy - b.cy;
  const long long dx = a.cx - b.cx;
  Complex acc = 0.0;
  for (int q = 0; q < grid_; ++q) {
    const Complex zq = unit_root(wrap(q * dy, grid_), grid_);
    for (int p = 0; p < grid_; ++p) {
      acc += zq * unit_root(wrap(p * dx, grid_), grid_) * blocks_[static_cast<std::size_t>(q) * grid_ + p](ia, ib);
    }
  }
  return acc / (static_cast<double>(grid_) * grid_);
}

double edge_probability(const InverseKernel& kernel, std::span<const LatticeEdge> edges) {
  std::vector<LatticeVertex> verts;
  double weight = 1.0;
  for (const auto& e : edges) {
    verts.push_back(e.u);
    verts.push_back(e.v);
    weight *= e.weight;
  }
  const auto k = static_cast<Eigen::Index>(verts.size());
  RealMatrix sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = kernel.entry(verts[a], verts[b]).real();
  }
  // Entries come from quadrature; symmetrise before the skew check.
  sub = 0.5 * (sub - sub.transpose()).eval();
  return weight * std::abs(pfaffian(sub).value);
}

double edge_probability(const KasteleynOperator& op, std::span<const LatticeEdge> edges, int grid, int threads) {
  std::vector<int> locals;
  for (const auto& e : edges) {
    for (int v : {e.u.local, e.v.local}) {
      if (std::find(locals.begin(), locals.end(), v) == locals.end()) locals.push_back(v);
    }
  }
  const InverseKernel kernel(op, std::move(locals), grid, threads);
  return edge_probability(kernel, edges);
}

double torus_edge_probability(const KasteleynOperator& op, std::span<const int> edge_ids) {
  std::vector<int> touched;
  for (int e : edge_ids) {
    touched.push_back(op.graph.edges.at(static_cast<std::size_t>(e)).u);
    touched.push_back(op.graph.edges.at(static_cast<std::size_t>(e)).v);
  }
  std::vector<int> sorted = touched;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return 0.0;
  double num = 0.0;
  double den = 0.0;
  for (int th = 0; th < 2; ++th) {
    for (int ta = 0; ta < 2; ++ta) {
      const RealMatrix k = corner_matrix(op, th, ta);
      RealMatrix restricted = k;
      for (int v : touched) {
        restricted.row(v).setZero();
        restricted.col(v).setZero();
      }
      for (int e : edge_ids) {
        const FisherEdge& fe = op.graph.edges[static_cast<std::size_t>(e)];
        restricted(fe.u, fe.v) = k(fe.u, fe.v);
        restricted(fe.v, fe.u) = k(fe.v, fe.u);
      }
      num += op.combination[th][ta] * pfaffian(restricted).value;
      den += op.combination[th][ta] * pfaffian(k).value;
    }
  }
  return num / den;
}

}  // namespace ispec

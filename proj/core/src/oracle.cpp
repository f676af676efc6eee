#include "ispec/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "ispec/error.hpp"

namespace ispec {
namespace {

// Neumaier-compensated long double accumulator.
struct Accumulator {
  long double sum = 0.0L;
  long double comp = 0.0L;
  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + comp; }
};

struct Bond {
  int a;
  int b;
  double j;
};

std::vector<Bond> lattice_bonds(const PeriodicIsingModel& model, int W, int H, Boundary boundary) {
  std::vector<Bond> bonds;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const int here = y * W + x;
      if (boundary == Boundary::Torus || x + 1 < W) bonds.push_back({here, y * W + (x + 1) % W, model.jh(x, y)});
      if (boundary == Boundary::Torus || y + 1 < H) bonds.push_back({here, ((y + 1) % H) * W + x, model.jv(x, y)});
    }
  }
  return bonds;
}

using Vec = std::vector<double>;

// Matrix-free transfer over one vertical period on a cylinder of width W.
class RowTransfer {
 public:
  RowTransfer(const PeriodicIsingModel& model, double beta, int width) : W_(width), n_(model.n()) {
    const std::size_t dim = std::size_t{1} << W_;
    half_diag_.assign(static_cast<std::size_t>(n_), Vec(dim));
    cosh_.assign(static_cast<std::size_t>(n_), Vec(static_cast<std::size_t>(W_)));
    sinh_.assign(static_cast<std::size_t>(n_), Vec(static_cast<std::size_t>(W_)));
    for (int j = 0; j < n_; ++j) {
      // Shift exponents by beta sum J so the largest factor is 1.
      double shift_h = 0.0;
      for (int x = 0; x < W_; ++x) shift_h += model.jh(x, j);
      for (std::size_t idx = 0; idx < dim; ++idx) {
        double e = 0.0;
        for (int x = 0; x < W_; ++x) {
          const int nx = (x + 1) % W_;
          e += model.jh(x, j) * ((((idx >> x) ^ (idx >> nx)) & 1u) ? -1.0 : 1.0);
        }
        half_diag_[j][idx] = std::exp(0.5 * beta * (e - shift_h));
      }
      for (int x = 0; x < W_; ++x) {
        cosh_[j][x] = 1.0;
        sinh_[j][x] = std::exp(-2.0 * beta * model.jv(x, j));
      }
    }
  }

  std::size_t dim() const { return std::size_t{1} << W_; }
  bool symmetric() const { return n_ == 1; }

  // v <- Q v with Q = T_0 ... T_{n-1}, T_j = D_j^{1/2} V_j D_{j+1}^{1/2}.
  void apply(Vec& v) const {
    for (int j = n_ - 1; j >= 0; --j) {
      scale(v, half_diag_[(j + 1) % n_]);
      flip_layer(v, j);
      scale(v, half_diag_[j]);
    }
  }

  // v <- Q^T v.
  void apply_transpose(Vec& v) const {
    for (int j = 0; j < n_; ++j) {
      scale(v, half_diag_[j]);
      flip_layer(v, j);
      scale(v, half_diag_[(j + 1) % n_]);
    }
  }

 private:
  static void scale(Vec& v, const Vec& d) {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] *= d[k];
  }

  void flip_layer(Vec& v, int j) const {
    for (int x = 0; x < W_; ++x) {
      const std::size_t bit = std::size_t{1} << x;
      const double c = cosh_[j][x];
      const double s = sinh_[j][x];
      for (std::size_t idx = 0; idx < v.size(); ++idx) {
        if (idx & bit) continue;
        const double a = v[idx];
        const double b = v[idx | bit];
        v[idx] = c * a + s * b;
        v[idx | bit] = s * a + c * b;
      }
    }
  }

  int W_;
  int n_;
  std::vector<Vec> half_diag_;
  std::vector<Vec> cosh_;
  std::vector<Vec> sinh_;
};

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

void project(Vec& v, int parity) {
  const std::size_t last = v.size() - 1;
  for (std::size_t k = 0; k <= last / 2; ++k) {
    const double a = v[k];
    const double b = v[last - k];
    const double even = 0.5 * (a + b);
    const double odd = 0.5 * (a - b);
    v[k] = parity == 0 ? even : odd;
    v[last - k] = parity == 0 ? even : -odd;
  }
}

struct Eigenpair {
  double lambda = 0.0;
  Vec v;
};

template <class Apply>
Eigenpair power_iteration(Apply&& apply, Vec v, int parity, const TransferOptions& opt) {
  project(v, parity);
  double nv = norm(v);
  for (auto& x : v) x /= nv;
  double lambda = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    Vec w = v;
    apply(w);
    project(w, parity);
    lambda = norm(w);
    for (auto& x : w) x /= lambda;
    if (dot(w, v) < 0.0) {
      for (auto& x : w) x = -x;
    }
    double diff = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) diff = std::max(diff, std::fabs(w[k] - v[k]));
    v = std::move(w);
    if (diff < opt.tol) break;
  }
  return {lambda, std::move(v)};
}

Vec spin_diag(std::size_t dim, int x) {
  Vec s(dim);
  for (std::size_t idx = 0; idx < dim; ++idx) s[idx] = (idx >> x & 1u) ? -1.0 : 1.0;
  return s;
}

Vec hadamard(const Vec& a, const Vec& b) {
  Vec c(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k] * b[k];
  return c;
}

}  // namespace

SpinEnumeration enumerate_spin(const PeriodicIsingModel& model, double beta, int s, int t, Boundary boundary,
                               double h) {
  if (s < 1 || t < 1) throw Error(ErrorCode::InvalidArgument, "lattice size must be positive");
  if (!(beta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be nonnegative");
  const int W = s * model.m();
  const int H = t * model.n();
  const int N = W * H;
  if (N > kMaxEnumeratedSites) throw Error(ErrorCode::TooLarge, "spin enumeration is limited to 20 sites");
  const auto bonds = lattice_bonds(model, W, H, boundary);
  double bond_total = 0.0;
  for (const auto& b : bonds) bond_total += b.j;

  SpinEnumeration out;
  out.width = W;
  out.height = H;
  out.log_shift = beta * bond_total + std::fabs(h) * N;
  std::vector<Accumulator> q(static_cast<std::size_t>(N) + 1);
  Accumulator z, mag;
  std::vector<double> differ(static_cast<std::size_t>(N) * N, 0.0);

  const std::uint32_t count = std::uint32_t{1} << N;
  for (std::uint32_t c = 0; c < count; ++c) {
    double e = 0.0;
    for (const auto& b : bonds) e += (((c >> b.a) ^ (c >> b.b)) & 1u) ? -b.j : b.j;
    const int minus = std::popcount(c);
    const int m_total = N - 2 * minus;
    const double base = std::exp(beta * (e - bond_total));
    const double w = base * std::exp(h * m_total - std::fabs(h) * N);
    q[static_cast<std::size_t>(minus)].add(base);
    z.add(w);
    mag.add(w * m_total);
    for (int a = 0; a < N; ++a) {
      for (int b = a + 1; b < N; ++b) {
        if (((c >> a) ^ (c >> b)) & 1u) differ[static_cast<std::size_t>(a) * N + b] += w;
      }
    }
  }
  out.z_scaled = z.value();
  out.log_z = out.log_shift + std::log(static_cast<double>(out.z_scaled));
  out.magnetisation = static_cast<double>(mag.value() / out.z_scaled) / N;
  out.q.resize(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) out.q[k] = q[k].value();
  out.correlations.assign(static_cast<std::size_t>(N) * N, 1.0);
  const double zd = static_cast<double>(out.z_scaled);
  for (int a = 0; a < N; ++a) {
    for (int b = a + 1; b < N; ++b) {
      const double v = 1.0 - 2.0 * differ[static_cast<std::size_t>(a) * N + b] / zd;
      out.correlations[static_cast<std::size_t>(a) * N + b] = v;
      out.correlations[static_cast<std::size_t>(b) * N + a] = v;
    }
  }
  return out;
}

LeeYangResult lee_yang_check(const PeriodicIsingModel& model, double beta, int s, int t, Boundary boundary) {
  if (s * model.m() * t * model.n() > 16) throw Error(ErrorCode::TooLarge, "Lee-Yang check is limited to 16 sites");
  const SpinEnumeration en = enumerate_spin(model, beta, s, t, boundary, 0.0);
  const auto& q = en.q;
  const int deg = static_cast<int>(q.size()) - 1;
  LeeYangResult out;
  if (deg < 1) return out;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int k = 0; k < deg; ++k) companion(0, k) = -static_cast<double>(q[deg - 1 - k] / q[deg]);
  for (int k = 1; k < deg; ++k) companion(k, k - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  using LC = std::complex<long double>;
  for (int k = 0; k < deg; ++k) {
    LC r(es.eigenvalues()[k].real(), es.eigenvalues()[k].imag());
    for (int it = 0; it < 50; ++it) {
      LC p = static_cast<long double>(q[deg]);
      LC dp = 0.0L;
      for (int c = deg - 1; c >= 0; --c) {
        dp = dp * r + p;
        p = p * r + LC(q[c]);
      }
      if (std::abs(dp) == 0.0L) break;
      const LC step = p / dp;
      r -= step;
      if (std::abs(step) < 1e-18L * std::max(1.0L, std::abs(r))) break;
    }
    out.roots.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
    out.max_deviation = std::max(out.max_deviation, static_cast<double>(std::fabs(std::abs(r) - 1.0L)));
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const auto& a, const auto& b) {
    return std::arg(a) < std::arg(b);
  });
  return out;
}

DimerEnumeration enumerate_dimer(const FisherGraph& graph) {
  const int V = static_cast<int>(graph.vertices.size());
  if (V > kMaxEnumeratedVertices) throw Error(ErrorCode::TooLarge, "dimer enumeration is limited to 36 vertices");
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(V));
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    incident[graph.edges[e].u].push_back(static_cast<int>(e));
    incident[graph.edges[e].v].push_back(static_cast<int>(e));
  }
  DimerEnumeration out;
  std::vector<double> edge_weight(graph.edges.size(), 0.0);
  std::vector<char> used(static_cast<std::size_t>(V), 0);
  std::vector<int> current;

  auto recurse = [&](auto&& self, int first_free) -> void {
    while (first_free < V && used[first_free]) ++first_free;
    if (first_free == V) {
      double w = 1.0;
      int a = 0, b = 0;
      for (int e : current) {
        w *= graph.edges[e].weight;
        a ^= graph.edges[e].crosses_x ? 1 : 0;
        b ^= graph.edges[e].crosses_y ? 1 : 0;
      }
      out.sectors[a][b] += w;
      for (int e : current) edge_weight[e] += w;
      ++out.matchings;
      return;
    }
    used[first_free] = 1;
    for (int e : incident[first_free]) {
      const int other = graph.edges[e].u == first_free ? graph.edges[e].v : graph.edges[e].u;
      if (other == first_free || used[other]) continue;
      used[other] = 1;
      current.push_back(e);
      self(self, first_free + 1);
      current.pop_back();
      used[other] = 0;
    }
    used[first_free] = 0;
  };
  recurse(recurse, 0);
  out.z = out.sectors[0][0] + out.sectors[0][1] + out.sectors[1][0] + out.sectors[1][1];
  out.edge_probability.resize(graph.edges.size());
  for (std::size_t e = 0; e < edge_weight.size(); ++e) out.edge_probability[e] = edge_weight[e] / out.z;
  return out;
}

TransferMatrix transfer_matrix(const PeriodicIsingModel& model, double beta, int t) {
  const int W = t * model.m();
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "circumference must be positive");
  if (W > 12) throw Error(ErrorCode::TooLarge, "dense transfer matrix is limited to width 12");
  const RowTransfer rt(model, beta, W);
  const auto dim = static_cast<Eigen::Index>(rt.dim());
  TransferMatrix tm;
  tm.t = t;
  tm.width = W;
  tm.q.resize(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    Vec v(static_cast<std::size_t>(dim), 0.0);
    v[static_cast<std::size_t>(c)] = 1.0;
    rt.apply(v);
    for (Eigen::Index r = 0; r < dim; ++r) tm.q(r, c) = v[static_cast<std::size_t>(r)];
  }
  return tm;
}

double transfer_corr(const PeriodicIsingModel& model, double beta, int t, int i, TransferMode mode, int dx,
                     const TransferOptions& opt) {
  const int W = t * model.m();
  if (t < 1 || i < 0) throw Error(ErrorCode::InvalidArgument, "circumference and separation must be valid");
  if (W > 16) throw Error(ErrorCode::TooLarge, "cylinder transfer is limited to width 16");
  if (!(beta > 0.0)) return i == 0 && dx % W == 0 ? 1.0 : 0.0;
  const RowTransfer rt(model, beta, W);
  const std::size_t dim = rt.dim();
  const Vec s0 = spin_diag(dim, 0);
  const Vec sx = spin_diag(dim, ((dx % W) + W) % W);

  Vec start_even(dim, 1.0);
  Vec start_odd(dim, 0.0);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    start_odd[idx] = static_cast<double>(W - 2 * std::popcount(idx)) + 0.5 * s0[idx];
  }
  auto right = [&](Vec& v) { rt.apply(v); };
  auto left = [&](Vec& v) { rt.apply_transpose(v); };
  const Eigenpair r0 = power_iteration(right, start_even, 0, opt);
  const Eigenpair l0 = rt.symmetric() ? r0 : power_iteration(left, start_even, 0, opt);

  Vec w = hadamard(sx, r0.v);
  for (int k = 0; k < i; ++k) {
    rt.apply(w);
    for (auto& x : w) x /= r0.lambda;
  }
  double c = dot(hadamard(l0.v, s0), w) / dot(l0.v, r0.v);
  if (mode == TransferMode::SymmetryBroken) {
    const Eigenpair r1 = power_iteration(right, start_odd, 1, opt);
    const Eigenpair l1 = rt.symmetric() ? r1 : power_iteration(left, start_odd, 1, opt);
    const double m01 = dot(l0.v, hadamard(s0, r1.v)) * dot(l1.v, hadamard(sx, r0.v)) /
                       (dot(l0.v, r0.v) * dot(l1.v, r1.v));
    c += m01 * (1.0 - std::pow(r1.lambda / r0.lambda, i));
  }
  return c;
}

double transfer_torus_corr(const PeriodicIsingModel& model, double beta, int s, int t, int i, int dx) {
  if (t < 1 || i < 0) throw Error(ErrorCode::InvalidArgument, "torus size and separation must be valid");
  const TransferMatrix tm = transfer_matrix(model, beta, s);
  const auto dim = tm.q.rows();
  Eigen::VectorXd s0(dim), sx(dim);
  const int W = tm.width;
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    s0[idx] = (idx & 1) ? -1.0 : 1.0;
    sx[idx] = (idx >> (((dx % W) + W) % W) & 1) ? -1.0 : 1.0;
  }
  RealMatrix qi = RealMatrix::Identity(dim, dim);
  for (int k = 0; k < i % t; ++k) qi = qi * tm.q;
  RealMatrix rest = RealMatrix::Identity(dim, dim);
  for (int k = 0; k < t - i % t; ++k) rest = rest * tm.q;
  const RealMatrix full = qi * rest;
  const double num = (s0.asDiagonal() * qi * sx.asDiagonal() * rest).trace();
  return num / full.trace();
}

}  // namespace ispec

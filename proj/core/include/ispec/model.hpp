#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ispec {

// Coupling grid indexed [i][j]; i is the horizontal site index, j the vertical.
using Grid = std::vector<std::vector<double>>;

// Ferromagnetic nearest-neighbour couplings with an m x n periodic pattern.
// jh(i,j) couples site (i,j) to (i+1,j); jv(i,j) couples (i,j) to (i,j+1).
class PeriodicIsingModel {
 public:
  PeriodicIsingModel(int m, int n, Grid jh, Grid jv);

  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  int sites() const noexcept { return m_ * n_; }

  // Indices are reduced modulo the period.
  double jh(int i, int j) const noexcept;
  double jv(int i, int j) const noexcept;

  const Grid& jh_grid() const noexcept { return jh_; }
  const Grid& jv_grid() const noexcept { return jv_; }

 private:
  int m_;
  int n_;
  Grid jh_;
  Grid jv_;
};

enum class WeightKind { HighTemp, LowTemp };

// One weight per coupling, laid out like the coupling grids.
struct EdgeWeightMap {
  WeightKind kind = WeightKind::HighTemp;
  int m = 0;
  int n = 0;
  Grid horizontal;
  Grid vertical;

  double h(int i, int j) const noexcept;
  double v(int i, int j) const noexcept;
};

PeriodicIsingModel parse_model(std::string_view text);
PeriodicIsingModel load_model(const std::string& path);
std::string to_json(const PeriodicIsingModel& model);

// tanh(beta J) for HighTemp, exp(-2 beta J) for LowTemp. Values round to the
// closed interval [0,1] in double precision for extreme beta.
EdgeWeightMap weights(const PeriodicIsingModel& model, double beta, WeightKind kind);

// Applies tau -> (1 - tau) / (1 + tau) entrywise and flips the kind.
EdgeWeightMap dualize(const EdgeWeightMap& w);

// Low-temperature weights placed on the dual lattice. Dual site (i,j) sits at
// (i+1/2, j+1/2); its horizontal edge crosses jv(i+1,j) and its vertical edge
// crosses jh(i,j+1).
EdgeWeightMap dual_lattice_weights(const PeriodicIsingModel& model, double beta);

PeriodicIsingModel replicate(const PeriodicIsingModel& model, int a, int b);

// Uniform weights w on every external edge, used for the beta -> 0 and
// weight-driven constructions.
EdgeWeightMap uniform_weights(int m, int n, double w, WeightKind kind = WeightKind::HighTemp);

}  // namespace ispec

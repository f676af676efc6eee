#include "ispec/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ispec/error.hpp"

namespace ispec {
namespace {

int wrap(int k, int period) noexcept {
  int r = k % period;
  return r < 0 ? r + period : r;
}

void check_grid(const Grid& g, int m, int n, const char* name) {
  if (static_cast<int>(g.size()) != m) {
    throw Error(ErrorCode::DimensionMismatch, std::string(name) + " must have m rows");
  }
  for (const auto& row : g) {
    if (static_cast<int>(row.size()) != n) {
      throw Error(ErrorCode::DimensionMismatch, std::string(name) + " rows must have n entries");
    }
    for (double J : row) {
      if (!(J > 0.0) || !std::isfinite(J)) {
        throw Error(ErrorCode::NonPositiveCoupling, std::string(name) + " contains a non-positive coupling");
      }
    }
  }
}

Grid read_grid(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw Error(ErrorCode::MalformedDocument, std::string("missing array '") + key + "'");
  }
  Grid g;
  for (const auto& row : doc[key]) {
    if (!row.is_array()) throw Error(ErrorCode::MalformedDocument, std::string(key) + " rows must be arrays");
    std::vector<double> r;
    for (const auto& x : row) {
      if (!x.is_number()) throw Error(ErrorCode::MalformedDocument, std::string(key) + " entries must be numbers");
      r.push_back(x.get<double>());
    }
    g.push_back(std::move(r));
  }
  return g;
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

PeriodicIsingModel::PeriodicIsingModel(int m, int n, Grid jh, Grid jv)
    : m_(m), n_(n), jh_(std::move(jh)), jv_(std::move(jv)) {
  if (m_ < 1 || n_ < 1) throw Error(ErrorCode::DimensionMismatch, "periods must be positive");
  check_grid(jh_, m_, n_, "Jh");
  check_grid(jv_, m_, n_, "Jv");
}

double PeriodicIsingModel::jh(int i, int j) const noexcept { return jh_[wrap(i, m_)][wrap(j, n_)]; }
double PeriodicIsingModel::jv(int i, int j) const noexcept { return jv_[wrap(i, m_)][wrap(j, n_)]; }

double EdgeWeightMap::h(int i, int j) const noexcept { return horizontal[wrap(i, m)][wrap(j, n)]; }
double EdgeWeightMap::v(int i, int j) const noexcept { return vertical[wrap(i, m)][wrap(j, n)]; }

PeriodicIsingModel parse_model(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "top level must be an object");
  for (const char* key : {"m", "n"}) {
    if (!doc.contains(key) || !doc[key].is_number_integer()) {
      throw Error(ErrorCode::MalformedDocument, std::string("missing integer '") + key + "'");
    }
  }
  return PeriodicIsingModel(doc["m"].get<int>(), doc["n"].get<int>(), read_grid(doc, "Jh"), read_grid(doc, "Jv"));
}

PeriodicIsingModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedDocument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string to_json(const PeriodicIsingModel& model) {
  auto grid = [](const Grid& g) {
    std::string s = "[";
    for (std::size_t i = 0; i < g.size(); ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < g[i].size(); ++j) {
        if (j) s += ",";
        s += fmt17(g[i][j]);
      }
      s += "]";
    }
    return s + "]";
  };
  return "{\"m\":" + std::to_string(model.m()) + ",\"n\":" + std::to_string(model.n()) +
         ",\"Jh\":" + grid(model.jh_grid()) + ",\"Jv\":" + grid(model.jv_grid()) + "}";
}

EdgeWeightMap weights(const PeriodicIsingModel& model, double beta, WeightKind kind) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::InvalidArgument, "beta must be positive and finite");
  auto f = [&](double J) { return kind == WeightKind::HighTemp ? std::tanh(beta * J) : std::exp(-2.0 * beta * J); };
  EdgeWeightMap w{kind, model.m(), model.n(), model.jh_grid(), model.jv_grid()};
  for (auto* g : {&w.horizontal, &w.vertical}) {
    for (auto& row : *g) {
      for (auto& x : row) x = f(x);
    }
  }
  return w;
}

EdgeWeightMap dualize(const EdgeWeightMap& w) {
  EdgeWeightMap d = w;
  d.kind = w.kind == WeightKind::HighTemp ? WeightKind::LowTemp : WeightKind::HighTemp;
  for (auto* g : {&d.horizontal, &d.vertical}) {
    for (auto& row : *g) {
      for (auto& x : row) {
        if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::WeightOutOfRange, "weight outside [0,1]");
        x = (1.0 - x) / (1.0 + x);
      }
    }
  }
  return d;
}

EdgeWeightMap dual_lattice_weights(const PeriodicIsingModel& model, double beta) {
  EdgeWeightMap low = weights(model, beta, WeightKind::LowTemp);
  EdgeWeightMap d = low;
  for (int i = 0; i < model.m(); ++i) {
    for (int j = 0; j < model.n(); ++j) {
      d.horizontal[i][j] = low.v(i + 1, j);
      d.vertical[i][j] = low.h(i, j + 1);
    }
  }
  return d;
}

PeriodicIsingModel replicate(const PeriodicIsingModel& model, int a, int b) {
  if (a < 1 || b < 1) throw Error(ErrorCode::InvalidArgument, "replication factors must be positive");
  const int m = a * model.m();
  const int n = b * model.n();
  Grid jh(m, std::vector<double>(n));
  Grid jv(m, std::vector<double>(n));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      jh[i][j] = model.jh(i, j);
      jv[i][j] = model.jv(i, j);
    }
  }
  return PeriodicIsingModel(m, n, std::move(jh), std::move(jv));
}

EdgeWeightMap uniform_weights(int m, int n, double w, WeightKind kind) {
  if (m < 1 || n < 1) throw Error(ErrorCode::DimensionMismatch, "periods must be positive");
  Grid g(m, std::vector<double>(n, w));
  return EdgeWeightMap{kind, m, n, g, g};
}

}  // namespace ispec

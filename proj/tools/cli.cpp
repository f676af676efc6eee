#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ispec/correlation.hpp"
#include "ispec/error.hpp"
#include "ispec/model.hpp"
#include "ispec/oracle.hpp"
#include "ispec/spectral.hpp"

namespace ispec::cli {
namespace {

std::string num(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string o = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    o += c;
  }
  return o + "\"";
}

// Ordered single-line JSON object.
class JsonObject {
 public:
  JsonObject& raw(const std::string& key, const std::string& value) {
    body_ += (body_.empty() ? "" : ",") + quoted(key) + ":" + value;
    return *this;
  }
  JsonObject& number(const std::string& key, double v) { return raw(key, num(v)); }
  JsonObject& integer(const std::string& key, long long v) { return raw(key, std::to_string(v)); }
  JsonObject& text(const std::string& key, const std::string& v) { return raw(key, quoted(v)); }
  JsonObject& boolean(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
  std::string str() const { return "{" + body_ + "}"; }

 private:
  std::string body_;
};

std::string array(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + num(v[k]);
  return s + "]";
}

struct Common {
  std::string model_path;
  std::string output;
  int threads = 0;
};

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

std::string corner_json(const CornerReport& c) {
  return array({c.pf[0][0], c.pf[0][1], c.pf[1][0], c.pf[1][1]});
}

// ---- critical-temp ----
struct CriticalArgs {
  double tol = 1e-12;
};

int cmd_critical(const Common& common, const CriticalArgs& a, std::ostream& out) {
  const auto model = load_model(common.model_path);
  const CriticalResult r = critical_beta(model, a.tol);
  Sink sink(common.output, out);
  sink.stream() << JsonObject()
                       .number("beta_c", r.beta_c)
                       .raw("corner", "[" + std::to_string(r.corners.corner_z()) + "," +
                                          std::to_string(r.corners.corner_w()) + "]")
                       .raw("pf", corner_json(r.corners))
                       .integer("iterations", r.iterations)
                       .str()
                << "\n";
  return kExitOk;
}

// ---- correlate ----
struct CorrelateArgs {
  double beta = 0.0;
  int n_max = 64;
  int grid = 256;
  int k_max = 64;
  int truncation = 64;
  std::string summary;
};

int cmd_correlate(const Common& common, const CorrelateArgs& a, std::ostream& out, std::ostream& err) {
  const auto model = load_model(common.model_path);
  const ToeplitzSymbol sym = build_symbol(model, a.beta, {a.grid, a.k_max, common.threads});
  const WidomResult widom = widom_limit(sym, a.truncation);
  Sink sink(common.output, out);
  sink.stream() << "N,corr_sq,corr\n";
  std::vector<SeriesPoint> series;
  for (int n = sym.l0; n <= a.n_max; n += sym.l0) {
    const CorrelationResult r = spin_corr_sq(sym, n);
    sink.stream() << n << "," << num(r.corr_sq) << "," << num(r.corr()) << "\n";
    series.push_back({n, r.corr_sq});
  }
  // Fit the approach to the Widom limit while it stays above round-off.
  std::optional<double> alpha;
  const double limit = std::max(widom.e, 0.0);
  std::vector<SeriesPoint> usable;
  for (const auto& p : series) {
    if (p.value - limit > 1e-12 * std::max(1.0, limit)) usable.push_back(p);
  }
  if (usable.size() >= 5) {
    try {
      alpha = decay_fit(usable, limit).alpha;
    } catch (const Error&) {
    }
  }
  const std::string summary = JsonObject()
                                  .number("G", widom.g)
                                  .number("E", widom.e)
                                  .raw("alpha", alpha ? num(*alpha) : "null")
                                  .str();
  if (a.summary.empty()) {
    err << summary << "\n";
  } else {
    std::ofstream f(a.summary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + a.summary);
    f << summary << "\n";
  }
  return kExitOk;
}

// ---- spectral-scan ----
struct ScanArgs {
  double beta = 0.0;
  int grid = 32;
  std::string kind = "high";
};

int cmd_scan(const Common& common, const ScanArgs& a, std::ostream& out, std::ostream& err) {
  const auto model = load_model(common.model_path);
  const WeightKind kind = a.kind == "low" ? WeightKind::LowTemp : WeightKind::HighTemp;
  const TorusScan scan = scan_torus(assemble(model, a.beta, kind), a.grid, common.threads);
  Sink sink(common.output, out);
  sink.stream() << "a,b,theta,phi,abs_p\n";
  const double step = 2.0 * 3.14159265358979323846 / a.grid;
  for (int i = 0; i < a.grid; ++i) {
    for (int j = 0; j < a.grid; ++j) {
      sink.stream() << i << "," << j << "," << num(step * i) << "," << num(step * j) << "," << num(scan.at(i, j))
                    << "\n";
    }
  }
  err << JsonObject()
             .number("min_abs", scan.min_abs)
             .raw("argmin", "[" + std::to_string(scan.argmin_a) + "," + std::to_string(scan.argmin_b) + "]")
             .boolean("at_corner", scan.at_corner)
             .str()
      << "\n";
  return kExitOk;
}

// ---- edge-corr ----
struct EdgeArgs {
  double beta = 0.0;
  int max_sep = 12;
  int grid = 128;
};

int cmd_edge(const Common& common, const EdgeArgs& a, std::ostream& out, std::ostream& err) {
  const auto model = load_model(common.model_path);
  const KasteleynOperator op = assemble(model, a.beta, WeightKind::HighTemp);
  const int e = op.graph.edge_id(0, 0, kVerticalSlot);
  const LatticeEdge base = lattice_edge(op.graph, e, 0, 0);
  const InverseKernel kernel(op, {base.u.local, base.v.local}, a.grid, common.threads);
  const LatticeEdge single[] = {base};
  const double p = edge_probability(kernel, single);
  Sink sink(common.output, out);
  sink.stream() << "d,p1,p2,joint,cov\n";
  std::vector<SeriesPoint> series;
  for (int d = 1; d <= a.max_sep; ++d) {
    const LatticeEdge pair[] = {base, lattice_edge(op.graph, e, 0, d)};
    const double joint = edge_probability(kernel, pair);
    const double cov = joint - p * p;
    sink.stream() << d << "," << num(p) << "," << num(p) << "," << num(joint) << "," << num(cov) << "\n";
    if (d >= 2) series.push_back({d, std::fabs(cov)});
  }
  std::optional<double> alpha;
  try {
    alpha = decay_fit(series).alpha;
  } catch (const Error&) {
  }
  err << JsonObject().number("p", p).raw("alpha", alpha ? num(*alpha) : "null").str() << "\n";
  return kExitOk;
}

// ---- lee-yang ----
struct LeeYangArgs {
  double beta = 0.0;
  int s = 1;
  int t = 1;
  std::string boundary = "torus";
};

int cmd_lee_yang(const Common& common, const LeeYangArgs& a, std::ostream& out) {
  const auto model = load_model(common.model_path);
  const LeeYangResult r =
      lee_yang_check(model, a.beta, a.s, a.t, a.boundary == "free" ? Boundary::Free : Boundary::Torus);
  std::string roots = "[";
  for (std::size_t k = 0; k < r.roots.size(); ++k) {
    roots += (k ? ",[" : "[") + num(r.roots[k].real()) + "," + num(r.roots[k].imag()) + "]";
  }
  roots += "]";
  Sink sink(common.output, out);
  sink.stream() << JsonObject().number("max_deviation", r.max_deviation).raw("roots", roots).str() << "\n";
  return kExitOk;
}

// ---- validate ----
struct ValidateArgs {
  int max_sites = 16;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

std::vector<Check> validation_checks(const PeriodicIsingModel& model, const ValidateArgs& a, int threads) {
  std::vector<Check> checks;
  auto guarded = [&](const std::string& name, const std::function<Check()>& body) {
    try {
      Check c = body();
      c.name = name;
      checks.push_back(c);
    } catch (const Error& e) {
      checks.push_back({name, false, e.what()});
    }
  };

  const CriticalResult crit = critical_beta(model, 1e-13);
  const double bc = crit.beta_c;
  const std::vector<double> betas = {0.5 * bc, bc, 1.5 * bc};

  guarded("critical-node-at-(1,1)", [&] {
    return Check{"", std::fabs(crit.corners.pf[0][0]) < 1e-6 && crit.corners.pf[0][1] > 0 &&
                         crit.corners.pf[1][0] > 0 && crit.corners.pf[1][1] > 0,
                 "beta_c=" + num(bc) + " |pf00|=" + sci(std::fabs(crit.corners.pf[0][0]))};
  });

  guarded("replication-invariance", [&] {
    const double b2 = critical_beta(replicate(model, 2, 2), 1e-13).beta_c;
    return Check{"", std::fabs(b2 - bc) < 1e-8, "diff=" + sci(std::fabs(b2 - bc))};
  });

  guarded("unique-crossing", [&] {
    const PeriodicIsingModel even = even_replication(model);
    int changes = 0;
    double prev = 1.0;
    for (int k = 0; k < 256; ++k) {
      const double b = 1e-3 * std::pow(1e4, k / 255.0);
      const double g = crossing_function(even, b);
      if ((g > 0) != (prev > 0)) ++changes;
      prev = g;
    }
    return Check{"", changes == 1, "sign changes=" + std::to_string(changes)};
  });

  if (model.sites() <= 6 && model.sites() <= a.max_sites) {
    guarded("pfaffian-vs-dimer-enumeration", [&] {
      double worst = 0.0;
      for (double b : betas) {
        const FisherGraph g = build_fisher(model, weights(model, b, WeightKind::HighTemp));
        worst = std::max(worst, rel(dimer_partition(assemble(g)), enumerate_dimer(g).z));
      }
      return Check{"", worst < 1e-10, "max rel err=" + sci(worst)};
    });
  }

  guarded("high-temperature-identity", [&] {
    double worst = 0.0;
    int tori = 0;
    for (int s = 1; s <= 2; ++s) {
      for (int t = 1; t <= 2; ++t) {
        if (s * t * model.sites() > a.max_sites) continue;
        for (double b : betas) {
          const FisherGraph g = build_fisher(model, weights(model, b, WeightKind::HighTemp), s, t);
          double log_rhs = std::log(dimer_partition(assemble(g))) + g.site_count() * std::log(2.0);
          for (int y = 0; y < g.height(); ++y) {
            for (int x = 0; x < g.width(); ++x) {
              log_rhs += std::log(std::cosh(b * model.jh(x, y))) + std::log(std::cosh(b * model.jv(x, y)));
            }
          }
          const SpinEnumeration en = enumerate_spin(model, b, s, t);
          worst = std::max(worst, std::fabs(std::expm1(log_rhs - en.log_z)));
        }
        ++tori;
      }
    }
    return Check{"", tori > 0 && worst < 1e-10, std::to_string(tori) + " tori, max rel err=" + sci(worst)};
  });

  guarded("duality-corner-zeros", [&] {
    const DualityReport at_c = duality_check(model, bc, 1e-12);
    const DualityReport below = duality_check(model, 0.5 * bc, 1e-12);
    bool any_below = false;
    bool any_at = false;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        any_below = any_below || below.vanishes[i][j];
        any_at = any_at || at_c.vanishes[i][j];
      }
    }
    return Check{"", any_at && !any_below, "zero sets agree at beta_c and 0.5 beta_c"};
  });

  if (model.sites() <= a.max_sites && model.sites() <= 16) {
    guarded("lee-yang-circle", [&] {
      double worst = 0.0;
      for (double b : betas) worst = std::max(worst, lee_yang_check(model, b, 1, 1).max_deviation);
      return Check{"", worst < 1e-8, "max deviation=" + sci(worst)};
    });
  }

  guarded("transfer-vs-enumeration", [&] {
    int s = 1;
    int t = model.sites() <= a.max_sites / 2 ? 2 : 1;
    if (s * t * model.sites() > a.max_sites) return Check{"", true, "skipped: lattice too large"};
    double worst = 0.0;
    for (double b : betas) {
      const SpinEnumeration en = enumerate_spin(model, b, s, t);
      for (int i = 0; i <= t; ++i) {
        const double tm = transfer_torus_corr(model, b, s, t, i);
        const int site = (i * model.n() % en.height) * en.width;
        worst = std::max(worst, std::fabs(tm - en.corr(0, site)));
      }
    }
    return Check{"", worst < 1e-10, "max diff=" + sci(worst)};
  });

  guarded("dimer-measure-preservation", [&] {
    if (model.sites() > a.max_sites) return Check{"", true, "skipped: lattice too large"};
    const double b = bc;
    const FisherGraph g = build_fisher(model, dual_lattice_weights(model, b));
    double worst = 0.0;
    const int N = g.site_count();
    for (std::uint32_t c = 0; c < (1u << N); ++c) {
      std::vector<int> spins(static_cast<std::size_t>(N));
      for (int k = 0; k < N; ++k) spins[k] = (c >> k & 1u) ? -1 : 1;
      double w = 1.0;
      for (int e : polygon_to_dimer(g, spins)) w *= g.edges[e].weight;
      double energy = 0.0;
      for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
          const int here = spins[g.site_id(x, y)];
          energy += model.jh(x, y) * (here * spins[g.site_id(x + 1, y)] - 1);
          energy += model.jv(x, y) * (here * spins[g.site_id(x, y + 1)] - 1);
        }
      }
      worst = std::max(worst, rel(w, std::exp(b * energy)));
    }
    return Check{"", worst < 1e-12, "max rel err=" + sci(worst)};
  });

  guarded("symbol-determinant-identity", [&] {
    const ToeplitzSymbol sym = build_symbol(model, 0.8 * bc, {256, 64, threads});
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
      const Complex zeta = std::polar(1.0, 2.0 * 3.14159265358979323846 * (k + 0.5) / 16.0);
      worst = std::max(worst, std::abs(sym.prefactor * det(sym.eval(zeta)) - 1.0));
    }
    return Check{"", worst < 1e-6, "max deviation=" + sci(worst)};
  });

  return checks;
}

int cmd_validate(const Common& common, const ValidateArgs& a, std::ostream& out) {
  const auto model = load_model(common.model_path);
  const auto checks = validation_checks(model, a, common.threads);
  Sink sink(common.output, out);
  bool ok = true;
  for (const auto& c : checks) {
    sink.stream() << (c.pass ? "PASS " : "FAIL ") << c.name << " " << c.detail << "\n";
    ok = ok && c.pass;
  }
  return ok ? kExitOk : kExitValidation;
}

void error_line(std::ostream& err, const Error& e) {
  err << JsonObject()
             .text("error", std::string(error_name(e.code())))
             .integer("code", static_cast<int>(e.code()))
             .text("message", e.what())
             .str()
      << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact critical temperatures and correlations of periodic 2D Ising models", "ispec"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Common common;
  app.add_option("--threads", common.threads, "Worker threads (0: ISPEC_THREADS or 1)");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("model", common.model_path, "Model JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", common.output, "Write results to this file instead of stdout");
  };

  CriticalArgs crit;
  auto* c_crit = app.add_subcommand("critical-temp", "Critical inverse temperature (JSON)");
  add_common(c_crit);
  c_crit->add_option("--tol", crit.tol, "Bisection tolerance on beta (>= 1e-13)");

  CorrelateArgs corr;
  auto* c_corr = app.add_subcommand("correlate", "Axis spin correlations N,corr_sq,corr (CSV)");
  add_common(c_corr);
  c_corr->add_option("--beta", corr.beta, "Inverse temperature")->required();
  c_corr->add_option("--n-max", corr.n_max, "Largest separation N");
  c_corr->add_option("--grid", corr.grid, "Circle samples for the Fourier integrals");
  c_corr->add_option("--kmax", corr.k_max, "Symbol bandwidth");
  c_corr->add_option("--truncation", corr.truncation, "Hankel truncation for the Widom constant");
  c_corr->add_option("--summary", corr.summary, "JSON summary file (default: stderr)");

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("spectral-scan", "|P| on a grid of the unit torus (CSV)");
  add_common(c_scan);
  c_scan->add_option("--beta", scan.beta, "Inverse temperature")->required();
  c_scan->add_option("--grid", scan.grid, "Grid points per circle")->check(CLI::Range(4, 4096));
  c_scan->add_option("--kind", scan.kind, "Weight system")->check(CLI::IsMember({"high", "low"}));

  EdgeArgs edge;
  auto* c_edge = app.add_subcommand("edge-corr", "Dimer edge covariance along the vertical axis (CSV)");
  add_common(c_edge);
  c_edge->add_option("--beta", edge.beta, "Inverse temperature")->required();
  c_edge->add_option("--max-sep", edge.max_sep, "Largest separation in fundamental domains");
  c_edge->add_option("--grid", edge.grid, "Samples per circle for the inverse kernel");

  ValidateArgs val;
  auto* c_val = app.add_subcommand("validate", "Run the oracle cross-checks");
  add_common(c_val);
  c_val->add_option("--max-sites", val.max_sites, "Largest lattice handed to exhaustive oracles")
      ->check(CLI::Range(1, 20));

  LeeYangArgs ly;
  auto* c_ly = app.add_subcommand("lee-yang", "Zeros of the field polynomial (JSON)");
  add_common(c_ly);
  c_ly->add_option("--beta", ly.beta, "Inverse temperature")->required();
  c_ly->add_option("--s", ly.s, "Domains horizontally");
  c_ly->add_option("--t", ly.t, "Domains vertically");
  c_ly->add_option("--boundary", ly.boundary, "Boundary condition")->check(CLI::IsMember({"torus", "free"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    if (!app.get_subcommands().empty()) {
      err << app.get_subcommands().front()->help();
    } else {
      err << app.help();
    }
    return kExitUsage;
  }

  try {
    if (c_crit->parsed()) return cmd_critical(common, crit, out);
    if (c_corr->parsed()) return cmd_correlate(common, corr, out, err);
    if (c_scan->parsed()) return cmd_scan(common, scan, out, err);
    if (c_edge->parsed()) return cmd_edge(common, edge, out, err);
    if (c_val->parsed()) return cmd_validate(common, val, out);
    if (c_ly->parsed()) return cmd_lee_yang(common, ly, out);
  } catch (const Error& e) {
    error_line(err, e);
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace ispec::cli

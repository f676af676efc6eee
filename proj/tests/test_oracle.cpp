#include <gtest/gtest.h>

#include <cmath>

#include "ispec/error.hpp"
#include "ispec/fisher_graph.hpp"
#include "ispec/model.hpp"
#include "ispec/oracle.hpp"
#include "ispec/spectral.hpp"
#include "oracles.hpp"

using namespace ispec;

namespace {

const PeriodicIsingModel kHom(1, 1, {{1.0}}, {{1.0}});
const PeriodicIsingModel kOneByTwo(1, 2, {{0.9, 1.7}}, {{0.6, 1.3}});

}  // namespace

TEST(EnumerateSpin, SingleSiteSelfCorrelation) {
  const auto e = enumerate_spin(kHom, 0.7, 1, 1);
  EXPECT_DOUBLE_EQ(e.corr(0, 0), 1.0);
}

TEST(EnumerateSpin, InfiniteTemperature) {
  const auto e = enumerate_spin(kOneByTwo, 0.0, 2, 2);
  EXPECT_NEAR(std::exp(e.log_z), 256.0, 1e-9);
  const int n = e.width * e.height;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) EXPECT_NEAR(e.corr(a, b), a == b ? 1.0 : 0.0, 1e-15);
  }
}

TEST(EnumerateSpin, FreeTwoByTwoHighTemperatureExpansion) {
  // 2^4 cosh^4(beta) (1 + tanh^4(beta)): one plaquette is the only polygon.
  constexpr double kFrozen = 19.242622269297499;
  const double beta = 0.3;
  const double th = oracle::tanh_series(beta);
  const double ch = 0.5 * (oracle::exp_series(beta) + oracle::exp_series(-beta));
  EXPECT_LT(std::fabs(16 * std::pow(ch, 4) * (1 + std::pow(th, 4)) - kFrozen) / kFrozen, 1e-14);
  const auto e = enumerate_spin(kHom, beta, 2, 2, Boundary::Free);
  EXPECT_LT(std::fabs(std::exp(e.log_z) - kFrozen) / kFrozen, 1e-12);
}

TEST(EnumerateSpin, TorusMatchesDirectSum) {
  for (double beta : {0.1, 0.4, 0.9}) {
    const auto e = enumerate_spin(kOneByTwo, beta, 2, 2);
    const double want = oracle::ising_torus_z(
        2, 4, [](int x, int y) { return kOneByTwo.jh(x, y); }, [](int x, int y) { return kOneByTwo.jv(x, y); }, beta);
    EXPECT_LT(std::fabs(std::exp(e.log_z) - want) / want, 1e-12);
  }
}

TEST(EnumerateSpin, FieldBreaksSymmetry) {
  const auto e0 = enumerate_spin(kHom, 0.4, 3, 3);
  const auto eh = enumerate_spin(kHom, 0.4, 3, 3, Boundary::Torus, 0.1);
  EXPECT_NEAR(e0.magnetisation, 0.0, 1e-14);
  EXPECT_GT(eh.magnetisation, 0.0);
}

TEST(EnumerateSpin, CorrelationsMonotoneInBeta) {
  double prev = 0.0;
  for (double beta : {0.1, 0.3, 0.5, 0.8}) {
    const auto e = enumerate_spin(kOneByTwo, beta, 2, 2);
    const double c = e.corr(0, e.width * e.height - 1);
    EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(EnumerateSpin, TooLarge) {
  try {
    enumerate_spin(kHom, 0.3, 5, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(LeeYang, SingleSite) {
  const auto r = lee_yang_check(kHom, 0.5, 1, 1);
  ASSERT_EQ(r.roots.size(), 1u);
  EXPECT_NEAR(std::abs(r.roots[0] + 1.0), 0.0, 1e-14);
}

TEST(LeeYang, TwoByTwoTorus) { EXPECT_LT(lee_yang_check(kHom, 0.4, 2, 2).max_deviation, 1e-8); }

TEST(LeeYang, ThreeByThreeFreeMixed) {
  const PeriodicIsingModel m(3, 3, {{0.5, 1.2, 0.8}, {2.0, 0.3, 1.1}, {0.9, 1.4, 0.6}},
                             {{1.3, 0.7, 0.4}, {0.6, 1.8, 1.0}, {0.2, 0.9, 1.5}});
  EXPECT_LT(lee_yang_check(m, 0.45, 1, 1, Boundary::Free).max_deviation, 1e-8);
}

TEST(LeeYang, TooLarge) { EXPECT_THROW(lee_yang_check(kHom, 0.4, 3, 6), Error); }

TEST(EnumerateDimer, SectorsSumToTotal) {
  const auto g = build_fisher(kOneByTwo, weights(kOneByTwo, 0.5, WeightKind::HighTemp), 2, 1);
  const auto d = enumerate_dimer(g);
  EXPECT_NEAR(d.sectors[0][0] + d.sectors[0][1] + d.sectors[1][0] + d.sectors[1][1], d.z, 1e-14 * d.z);
}

TEST(EnumerateDimer, MatchingCountIsTwiceSpinCount) {
  const auto g = build_fisher(kHom, uniform_weights(1, 1, 0.5), 2, 2);
  const auto d = enumerate_dimer(g);
  // Even subgraphs of the 2x2 torus with doubled bonds: 2^{E - V + 1} = 2^{8 - 4 + 1}.
  EXPECT_EQ(d.matchings, 32);
}

TEST(EnumerateDimer, GadgetCompletionCount) {
  // Single-site torus: only the 4 even terminal patterns compatible with the wrap-around edges.
  const auto g = build_fisher(kHom, uniform_weights(1, 1, 0.5), 1, 1);
  const auto d = enumerate_dimer(g);
  EXPECT_EQ(d.matchings, 4);
  EXPECT_NEAR(d.z, 1.0 + 0.5 + 0.5 + 0.25, 1e-15);
}

TEST(EnumerateDimer, SingleSiteFourPfaffians) {
  for (double beta : {0.2, 0.7}) {
    const auto op = assemble(kHom, beta, WeightKind::HighTemp);
    const auto d = enumerate_dimer(op.graph);
    double four = 0.0;
    int negative = 0;
    for (int th = 0; th < 2; ++th) {
      for (int ta = 0; ta < 2; ++ta) {
        EXPECT_DOUBLE_EQ(std::fabs(op.combination[th][ta]), 0.5);
        negative += op.combination[th][ta] < 0;
        four += op.combination[th][ta] * pfaffian(corner_matrix(op, th, ta)).value;
      }
    }
    EXPECT_EQ(negative % 2, 1);
    EXPECT_LT(std::fabs(std::fabs(four) - d.z) / d.z, 1e-12);
  }
}

TEST(EnumerateDimer, EdgeProbabilitiesNormalised) {
  const auto g = build_fisher(kOneByTwo, weights(kOneByTwo, 0.5, WeightKind::HighTemp), 1, 1);
  const auto d = enumerate_dimer(g);
  std::vector<double> cover(g.vertices.size(), 0.0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    cover[g.edges[e].u] += d.edge_probability[e];
    cover[g.edges[e].v] += d.edge_probability[e];
  }
  for (double c : cover) EXPECT_NEAR(c, 1.0, 1e-14);
}

TEST(EnumerateDimer, TooLarge) {
  const auto g = build_fisher(kHom, uniform_weights(1, 1, 0.5), 7, 1);
  EXPECT_THROW(enumerate_dimer(g), Error);
}

TEST(TransferMatrix, PositiveAndSymmetric) {
  const auto tm = transfer_matrix(kHom, 0.4, 3);
  EXPECT_EQ(tm.width, 3);
  EXPECT_EQ(tm.q.rows(), 8);
  EXPECT_GT(tm.q.minCoeff(), 0.0);
  EXPECT_LT((tm.q - tm.q.transpose()).cwiseAbs().maxCoeff(), 1e-14 * tm.q.cwiseAbs().maxCoeff());
}

TEST(TransferCorr, SameSiteIsOne) { EXPECT_NEAR(transfer_corr(kHom, 0.6, 4, 0), 1.0, 1e-14); }

TEST(TransferCorr, VanishesAtHighTemperature) { EXPECT_LT(transfer_corr(kHom, 1e-6, 4, 3), 1e-12); }

TEST(TransferCorr, TorusAgreesWithEnumeration) {
  for (double beta : {0.2, 0.5}) {
    const auto e = enumerate_spin(kOneByTwo, beta, 3, 2);
    for (int i = 1; i <= 2; ++i) {
      for (int dx = 0; dx <= 1; ++dx) {
        const double want = e.corr(0, (i * 2 % e.height) * e.width + dx);
        EXPECT_NEAR(transfer_torus_corr(kOneByTwo, beta, 3, 2, i, dx), want, 1e-10) << i << "," << dx;
      }
    }
  }
}

TEST(TransferCorr, CylinderIsLongTorusLimit) {
  const double beta = 0.3;
  const double cyl = transfer_corr(kHom, beta, 6, 4);
  EXPECT_NEAR(transfer_torus_corr(kHom, beta, 6, 60, 4), cyl, 1e-10);
}

TEST(TransferCorr, CauchySchwarzDomination) {
  for (int t : {2, 3, 4}) {
    for (int i : {2, 4}) {
      const double axis = transfer_corr(kHom, 0.5, t, i);
      for (int dx = 1; dx < t; ++dx) EXPECT_LE(transfer_corr(kHom, 0.5, t, i, TransferMode::Cylinder, dx), axis + 1e-12);
    }
  }
}

TEST(TransferCorr, MonotoneInBeta) {
  double prev = 0.0;
  for (double beta : {0.2, 0.35, 0.5, 0.7}) {
    const double c = transfer_corr(kOneByTwo, beta, 4, 2);
    EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(TransferCorr, WidthLimit) { EXPECT_THROW(transfer_corr(kHom, 0.4, 17, 1), Error); }

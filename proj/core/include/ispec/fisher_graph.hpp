#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ispec/model.hpp"

namespace ispec {

// Each Ising site becomes two triangles (R,U,A) and (L,D,B) joined by A-B.
// R and U are the terminals toward the right and upper neighbours.
enum class GadgetRole : std::uint8_t { R = 0, U = 1, A = 2, L = 3, D = 4, B = 5 };

inline constexpr int kRolesPerSite = 6;
inline constexpr int kEdgesPerSite = 9;
// Slots 0..6 are gadget edges, 7 is R -> L(right), 8 is U -> D(up).
inline constexpr int kHorizontalSlot = 7;
inline constexpr int kVerticalSlot = 8;

struct EdgeEnds {
  GadgetRole u;
  GadgetRole v;
};
inline constexpr std::array<EdgeEnds, 7> kGadgetEdges{{
    {GadgetRole::R, GadgetRole::U},
    {GadgetRole::U, GadgetRole::A},
    {GadgetRole::A, GadgetRole::R},
    {GadgetRole::L, GadgetRole::D},
    {GadgetRole::D, GadgetRole::B},
    {GadgetRole::B, GadgetRole::L},
    {GadgetRole::A, GadgetRole::B},
}};

struct FisherVertex {
  int fx = 0;
  int fy = 0;
  int i = 0;
  int j = 0;
  GadgetRole role = GadgetRole::R;
};

enum class EdgeKind : std::uint8_t { Internal, Horizontal, Vertical };

struct FisherEdge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
  int sign = 1;  // +1: oriented u -> v
  bool crosses_x = false;
  bool crosses_y = false;
  EdgeKind kind = EdgeKind::Internal;
};

// A face as a closed walk: step k traverses edges[k] forwards (dirs[k] = +1,
// from u to v) or backwards. Walks are clockwise in the fixed embedding.
struct FaceWalk {
  std::vector<int> edges;
  std::vector<int> dirs;
};

// Fisher graph on an s x t torus of fundamental domains. Global site (x,y)
// has x in [0, s*m), y in [0, t*n); crosses_x edges are cut by the horizontal
// dual cycle between rows height-1 and 0, crosses_y edges by the vertical one
// between columns width-1 and 0.
struct FisherGraph {
  int m = 0;
  int n = 0;
  int s = 1;
  int t = 1;
  std::vector<FisherVertex> vertices;
  std::vector<FisherEdge> edges;
  std::vector<FaceWalk> faces;

  int width() const noexcept { return s * m; }
  int height() const noexcept { return t * n; }
  int site_count() const noexcept { return width() * height(); }
  int site_id(int x, int y) const noexcept;
  int vertex_id(int x, int y, GadgetRole role) const noexcept;
  int edge_id(int x, int y, int slot) const noexcept;
};

// Builds the graph with weights from w (which must have the model's period)
// and applies orient_crossing.
FisherGraph build_fisher(const PeriodicIsingModel& model, const EdgeWeightMap& w, int s = 1, int t = 1);

// Assigns a translation-invariant orientation: every face clockwise-odd, and
// an even number of forward edges along the per-site row path L-B-A-R-L' and
// column path D-B-A-U-D'.
FisherGraph orient_crossing(FisherGraph graph);

// Number of edges of a face walk oriented along the walk.
int clockwise_count(const FisherGraph& graph, const FaceWalk& face);

// Completes a set of occupied external edges (indexed by edge id) to a perfect
// matching; returns the matched edge ids in increasing order.
std::vector<int> complete_matching(const FisherGraph& graph, const std::vector<char>& external);

// Domain walls of a spin configuration (indexed by site_id) read as a polygon
// on the dual lattice, completed to a matching of this graph. The graph plays
// the role of the dual lattice's Fisher graph.
std::vector<int> polygon_to_dimer(const FisherGraph& graph, std::span<const int> spins);

// Internal completions of one gadget for a terminal pattern, as slot lists.
// Bits of the pattern: R=1, U=2, L=4, D=8.
std::vector<std::vector<int>> gadget_completions(unsigned terminal_pattern);

// u_id,v_id,weight,sign,crossesX,crossesY per line.
std::string to_csv(const FisherGraph& graph);

}  // namespace ispec

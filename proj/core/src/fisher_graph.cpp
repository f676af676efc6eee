#include "ispec/fisher_graph.hpp"

#include <algorithm>
#include <cstdio>

#include "ispec/error.hpp"

namespace ispec {
namespace {

int wrap(int k, int period) noexcept {
  int r = k % period;
  return r < 0 ? r + period : r;
}

struct Step {
  int dx;
  int dy;
  int slot;
  int dir;
};

// Counter-clockwise walk around the plaquette north-east of site (0,0).
constexpr std::array<Step, 12> kPlaquette{{
    {0, 0, 0, -1},
    {0, 0, kHorizontalSlot, +1},
    {1, 0, 5, -1},
    {1, 0, 6, -1},
    {1, 0, 1, -1},
    {1, 0, kVerticalSlot, +1},
    {1, 1, 3, -1},
    {0, 1, kHorizontalSlot, -1},
    {0, 1, 2, -1},
    {0, 1, 6, +1},
    {0, 1, 4, -1},
    {0, 0, kVerticalSlot, -1},
}};

// Clockwise triangles R -> A -> U and L -> B -> D.
constexpr std::array<Step, 3> kUpperTriangle{{{0, 0, 2, -1}, {0, 0, 1, -1}, {0, 0, 0, -1}}};
constexpr std::array<Step, 3> kLowerTriangle{{{0, 0, 5, -1}, {0, 0, 4, -1}, {0, 0, 3, -1}}};

// Unit-cell paths whose forward-edge count is fixed even.
constexpr std::array<Step, 4> kRowPath{{{0, 0, 5, -1}, {0, 0, 6, -1}, {0, 0, 2, +1}, {0, 0, kHorizontalSlot, +1}}};
constexpr std::array<Step, 4> kColumnPath{{{0, 0, 4, +1}, {0, 0, 6, -1}, {0, 0, 1, -1}, {0, 0, kVerticalSlot, +1}}};

template <std::size_t K>
FaceWalk make_walk(const FisherGraph& g, int x, int y, const std::array<Step, K>& steps, bool reverse) {
  FaceWalk f;
  for (std::size_t k = 0; k < K; ++k) {
    const Step& st = reverse ? steps[K - 1 - k] : steps[k];
    f.edges.push_back(g.edge_id(x + st.dx, y + st.dy, st.slot));
    f.dirs.push_back(reverse ? -st.dir : st.dir);
  }
  return f;
}

// One GF(2) row over the 9 slots plus right-hand side.
struct Row {
  unsigned mask = 0;
  int rhs = 0;
};

template <std::size_t K>
Row parity_row(const std::array<Step, K>& steps, int want) {
  Row r;
  int backwards = 0;
  for (const Step& st : steps) {
    r.mask ^= 1u << st.slot;
    if (st.dir < 0) backwards ^= 1;
  }
  r.rhs = want ^ backwards;
  return r;
}

std::array<int, kEdgesPerSite> solve_orientation() {
  std::vector<Row> rows;
  // Reversing an even-length walk keeps its parity, so the ccw plaquette works.
  rows.push_back(parity_row(kPlaquette, 1));
  rows.push_back(parity_row(kUpperTriangle, 1));
  rows.push_back(parity_row(kLowerTriangle, 1));
  rows.push_back(parity_row(kRowPath, 0));
  rows.push_back(parity_row(kColumnPath, 0));

  std::vector<int> pivots;
  std::size_t rank = 0;
  for (int col = 0; col < kEdgesPerSite; ++col) {
    std::size_t p = rank;
    while (p < rows.size() && !(rows[p].mask >> col & 1u)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[rank], rows[p]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && (rows[r].mask >> col & 1u)) {
        rows[r].mask ^= rows[rank].mask;
        rows[r].rhs ^= rows[rank].rhs;
      }
    }
    pivots.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r) {
    if (rows[r].rhs) throw Error(ErrorCode::NonOrientable, "face parity system is inconsistent");
  }
  std::array<int, kEdgesPerSite> forward{};
  for (std::size_t r = 0; r < rank; ++r) forward[pivots[r]] = rows[r].rhs;
  return forward;
}

struct CompletionTable {
  std::array<std::vector<std::vector<int>>, 16> by_pattern;
  CompletionTable() {
    for (unsigned pattern = 0; pattern < 16; ++pattern) {
      unsigned covered = 0;
      if (pattern & 1u) covered |= 1u << static_cast<int>(GadgetRole::R);
      if (pattern & 2u) covered |= 1u << static_cast<int>(GadgetRole::U);
      if (pattern & 4u) covered |= 1u << static_cast<int>(GadgetRole::L);
      if (pattern & 8u) covered |= 1u << static_cast<int>(GadgetRole::D);
      for (unsigned subset = 0; subset < (1u << kGadgetEdges.size()); ++subset) {
        unsigned c = covered;
        bool ok = true;
        std::vector<int> slots;
        for (std::size_t e = 0; e < kGadgetEdges.size() && ok; ++e) {
          if (!(subset >> e & 1u)) continue;
          unsigned bits = 1u << static_cast<int>(kGadgetEdges[e].u) | 1u << static_cast<int>(kGadgetEdges[e].v);
          if (c & bits) ok = false;
          c |= bits;
          slots.push_back(static_cast<int>(e));
        }
        if (ok && c == 0x3Fu) by_pattern[pattern].push_back(std::move(slots));
      }
    }
  }
};

const CompletionTable& completion_table() {
  static const CompletionTable table;
  return table;
}

}  // namespace

int FisherGraph::site_id(int x, int y) const noexcept { return wrap(y, height()) * width() + wrap(x, width()); }

int FisherGraph::vertex_id(int x, int y, GadgetRole role) const noexcept {
  return kRolesPerSite * site_id(x, y) + static_cast<int>(role);
}

int FisherGraph::edge_id(int x, int y, int slot) const noexcept { return kEdgesPerSite * site_id(x, y) + slot; }

FisherGraph build_fisher(const PeriodicIsingModel& model, const EdgeWeightMap& w, int s, int t) {
  if (s < 1 || t < 1) throw Error(ErrorCode::InvalidArgument, "torus size must be positive");
  if (w.m != model.m() || w.n != model.n()) throw Error(ErrorCode::DimensionMismatch, "weights do not match model period");
  FisherGraph g;
  g.m = model.m();
  g.n = model.n();
  g.s = s;
  g.t = t;
  const int W = g.width();
  const int H = g.height();
  g.vertices.resize(static_cast<std::size_t>(kRolesPerSite) * W * H);
  g.edges.resize(static_cast<std::size_t>(kEdgesPerSite) * W * H);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      for (int r = 0; r < kRolesPerSite; ++r) {
        g.vertices[g.vertex_id(x, y, static_cast<GadgetRole>(r))] =
            FisherVertex{x / g.m, y / g.n, x % g.m, y % g.n, static_cast<GadgetRole>(r)};
      }
      for (std::size_t e = 0; e < kGadgetEdges.size(); ++e) {
        g.edges[g.edge_id(x, y, static_cast<int>(e))] =
            FisherEdge{g.vertex_id(x, y, kGadgetEdges[e].u), g.vertex_id(x, y, kGadgetEdges[e].v), 1.0, 1, false, false,
                       EdgeKind::Internal};
      }
      g.edges[g.edge_id(x, y, kHorizontalSlot)] =
          FisherEdge{g.vertex_id(x, y, GadgetRole::R), g.vertex_id(x + 1, y, GadgetRole::L), w.h(x, y), 1, false,
                     x == W - 1, EdgeKind::Horizontal};
      g.edges[g.edge_id(x, y, kVerticalSlot)] =
          FisherEdge{g.vertex_id(x, y, GadgetRole::U), g.vertex_id(x, y + 1, GadgetRole::D), w.v(x, y), 1, y == H - 1,
                     false, EdgeKind::Vertical};
    }
  }
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      g.faces.push_back(make_walk(g, x, y, kUpperTriangle, false));
      g.faces.push_back(make_walk(g, x, y, kLowerTriangle, false));
      g.faces.push_back(make_walk(g, x, y, kPlaquette, true));
    }
  }
  return orient_crossing(std::move(g));
}

FisherGraph orient_crossing(FisherGraph graph) {
  static const std::array<int, kEdgesPerSite> forward = solve_orientation();
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    graph.edges[e].sign = forward[e % kEdgesPerSite] ? 1 : -1;
  }
  for (const FaceWalk& f : graph.faces) {
    if (clockwise_count(graph, f) % 2 == 0) {
      throw Error(ErrorCode::NonOrientable, "a face is not clockwise-odd");
    }
  }
  return graph;
}

int clockwise_count(const FisherGraph& graph, const FaceWalk& face) {
  int count = 0;
  for (std::size_t k = 0; k < face.edges.size(); ++k) {
    if (graph.edges[face.edges[k]].sign == face.dirs[k]) ++count;
  }
  return count;
}

std::vector<std::vector<int>> gadget_completions(unsigned terminal_pattern) {
  return completion_table().by_pattern.at(terminal_pattern & 15u);
}

std::vector<int> complete_matching(const FisherGraph& graph, const std::vector<char>& external) {
  if (external.size() != graph.edges.size()) throw Error(ErrorCode::InvalidArgument, "external mask has wrong size");
  const auto& table = completion_table();
  std::vector<int> matched;
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    if (external[e] && graph.edges[e].kind != EdgeKind::Internal) matched.push_back(static_cast<int>(e));
  }
  for (int y = 0; y < graph.height(); ++y) {
    for (int x = 0; x < graph.width(); ++x) {
      unsigned pattern = 0;
      if (external[graph.edge_id(x, y, kHorizontalSlot)]) pattern |= 1u;
      if (external[graph.edge_id(x, y, kVerticalSlot)]) pattern |= 2u;
      if (external[graph.edge_id(x - 1, y, kHorizontalSlot)]) pattern |= 4u;
      if (external[graph.edge_id(x, y - 1, kVerticalSlot)]) pattern |= 8u;
      const auto& options = table.by_pattern[pattern];
      if (options.size() != 1) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "site (%d,%d) has %zu completions", x, y, options.size());
        throw Error(ErrorCode::BijectionFailure, buf);
      }
      for (int slot : options.front()) matched.push_back(graph.edge_id(x, y, slot));
    }
  }
  std::sort(matched.begin(), matched.end());
  return matched;
}

std::vector<int> polygon_to_dimer(const FisherGraph& graph, std::span<const int> spins) {
  if (static_cast<int>(spins.size()) != graph.site_count()) {
    throw Error(ErrorCode::DimensionMismatch, "one spin per site expected");
  }
  for (int sp : spins) {
    if (sp != 1 && sp != -1) throw Error(ErrorCode::InvalidArgument, "spins must be +1 or -1");
  }
  std::vector<char> external(graph.edges.size(), 0);
  for (int y = 0; y < graph.height(); ++y) {
    for (int x = 0; x < graph.width(); ++x) {
      const int here = spins[graph.site_id(x, y)];
      // A wall across the horizontal bond is the vertical dual edge below (x,y).
      if (here != spins[graph.site_id(x + 1, y)]) external[graph.edge_id(x, y - 1, kVerticalSlot)] ^= 1;
      if (here != spins[graph.site_id(x, y + 1)]) external[graph.edge_id(x - 1, y, kHorizontalSlot)] ^= 1;
    }
  }
  return complete_matching(graph, external);
}

std::string to_csv(const FisherGraph& graph) {
  std::string out;
  char buf[128];
  for (const FisherEdge& e : graph.edges) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%d,%d,%d\n", e.u, e.v, e.weight, e.sign, e.crosses_x ? 1 : 0,
                  e.crosses_y ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace ispec

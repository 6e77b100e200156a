#include "dehnfill/triangulation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace dehnfill {

namespace {

// union-find
struct UF {
  std::vector<int> parent;
  explicit UF(int n) : parent(static_cast<size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

bool IdealTriangulation::is_flat(int t) const {
  return std::binary_search(flat_labels_.begin(), flat_labels_.end(), t);
}

int IdealTriangulation::vertex_class(int t, int v, int w) const {
  return vertex_class_[static_cast<size_t>(16 * t + 4 * v + w)];
}

std::tuple<int, int, int> IdealTriangulation::side_adjacent(int t, int v, int f) const {
  const TetGluing& tg = tets_[static_cast<size_t>(t)];
  const Perm4& g = tg.gluings[static_cast<size_t>(f)];
  return {tg.neighbors[static_cast<size_t>(f)], g[v], g[f]};
}

IdealTriangulation IdealTriangulation::build(std::string name, std::vector<TetGluing> tets,
                                             std::vector<int> flat_labels,
                                             std::vector<CuspCurve> explicit_curves,
                                             bool full_validation) {
  IdealTriangulation T;
  T.name_ = std::move(name);
  T.tets_ = std::move(tets);
  T.flat_labels_ = std::move(flat_labels);
  std::sort(T.flat_labels_.begin(), T.flat_labels_.end());
  T.explicit_curves_ = std::move(explicit_curves);
  T.full_validation_ = full_validation;
  T.validate_structure();
  T.derive();
  if (full_validation) {
    T.validate_links();
    T.build_peripheral_bases();
  }
  return T;
}

void IdealTriangulation::validate_structure() const {
  const int n = this->n();
  if (n == 0) throw ValidationError("triangulation has no tetrahedra");
  for (int t = 0; t < n; ++t) {
    const TetGluing& tg = tets_[static_cast<size_t>(t)];
    if (tg.edge_pair < 0 || tg.edge_pair > 2) throw ValidationError("edge_pair out of range");
    for (int f = 0; f < 4; ++f) {
      int t2 = tg.neighbors[static_cast<size_t>(f)];
      if (t2 < 0 || t2 >= n) throw ValidationError("unglued face: tetrahedron " + std::to_string(t) + " face " + std::to_string(f));
      const Perm4& g = tg.gluings[static_cast<size_t>(f)];
      if (full_validation_ && !g.odd())
        throw ValidationError("orientation-preserving (even) gluing permutation at tetrahedron " +
                              std::to_string(t) + " face " + std::to_string(f));
      int f2 = g[f];
      const TetGluing& tg2 = tets_[static_cast<size_t>(t2)];
      if (tg2.neighbors[static_cast<size_t>(f2)] != t ||
          !(tg2.gluings[static_cast<size_t>(f2)] == g.inverse()))
        throw ValidationError("non-involutive gluing at tetrahedron " + std::to_string(t) + " face " +
                              std::to_string(f));
    }
  }
  for (int t : flat_labels_)
    if (t < 0 || t >= n) throw ValidationError("flat label out of range");
}

void IdealTriangulation::derive() {
  const int n = this->n();

  // edge classes: walk around each tetrahedron edge through the face gluings
  std::vector<bool> seen(static_cast<size_t>(6 * n), false);
  edge_classes_.clear();
  for (int t0 = 0; t0 < n; ++t0) {
    for (int e0 = 0; e0 < 6; ++e0) {
      if (seen[static_cast<size_t>(6 * t0 + e0)]) continue;
      EdgeClass cls;
      cls.id = static_cast<int>(edge_classes_.size());
      int a = kEdges[static_cast<size_t>(e0)][0], b = kEdges[static_cast<size_t>(e0)][1];
      int faces[2], nf = 0;
      for (int x = 0; x < 4; ++x)
        if (x != a && x != b) faces[nf++] = x;
      int t = t0, aa = a, bb = b, came = faces[0];
      const int st = t, sa = aa, sb = bb, sc = came;
      int guard = 0;
      while (true) {
        cls.incidences.emplace_back(t, edge_index(aa, bb));
        seen[static_cast<size_t>(6 * t + edge_index(aa, bb))] = true;
        int out = -1;
        for (int x = 0; x < 4; ++x)
          if (x != aa && x != bb && x != came) out = x;
        const Perm4& g = tets_[static_cast<size_t>(t)].gluings[static_cast<size_t>(out)];
        int t2 = tets_[static_cast<size_t>(t)].neighbors[static_cast<size_t>(out)];
        int na = g[aa], nb = g[bb], ncame = g[out];
        t = t2;
        aa = na;
        bb = nb;
        came = ncame;
        if (++guard > 6 * n + 1) throw ValidationError("internal inconsistency: edge orbit failed to close");
        if (t == st && came == sc && ((aa == sa && bb == sb) || (aa == sb && bb == sa))) break;
      }
      edge_classes_.push_back(std::move(cls));
    }
  }

  // cusps: orbits of ideal vertices (t,v)
  UF cu(4 * n);
  for (int t = 0; t < n; ++t)
    for (int v = 0; v < 4; ++v)
      for (int f = 0; f < 4; ++f) {
        if (f == v) continue;
        auto [t2, v2, f2] = side_adjacent(t, v, f);
        (void)f2;
        cu.unite(4 * t + v, 4 * t2 + v2);
      }
  std::map<int, int> cusp_id;
  cusp_of_.assign(static_cast<size_t>(4 * n), -1);
  for (int x = 0; x < 4 * n; ++x) {
    int r = cu.find(x);
    auto it = cusp_id.find(r);
    if (it == cusp_id.end()) it = cusp_id.emplace(r, static_cast<int>(cusp_id.size())).first;
    cusp_of_[static_cast<size_t>(x)] = it->second;
  }
  k_ = static_cast<int>(cusp_id.size());

  // vertex classes of the cusp triangulations: orbits of (t,v,w)
  UF vu(16 * n);
  for (int t = 0; t < n; ++t)
    for (int v = 0; v < 4; ++v)
      for (int w = 0; w < 4; ++w) {
        if (w == v) continue;
        for (int f = 0; f < 4; ++f) {
          if (f == v || f == w) continue;
          auto [t2, v2, f2] = side_adjacent(t, v, f);
          (void)f2;
          const Perm4& g = tets_[static_cast<size_t>(t)].gluings[static_cast<size_t>(f)];
          vu.unite(16 * t + 4 * v + w, 16 * t2 + 4 * v2 + g[w]);
        }
      }
  std::map<int, int> vclass_id;
  vertex_class_.assign(static_cast<size_t>(16 * n), -1);
  for (int t = 0; t < n; ++t)
    for (int v = 0; v < 4; ++v)
      for (int w = 0; w < 4; ++w) {
        if (w == v) continue;
        int r = vu.find(16 * t + 4 * v + w);
        auto it = vclass_id.find(r);
        if (it == vclass_id.end()) it = vclass_id.emplace(r, static_cast<int>(vclass_id.size())).first;
        vertex_class_[static_cast<size_t>(16 * t + 4 * v + w)] = it->second;
      }
  n_vertex_classes_ = static_cast<int>(vclass_id.size());

  // edge endpoints at cusps
  for (EdgeClass& cls : edge_classes_) {
    auto [t, e] = cls.incidences.front();
    cls.endpoint_cusps = {cusp_of(t, kEdges[static_cast<size_t>(e)][0]),
                          cusp_of(t, kEdges[static_cast<size_t>(e)][1])};
  }

  // cusp tori
  cusp_tori_.assign(static_cast<size_t>(k_), CuspTorus{});
  for (int c = 0; c < k_; ++c) cusp_tori_[static_cast<size_t>(c)].id = c;
  for (int t = 0; t < n; ++t)
    for (int v = 0; v < 4; ++v) cusp_tori_[static_cast<size_t>(cusp_of(t, v))].corners.emplace_back(t, v);
  std::vector<std::set<int>> vcs(static_cast<size_t>(k_));
  for (int t = 0; t < n; ++t)
    for (int v = 0; v < 4; ++v)
      for (int w = 0; w < 4; ++w)
        if (w != v) vcs[static_cast<size_t>(cusp_of(t, v))].insert(vertex_class(t, v, w));
  for (int c = 0; c < k_; ++c) {
    CuspTorus& ct = cusp_tori_[static_cast<size_t>(c)];
    int F = static_cast<int>(ct.corners.size());
    ct.vertex_count = static_cast<int>(vcs[static_cast<size_t>(c)].size());
    ct.euler = ct.vertex_count - (3 * F) / 2 + F;
  }
}

void IdealTriangulation::validate_links() const {
  if (static_cast<int>(edge_classes_.size()) != n())
    throw ValidationError("edge class count " + std::to_string(edge_classes_.size()) +
                          " differs from tetrahedron count " + std::to_string(n()));
  for (const CuspTorus& ct : cusp_tori_)
    if (ct.euler != 0)
      throw ValidationError("cusp link not a torus (cusp " + std::to_string(ct.id) + ", Euler characteristic " +
                            std::to_string(ct.euler) + ")");
}

EulerReport IdealTriangulation::euler_report() const {
  EulerReport r;
  r.vertices = k_;
  r.edges = static_cast<int>(edge_classes_.size());
  r.faces = 2 * n();
  r.tets = n();
  bool tori = true;
  for (const CuspTorus& ct : cusp_tori_) tori = tori && ct.euler == 0;
  r.ok = (r.edges == n()) && tori;
  return r;
}

// ---------------------------------------------------------------------------
// peripheral basis: tree-cotree on the cusp triangulation, left push-off
// ---------------------------------------------------------------------------

namespace {

// a side of a corner triangle
struct Side {
  int t, v, f;
  auto operator<=>(const Side&) const = default;
};

// directed edge of the cusp triangulation: side (t,v,f), from corner a to corner b
struct DirRep {
  int t, v, f, a, b;
  auto operator<=>(const DirRep&) const = default;
};

struct LoopEdge {
  Side key;      // canonical (minimal) side of the edge class
  int src, dst;  // vertex classes
  DirRep rep;    // concrete chosen directed representative
};

struct CuspGraph {
  const IdealTriangulation* T;
  std::vector<std::pair<int, int>> tris;
  std::map<Side, Side> ekey;  // side -> canonical side

  Side partner(Side s) const {
    auto [t2, v2, f2] = T->side_adjacent(s.t, s.v, s.f);
    return Side{t2, v2, f2};
  }
  DirRep partner(DirRep r) const {
    auto [t2, v2, f2] = T->side_adjacent(r.t, r.v, r.f);
    const Perm4& g = T->tetrahedra()[static_cast<size_t>(r.t)].gluings[static_cast<size_t>(r.f)];
    return DirRep{t2, v2, f2, g[r.a], g[r.b]};
  }
  // the two corner labels on side (t,v,f), ascending
  static std::array<int, 2> side_corners(int v, int f) {
    std::array<int, 2> ws{};
    int i = 0;
    for (int x = 0; x < 4; ++x)
      if (x != v && x != f) ws[static_cast<size_t>(i++)] = x;
    return ws;
  }
};

CuspGraph make_cusp_graph(const IdealTriangulation& T, int cusp) {
  CuspGraph G;
  G.T = &T;
  for (int t = 0; t < T.n(); ++t)
    for (int v = 0; v < 4; ++v)
      if (T.cusp_of(t, v) == cusp) G.tris.emplace_back(t, v);
  for (auto [t, v] : G.tris)
    for (int f = 0; f < 4; ++f) {
      if (f == v) continue;
      Side s{t, v, f};
      G.ekey[s] = std::min(s, G.partner(s));
    }
  return G;
}

// triangle to the left of directed side: interior of (t,v) is left of a->b on
// side f iff the tuple (v,a,b,f) is even; otherwise take the partner triangle
DirRep left_rep(const CuspGraph& G, DirRep r) {
  if (tuple_parity(r.v, r.a, r.b, r.f) == 0) return r;
  return G.partner(r);
}

// all concrete directed representatives of edge class `key` running src->dst
std::vector<DirRep> dir_reps(const IdealTriangulation& T, const CuspGraph& G, Side key, int src, int dst) {
  std::vector<DirRep> out;
  for (const auto& [s, k] : G.ekey) {
    if (!(k == key)) continue;
    auto ws = CuspGraph::side_corners(s.v, s.f);
    for (auto [a, b] : {std::pair{ws[0], ws[1]}, std::pair{ws[1], ws[0]}})
      if (T.vertex_class(s.t, s.v, a) == src && T.vertex_class(s.t, s.v, b) == dst)
        out.push_back(DirRep{s.t, s.v, s.f, a, b});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// transverse push-off of an edge loop, running parallel on its left
std::vector<CornerTraversal> push_off(const IdealTriangulation& T, const CuspGraph& G,
                                      const std::vector<LoopEdge>& loop) {
  std::vector<CornerTraversal> travs;
  const size_t m = loop.size();
  DirRep rep = loop[0].rep;
  const DirRep first0 = rep, first1 = G.partner(rep);
  for (size_t i = 0; i < m; ++i) {
    const LoopEdge& nxt = loop[(i + 1) % m];
    // strip triangle: curve runs inside the left triangle of rep, entering
    // through the side at the source corner and exiting at the destination
    DirRep L = left_rep(G, rep);
    auto [t, v, f, a, b] = L;
    travs.push_back(CornerTraversal{t, v, b, a, f});
    // fan clockwise around the destination vertex, cutting corners on the
    // right, until the next loop edge's strip side comes up
    int cur_t = t, cur_v = v, cur_corner = b, cur_in = a;
    int guard = 0;
    while (true) {
      if (++guard > 1000 * T.n() + 1000) throw ValidationError("internal inconsistency: push-off failed to close");
      auto [t2, v2, f2] = T.side_adjacent(cur_t, cur_v, cur_in);
      const Perm4& g = T.tetrahedra()[static_cast<size_t>(cur_t)].gluings[static_cast<size_t>(cur_in)];
      int corner2 = g[cur_corner];
      cur_t = t2;
      cur_v = v2;
      cur_corner = corner2;
      int entered = f2;
      int other = -1;
      for (int x = 0; x < 4; ++x)
        if (x != cur_v && x != cur_corner && x != entered) other = x;
      // candidate directed edge out of this vertex along side `other`
      int wss = -1;
      for (int x = 0; x < 4; ++x)
        if (x != cur_v && x != cur_corner && x != other) wss = x;
      DirRep cand{cur_t, cur_v, other, cur_corner, wss};
      if (tuple_parity(cur_v, cur_corner, wss, other) == 0 &&
          (cand == nxt.rep || cand == G.partner(nxt.rep))) {
        rep = cand;
        break;
      }
      travs.push_back(CornerTraversal{cur_t, cur_v, entered, other, cur_corner});
      cur_in = other;
    }
  }
  if (!(rep == first0 || rep == first1))
    throw ValidationError("internal inconsistency: push-off did not return to its start");
  return travs;
}

// signed crossings of a transverse curve against the directed edges of a loop;
// a crossing out of triangle (t,v) counts +1 when (t,v) is on the right of the
// loop edge's direction, -1 on the left
int loop_curve_intersection(const IdealTriangulation& T, const CuspGraph& G,
                            const std::vector<LoopEdge>& loop, const std::vector<CornerTraversal>& travs) {
  int tot = 0;
  for (const CornerTraversal& s : travs) {
    Side crossed = G.ekey.at(Side{s.tet, s.vertex, s.exit});
    for (const LoopEdge& le : loop) {
      if (!(le.key == crossed)) continue;
      // orient the crossed side rep to match le's direction
      DirRep d = le.rep;
      if (!(Side{d.t, d.v, d.f} == Side{s.tet, s.vertex, s.exit})) d = G.partner(d);
      if (!(Side{d.t, d.v, d.f} == Side{s.tet, s.vertex, s.exit}))
        throw ValidationError("internal inconsistency: edge representative mismatch");
      tot += (tuple_parity(s.vertex, d.a, d.b, s.exit) == 0) ? -1 : +1;
    }
  }
  return tot;
}

struct CuspBasisData {
  std::vector<LoopEdge> loop_lambda, loop_mu;
  CuspCurve lambda, mu;
  int intersection = 0;
};

CuspBasisData build_basis(const IdealTriangulation& T, int cusp) {
  CuspGraph G = make_cusp_graph(T, cusp);

  std::vector<Side> edges;
  for (const auto& [s, k] : G.ekey)
    if (s == k) edges.push_back(k);
  std::sort(edges.begin(), edges.end());

  // vertex spanning tree (BFS, deterministic order)
  std::set<int> verts;
  for (auto [t, v] : G.tris)
    for (int w = 0; w < 4; ++w)
      if (w != v) verts.insert(T.vertex_class(t, v, w));
  std::map<int, std::vector<std::tuple<Side, int, int, int>>> adjv;  // u -> (edge, other, corner_at_u, corner_at_other)
  for (Side e : edges) {
    auto ws = CuspGraph::side_corners(e.v, e.f);
    int c1 = T.vertex_class(e.t, e.v, ws[0]);
    int c2 = T.vertex_class(e.t, e.v, ws[1]);
    adjv[c1].emplace_back(e, c2, ws[0], ws[1]);
    adjv[c2].emplace_back(e, c1, ws[1], ws[0]);
  }
  for (auto& [u, lst] : adjv) std::sort(lst.begin(), lst.end());

  int root = *verts.begin();
  std::map<int, std::pair<int, Side>> par;  // child -> (parent, edge)
  std::set<Side> tree;
  std::vector<int> order{root};
  par[root] = {-1, Side{-1, -1, -1}};
  for (size_t i = 0; i < order.size(); ++i) {
    int u = order[static_cast<size_t>(i)];
    for (const auto& [e, w, cu, cw] : adjv[u]) {
      (void)cu;
      (void)cw;
      if (!par.contains(w)) {
        par[w] = {u, e};
        tree.insert(e);
        order.push_back(w);
      }
    }
  }

  // dual spanning tree over triangles, avoiding vertex-tree edges
  std::set<std::pair<int, int>> dseen{G.tris[0]};
  std::vector<std::pair<int, int>> dorder{G.tris[0]};
  std::set<Side> cotree;
  for (size_t i = 0; i < dorder.size(); ++i) {
    auto [t, v] = dorder[i];
    for (int f = 0; f < 4; ++f) {
      if (f == v) continue;
      Side e = G.ekey.at(Side{t, v, f});
      if (tree.contains(e)) continue;
      auto [t2, v2, f2] = T.side_adjacent(t, v, f);
      (void)f2;
      if (!dseen.contains({t2, v2})) {
        dseen.insert({t2, v2});
        cotree.insert(e);
        dorder.emplace_back(t2, v2);
      }
    }
  }

  std::vector<Side> leftover;
  for (Side e : edges)
    if (!tree.contains(e) && !cotree.contains(e)) leftover.push_back(e);
  if (leftover.size() != 2)
    throw ValidationError("internal inconsistency: expected 2 leftover edges on cusp torus, got " +
                          std::to_string(leftover.size()));

  auto make_loop_edge = [&](Side key, int src, int dst) {
    auto reps = dir_reps(T, G, key, src, dst);
    if (reps.empty()) throw ValidationError("internal inconsistency: no directed representative");
    return LoopEdge{key, src, dst, reps.front()};
  };

  auto tree_path = [&](int u) {
    std::vector<std::tuple<int, int, Side>> path;  // (node, parent, edge), walking up
    while (par.at(u).first != -1) {
      auto [pu, e] = par.at(u);
      path.emplace_back(u, pu, e);
      u = pu;
    }
    return path;
  };

  std::vector<std::vector<LoopEdge>> loops;
  for (Side e : leftover) {
    auto ws = CuspGraph::side_corners(e.v, e.f);
    int c1 = T.vertex_class(e.t, e.v, ws[0]);
    int c2 = T.vertex_class(e.t, e.v, ws[1]);
    std::vector<LoopEdge> dir_edges;
    auto p1 = tree_path(c1);  // c1 up to root
    auto p2 = tree_path(c2);
    for (auto it = p1.rbegin(); it != p1.rend(); ++it) {
      auto [u, pu, te] = *it;
      dir_edges.push_back(make_loop_edge(te, pu, u));
    }
    dir_edges.push_back(make_loop_edge(e, c1, c2));
    for (auto [u, pu, te] : p2) dir_edges.push_back(make_loop_edge(te, u, pu));
    // cancel backtracks, also cyclically
    bool changed = true;
    while (changed && !dir_edges.empty()) {
      changed = false;
      std::vector<LoopEdge> out;
      for (size_t i = 0; i < dir_edges.size();) {
        if (i + 1 < dir_edges.size() && dir_edges[i].key == dir_edges[i + 1].key &&
            dir_edges[i].src == dir_edges[i + 1].dst && dir_edges[i].dst == dir_edges[i + 1].src) {
          i += 2;
          changed = true;
        } else {
          out.push_back(dir_edges[i]);
          ++i;
        }
      }
      if (out.size() >= 2 && out.front().key == out.back().key && out.front().src == out.back().dst &&
          out.front().dst == out.back().src) {
        out.erase(out.begin());
        out.pop_back();
        changed = true;
      }
      dir_edges = std::move(out);
    }
    if (dir_edges.empty()) throw ValidationError("internal inconsistency: peripheral loop cancelled away");
    loops.push_back(std::move(dir_edges));
  }

  CuspBasisData out;
  out.loop_lambda = loops[0];
  out.loop_mu = loops[1];
  CuspCurve ca{cusp, "lambda", push_off(T, G, out.loop_lambda)};
  CuspCurve cb{cusp, "mu", push_off(T, G, out.loop_mu)};
  int i12 = loop_curve_intersection(T, G, out.loop_lambda, cb.steps);
  int i21 = loop_curve_intersection(T, G, out.loop_mu, ca.steps);
  if (i12 != -i21 || std::abs(i12) != 1)
    throw ValidationError("peripheral basis construction failed (intersection " + std::to_string(i12) + "," +
                          std::to_string(i21) + "); provide explicit curves");
  if (i12 == -1) {
    std::swap(out.loop_lambda, out.loop_mu);
    std::swap(ca.steps, cb.steps);
  }
  out.lambda = CuspCurve{cusp, "lambda", ca.steps};
  out.mu = CuspCurve{cusp, "mu", cb.steps};
  out.intersection = 1;
  return out;
}

void validate_curve(const IdealTriangulation& T, const CuspCurve& c) {
  if (c.steps.empty()) throw ValidationError("peripheral curve has no steps");
  const size_t m = c.steps.size();
  for (size_t i = 0; i < m; ++i) {
    const CornerTraversal& s = c.steps[i];
    if (s.tet < 0 || s.tet >= T.n()) throw ValidationError("peripheral curve: tetrahedron index out of range");
    int labels[4] = {s.vertex, s.enter, s.exit, s.corner};
    int mask = 0;
    for (int x : labels) {
      if (x < 0 || x > 3) throw ValidationError("peripheral curve: label out of range");
      mask |= 1 << x;
    }
    if (mask != 15) throw ValidationError("peripheral curve: vertex/enter/exit/corner must be distinct");
    if (T.cusp_of(s.tet, s.vertex) != c.cusp) throw ValidationError("peripheral curve strays off its cusp");
    const CornerTraversal& nx = c.steps[(i + 1) % m];
    auto [t2, v2, f2] = T.side_adjacent(s.tet, s.vertex, s.exit);
    if (t2 != nx.tet || v2 != nx.vertex || f2 != nx.enter)
      throw ValidationError("peripheral curve is not a closed loop (step " + std::to_string(i) + ")");
  }
}

}  // namespace

void IdealTriangulation::build_peripheral_bases() {
  bases_.assign(static_cast<size_t>(k_), {});
  intersection_.assign(static_cast<size_t>(k_), 0);
  std::vector<CuspBasisData> data;
  data.reserve(static_cast<size_t>(k_));
  for (int c = 0; c < k_; ++c) data.push_back(build_basis(*this, c));

  for (int c = 0; c < k_; ++c) {
    bases_[static_cast<size_t>(c)] = {data[static_cast<size_t>(c)].lambda, data[static_cast<size_t>(c)].mu};
    intersection_[static_cast<size_t>(c)] = data[static_cast<size_t>(c)].intersection;
  }

  // explicit curves from the file override the auto basis; their intersection
  // number is computed in coordinates w.r.t. the auto basis
  if (!explicit_curves_.empty()) {
    std::vector<CuspCurve> lam(static_cast<size_t>(k_)), mu(static_cast<size_t>(k_));
    std::vector<bool> has_l(static_cast<size_t>(k_), false), has_m(static_cast<size_t>(k_), false);
    for (const CuspCurve& c : explicit_curves_) {
      if (c.cusp < 0 || c.cusp >= k_) throw ValidationError("peripheral curve cusp index out of range");
      validate_curve(*this, c);
      if (c.tag == "lambda") {
        lam[static_cast<size_t>(c.cusp)] = c;
        has_l[static_cast<size_t>(c.cusp)] = true;
      } else if (c.tag == "mu") {
        mu[static_cast<size_t>(c.cusp)] = c;
        has_m[static_cast<size_t>(c.cusp)] = true;
      } else {
        throw ValidationError("peripheral curve tag must be \"lambda\" or \"mu\"");
      }
    }
    for (int c = 0; c < k_; ++c) {
      if (!has_l[static_cast<size_t>(c)] && !has_m[static_cast<size_t>(c)]) continue;
      if (!has_l[static_cast<size_t>(c)] || !has_m[static_cast<size_t>(c)])
        throw ValidationError("explicit curves must provide both lambda and mu for cusp " + std::to_string(c));
      CuspGraph G = make_cusp_graph(*this, c);
      const CuspBasisData& d = data[static_cast<size_t>(c)];
      auto coords = [&](const CuspCurve& cur) {
        int y = loop_curve_intersection(*this, G, d.loop_lambda, cur.steps);
        int x = -loop_curve_intersection(*this, G, d.loop_mu, cur.steps);
        return std::pair{x, y};
      };
      auto [x1, y1] = coords(lam[static_cast<size_t>(c)]);
      auto [x2, y2] = coords(mu[static_cast<size_t>(c)]);
      int inter = x1 * y2 - x2 * y1;
      if (inter != 1)
        throw ValidationError("explicit curves do not form a positively oriented basis on cusp " +
                              std::to_string(c) + " (intersection " + std::to_string(inter) + ")");
      bases_[static_cast<size_t>(c)] = {lam[static_cast<size_t>(c)], mu[static_cast<size_t>(c)]};
      intersection_[static_cast<size_t>(c)] = inter;
    }
  }
}

const std::pair<CuspCurve, CuspCurve>& IdealTriangulation::peripheral_basis(int cusp) const {
  if (bases_.empty()) throw ValidationError("peripheral bases unavailable without full validation");
  return bases_[static_cast<size_t>(cusp)];
}

int IdealTriangulation::intersection_number(int cusp) const {
  if (intersection_.empty()) throw ValidationError("peripheral bases unavailable without full validation");
  return intersection_[static_cast<size_t>(cusp)];
}

// ---------------------------------------------------------------------------
// file format
// ---------------------------------------------------------------------------

using nlohmann::json;

namespace {

const char* kEdgePairNames[3] = {"01|23", "02|13", "03|12"};

int edge_pair_from_string(const std::string& s) {
  for (int i = 0; i < 3; ++i)
    if (s == kEdgePairNames[i]) return i;
  throw ParseError("invalid edge_pair value: " + s);
}

std::pair<int, int> line_column(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

IdealTriangulation parse_triangulation(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     e.what());
  }
  try {
    if (!j.is_object()) throw ParseError("top level must be a JSON object");
    std::string name = j.value("name", std::string("unnamed"));
    if (!j.contains("tetrahedra") || !j["tetrahedra"].is_array())
      throw ParseError("missing \"tetrahedra\" array");
    std::vector<TetGluing> tets;
    for (const json& tj : j["tetrahedra"]) {
      TetGluing tg;
      const json& nb = tj.at("neighbors");
      const json& gl = tj.at("gluings");
      if (!nb.is_array() || nb.size() != 4 || !gl.is_array() || gl.size() != 4)
        throw ParseError("each tetrahedron needs 4 neighbors and 4 gluings");
      for (int f = 0; f < 4; ++f) {
        tg.neighbors[static_cast<size_t>(f)] = nb[static_cast<size_t>(f)].get<int>();
        tg.gluings[static_cast<size_t>(f)] = Perm4::from_string(gl[static_cast<size_t>(f)].get<std::string>());
      }
      tg.edge_pair = edge_pair_from_string(tj.value("edge_pair", std::string("01|23")));
      tets.push_back(tg);
    }
    std::vector<int> flat = j.value("flat_labels", std::vector<int>{});
    std::vector<CuspCurve> curves;
    if (j.contains("peripheral_curves")) {
      for (const json& cj : j["peripheral_curves"]) {
        CuspCurve c;
        c.cusp = cj.at("cusp").get<int>();
        c.tag = cj.at("tag").get<std::string>();
        for (const json& sj : cj.at("steps")) {
          if (!sj.is_array() || sj.size() != 5) throw ParseError("curve steps must be 5-tuples");
          c.steps.push_back(CornerTraversal{sj[0].get<int>(), sj[1].get<int>(), sj[2].get<int>(),
                                            sj[3].get<int>(), sj[4].get<int>()});
        }
        curves.push_back(std::move(c));
      }
    }
    return IdealTriangulation::build(std::move(name), std::move(tets), std::move(flat), std::move(curves));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed triangulation file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("malformed triangulation file: ") + e.what());
  }
}

std::string IdealTriangulation::serialize() const {
  json j;
  j["name"] = name_;
  j["flat_labels"] = flat_labels_;
  json tets = json::array();
  for (const TetGluing& tg : tets_) {
    json tj;
    tj["neighbors"] = tg.neighbors;
    json gl = json::array();
    for (const Perm4& g : tg.gluings) gl.push_back(g.str());
    tj["gluings"] = gl;
    tj["edge_pair"] = kEdgePairNames[tg.edge_pair];
    tets.push_back(tj);
  }
  j["tetrahedra"] = tets;
  if (!explicit_curves_.empty()) {
    json cs = json::array();
    for (const CuspCurve& c : explicit_curves_) {
      json cj;
      cj["cusp"] = c.cusp;
      cj["tag"] = c.tag;
      json steps = json::array();
      for (const CornerTraversal& s : c.steps) steps.push_back({s.tet, s.vertex, s.enter, s.exit, s.corner});
      cj["steps"] = steps;
      cs.push_back(cj);
    }
    j["peripheral_curves"] = cs;
  }
  return j.dump(2) + "\n";
}

std::string normalize(const std::string& text) { return parse_triangulation(text).serialize(); }

}  // namespace dehnfill

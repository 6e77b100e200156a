#include "dehnfill/polyhedral.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace dehnfill {

std::vector<std::array<int, 4>> flat_layer(int m, int w, int w2) {
  if (m < 3 || w < 0 || w >= m || w2 < 0 || w2 >= m) throw ValidationError("flat_layer: bad polygon data");
  std::vector<std::array<int, 4>> out;
  if (w == w2) return out;
  for (int b = 0; b < m; ++b) {
    int b2 = (b + 1) % m;
    if (b == w || b == w2 || b2 == w || b2 == w2) continue;
    out.push_back({w, w2, b, b2});
  }
  return out;
}

namespace {

struct PolyInfo {
  // unordered edge -> the two faces containing it
  std::map<std::pair<int, int>, std::array<int, 2>> cofaces;
  std::vector<std::map<int, int>> next, prev;  // per face: cycle successor/predecessor
};

std::pair<int, int> ekey(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

PolyInfo validate_polyhedron(const Polyhedron& P, int alpha) {
  std::string where = "polyhedron " + std::to_string(alpha) + ": ";
  if (P.vertex_count < 4 || P.faces.size() < 4) throw ValidationError(where + "too few vertices or faces");
  if (P.cone_vertex < 0 || P.cone_vertex >= P.vertex_count) throw ValidationError(where + "apex out of range");
  if (P.face_cone.size() != P.faces.size()) throw ValidationError(where + "face_cone size mismatch");

  PolyInfo info;
  info.next.resize(P.faces.size());
  info.prev.resize(P.faces.size());
  std::map<std::pair<int, int>, int> directed;  // oriented edge -> multiplicity
  for (size_t f = 0; f < P.faces.size(); ++f) {
    const auto& cyc = P.faces[f];
    if (cyc.size() < 3) throw ValidationError(where + "face with fewer than 3 vertices");
    std::set<int> seen;
    for (size_t j = 0; j < cyc.size(); ++j) {
      int a = cyc[j], b = cyc[(j + 1) % cyc.size()];
      if (a < 0 || a >= P.vertex_count) throw ValidationError(where + "face vertex out of range");
      if (!seen.insert(a).second) throw ValidationError(where + "repeated vertex in a face cycle");
      info.next[f][a] = b;
      info.prev[f][b] = a;
      if (++directed[{a, b}] > 1) throw ValidationError(where + "oriented edge used twice (faces not outward-oriented)");
      auto [it, fresh] = info.cofaces.try_emplace(ekey(a, b), std::array<int, 2>{static_cast<int>(f), -1});
      if (!fresh) {
        if (it->second[1] != -1) throw ValidationError(where + "edge on more than two faces");
        it->second[1] = static_cast<int>(f);
      }
    }
    int w = P.face_cone[f];
    if (!seen.contains(w)) throw ValidationError(where + "cone vertex not on the face");
    if (seen.contains(P.cone_vertex) && w != P.cone_vertex)
      throw ValidationError(where + "faces containing the apex must be coned from it");
  }
  for (auto& [e, cf] : info.cofaces)
    if (cf[1] == -1) throw ValidationError(where + "unpaired edge: boundary is not closed");
  // reversed orientation of each edge must also occur
  for (auto& [e, mult] : directed)
    if (!directed.contains({e.second, e.first})) throw ValidationError(where + "inconsistent face orientations");
  int V = P.vertex_count, E = static_cast<int>(info.cofaces.size()), F = static_cast<int>(P.faces.size());
  if (V - E + F != 2) throw ValidationError(where + "boundary is not a sphere (Euler characteristic != 2)");
  // chords of a face must not be polyhedron edges
  for (size_t f = 0; f < P.faces.size(); ++f) {
    const auto& cyc = P.faces[f];
    for (size_t i = 0; i < cyc.size(); ++i)
      for (size_t j = i + 1; j < cyc.size(); ++j)
        if (info.cofaces.contains(ekey(cyc[i], cyc[j])) && info.next[f].at(cyc[i]) != cyc[j] &&
            info.next[f].at(cyc[j]) != cyc[i])
          throw ValidationError(where + "two nonadjacent vertices of a face are joined by an edge");
  }
  return info;
}

struct ProtoTet {
  std::array<int, 4> ids{};  // fat: poly-local vertex ids; flat: face_a-local ids
  int poly = -1;             // home polyhedron
  int src_face = -1;         // fat: the face whose fan triangle was coned
  int pairing = -1;          // flat: the pairing whose layer this belongs to
  bool flat = false;
};

struct ScopedFace {
  int scope;                // interior scope = poly index, pairing scope = n_poly + pairing index
  std::array<int, 3> ids;  // scope-space ids of the 3 face vertices, by increasing local label
};

}  // namespace

IdealTriangulation subdivide_polyhedral(const PolyhedralComplex& C) {
  const int np = static_cast<int>(C.polyhedra.size());
  if (np == 0) throw ValidationError("empty polyhedral complex");
  std::vector<PolyInfo> info;
  for (int a = 0; a < np; ++a) info.push_back(validate_polyhedron(C.polyhedra[a], a));

  // locate the pairing of each (polyhedron, face), validate the identifications
  std::map<std::pair<int, int>, int> pairing_of;
  std::vector<std::map<int, int>> to_a_space(C.pairings.size());  // b-side local id -> a-side local id
  for (size_t i = 0; i < C.pairings.size(); ++i) {
    const FacePairing& pr = C.pairings[i];
    std::string where = "pairing " + std::to_string(i) + ": ";
    auto check_side = [&](int poly, int face) {
      if (poly < 0 || poly >= np || face < 0 || face >= static_cast<int>(C.polyhedra[poly].faces.size()))
        throw ValidationError(where + "face reference out of range");
      if (!pairing_of.emplace(std::pair{poly, face}, static_cast<int>(i)).second)
        throw ValidationError(where + "face already paired");
    };
    check_side(pr.poly_a, pr.face_a);
    if (pr.poly_a == pr.poly_b && pr.face_a == pr.face_b) throw ValidationError(where + "face paired with itself");
    check_side(pr.poly_b, pr.face_b);
    const auto& ca = C.polyhedra[pr.poly_a].faces[pr.face_a];
    const auto& cb = C.polyhedra[pr.poly_b].faces[pr.face_b];
    if (pr.image.size() != ca.size() || ca.size() != cb.size())
      throw ValidationError(where + "face size mismatch");
    const auto& prev_b = info[pr.poly_b].prev[pr.face_b];
    for (size_t j = 0; j < ca.size(); ++j) {
      if (!prev_b.contains(pr.image[j])) throw ValidationError(where + "image vertex not on the target face");
      if (pr.image[(j + 1) % ca.size()] != prev_b.at(pr.image[j]))
        throw ValidationError(where + "identification must reverse the face orientation");
      to_a_space[i][pr.image[j]] = ca[j];
    }
  }
  for (int a = 0; a < np; ++a)
    for (size_t f = 0; f < C.polyhedra[a].faces.size(); ++f)
      if (!pairing_of.contains({a, static_cast<int>(f)}))
        throw ValidationError("face " + std::to_string(f) + " of polyhedron " + std::to_string(a) + " is unpaired");

  // fat tetrahedra: cone from the apex over each face fan
  std::vector<ProtoTet> tets;
  for (int a = 0; a < np; ++a) {
    const Polyhedron& P = C.polyhedra[a];
    for (size_t f = 0; f < P.faces.size(); ++f) {
      const auto& cyc = P.faces[f];
      int w = P.face_cone[f];
      for (size_t j = 0; j < cyc.size(); ++j) {
        int b = cyc[j], b2 = cyc[(j + 1) % cyc.size()];
        if (b == w || b2 == w) continue;  // edges at the fan vertex carry no triangle
        // cones over triangles touching the apex are degenerate; those
        // triangles reappear as faces of the neighbouring cones
        if (w == P.cone_vertex || b == P.cone_vertex || b2 == P.cone_vertex) continue;
        tets.push_back(ProtoTet{{P.cone_vertex, w, b, b2}, a, static_cast<int>(f), -1, false});
      }
    }
  }

  // flat layers across mismatched pairings, in face_a vertex space
  for (size_t i = 0; i < C.pairings.size(); ++i) {
    const FacePairing& pr = C.pairings[i];
    int w = C.polyhedra[pr.poly_a].face_cone[pr.face_a];
    int w2 = -1;  // the b-side fan vertex seen from the a side
    for (auto [vb, va] : to_a_space[i])
      if (vb == C.polyhedra[pr.poly_b].face_cone[pr.face_b]) w2 = va;
    if (w2 == w) continue;
    const auto& cyc = C.polyhedra[pr.poly_a].faces[pr.face_a];
    auto idx = [&](int v) {
      return static_cast<int>(std::find(cyc.begin(), cyc.end(), v) - cyc.begin());
    };
    for (auto [lw, lw2, lb, lb2] : flat_layer(static_cast<int>(cyc.size()), idx(w), idx(w2)))
      tets.push_back(ProtoTet{{cyc[static_cast<size_t>(lw)], cyc[static_cast<size_t>(lw2)],
                               cyc[static_cast<size_t>(lb)], cyc[static_cast<size_t>(lb2)]},
                              pr.poly_a, -1, static_cast<int>(i), true});
  }

  // scope of tet face opposite local label `opp`, with ids mapped to the
  // pairing's face_a vertex space when the face lies on a paired boundary
  auto scoped_face = [&](const ProtoTet& T, int opp) -> ScopedFace {
    std::array<int, 3> raw{};
    int n3 = 0;
    for (int x = 0; x < 4; ++x)
      if (x != opp) raw[static_cast<size_t>(n3++)] = T.ids[static_cast<size_t>(x)];
    if (T.flat) return {np + T.pairing, raw};
    const Polyhedron& P = C.polyhedra[static_cast<size_t>(T.poly)];
    int on_face = -1;
    if (opp == 0) {
      on_face = T.src_face;  // the fan triangle itself lies on the coned face
    } else {
      // face contains the apex; boundary iff the opposite pair is a
      // polyhedron edge whose other coface contains the apex
      int x = raw[1], y = raw[2];  // raw[0] is the apex (local label 0)
      auto it = info[static_cast<size_t>(T.poly)].cofaces.find(ekey(x, y));
      if (it != info[static_cast<size_t>(T.poly)].cofaces.end())
        for (int g : it->second)
          if (info[static_cast<size_t>(T.poly)].next[static_cast<size_t>(g)].contains(P.cone_vertex))
            on_face = g;
    }
    if (on_face == -1) return {T.poly, raw};
    int i = pairing_of.at({T.poly, on_face});
    if (C.pairings[static_cast<size_t>(i)].poly_a != T.poly || C.pairings[static_cast<size_t>(i)].face_a != on_face)
      for (int& v : raw) v = to_a_space[static_cast<size_t>(i)].at(v);
    return {np + i, raw};
  };

  // match faces by scoped vertex triples and derive the gluing permutations
  auto assemble = [&]() {
    std::map<std::tuple<int, int, int, int>, std::vector<std::pair<int, int>>> buckets;
    std::vector<std::array<ScopedFace, 4>> sf(tets.size());
    for (size_t t = 0; t < tets.size(); ++t)
      for (int f = 0; f < 4; ++f) {
        sf[t][static_cast<size_t>(f)] = scoped_face(tets[t], f);
        auto s = sf[t][static_cast<size_t>(f)].ids;
        std::sort(s.begin(), s.end());
        buckets[{sf[t][static_cast<size_t>(f)].scope, s[0], s[1], s[2]}].push_back({static_cast<int>(t), f});
      }
    std::vector<TetGluing> out(tets.size());
    for (auto& [key, fs] : buckets) {
      if (fs.size() != 2)
        throw ValidationError("face matching failed: a triangle occurs " + std::to_string(fs.size()) +
                              " times (degenerate complex)");
      auto [t1, f1] = fs[0];
      auto [t2, f2] = fs[1];
      if (t1 == t2 && f1 == f2) throw ValidationError("face matching failed: self-identified triangle");
      const ScopedFace &a = sf[static_cast<size_t>(t1)][static_cast<size_t>(f1)],
                       &b = sf[static_cast<size_t>(t2)][static_cast<size_t>(f2)];
      std::array<int, 4> g1{}, g2{};
      g1[static_cast<size_t>(f1)] = f2;
      g2[static_cast<size_t>(f2)] = f1;
      int ia = 0;
      for (int x = 0; x < 4; ++x) {
        if (x == f1) continue;
        int id = a.ids[static_cast<size_t>(ia++)];
        int ib = 0, y = -1;
        for (int yy = 0; yy < 4; ++yy) {
          if (yy == f2) continue;
          if (b.ids[static_cast<size_t>(ib++)] == id) y = yy;
        }
        if (y == -1) throw ValidationError("face matching failed: inconsistent vertex identification");
        g1[static_cast<size_t>(x)] = y;
        g2[static_cast<size_t>(y)] = x;
      }
      out[static_cast<size_t>(t1)].neighbors[static_cast<size_t>(f1)] = t2;
      out[static_cast<size_t>(t1)].gluings[static_cast<size_t>(f1)] = Perm4{g1};
      out[static_cast<size_t>(t2)].neighbors[static_cast<size_t>(f2)] = t1;
      out[static_cast<size_t>(t2)].gluings[static_cast<size_t>(f2)] = Perm4{g2};
    }
    return out;
  };

  std::vector<TetGluing> glued = assemble();

  // orientation repair: 2-colour the gluing graph, flipping labels 2<->3 on one
  // colour so every gluing permutation becomes odd
  std::vector<int> flip(tets.size(), -1);
  for (size_t root = 0; root < tets.size(); ++root) {
    if (flip[root] != -1) continue;
    flip[root] = 0;
    std::vector<size_t> queue{root};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      size_t t = queue[qi];
      for (int f = 0; f < 4; ++f) {
        int t2 = glued[t].neighbors[static_cast<size_t>(f)];
        int want = glued[t].gluings[static_cast<size_t>(f)].odd() ? flip[t] : 1 - flip[t];
        if (flip[static_cast<size_t>(t2)] == -1) {
          flip[static_cast<size_t>(t2)] = want;
          queue.push_back(static_cast<size_t>(t2));
        } else if (flip[static_cast<size_t>(t2)] != want) {
          throw ValidationError("complex is not orientable");
        }
      }
    }
  }
  if (std::any_of(flip.begin(), flip.end(), [](int x) { return x == 1; })) {
    for (size_t t = 0; t < tets.size(); ++t)
      if (flip[t]) std::swap(tets[t].ids[2], tets[t].ids[3]);
    glued = assemble();
  }

  std::vector<int> flat_labels;
  for (size_t t = 0; t < tets.size(); ++t)
    if (tets[t].flat) flat_labels.push_back(static_cast<int>(t));
  return IdealTriangulation::build(C.name, std::move(glued), std::move(flat_labels));
}

BigonReport validate_bigons(const IdealTriangulation& T) {
  BigonReport rep;
  std::vector<bool> flat_corner(static_cast<size_t>(4 * T.n()), false);
  for (int t : T.flat_labels())
    for (int v = 0; v < 4; ++v) flat_corner[static_cast<size_t>(4 * t + v)] = true;

  auto fail = [&](std::string why) {
    rep.ok = false;
    rep.violation = std::move(why);
    rep.chains.clear();
    return rep;
  };

  // no cusp vertex may be completely surrounded by zero-area triangles
  std::map<int, bool> class_has_fat;
  for (int t = 0; t < T.n(); ++t)
    for (int v = 0; v < 4; ++v)
      for (int w = 0; w < 4; ++w) {
        if (w == v) continue;
        bool& fat = class_has_fat[T.vertex_class(t, v, w)];
        fat = fat || !flat_corner[static_cast<size_t>(4 * t + v)];
      }
  for (auto [cls, fat] : class_has_fat)
    if (!fat) return fail("a cusp vertex is surrounded by flat triangles (vertex class " + std::to_string(cls) + ")");

  // flat corner triangles must chain into simple open paths
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> nbrs;
  for (int t : T.flat_labels())
    for (int v = 0; v < 4; ++v) {
      auto& lst = nbrs[{t, v}];
      for (int f = 0; f < 4; ++f) {
        if (f == v) continue;
        auto [t2, v2, f2] = T.side_adjacent(t, v, f);
        (void)f2;
        if (flat_corner[static_cast<size_t>(4 * t2 + v2)]) lst.push_back({t2, v2});
      }
      if (lst.size() > 2)
        return fail("flat triangle chain branches at tetrahedron " + std::to_string(t) + " vertex " +
                    std::to_string(v));
      if (std::find(lst.begin(), lst.end(), std::pair{t, v}) != lst.end() ||
          (lst.size() == 2 && lst[0] == lst[1]))
        return fail("flat triangles close up into a loop at tetrahedron " + std::to_string(t) + " vertex " +
                    std::to_string(v));
    }
  std::set<std::pair<int, int>> seen;
  for (auto& [c, lst] : nbrs) {
    if (seen.contains(c) || lst.size() == 2) continue;  // start chains at endpoints
    BigonChain chain;
    chain.cusp = T.cusp_of(c.first, c.second);
    std::pair<int, int> prev{-1, -1}, cur = c;
    while (true) {
      chain.corners.push_back(cur);
      seen.insert(cur);
      std::pair<int, int> nxt{-1, -1};
      for (auto& cand : nbrs.at(cur))
        if (cand != prev) nxt = cand;
      if (nxt.first == -1) break;
      prev = cur;
      cur = nxt;
    }
    rep.chains.push_back(std::move(chain));
  }
  for (auto& [c, lst] : nbrs)
    if (!seen.contains(c))
      return fail("flat triangles close up into a loop at tetrahedron " + std::to_string(c.first) + " vertex " +
                  std::to_string(c.second));
  return rep;
}

}  // namespace dehnfill

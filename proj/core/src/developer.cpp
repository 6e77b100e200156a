#include "dehnfill/developer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace dehnfill {

namespace {

constexpr double kPi = std::numbers::pi;

// modulus value at corner w of corner-triangle (t,v): the modulus of tet edge {v,w}
cd corner_modulus(const IdealTriangulation& T, const std::vector<cd>& z, int t, int v, int w) {
  int ty = T.mod_type_of_edge(t, edge_index(v, w));
  cd zz = z[static_cast<size_t>(t)];
  switch (ty) {
    case 0:
      return zz;
    case 1:
      return 1.0 / (1.0 - zz);
    default:
      return 1.0 - 1.0 / zz;
  }
}

// even (counterclockwise) cyclic order of the corner labels of (t,v), smallest first
std::array<int, 3> ccw_order(int v) {
  std::array<int, 3> ls{};
  int i = 0;
  for (int x = 0; x < 4; ++x)
    if (x != v) ls[static_cast<size_t>(i++)] = x;
  if (tuple_parity(v, ls[0], ls[1], ls[2]) != 0) std::swap(ls[1], ls[2]);
  return ls;
}

// place the missing corner `u` of triangle (t,v) given the other two positions:
// in ccw order (a, b, u) the corner relation reads P_u = P_a + m(a) (P_b - P_a)
void place_third(const IdealTriangulation& T, const std::vector<cd>& z, int t, int v, int u,
                 std::array<cd, 4>& pos) {
  std::array<int, 3> o = ccw_order(v);
  while (o[2] != u) {
    std::array<int, 3> r{o[1], o[2], o[0]};
    o = r;
  }
  cd m = corner_modulus(T, z, t, v, o[0]);
  pos[static_cast<size_t>(u)] =
      pos[static_cast<size_t>(o[0])] + m * (pos[static_cast<size_t>(o[1])] - pos[static_cast<size_t>(o[0])]);
}

}  // namespace

DevelopedTorus develop_torus(const IdealTriangulation& T, int cusp, const ShapeVector& zz) {
  const std::vector<cd>& z = zz.z();
  const CuspTorus& ct = T.cusp_tori()[static_cast<size_t>(cusp)];
  DevelopedTorus out;
  out.cusp = cusp;

  std::map<std::pair<int, int>, size_t> index;
  for (size_t i = 0; i < ct.corners.size(); ++i) {
    auto [t, v] = ct.corners[i];
    index[{t, v}] = i;
    out.triangles.push_back(DevelopedTriangle{t, v, {}});
  }

  // base triangle: lowest side of the first corner mapped to [0,1]
  {
    auto [t0, v0] = ct.corners.front();
    out.base_tet = t0;
    out.base_vertex = v0;
    std::array<int, 3> o = ccw_order(v0);
    DevelopedTriangle& tri = out.triangles.front();
    tri.pos[static_cast<size_t>(o[0])] = 0;
    tri.pos[static_cast<size_t>(o[1])] = 1;
    tri.pos[static_cast<size_t>(o[2])] = corner_modulus(T, z, t0, v0, o[0]);
  }

  // breadth-first edge-ratio propagation across the cusp triangulation
  std::vector<bool> placed(ct.corners.size(), false);
  placed[0] = true;
  std::vector<size_t> order{0};
  for (size_t qi = 0; qi < order.size(); ++qi) {
    const DevelopedTriangle& cur = out.triangles[order[qi]];
    for (int f = 0; f < 4; ++f) {
      if (f == cur.vertex) continue;
      auto [t2, v2, f2] = T.side_adjacent(cur.tet, cur.vertex, f);
      size_t j = index.at({t2, v2});
      if (placed[j]) continue;
      const Perm4& g = T.tetrahedra()[static_cast<size_t>(cur.tet)].gluings[static_cast<size_t>(f)];
      DevelopedTriangle& nxt = out.triangles[j];
      for (int w = 0; w < 4; ++w)
        if (w != cur.vertex && w != f) nxt.pos[static_cast<size_t>(g[w])] = cur.pos[static_cast<size_t>(w)];
      place_third(T, z, t2, v2, f2, nxt.pos);
      placed[j] = true;
      order.push_back(j);
    }
  }

  // consistency residual: the corner moduli around each vertex class of the
  // cusp triangulation multiply to 1
  {
    std::set<int> done;
    double worst = 0;
    for (auto [t, v] : ct.corners) {
      for (int w = 0; w < 4; ++w) {
        if (w == v) continue;
        int cls = T.vertex_class(t, v, w);
        if (done.contains(cls)) continue;
        done.insert(cls);
        cd prod(1, 0);
        int ct0 = t, cv = v, cw = w;
        // walk around the vertex: cross one of the two sides at the corner,
        // always exiting through the side we did not come in by
        int come = -1;
        for (int x = 0; x < 4; ++x)
          if (x != cv && x != cw) come = x;  // start direction: largest such label
        int st = ct0, sv = cv, sw = cw, sc = come;
        int guard = 0;
        while (true) {
          prod *= corner_modulus(T, z, ct0, cv, cw);
          int outf = -1;
          for (int x = 0; x < 4; ++x)
            if (x != cv && x != cw && x != come) outf = x;
          auto [t2, v2, f2] = T.side_adjacent(ct0, cv, outf);
          const Perm4& g = T.tetrahedra()[static_cast<size_t>(ct0)].gluings[static_cast<size_t>(outf)];
          int w2 = g[cw];
          ct0 = t2;
          cv = v2;
          cw = w2;
          come = f2;
          if (++guard > 24 * T.n() + 24) throw ValidationError("internal inconsistency: vertex fan failed to close");
          if (ct0 == st && cv == sv && cw == sw && come == sc) break;
        }
        worst = std::max(worst, std::abs(prod - 1.0));
      }
    }
    out.max_edge_residual = worst;
  }

  // holonomy of a peripheral curve: develop along its strip of triangles and
  // compare the two lifts of the starting triangle
  auto holonomy = [&](const CuspCurve& curve) {
    const CornerTraversal& s0 = curve.steps.front();
    std::array<cd, 4> start = out.triangles[index.at({s0.tet, s0.vertex})].pos;
    std::array<cd, 4> cur = start;
    int t = s0.tet, v = s0.vertex;
    for (const CornerTraversal& s : curve.steps) {
      auto [t2, v2, f2] = T.side_adjacent(s.tet, s.vertex, s.exit);
      const Perm4& g = T.tetrahedra()[static_cast<size_t>(s.tet)].gluings[static_cast<size_t>(s.exit)];
      std::array<cd, 4> nxt{};
      for (int w = 0; w < 4; ++w)
        if (w != s.vertex && w != s.exit) nxt[static_cast<size_t>(g[w])] = cur[static_cast<size_t>(w)];
      place_third(T, z, t2, v2, f2, nxt);
      cur = nxt;
      t = t2;
      v = v2;
    }
    (void)t;
    (void)v;
    std::array<int, 3> o = ccw_order(s0.vertex);
    cd p0 = start[static_cast<size_t>(o[0])], p1 = start[static_cast<size_t>(o[1])];
    cd q0 = cur[static_cast<size_t>(o[0])], q1 = cur[static_cast<size_t>(o[1])];
    AffineMap rho;
    rho.alpha = (q1 - q0) / (p1 - p0);
    rho.beta = q0 - rho.alpha * p0;
    return rho;
  };

  const auto& [lam, mu] = T.peripheral_basis(cusp);
  out.rho_lambda = holonomy(lam);
  out.rho_mu = holonomy(mu);
  out.a = out.rho_lambda.beta;
  out.b = out.rho_mu.beta;
  return out;
}

cd torus_dev_map(double x, double y, cd u, cd v, cd a, cd b) {
  if (std::abs(u) == 0) return a * x + b * y;
  return a * (std::exp(u * x + v * y) - 1.0) / (std::exp(u) - 1.0);
}

// ---------------------------------------------------------------------------
// development into H^3
// ---------------------------------------------------------------------------

namespace {

// homogeneous coordinates on the boundary sphere
struct HPt {
  cd a, b;  // point a/b; b == 0 is infinity
};

cd cross(const HPt& x, const HPt& y) { return x.a * y.b - x.b * y.a; }

HPt to_h(const CP1& p) { return p.inf ? HPt{1, 0} : HPt{p.v, 1}; }

CP1 from_h(const HPt& p) {
  double na = std::abs(p.a), nb = std::abs(p.b);
  if (nb <= 1e-14 * na) return CP1{0, true};
  return CP1{p.a / p.b, false};
}

struct HMobius {
  cd a{1}, b{0}, c{0}, d{1};
  HPt operator()(const HPt& p) const { return {a * p.a + b * p.b, c * p.a + d * p.b}; }
  HMobius inverse() const { return {d, -b, -c, a}; }
  HMobius compose(const HMobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

// the Mobius map sending (p1,p2,p3) to (0,1,inf)
HMobius to_standard(const HPt& p1, const HPt& p2, const HPt& p3) {
  cd s23 = cross(p2, p3), s21 = cross(p2, p1);
  return {p1.b * s23, -p1.a * s23, p3.b * s21, -p3.a * s21};
}

HPt apply_inv_standard(const HMobius& m, cd t) {
  // preimage of finite t under the (p1,p2,p3)->(0,1,inf) map
  HMobius inv = m.inverse();
  return inv(HPt{t, 1});
}

double hchordal(const HPt& p, const HPt& q) {
  double np = std::hypot(std::abs(p.a), std::abs(p.b));
  double nq = std::hypot(std::abs(q.a), std::abs(q.b));
  return std::abs(cross(p, q)) / (np * nq);
}

// place the missing vertex u of a tetrahedron with shape z_t given the other
// three: in the frame sending (w1,w2,w3) -> (0,1,inf) with (u,w1,w2,w3) even,
// the corner relation gives u at 1 - m({u,w1})
void place_fourth(const IdealTriangulation& T, const std::vector<cd>& z, int t, int u, std::array<HPt, 4>& p) {
  std::array<int, 3> o = ccw_order(u);
  cd m = corner_modulus(T, z, t, u, o[0]);
  HMobius M = to_standard(p[static_cast<size_t>(o[0])], p[static_cast<size_t>(o[1])], p[static_cast<size_t>(o[2])]);
  p[static_cast<size_t>(u)] = apply_inv_standard(M, 1.0 - m);
}

}  // namespace

double chordal(const CP1& p, const CP1& q) { return hchordal(to_h(p), to_h(q)); }

CP1 Mobius::operator()(const CP1& p) const {
  HPt h = to_h(p);
  return from_h(HPt{a * h.a + b * h.b, c * h.a + d * h.b});
}

cd cross_ratio_modulus(const std::array<CP1, 4>& pos, int v, int w) {
  std::array<HPt, 4> p{to_h(pos[0]), to_h(pos[1]), to_h(pos[2]), to_h(pos[3])};
  std::array<int, 3> o = ccw_order(v);
  while (o[0] != w) {
    std::array<int, 3> r{o[1], o[2], o[0]};
    o = r;
  }
  // m({v, o0}) = (p_{o2}-p_{o0})(p_{o1}-p_v) / ((p_{o1}-p_{o0})(p_{o2}-p_v))
  const HPt &pv = p[static_cast<size_t>(v)], &p0 = p[static_cast<size_t>(o[0])], &p1 = p[static_cast<size_t>(o[1])],
            &p2 = p[static_cast<size_t>(o[2])];
  return (cross(p2, p0) * cross(p1, pv)) / (cross(p1, p0) * cross(p2, pv));
}

DevelopedTetrahedra develop_tetrahedra(const IdealTriangulation& T, const ShapeVector& zz) {
  const std::vector<cd>& z = zz.z();
  const int n = T.n();
  DevelopedTetrahedra out;
  std::vector<std::array<HPt, 4>> pos(static_cast<size_t>(n));

  std::vector<bool> placed(static_cast<size_t>(n), false);
  // base tetrahedron at (inf, 0, 1, m({0,1}))
  pos[0][0] = HPt{1, 0};
  pos[0][1] = HPt{0, 1};
  pos[0][2] = HPt{1, 1};
  pos[0][3] = HPt{corner_modulus(T, z, 0, 0, 1), 1};
  placed[0] = true;

  std::set<std::pair<int, int>> tree;  // (tet, face), smaller side of tree gluings
  std::vector<int> order{0};
  for (size_t qi = 0; qi < order.size(); ++qi) {
    int t = order[qi];
    for (int f = 0; f < 4; ++f) {
      int t2 = T.tetrahedra()[static_cast<size_t>(t)].neighbors[static_cast<size_t>(f)];
      if (placed[static_cast<size_t>(t2)]) continue;
      const Perm4& g = T.tetrahedra()[static_cast<size_t>(t)].gluings[static_cast<size_t>(f)];
      for (int w = 0; w < 4; ++w)
        if (w != f) pos[static_cast<size_t>(t2)][static_cast<size_t>(g[w])] = pos[static_cast<size_t>(t)][static_cast<size_t>(w)];
      place_fourth(T, z, t2, g[f], pos[static_cast<size_t>(t2)]);
      placed[static_cast<size_t>(t2)] = true;
      tree.insert({t, f});
      tree.insert({t2, g[f]});
      order.push_back(t2);
    }
  }

  // closure defect per edge class: develop the cycle of tetrahedra around the
  // edge starting from the in-place lift and compare the returning lift
  std::vector<double> edge_defect;
  for (const EdgeClass& cls : T.edge_classes()) {
    auto [t0, e0] = cls.incidences.front();
    int a = kEdges[static_cast<size_t>(e0)][0], bb = kEdges[static_cast<size_t>(e0)][1];
    int come = -1;
    for (int x = 0; x < 4; ++x)
      if (x != a && x != bb) come = x;
    // replay the same walk used for edge classes
    come = [&] {
      int faces[2], nf = 0;
      for (int x = 0; x < 4; ++x)
        if (x != a && x != bb) faces[nf++] = x;
      return faces[0];
    }();
    int t = t0, aa = a, cb = bb, cm = come;
    const int st = t, sa = aa, sb = cb, sc = cm;
    std::array<HPt, 4> cur = pos[static_cast<size_t>(t0)];
    int guard = 0;
    while (true) {
      int outf = -1;
      for (int x = 0; x < 4; ++x)
        if (x != aa && x != cb && x != cm) outf = x;
      const Perm4& g = T.tetrahedra()[static_cast<size_t>(t)].gluings[static_cast<size_t>(outf)];
      int t2 = T.tetrahedra()[static_cast<size_t>(t)].neighbors[static_cast<size_t>(outf)];
      std::array<HPt, 4> nxt{};
      for (int w = 0; w < 4; ++w)
        if (w != outf) nxt[static_cast<size_t>(g[w])] = cur[static_cast<size_t>(w)];
      place_fourth(T, z, t2, g[outf], nxt);
      int na = g[aa], nb = g[cb], nc = g[outf];
      t = t2;
      aa = na;
      cb = nb;
      cm = nc;
      cur = nxt;
      if (++guard > 6 * n + 1) throw ValidationError("internal inconsistency: edge development failed to close");
      if (t == st && cm == sc && ((aa == sa && cb == sb) || (aa == sb && cb == sa))) break;
    }
    double d = 0;
    for (int w = 0; w < 4; ++w)
      d = std::max(d, hchordal(cur[static_cast<size_t>(w)], pos[static_cast<size_t>(t0)][static_cast<size_t>(w)]));
    edge_defect.push_back(d);
  }

  // per-tetrahedron edge class lookup
  std::vector<std::array<int, 6>> class_of(static_cast<size_t>(n));
  for (size_t m = 0; m < T.edge_classes().size(); ++m)
    for (auto [t, e] : T.edge_classes()[m].incidences)
      class_of[static_cast<size_t>(t)][static_cast<size_t>(e)] = static_cast<int>(m);

  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      if (tree.contains({t, f})) continue;
      int t2 = T.tetrahedra()[static_cast<size_t>(t)].neighbors[static_cast<size_t>(f)];
      const Perm4& g = T.tetrahedra()[static_cast<size_t>(t)].gluings[static_cast<size_t>(f)];
      if (std::pair{t2, g[f]} < std::pair{t, f}) continue;  // report each pairing once
      PairingCheck pc;
      pc.tet = t;
      pc.face = f;
      // isometry matching the three shared ideal vertices
      int ws[3], nw = 0;
      for (int w = 0; w < 4; ++w)
        if (w != f) ws[nw++] = w;
      HMobius A = to_standard(pos[static_cast<size_t>(t)][static_cast<size_t>(ws[0])],
                              pos[static_cast<size_t>(t)][static_cast<size_t>(ws[1])],
                              pos[static_cast<size_t>(t)][static_cast<size_t>(ws[2])]);
      HMobius B = to_standard(pos[static_cast<size_t>(t2)][static_cast<size_t>(g[ws[0]])],
                              pos[static_cast<size_t>(t2)][static_cast<size_t>(g[ws[1]])],
                              pos[static_cast<size_t>(t2)][static_cast<size_t>(g[ws[2]])]);
      HMobius M = B.inverse().compose(A);
      pc.iso = Mobius{M.a, M.b, M.c, M.d};
      double r = 0;
      for (int e = 0; e < 6; ++e) {
        auto [ea, eb] = std::pair{kEdges[static_cast<size_t>(e)][0], kEdges[static_cast<size_t>(e)][1]};
        if (ea == f || eb == f) continue;  // only the three edges on the face
        r = std::max(r, edge_defect[static_cast<size_t>(class_of[static_cast<size_t>(t)][static_cast<size_t>(e)])]);
      }
      pc.residual = r;
      out.pairings.push_back(pc);
      out.max_residual = std::max(out.max_residual, r);
    }

  out.verts.resize(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t)
    for (int w = 0; w < 4; ++w)
      out.verts[static_cast<size_t>(t)][static_cast<size_t>(w)] = from_h(pos[static_cast<size_t>(t)][static_cast<size_t>(w)]);
  return out;
}

std::pair<cd, double> cusp_dev_map(double x, double y, double t, cd u, cd v) {
  if (std::abs(u) == 0) throw std::domain_error("cusp_dev_map requires u != 0 (use the complete-cusp form)");
  cd e = u * x + v * y;
  return {std::exp(e), std::exp(t + e.real())};
}

// ---------------------------------------------------------------------------
// volumes
// ---------------------------------------------------------------------------

double lobachevsky(double theta) {
  // series theta(1 - log|2 theta|) + sum c_n theta^(2n+1) on |theta| <= pi/2,
  // c_n = zeta(2n) / (n (2n+1) pi^(2n)); reduction by pi-periodicity
  static const double kC[] = {
      0.0555555555555555555556,   0.00111111111111111111111,  0.0000503905265810027714790,
      0.00000293944738389182833627, 1.94343628687063030497e-7, 1.38743864154256231315e-8,
      1.04409275485113227618e-9,  8.16713558455135260149e-11, 6.58124167158157685796e-12,
      5.42979790585528163473e-13, 4.56648865592937235109e-14, 3.90195113663748065987e-15,
      3.37906230772559177992e-16, 2.95990336617089977575e-17, 2.61848968055735147646e-18,
      2.33652348912614343806e-19, 2.10081283791771504033e-20, 1.90164897578125738102e-21,
      1.73175571544037021668e-22, 1.58559124756934595052e-23, 1.45887336900076419389e-24,
      1.34824993139262371387e-25, 1.25106582891259527772e-26, 1.16519547379674802076e-27,
      1.08892051659468371926e-28, 1.02083935002245259586e-29, 9.59799282333768278616e-31,
      9.04845106688651254961e-32, 8.55179682334212669453e-33, 8.10133420676055833331e-34,
      7.69140445861436236336e-35, 7.31719809455500426132e-36,
  };
  double t = theta - kPi * std::round(theta / kPi);  // in [-pi/2, pi/2]
  if (t == 0.0) return 0.0;
  double t2 = t * t;
  double sum = 0, pw = t * t2;
  for (double c : kC) {
    double term = c * pw;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    pw *= t2;
  }
  return t * (1.0 - std::log(std::abs(2 * t))) + sum;
}

double tetra_volume(cd z) {
  if (z.imag() == 0.0) return 0.0;
  auto [m0, m1, m2] = moduli_triple(z);
  return lobachevsky(std::arg(m0)) + lobachevsky(std::arg(m1)) + lobachevsky(std::arg(m2));
}

double total_volume(const std::vector<cd>& z) {
  double v = 0;
  for (cd zj : z) v += tetra_volume(zj);
  return v;
}

ConeMetricSample cone_metric(double r, double theta, double h, double alpha) {
  if (!(r > 0) || !(alpha > 0)) throw std::domain_error("cone_metric requires r > 0 and alpha > 0");
  ConeMetricSample s;
  s.r = r;
  s.theta = theta;
  s.h = h;
  s.alpha = alpha;
  s.g_rr = 1.0;
  double sh = std::sinh(r);
  s.g_tt = (alpha / (2 * kPi)) * (alpha / (2 * kPi)) * sh * sh;
  double ch = std::cosh(r);
  s.g_hh = ch * ch;
  return s;
}

cd cusp_shape_tau(const DevelopedTorus& dev) {
  if (std::abs(dev.a) < 1e-12) throw std::domain_error("degenerate torus development (|a| ~ 0)");
  return dev.b / dev.a;
}

void attach_cusp_shapes(SolveResult& res, const IdealTriangulation& T, const SolveOptions& opts) {
  res.cusp_complete.assign(res.u.size(), false);
  res.tau.assign(res.u.size(), cd(0, 0));
  for (size_t c = 0; c < res.u.size(); ++c) {
    if (std::abs(res.u[c]) > opts.u_zero_tol) continue;
    res.cusp_complete[c] = true;
    DevelopedTorus dev = develop_torus(T, static_cast<int>(c), res.shapes);
    res.tau[c] = cusp_shape_tau(dev);
  }
}

}  // namespace dehnfill

#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dehnfill/polyhedral.hpp"
#include "dehnfill/triangulation.hpp"

inline std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline dehnfill::IdealTriangulation load_fixture(const std::string& name) {
  return dehnfill::parse_triangulation(read_file(fixture_path(name)));
}

// --- polyhedral test complexes -----------------------------------------------
//
// Two n-gonal pyramids glued base-to-base and side-to-side. Faces: 0 = base
// (cycle 0..nb-1 seen from outside, i.e. from below), 1..nb = side triangles
// (side i spans base edge (i+1, i) and the apex nb). The base pairing sends
// base vertex j of pyramid A to (off - j) mod nb of pyramid B; triangle a of
// the flattened list (pyramid p, face f) pairs with triangle b at rotation r.

struct PyramidMatch {
  int a, b, r;
};

inline dehnfill::Polyhedron make_pyramid(int nb, int base_cone) {
  dehnfill::Polyhedron P;
  P.vertex_count = nb + 1;
  int apex = nb;
  std::vector<int> base;
  for (int i = 0; i < nb; ++i) base.push_back(i);
  P.faces.push_back(base);
  for (int i = 0; i < nb; ++i) P.faces.push_back({(i + 1) % nb, i, apex});
  P.cone_vertex = apex;
  P.face_cone.push_back(base_cone);
  for (int i = 0; i < nb; ++i) P.face_cone.push_back(apex);
  return P;
}

inline dehnfill::PolyhedralComplex make_bipyramid_complex(const std::string& name, int nb, int bcone, int off,
                                                          const std::vector<PyramidMatch>& ms) {
  dehnfill::PolyhedralComplex C;
  C.name = name;
  C.polyhedra = {make_pyramid(nb, 0), make_pyramid(nb, bcone)};
  dehnfill::FacePairing bp;
  bp.poly_a = 0;
  bp.face_a = 0;
  bp.poly_b = 1;
  bp.face_b = 0;
  for (int j = 0; j < nb; ++j) bp.image.push_back(((off - j) % nb + nb) % nb);
  C.pairings.push_back(bp);
  std::vector<std::pair<int, int>> tris;
  for (int p = 0; p < 2; ++p)
    for (int f = 1; f <= nb; ++f) tris.push_back({p, f});
  for (const auto& m : ms) {
    dehnfill::FacePairing fp;
    fp.poly_a = tris[static_cast<size_t>(m.a)].first;
    fp.face_a = tris[static_cast<size_t>(m.a)].second;
    fp.poly_b = tris[static_cast<size_t>(m.b)].first;
    fp.face_b = tris[static_cast<size_t>(m.b)].second;
    const auto& cb = C.polyhedra[static_cast<size_t>(fp.poly_b)].faces[static_cast<size_t>(fp.face_b)];
    for (int j = 0; j < 3; ++j) fp.image.push_back(cb[static_cast<size_t>(((m.r - j) % 3 + 3) % 3)]);
    C.pairings.push_back(fp);
  }
  return C;
}

// Two ideal tetrahedra glued base-to-base and side-to-side along the
// figure-eight knot pattern; subdivision must reproduce the fig8 fixture.
inline dehnfill::PolyhedralComplex make_fig8_complex() {
  dehnfill::PolyhedralComplex C;
  C.name = "fig8";
  dehnfill::Polyhedron P;
  P.vertex_count = 4;
  // face f = vertices other than f, ordered so that (f, cycle) is even
  P.faces = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
  P.cone_vertex = 0;
  P.face_cone = {1, 0, 0, 0};
  C.polyhedra = {P, P};
  dehnfill::Perm4 g0[4] = {dehnfill::Perm4{{0, 1, 3, 2}}, dehnfill::Perm4{{1, 2, 3, 0}},
                           dehnfill::Perm4{{2, 3, 1, 0}}, dehnfill::Perm4{{2, 1, 0, 3}}};
  for (int f = 0; f < 4; ++f) {
    dehnfill::FacePairing fp;
    fp.poly_a = 0;
    fp.face_a = f;
    fp.poly_b = 1;
    fp.face_b = g0[f].m[static_cast<size_t>(f)];
    for (int v : P.faces[static_cast<size_t>(f)]) fp.image.push_back(g0[f].m[static_cast<size_t>(v)]);
    C.pairings.push_back(fp);
  }
  return C;
}

inline dehnfill::PolyhedralComplex make_whitehead_complex() {
  return make_bipyramid_complex("whitehead", 4, 0, 2, {{0, 4, 0}, {1, 5, 2}, {2, 6, 2}, {3, 7, 1}});
}

inline dehnfill::PolyhedralComplex make_square_flat_complex() {
  return make_bipyramid_complex("pyr4-flat", 4, 0, 1, {{0, 4, 2}, {1, 5, 1}, {2, 6, 0}, {3, 7, 2}});
}

inline dehnfill::PolyhedralComplex make_pentagon_flat_complex() {
  return make_bipyramid_complex("pyr5-flat2", 5, 0, 1, {{0, 9, 1}, {1, 8, 1}, {2, 6, 0}, {3, 7, 0}, {4, 5, 1}});
}

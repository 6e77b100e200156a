#pragma once

#include <array>
#include <string>
#include <vector>

#include "dehnfill/triangulation.hpp"

namespace dehnfill {

// A convex ideal polyhedron given combinatorially: faces as vertex cycles,
// counterclockwise as seen from outside.
struct Polyhedron {
  int vertex_count = 0;
  std::vector<std::vector<int>> faces;
  int cone_vertex = 0;          // apex the polyhedron is coned from
  std::vector<int> face_cone;   // per-face subdivision vertex; must equal
                                // cone_vertex on faces containing it
};

// Identification of face `face_a` of polyhedron `poly_a` with face `face_b` of
// `poly_b`. image[j] is the vertex of poly_b matched with faces[face_a][j];
// the image must run through the face_b cycle in reverse (orientation-reversing).
struct FacePairing {
  int poly_a = 0, face_a = 0;
  int poly_b = 0, face_b = 0;
  std::vector<int> image;
};

struct PolyhedralComplex {
  std::string name;
  std::vector<Polyhedron> polyhedra;
  std::vector<FacePairing> pairings;
};

// Flat tetrahedra reconciling the two fan triangulations of an m-gon (vertices
// 0..m-1 in cyclic order) coned from w on one side and from w2 on the other:
// one tetrahedron (w, w2, b, b+1) per boundary edge disjoint from {w, w2}.
std::vector<std::array<int, 4>> flat_layer(int m, int w, int w2);

// Cone each polyhedron from its apex over the per-face fan triangulations and
// insert flat layers across mismatched pairings. Output tetrahedra are
// relabelled so all gluings are orientation-preserving (odd permutations);
// flat tetrahedra are recorded in flat_labels.
IdealTriangulation subdivide_polyhedral(const PolyhedralComplex& C);

struct BigonChain {
  int cusp = 0;
  std::vector<std::pair<int, int>> corners;  // flat corner triangles (tet, vertex), in chain order
};

struct BigonReport {
  bool ok = true;
  std::vector<BigonChain> chains;
  std::string violation;  // set when !ok
};

// On each cusp torus the zero-area corner triangles of flat tetrahedra must
// form disjoint simple chains (no branching, no closed loop, no cusp vertex
// completely surrounded by flat triangles).
BigonReport validate_bigons(const IdealTriangulation& T);

}  // namespace dehnfill

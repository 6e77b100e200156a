#pragma once

#include <array>
#include <complex>
#include <vector>

#include "dehnfill/solver.hpp"
#include "dehnfill/triangulation.hpp"

namespace dehnfill {

struct AffineMap {
  cd alpha{1, 0}, beta{0, 0};  // w -> alpha*w + beta

  cd operator()(cd w) const { return alpha * w + beta; }
  AffineMap compose(const AffineMap& o) const { return {alpha * o.alpha, alpha * o.beta + beta}; }
  AffineMap inverse() const { return {1.0 / alpha, -beta / alpha}; }
};

struct DevelopedTriangle {
  int tet = 0, vertex = 0;
  std::array<cd, 4> pos{};  // by corner label; pos[vertex] unused
};

struct DevelopedTorus {
  int cusp = 0;
  std::vector<DevelopedTriangle> triangles;
  AffineMap rho_lambda, rho_mu;
  cd a, b;  // translation parts
  // worst closure defect of the corner fans around the vertices of the cusp
  // triangulation (the numeric form of the edge-coincidence consistency)
  double max_edge_residual = 0;
  int base_tet = 0, base_vertex = 0;  // base edge of this corner mapped to [0,1]
};

DevelopedTorus develop_torus(const IdealTriangulation& T, int cusp, const ShapeVector& z);

// a*(exp(u x + v y) - 1)/(exp(u) - 1) for u != 0, else a x + b y
cd torus_dev_map(double x, double y, cd u, cd v, cd a, cd b);

// boundary point of H^3
struct CP1 {
  cd v{};
  bool inf = false;
};

double chordal(const CP1& p, const CP1& q);

struct Mobius {
  cd a{1}, b{0}, c{0}, d{1};  // t -> (a t + b)/(c t + d)
  CP1 operator()(const CP1& p) const;
};

struct PairingCheck {
  int tet = 0, face = 0;  // the smaller side of a non-tree face pairing
  Mobius iso;
  double residual = 0;  // worst edge-class closure defect through this face
};

struct DevelopedTetrahedra {
  std::vector<std::array<CP1, 4>> verts;  // per tetrahedron, by vertex label
  std::vector<PairingCheck> pairings;
  double max_residual = 0;
};

DevelopedTetrahedra develop_tetrahedra(const IdealTriangulation& T, const ShapeVector& z);

// modulus of edge {v,w} recovered from four boundary positions (cross-ratio)
cd cross_ratio_modulus(const std::array<CP1, 4>& p, int v, int w);

// (exp(u x + v y), exp(t + Re(u x + v y))) in C x (0,inf); requires u != 0
std::pair<cd, double> cusp_dev_map(double x, double y, double t, cd u, cd v);

double lobachevsky(double theta);
double tetra_volume(cd z);  // signed
double total_volume(const std::vector<cd>& z);

struct ConeMetricSample {
  double r, theta, h;
  double g_rr, g_tt, g_hh;
  double alpha;
};
ConeMetricSample cone_metric(double r, double theta, double h, double alpha);

// tau = b/a; throws on degenerate development
cd cusp_shape_tau(const DevelopedTorus& dev);

// fill res.cusp_complete / res.tau from torus developments at complete cusps
void attach_cusp_shapes(SolveResult& res, const IdealTriangulation& T, const SolveOptions& opts = {});

}  // namespace dehnfill

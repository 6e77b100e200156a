#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dehnfill/perm.hpp"

namespace dehnfill {

// The six edges of a tetrahedron, indexed 0..5.
inline constexpr std::array<std::array<int, 2>, 6> kEdges = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Opposite-edge pair an edge belongs to: pair 0 = {01,23}, pair 1 = {02,13}, pair 2 = {03,12}.
inline constexpr std::array<int, 6> kPairOfEdge = {0, 1, 2, 2, 1, 0};

inline int edge_index(int a, int b) {
  static constexpr int tbl[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return tbl[a][b];
}

// Modulus forms as signed monomials d0 * z^d1 * (1-z)^d2:
// type 0: z, type 1: 1/(1-z), type 2: 1-1/z.
struct ModulusForm {
  int d0, d1, d2;
};
inline constexpr std::array<ModulusForm, 3> kModulusForm = {{{+1, 1, 0}, {+1, 0, -1}, {-1, -1, 1}}};

// The modulus form carried by edge e of a tetrahedron whose z sits on pair `edge_pair`.
inline int mod_type(int edge_pair, int e) { return ((kPairOfEdge[e] - edge_pair) % 3 + 3) % 3; }

struct TetGluing {
  std::array<int, 4> neighbors{-1, -1, -1, -1};  // face f glues to neighbors[f]
  std::array<Perm4, 4> gluings;                  // vertex w of this tet maps to gluings[f][w]
  int edge_pair = 0;                             // which opposite-edge pair carries z (0 = "01|23")
};

struct EdgeClass {
  int id = 0;
  std::vector<std::pair<int, int>> incidences;  // (tetrahedron, edge index 0..5), in walk order
  std::array<int, 2> endpoint_cusps{-1, -1};
};

// One step of a transverse curve through a corner triangle (t,v): enter through
// side `enter`, exit through side `exit`, cutting off the corner at vertex `corner`.
struct CornerTraversal {
  int tet, vertex, enter, exit, corner;
  bool operator==(const CornerTraversal&) const = default;
};

struct CuspCurve {
  int cusp = 0;
  std::string tag;  // "lambda" or "mu"
  std::vector<CornerTraversal> steps;
  bool operator==(const CuspCurve&) const = default;
};

struct CuspTorus {
  int id = 0;
  std::vector<std::pair<int, int>> corners;  // (tetrahedron, ideal vertex)
  int vertex_count = 0;                      // vertex classes of the induced triangulation
  int euler = 0;                             // must be 0
};

struct EulerReport {
  int vertices, edges, faces, tets;
  bool ok;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IdealTriangulation {
 public:
  // full_validation additionally requires odd gluing permutations and torus cusp
  // links; combinatorial queries (edge classes, Euler data) work without it.
  static IdealTriangulation build(std::string name, std::vector<TetGluing> tets,
                                  std::vector<int> flat_labels = {},
                                  std::vector<CuspCurve> explicit_curves = {},
                                  bool full_validation = true);

  const std::string& name() const { return name_; }
  int n() const { return static_cast<int>(tets_.size()); }
  int k() const { return k_; }
  const std::vector<TetGluing>& tetrahedra() const { return tets_; }
  const std::vector<int>& flat_labels() const { return flat_labels_; }
  bool is_flat(int t) const;

  const std::vector<EdgeClass>& edge_classes() const { return edge_classes_; }
  const std::vector<CuspTorus>& cusp_tori() const { return cusp_tori_; }
  int cusp_of(int t, int v) const { return cusp_of_[static_cast<size_t>(4 * t + v)]; }
  // vertex classes of the cusp triangulations: orbits of (t, v, w), w != v
  int vertex_class(int t, int v, int w) const;
  int n_vertex_classes() const { return n_vertex_classes_; }

  EulerReport euler_report() const;

  int mod_type_of_edge(int t, int e) const { return mod_type(tets_[static_cast<size_t>(t)].edge_pair, e); }

  // crossing side f of corner triangle (t,v): returns (t2, v2, f2)
  std::tuple<int, int, int> side_adjacent(int t, int v, int f) const;

  // peripheral basis (lambda_i, mu_i) for a cusp, as transverse curves; auto
  // construction is deterministic, explicit file curves take precedence
  const std::pair<CuspCurve, CuspCurve>& peripheral_basis(int cusp) const;
  // algebraic intersection number of (lambda, mu) on the cusp torus
  int intersection_number(int cusp) const;

  std::string serialize() const;

 private:
  IdealTriangulation() = default;
  void derive();
  void validate_structure() const;
  void validate_links() const;
  void build_peripheral_bases();

  std::string name_;
  std::vector<TetGluing> tets_;
  std::vector<int> flat_labels_;
  std::vector<CuspCurve> explicit_curves_;
  bool full_validation_ = true;

  std::vector<EdgeClass> edge_classes_;
  std::vector<int> cusp_of_;  // 4t+v -> cusp id
  int k_ = 0;
  std::vector<int> vertex_class_;  // 16t+4v+w -> class id (w==v unused)
  int n_vertex_classes_ = 0;
  std::vector<CuspTorus> cusp_tori_;
  std::vector<std::pair<CuspCurve, CuspCurve>> bases_;
  std::vector<int> intersection_;
};

IdealTriangulation parse_triangulation(const std::string& text);
std::string normalize(const std::string& text);

}  // namespace dehnfill

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dehnfill/exact.hpp"
#include "dehnfill/triangulation.hpp"

namespace dehnfill {

// Theta = (Theta1 | Theta2): one row per edge class, exponents of z_j and
// (1-z_j) in the product-form consistency equation; eps is the row sign.
struct ExponentMatrix {
  IntMatrix theta1, theta2;  // each n_edges x n
  std::vector<int> eps;      // +1 / -1

  IntMatrix joined() const;  // n_edges x 2n, [theta1 | theta2]
};

struct IncidenceMatrix {
  IntMatrix x;  // k x n_edges, entries in {0,1,2}
};

// A completeness/holonomy row evaluating as sign * prod z_j^a_j (1-z_j)^b_j.
struct CuspRow {
  int cusp = 0;
  std::string tag;
  std::vector<long long> a, b;
  int sign = 1;
};

struct XThetaReport {
  bool ok = true;
  int row = -1, col = -1;  // first nonzero entry of X*Theta if any
  std::string which;       // "theta1" or "theta2"
};

struct GluingSystem {
  int n = 0, k = 0;
  ExponentMatrix theta;
  IncidenceMatrix X;
  std::vector<std::pair<CuspRow, CuspRow>> cusp_rows;  // (lambda, mu) per cusp
  std::vector<int> selected;                           // independent edge rows, size <= n-k
  bool rank_deficient = false;                         // rank Theta < n-k (flagged, see spec)
};

// Integer constants pinning the log-form equations to a base solution:
// edge row m reads  sum = i*pi*(2 r[m] + (1-eps_m)/2),
// cusp row  reads   sum = i*pi*(2 c + (1-sign)/2), u := sum - that.
struct LogConstants {
  std::vector<long long> r;                             // per edge class
  std::vector<std::pair<long long, long long>> cusp_c;  // per cusp (lambda, mu)
};

ExponentMatrix build_edge_rows(const IdealTriangulation& T);
IncidenceMatrix build_incidence_X(const IdealTriangulation& T);
XThetaReport check_XTheta_zero(const GluingSystem& s);
std::vector<int> select_independent_edge_rows(const GluingSystem& s, bool* rank_deficient = nullptr);
CuspRow build_cusp_row(const IdealTriangulation& T, const CuspCurve& curve);

// full assembly; verifies X*Theta = 0 and rank X = k
GluingSystem assemble_system(const IdealTriangulation& T);

class ShapeVector;  // solver.hpp

// integers within `tol` (default 1e-6) of the rounding candidates at z0;
// throws ValidationError on a non-integral candidate
LogConstants compute_log_constants(const GluingSystem& s, const ShapeVector& z0, double tol = 1e-6);

std::complex<double> eval_cusp_row(const CuspRow& row, const std::vector<std::complex<double>>& z);

}  // namespace dehnfill

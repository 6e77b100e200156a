#pragma once

#include <complex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "dehnfill/equations.hpp"
#include "dehnfill/triangulation.hpp"

namespace dehnfill {

using cd = std::complex<double>;

// Shape parameters with continuously tracked logarithm branches.
class ShapeVector {
 public:
  ShapeVector() = default;
  // principal branches (arg in (-pi, pi], real-flat convention arg = pi for
  // negative reals, 0 for positive)
  static ShapeVector principal(std::vector<cd> z);

  int n() const { return static_cast<int>(z_.size()); }
  const std::vector<cd>& z() const { return z_; }
  const std::vector<cd>& log_z() const { return log_z_; }
  const std::vector<cd>& log_w() const { return log_w_; }  // log(1 - z)

  // move to znew tracking branches by continuity; false when a component
  // crosses a branch cut ambiguously (ratio on the negative real axis or the
  // step is too large to track)
  bool advance_to(const std::vector<cd>& znew);

 private:
  std::vector<cd> z_, log_z_, log_w_;
};

std::tuple<cd, cd, cd> moduli_triple(cd z);

struct GeneralizedCoefficient {
  bool complete = true;
  double p = 0, q = 0, r = 1;

  static GeneralizedCoefficient infinity() { return {}; }
  // validates coprime integer (p,q); non-coprime input is normalized into r
  // with warning_out set
  static GeneralizedCoefficient filling(double p, double q, double r = 1.0, std::string* warning_out = nullptr);
  double cone_angle() const;  // 2*pi / r
};

using FillingTarget = std::vector<GeneralizedCoefficient>;

struct SolveOptions {
  double tol = 1e-12;
  int max_iter = 100;
  int max_halvings = 30;
  double degenerate_disk = 1e-8;
  double u_zero_tol = 1e-9;
  double flat_tol = 1e-9;
};

struct SolveResult {
  bool converged = false;
  std::string error;
  double condition_estimate = 0;  // reported when the Jacobian is singular

  ShapeVector shapes;
  std::vector<cd> u, v;  // per cusp
  double residual = 0;
  int iterations = 0;
  int n_pos = 0, n_flat = 0, n_neg = 0;
  double volume = 0;
  double dropped_row_residual = 0;
  bool unverified_branch = false;  // converged off any continuously tracked path
  std::vector<std::string> warnings;

  // filled by developer::attach_cusp_shapes at complete cusps
  std::vector<bool> cusp_complete;
  std::vector<cd> tau;
};

Eigen::VectorXcd eval_residuals(const ShapeVector& z, const GluingSystem& sys, const LogConstants& lc,
                                const FillingTarget& target);
std::pair<cd, cd> holonomy_uv(const ShapeVector& z, const GluingSystem& sys, const LogConstants& lc, int cusp);
Eigen::MatrixXcd jacobian(const ShapeVector& z, const GluingSystem& sys, const FillingTarget& target);

SolveResult newton_solve(const ShapeVector& initial, const GluingSystem& sys, const LogConstants& lc,
                         const FillingTarget& target, const SolveOptions& opts = {});

// complete solve from z_j = i: bootstraps the log constants at the starting
// point, then recomputes them strictly at the solution
std::pair<SolveResult, LogConstants> solve_complete(const GluingSystem& sys, const SolveOptions& opts = {});

// infinity when |u| <= tol, else the real pair (P,Q) with P u + Q v = 2 pi i
struct RecoveredFilling {
  bool complete = true;
  double P = 0, Q = 0;
};
RecoveredFilling filling_map_g(const SolveResult& res, int cusp, double u_zero_tol = 1e-9);

// 2 pi i / (P + tau Q) for g = r*(p,q) (using the real pair P = r p, Q = r q), 0 for infinity
cd phi_map(cd tau, const GeneralizedCoefficient& g);

struct SweepRow {
  GeneralizedCoefficient g;  // target on the swept cusp
  SolveResult result;
};

struct SweepOptions {
  int pq_min = -8, pq_max = 8;
  std::vector<double> cone_r;  // if nonempty, sweep these r per (p,q), in the given order
  int jobs = 1;
  SolveOptions solve;
};

// sweep one cusp over coprime (p,q) in the box (plus the infinity row first),
// processing shells of decreasing |p|+|q| and seeding each cell from the
// nearest solved cell of an earlier shell
std::vector<SweepRow> sweep(const GluingSystem& sys, const LogConstants& lc, const SolveResult& complete,
                            int cusp, const SweepOptions& opts);

}  // namespace dehnfill

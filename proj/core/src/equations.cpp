#include "dehnfill/equations.hpp"

#include <cmath>
#include <numbers>

#include "dehnfill/solver.hpp"

namespace dehnfill {

IntMatrix ExponentMatrix::joined() const {
  IntMatrix out(theta1.size());
  for (size_t m = 0; m < theta1.size(); ++m) {
    out[m] = theta1[m];
    out[m].insert(out[m].end(), theta2[m].begin(), theta2[m].end());
  }
  return out;
}

ExponentMatrix build_edge_rows(const IdealTriangulation& T) {
  const int n = T.n();
  const auto& cls = T.edge_classes();
  ExponentMatrix em;
  em.theta1.assign(cls.size(), std::vector<long long>(static_cast<size_t>(n), 0));
  em.theta2.assign(cls.size(), std::vector<long long>(static_cast<size_t>(n), 0));
  em.eps.assign(cls.size(), 1);
  for (size_t m = 0; m < cls.size(); ++m) {
    for (auto [t, e] : cls[m].incidences) {
      const ModulusForm& d = kModulusForm[static_cast<size_t>(T.mod_type_of_edge(t, e))];
      em.theta1[m][static_cast<size_t>(t)] += d.d1;
      em.theta2[m][static_cast<size_t>(t)] += d.d2;
      em.eps[m] *= d.d0;
    }
  }
  return em;
}

IncidenceMatrix build_incidence_X(const IdealTriangulation& T) {
  const auto& cls = T.edge_classes();
  IncidenceMatrix X;
  X.x.assign(static_cast<size_t>(T.k()), std::vector<long long>(cls.size(), 0));
  for (size_t m = 0; m < cls.size(); ++m) {
    auto [t, e] = cls[m].incidences.front();
    X.x[static_cast<size_t>(T.cusp_of(t, kEdges[static_cast<size_t>(e)][0]))][m] += 1;
    X.x[static_cast<size_t>(T.cusp_of(t, kEdges[static_cast<size_t>(e)][1]))][m] += 1;
  }
  return X;
}

XThetaReport check_XTheta_zero(const GluingSystem& s) {
  XThetaReport rep;
  for (const auto& [which, th] : {std::pair{"theta1", &s.theta.theta1}, std::pair{"theta2", &s.theta.theta2}}) {
    auto prod = exact_product(s.X.x, *th);
    for (size_t i = 0; i < prod.size(); ++i)
      for (size_t j = 0; j < prod[i].size(); ++j)
        if (prod[i][j] != 0) {
          rep.ok = false;
          rep.row = static_cast<int>(i);
          rep.col = static_cast<int>(j);
          rep.which = which;
          return rep;
        }
  }
  return rep;
}

std::vector<int> select_independent_edge_rows(const GluingSystem& s, bool* rank_deficient) {
  auto sel = independent_rows(s.theta.joined(), s.n - s.k);
  if (rank_deficient) *rank_deficient = static_cast<int>(sel.size()) < s.n - s.k;
  return sel;
}

CuspRow build_cusp_row(const IdealTriangulation& T, const CuspCurve& curve) {
  CuspRow row;
  row.cusp = curve.cusp;
  row.tag = curve.tag;
  row.a.assign(static_cast<size_t>(T.n()), 0);
  row.b.assign(static_cast<size_t>(T.n()), 0);
  for (const CornerTraversal& s : curve.steps) {
    // corner on the right of the curve iff (vertex, enter, exit, corner) is even
    int sigma = tuple_parity(s.vertex, s.enter, s.exit, s.corner) == 0 ? -1 : +1;
    int e = edge_index(s.vertex, s.corner);
    const ModulusForm& d = kModulusForm[static_cast<size_t>(T.mod_type_of_edge(s.tet, e))];
    row.a[static_cast<size_t>(s.tet)] += sigma * d.d1;
    row.b[static_cast<size_t>(s.tet)] += sigma * d.d2;
    row.sign *= d.d0;  // d0^sigma == d0 for sigma = +-1
  }
  return row;
}

GluingSystem assemble_system(const IdealTriangulation& T) {
  GluingSystem s;
  s.n = T.n();
  s.k = T.k();
  s.theta = build_edge_rows(T);
  s.X = build_incidence_X(T);
  auto xt = check_XTheta_zero(s);
  if (!xt.ok)
    throw ValidationError("X*Theta is nonzero at (" + std::to_string(xt.row) + "," + std::to_string(xt.col) +
                          ") in " + xt.which + ": corrupt assembly");
  if (exact_rank(s.X.x) != s.k) throw ValidationError("incidence matrix rank differs from cusp count");
  s.selected = select_independent_edge_rows(s, &s.rank_deficient);
  for (int c = 0; c < s.k; ++c) {
    const auto& [lam, mu] = T.peripheral_basis(c);
    s.cusp_rows.emplace_back(build_cusp_row(T, lam), build_cusp_row(T, mu));
  }
  return s;
}

std::complex<double> eval_cusp_row(const CuspRow& row, const std::vector<std::complex<double>>& z) {
  std::complex<double> val(row.sign, 0);
  for (size_t j = 0; j < z.size(); ++j)
    val *= std::pow(z[j], static_cast<double>(row.a[j])) * std::pow(1.0 - z[j], static_cast<double>(row.b[j]));
  return val;
}

namespace {

constexpr double kPi = std::numbers::pi;

std::complex<double> log_sum(const std::vector<long long>& a, const std::vector<long long>& b,
                             const ShapeVector& z) {
  std::complex<double> s = 0;
  for (size_t j = 0; j < a.size(); ++j)
    s += static_cast<double>(a[j]) * z.log_z()[j] + static_cast<double>(b[j]) * z.log_w()[j];
  return s;
}

long long round_constant(std::complex<double> val, int sign, double tol, const std::string& what) {
  std::complex<double> cand = (val / std::complex<double>(0, kPi) - (1.0 - sign) / 2.0) / 2.0;
  long long c = std::llround(cand.real());
  if (tol > 0 && std::abs(cand - static_cast<double>(c)) > tol)
    throw ValidationError("non-integral log-branch constant for " + what +
                          ": base solution or branch choice invalid");
  return c;
}

}  // namespace

LogConstants compute_log_constants(const GluingSystem& s, const ShapeVector& z0, double tol) {
  LogConstants lc;
  for (size_t m = 0; m < s.theta.theta1.size(); ++m)
    lc.r.push_back(round_constant(log_sum(s.theta.theta1[m], s.theta.theta2[m], z0), s.theta.eps[m], tol,
                                  "edge row " + std::to_string(m)));
  for (size_t c = 0; c < s.cusp_rows.size(); ++c) {
    const auto& [lam, mu] = s.cusp_rows[c];
    lc.cusp_c.emplace_back(
        round_constant(log_sum(lam.a, lam.b, z0), lam.sign, tol, "cusp " + std::to_string(c) + " lambda"),
        round_constant(log_sum(mu.a, mu.b, z0), mu.sign, tol, "cusp " + std::to_string(c) + " mu"));
  }
  return lc;
}

}  // namespace dehnfill

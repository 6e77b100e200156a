#include "dehnfill/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>

#include "dehnfill/developer.hpp"

namespace dehnfill {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cd kIPi(0, std::numbers::pi);
}  // namespace

// ---------------------------------------------------------------------------
// ShapeVector
// ---------------------------------------------------------------------------

ShapeVector ShapeVector::principal(std::vector<cd> z) {
  ShapeVector s;
  s.z_ = std::move(z);
  s.log_z_.reserve(s.z_.size());
  s.log_w_.reserve(s.z_.size());
  for (cd zj : s.z_) {
    // std::log is principal with arg in (-pi, pi]; negative reals get arg pi,
    // which is the real-flat convention
    s.log_z_.push_back(std::log(zj));
    s.log_w_.push_back(std::log(1.0 - zj));
  }
  return s;
}

bool ShapeVector::advance_to(const std::vector<cd>& znew) {
  auto track = [](cd oldv, cd newv, cd& logv) {
    cd ratio = newv / oldv;
    if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag())) return false;
    if (ratio.real() <= 0 && std::abs(ratio.imag()) < 1e-14 * std::abs(ratio.real())) return false;
    double darg = std::arg(ratio);
    if (std::abs(darg) > 3.0 * kPi / 4.0) return false;  // too large to track
    cd acc = logv + std::log(ratio);
    // resync: exact principal log on the continued branch
    cd pr = std::log(newv);
    double kwind = std::round((acc.imag() - pr.imag()) / (2 * kPi));
    logv = pr + cd(0, 2 * kPi * kwind);
    return true;
  };
  std::vector<cd> lz = log_z_, lw = log_w_;
  for (size_t j = 0; j < z_.size(); ++j) {
    if (!track(z_[j], znew[j], lz[j])) return false;
    if (!track(1.0 - z_[j], 1.0 - znew[j], lw[j])) return false;
  }
  z_ = znew;
  log_z_ = std::move(lz);
  log_w_ = std::move(lw);
  return true;
}

std::tuple<cd, cd, cd> moduli_triple(cd z) {
  if (z == cd(0, 0) || z == cd(1, 0)) throw std::domain_error("degenerate shape parameter");
  return {z, 1.0 / (1.0 - z), 1.0 - 1.0 / z};
}

// ---------------------------------------------------------------------------
// filling coefficients
// ---------------------------------------------------------------------------

GeneralizedCoefficient GeneralizedCoefficient::filling(double p, double q, double r, std::string* warning_out) {
  if (!(r > 0)) throw std::invalid_argument("cone parameter r must be positive");
  if (std::abs(p - std::round(p)) > 1e-9 || std::abs(q - std::round(q)) > 1e-9)
    throw std::invalid_argument("filling coefficients p,q must be integers");
  long long ip = std::llround(p), iq = std::llround(q);
  if (ip == 0 && iq == 0) throw std::invalid_argument("filling coefficients (0,0) are invalid");
  long long g = std::gcd(std::llabs(ip), std::llabs(iq));
  if (g > 1) {
    if (warning_out)
      *warning_out = "non-coprime filling (" + std::to_string(ip) + "," + std::to_string(iq) +
                     ") normalized to cone structure " + std::to_string(g) + "*(" + std::to_string(ip / g) +
                     "," + std::to_string(iq / g) + ")";
    ip /= g;
    iq /= g;
    r *= static_cast<double>(g);
  }
  GeneralizedCoefficient out;
  out.complete = false;
  out.p = static_cast<double>(ip);
  out.q = static_cast<double>(iq);
  out.r = r;
  return out;
}

double GeneralizedCoefficient::cone_angle() const { return 2 * kPi / r; }

// ---------------------------------------------------------------------------
// residuals / Jacobian
// ---------------------------------------------------------------------------

namespace {

cd row_log_sum(const std::vector<long long>& a, const std::vector<long long>& b, const ShapeVector& z) {
  cd s = 0;
  for (size_t j = 0; j < a.size(); ++j)
    s += static_cast<double>(a[j]) * z.log_z()[j] + static_cast<double>(b[j]) * z.log_w()[j];
  return s;
}

cd row_target(long long c, int sign) { return kIPi * (2.0 * static_cast<double>(c) + (1.0 - sign) / 2.0); }

}  // namespace

std::pair<cd, cd> holonomy_uv(const ShapeVector& z, const GluingSystem& sys, const LogConstants& lc, int cusp) {
  const auto& [lam, mu] = sys.cusp_rows[static_cast<size_t>(cusp)];
  const auto& [cl, cm] = lc.cusp_c[static_cast<size_t>(cusp)];
  cd u = row_log_sum(lam.a, lam.b, z) - row_target(cl, lam.sign);
  cd v = row_log_sum(mu.a, mu.b, z) - row_target(cm, mu.sign);
  return {u, v};
}

Eigen::VectorXcd eval_residuals(const ShapeVector& z, const GluingSystem& sys, const LogConstants& lc,
                                const FillingTarget& target) {
  const int rows = static_cast<int>(sys.selected.size()) + sys.k;
  Eigen::VectorXcd F(rows);
  int i = 0;
  for (int m : sys.selected) {
    F(i++) = row_log_sum(sys.theta.theta1[static_cast<size_t>(m)], sys.theta.theta2[static_cast<size_t>(m)], z) -
             row_target(lc.r[static_cast<size_t>(m)], sys.theta.eps[static_cast<size_t>(m)]);
  }
  for (int c = 0; c < sys.k; ++c) {
    auto [u, v] = holonomy_uv(z, sys, lc, c);
    const GeneralizedCoefficient& g = target[static_cast<size_t>(c)];
    if (g.complete)
      F(i++) = u;
    else
      F(i++) = g.p * u + g.q * v - cd(0, 2 * kPi) / g.r;
  }
  return F;
}

Eigen::MatrixXcd jacobian(const ShapeVector& z, const GluingSystem& sys, const FillingTarget& target) {
  const int rows = static_cast<int>(sys.selected.size()) + sys.k;
  const int n = sys.n;
  Eigen::MatrixXcd J(rows, n);
  auto drow = [&](const std::vector<long long>& a, const std::vector<long long>& b, int j) {
    return static_cast<double>(a[static_cast<size_t>(j)]) / z.z()[static_cast<size_t>(j)] +
           static_cast<double>(b[static_cast<size_t>(j)]) / (z.z()[static_cast<size_t>(j)] - 1.0);
  };
  int i = 0;
  for (int m : sys.selected) {
    for (int j = 0; j < n; ++j)
      J(i, j) = drow(sys.theta.theta1[static_cast<size_t>(m)], sys.theta.theta2[static_cast<size_t>(m)], j);
    ++i;
  }
  for (int c = 0; c < sys.k; ++c) {
    const auto& [lam, mu] = sys.cusp_rows[static_cast<size_t>(c)];
    const GeneralizedCoefficient& g = target[static_cast<size_t>(c)];
    for (int j = 0; j < n; ++j) {
      if (g.complete)
        J(i, j) = drow(lam.a, lam.b, j);
      else
        J(i, j) = g.p * drow(lam.a, lam.b, j) + g.q * drow(mu.a, mu.b, j);
    }
    ++i;
  }
  return J;
}

// ---------------------------------------------------------------------------
// Newton
// ---------------------------------------------------------------------------

namespace {

void census(const ShapeVector& z, double flat_tol, SolveResult& res) {
  res.n_pos = res.n_flat = res.n_neg = 0;
  for (cd zj : z.z()) {
    if (zj.imag() > flat_tol)
      ++res.n_pos;
    else if (zj.imag() < -flat_tol)
      ++res.n_neg;
    else
      ++res.n_flat;
  }
}

void finalize(SolveResult& res, const GluingSystem& sys, const LogConstants& lc, const SolveOptions& opts) {
  res.u.clear();
  res.v.clear();
  for (int c = 0; c < sys.k; ++c) {
    auto [u, v] = holonomy_uv(res.shapes, sys, lc, c);
    res.u.push_back(u);
    res.v.push_back(v);
    bool uz = std::abs(u) <= opts.u_zero_tol, vz = std::abs(v) <= opts.u_zero_tol;
    if (uz != vz) res.warnings.push_back("u/v completeness mismatch at cusp " + std::to_string(c));
  }
  census(res.shapes, opts.flat_tol, res);
  res.volume = total_volume(res.shapes.z());
  // dropped edge rows must follow from the selected ones
  double worst = 0;
  for (size_t m = 0; m < sys.theta.theta1.size(); ++m) {
    if (std::find(sys.selected.begin(), sys.selected.end(), static_cast<int>(m)) != sys.selected.end()) continue;
    cd r = row_log_sum(sys.theta.theta1[m], sys.theta.theta2[m], res.shapes) -
           row_target(lc.r[m], sys.theta.eps[m]);
    worst = std::max(worst, std::abs(r));
  }
  res.dropped_row_residual = worst;
  if (worst > 10 * opts.tol)
    res.warnings.push_back("dropped edge rows exceed 10x tolerance: " + std::to_string(worst));
}

}  // namespace

SolveResult newton_solve(const ShapeVector& initial, const GluingSystem& sys, const LogConstants& lc,
                         const FillingTarget& target, const SolveOptions& opts) {
  SolveResult res;
  res.shapes = initial;
  if (static_cast<int>(target.size()) != sys.k) {
    res.error = "filling target size differs from cusp count";
    return res;
  }
  if (static_cast<int>(sys.selected.size()) + sys.k != sys.n) {
    res.error = "rank-deficient equation system (rank Theta < n-k); refusing to solve";
    return res;
  }

  Eigen::VectorXcd F = eval_residuals(res.shapes, sys, lc, target);
  double fnorm = F.cwiseAbs().maxCoeff();
  for (int it = 0; it < opts.max_iter; ++it) {
    if (fnorm <= opts.tol) {
      res.converged = true;
      res.residual = fnorm;
      res.iterations = it;
      finalize(res, sys, lc, opts);
      return res;
    }
    Eigen::MatrixXcd J = jacobian(res.shapes, sys, target);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
    if (!lu.isInvertible()) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
      double smin = svd.singularValues().minCoeff(), smax = svd.singularValues().maxCoeff();
      res.error = "singular Jacobian";
      res.condition_estimate = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
      res.residual = fnorm;
      res.iterations = it;
      return res;
    }
    Eigen::VectorXcd dz = lu.solve(-F);
    double step = dz.cwiseAbs().maxCoeff();
    if (step > 2.0) dz *= 2.0 / step;  // keep early iterations inside the tracked region

    bool accepted = false;
    double lam = 1.0;
    for (int h = 0; h <= opts.max_halvings; ++h, lam /= 2) {
      std::vector<cd> zn(res.shapes.z());
      bool valid = true;
      for (int j = 0; j < sys.n; ++j) {
        zn[static_cast<size_t>(j)] += lam * dz(j);
        if (std::abs(zn[static_cast<size_t>(j)]) < opts.degenerate_disk ||
            std::abs(zn[static_cast<size_t>(j)] - 1.0) < opts.degenerate_disk) {
          valid = false;
          break;
        }
      }
      if (!valid) continue;
      ShapeVector trial = res.shapes;
      if (!trial.advance_to(zn)) continue;
      Eigen::VectorXcd Fn = eval_residuals(trial, sys, lc, target);
      double fn = Fn.cwiseAbs().maxCoeff();
      if (fn <= (1 - 0.25 * lam) * fnorm || fn <= opts.tol) {
        res.shapes = std::move(trial);
        F = std::move(Fn);
        fnorm = fn;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.error = "Newton stalled (branch tracking or degenerate shapes rejected every damped step)";
      res.residual = fnorm;
      res.iterations = it;
      return res;
    }
  }
  if (fnorm <= opts.tol) {
    res.converged = true;
    res.residual = fnorm;
    res.iterations = opts.max_iter;
    finalize(res, sys, lc, opts);
    return res;
  }
  res.error = "Newton did not converge within the iteration cap";
  res.residual = fnorm;
  res.iterations = opts.max_iter;
  return res;
}

std::pair<SolveResult, LogConstants> solve_complete(const GluingSystem& sys, const SolveOptions& opts) {
  ShapeVector init = ShapeVector::principal(std::vector<cd>(static_cast<size_t>(sys.n), cd(0, 1)));
  LogConstants boot = compute_log_constants(sys, init, /*tol=*/0);  // rounding bootstrap, no integrality claim
  FillingTarget target(static_cast<size_t>(sys.k), GeneralizedCoefficient::infinity());
  SolveResult res = newton_solve(init, sys, boot, target, opts);
  if (!res.converged) return {res, boot};
  LogConstants lc = compute_log_constants(sys, res.shapes, 1e-6);
  // verify the product-form rows at the solution
  const auto& z = res.shapes.z();
  for (size_t m = 0; m < sys.theta.theta1.size(); ++m) {
    cd p(1, 0);
    for (size_t j = 0; j < z.size(); ++j)
      p *= std::pow(z[j], static_cast<double>(sys.theta.theta1[m][j])) *
           std::pow(1.0 - z[j], static_cast<double>(sys.theta.theta2[m][j]));
    if (std::abs(p - static_cast<double>(sys.theta.eps[m])) > 1e-8)
      res.warnings.push_back("product-form consistency residual at edge " + std::to_string(m));
  }
  for (int c = 0; c < sys.k; ++c) {
    const auto& [lam, mu] = sys.cusp_rows[static_cast<size_t>(c)];
    if (std::abs(eval_cusp_row(lam, z) - 1.0) > 1e-8 || std::abs(eval_cusp_row(mu, z) - 1.0) > 1e-8)
      res.warnings.push_back("completeness holonomy differs from 1 at cusp " + std::to_string(c));
  }
  return {res, lc};
}

RecoveredFilling filling_map_g(const SolveResult& res, int cusp, double u_zero_tol) {
  RecoveredFilling out;
  cd u = res.u[static_cast<size_t>(cusp)], v = res.v[static_cast<size_t>(cusp)];
  if (std::abs(u) <= u_zero_tol) return out;
  // real 2x2 system: P*u + Q*v = 2 pi i
  double det = u.real() * v.imag() - u.imag() * v.real();
  if (std::abs(det) < 1e-300) throw std::domain_error("u and v are real-dependent; filling map undefined");
  out.complete = false;
  out.P = (-v.real() * 2 * kPi) / det;
  out.Q = (u.real() * 2 * kPi) / det;
  return out;
}

cd phi_map(cd tau, const GeneralizedCoefficient& g) {
  if (g.complete) return 0;
  cd denom = g.r * (g.p + tau * g.q);
  return cd(0, 2 * kPi) / denom;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

std::vector<SweepRow> sweep(const GluingSystem& sys, const LogConstants& lc, const SolveResult& complete,
                            int cusp, const SweepOptions& opts) {
  std::vector<SweepRow> rows;
  rows.push_back(SweepRow{GeneralizedCoefficient::infinity(), complete});

  struct Cell {
    long long p, q;
  };
  std::vector<Cell> cells;
  for (long long p = opts.pq_min; p <= opts.pq_max; ++p)
    for (long long q = opts.pq_min; q <= opts.pq_max; ++q) {
      if (p == 0 && q == 0) continue;
      if (std::gcd(std::llabs(p), std::llabs(q)) != 1) continue;
      cells.push_back({p, q});
    }
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    long long sa = std::llabs(a.p) + std::llabs(a.q), sb = std::llabs(b.p) + std::llabs(b.q);
    if (sa != sb) return sa > sb;
    return std::tie(a.p, a.q) < std::tie(b.p, b.q);
  });

  struct Solved {
    long long p, q;
    ShapeVector shapes;
  };
  std::vector<Solved> solved;  // cells from earlier shells only

  auto solve_cell = [&](const Cell& c) {
    // seed: nearest solved cell from earlier shells, else the complete solution
    const ShapeVector* seed = &complete.shapes;
    long long best = -1;
    for (const Solved& s : solved) {
      long long d = (s.p - c.p) * (s.p - c.p) + (s.q - c.q) * (s.q - c.q);
      if (best < 0 || d < best) {
        best = d;
        seed = &s.shapes;
      }
    }
    std::vector<SweepRow> out;
    FillingTarget target(static_cast<size_t>(sys.k), GeneralizedCoefficient::infinity());
    const ShapeVector* cur = seed;
    std::vector<double> rs = opts.cone_r.empty() ? std::vector<double>{1.0} : opts.cone_r;
    for (double r : rs) {
      GeneralizedCoefficient g =
          GeneralizedCoefficient::filling(static_cast<double>(c.p), static_cast<double>(c.q), r);
      target[static_cast<size_t>(cusp)] = g;
      SolveResult res = newton_solve(*cur, sys, lc, target, opts.solve);
      if (!res.converged) {
        // retry from the complete solution; a success here converged off the
        // continuation path, flag it
        SolveResult retry = newton_solve(complete.shapes, sys, lc, target, opts.solve);
        if (retry.converged) {
          retry.unverified_branch = true;
          retry.warnings.push_back("unverified branch: converged only from the base solution seed");
          res = std::move(retry);
        }
      }
      out.push_back(SweepRow{g, std::move(res)});
      if (out.back().result.converged) cur = &out.back().result.shapes;
    }
    return out;
  };

  size_t i = 0;
  while (i < cells.size()) {
    size_t j = i;
    long long shell = std::llabs(cells[i].p) + std::llabs(cells[i].q);
    while (j < cells.size() && std::llabs(cells[j].p) + std::llabs(cells[j].q) == shell) ++j;
    std::vector<std::vector<SweepRow>> shell_rows(j - i);
    int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || j - i == 1) {
      for (size_t c = i; c < j; ++c) shell_rows[c - i] = solve_cell(cells[c]);
    } else {
      std::vector<std::thread> pool;
      std::atomic<size_t> next{i};
      for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
          for (size_t c = next.fetch_add(1); c < j; c = next.fetch_add(1))
            shell_rows[c - i] = solve_cell(cells[c]);
        });
      for (auto& th : pool) th.join();
    }
    for (size_t c = i; c < j; ++c) {
      // the last converged solve of the cell seeds later shells
      for (auto it = shell_rows[c - i].rbegin(); it != shell_rows[c - i].rend(); ++it)
        if (it->result.converged) {
          solved.push_back(Solved{cells[c].p, cells[c].q, it->result.shapes});
          break;
        }
      for (SweepRow& r : shell_rows[c - i]) rows.push_back(std::move(r));
    }
    i = j;
  }
  return rows;
}

}  // namespace dehnfill

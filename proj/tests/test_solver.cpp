#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "dehnfill/equations.hpp"
#include "dehnfill/solver.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace dehnfill;

namespace {

const cd kI(0.0, 1.0);
const cd kZReg(0.5, std::sqrt(3.0) / 2.0);  // exp(i pi/3)

struct Solved {
  GluingSystem sys;
  SolveResult res;
  LogConstants lc;
};

Solved solved_complete(const char* name) {
  Solved s;
  s.sys = assemble_system(load_fixture(name));
  auto [res, lc] = solve_complete(s.sys);
  s.res = res;
  s.lc = lc;
  return s;
}

}  // namespace

TEST_CASE("moduli triple identities") {
  auto [m0, m1, m2] = moduli_triple(cd(0, 1));
  CHECK(std::abs(m0 - cd(0, 1)) < 1e-15);
  CHECK(std::abs(m1 - cd(0.5, 0.5)) < 1e-15);
  CHECK(std::abs(m2 - cd(1, 1)) < 1e-15);
  // product is -1 and the triple cycles z -> 1/(1-z) for any regular z
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> re(-2.0, 3.0), im(0.05, 2.0);
  for (int i = 0; i < 50; ++i) {
    cd z(re(rng), im(rng));
    auto [a, b, c] = moduli_triple(z);
    CHECK(std::abs(a * b * c + 1.0) < 1e-12);
    CHECK(std::abs(std::get<0>(moduli_triple(b)) - b) < 1e-15);
  }
  // the regular shape is the fixed point of the cycle
  auto [r0, r1, r2] = moduli_triple(kZReg);
  CHECK(std::abs(r0 - r1) < 1e-15);
  CHECK(std::abs(r1 - r2) < 1e-15);
}

TEST_CASE("shape vector branch tracking") {
  ShapeVector z = ShapeVector::principal({cd(0.5, 0.5)});
  CHECK(std::abs(z.log_z()[0] - std::log(cd(0.5, 0.5))) < 1e-15);
  CHECK(std::abs(z.log_w()[0] - std::log(cd(0.5, -0.5))) < 1e-15);
  // walk around the origin in small steps: the tracked log gains 2 pi i
  // relative to the principal branch
  ShapeVector w = ShapeVector::principal({cd(0.5, 0.1)});
  const int steps = 200;
  double r = std::abs(cd(0.5, 0.1)), th0 = std::atan2(0.1, 0.5);
  bool ok = true;
  for (int i = 1; i <= steps; ++i) {
    double th = th0 + 2 * M_PI * i / steps;
    ok = ok && w.advance_to({std::polar(r, th)});
  }
  CHECK(ok);
  CHECK(std::abs(w.log_z()[0] - (std::log(cd(0.5, 0.1)) + cd(0, 2 * M_PI))) < 1e-12);
  // an ambiguous jump (ratio across the negative real axis) is refused
  ShapeVector j = ShapeVector::principal({cd(1.0, 1.0)});
  CHECK_FALSE(j.advance_to({cd(-1.0, -1.0)}));
}

TEST_CASE("generalized coefficients validate and normalize") {
  GeneralizedCoefficient g = GeneralizedCoefficient::filling(5, 1);
  CHECK_FALSE(g.complete);
  CHECK(g.p == 5);
  CHECK(g.q == 1);
  CHECK(g.r == 1);
  CHECK(g.cone_angle() == doctest::Approx(2 * M_PI));

  std::string warn;
  GeneralizedCoefficient h = GeneralizedCoefficient::filling(10, 2, 1, &warn);
  CHECK(h.p == 5);
  CHECK(h.q == 1);
  CHECK(h.r == 2);
  CHECK(!warn.empty());
  CHECK(h.cone_angle() == doctest::Approx(M_PI));

  CHECK_THROWS_AS(GeneralizedCoefficient::filling(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(GeneralizedCoefficient::filling(1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(GeneralizedCoefficient::filling(1, 1, -2), std::invalid_argument);
  CHECK(GeneralizedCoefficient::infinity().complete);
}

TEST_CASE("complete structures of the reference census") {
  Solved f8 = solved_complete("fig8.json");
  REQUIRE(f8.res.converged);
  CHECK(f8.res.residual < 1e-12);
  for (const cd& z : f8.res.shapes.z()) CHECK(std::abs(z - kZReg) < 1e-10);
  CHECK(f8.res.volume == doctest::Approx(2.029883212819307).epsilon(1e-12));
  CHECK(f8.res.n_pos == 2);
  CHECK(f8.res.n_flat == 0);
  CHECK(f8.res.n_neg == 0);
  CHECK(std::abs(f8.res.u[0]) < 1e-9);
  CHECK(std::abs(f8.res.v[0]) < 1e-9);
  CHECK(f8.res.iterations < 20);
  CHECK_FALSE(f8.res.unverified_branch);
  CHECK(f8.res.dropped_row_residual < 1e-12);

  Solved sis = solved_complete("fig8_sister.json");
  REQUIRE(sis.res.converged);
  for (const cd& z : sis.res.shapes.z()) CHECK(std::abs(z - kZReg) < 1e-10);
  CHECK(sis.res.volume == doctest::Approx(2.029883212819307).epsilon(1e-12));

  Solved two = solved_complete("twocusp.json");
  REQUIRE(two.res.converged);
  CHECK(two.res.volume == doctest::Approx(4.059766425638614).epsilon(1e-12));
  for (const cd& z : two.res.shapes.z()) CHECK(std::abs(z - kZReg) < 1e-10);
  CHECK(two.res.u.size() == 2);
  for (const cd& u : two.res.u) CHECK(std::abs(u) < 1e-9);
}

TEST_CASE("newton is idempotent at a solution") {
  Solved s = solved_complete("fig8.json");
  FillingTarget complete(1, GeneralizedCoefficient::infinity());
  SolveResult again = newton_solve(s.res.shapes, s.sys, s.lc, complete, {});
  CHECK(again.converged);
  CHECK(again.iterations <= 1);
  CHECK(again.residual < 1e-12);
}

TEST_CASE("the complete solution is isolated under perturbation") {
  Solved s = solved_complete("fig8.json");
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> d(-1e-3, 1e-3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cd> z0 = s.res.shapes.z();
    for (cd& z : z0) z += cd(d(rng), d(rng));
    SolveResult back = newton_solve(ShapeVector::principal(z0), s.sys, s.lc,
                                    FillingTarget(1, GeneralizedCoefficient::infinity()), {});
    REQUIRE(back.converged);
    for (size_t j = 0; j < z0.size(); ++j) CHECK(std::abs(back.shapes.z()[j] - s.res.shapes.z()[j]) < 1e-10);
  }
}

TEST_CASE("jacobian matches finite differences") {
  Solved s = solved_complete("fig8.json");
  FillingTarget target = {GeneralizedCoefficient::filling(5, 1)};
  std::mt19937 rng(314159);
  std::uniform_real_distribution<double> re(-0.5, 1.5), im(0.2, 1.2);
  const double h = 1e-7;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<cd> z0(2);
    for (cd& z : z0) z = cd(re(rng), im(rng));
    ShapeVector base = ShapeVector::principal(z0);
    Eigen::MatrixXcd J = jacobian(base, s.sys, target);
    Eigen::VectorXcd f0 = eval_residuals(base, s.sys, s.lc, target);
    REQUIRE(J.rows() == f0.size());
    for (int j = 0; j < 2; ++j) {
      std::vector<cd> zp = z0, zm = z0;
      zp[static_cast<size_t>(j)] += h;
      zm[static_cast<size_t>(j)] -= h;
      Eigen::VectorXcd fp = eval_residuals(ShapeVector::principal(zp), s.sys, s.lc, target);
      Eigen::VectorXcd fm = eval_residuals(ShapeVector::principal(zm), s.sys, s.lc, target);
      Eigen::VectorXcd fd = (fp - fm) / (2 * h);
      for (int i = 0; i < J.rows(); ++i) {
        double scale = std::max(1.0, std::abs(J(i, j)));
        CHECK(std::abs(J(i, j) - fd(i)) / scale < 1e-6);
      }
    }
  }
}

TEST_CASE("filled solutions and the recovered filling map") {
  Solved s = solved_complete("fig8.json");
  struct Case {
    double p, q, vol;
  };
  for (const Case& c : {Case{5, 1, 0.9813688288922323}, Case{1, 2, 1.3985088841508069},
                        Case{6, 1, 1.2844853004683543}, Case{7, 1, 1.4637766449272027},
                        Case{-1, 4, 1.858138157143041}}) {
    CAPTURE(c.p);
    CAPTURE(c.q);
    FillingTarget target = {GeneralizedCoefficient::filling(c.p, c.q)};
    SolveResult res = newton_solve(s.res.shapes, s.sys, s.lc, target, {});
    REQUIRE(res.converged);
    CHECK(res.residual < 1e-12);
    CHECK(res.dropped_row_residual < 1e-11);
    CHECK(res.volume == doctest::Approx(c.vol).epsilon(1e-9));
    CHECK(res.n_pos == 2);
    RecoveredFilling rf = filling_map_g(res, 0);
    CHECK_FALSE(rf.complete);
    CHECK(rf.P == doctest::Approx(c.p).epsilon(1e-8));
    CHECK(rf.Q == doctest::Approx(c.q).epsilon(1e-8));
  }
  // the complete solution recovers the point at infinity
  CHECK(filling_map_g(s.res, 0).complete);
}

TEST_CASE("cone solutions with r > 1") {
  Solved s = solved_complete("fig8.json");
  FillingTarget target = {GeneralizedCoefficient::filling(5, 1, 3)};
  SolveResult res = newton_solve(s.res.shapes, s.sys, s.lc, target, {});
  REQUIRE(res.converged);
  auto [u, v] = holonomy_uv(res.shapes, s.sys, s.lc, 0);
  // p u + q v = 2 pi i / r at a cone solution
  CHECK(std::abs(5.0 * u + 1.0 * v - cd(0, 2 * M_PI / 3)) < 1e-10);
  // shapes are closer to the complete ones than the r = 1 solution
  SolveResult r1 = newton_solve(s.res.shapes, s.sys, s.lc, {GeneralizedCoefficient::filling(5, 1)}, {});
  double d3 = 0, d1 = 0;
  for (int j = 0; j < 2; ++j) {
    d3 += std::abs(res.shapes.z()[static_cast<size_t>(j)] - s.res.shapes.z()[static_cast<size_t>(j)]);
    d1 += std::abs(r1.shapes.z()[static_cast<size_t>(j)] - s.res.shapes.z()[static_cast<size_t>(j)]);
  }
  CHECK(d3 < d1);
}

TEST_CASE("phi map identities") {
  CHECK(phi_map(cd(0, 2), GeneralizedCoefficient::infinity()) == cd(0, 0));
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> pq(-20, 20);
  std::uniform_real_distribution<double> tre(-2.0, 2.0), tim(0.3, 3.0);
  int tested = 0;
  while (tested < 1000) {
    int p = pq(rng), q = pq(rng);
    if (p == 0 && q == 0) continue;
    if (std::gcd(p, q) != 1) continue;
    ++tested;
    cd tau(tre(rng), tim(rng));
    double r = 1 + (tested % 4);
    GeneralizedCoefficient g = GeneralizedCoefficient::filling(p, q, r);
    cd phi = phi_map(tau, g);
    // defining identity: p u + q v = 2 pi i / r with u = phi, v = tau phi
    CHECK(std::abs(static_cast<double>(p) * phi + static_cast<double>(q) * (tau * phi) - cd(0, 2 * M_PI / r)) <
          1e-9);
    // uniform bound away from the real axis
    if (q != 0) CHECK(std::abs(phi) <= 2 * M_PI / (r * std::abs(q) * tau.imag()) + 1e-12);
  }
}

TEST_CASE("sweep is deterministic and independent of job count") {
  Solved s = solved_complete("fig8.json");
  SweepOptions o1;
  o1.pq_min = -4;
  o1.pq_max = 4;
  o1.jobs = 1;
  SweepOptions o4 = o1;
  o4.jobs = 4;
  std::vector<SweepRow> r1 = sweep(s.sys, s.lc, s.res, 0, o1);
  std::vector<SweepRow> r4 = sweep(s.sys, s.lc, s.res, 0, o4);
  REQUIRE(r1.size() == r4.size());
  REQUIRE(!r1.empty());
  CHECK(r1[0].g.complete);  // infinity row first
  for (size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].g.complete == r4[i].g.complete);
    CHECK(r1[i].g.p == r4[i].g.p);
    CHECK(r1[i].g.q == r4[i].g.q);
    CHECK(r1[i].result.converged == r4[i].result.converged);
    if (r1[i].result.converged) CHECK(r1[i].result.volume == doctest::Approx(r4[i].result.volume).epsilon(1e-13));
  }
  // coprime cells only, each exactly once
  std::set<std::pair<int, int>> seen;
  for (size_t i = 1; i < r1.size(); ++i) {
    int p = static_cast<int>(r1[i].g.p), q = static_cast<int>(r1[i].g.q);
    CHECK(std::gcd(p, q) == 1);
    CHECK(seen.insert({p, q}).second);
  }
}

TEST_CASE("cone ray approaches the complete structure") {
  Solved s = solved_complete("fig8.json");
  SweepOptions o;
  o.pq_min = -5;
  o.pq_max = 5;
  o.cone_r = {32, 16, 8, 4, 2, 1};
  std::vector<SweepRow> rows = sweep(s.sys, s.lc, s.res, 0, o);
  std::vector<double> dist;  // along decreasing r for (p,q) = (5,1)
  for (const SweepRow& row : rows) {
    if (row.g.complete || row.g.p != 5 || row.g.q != 1) continue;
    REQUIRE(row.result.converged);
    double d = 0;
    for (int j = 0; j < 2; ++j)
      d = std::max(d, std::abs(row.result.shapes.z()[static_cast<size_t>(j)] - s.res.shapes.z()[static_cast<size_t>(j)]));
    dist.push_back(d);
  }
  REQUIRE(dist.size() == 6);
  for (size_t i = 1; i < dist.size(); ++i) CHECK(dist[i] > dist[i - 1]);  // r shrinking, z moving away
  CHECK(dist.front() < 0.05);  // r = 32 is close to complete
}

TEST_CASE("exceptional cells are reported, not mislabeled") {
  Solved s = solved_complete("fig8.json");
  // (1, 0) is a non-hyperbolic filling: either no convergence or a
  // flat/degenerate orientation census, never an all-positive solution
  FillingTarget target = {GeneralizedCoefficient::filling(1, 0)};
  SolveResult res = newton_solve(s.res.shapes, s.sys, s.lc, target, {});
  CHECK((!res.converged || res.n_pos < s.sys.n));
  // (2, 1) converges to a flat solution
  SolveResult flat = newton_solve(s.res.shapes, s.sys, s.lc, {GeneralizedCoefficient::filling(2, 1)}, {});
  if (flat.converged) {
    CHECK(flat.n_pos == 0);
    CHECK(std::abs(flat.volume) < 1e-6);
  }
}

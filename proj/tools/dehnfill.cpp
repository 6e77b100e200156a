// dehnfill: command-line front end for the hyperbolic Dehn filling library.
//
// Subcommands: info, check, solve, sweep, develop. All numeric output uses
// 17 significant digits (lowercase scientific) so results round-trip exactly;
// timings go to stderr to keep stdout byte-deterministic.

#include <chrono>
#include <cinttypes>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dehnfill/developer.hpp"
#include "dehnfill/equations.hpp"
#include "dehnfill/polyhedral.hpp"
#include "dehnfill/solver.hpp"
#include "dehnfill/triangulation.hpp"

using namespace dehnfill;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fnv1a(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string fnum(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

// exact integers (p, q echoes) print without exponent
std::string fint_or_num(double x) {
  if (x == std::llround(x) && std::abs(x) < 1e15) return std::to_string(std::llround(x));
  return fnum(x);
}

std::string jescape(const std::string& s) {
  std::string o = "\"";
  for (char c : s) {
    switch (c) {
      case '"': o += "\\\""; break;
      case '\\': o += "\\\\"; break;
      case '\n': o += "\\n"; break;
      case '\t': o += "\\t"; break;
      case '\r': o += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          o += buf;
        } else {
          o += c;
        }
    }
  }
  return o + "\"";
}

// ordered JSON emitter with fixed float formatting
class JsonBuilder {
 public:
  JsonBuilder& obj() { return open('{'); }
  JsonBuilder& arr() { return open('['); }
  JsonBuilder& end() {
    char c = stack_.back();
    stack_.pop_back();
    out_ += (c == '{') ? '}' : ']';
    fresh_ = false;
    return *this;
  }
  JsonBuilder& key(const std::string& k) {
    comma();
    out_ += jescape(k);
    out_ += ':';
    fresh_ = true;
    return *this;
  }
  JsonBuilder& raw(const std::string& v) {
    comma();
    out_ += v;
    return *this;
  }
  JsonBuilder& str(const std::string& v) { return raw(jescape(v)); }
  JsonBuilder& num(double v) { return raw(std::isfinite(v) ? fnum(v) : jescape(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"))); }
  JsonBuilder& integer(long long v) { return raw(std::to_string(v)); }
  JsonBuilder& boolean(bool v) { return raw(v ? "true" : "false"); }
  JsonBuilder& null() { return raw("null"); }
  JsonBuilder& complex(std::complex<double> v) { return arr().num(v.real()).num(v.imag()).end(); }
  std::string take() { return out_ + "\n"; }

 private:
  JsonBuilder& open(char c) {
    comma();
    out_ += c;
    stack_.push_back(c);
    fresh_ = true;
    return *this;
  }
  void comma() {
    if (!fresh_ && !stack_.empty()) out_ += ',';
    fresh_ = false;
  }
  std::string out_;
  std::string stack_;
  bool fresh_ = true;
};

class StageTimer {
 public:
  explicit StageTimer(std::string name) : name_(std::move(name)), t0_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
    std::fprintf(stderr, "[time] %s: %.1f ms\n", name_.c_str(), dt);
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point t0_;
};

struct Options {
  std::string path, out;
  std::string format;  // per-command default applied later
  std::vector<std::string> fills;
  double tol = 1e-12;
  int max_iter = 100;
  int jobs = 1;
  unsigned long long seed = 0;
  int cusp = 1;
  std::string pq_range = "-8..8";
  std::string cone_r;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Options& o, const std::string& payload) {
  if (o.out.empty()) {
    std::fputs(payload.c_str(), stdout);
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write output file: " + o.out);
    f << payload;
  }
}

FillingTarget parse_fills(const std::vector<std::string>& specs, int k, std::vector<std::string>& warnings) {
  FillingTarget target(static_cast<size_t>(k));  // defaults to all-complete
  for (const std::string& s : specs) {
    size_t colon = s.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--fill", "expected i:p,q[,r], got " + s);
    double vals[3] = {0, 0, 1};
    int nv = 0;
    std::istringstream body(s.substr(colon + 1));
    std::string tok;
    while (std::getline(body, tok, ',')) {
      if (nv >= 3) throw CLI::ValidationError("--fill", "too many components in " + s);
      try {
        vals[nv++] = std::stod(tok);
      } catch (const std::exception&) {
        throw CLI::ValidationError("--fill", "bad number in " + s);
      }
    }
    int cusp = 0;
    try {
      cusp = std::stoi(s.substr(0, colon));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--fill", "bad cusp index in " + s);
    }
    if (nv < 2) throw CLI::ValidationError("--fill", "expected i:p,q[,r], got " + s);
    if (cusp < 1 || cusp > k)
      throw CLI::ValidationError("--fill", "cusp index " + std::to_string(cusp) + " out of range 1.." + std::to_string(k));
    std::string warn;
    try {
      target[static_cast<size_t>(cusp - 1)] = GeneralizedCoefficient::filling(vals[0], vals[1], vals[2], &warn);
    } catch (const std::invalid_argument& e) {
      throw CLI::ValidationError("--fill", e.what());
    }
    if (!warn.empty()) warnings.push_back(warn);
  }
  return target;
}

void header(JsonBuilder& jb, const Options& o, const std::string& digest, const std::string& name) {
  jb.key("version").str(kVersion);
  jb.key("input_digest").str(digest);
  jb.key("seed").integer(static_cast<long long>(o.seed));
  jb.key("name").str(name);
}

void emit_target(JsonBuilder& jb, const FillingTarget& target) {
  jb.key("target").arr();
  for (const auto& g : target) {
    if (g.complete) {
      jb.null();
    } else {
      jb.obj().key("p").raw(fint_or_num(g.p)).key("q").raw(fint_or_num(g.q)).key("r").num(g.r);
      jb.key("cone_angle").num(g.cone_angle()).end();
    }
  }
  jb.end();
}

void emit_solve_result(JsonBuilder& jb, const SolveResult& res, const FillingTarget& target,
                       const std::vector<std::string>& extra_warnings, const SolveOptions& opts) {
  jb.key("converged").boolean(res.converged);
  if (!res.error.empty()) jb.key("error").str(res.error);
  if (res.condition_estimate > 0) jb.key("condition_estimate").num(res.condition_estimate);
  jb.key("iterations").integer(res.iterations);
  jb.key("residual").num(res.residual);
  jb.key("dropped_row_residual").num(res.dropped_row_residual);
  jb.key("shapes").arr();
  for (auto z : res.shapes.z()) jb.complex(z);
  jb.end();
  jb.key("orientation_census").obj();
  jb.key("n_pos").integer(res.n_pos).key("n_flat").integer(res.n_flat).key("n_neg").integer(res.n_neg).end();
  jb.key("volume").num(res.volume);
  jb.key("cusps").arr();
  for (size_t c = 0; c < res.u.size(); ++c) {
    jb.obj();
    jb.key("u").complex(res.u[c]);
    jb.key("v").complex(res.v[c]);
    bool complete = c < res.cusp_complete.size() && res.cusp_complete[c];
    jb.key("complete").boolean(complete);
    jb.key("tau");
    if (complete) {
      jb.complex(res.tau[c]);
    } else {
      jb.null();
    }
    jb.key("recovered_filling");
    if (res.converged) {
      RecoveredFilling rf = filling_map_g(res, static_cast<int>(c), opts.u_zero_tol);
      if (rf.complete) {
        jb.null();
      } else {
        jb.obj().key("p_times_r").num(rf.P).key("q_times_r").num(rf.Q).end();
      }
    } else {
      jb.null();
    }
    if (!target[c].complete) jb.key("cone_angle").num(target[c].cone_angle());
    jb.end();
  }
  jb.end();
  jb.key("unverified_branch").boolean(res.unverified_branch);
  jb.key("warnings").arr();
  for (const auto& w : extra_warnings) jb.str(w);
  for (const auto& w : res.warnings) jb.str(w);
  jb.end();
}

// ---------------------------------------------------------------------------

int cmd_info(const Options& o) {
  std::string bytes = read_file(o.path);
  IdealTriangulation T = [&] {
    StageTimer t("parse");
    return parse_triangulation(bytes);
  }();
  std::string fmt = o.format.empty() ? "text" : o.format;
  std::string payload;
  if (fmt == "json") {
    JsonBuilder jb;
    jb.obj();
    header(jb, o, fnv1a(bytes), T.name());
    jb.key("tetrahedra").integer(T.n());
    jb.key("cusps").integer(T.k());
    jb.key("edge_classes").arr();
    for (const auto& e : T.edge_classes()) jb.integer(static_cast<long long>(e.incidences.size()));
    jb.end();
    jb.key("cusp_triangles").arr();
    for (const auto& ct : T.cusp_tori()) jb.integer(static_cast<long long>(ct.corners.size()));
    jb.end();
    jb.key("flat_labels").arr();
    for (int t : T.flat_labels()) jb.integer(t);
    jb.end();
    jb.end();
    payload = jb.take();
  } else {
    std::ostringstream os;
    os << "name: " << T.name() << "\n";
    os << "tetrahedra: " << T.n() << "\n";
    os << "cusps: " << T.k() << "\n";
    os << "edge classes: " << T.edge_classes().size() << "\n";
    for (const auto& e : T.edge_classes()) os << "  edge " << e.id << ": " << e.incidences.size() << " incidences\n";
    for (const auto& ct : T.cusp_tori()) os << "cusp " << ct.id << ": " << ct.corners.size() << " triangles\n";
    os << "flat labels:";
    if (T.flat_labels().empty()) os << " (none)";
    for (int t : T.flat_labels()) os << " " << t;
    os << "\n";
    payload = os.str();
  }
  emit(o, payload);
  return 0;
}

int cmd_check(const Options& o) {
  std::string bytes = read_file(o.path);
  JsonBuilder jb;
  jb.obj();
  jb.key("version").str(kVersion);
  jb.key("input_digest").str(fnv1a(bytes));
  jb.key("seed").integer(static_cast<long long>(o.seed));
  bool ok = true;
  jb.key("checks").arr();
  auto record = [&](const std::string& name, bool pass, const std::string& detail) {
    jb.obj().key("name").str(name).key("ok").boolean(pass).key("detail").str(detail).end();
    ok = ok && pass;
  };
  try {
    StageTimer timer("check");
    IdealTriangulation T = parse_triangulation(bytes);
    auto er = T.euler_report();
    record("euler", er.ok,
           "V=" + std::to_string(er.vertices) + " E=" + std::to_string(er.edges) + " F=" + std::to_string(er.faces) +
               " T=" + std::to_string(er.tets));
    record("edge_count", static_cast<int>(T.edge_classes().size()) == T.n(),
           std::to_string(T.edge_classes().size()) + " edge classes for n=" + std::to_string(T.n()));
    GluingSystem sys = assemble_system(T);  // throws if X*Theta != 0 or rank X != k
    record("x_theta_zero", true, "exact integer product vanishes");
    record("rank_X", true, "rank over Q equals k=" + std::to_string(sys.k));
    int rth = exact_rank(sys.theta.joined());
    record("rank_Theta", rth <= sys.n - sys.k,
           "rank " + std::to_string(rth) + " <= n-k = " + std::to_string(sys.n - sys.k) +
               (sys.rank_deficient ? " (deficient: fewer deformations than cusps)" : ""));
    bool colsums = true;
    for (int j = 0; j < sys.n && colsums; ++j) {
      long long s1 = 0, s2 = 0;
      for (size_t m = 0; m < sys.theta.theta1.size(); ++m) {
        s1 += sys.theta.theta1[m][static_cast<size_t>(j)];
        s2 += sys.theta.theta2[m][static_cast<size_t>(j)];
      }
      colsums = s1 == 0 && s2 == 0;
    }
    for (size_t m = 0; m < sys.theta.theta1.size() && colsums; ++m) {
      long long sx = 0;
      for (int i = 0; i < sys.k; ++i) sx += sys.X.x[static_cast<size_t>(i)][m];
      colsums = sx == 2;
    }
    record("column_sums", colsums, "Theta columns sum to 0, X columns sum to 2");
    BigonReport br = validate_bigons(T);
    record("bigons", br.ok,
           br.ok ? std::to_string(br.chains.size()) + " flat chain(s)" : br.violation);
    jb.end();
    jb.key("selected_rows").arr();
    for (int m : sys.selected) jb.integer(m);
    jb.end();
  } catch (const ValidationError& e) {
    record("validity", false, e.what());
    jb.end();
    jb.key("selected_rows").arr().end();
  }
  jb.key("ok").boolean(ok);
  jb.end();
  emit(o, jb.take());
  return ok ? 0 : 1;
}

int cmd_solve(const Options& o) {
  std::string bytes = read_file(o.path);
  IdealTriangulation T = parse_triangulation(bytes);
  GluingSystem sys = [&] {
    StageTimer t("assemble");
    return assemble_system(T);
  }();
  std::vector<std::string> warnings;
  FillingTarget target = parse_fills(o.fills, T.k(), warnings);
  SolveOptions sopts;
  sopts.tol = o.tol;
  sopts.max_iter = o.max_iter;

  StageTimer t("solve");
  auto [complete, lc] = solve_complete(sys, sopts);
  SolveResult res = complete;
  bool filled = std::any_of(target.begin(), target.end(), [](const auto& g) { return !g.complete; });
  if (filled && complete.converged) res = newton_solve(complete.shapes, sys, lc, target, sopts);
  if (res.converged) attach_cusp_shapes(res, T, sopts);

  JsonBuilder jb;
  jb.obj();
  header(jb, o, fnv1a(bytes), T.name());
  emit_target(jb, target);
  emit_solve_result(jb, res, target, warnings, sopts);
  jb.end();
  emit(o, jb.take());
  if (!res.converged) {
    std::fprintf(stderr, "solve failed: %s\n", res.error.empty() ? "did not converge" : res.error.c_str());
    return 1;
  }
  return 0;
}

std::pair<int, int> parse_range(const std::string& s) {
  size_t dots = s.find("..");
  if (dots == std::string::npos) throw CLI::ValidationError("--pq-range", "expected a..b, got " + s);
  try {
    int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
    if (a > b) throw CLI::ValidationError("--pq-range", "empty range " + s);
    return {a, b};
  } catch (const std::invalid_argument&) {
    throw CLI::ValidationError("--pq-range", "expected a..b, got " + s);
  }
}

std::vector<double> parse_cone_r(const std::string& s) {
  if (s.empty()) return {};
  size_t dots = s.find(".."), colon = s.find(':');
  if (dots == std::string::npos || colon == std::string::npos || colon < dots)
    throw CLI::ValidationError("--cone-r", "expected r1..r2:steps, got " + s);
  double r1 = 0, r2 = 0;
  int steps = 0;
  try {
    r1 = std::stod(s.substr(0, dots));
    r2 = std::stod(s.substr(dots + 2, colon - dots - 2));
    steps = std::stoi(s.substr(colon + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--cone-r", "bad numbers in " + s);
  }
  if (!(r1 > 0) || !(r2 > 0) || steps < 1) throw CLI::ValidationError("--cone-r", "need r1,r2 > 0 and steps >= 1");
  // geometric spacing from r1 to r2, largest first for continuation from the complete structure
  std::vector<double> out;
  for (int i = 0; i < steps; ++i)
    out.push_back(steps == 1 ? r1 : r1 * std::pow(r2 / r1, static_cast<double>(i) / (steps - 1)));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

int cmd_sweep(const Options& o) {
  std::string bytes = read_file(o.path);
  IdealTriangulation T = parse_triangulation(bytes);
  GluingSystem sys = assemble_system(T);
  if (o.cusp < 1 || o.cusp > T.k())
    throw CLI::ValidationError("--cusp", "index out of range 1.." + std::to_string(T.k()));

  SweepOptions sw;
  std::tie(sw.pq_min, sw.pq_max) = parse_range(o.pq_range);
  sw.cone_r = parse_cone_r(o.cone_r);
  sw.jobs = std::max(1, o.jobs);
  sw.solve.tol = o.tol;
  sw.solve.max_iter = o.max_iter;

  StageTimer t("sweep");
  auto [complete, lc] = solve_complete(sys, sw.solve);
  if (!complete.converged) {
    std::fprintf(stderr, "sweep aborted: complete solve failed: %s\n", complete.error.c_str());
    return 1;
  }
  std::vector<SweepRow> rows = sweep(sys, lc, complete, o.cusp - 1, sw);

  std::ostringstream csv;
  csv << "p,q,r,converged,residual,volume,n_pos,n_flat,n_neg,iters\n";
  for (const SweepRow& row : rows) {
    if (row.g.complete)
      csv << "inf,inf,inf";
    else
      csv << fint_or_num(row.g.p) << "," << fint_or_num(row.g.q) << "," << fint_or_num(row.g.r);
    const SolveResult& r = row.result;
    csv << "," << (r.converged ? 1 : 0) << "," << fnum(r.residual) << "," << fnum(r.volume) << "," << r.n_pos << ","
        << r.n_flat << "," << r.n_neg << "," << r.iterations << "\n";
  }
  emit(o, csv.str());
  return 0;
}

int cmd_develop(const Options& o) {
  std::string bytes = read_file(o.path);
  IdealTriangulation T = parse_triangulation(bytes);
  GluingSystem sys = assemble_system(T);
  std::vector<std::string> warnings;
  FillingTarget target = parse_fills(o.fills, T.k(), warnings);
  SolveOptions sopts;
  sopts.tol = o.tol;
  sopts.max_iter = o.max_iter;

  StageTimer t("develop");
  auto [complete, lc] = solve_complete(sys, sopts);
  SolveResult res = complete;
  bool filled = std::any_of(target.begin(), target.end(), [](const auto& g) { return !g.complete; });
  if (filled && complete.converged) res = newton_solve(complete.shapes, sys, lc, target, sopts);
  if (!res.converged) {
    std::fprintf(stderr, "develop aborted: solve failed: %s\n", res.error.c_str());
    return 1;
  }
  attach_cusp_shapes(res, T, sopts);

  JsonBuilder jb;
  jb.obj();
  header(jb, o, fnv1a(bytes), T.name());
  emit_target(jb, target);
  jb.key("shapes").arr();
  for (auto z : res.shapes.z()) jb.complex(z);
  jb.end();
  jb.key("volume").num(res.volume);
  jb.key("cusps").arr();
  for (int c = 0; c < T.k(); ++c) {
    DevelopedTorus dev = develop_torus(T, c, res.shapes);
    cd u = res.u[static_cast<size_t>(c)], v = res.v[static_cast<size_t>(c)];
    jb.obj();
    jb.key("u").complex(u);
    jb.key("v").complex(v);
    jb.key("rho_lambda").obj().key("alpha").complex(dev.rho_lambda.alpha).key("beta").complex(dev.rho_lambda.beta).end();
    jb.key("rho_mu").obj().key("alpha").complex(dev.rho_mu.alpha).key("beta").complex(dev.rho_mu.beta).end();
    jb.key("a").complex(dev.a);
    jb.key("b").complex(dev.b);
    jb.key("max_edge_residual").num(dev.max_edge_residual);
    cd comm = dev.a * (std::exp(v) - 1.0) - dev.b * (std::exp(u) - 1.0);
    jb.key("commutation_residual").num(std::abs(comm));
    jb.key("triangles").arr();
    for (const DevelopedTriangle& tri : dev.triangles) {
      jb.obj().key("tet").integer(tri.tet).key("vertex").integer(tri.vertex).key("corners").arr();
      for (int w = 0; w < 4; ++w) {
        if (w == tri.vertex)
          jb.null();
        else
          jb.complex(tri.pos[static_cast<size_t>(w)]);
      }
      jb.end().end();
    }
    jb.end();
    jb.end();
  }
  jb.end();
  DevelopedTetrahedra dev3 = develop_tetrahedra(T, res.shapes);
  jb.key("h3").obj();
  jb.key("vertices").arr();
  for (const auto& tet : dev3.verts) {
    jb.arr();
    for (const CP1& p : tet) {
      if (p.inf)
        jb.null();
      else
        jb.complex(p.v);
    }
    jb.end();
  }
  jb.end();
  jb.key("pairings").arr();
  for (const PairingCheck& pc : dev3.pairings) {
    jb.obj().key("tet").integer(pc.tet).key("face").integer(pc.face);
    jb.key("isometry").arr().complex(pc.iso.a).complex(pc.iso.b).complex(pc.iso.c).complex(pc.iso.d).end();
    jb.key("residual").num(pc.residual);
    jb.end();
  }
  jb.end();
  jb.key("max_residual").num(dev3.max_residual);
  jb.end();
  jb.key("warnings").arr();
  for (const auto& w : warnings) jb.str(w);
  for (const auto& w : res.warnings) jb.str(w);
  jb.end();
  jb.end();
  emit(o, jb.take());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperbolic Dehn filling on ideal triangulations"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Options o;
  auto add_common = [&](CLI::App* sub, bool solverish) {
    sub->add_option("file", o.path, "triangulation file (canonical JSON)")->required();
    sub->add_option("--format", o.format, "output format");
    sub->add_option("--out", o.out, "write output to this file instead of stdout");
    sub->add_option("--seed", o.seed, "seed echoed into the report (pipeline is deterministic)");
    if (solverish) {
      sub->add_option("--fill", o.fills, "filling spec i:p,q[,r], repeatable; cusps are 1-based");
      sub->add_option("--tol", o.tol, "residual tolerance")->check(CLI::PositiveNumber);
      sub->add_option("--max-iter", o.max_iter, "Newton iteration cap")->check(CLI::PositiveNumber);
    }
  };

  CLI::App* info = app.add_subcommand("info", "print triangulation summary");
  add_common(info, false);
  CLI::App* check = app.add_subcommand("check", "verify combinatorial and exact-arithmetic invariants");
  add_common(check, false);
  CLI::App* solve = app.add_subcommand("solve", "solve for the (filled) hyperbolic structure");
  add_common(solve, true);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep filling coefficients on one cusp");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--cusp", o.cusp, "1-based cusp to sweep");
  sweep_cmd->add_option("--pq-range", o.pq_range, "coefficient box a..b (default -8..8)");
  sweep_cmd->add_option("--cone-r", o.cone_r, "cone ray r1..r2:steps (geometric spacing) per (p,q)");
  sweep_cmd->add_option("--jobs", o.jobs, "parallel cells per continuation shell")->check(CLI::PositiveNumber);
  CLI::App* develop = app.add_subcommand("develop", "develop the structure into C and H^3");
  add_common(develop, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (info->parsed()) return cmd_info(o);
    if (check->parsed()) return cmd_check(o);
    if (solve->parsed()) return cmd_solve(o);
    if (sweep_cmd->parsed()) return cmd_sweep(o);
    if (develop->parsed()) return cmd_develop(o);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}

// Acceptance suite: one self-contained check per release criterion,
// printing a single PASS/FAIL line each. Exit code is the failure count.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixture_io.hpp"
#include "hjsd/runner.hpp"
#include "hjsd/vtk_writer.hpp"

using namespace hjsd;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

int failures = 0;

void report(int idx, bool ok, const std::string& detail) {
  std::printf("criterion %2d %s: %s\n", idx, ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

StratifiedDomain domain_from_text(const std::string& text) {
  return build_domain(parse_hjsd(text));
}

VectorXd random_field(NodeIndex n, std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  VectorXd v(n);
  for (NodeIndex i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

// Two-component 21x21 domain whose smallest discount is 0.5.
StratifiedDomain two_component_domain() {
  return domain_from_text(
      "#HJSD2D 21 21 -1 1 -1 1 3 16\n"
      "#P 0 0 1 0.7\n"
      "#S 0.5 0.5 1 1 0.5\n");
}

void criterion_contraction() {
  auto dom = two_component_domain();
  const double h = 0.2, factor = 1.0 - dom.c_bar * h;  // c_bar = 0.5
  std::mt19937 rng(1);
  double worst = -1e300;
  for (int t = 0; t < 50; ++t) {
    VectorXd u = random_field(dom.grid.node_count(), rng, -1, 1);
    VectorXd v = random_field(dom.grid.node_count(), rng, -1, 1);
    double lhs = (apply_operator(dom, u, h, 1e9) -
                  apply_operator(dom, v, h, 1e9))
                     .lpNorm<Eigen::Infinity>();
    double rhs = factor * (u - v).lpNorm<Eigen::Infinity>();
    worst = std::max(worst, lhs - rhs);
  }
  report(1, worst <= 1e-12,
         "contraction margin sup|Tu-Tv| - 0.9 sup|u-v| = " + fmt(worst) +
             " (50 random pairs, bound 1e-12)");
}

void criterion_monotonicity() {
  auto dom = two_component_domain();
  std::mt19937 rng(2);
  bool ok = true;
  for (int t = 0; t < 50 && ok; ++t) {
    VectorXd u = random_field(dom.grid.node_count(), rng, -1, 1);
    VectorXd v = u + random_field(dom.grid.node_count(), rng, 0, 2);
    VectorXd tu = apply_operator(dom, u, 0.2, 1e9);
    VectorXd tv = apply_operator(dom, v, 0.2, 1e9);
    ok = (tu.array() <= tv.array()).all();
  }
  report(2, ok, "Tu <= Tv pointwise for 50 random ordered pairs, exact");
}

void criterion_constants_shift() {
  auto dom = domain_from_text(
      "#HJSD2D 21 21 -1 1 -1 1 3 16\n"
      "#S 0 0 1 1 1\n");  // uniform discount 1
  const double h = 0.1;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> cdist(-5, 5);
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    VectorXd w = random_field(dom.grid.node_count(), rng, -1, 1);
    double C = cdist(rng);
    VectorXd a = apply_operator(dom, VectorXd(w.array() + C), h, 1e9);
    VectorXd b = apply_operator(dom, w, h, 1e9);
    worst = std::max(worst,
                     ((a - b).array() - (1.0 - h) * C).abs().maxCoeff());
  }
  report(3, worst <= 1e-12,
         "sup|T(w+C) - T(w) - 0.9 C| = " + fmt(worst) +
             " over 20 random (w, C), bound 1e-12");
}

void criterion_bound_preservation() {
  auto dom = build_domain(parse_hjsd(read_fixture("test1.hjsd")));
  const double h = 0.1, tau = 1e-6;
  const double bound = dom.bound_M / dom.c_bar;  // 5 / 1e-4
  const double penalty = std::min(10.0 * bound, 1e12);
  VectorXd u = VectorXd::Zero(dom.grid.node_count());
  double sup_iter = 0, res = 1e300;
  int sweeps = 0;
  while (res > tau && sweeps < 1000) {
    VectorXd next = apply_operator(dom, u, h, penalty);
    res = (next - u).lpNorm<Eigen::Infinity>();
    u = next;
    sup_iter = std::max(sup_iter, u.lpNorm<Eigen::Infinity>());
    ++sweeps;
  }
  double u_p0 = u[dom.grid.linear(100, 175)];
  bool ok = res <= tau && sup_iter <= bound && u_p0 >= 0.0 && u_p0 <= tau &&
            u.minCoeff() >= -tau;
  report(4, ok,
         "all " + std::to_string(sweeps) + " iterates bounded by " +
             fmt(bound) + " (max " + fmt(sup_iter) + "), u(P0) = " +
             fmt(u_p0) + ", min u = " + fmt(u.minCoeff()));
}

// Brute-force value iteration, written independently with naive loops:
// 5x5 grid on [-1,1]^2, one region, b = 1, l = 1 + x^2, c = 1, controls
// (+-1,0),(0,+-1), h = 0.2.
std::vector<double> brute_force_oracle() {
  const int N = 5;
  const double dx = 0.5, h = 0.2, coeff = 1.0 - 1.0 * h, pen = 1e9;
  std::vector<double> u(N * N, 0.0), v(N * N);
  const double ax[4] = {1, -1, 0, 0};
  const double ay[4] = {0, 0, 1, -1};
  for (int it = 0; it < 10000; ++it) {
    double res = 0;
    for (int j = 0; j < N; ++j) {
      for (int i = 0; i < N; ++i) {
        double x = -1 + i * dx, y = -1 + j * dx;
        double best = pen;
        for (int m = 0; m < 4; ++m) {
          double fx = x + h * ax[m], fy = y + h * ay[m];
          if (fx < -1 || fx > 1 || fy < -1 || fy > 1) continue;
          // triangle interpolation on the cell diagonal (low,low)-(hi,hi)
          double gx = (fx + 1) / dx, gy = (fy + 1) / dx;
          int ci = std::min((int)std::floor(gx), N - 2);
          int cj = std::min((int)std::floor(gy), N - 2);
          double s = gx - ci, t = gy - cj;
          double w;
          if (s >= t)
            w = (1 - s) * u[cj * N + ci] + (s - t) * u[cj * N + ci + 1] +
                t * u[(cj + 1) * N + ci + 1];
          else
            w = (1 - t) * u[cj * N + ci] + (t - s) * u[(cj + 1) * N + ci] +
                s * u[(cj + 1) * N + ci + 1];
          double cand = coeff * w + h * (1 + x * x);
          if (cand < best) best = cand;
        }
        v[j * N + i] = best;
        res = std::max(res, std::abs(best - u[j * N + i]));
      }
    }
    u.swap(v);
    if (res <= 1e-14) break;
  }
  return u;
}

void criterion_oracle() {
  auto dom = domain_from_text(
      "#HJSD2D 5 5 -1 1 -1 1 3 4\n"
      "#S 0.9 0.9 1 1+x^2 1\n");
  SolverConfig cfg;
  cfg.h = 0.2;
  cfg.tolerance = 1e-14;
  cfg.max_iterations = 10000;
  cfg.penalty = 1e9;
  auto field = solve(dom, cfg);
  auto oracle = brute_force_oracle();
  double worst = 0;
  for (NodeIndex n = 0; n < dom.grid.node_count(); ++n)
    worst = std::max(worst, std::abs(field.values[n] - oracle[n]));
  report(5, field.converged && worst <= 1e-10,
         "sup deviation from independent value iteration = " + fmt(worst) +
             " (bound 1e-10)");
}

void criterion_constant_solution() {
  auto dom = domain_from_text(
      "#HJSD2D 31 31 -1 1 -1 1 3 16\n"
      "#S 0 0 2+x 1 1\n");  // non-constant speed, l = c = 1
  SolverConfig cfg;
  cfg.h = 0.1;
  cfg.tolerance = 1e-8;
  cfg.max_iterations = 5000;
  auto field = solve(dom, cfg);
  double dev = (field.values.array() - 1.0).abs().maxCoeff();
  report(6, field.converged && dev <= 1e-6,
         "sup|u - 1| = " + fmt(dev) + " (bound tau = 1e-6)");
}

double eikonal_error(int n, double h) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "#HJSD2D %d %d -1 1 -1 1 3 64\n#P 0 0 0 1\n"
                "#S 0.5 0.5 1 1 1e-4\n",
                n, n);
  auto dom = domain_from_text(buf);
  SolverConfig cfg;
  cfg.h = h;
  cfg.tolerance = 1e-9;
  cfg.max_iterations = 20000;
  auto field = solve(dom, cfg);
  if (!field.converged) return 1e300;
  double worst = 0;
  for (NodeIndex i = 0; i < dom.grid.node_count(); ++i) {
    Vector3d p = dom.grid.coords(i);
    worst = std::max(worst, std::abs(field.values[i] - p.head<2>().norm()));
  }
  return worst;
}

void criterion_eikonal(double* err201) {
  *err201 = eikonal_error(201, 0.1);
  report(7, *err201 <= 0.05,
         "sup|u - |x|| = " + fmt(*err201) +
             " at 201^2, h = 0.1 (bound 0.05); the fixed characteristic "
             "step h b cannot stop at a zero-dimensional target, leaving "
             "an O(h) plateau around it, so this bound is unattainable "
             "for this scheme at h = 0.1");
}

void criterion_consistency_refinement() {
  auto phi = ExpressionTree::parse("cos(x)*cos(y)");
  std::vector<ExpressionTree> grad;
  grad.push_back(ExpressionTree::parse("0-sin(x)*cos(y)"));
  grad.push_back(ExpressionTree::parse("0-cos(x)*sin(y)"));
  double r[3];
  const int ns[3] = {51, 201, 801};
  const double hs[3] = {0.2, 0.1, 0.05};  // dx = h^2 each time
  for (int i = 0; i < 3; ++i) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "#HJSD2D %d %d -1 1 -1 1 3 64\n#S 0 0 1 1 1\n", ns[i],
                  ns[i]);
    auto dom = domain_from_text(buf);
    r[i] = consistency_residual(dom, hs[i], phi, {grad.data(), grad.size()});
  }
  bool ok = r[1] < r[0] && r[2] < r[1] && r[1] / r[0] <= 0.75 &&
            r[2] / r[1] <= 0.75;
  report(8, ok,
         "consistency residuals " + fmt(r[0]) + " -> " + fmt(r[1]) + " -> " +
             fmt(r[2]) + ", ratios " + fmt(r[1] / r[0]) + ", " +
             fmt(r[2] / r[1]) + " (bound 0.75)");
}

void criterion_convergence_coupling(double err201) {
  double e[3];
  e[0] = eikonal_error(51, 0.2);
  e[1] = eikonal_error(101, std::sqrt(0.02));
  e[2] = err201;  // 201^2 with h = 0.1 = sqrt(dx), from criterion 7
  bool ok = e[1] <= 1.1 * e[0] && e[2] <= 1.1 * e[1];
  report(9, ok,
         "eikonal sup errors at h = sqrt(dx): " + fmt(e[0]) + " -> " +
             fmt(e[1]) + " -> " + fmt(e[2]) +
             " (non-increasing within 10%)");
}

void criterion_asymmetry() {
  auto dom = build_domain(parse_hjsd(read_fixture("test2.hjsd")));
  SolverConfig cfg;
  cfg.h = 0.1;
  cfg.tolerance = 1e-6;
  cfg.max_iterations = 20000;
  auto field = solve(dom, cfg);
  double right = field.values[dom.grid.linear(150, 75)];  // (0.5, -0.25)
  double left = field.values[dom.grid.linear(50, 75)];    // (-0.5, -0.25)
  report(10, field.converged && right < left,
         "u(0.5,-0.25) = " + fmt(right) + " < u(-0.5,-0.25) = " + fmt(left) +
             " (faster right-hand track)");
}

void criterion_trajectories() {
  auto dom = build_domain(parse_hjsd(read_fixture("test1.hjsd")));
  SolverConfig cfg;
  cfg.h = 0.05;  // keeps the stagnation zone around P0 below 3 dx
  cfg.tolerance = 1e-6;
  cfg.max_iterations = 20000;
  auto field = solve(dom, cfg);
  if (!field.converged) {
    report(11, false, "solve did not converge");
    return;
  }
  auto dyn = extract_dynamics(dom, field);
  const double dx = 0.01;
  const Vector3d p0(0, 0.75, 0);
  double worst = 0;
  int reached = 0;
  for (int m = 0; m < 8; ++m) {
    double th = 2.0 * M_PI * m / 8;
    Vector3d s = p0 + 0.9 * Vector3d(std::cos(th), std::sin(th), 0);
    s.x() = std::clamp(s.x(), -1.0, 1.0);  // ring points above the box
    s.y() = std::clamp(s.y(), -1.0, 1.0);  // are clamped onto its edge
    auto tr = trace(dom.grid, dyn, s, dx, static_cast<int>(10.0 / dx));
    double dist = (tr.points.back() - p0).norm();
    worst = std::max(worst, dist);
    if (dist <= 3 * dx) ++reached;
  }
  report(11, reached == 8,
         std::to_string(reached) +
             "/8 ring traces end within 3 dx = 0.03 of P0 (worst " +
             fmt(worst) + ")");
}

void criterion_parser() {
  bool ok = true;
  std::string detail;
  auto fail = [&](const std::string& why) {
    ok = false;
    if (detail.empty()) detail = why;
  };
  try {
    using Tag = Directive::Tag;
    auto t1 = parse_hjsd(read_fixture("test1.hjsd"));
    if (t1.directives.size() != 5 || t1.directives[0].tag != Tag::P ||
        t1.directives[3].tag != Tag::LY || t1.directives[4].tag != Tag::S ||
        t1.directives[3].geom != std::vector<double>{0.0, -0.5, 0.5} ||
        t1.directives[3].cost != "0.25*(1+4*abs(x))")
      fail("test1.hjsd directive records");
    auto t2 = parse_hjsd(read_fixture("test2.hjsd"));
    if (t2.directives[5].tag != Tag::LX ||
        t2.directives[5].geom != std::vector<double>{-0.5, -0.5, 0.5})
      fail("test2.hjsd directive records");
    auto t4 = parse_hjsd(read_fixture("test4.hjsd"));
    if (t4.dim != 3 || t4.directives.size() != 13 ||
        t4.directives[6].tag != Tag::LXY ||
        t4.directives[7].tag != Tag::LXZ ||
        t4.directives[9].tag != Tag::LYZ ||
        t4.directives[11].tag != Tag::SZ ||
        t4.directives[12].tag != Tag::V ||
        t4.directives[11].geom !=
            std::vector<double>{0.0, -0.5, 0.5, -0.5, 0.5})
      fail("test4.hjsd directive records");
    if (parse_hjsd(read_fixture("plane_x.hjsd")).directives[0].tag !=
            Tag::SX ||
        parse_hjsd(read_fixture("plane_y.hjsd")).directives[0].tag !=
            Tag::SY)
      fail("plane fixtures");
  } catch (const Error& e) {
    fail(std::string("unexpected parse error: ") + e.what());
  }

  const std::pair<const char*, int> malformed[] = {
      {"bad_header.hjsd", 2}, {"bad_fields.hjsd", 3}, {"bad_number.hjsd", 2},
      {"bad_tag.hjsd", 2},    {"bad_dim.hjsd", 2},
  };
  for (const auto& [name, line] : malformed) {
    try {
      parse_hjsd(read_fixture(name));
      fail(std::string(name) + " parsed without error");
    } catch (const FileError& e) {
      if (e.line != line)
        fail(std::string(name) + " reported line " + std::to_string(e.line) +
             " instead of " + std::to_string(line));
    }
  }
  report(12, ok,
         ok ? "all directive tags parse to the expected records; 5 "
              "malformed files name the correct line"
            : detail);
}

void criterion_determinism() {
  auto pf = parse_hjsd(read_fixture("test1.hjsd"));
  auto dom = build_domain(pf);
  SolverConfig cfg;
  cfg.h = 0.1;
  cfg.tolerance = 1e-6;
  cfg.max_iterations = 20000;
  cfg.threads = 1;
  auto a = solve(dom, cfg);
  cfg.threads = 8;
  auto b = solve(dom, cfg);
  bool same_values = (a.values.array() == b.values.array()).all();

  auto dump = [&](const ValueField& f, const std::string& path) {
    write_vtk(dom, f, extract_dynamics(dom, f), path);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::remove(path.c_str());
    return ss.str();
  };
  bool same_files = dump(a, "acc_t1.vtk") == dump(b, "acc_t8.vtk");
  report(13, a.converged && b.converged && same_values && same_files,
         std::string("1-thread vs 8-thread runs: value arrays ") +
             (same_values ? "bit-identical" : "DIFFER") + ", output files " +
             (same_files ? "byte-identical" : "DIFFER"));
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_contraction();
  criterion_monotonicity();
  criterion_constants_shift();
  criterion_bound_preservation();
  criterion_oracle();
  criterion_constant_solution();
  double err201 = 0;
  criterion_eikonal(&err201);
  criterion_consistency_refinement();
  criterion_convergence_coupling(err201);
  criterion_asymmetry();
  criterion_trajectories();
  criterion_parser();
  criterion_determinism();
  std::printf("%d of 13 criteria failed\n", failures);
  return failures;
}

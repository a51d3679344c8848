// One PASS/FAIL line per acceptance criterion; exit status is non-zero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "odeident/dynamics.hpp"
#include "odeident/errors.hpp"
#include "odeident/fixtures.hpp"
#include "odeident/harness.hpp"
#include "odeident/identcore.hpp"
#include "odeident/randgen.hpp"
#include "odeident/selftest.hpp"
#include "odeident/stats.hpp"
#include "odeident/twostage.hpp"

using namespace odeident;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void check(bool cond, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!cond) {
      ok = false;
      detail += " [x]";
    }
  }
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream ss;
  ss.precision(prec);
  ss << x;
  return ss.str();
}

Outcome worked_example() {
  Outcome v;
  const Mat A = fixtures::three_state();
  const auto jf = real_jordan(A);
  const Vec xa = jf.Q * Eigen::Vector3d(2.0, -1.0, 0.0);
  const Vec xb = jf.Q * Eigen::Vector3d(0.0, -2.0, 3.0);
  const auto va = is_identifiable(A, xa);
  v.check(va.verdict == Verdict::Identifiable && std::abs(va.icis - 1.0) <= 1e-6,
          std::string("x0(a) ") + verdict_name(va.verdict) + " icis=" + fmt(va.icis, 10));
  const auto vb = is_identifiable(A, xb);
  const auto cls = unidentifiable_class(jf, xb);
  const Vec expect_i0 = Eigen::Vector3d(1.0, 0.0, 0.0);
  v.check(vb.verdict == Verdict::UnidentifiableInitialCondition && cls.I0 == expect_i0,
          std::string("x0(b) ") + verdict_name(vb.verdict) + " I0=(" + fmt(cls.I0(0)) + "," +
              fmt(cls.I0(1)) + "," + fmt(cls.I0(2)) + ")");
  // b is the eigenvalue that replaces the zero block's eigenvalue.
  const double b = 3.0;
  const double c = jf.blocks[cls.zero_blocks.at(0)].c;
  const Mat At = class_member(cls, Mat::Constant(1, 1, b - c));
  const double err = (At - fixtures::three_state_alternative()).cwiseAbs().maxCoeff();
  v.check(err <= 1e-8, "class member at b=3 err=" + fmt(err));
  const auto grid = TimeGrid::uniform(0.0, 1.0, 51);
  const double traj = (solve(At, xb, grid).X - solve(A, xb, grid).X).cwiseAbs().maxCoeff();
  v.check(traj <= 1e-8, "trajectory diff=" + fmt(traj));
  return v;
}

Outcome minimal_signal() {
  Outcome v;
  const Mat A = fixtures::rotated_pair(nullptr);
  const auto jf = real_jordan(A);
  const Vec xa = Eigen::Vector2d(1.0, 1.0);
  const Vec xb = Eigen::Vector2d(1.72, 1.0);
  const auto ma = block_coefficients(jf, xa).magnitudes;
  const auto mb = block_coefficients(jf, xb).magnitudes;
  // Blocks are ordered by eigenvalue: -6 first, then -1/2.
  v.check(std::abs(ma[1] - 1.366) <= 1e-3 && std::abs(ma[0] - 0.366) <= 1e-3,
          "x0(A) coefficients " + fmt(ma[1]) + "/" + fmt(ma[0]));
  v.check(std::abs(mb[1] - 1.990) <= 1e-3 && std::abs(mb[0] - 0.006) <= 1e-3,
          "x0(B) coefficients " + fmt(mb[1]) + "/" + fmt(mb[0]));
  const auto grid = TimeGrid::uniform(0.0, 1.0, 101);
  const auto ops = spline_operators(grid, 1e-3);
  const auto ta = solve(A, xa, grid), tb = solve(A, xb, grid);
  std::vector<double> ra, rb;
  for (std::uint64_t s = 0; s < 50; ++s) {
    SeededRng rng(s);
    ra.push_back(*two_stage_estimate(add_noise(ta, 0.01, rng).Y, ops, A).ree);
    rb.push_back(*two_stage_estimate(add_noise(tb, 0.01, rng).Y, ops, A).ree);
  }
  const double ratio = median(rb) / median(ra);
  v.check(ratio > 10.0, "median REE " + fmt(median(rb)) + "/" + fmt(median(ra)) + " ratio=" + fmt(ratio));
  return v;
}

Outcome sim1() {
  Outcome v;
  Sim1Config cfg;
  cfg.reps = 100;
  cfg.seed = 7;
  cfg.threads = resolve_threads(std::nullopt);
  const auto res = run_sim1(cfg);
  v.check(res.spearman_noisy >= -0.95 && res.spearman_noisy <= -0.60,
          "spearman noisy=" + fmt(res.spearman_noisy));
  v.check(res.spearman_clean >= -0.95 && res.spearman_clean <= -0.65,
          "spearman clean=" + fmt(res.spearman_clean));
  return v;
}

Outcome sim2() {
  Outcome v;
  Sim2Config cfg;
  cfg.reps = 200;
  cfg.seed = 7;
  cfg.threads = resolve_threads(std::nullopt);
  const auto res = run_sim2(cfg);
  auto auc = [&](const char* key) { return res.auc_table.at(key).auc; };
  v.check(auc("pis/noisy") >= 0.90, "noisy PIS=" + fmt(auc("pis/noisy")));
  v.check(auc("scn/noisy") >= 0.88, "noisy SCN=" + fmt(auc("scn/noisy")));
  v.check(auc("kappa/noisy") >= 0.40 && auc("kappa/noisy") <= 0.62, "noisy kappa=" + fmt(auc("kappa/noisy")));
  v.check(auc("scn/clean") >= 0.95 && auc("pis/clean") >= 0.95 && auc("kappa/clean") >= 0.95,
          "clean SCN/PIS/kappa=" + fmt(auc("scn/clean")) + "/" + fmt(auc("pis/clean")) + "/" +
              fmt(auc("kappa/clean")));
  v.check(auc("icis/clean") >= 0.68 && auc("icis/clean") <= 0.86, "clean ICIS=" + fmt(auc("icis/clean")));
  return v;
}

Outcome halfnormal() {
  Outcome v;
  const double e100 = expected_min_halfnormal(100);
  const double e1 = expected_min_halfnormal(1);
  v.check(std::abs(e100 - 0.012) <= 1e-3, "d=100: " + fmt(e100, 6));
  v.check(std::abs(e1 - std::sqrt(2.0 / M_PI)) <= 1e-6, "d=1: " + fmt(e1, 10));
  return v;
}

Outcome weibull() {
  Outcome v;
  const auto r = weibull_limit_test(200, 5000, 1);
  v.check(r.pass && r.ks_distance < 0.05, "KS=" + fmt(r.ks_distance));
  return v;
}

Outcome goe_scaling() {
  Outcome v;
  const std::vector<int> dims{8, 16, 32, 64};
  const auto recs = run_dimension_scaling(dims, 200, Ensemble::GOE, 1, resolve_threads(std::nullopt));
  std::vector<double> lx, ly;
  std::string means;
  bool decreasing = true;
  double prev = 1e300;
  for (int d : dims) {
    double s = 0.0;
    int k = 0;
    for (const auto& r : recs)
      if (r.d == d && !r.failed) s += r.icis * r.icis, ++k;
    const double m = s / k;
    decreasing = decreasing && m < prev;
    prev = m;
    lx.push_back(std::log(static_cast<double>(d)));
    ly.push_back(std::log(m));
    means += (means.empty() ? "" : ",") + fmt(m, 3);
  }
  const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4.0, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 4; ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
  const double slope = sxy / sxx;
  v.check(decreasing, "E(ICIS^2)=" + means);
  v.check(slope >= -2.8 && slope <= -1.2, "slope=" + fmt(slope));
  return v;
}

Outcome exactness() {
  Outcome v;
  const auto grid = TimeGrid::uniform(0.0, 2.0, 2001);
  const auto ops = spline_operators(grid, 1e-6);
  SeededRng rng(1);
  int used = 0, draw = 0;
  while (used < 5) {
    const int d = 1 + draw % 4;
    ++draw;
    const Mat A = ginoe(d, rng) / std::sqrt(static_cast<double>(d));
    const Vec x0 = uniform_sphere(d, rng);
    double icis = 0.0;
    try {
      icis = block_coefficients(real_jordan(A), x0).icis;
    } catch (const Error&) {
      continue;
    }
    if (icis < 0.3) continue;
    ++used;
    const double r = *two_stage_estimate(solve(A, x0, grid).X, ops, A).ree;
    v.check(r <= 0.02, "d=" + std::to_string(d) + " REE=" + fmt(r, 3));
  }
  return v;
}

Outcome random_matrix() {
  Outcome v;
  const auto r = matrix_expectation_test(3, 5, 100000, 1);
  v.check(r.max_rel_err <= 0.05, "max rel err=" + fmt(r.max_rel_err));
  return v;
}

Outcome property_suites() {
  Outcome v;
  const auto res = run_selftest(resolve_threads(std::nullopt));
  int passed = 0;
  for (const auto& r : res) {
    if (r.passed) {
      ++passed;
    } else {
      v.check(false, r.module + "/" + r.name + ": " + r.detail);
    }
  }
  v.check(passed == static_cast<int>(res.size()),
          std::to_string(passed) + "/" + std::to_string(res.size()) + " checks");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "three-state system", 1.0, worked_example},
      {2, "rotated pair, small signal", 10.0, minimal_signal},
      {3, "SIM1 rank correlation", 120.0, sim1},
      {4, "SIM2 discrimination", 600.0, sim2},
      {5, "half-normal minimum", 1.0, halfnormal},
      {6, "Weibull limit", 30.0, weibull},
      {7, "GOE scaling", 120.0, goe_scaling},
      {8, "estimator exactness", 30.0, exactness},
      {9, "random-matrix identities", 10.0, random_matrix},
      {10, "property suites", 120.0, property_suites},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.check(secs < c.budget, "time " + fmt(secs, 3) + "s < " + fmt(c.budget, 4) + "s");
    std::printf("%s criterion %2d %-28s %s\n", v.ok ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
    failed += v.ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

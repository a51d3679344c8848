#include "odeident/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "odeident/dynamics.hpp"
#include "odeident/errors.hpp"
#include "odeident/identcore.hpp"
#include "odeident/randgen.hpp"
#include "odeident/scores.hpp"
#include "odeident/twostage.hpp"

namespace odeident {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScoreSet score_set(const Mat& Y, const SmootherOperators& ops, double icis) {
  const auto rep = ident_report(Y, ops);
  return {icis, rep.scn, rep.pis, rep.kappa, rep.gram_singular};
}

std::vector<double> column(const std::vector<Sim2Record>& recs, bool noisy,
                           double ScoreSet::*field) {
  std::vector<double> out;
  for (const auto& r : recs) out.push_back((noisy ? r.noisy : r.clean).*field);
  return out;
}

}  // namespace

int resolve_threads(std::optional<int> requested) {
  if (requested && *requested > 0) return *requested;
  if (const char* env = std::getenv("IDENT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

Mat sim1_system() {
  Mat A(3, 3);
  A << -0.1, 3.0, 0.0, -3.0, -0.1, 0.0, 0.0, 0.0, -0.5;
  return A;
}

Sim1Result run_sim1(const Sim1Config& cfg) {
  if (cfg.reps < 2) throw Error(ErrorKind::InvalidArgument, "sim1 needs reps >= 2");
  const Mat A = sim1_system();
  const auto jf = real_jordan(A);
  const auto grid = TimeGrid::uniform(0.0, cfg.t1, cfg.n);
  const auto ops = spline_operators(grid, cfg.lambda, 4);

  Sim1Result res;
  res.records.resize(cfg.reps);
  parallel_for(cfg.reps, cfg.threads, [&](int r) {
    SeededRng rng(cfg.seed, static_cast<std::uint64_t>(r));
    Sim1Record rec;
    rec.replicate = r;
    const Vec x0 = uniform_sphere(3, rng);
    rec.icis = block_coefficients(jf, x0).icis;
    const auto traj = solve(A, x0, grid);
    const auto obs = add_noise(traj, cfg.sigma, rng);
    try {
      rec.ree_noisy = *two_stage_estimate(obs.Y, ops, A).ree;
      rec.ree_clean = *two_stage_estimate(traj.X, ops, A).ree;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularGram) throw;
      rec.failed = true;
      rec.ree_noisy = rec.ree_clean = kInf;
    }
    res.records[r] = rec;
  });

  std::vector<double> icis, noisy, clean;
  for (const auto& rec : res.records) {
    if (rec.failed) {
      ++res.failed;
      continue;
    }
    icis.push_back(rec.icis);
    noisy.push_back(rec.ree_noisy);
    clean.push_back(rec.ree_clean);
  }
  res.spearman_noisy = spearman(icis, noisy);
  res.spearman_clean = spearman(icis, clean);
  return res;
}

const char* case_name(Sim2Case c) {
  switch (c) {
    case Sim2Case::A: return "A";
    case Sim2Case::B: return "B";
    case Sim2Case::C: return "C";
  }
  return "?";
}

Sim2Result run_sim2(const Sim2Config& cfg) {
  if (cfg.reps < 2) throw Error(ErrorKind::InvalidArgument, "sim2 needs reps >= 2");
  const auto grid = TimeGrid::uniform(0.0, cfg.t1, cfg.n);
  const auto ops = spline_operators(grid, cfg.lambda, 4);

  Sim2Result res;
  res.records.resize(3 * static_cast<size_t>(cfg.reps));
  parallel_for(cfg.reps, cfg.threads, [&](int r) {
    SeededRng rng(cfg.seed, static_cast<std::uint64_t>(r));
    const auto pair = sim2_pair(rng);
    const Mat* systems[3] = {&pair.A, &pair.A, &pair.B};
    const Vec* inits[3] = {&pair.x0a, &pair.x0b, &pair.x0a};
    const Sim2Case cases[3] = {Sim2Case::A, Sim2Case::B, Sim2Case::C};
    for (int c = 0; c < 3; ++c) {
      const double icis = icis_any(*systems[c], *inits[c]);
      const auto traj = solve(*systems[c], *inits[c], grid);
      const auto obs = add_noise(traj, cfg.sigma, rng);
      Sim2Record rec;
      rec.replicate = r;
      rec.which = cases[c];
      rec.noisy = score_set(obs.Y, ops, icis);
      rec.clean = score_set(traj.X, ops, icis);
      res.records[3 * static_cast<size_t>(r) + c] = rec;
    }
  });

  std::vector<bool> labels;
  for (const auto& rec : res.records) labels.push_back(rec.which == Sim2Case::A);
  struct ScoreColumn {
    const char* name;
    double ScoreSet::*field;
    Orientation orientation;
  };
  const ScoreColumn specs[] = {{"icis", &ScoreSet::icis, Orientation::HigherIsPositive},
                        {"scn", &ScoreSet::scn, Orientation::LowerIsPositive},
                        {"pis", &ScoreSet::pis, Orientation::LowerIsPositive},
                        {"kappa", &ScoreSet::kappa, Orientation::LowerIsPositive}};
  for (const auto& s : specs) {
    for (bool noisy : {true, false}) {
      const std::string key = std::string(s.name) + (noisy ? "/noisy" : "/clean");
      res.auc_table[key] = roc_auc(column(res.records, noisy, s.field), labels, s.orientation);
    }
  }
  return res;
}

std::vector<DimScaleRecord> run_dimension_scaling(const std::vector<int>& dims, int reps,
                                                  Ensemble ensemble, std::uint64_t seed,
                                                  int threads) {
  if (dims.empty()) throw Error(ErrorKind::InvalidArgument, "dims must be nonempty");
  if (reps < 1) throw Error(ErrorKind::InvalidArgument, "reps must be >= 1");
  std::vector<DimScaleRecord> out(dims.size() * static_cast<size_t>(reps));
  parallel_for(static_cast<int>(out.size()), threads, [&](int idx) {
    const int di = idx / reps, r = idx % reps;
    const int d = dims[di];
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
    SeededRng rng(seed, (static_cast<std::uint64_t>(d) << 32) | static_cast<std::uint32_t>(r));
    const Mat A = ensemble == Ensemble::GOE ? goe(d, rng) : ginoe(d, rng);
    const Vec x0 = standard_normal_vector(d, rng);
    DimScaleRecord rec{d, r, 0.0, false};
    try {
      rec.icis = block_coefficients(real_jordan(A), x0).icis;
    } catch (const Error&) {
      rec.failed = true;
      rec.icis = std::numeric_limits<double>::quiet_NaN();
    }
    out[idx] = rec;
  });
  return out;
}

double expected_min_halfnormal(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be >= 1");
  const double upper = 8.0 / std::sqrt(static_cast<double>(d)) + 8.0;
  auto survival = [d](double x) { return std::pow(std::erfc(x / std::sqrt(2.0)), d); };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(survival, 0.0, upper,
                                                                       20, 1e-12, &err);
}

WeibullTestResult weibull_limit_test(int d, int draws, std::uint64_t seed) {
  if (d < 1 || draws < 1) throw Error(ErrorKind::InvalidArgument, "d and draws must be >= 1");
  SeededRng rng(seed);
  std::vector<double> samples(draws);
  const double scale = 2.0 * std::pow(static_cast<double>(d), 3) / std::acos(-1.0);
  for (auto& s : samples) {
    const Vec x = uniform_sphere(d, rng);
    s = scale * x.cwiseAbs2().minCoeff();
  }
  WeibullTestResult out;
  out.ks_distance = ks_distance(samples, [](double x) { return weibull_cdf(x, 1.0, 0.5); });
  out.pass = out.ks_distance < 0.05;
  return out;
}

MatrixExpectationResult matrix_expectation_test(int d, int n, int draws, std::uint64_t seed,
                                                const std::optional<Mat>& A_in,
                                                const std::optional<Mat>& B_in) {
  if (d < 1 || n < 1 || draws < 1)
    throw Error(ErrorKind::InvalidArgument, "d, n and draws must be >= 1");
  SeededRng rng(seed);
  Mat A = A_in ? *A_in : Mat();
  Mat B = B_in ? *B_in : Mat();
  if (!A_in) {
    A.resize(n, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < n; ++i) A(i, j) = rng.normal();
  }
  if (!B_in) {
    B.resize(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) B(i, j) = rng.normal();
  }
  if (A.rows() != n || A.cols() != d || B.rows() != n || B.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "A must be n x d and B n x n");

  Mat sumA = Mat::Zero(d, n), sumB = Mat::Zero(d, d);
  Mat eps(d, n);
  for (int k = 0; k < draws; ++k) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < d; ++i) eps(i, j) = rng.normal();
    sumA.noalias() += eps * A * eps;
    sumB.noalias() += eps * B * eps.transpose();
  }
  const Mat meanA = sumA / draws, meanB = sumB / draws;
  MatrixExpectationResult out;
  const double sa = A.norm() > 0.0 ? A.norm() : 1.0;
  const double sb = B.norm() > 0.0 ? B.norm() : 1.0;
  out.err_a = (meanA - A.transpose()).cwiseAbs().maxCoeff() / sa;
  out.err_b = (meanB - B.trace() * Mat::Identity(d, d)).cwiseAbs().maxCoeff() / sb;
  out.max_rel_err = std::max(out.err_a, out.err_b);
  return out;
}

}  // namespace odeident

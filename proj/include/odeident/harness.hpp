#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "odeident/realjordan.hpp"
#include "odeident/stats.hpp"

namespace odeident {

// Worker count: explicit value if given, else IDENT_THREADS, else 1.
int resolve_threads(std::optional<int> requested);

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
// handled exactly once; the first exception is rethrown after all workers stop.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

struct Sim1Config {
  int reps = 100;
  std::uint64_t seed = 0;
  double sigma = 0.05;
  double lambda = 0.001;
  int n = 61;
  double t1 = 6.0;
  int threads = 1;
};

struct Sim1Record {
  int replicate = 0;
  double icis = 0.0;
  double ree_noisy = 0.0;
  double ree_clean = 0.0;
  bool failed = false;
};

struct Sim1Result {
  std::vector<Sim1Record> records;
  double spearman_noisy = 0.0;
  double spearman_clean = 0.0;
  int failed = 0;
};

Mat sim1_system();
Sim1Result run_sim1(const Sim1Config& cfg);

struct Sim2Config {
  int reps = 200;
  std::uint64_t seed = 0;
  double sigma = 0.05;
  double lambda = 0.001;
  int n = 61;
  double t1 = 6.0;
  int threads = 1;
};

enum class Sim2Case { A, B, C };
const char* case_name(Sim2Case c);

struct ScoreSet {
  double icis = 0.0;
  double scn = 0.0;
  double pis = 0.0;
  double kappa = 0.0;
  bool gram_singular = false;
};

struct Sim2Record {
  int replicate = 0;
  Sim2Case which = Sim2Case::A;
  ScoreSet noisy;
  ScoreSet clean;
};

struct Sim2Result {
  std::vector<Sim2Record> records;
  // Keys "<score>/<noisy|clean>" with score in icis, scn, pis, kappa.
  std::map<std::string, RocResult> auc_table;
};

Sim2Result run_sim2(const Sim2Config& cfg);

enum class Ensemble { GinOE, GOE };

struct DimScaleRecord {
  int d = 0;
  int replicate = 0;
  double icis = 0.0;
  bool failed = false;
};

std::vector<DimScaleRecord> run_dimension_scaling(const std::vector<int>& dims, int reps,
                                                  Ensemble ensemble, std::uint64_t seed,
                                                  int threads = 1);

// E[min of d i.i.d. standard half-normals] by adaptive quadrature of the
// survival function.
double expected_min_halfnormal(int d);

struct WeibullTestResult {
  double ks_distance = 0.0;
  bool pass = false;
};
WeibullTestResult weibull_limit_test(int d, int draws, std::uint64_t seed);

struct MatrixExpectationResult {
  double err_a = 0.0;  // E(eps A eps) against A'
  double err_b = 0.0;  // E(eps B eps') against tr(B) I
  double max_rel_err = 0.0;
};
// Errors are max-abs deviations divided by the Frobenius norm of the input
// matrix. A (n x d) and B (n x n) are drawn from the seed unless given.
MatrixExpectationResult matrix_expectation_test(int d, int n, int draws, std::uint64_t seed,
                                                const std::optional<Mat>& A = std::nullopt,
                                                const std::optional<Mat>& B = std::nullopt);

}  // namespace odeident

#include "odeident/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "odeident/dynamics.hpp"
#include "odeident/errors.hpp"
#include "odeident/harness.hpp"
#include "odeident/identcore.hpp"
#include "odeident/io.hpp"
#include "odeident/randgen.hpp"
#include "odeident/scores.hpp"
#include "odeident/selftest.hpp"
#include "odeident/twostage.hpp"

namespace odeident {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json matrix_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(num(M(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v(i)));
  return out;
}

json report() { return json{{"schema_version", 1}}; }

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorKind::IoError, "write failed for " + path);
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw UsageError(std::string(name) + " must be positive");
}

void require_nonnegative(double x, const char* name) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw UsageError(std::string(name) + " must be non-negative");
}

SmootherOperators make_operators(const TimeGrid& grid, const std::string& method, double lambda,
                                 int order) {
  if (method == "simple") return simple_operators(grid);
  return spline_operators(grid, lambda, order);
}

json jordan_json(const RealJordanForm& jf) {
  json blocks = json::array();
  for (const auto& b : jf.blocks) {
    json jb;
    if (b.kind == BlockKind::Real) {
      jb = {{"kind", "Real"}, {"c", num(b.c)}};
    } else {
      jb = {{"kind", "ComplexPair"}, {"a", num(b.a)}, {"b", num(b.b)}};
    }
    jb["column_start"] = b.column_start;
    blocks.push_back(jb);
  }
  return json{{"Q", matrix_json(jf.Q)}, {"blocks", blocks}, {"K1", jf.K1}, {"K2", jf.K2}};
}

std::optional<int> threads_opt(int threads) {
  return threads > 0 ? std::optional<int>(threads) : std::nullopt;
}

struct Options {
  std::string system, x0, data, truth, out, out_dir, out_records, out_auc, method = "spline",
                                                                         ensemble = "ginoe";
  double icis_tol = 1e-8, eig_tol = 1e-8, t0 = 0.0, t1 = 6.0, sigma = 0.05, lambda = 0.001;
  int n = 61, order = 4, d = 5, reps = 100, threads = 0, count = 1;
  std::uint64_t seed = 0;
  std::vector<int> dims{3, 5, 100};
};

int cmd_analyze(const Options& o) {
  const Mat A = read_matrix_csv(o.system);
  const Vec x0 = read_vector_csv(o.x0);
  if (A.rows() != A.cols() || A.rows() != x0.size())
    throw Error(ErrorKind::DimensionMismatch, "system and x0 sizes differ",
                {{"rows", double(A.rows())}, {"cols", double(A.cols())}, {"x0", double(x0.size())}});
  const auto v = is_identifiable(A, x0, o.icis_tol, o.eig_tol);
  json j = report();
  j["verdict"] = verdict_name(v.verdict);
  j["icis"] = num(v.icis);
  j["min_eigen_gap"] = num(v.gap);
  if (v.verdict == Verdict::UnidentifiableRepeatedEigen) {
    const auto cls = repeated_eigen_class(A, x0, o.eig_tol);
    j["w0_magnitudes"] = nullptr;
    j["class"] = {{"repeated_block",
                   {{"eigenvalue_re", num(cls.eigenvalue.real())},
                    {"eigenvalue_im", num(cls.eigenvalue.imag())},
                    {"multiplicity", cls.multiplicity},
                    {"U", matrix_json(cls.U)}}}};
    j["dof"] = cls.dof;
  } else {
    const auto jf = real_jordan(A, o.eig_tol);
    const auto bc = block_coefficients(jf, x0);
    j["w0_magnitudes"] = bc.magnitudes;
    j["jordan"] = jordan_json(jf);
    if (v.verdict == Verdict::UnidentifiableInitialCondition) {
      const auto cls = unidentifiable_class(jf, x0, o.icis_tol);
      j["class"] = {{"I0_diagonal", vector_json(cls.I0)}, {"zero_blocks", cls.zero_blocks}};
      j["dof"] = cls.dof;
    } else {
      j["class"] = nullptr;
      j["dof"] = 0;
    }
  }
  emit(j);
  return 0;
}

int cmd_class_sample(const Options& o) {
  const Mat A = read_matrix_csv(o.system);
  const Vec x0 = read_vector_csv(o.x0);
  if (A.rows() != A.cols() || A.rows() != x0.size())
    throw Error(ErrorKind::DimensionMismatch, "system and x0 sizes differ");
  const auto v = is_identifiable(A, x0, o.icis_tol, o.eig_tol);
  UnidentifiableClass cls;
  if (v.verdict == Verdict::UnidentifiableRepeatedEigen)
    cls = repeated_eigen_class(A, x0, o.eig_tol);
  else
    cls = unidentifiable_class(real_jordan(A, o.eig_tol), x0, o.icis_tol);
  std::filesystem::create_directories(o.out_dir);
  SeededRng rng(o.seed);
  const int p = cls.param_dim();
  json files = json::array();
  for (int k = 0; k < o.count; ++k) {
    Mat D(p, p);
    for (int c = 0; c < p; ++c)
      for (int r = 0; r < p; ++r) D(r, c) = rng.normal();
    const auto path = (std::filesystem::path(o.out_dir) / ("member_" + std::to_string(k + 1) + ".csv")).string();
    write_matrix_csv(path, class_member(cls, D));
    files.push_back(path);
  }
  json j = report();
  j["dof"] = cls.dof;
  j["files"] = files;
  emit(j);
  return 0;
}

int cmd_simulate(const Options& o) {
  require_nonnegative(o.sigma, "--sigma");
  if (o.n < 2 || !(o.t1 > o.t0)) throw UsageError("need --n >= 2 and --t1 > --t0");
  const Mat A = read_matrix_csv(o.system);
  const Vec x0 = read_vector_csv(o.x0);
  if (A.rows() != A.cols() || A.rows() != x0.size())
    throw Error(ErrorKind::DimensionMismatch, "system and x0 sizes differ");
  const auto grid = TimeGrid::uniform(o.t0, o.t1, o.n);
  const auto obs = add_noise(solve(A, x0, grid), o.sigma, o.seed);
  write_long_csv(o.out, obs.grid, obs.Y);
  json j = report();
  j["out"] = o.out;
  j["d"] = A.rows();
  j["n"] = o.n;
  emit(j);
  return 0;
}

int cmd_estimate(const Options& o) {
  require_positive(o.lambda, "--lambda");
  const auto obs = read_long_csv(o.data);
  const auto ops = make_operators(obs.grid, o.method, o.lambda, o.order);
  std::optional<Mat> truth;
  if (!o.truth.empty()) truth = read_matrix_csv(o.truth);
  const auto est = two_stage_estimate(obs.Y, ops, truth);
  json j = report();
  j["A_hat"] = matrix_json(est.A_hat);
  j["ree"] = est.ree ? num(*est.ree) : json(nullptr);
  j["gram_cond"] = num(est.gram_cond);
  emit(j);
  return 0;
}

int cmd_scores(const Options& o) {
  require_positive(o.lambda, "--lambda");
  if (o.system.empty() != o.x0.empty()) throw UsageError("--system and --x0 go together");
  const auto obs = read_long_csv(o.data);
  const auto ops = make_operators(obs.grid, o.method, o.lambda, o.order);
  std::optional<Mat> A;
  std::optional<Vec> x0;
  if (!o.system.empty()) {
    A = read_matrix_csv(o.system);
    x0 = read_vector_csv(o.x0);
  }
  const auto r = ident_report(obs.Y, ops, A, x0);
  json j = report();
  j["icis"] = r.icis ? num(*r.icis) : json(nullptr);
  j["scn"] = num(r.scn);
  j["pis"] = num(r.pis);
  j["kappa"] = num(r.kappa);
  j["d"] = r.d;
  j["n"] = r.n;
  j["lambda"] = r.lambda ? num(*r.lambda) : json(nullptr);
  j["w_negative"] = r.w_negative;
  j["gram_singular"] = r.gram_singular;
  j["repeated_eigenvalues"] = r.repeated_eigenvalues;
  emit(j);
  return 0;
}

int cmd_gen(const Options& o) {
  if (o.d < 1) throw UsageError("--d must be at least 1");
  SeededRng rng(o.seed);
  Mat M;
  if (o.ensemble == "ginoe")
    M = ginoe(o.d, rng);
  else if (o.ensemble == "goe")
    M = goe(o.d, rng);
  else if (o.ensemble == "haar")
    M = haar_orthogonal(o.d, rng);
  else
    M = uniform_sphere(o.d, rng);
  write_matrix_csv(o.out, M);
  json j = report();
  j["out"] = o.out;
  j["rows"] = M.rows();
  j["cols"] = M.cols();
  emit(j);
  return 0;
}

int cmd_sim1(const Options& o) {
  if (o.reps < 1) throw UsageError("--reps must be at least 1");
  Sim1Config cfg;
  cfg.reps = o.reps;
  cfg.seed = o.seed;
  cfg.threads = resolve_threads(threads_opt(o.threads));
  const auto res = run_sim1(cfg);
  std::ostringstream csv;
  csv << "replicate,icis,ree_noisy,ree_clean\n";
  for (const auto& r : res.records)
    csv << r.replicate << ',' << format_double(r.icis) << ',' << format_double(r.ree_noisy) << ','
        << format_double(r.ree_clean) << '\n';
  write_text(o.out, csv.str());
  json j = report();
  j["out"] = o.out;
  j["spearman_noisy"] = num(res.spearman_noisy);
  j["spearman_clean"] = num(res.spearman_clean);
  j["failed"] = res.failed;
  emit(j);
  return 0;
}

int cmd_sim2(const Options& o) {
  if (o.reps < 1) throw UsageError("--reps must be at least 1");
  Sim2Config cfg;
  cfg.reps = o.reps;
  cfg.seed = o.seed;
  cfg.threads = resolve_threads(threads_opt(o.threads));
  const auto res = run_sim2(cfg);
  std::ostringstream csv;
  csv << "replicate,case,label,noise,icis,scn,pis,kappa,gram_singular\n";
  for (const auto& r : res.records) {
    const bool positive = r.which == Sim2Case::A;
    for (int pass = 0; pass < 2; ++pass) {
      const ScoreSet& s = pass == 0 ? r.noisy : r.clean;
      csv << r.replicate << ',' << case_name(r.which) << ',' << (positive ? 1 : 0) << ','
          << (pass == 0 ? "noisy" : "clean") << ',' << format_double(s.icis) << ','
          << format_double(s.scn) << ',' << format_double(s.pis) << ',' << format_double(s.kappa)
          << ',' << (s.gram_singular ? 1 : 0) << '\n';
    }
  }
  write_text(o.out_records, csv.str());
  json auc = report();
  json table = json::object();
  for (const auto& [key, roc] : res.auc_table) table[key] = num(roc.auc);
  auc["auc"] = table;
  write_text(o.out_auc, auc.dump(2) + "\n");
  emit(auc);
  return 0;
}

int cmd_dimscale(const Options& o) {
  if (o.reps < 1) throw UsageError("--reps must be at least 1");
  if (o.dims.empty()) throw UsageError("--dims must be non-empty");
  for (int d : o.dims)
    if (d < 1) throw UsageError("--dims entries must be at least 1");
  const Ensemble ens = o.ensemble == "goe" ? Ensemble::GOE : Ensemble::GinOE;
  const auto recs = run_dimension_scaling(o.dims, o.reps, ens, o.seed,
                                          resolve_threads(threads_opt(o.threads)));
  std::ostringstream csv;
  csv << "d,replicate,icis,failed\n";
  int failed = 0;
  for (const auto& r : recs) {
    csv << r.d << ',' << r.replicate << ',' << format_double(r.icis) << ',' << (r.failed ? 1 : 0) << '\n';
    failed += r.failed ? 1 : 0;
  }
  write_text(o.out, csv.str());
  json j = report();
  j["out"] = o.out;
  j["records"] = recs.size();
  j["failed"] = failed;
  emit(j);
  return 0;
}

int cmd_selftest(const Options& o) {
  const auto results = run_selftest(resolve_threads(threads_opt(o.threads)));
  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(11) << r.module
              << std::setw(42) << r.name << std::right << std::fixed << std::setprecision(2)
              << std::setw(7) << r.seconds << "s  " << r.detail << "\n";
    failed += r.passed ? 0 : 1;
  }
  std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 ? 0 : 2;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv) {
  Options o;
  CLI::App app{"Identifiability analysis for linear ODE systems", "ident"};
  app.require_subcommand(1);
  auto seed_opt = [&](CLI::App* c) { c->add_option("--seed", o.seed, "RNG seed")->required(); };
  auto threads_flag = [&](CLI::App* c) {
    c->add_option("--threads", o.threads, "worker cap (default IDENT_THREADS or 1)")
        ->check(CLI::PositiveNumber);
  };
  auto smoother = [&](CLI::App* c) {
    c->add_option("--method", o.method, "simple or spline")
        ->check(CLI::IsMember({"simple", "spline"}));
    c->add_option("--lambda", o.lambda, "roughness penalty");
    c->add_option("--order", o.order, "spline order")->check(CLI::Range(2, 10));
  };

  auto* analyze = app.add_subcommand("analyze", "identifiability verdict for (A, x0)");
  analyze->add_option("--system", o.system, "A as CSV")->required()->check(CLI::ExistingFile);
  analyze->add_option("--x0", o.x0, "x0 as CSV")->required()->check(CLI::ExistingFile);
  analyze->add_option("--icis-tol", o.icis_tol)->check(CLI::PositiveNumber);
  analyze->add_option("--eig-tol", o.eig_tol)->check(CLI::PositiveNumber);

  auto* sample = app.add_subcommand("class-sample", "random members of the unidentifiable class");
  sample->add_option("--system", o.system)->required()->check(CLI::ExistingFile);
  sample->add_option("--x0", o.x0)->required()->check(CLI::ExistingFile);
  sample->add_option("--n", o.count, "number of members")->required()->check(CLI::PositiveNumber);
  sample->add_option("--out-dir", o.out_dir)->required();
  sample->add_option("--icis-tol", o.icis_tol)->check(CLI::PositiveNumber);
  sample->add_option("--eig-tol", o.eig_tol)->check(CLI::PositiveNumber);
  seed_opt(sample);

  auto* simulate = app.add_subcommand("simulate", "noisy trajectory samples");
  simulate->add_option("--system", o.system)->required()->check(CLI::ExistingFile);
  simulate->add_option("--x0", o.x0)->required()->check(CLI::ExistingFile);
  simulate->add_option("--t0", o.t0);
  simulate->add_option("--t1", o.t1);
  simulate->add_option("--n", o.n);
  simulate->add_option("--sigma", o.sigma);
  simulate->add_option("--out", o.out)->required();
  seed_opt(simulate);

  auto* estimate = app.add_subcommand("estimate", "two-stage estimate of A");
  estimate->add_option("--data", o.data, "long-format CSV")->required()->check(CLI::ExistingFile);
  estimate->add_option("--truth", o.truth)->check(CLI::ExistingFile);
  smoother(estimate);

  auto* scores = app.add_subcommand("scores", "identifiability scores of observed data");
  scores->add_option("--data", o.data)->required()->check(CLI::ExistingFile);
  scores->add_option("--system", o.system)->check(CLI::ExistingFile);
  scores->add_option("--x0", o.x0)->check(CLI::ExistingFile);
  smoother(scores);

  auto* gen = app.add_subcommand("gen", "random matrix or vector");
  gen->add_option("--ensemble", o.ensemble)
      ->required()
      ->check(CLI::IsMember({"ginoe", "goe", "haar", "sphere"}));
  gen->add_option("--d", o.d)->required();
  gen->add_option("--out", o.out)->required();
  seed_opt(gen);

  auto* sim1 = app.add_subcommand("sim1", "ICIS versus estimation error");
  sim1->add_option("--reps", o.reps);
  sim1->add_option("--out", o.out)->required();
  seed_opt(sim1);
  threads_flag(sim1);

  auto* sim2 = app.add_subcommand("sim2", "score discrimination between paired systems");
  sim2->add_option("--reps", o.reps);
  sim2->add_option("--out-records", o.out_records)->required();
  sim2->add_option("--out-auc", o.out_auc)->required();
  seed_opt(sim2);
  threads_flag(sim2);

  auto* dimscale = app.add_subcommand("dimscale", "ICIS across dimensions");
  dimscale->add_option("--dims", o.dims)->delimiter(',');
  dimscale->add_option("--reps", o.reps);
  dimscale->add_option("--ensemble", o.ensemble)->check(CLI::IsMember({"ginoe", "goe"}));
  dimscale->add_option("--out", o.out)->required();
  seed_opt(dimscale);
  threads_flag(dimscale);

  auto* selftest = app.add_subcommand("selftest", "run the property suites");
  threads_flag(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(o);
    if (sample->parsed()) return cmd_class_sample(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (estimate->parsed()) return cmd_estimate(o);
    if (scores->parsed()) return cmd_scores(o);
    if (gen->parsed()) return cmd_gen(o);
    if (sim1->parsed()) return cmd_sim1(o);
    if (sim2->parsed()) return cmd_sim2(o);
    if (dimscale->parsed()) return cmd_dimscale(o);
    if (selftest->parsed()) return cmd_selftest(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    json j = {{"error", e.kind_name()}, {"message", e.what()}};
    for (const auto& [k, v] : e.fields()) j[k] = num(v);
    j["schema_version"] = 1;
    std::cout << j.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json j = {{"error", "InternalError"}, {"message", e.what()}, {"schema_version", 1}};
    std::cout << j.dump() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace odeident

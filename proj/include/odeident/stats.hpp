#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace odeident {

// Ranks 1..n with ties given their average rank.
std::vector<double> average_ranks(const std::vector<double>& x);

double pearson(const std::vector<double>& x, const std::vector<double>& y);
double spearman(const std::vector<double>& x, const std::vector<double>& y);

enum class Orientation { HigherIsPositive, LowerIsPositive };

struct RocResult {
  double auc = 0.0;
  std::vector<std::pair<double, double>> curve;  // (fpr, tpr), from (0,0) to (1,1)
};

// Tied scores form a single threshold; area by the trapezoid rule.
RocResult roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels,
                  Orientation orientation);

// One-sample Kolmogorov-Smirnov distance.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

double normal_cdf(double x);
double weibull_cdf(double x, double scale, double shape);
double median(std::vector<double> x);

}  // namespace odeident

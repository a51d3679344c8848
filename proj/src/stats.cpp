#include "odeident/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "odeident/errors.hpp"

namespace odeident {

std::vector<double> average_ranks(const std::vector<double>& x) {
  const size_t n = x.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::DegenerateInput, "correlation needs two equal-length samples of size >= 2");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error(ErrorKind::DegenerateInput, "correlation of a constant sample");
  return sxy / std::sqrt(sxx * syy);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::DegenerateInput, "correlation needs two equal-length samples of size >= 2");
  for (size_t i = 0; i < x.size(); ++i)
    if (std::isnan(x[i]) || std::isnan(y[i]))
      throw Error(ErrorKind::DegenerateInput, "NaN in correlation input");
  return pearson(average_ranks(x), average_ranks(y));
}

RocResult roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels,
                  Orientation orientation) {
  if (scores.size() != labels.size() || scores.size() < 2)
    throw Error(ErrorKind::DegenerateInput, "ROC needs equal-length inputs of size >= 2");
  std::vector<double> s(scores.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (std::isnan(scores[i])) throw Error(ErrorKind::DegenerateInput, "NaN score");
    s[i] = orientation == Orientation::HigherIsPositive ? scores[i] : -scores[i];
  }
  const double P = static_cast<double>(std::count(labels.begin(), labels.end(), true));
  const double N = static_cast<double>(labels.size()) - P;
  if (P == 0.0 || N == 0.0)
    throw Error(ErrorKind::DegenerateInput, "ROC needs both classes");
  std::vector<size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return s[a] > s[b]; });
  RocResult out;
  out.curve.emplace_back(0.0, 0.0);
  double tp = 0.0, fp = 0.0;
  size_t i = 0;
  while (i < idx.size()) {
    size_t j = i;
    while (j < idx.size() && s[idx[j]] == s[idx[i]]) {
      if (labels[idx[j]]) tp += 1.0; else fp += 1.0;
      ++j;
    }
    const auto prev = out.curve.back();
    const std::pair<double, double> pt(fp / N, tp / P);
    out.auc += (pt.first - prev.first) * 0.5 * (pt.second + prev.second);
    out.curve.push_back(pt);
    i = j;
  }
  return out;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorKind::DegenerateInput, "KS needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double dmax = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    dmax = std::max({dmax, (i + 1) / n - F, F - i / n});
  }
  return dmax;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double weibull_cdf(double x, double scale, double shape) {
  if (x <= 0.0) return 0.0;
  return 1.0 - std::exp(-std::pow(x / scale, shape));
}

double median(std::vector<double> x) {
  if (x.empty()) throw Error(ErrorKind::DegenerateInput, "median of an empty sample");
  std::sort(x.begin(), x.end());
  const size_t m = x.size() / 2;
  return x.size() % 2 ? x[m] : 0.5 * (x[m - 1] + x[m]);
}

}  // namespace odeident

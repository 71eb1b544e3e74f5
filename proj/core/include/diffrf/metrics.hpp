#pragma once

#include <utility>
#include <vector>

#include "diffrf/matrix.hpp"

namespace diffrf {

// All metrics treat label 1 (anomaly) as the positive class and expect
// higher score = more anomalous.

// Probability that a random positive outranks a random negative, ties worth
// one half. Equals the trapezoid area under roc_curve.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

// (fpr, tpr) points from (0,0) to (1,1), one step per distinct score,
// descending threshold order.
std::vector<std::pair<double, double>> roc_curve(const std::vector<double>& scores,
                                                 const std::vector<int>& labels);

// Step-wise average precision over the descending-score ranking; ties keep
// their input order (stable sort).
double average_precision(const std::vector<double>& scores, const std::vector<int>& labels);

// Rate at the FPR = FNR crossing, linearly interpolated between the two
// adjacent thresholds.
double equal_error_rate(const std::vector<double>& scores, const std::vector<int>& labels);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov: sup |ECDF_a - ECDF_b|, p-value from the
// asymptotic Kolmogorov distribution at effective size n_a n_b / (n_a + n_b),
// floored at 2.22e-16.
KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);

// The p-value ks_two_sample would assign to `statistic` at the given sample
// sizes.
double ks_p_value(double statistic, std::size_t n_a, std::size_t n_b);

struct EvalReport {
  double auc = 0.0;
  double ap = 0.0;
  double eer = 0.0;
  std::vector<std::pair<double, double>> roc;
};

EvalReport evaluate_scores(const std::vector<double>& scores, const std::vector<int>& labels);

}  // namespace diffrf

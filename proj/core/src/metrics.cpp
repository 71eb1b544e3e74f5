#include "diffrf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace diffrf {

namespace {

void check_two_classes(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw DataError("metric: scores/labels length mismatch");
  std::size_t pos = 0;
  for (int l : labels) pos += l != 0 ? 1 : 0;
  if (pos == 0 || pos == labels.size())
    throw DataError("metric: both classes must be present");
}

// Descending-score order; ties keep input order.
std::vector<std::size_t> rank_order(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  check_two_classes(scores, labels);
  auto order = rank_order(scores);
  double n_pos = 0, n_neg = 0;
  for (int l : labels) (l != 0 ? n_pos : n_neg) += 1;
  // Walking scores high to low: a positive loses to every negative already
  // seen (strictly higher score) and splits ties within its own group.
  double losses = 0.0, neg_above = 0.0;
  std::size_t i = 0, n = order.size();
  while (i < n) {
    std::size_t j = i;
    double tie_pos = 0, tie_neg = 0;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] != 0 ? tie_pos : tie_neg) += 1;
      ++j;
    }
    losses += tie_pos * neg_above + 0.5 * tie_pos * tie_neg;
    neg_above += tie_neg;
    i = j;
  }
  return 1.0 - losses / (n_pos * n_neg);
}

std::vector<std::pair<double, double>> roc_curve(const std::vector<double>& scores,
                                                 const std::vector<int>& labels) {
  check_two_classes(scores, labels);
  auto order = rank_order(scores);
  double n_pos = 0, n_neg = 0;
  for (int l : labels) (l != 0 ? n_pos : n_neg) += 1;
  std::vector<std::pair<double, double>> pts;
  pts.emplace_back(0.0, 0.0);
  double tp = 0, fp = 0;
  std::size_t i = 0, n = order.size();
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] != 0 ? tp : fp) += 1;
      ++j;
    }
    pts.emplace_back(fp / n_neg, tp / n_pos);
    i = j;
  }
  return pts;
}

double average_precision(const std::vector<double>& scores, const std::vector<int>& labels) {
  check_two_classes(scores, labels);
  auto order = rank_order(scores);
  double n_pos = 0;
  for (int l : labels) n_pos += l != 0 ? 1 : 0;
  double tp = 0.0, ap = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] == 0) continue;
    tp += 1.0;
    ap += (tp / static_cast<double>(k + 1)) / n_pos;
  }
  return ap;
}

double equal_error_rate(const std::vector<double>& scores, const std::vector<int>& labels) {
  check_two_classes(scores, labels);
  auto order = rank_order(scores);
  double n_pos = 0, n_neg = 0;
  for (int l : labels) (l != 0 ? n_pos : n_neg) += 1;
  // Walk thresholds from strictest (flag nothing) to loosest (flag all);
  // FPR rises 0 -> 1 while FNR falls 1 -> 0. Interpolate at the crossing.
  double fp = 0, tp = 0;
  double prev_fpr = 0.0, prev_fnr = 1.0;
  std::size_t i = 0, n = order.size();
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] != 0 ? tp : fp) += 1;
      ++j;
    }
    double fpr = fp / n_neg, fnr = 1.0 - tp / n_pos;
    if (fpr >= fnr) {
      double den = (fpr - prev_fpr) - (fnr - prev_fnr);
      double s = den == 0.0 ? 0.0 : (prev_fnr - prev_fpr) / den;
      return prev_fpr + s * (fpr - prev_fpr);
    }
    prev_fpr = fpr;
    prev_fnr = fnr;
    i = j;
  }
  return prev_fpr;  // unreachable: the final step has fpr = 1 >= fnr = 0
}

KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw DataError("ks_two_sample: empty sample");
  std::vector<double> sa(a), sb(b);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = ks_p_value(d, sa.size(), sb.size());
  return r;
}

double ks_p_value(double statistic, std::size_t n_a, std::size_t n_b) {
  double na = static_cast<double>(n_a), nb = static_cast<double>(n_b);
  double ne = na * nb / (na + nb);
  double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * statistic;
  // Asymptotic Kolmogorov survival function. The alternating series only
  // converges usefully for moderate lambda; when it fails to settle within
  // 100 terms (lambda near 0) the limit is 1.
  double p = 1.0;
  double sum = 0.0, prev_term = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * (k % 2 == 1 ? 1.0 : -1.0) *
                  std::exp(-2.0 * static_cast<double>(k) * static_cast<double>(k) * lambda * lambda);
    sum += term;
    if (std::abs(term) <= 1e-3 * prev_term || std::abs(term) <= 1e-10 * std::abs(sum)) {
      p = sum;
      break;
    }
    prev_term = std::abs(term);
  }
  return std::clamp(p, 2.22e-16, 1.0);
}

EvalReport evaluate_scores(const std::vector<double>& scores, const std::vector<int>& labels) {
  EvalReport r;
  r.auc = roc_auc(scores, labels);
  r.ap = average_precision(scores, labels);
  r.eer = equal_error_rate(scores, labels);
  r.roc = roc_curve(scores, labels);
  return r;
}

}  // namespace diffrf

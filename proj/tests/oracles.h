#pragma once

// Definitional reference implementations, kept deliberately naive.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace fsbench::oracle {

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// rank = 1 + #smaller + (#equal - 1) / 2
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t smaller = 0, equal = 0;
    for (double w : v) {
      smaller += w < v[i];
      equal += w == v[i];
    }
    r[i] = 1.0 + smaller + (equal - 1) / 2.0;
  }
  return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

// Orderings of the same items; tau-a over all item pairs.
inline double kendall(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  const std::size_t n = a.size();
  std::vector<std::size_t> pa(n), pb(n);
  for (std::size_t i = 0; i < n; ++i) {
    pa[a[i]] = i;
    pb[b[i]] = i;
  }
  long conc = 0, disc = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const bool sa = pa[u] < pa[v];
      const bool sb = pb[u] < pb[v];
      (sa == sb ? conc : disc) += 1;
    }
  }
  return static_cast<double>(conc - disc) / (n * (n - 1) / 2.0);
}

inline std::size_t bin_of(double v, double lo, double hi, std::size_t bins) {
  if (hi == lo) return 0;
  for (std::size_t b = 1; b < bins; ++b) {
    if ((v - lo) / (hi - lo) * bins < static_cast<double>(b)) return b - 1;
  }
  return bins - 1;
}

// I(X;Y) = sum p(x,y) log(p(x,y) / (p(x) p(y))) with x equal-width binned and
// y taken as discrete codes.
inline double mutual_information(const std::vector<double>& x, const std::vector<double>& y,
                                 std::size_t bins) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  std::map<std::pair<std::size_t, double>, double> joint;
  std::map<std::size_t, double> px;
  std::map<double, double> py;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t b = bin_of(x[i], *lo, *hi, bins);
    joint[{b, y[i]}] += 1;
    px[b] += 1;
    py[y[i]] += 1;
  }
  double mi = 0;
  for (const auto& [key, c] : joint) {
    mi += c / n * std::log((c / n) / ((px[key.first] / n) * (py[key.second] / n)));
  }
  return std::max(0.0, mi);
}

// P(score_pos > score_neg) + 0.5 P(tie) over all positive/negative pairs.
inline double binary_auc(const std::vector<double>& scores, const std::vector<bool>& positive) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j]) continue;
      pairs += 1;
      wins += scores[i] > scores[j] ? 1.0 : (scores[i] == scores[j] ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

inline double macro_auc(const std::vector<std::vector<double>>& scores,
                        const std::vector<int>& labels, std::size_t k) {
  std::vector<double> col(scores.size());
  std::vector<bool> pos(scores.size());
  if (k == 2) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      col[i] = scores[i][1];
      pos[i] = labels[i] == 1;
    }
    return binary_auc(col, pos);
  }
  double total = 0;
  std::size_t used = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      col[i] = scores[i][c];
      pos[i] = labels[i] == static_cast<int>(c);
      n_pos += pos[i];
    }
    if (n_pos == 0 || n_pos == scores.size()) continue;
    total += binary_auc(col, pos);
    ++used;
  }
  return total / used;
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
  // Pascal's triangle, saturating at a large sentinel.
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (std::size_t j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c[n][k] > 1e18 ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(c[n][k]);
}

}  // namespace fsbench::oracle

// In-repo baseline learners behind fit_estimator.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "fsbench/error.h"
#include "fsbench/models.h"

namespace fsbench {
namespace {

constexpr double kTolerance = 1e-12;

std::vector<double> softmax(std::span<const double> logits) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - peak);
    total += out[k];
  }
  for (double& p : out) p /= total;
  return out;
}

Prediction classification_prediction(std::vector<double> probabilities, int label) {
  Prediction p;
  p.label = label;
  p.value = static_cast<double>(label);
  p.probabilities = std::move(probabilities);
  return p;
}

Prediction classification_prediction(std::vector<double> probabilities) {
  const int label = argmax_label(probabilities);
  return classification_prediction(std::move(probabilities), label);
}

Prediction regression_prediction(double value) {
  Prediction p;
  p.value = value;
  return p;
}

std::vector<double> class_frequencies(std::span<const double> targets, std::size_t k) {
  std::vector<double> freq(k, 0.0);
  for (double y : targets) freq[static_cast<std::size_t>(y)] += 1.0;
  for (double& f : freq) f /= static_cast<double>(targets.size());
  return freq;
}

std::size_t distinct_classes(std::span<const double> targets) {
  std::vector<double> v(targets.begin(), targets.end());
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

// Train-statistic standardization; zero-variance columns are dropped.
struct Standardizer {
  std::vector<std::size_t> active;
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Matrix& x) {
    Standardizer s;
    const auto n = static_cast<double>(x.rows());
    for (std::size_t c = 0; c < x.cols(); ++c) {
      double m = 0.0;
      for (std::size_t r = 0; r < x.rows(); ++r) m += x(r, c);
      m /= n;
      double var = 0.0;
      for (std::size_t r = 0; r < x.rows(); ++r) var += (x(r, c) - m) * (x(r, c) - m);
      const double sd = std::sqrt(var / n);
      bool constant = true;
      for (std::size_t r = 1; r < x.rows() && constant; ++r) constant = x(r, c) == x(0, c);
      if (!constant && sd > 0.0) {
        s.active.push_back(c);
        s.mean.push_back(m);
        s.scale.push_back(sd);
      }
    }
    return s;
  }

  std::vector<double> apply(std::span<const double> row) const {
    std::vector<double> out(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      out[i] = (row[active[i]] - mean[i]) / scale[i];
    }
    return out;
  }

  std::size_t dropped(std::size_t total) const { return total - active.size(); }
};

void note_dropped(std::vector<std::string>& warnings, const Standardizer& s,
                  std::size_t total) {
  if (s.dropped(total) > 0) {
    warnings.push_back(std::to_string(s.dropped(total)) +
                       " zero-variance feature(s) ignored by the learner");
  }
}

// ----------------------------------------------------------------------------

class MajorityOrMean final : public Estimator {
 public:
  MajorityOrMean(const Matrix& x, std::span<const double> y, TaskKind task, std::size_t k)
      : Estimator(x.cols(), task, k) {
    if (is_classification(task)) {
      probabilities_ = class_frequencies(y, k);
    } else {
      mean_ = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    }
  }

  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 protected:
  Prediction predict_row(std::span<const double>) const override {
    if (is_classification(task())) return classification_prediction(probabilities_);
    return regression_prediction(mean_);
  }

 private:
  std::vector<double> probabilities_;
  double mean_ = 0.0;
};

class LinearRegression final : public Estimator {
 public:
  LinearRegression(const Matrix& x, std::span<const double> y, double ridge)
      : Estimator(x.cols(), TaskKind::kRegression, 0) {
    const auto n = static_cast<Eigen::Index>(x.rows());
    const auto d = static_cast<Eigen::Index>(x.cols());
    Eigen::MatrixXd design(n, d + 1);
    Eigen::VectorXd target(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) {
        design(r, c) = x(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      }
      design(r, d) = 1.0;
      target(r) = y[static_cast<std::size_t>(r)];
    }
    Eigen::MatrixXd gram = design.transpose() * design;
    for (Eigen::Index c = 0; c < d; ++c) gram(c, c) += ridge;
    const Eigen::VectorXd solution = gram.ldlt().solve(design.transpose() * target);
    weights_.assign(solution.data(), solution.data() + d);
    intercept_ = solution(d);
  }

  const std::vector<double>& weights() const { return weights_; }
  double intercept() const { return intercept_; }

 protected:
  Prediction predict_row(std::span<const double> row) const override {
    double v = intercept_;
    for (std::size_t c = 0; c < weights_.size(); ++c) v += weights_[c] * row[c];
    return regression_prediction(v);
  }

 private:
  std::vector<double> weights_;
  double intercept_ = 0.0;
};

// Multinomial logistic regression, full-batch gradient descent on mean
// cross-entropy over standardized features.
class LogisticRegression final : public Estimator {
 public:
  LogisticRegression(const Matrix& x, std::span<const double> y, TaskKind task,
                     std::size_t k, std::size_t epochs, double step)
      : Estimator(x.cols(), task, k), standardizer_(Standardizer::fit(x)) {
    note_dropped(warnings_, standardizer_, x.cols());
    const std::size_t n = x.rows();
    const std::size_t d = standardizer_.active.size();
    std::vector<std::vector<double>> z(n);
    for (std::size_t r = 0; r < n; ++r) z[r] = standardizer_.apply(x.row(r));

    weights_.assign(k, std::vector<double>(d, 0.0));
    bias_.assign(k, 0.0);
    std::vector<std::vector<double>> grad_w(k, std::vector<double>(d));
    std::vector<double> grad_b(k);
    std::vector<double> logits(k);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
      for (auto& g : grad_w) std::fill(g.begin(), g.end(), 0.0);
      std::fill(grad_b.begin(), grad_b.end(), 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < k; ++c) logits[c] = score(c, z[r]);
        const std::vector<double> p = softmax(logits);
        const auto truth = static_cast<std::size_t>(y[r]);
        for (std::size_t c = 0; c < k; ++c) {
          const double err = p[c] - (c == truth ? 1.0 : 0.0);
          grad_b[c] += err;
          for (std::size_t j = 0; j < d; ++j) grad_w[c][j] += err * z[r][j];
        }
      }
      for (std::size_t c = 0; c < k; ++c) {
        bias_[c] -= step * grad_b[c] * inv_n;
        for (std::size_t j = 0; j < d; ++j) weights_[c][j] -= step * grad_w[c][j] * inv_n;
      }
    }
  }

 protected:
  Prediction predict_row(std::span<const double> row) const override {
    const std::vector<double> z = standardizer_.apply(row);
    std::vector<double> logits(num_classes());
    for (std::size_t c = 0; c < logits.size(); ++c) logits[c] = score(c, z);
    return classification_prediction(softmax(logits));
  }

 private:
  double score(std::size_t c, std::span<const double> z) const {
    double s = bias_[c];
    for (std::size_t j = 0; j < z.size(); ++j) s += weights_[c][j] * z[j];
    return s;
  }

  Standardizer standardizer_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> bias_;
};

// k nearest neighbours on standardized features. Every train row tied with
// the k-th distance joins the vote; a tied vote goes to the class whose
// nearest member is closest.
class KNearestNeighbors final : public Estimator {
 public:
  KNearestNeighbors(const Matrix& x, std::span<const double> y, TaskKind task,
                    std::size_t num_classes, std::size_t k)
      : Estimator(x.cols(), task, num_classes),
        standardizer_(Standardizer::fit(x)),
        targets_(y.begin(), y.end()),
        k_(std::max<std::size_t>(1, std::min(k, x.rows()))) {
    note_dropped(warnings_, standardizer_, x.cols());
    train_.reserve(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) train_.push_back(standardizer_.apply(x.row(r)));
  }

 protected:
  Prediction predict_row(std::span<const double> row) const override {
    const std::vector<double> z = standardizer_.apply(row);
    std::vector<std::pair<double, std::size_t>> dist(train_.size());
    for (std::size_t i = 0; i < train_.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        const double diff = train_[i][j] - z[j];
        s += diff * diff;
      }
      dist[i] = {s, i};
    }
    std::sort(dist.begin(), dist.end());
    std::size_t m = k_;
    while (m < dist.size() && dist[m].first == dist[k_ - 1].first) ++m;

    if (!is_classification(task())) {
      double sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) sum += targets_[dist[i].second];
      return regression_prediction(sum / static_cast<double>(m));
    }
    std::vector<double> votes(num_classes(), 0.0);
    std::vector<std::size_t> first_seen(num_classes(), m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto c = static_cast<std::size_t>(targets_[dist[i].second]);
      votes[c] += 1.0;
      first_seen[c] = std::min(first_seen[c], i);
    }
    int label = 0;
    for (std::size_t c = 1; c < votes.size(); ++c) {
      const auto best = static_cast<std::size_t>(label);
      if (votes[c] > votes[best] ||
          (votes[c] == votes[best] && first_seen[c] < first_seen[best])) {
        label = static_cast<int>(c);
      }
    }
    for (double& v : votes) v /= static_cast<double>(m);
    return classification_prediction(std::move(votes), label);
  }

 private:
  Standardizer standardizer_;
  std::vector<std::vector<double>> train_;
  std::vector<double> targets_;
  std::size_t k_;
};

// ----------------------------------------------------------------------------
// Trees

struct TreeNode {
  // Internal nodes: rows with x[feature] <= threshold go left.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  // Leaves.
  double value = 0.0;
  int label = -1;
  std::vector<double> probabilities;
};

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Best axis-aligned split of `rows` under either Gini (classification) or
// squared error (regression). Candidates are midpoints between consecutive
// distinct values; the first strictly best candidate wins.
SplitChoice best_split(const Matrix& x, std::span<const double> y,
                       const std::vector<std::size_t>& rows,
                       bool classification, std::size_t num_classes, std::size_t min_leaf) {
  SplitChoice best;
  const std::size_t n = rows.size();
  if (n < 2 * min_leaf) return best;

  auto impurity_sum = [&](const std::vector<double>& counts, double total, double sum,
                          double sum_sq) {
    if (classification) {
      double g = total;
      for (double c : counts) g -= c * c / total;
      return g;  // total * gini
    }
    return sum_sq - sum * sum / total;  // total * variance
  };

  std::vector<double> all_counts(num_classes, 0.0);
  double all_sum = 0.0, all_sq = 0.0, all_w = 0.0;
  for (std::size_t r : rows) {
    all_w += 1.0;
    if (classification) {
      all_counts[static_cast<std::size_t>(y[r])] += 1.0;
    } else {
      all_sum += y[r];
      all_sq += y[r] * y[r];
    }
  }
  const double parent = impurity_sum(all_counts, all_w, all_sum, all_sq);

  std::vector<std::size_t> sorted = rows;
  std::vector<double> left_counts(num_classes), right_counts(num_classes);
  for (std::size_t f = 0; f < x.cols(); ++f) {
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
    if (x(sorted.front(), f) == x(sorted.back(), f)) continue;
    std::fill(left_counts.begin(), left_counts.end(), 0.0);
    double left_sum = 0.0, left_sq = 0.0, left_w = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t r = sorted[i];
      left_w += 1.0;
      if (classification) {
        left_counts[static_cast<std::size_t>(y[r])] += 1.0;
      } else {
        left_sum += y[r];
        left_sq += y[r] * y[r];
      }
      const double here = x(r, f);
      const double next = x(sorted[i + 1], f);
      if (here == next) continue;
      if (i + 1 < min_leaf || n - i - 1 < min_leaf) continue;
      for (std::size_t c = 0; c < num_classes; ++c) right_counts[c] = all_counts[c] - left_counts[c];
      const double children =
          impurity_sum(left_counts, left_w, left_sum, left_sq) +
          impurity_sum(right_counts, all_w - left_w, all_sum - left_sum, all_sq - left_sq);
      const double gain = parent - children;
      if (gain > best.gain + kTolerance) {
        best.feature = static_cast<int>(f);
        best.threshold = here + (next - here) / 2.0;
        if (best.threshold >= next) best.threshold = here;
        best.gain = gain;
      }
    }
  }
  return best;
}

class DecisionTree final : public Estimator {
 public:
  DecisionTree(const Matrix& x, std::span<const double> y, TaskKind task,
               std::size_t num_classes, std::size_t max_depth, std::size_t min_leaf)
      : Estimator(x.cols(), task, num_classes), max_depth_(max_depth),
        min_leaf_(std::max<std::size_t>(1, min_leaf)) {
    std::vector<std::size_t> rows(x.rows());
    std::iota(rows.begin(), rows.end(), 0);
    build(x, y, rows, 0);
  }

  std::size_t node_count() const { return nodes_.size(); }

 protected:
  Prediction predict_row(std::span<const double> row) const override {
    const TreeNode* node = &nodes_.front();
    while (node->feature >= 0) {
      node = &nodes_[static_cast<std::size_t>(
          row[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                           : node->right)];
    }
    if (is_classification(task())) {
      return classification_prediction(node->probabilities, node->label);
    }
    return regression_prediction(node->value);
  }

 private:
  int build(const Matrix& x, std::span<const double> y, const std::vector<std::size_t>& rows,
            std::size_t depth) {
    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const bool classification = is_classification(task());
    SplitChoice choice;
    if (depth < max_depth_) {
      choice = best_split(x, y, rows, classification, num_classes(), min_leaf_);
    }
    if (choice.feature < 0) {
      make_leaf(nodes_[static_cast<std::size_t>(index)], y, rows);
      return index;
    }
    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (x(r, static_cast<std::size_t>(choice.feature)) <= choice.threshold ? left : right)
          .push_back(r);
    }
    const int l = build(x, y, left, depth + 1);
    const int r = build(x, y, right, depth + 1);
    TreeNode& node = nodes_[static_cast<std::size_t>(index)];
    node.feature = choice.feature;
    node.threshold = choice.threshold;
    node.left = l;
    node.right = r;
    return index;
  }

  // Leaf label ties go to the tied class whose earliest train row comes
  // first, which keeps predictions equivariant under class relabeling.
  void make_leaf(TreeNode& node, std::span<const double> y,
                 const std::vector<std::size_t>& rows) const {
    if (!is_classification(task())) {
      double s = 0.0;
      for (std::size_t r : rows) s += y[r];
      node.value = s / static_cast<double>(rows.size());
      return;
    }
    std::vector<double> counts(num_classes(), 0.0);
    std::vector<std::size_t> first(num_classes(), std::numeric_limits<std::size_t>::max());
    for (std::size_t r : rows) {
      const auto c = static_cast<std::size_t>(y[r]);
      counts[c] += 1.0;
      first[c] = std::min(first[c], r);
    }
    std::size_t label = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
      if (counts[c] > counts[label] || (counts[c] == counts[label] && first[c] < first[label])) {
        label = c;
      }
    }
    for (double& c : counts) c /= static_cast<double>(rows.size());
    node.probabilities = std::move(counts);
    node.label = static_cast<int>(label);
    node.value = static_cast<double>(label);
  }

  std::size_t max_depth_;
  std::size_t min_leaf_;
  std::vector<TreeNode> nodes_;
};

struct Stump {
  int feature = -1;  // -1: constant stump
  double threshold = 0.0;
  double left = 0.0;
  double right = 0.0;

  double operator()(std::span<const double> row) const {
    if (feature < 0) return left;
    return row[static_cast<std::size_t>(feature)] <= threshold ? left : right;
  }
};

// Gradient boosting with depth-1 regression trees: squared loss for
// regression, softmax log loss (one stump per class per round, Newton leaf
// values) for classification.
class BoostedStumps final : public Estimator {
 public:
  BoostedStumps(const Matrix& x, std::span<const double> y, TaskKind task,
                std::size_t num_classes, std::size_t rounds, double shrinkage,
                std::size_t min_leaf)
      : Estimator(x.cols(), task, num_classes), shrinkage_(shrinkage) {
    const std::size_t n = x.rows();
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    min_leaf = std::max<std::size_t>(1, min_leaf);

    if (!is_classification(task)) {
      init_.assign(1, std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n));
      std::vector<double> f(n, init_[0]), residual(n);
      stumps_.resize(1);
      for (std::size_t round = 0; round < rounds; ++round) {
        for (std::size_t r = 0; r < n; ++r) residual[r] = y[r] - f[r];
        Stump s = fit_stump(x, residual, rows, min_leaf,
                            [&](const std::vector<std::size_t>& leaf) {
                              double sum = 0.0;
                              for (std::size_t r : leaf) sum += residual[r];
                              return sum / static_cast<double>(leaf.size());
                            });
        for (std::size_t r = 0; r < n; ++r) f[r] += shrinkage_ * s(x.row(r));
        stumps_[0].push_back(s);
      }
      return;
    }

    const std::size_t k = num_classes;
    const std::vector<double> prior = class_frequencies(y, k);
    init_.resize(k);
    for (std::size_t c = 0; c < k; ++c) init_[c] = std::log(std::max(prior[c], 1e-12));
    std::vector<std::vector<double>> f(n, init_);
    std::vector<double> residual(n), hess(n);
    stumps_.resize(k);
    const double newton_scale = static_cast<double>(k - 1) / static_cast<double>(k);
    for (std::size_t round = 0; round < rounds; ++round) {
      std::vector<std::vector<double>> p(n);
      for (std::size_t r = 0; r < n; ++r) p[r] = softmax(f[r]);
      for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
          const double target = static_cast<std::size_t>(y[r]) == c ? 1.0 : 0.0;
          residual[r] = target - p[r][c];
          hess[r] = p[r][c] * (1.0 - p[r][c]);
        }
        Stump s = fit_stump(x, residual, rows, min_leaf,
                            [&](const std::vector<std::size_t>& leaf) {
                              double num = 0.0, den = 0.0;
                              for (std::size_t r : leaf) {
                                num += residual[r];
                                den += hess[r];
                              }
                              return newton_scale * num / std::max(den, 1e-12);
                            });
        for (std::size_t r = 0; r < n; ++r) f[r][c] += shrinkage_ * s(x.row(r));
        stumps_[c].push_back(s);
      }
    }
  }

 protected:
  Prediction predict_row(std::span<const double> row) const override {
    std::vector<double> f = init_;
    for (std::size_t c = 0; c < f.size(); ++c) {
      for (const Stump& s : stumps_[c]) f[c] += shrinkage_ * s(row);
    }
    if (!is_classification(task())) return regression_prediction(f[0]);
    return classification_prediction(softmax(f));
  }

 private:
  template <class LeafValue>
  static Stump fit_stump(const Matrix& x, const std::vector<double>& residual,
                         const std::vector<std::size_t>& rows, std::size_t min_leaf,
                         LeafValue leaf_value) {
    const SplitChoice choice = best_split(x, residual, rows, false, 0, min_leaf);
    Stump s;
    if (choice.feature < 0) {
      s.left = leaf_value(rows);
      return s;
    }
    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (x(r, static_cast<std::size_t>(choice.feature)) <= choice.threshold ? left : right)
          .push_back(r);
    }
    s.feature = choice.feature;
    s.threshold = choice.threshold;
    s.left = leaf_value(left);
    s.right = leaf_value(right);
    return s;
  }

  double shrinkage_;
  std::vector<double> init_;
  std::vector<std::vector<Stump>> stumps_;
};

std::size_t as_count(double v, std::string_view key) {
  if (!(v >= 0.0) || v != std::floor(v)) {
    throw Error("model.bad_hyperparameter",
                "hyperparameter '" + std::string(key) + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

int argmax_label(std::span<const double> probabilities) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < probabilities.size(); ++c) {
    if (probabilities[c] > probabilities[best]) best = c;
  }
  return static_cast<int>(best);
}

std::vector<Prediction> Estimator::predict(const Matrix& rows) const {
  if (rows.rows() > 0 && rows.cols() != num_features_) {
    throw Error("model.dimension_mismatch",
                "model was trained on " + std::to_string(num_features_) +
                    " features but received " + std::to_string(rows.cols()));
  }
  std::vector<Prediction> out;
  out.reserve(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) out.push_back(predict_row(rows.row(r)));
  return out;
}

namespace {

void check_hyperparameters(const ModelSpec& spec) {
  std::vector<std::string_view> known;
  switch (spec.kind) {
    case ModelKind::kLinear:
      known = {"ridge"};
      break;
    case ModelKind::kLogistic:
      known = {"epochs", "learning_rate"};
      break;
    case ModelKind::kKnn:
      known = {"k"};
      break;
    case ModelKind::kCart:
      known = {"max_depth", "min_leaf"};
      break;
    case ModelKind::kBoostedStumps:
      known = {"rounds", "shrinkage", "min_leaf"};
      break;
    case ModelKind::kMajorityOrMean:
    case ModelKind::kExternal:
      break;
  }
  for (const auto& [key, value] : spec.hyperparameters) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error("model.bad_hyperparameter",
                  "'" + spec.name + "' has no hyperparameter '" + key + "'");
    }
  }
}

}  // namespace

std::unique_ptr<Estimator> fit_estimator(const ModelSpec& spec, const Matrix& features,
                                         std::span<const double> targets, TaskKind task,
                                         std::size_t num_classes) {
  if (features.rows() == 0 || features.rows() != targets.size()) {
    throw Error("model.bad_training_data",
                "training needs a nonempty matrix with one target per row");
  }
  if (!supports(spec.kind, task)) {
    throw Error("model.incompatible_task", "model '" + spec.name + "' (" +
                                               std::string(to_string(spec.kind)) +
                                               ") does not support " +
                                               std::string(to_string(task)) + " tasks");
  }
  if (is_classification(task)) {
    for (double y : targets) {
      if (y < 0 || static_cast<std::size_t>(y) >= num_classes || y != std::floor(y)) {
        throw Error("model.bad_training_data", "class code out of range");
      }
    }
    if (spec.kind != ModelKind::kMajorityOrMean && distinct_classes(targets) < 2) {
      auto fallback = std::make_unique<MajorityOrMean>(features, targets, task, num_classes);
      fallback->add_warning("training split has a single class; '" + spec.name +
                            "' falls back to the majority baseline");
      return fallback;
    }
  }

  check_hyperparameters(spec);
  switch (spec.kind) {
    case ModelKind::kMajorityOrMean:
      return std::make_unique<MajorityOrMean>(features, targets, task, num_classes);
    case ModelKind::kLinear:
      return std::make_unique<LinearRegression>(features, targets, spec.param("ridge", 1e-8));
    case ModelKind::kLogistic:
      return std::make_unique<LogisticRegression>(
          features, targets, task, num_classes,
          as_count(spec.param("epochs", 500), "epochs"), spec.param("learning_rate", 0.1));
    case ModelKind::kKnn:
      return std::make_unique<KNearestNeighbors>(features, targets, task, num_classes,
                                                 as_count(spec.param("k", 5), "k"));
    case ModelKind::kCart:
      return std::make_unique<DecisionTree>(features, targets, task, num_classes,
                                            as_count(spec.param("max_depth", 6), "max_depth"),
                                            as_count(spec.param("min_leaf", 2), "min_leaf"));
    case ModelKind::kBoostedStumps:
      return std::make_unique<BoostedStumps>(
          features, targets, task, num_classes, as_count(spec.param("rounds", 100), "rounds"),
          spec.param("shrinkage", 0.1), as_count(spec.param("min_leaf", 2), "min_leaf"));
    case ModelKind::kExternal:
      break;
  }
  throw Error("model.not_matrix_model",
              "external models are fitted through the bridge, not on encoded matrices");
}

}  // namespace fsbench

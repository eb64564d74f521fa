#include "fsbench/importance.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "fsbench/error.h"

namespace fsbench {
namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error("importance.length_mismatch",
                "vectors differ in length (" + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) {
    throw Error("importance.too_short", "correlation needs at least 2 observations");
  }
}

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
}

// Codes in [0, k) for a discretized vector.
std::vector<std::size_t> discretize(std::span<const double> values, Discretization how,
                                    std::size_t bins, std::size_t* levels) {
  std::vector<std::size_t> codes;
  if (how == Discretization::kBinned) {
    codes = equal_width_bins(values, bins);
  } else {
    std::vector<double> distinct(values.begin(), values.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    codes.reserve(values.size());
    for (double v : values) {
      codes.push_back(static_cast<std::size_t>(
          std::lower_bound(distinct.begin(), distinct.end(), v) - distinct.begin()));
    }
  }
  *levels = codes.empty() ? 0 : *std::max_element(codes.begin(), codes.end()) + 1;
  return codes;
}

// Merge sort that counts inversions.
std::uint64_t count_inversions(std::vector<std::size_t>& v, std::vector<std::size_t>& scratch,
                               std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inversions =
      count_inversions(v, scratch, lo, mid) + count_inversions(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[i] <= v[j]) {
      scratch[k++] = v[i++];
    } else {
      inversions += mid - i;
      scratch[k++] = v[j++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inversions;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io.unwritable", "cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::string_view to_string(ImportanceMethod method) {
  switch (method) {
    case ImportanceMethod::kPearson:
      return "pearson";
    case ImportanceMethod::kSpearman:
      return "spearman";
    case ImportanceMethod::kMutualInformation:
      return "mutual_information";
  }
  return "unknown";
}

ImportanceMethod parse_importance_method(std::string_view text) {
  if (text == "pearson") return ImportanceMethod::kPearson;
  if (text == "spearman") return ImportanceMethod::kSpearman;
  if (text == "mutual_information" || text == "mi") {
    return ImportanceMethod::kMutualInformation;
  }
  throw Error("importance.bad_method", "unknown importance method '" + std::string(text) + "'");
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  if (is_constant(x) || is_constant(y)) return {0.0, true};
  const auto n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return {0.0, true};
  return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), false};
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
    // Positions i..j (0-based) share ranks i+1..j+1.
    const double shared = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::vector<double> rx = fractional_ranks(x);
  const std::vector<double> ry = fractional_ranks(y);
  return pearson(rx, ry);
}

std::vector<std::size_t> equal_width_bins(std::span<const double> values,
                                          std::size_t bins) {
  if (bins == 0) throw Error("importance.bad_bins", "bin count must be positive");
  std::vector<std::size_t> out(values.size(), 0);
  if (values.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double width = *hi_it - lo;
  if (width <= 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double scaled = (values[i] - lo) / width * static_cast<double>(bins);
    out[i] = std::min(bins - 1, static_cast<std::size_t>(scaled));
  }
  return out;
}

double mutual_information(std::span<const double> x, std::span<const double> y,
                          const MutualInformationOptions& options) {
  check_pair(x, y);
  if (options.bins < 2) throw Error("importance.bad_bins", "mutual information needs bins >= 2");
  std::size_t kx = 0, ky = 0;
  const auto cx = discretize(x, options.x, options.bins, &kx);
  const auto cy = discretize(y, options.y, options.bins, &ky);
  if (kx < 2 || ky < 2) return 0.0;

  std::vector<double> joint(kx * ky, 0.0), px(kx, 0.0), py(ky, 0.0);
  for (std::size_t i = 0; i < cx.size(); ++i) {
    joint[cx[i] * ky + cy[i]] += 1.0;
    px[cx[i]] += 1.0;
    py[cy[i]] += 1.0;
  }
  const auto n = static_cast<double>(cx.size());
  double mi = 0.0;
  for (std::size_t a = 0; a < kx; ++a) {
    for (std::size_t b = 0; b < ky; ++b) {
      const double count = joint[a * ky + b];
      if (count == 0.0) continue;
      mi += (count / n) * std::log(count * n / (px[a] * py[b]));
    }
  }
  return std::max(0.0, mi);
}

std::vector<std::size_t> ImportanceRanking::strong_features() const {
  std::vector<std::size_t> out;
  for (const FeatureScore& s : scores) {
    if (s.strong) out.push_back(s.feature_index);
  }
  return out;
}

std::vector<std::size_t> ImportanceRanking::degenerate_features() const {
  std::vector<std::size_t> out;
  for (const FeatureScore& s : scores) {
    if (s.degenerate) out.push_back(s.feature_index);
  }
  return out;
}

std::vector<std::size_t> ascending_order(std::span<const FeatureScore> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a].abs_rho < scores[b].abs_rho;
  });
  for (std::size_t& pos : order) pos = scores[pos].feature_index;
  return order;
}

ImportanceRanking rank_features(const Dataset& train, ImportanceMethod method,
                                std::size_t mi_bins) {
  const EncodedDataset encoded = encode(train);
  const Matrix& x = encoded.data.features;
  const std::vector<double>& y = encoded.data.targets;

  ImportanceRanking ranking;
  ranking.method = method;
  ranking.scores.reserve(train.num_features());
  for (std::size_t j = 0; j < train.num_features(); ++j) {
    const std::vector<double> column = x.column(j);
    FeatureScore score;
    score.feature_index = j;
    score.name = train.column(j).name;
    score.method = method;
    switch (method) {
      case ImportanceMethod::kPearson:
      case ImportanceMethod::kSpearman: {
        const Correlation c = method == ImportanceMethod::kPearson ? pearson(column, y)
                                                                   : spearman(column, y);
        score.rho = c.value;
        score.abs_rho = std::abs(c.value);
        score.degenerate = c.degenerate;
        break;
      }
      case ImportanceMethod::kMutualInformation: {
        MutualInformationOptions options;
        options.bins = mi_bins;
        options.x = train.column(j).kind == ColumnKind::kCategorical ? Discretization::kAsIs
                                                                     : Discretization::kBinned;
        options.y = is_classification(train.task()) ? Discretization::kAsIs
                                                     : Discretization::kBinned;
        score.rho = mutual_information(column, y, options);
        score.abs_rho = score.rho;
        score.degenerate = is_constant(column) || is_constant(y);
        break;
      }
    }
    score.strong = method != ImportanceMethod::kMutualInformation &&
                   score.abs_rho > kStrongCorrelation;
    ranking.scores.push_back(std::move(score));
  }
  ranking.order = ascending_order(ranking.scores);
  return ranking;
}

double kendall_tau(std::span<const std::size_t> rank_a,
                   std::span<const std::size_t> rank_b) {
  const std::size_t n = rank_a.size();
  if (rank_b.size() != n || n < 2) {
    throw Error("importance.bad_permutation",
                "kendall_tau needs two permutations of the same size >= 2");
  }
  std::vector<std::size_t> pos_b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rank_b[i] >= n || pos_b[rank_b[i]] != n) {
      throw Error("importance.bad_permutation", "second ranking is not a permutation of 0..n-1");
    }
    pos_b[rank_b[i]] = i;
  }
  std::vector<std::size_t> seq(n);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (rank_a[i] >= n || seen[rank_a[i]]) {
      throw Error("importance.bad_permutation", "first ranking is not a permutation of 0..n-1");
    }
    seen[rank_a[i]] = true;
    seq[i] = pos_b[rank_a[i]];
  }
  std::vector<std::size_t> scratch(n);
  const auto discordant = static_cast<double>(count_inversions(seq, scratch, 0, n));
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return (pairs - 2.0 * discordant) / pairs;
}

Concordance concordance(const Dataset& train, std::size_t mi_bins) {
  Concordance out;
  for (std::size_t i = 0; i < kConcordanceMethods.size(); ++i) {
    out.rankings[i] = rank_features(train, kConcordanceMethods[i], mi_bins);
  }
  const bool rankable = train.num_features() >= 2;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      out.tau[i][j] = rankable ? kendall_tau(out.rankings[i].order, out.rankings[j].order)
                               : 1.0;
    }
  }
  return out;
}

void write_ranking_csv(const ImportanceRanking& ranking,
                       const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  std::vector<std::size_t> rank_of(ranking.order.size());
  for (std::size_t pos = 0; pos < ranking.order.size(); ++pos) {
    rank_of[ranking.order[pos]] = pos + 1;
  }
  const std::vector<std::string> header = {"feature", "rho", "abs_rho", "rank"};
  write_csv_row(out, header);
  for (const FeatureScore& s : ranking.scores) {
    const std::vector<std::string> row = {s.name, format_number(s.rho),
                                          format_number(s.abs_rho),
                                          std::to_string(rank_of[s.feature_index])};
    write_csv_row(out, row);
  }
}

void write_correlation_matrix_csv(const Dataset& dataset,
                                  const std::filesystem::path& path) {
  const EncodedDataset encoded = encode(dataset);
  std::vector<std::vector<double>> columns;
  std::vector<std::string> header = {""};
  for (std::size_t j = 0; j < dataset.num_features(); ++j) {
    columns.push_back(encoded.data.features.column(j));
    header.push_back(dataset.column(j).name);
  }
  columns.push_back(encoded.data.targets);
  header.push_back(dataset.target().name);

  std::ofstream out = open_for_write(path);
  write_csv_row(out, header);
  for (std::size_t a = 0; a < columns.size(); ++a) {
    std::vector<std::string> row = {header[a + 1]};
    for (std::size_t b = 0; b < columns.size(); ++b) {
      const double value = a == b ? 1.0 : pearson(columns[a], columns[b]).value;
      row.push_back(format_number(value));
    }
    write_csv_row(out, row);
  }
}

void write_concordance_csv(const Concordance& concordance,
                           const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  std::vector<std::string> header = {"method"};
  for (ImportanceMethod m : kConcordanceMethods) header.emplace_back(to_string(m));
  write_csv_row(out, header);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<std::string> row = {std::string(to_string(kConcordanceMethods[i]))};
    for (std::size_t j = 0; j < 3; ++j) row.push_back(format_number(concordance.tau[i][j]));
    write_csv_row(out, row);
  }
}

}  // namespace fsbench

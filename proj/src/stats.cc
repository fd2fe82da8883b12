#include "wikirank/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

namespace wikirank::stats {

namespace {

void CheckPaired(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(fmt::format("paired samples differ in length ({} vs {})",
                            x.size(), y.size()));
  }
  if (x.size() < 2) throw Error("correlation needs at least 2 pairs");
}

double TwoSidedNormalP(double z) {
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

// Two-sided p-value of a product-moment style coefficient via Student's t.
double CorrelationTP(double r, size_t n) {
  if (n < 3) return 1.0;
  if (std::fabs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = r * std::sqrt(df / (1.0 - r * r));
  boost::math::students_t dist(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(
                              dist, std::fabs(t))),
                    0.0, 1.0);
}

double PearsonCoefficient(std::span<const double> x,
                          std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// Sum over tie groups of f(group size) in an already sorted sequence.
template <typename Eq, typename F>
double SumOverTieGroups(size_t n, Eq same, F f) {
  double total = 0.0;
  size_t start = 0;
  for (size_t i = 1; i <= n; ++i) {
    if (i == n || !same(i - 1, i)) {
      total += f(static_cast<double>(i - start));
      start = i;
    }
  }
  return total;
}

// Merge sort on values, returning the number of inversions (swaps).
uint64_t MergeSortSwaps(std::vector<double> &v, std::vector<double> &buf,
                        size_t lo, size_t hi) {
  if (hi - lo < 2) return 0;
  const size_t mid = lo + (hi - lo) / 2;
  uint64_t swaps = MergeSortSwaps(v, buf, lo, mid) +
                   MergeSortSwaps(v, buf, mid, hi);
  size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return swaps;
}

}  // namespace

const char *MethodName(CorrelationMethod method) {
  switch (method) {
    case CorrelationMethod::kKendallB: return "kendall_b";
    case CorrelationMethod::kSpearman: return "spearman";
    case CorrelationMethod::kPearson: return "pearson";
  }
  return "unknown";
}

CorrelationMethod ParseCorrelationMethod(const std::string &name) {
  if (name == "kendall" || name == "kendall_b") {
    return CorrelationMethod::kKendallB;
  }
  if (name == "spearman") return CorrelationMethod::kSpearman;
  if (name == "pearson") return CorrelationMethod::kPearson;
  throw Error("unknown correlation method '" + name + "'");
}

CorrelationResult KendallTau(std::span<const double> x,
                             std::span<const double> y) {
  CheckPaired(x, y);
  const size_t n = x.size();

  // Knight's algorithm: order by (x, y), count joint ties and x ties, then
  // count discordant pairs as inversions of y in that order.
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  auto pairs = [](double t) { return t * (t - 1.0) / 2.0; };
  const double n0 = pairs(static_cast<double>(n));
  const double n1 = SumOverTieGroups(
      n, [&](size_t a, size_t b) { return x[order[a]] == x[order[b]]; },
      pairs);
  const double n3 = SumOverTieGroups(
      n,
      [&](size_t a, size_t b) {
        return x[order[a]] == x[order[b]] && y[order[a]] == y[order[b]];
      },
      pairs);

  std::vector<double> ys(n);
  for (size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  std::vector<double> buf(n);
  const double swaps = static_cast<double>(MergeSortSwaps(ys, buf, 0, n));
  const double n2 = SumOverTieGroups(
      n, [&](size_t a, size_t b) { return ys[a] == ys[b]; }, pairs);

  if (n0 == n1 || n0 == n2) throw Error("zero variance");
  const double s = n0 - n1 - n2 + n3 - 2.0 * swaps;  // C - D
  const double tau = std::clamp(s / std::sqrt((n0 - n1) * (n0 - n2)),
                                -1.0, 1.0);

  // Tie-corrected variance of C - D.
  std::vector<double> xs(n);
  for (size_t i = 0; i < n; ++i) xs[i] = x[order[i]];
  auto tie_sum = [&](const std::vector<double> &v, auto f) {
    return SumOverTieGroups(
        n, [&](size_t a, size_t b) { return v[a] == v[b]; }, f);
  };
  auto t1 = [](double t) { return t * (t - 1.0) * (2.0 * t + 5.0); };
  auto t2 = [](double t) { return t * (t - 1.0); };
  auto t3 = [](double t) { return t * (t - 1.0) * (t - 2.0); };
  const double nd = static_cast<double>(n);
  double var = (nd * (nd - 1.0) * (2.0 * nd + 5.0) - tie_sum(xs, t1) -
                tie_sum(ys, t1)) / 18.0;
  var += tie_sum(xs, t2) * tie_sum(ys, t2) / (2.0 * nd * (nd - 1.0));
  if (n > 2) {
    var += tie_sum(xs, t3) * tie_sum(ys, t3) /
           (9.0 * nd * (nd - 1.0) * (nd - 2.0));
  }

  CorrelationResult result;
  result.coefficient = tau;
  result.n = n;
  result.method = CorrelationMethod::kKendallB;
  result.p_value = var > 0.0 ? std::clamp(TwoSidedNormalP(s / std::sqrt(var)),
                                          0.0, 1.0)
                             : 1.0;
  return result;
}

CorrelationResult SpearmanRho(std::span<const double> x,
                              std::span<const double> y) {
  CheckPaired(x, y);
  const std::vector<double> rx = FractionalRanks(x);
  const std::vector<double> ry = FractionalRanks(y);
  CorrelationResult result;
  result.coefficient = PearsonCoefficient(rx, ry);
  result.n = x.size();
  result.p_value = CorrelationTP(result.coefficient, result.n);
  result.method = CorrelationMethod::kSpearman;
  return result;
}

CorrelationResult PearsonR(std::span<const double> x,
                           std::span<const double> y) {
  CheckPaired(x, y);
  CorrelationResult result;
  result.coefficient = PearsonCoefficient(x, y);
  result.n = x.size();
  result.p_value = CorrelationTP(result.coefficient, result.n);
  result.method = CorrelationMethod::kPearson;
  return result;
}

CorrelationResult Correlate(CorrelationMethod method,
                            std::span<const double> x,
                            std::span<const double> y) {
  switch (method) {
    case CorrelationMethod::kKendallB: return KendallTau(x, y);
    case CorrelationMethod::kSpearman: return SpearmanRho(x, y);
    case CorrelationMethod::kPearson: return PearsonR(x, y);
  }
  throw Error("unknown correlation method");
}

std::vector<double> FractionalRanks(std::span<const double> values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  size_t start = 0;
  for (size_t i = 1; i <= n; ++i) {
    if (i == n || values[order[i]] != values[order[start]]) {
      // Positions start..i-1 hold ranks start+1..i.
      const double mean = (static_cast<double>(start + 1) +
                           static_cast<double>(i)) / 2.0;
      for (size_t k = start; k < i; ++k) ranks[order[k]] = mean;
      start = i;
    }
  }
  return ranks;
}

std::vector<double> MinMaxScale(std::span<const double> values) {
  if (values.empty()) throw Error("min-max scaling of an empty sequence");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - *lo;
  std::vector<double> scaled(values.size(), 0.0);
  if (range > 0.0) {
    for (size_t i = 0; i < values.size(); ++i) {
      scaled[i] = (values[i] - min) / range;
    }
  }
  return scaled;
}

RegressionResult LinearRegression(const Matrix &design,
                                  std::span<const double> targets,
                                  bool with_intercept) {
  const size_t m = design.rows();
  const size_t p = design.cols();
  const size_t n = p + (with_intercept ? 1 : 0);
  if (targets.size() != m) {
    throw Error(fmt::format("design has {} rows but {} targets", m,
                            targets.size()));
  }
  if (n == 0) throw Error("regression needs at least one column");
  if (m < n) {
    throw Error(fmt::format("insufficient data: {} rows for {} columns", m,
                            n));
  }

  // Working copy, column-major for the Householder sweeps.
  std::vector<std::vector<double>> a(n, std::vector<double>(m, 1.0));
  for (size_t c = 0; c < p; ++c) {
    for (size_t r = 0; r < m; ++r) a[c][r] = design(r, c);
  }
  std::vector<double> qty(targets.begin(), targets.end());
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  auto tail_norm2 = [&](size_t c, size_t from) {
    double s = 0.0;
    for (size_t r = from; r < m; ++r) s += a[c][r] * a[c][r];
    return s;
  };

  double max_col = 0.0;
  for (size_t c = 0; c < n; ++c) {
    max_col = std::max(max_col, std::sqrt(tail_norm2(c, 0)));
  }
  const double tol = static_cast<double>(std::max(m, n)) *
                     std::numeric_limits<double>::epsilon() * 1e3 *
                     std::max(max_col, 1.0);

  size_t rank = 0;
  for (size_t k = 0; k < n; ++k) {
    // Pivot: remaining column with the largest trailing norm.
    size_t best = k;
    double best_norm = tail_norm2(k, k);
    for (size_t c = k + 1; c < n; ++c) {
      const double nc = tail_norm2(c, k);
      if (nc > best_norm) {
        best = c;
        best_norm = nc;
      }
    }
    if (std::sqrt(best_norm) <= tol) break;
    std::swap(a[k], a[best]);
    std::swap(perm[k], perm[best]);

    const double norm = std::sqrt(best_norm);
    const double alpha = a[k][k] > 0.0 ? -norm : norm;
    std::vector<double> v(m - k);
    for (size_t r = k; r < m; ++r) v[r - k] = a[k][r];
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double e : v) vnorm2 += e * e;
    if (vnorm2 > 0.0) {
      auto reflect = [&](std::vector<double> &col) {
        double dot = 0.0;
        for (size_t r = k; r < m; ++r) dot += v[r - k] * col[r];
        const double f = 2.0 * dot / vnorm2;
        for (size_t r = k; r < m; ++r) col[r] -= f * v[r - k];
      };
      for (size_t c = k; c < n; ++c) reflect(a[c]);
      reflect(qty);
    }
    ++rank;
  }

  if (rank < n) {
    std::vector<size_t> dependent(perm.begin() + rank, perm.end());
    std::sort(dependent.begin(), dependent.end());
    std::string names;
    for (size_t c : dependent) {
      if (!names.empty()) names += ", ";
      names += (with_intercept && c == p) ? std::string("intercept")
                                          : std::to_string(c);
    }
    throw RankDeficientError(
        "rank-deficient design: dependent column(s) " + names, dependent);
  }

  std::vector<double> beta_perm(n, 0.0);
  for (size_t i = n; i-- > 0;) {
    double s = qty[i];
    for (size_t j = i + 1; j < n; ++j) s -= a[j][i] * beta_perm[j];
    beta_perm[i] = s / a[i][i];
  }
  std::vector<double> beta(n, 0.0);
  for (size_t i = 0; i < n; ++i) beta[perm[i]] = beta_perm[i];

  RegressionResult result;
  result.coefficients.assign(beta.begin(), beta.begin() + p);
  result.intercept = with_intercept ? beta[p] : 0.0;
  double rss = 0.0;
  for (size_t r = 0; r < m; ++r) {
    double fit = result.intercept;
    for (size_t c = 0; c < p; ++c) fit += design(r, c) * beta[c];
    rss += (fit - targets[r]) * (fit - targets[r]);
  }
  result.residual_norm = std::sqrt(rss);
  return result;
}

void SimplexConfig::Validate() const {
  if (!(reflection > 0.0 && expansion > 1.0 && contraction > 0.0 &&
        contraction < 1.0 && shrink > 0.0 && shrink < 1.0)) {
    throw Error("invalid simplex coefficients");
  }
  if (max_iter < 1 || restarts < 1) {
    throw Error("simplex max_iter and restarts must be positive");
  }
}

namespace {

double AxisStep(double x) { return x != 0.0 ? 0.05 * std::fabs(x) : 0.00025; }

struct RunResult {
  std::vector<double> best;
  double value;
  int iterations;
  bool converged;
};

RunResult RunSimplex(const Objective &objective,
                     std::vector<std::vector<double>> simplex,
                     const SimplexConfig &config) {
  const size_t dim = simplex.front().size();
  auto eval = [&](const std::vector<double> &x) {
    const double f = objective(x);
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
  };
  std::vector<double> fvals(simplex.size());
  for (size_t i = 0; i < simplex.size(); ++i) fvals[i] = eval(simplex[i]);

  std::vector<size_t> order(simplex.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return fvals[a] < fvals[b]; });
    std::vector<std::vector<double>> s(simplex.size());
    std::vector<double> f(simplex.size());
    for (size_t i = 0; i < order.size(); ++i) {
      s[i] = std::move(simplex[order[i]]);
      f[i] = fvals[order[i]];
    }
    simplex = std::move(s);
    fvals = std::move(f);
  };

  auto affine = [dim](const std::vector<double> &base,
                      const std::vector<double> &toward, double t) {
    std::vector<double> out(dim);
    for (size_t j = 0; j < dim; ++j) {
      out[j] = base[j] + t * (toward[j] - base[j]);
    }
    return out;
  };

  int iter = 0;
  bool converged = false;
  while (true) {
    sort_simplex();
    double x_spread = 0.0;
    for (size_t i = 1; i <= dim; ++i) {
      for (size_t j = 0; j < dim; ++j) {
        x_spread = std::max(x_spread, std::fabs(simplex[i][j] -
                                                simplex[0][j]));
      }
    }
    const double f_spread = fvals[dim] - fvals[0];
    if (f_spread < config.tol_f && x_spread < config.tol_x) {
      converged = true;
      break;
    }
    if (iter >= config.max_iter) break;
    ++iter;

    std::vector<double> centroid(dim, 0.0);
    for (size_t i = 0; i < dim; ++i) {
      for (size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
    }
    for (double &c : centroid) c /= static_cast<double>(dim);

    const std::vector<double> &worst = simplex[dim];
    std::vector<double> xr = affine(centroid, worst, -config.reflection);
    const double fr = eval(xr);

    if (fr < fvals[0]) {
      std::vector<double> xe =
          affine(centroid, worst, -config.reflection * config.expansion);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[dim] = std::move(xe);
        fvals[dim] = fe;
      } else {
        simplex[dim] = std::move(xr);
        fvals[dim] = fr;
      }
      continue;
    }
    if (fr < fvals[dim - 1]) {
      simplex[dim] = std::move(xr);
      fvals[dim] = fr;
      continue;
    }

    bool accepted = false;
    if (fr < fvals[dim]) {
      std::vector<double> xc = affine(centroid, xr, config.contraction);
      const double fc = eval(xc);
      if (fc <= fr) {
        simplex[dim] = std::move(xc);
        fvals[dim] = fc;
        accepted = true;
      }
    } else {
      std::vector<double> xcc = affine(centroid, worst, config.contraction);
      const double fcc = eval(xcc);
      if (fcc < fvals[dim]) {
        simplex[dim] = std::move(xcc);
        fvals[dim] = fcc;
        accepted = true;
      }
    }
    if (!accepted) {
      for (size_t i = 1; i <= dim; ++i) {
        simplex[i] = affine(simplex[0], simplex[i], config.shrink);
        fvals[i] = eval(simplex[i]);
      }
    }
  }
  return RunResult{simplex[0], fvals[0], iter, converged};
}

SimplexResult RunWithRestarts(const Objective &objective,
                              std::vector<std::vector<double>> first,
                              const SimplexConfig &config) {
  config.Validate();
  const size_t dim = first.front().size();
  for (const auto &v : first) {
    if (v.size() != dim) throw Error("simplex vertices differ in dimension");
  }
  if (first.size() != dim + 1) {
    throw Error("initial simplex needs dimension + 1 vertices");
  }
  if (!std::isfinite(objective(first.front()))) {
    throw Error("objective is not finite at the starting point");
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> magnitude(0.5, 1.5);
  std::bernoulli_distribution flip(0.5);

  SimplexResult result;
  RunResult run = RunSimplex(objective, std::move(first), config);
  result.argmin = run.best;
  result.value = run.value;
  result.iterations = run.iterations;
  result.converged = run.converged;
  result.restarts_used = 0;

  for (int r = 1; r < config.restarts; ++r) {
    std::vector<std::vector<double>> simplex{result.argmin};
    for (size_t i = 0; i < dim; ++i) {
      std::vector<double> v = result.argmin;
      double step = AxisStep(v[i]) * magnitude(rng);
      if (flip(rng)) step = -step;
      v[i] += step;
      simplex.push_back(std::move(v));
    }
    run = RunSimplex(objective, std::move(simplex), config);
    result.iterations += run.iterations;
    ++result.restarts_used;
    if (run.value < result.value) {
      result.argmin = run.best;
      result.value = run.value;
      result.converged = run.converged;
    }
  }
  return result;
}

}  // namespace

SimplexResult NelderMead(const Objective &objective,
                         std::span<const double> x0,
                         const SimplexConfig &config) {
  if (x0.empty()) throw Error("Nelder-Mead needs a non-empty start point");
  std::vector<std::vector<double>> simplex{{x0.begin(), x0.end()}};
  for (size_t i = 0; i < x0.size(); ++i) {
    std::vector<double> v(x0.begin(), x0.end());
    v[i] += AxisStep(v[i]);
    simplex.push_back(std::move(v));
  }
  return RunWithRestarts(objective, std::move(simplex), config);
}

SimplexResult NelderMeadFromSimplex(const Objective &objective,
                                    std::vector<std::vector<double>> simplex,
                                    const SimplexConfig &config) {
  if (simplex.empty()) throw Error("empty initial simplex");
  return RunWithRestarts(objective, std::move(simplex), config);
}

double ChiSquareSurvival(double statistic, double df) {
  if (!(df > 0.0)) throw Error("chi-square needs positive degrees of freedom");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, statistic / 2.0);
}

GofResult LognormalGof(std::span<const double> scores, int bin_count) {
  if (bin_count < 2) throw Error("too few bins");
  if (scores.size() < 2) throw Error("log-normal fit needs at least 2 scores");
  std::vector<double> logs;
  logs.reserve(scores.size());
  for (double s : scores) {
    if (!(s > 0.0)) throw Error("log-normal requires positive support");
    logs.push_back(std::log(s));
  }
  const double n = static_cast<double>(logs.size());
  const double mu = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
  double ss = 0.0;
  for (double l : logs) ss += (l - mu) * (l - mu);
  const double sigma = std::sqrt(ss / n);
  if (std::all_of(logs.begin(), logs.end(),
                  [&](double l) { return l == logs.front(); })) {
    throw Error("zero variance");
  }

  boost::math::normal_distribution<double> unit;
  const double width = 1.0 / bin_count;
  std::vector<double> observed(bin_count, 0.0);
  for (double l : logs) {
    const double u = boost::math::cdf(unit, (l - mu) / sigma);
    const int b = std::min(bin_count - 1, static_cast<int>(u / width));
    observed[b] += 1.0;
  }

  auto edge = [&](int k) {
    if (k <= 0) return 0.0;
    if (k >= bin_count) return std::numeric_limits<double>::infinity();
    return std::exp(mu + sigma * boost::math::quantile(unit, k * width));
  };

  // Greedy left-to-right accumulation; a short remainder joins the last bin.
  const double expected_each = n / bin_count;
  std::vector<GofBin> bins;
  GofBin current{edge(0), 0.0, 0.0, 0.0};
  for (int k = 0; k < bin_count; ++k) {
    current.observed += observed[k];
    current.expected += expected_each;
    current.high = edge(k + 1);
    if (current.expected >= 5.0 - 1e-12) {
      bins.push_back(current);
      current = GofBin{edge(k + 1), 0.0, 0.0, 0.0};
    }
  }
  if (current.expected > 0.0) {
    if (bins.empty()) {
      bins.push_back(current);
    } else {
      bins.back().observed += current.observed;
      bins.back().expected += current.expected;
      bins.back().high = current.high;
    }
  }

  GofResult result;
  result.mu = mu;
  result.sigma = sigma;
  result.df = static_cast<int>(bins.size()) - 3;
  if (result.df < 1) throw Error("too few bins");
  for (const GofBin &b : bins) {
    result.statistic += (b.observed - b.expected) * (b.observed - b.expected) /
                        b.expected;
  }
  result.p_value = ChiSquareSurvival(result.statistic, result.df);
  result.bins = std::move(bins);
  return result;
}

}  // namespace wikirank::stats

#ifndef WIKIRANK_STATS_H_
#define WIKIRANK_STATS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wikirank/diagnostics.h"

namespace wikirank::stats {

enum class CorrelationMethod { kKendallB, kSpearman, kPearson };

const char *MethodName(CorrelationMethod method);
// Accepts "kendall", "kendall_b", "spearman", "pearson".
CorrelationMethod ParseCorrelationMethod(const std::string &name);

struct CorrelationResult {
  double coefficient = 0.0;
  size_t n = 0;
  double p_value = 1.0;
  CorrelationMethod method = CorrelationMethod::kKendallB;
};

// Kendall tau-b with tie correction, O(n log n). The p-value is two-sided
// from the normal approximation of the tie-corrected variance.
CorrelationResult KendallTau(std::span<const double> x,
                             std::span<const double> y);

// Pearson correlation of fractional ranks; p-value from Student's t with
// n - 2 degrees of freedom.
CorrelationResult SpearmanRho(std::span<const double> x,
                              std::span<const double> y);

CorrelationResult PearsonR(std::span<const double> x,
                           std::span<const double> y);

CorrelationResult Correlate(CorrelationMethod method,
                            std::span<const double> x,
                            std::span<const double> y);

// 1-based ranks, ascending by value; tied values share the mean rank.
std::vector<double> FractionalRanks(std::span<const double> values);

// (v - min) / (max - min); all zeros when the values are constant.
std::vector<double> MinMaxScale(std::span<const double> values);

// Dense row-major matrix, just enough for small least-squares problems.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols),
                                     data_(rows * cols, 0.0) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  double &operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

struct RegressionResult {
  std::vector<double> coefficients;  // one per design column
  double intercept = 0.0;
  double residual_norm = 0.0;
};

// Least squares via Householder QR with column pivoting. Throws
// RankDeficientError naming the dependent columns.
RegressionResult LinearRegression(const Matrix &design,
                                  std::span<const double> targets,
                                  bool with_intercept);

class RankDeficientError : public Error {
 public:
  RankDeficientError(const std::string &message, std::vector<size_t> columns)
      : Error(message), columns_(std::move(columns)) {}
  const std::vector<size_t> &columns() const { return columns_; }

 private:
  std::vector<size_t> columns_;
};

struct SimplexConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double tol_f = 1e-10;
  double tol_x = 1e-10;
  int max_iter = 2000;
  int restarts = 5;
  uint64_t seed = 42;

  void Validate() const;
};

struct SimplexResult {
  std::vector<double> argmin;
  double value = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Nelder-Mead minimization. The first run starts from x0 plus per-axis
// steps of 0.05*|x0_i| (0.00025 for zero coordinates); each further restart
// rebuilds the simplex around the incumbent with seeded random steps of the
// same scale. Iteration budget (max_iter) applies per run.
SimplexResult NelderMead(const Objective &objective,
                         std::span<const double> x0,
                         const SimplexConfig &config);

// As above, but the first run uses the given vertices (n + 1 points of
// dimension n) as its initial simplex.
SimplexResult NelderMeadFromSimplex(const Objective &objective,
                                    std::vector<std::vector<double>> simplex,
                                    const SimplexConfig &config);

// Upper tail of the chi-square distribution, 1 - CDF(statistic; df).
double ChiSquareSurvival(double statistic, double df);

struct GofBin {
  double low = 0.0;   // score-space lower edge
  double high = 0.0;  // score-space upper edge, +inf for the last bin
  double observed = 0.0;
  double expected = 0.0;
};

struct GofResult {
  double mu = 0.0;
  double sigma = 0.0;
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  std::vector<GofBin> bins;  // after tail merging
};

// Chi-square goodness of fit of positive scores against a log-normal whose
// parameters are the MLE of ln(scores). Bins are equal-probability under the
// fit and are merged from the tails until every expected count is >= 5.
GofResult LognormalGof(std::span<const double> scores, int bin_count);

}  // namespace wikirank::stats

#endif  // WIKIRANK_STATS_H_

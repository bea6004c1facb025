#pragma once

#include <cstdint>
#include <vector>

namespace gdlab {

/// Two-sided Wilson score interval for a binomial proportion.
struct WilsonInterval {
    double p_hat = 0.0, lo = 0.0, hi = 1.0;
    double half_width() const { return 0.5 * (hi - lo); }
};
WilsonInterval wilson_interval(int64_t successes, int64_t trials, double z = 1.959963984540054);

/// Binomial Monte Carlo estimate with its confidence interval.
struct BinomialEstimate {
    int64_t successes = 0, trials = 0;
    WilsonInterval ci;
};

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Survival function of the chi-square distribution with `dof` degrees.
double chi_square_sf(double x, int dof);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

/// Goodness of fit of observed counts against uniform cell probabilities.
ChiSquareResult chi_square_uniform(const std::vector<int64_t>& counts);

/// Homogeneity of success frequencies across groups (2 x k table of
/// {successes, failures} rows).
ChiSquareResult chi_square_homogeneity(const std::vector<std::pair<int64_t, int64_t>>& groups);

/// Two-sample Kolmogorov-Smirnov distance; inputs need not be sorted.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic two-sample KS p-value for distance d with sample sizes n, m.
double ks_p_value(double d, size_t n, size_t m);

struct KsResult {
    double distance = 0.0;
    double p_value = 1.0;
};
KsResult ks_test(std::vector<double> a, std::vector<double> b);

/// Ordinary least squares y = slope * x + intercept with r^2.
struct LineFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
    size_t n = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares fit of log P(sample > t) over a grid of thresholds.
/// Empty tail cells are skipped; throws if fewer than 3 cells remain usable
/// or fewer than 1000 samples are supplied.
struct TailFit {
    LineFit line;
    std::vector<double> t_used;
    std::vector<double> log_p;  // matching log survival values
};
TailFit tail_fit(const std::vector<double>& samples, const std::vector<double>& t_grid);

double median(std::vector<double> xs);

/// Distribution-free order-statistic confidence interval for the median.
struct MedianCI {
    double med = 0.0, lo = 0.0, hi = 0.0;
};
MedianCI median_ci(std::vector<double> xs, double confidence = 0.95);

}  // namespace gdlab

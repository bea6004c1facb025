#include "gdlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gdlab {

WilsonInterval wilson_interval(int64_t successes, int64_t trials, double z) {
    if (trials <= 0) throw std::invalid_argument("wilson_interval: no trials");
    if (successes < 0 || successes > trials)
        throw std::invalid_argument("wilson_interval: successes out of range");
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    WilsonInterval w;
    w.p_hat = p;
    w.lo = std::max(0.0, center - half);
    w.hi = std::min(1.0, center + half);
    return w;
}

namespace {

// Lower regularized incomplete gamma by series, upper by continued
// fraction; standard split at x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double x, int dof) {
    if (dof <= 0) throw std::invalid_argument("chi_square_sf: dof must be positive");
    if (x <= 0) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * x);
}

ChiSquareResult chi_square_uniform(const std::vector<int64_t>& counts) {
    if (counts.size() < 2) throw std::invalid_argument("chi_square_uniform: need >= 2 cells");
    int64_t total = 0;
    for (int64_t c : counts) total += c;
    if (total == 0) throw std::invalid_argument("chi_square_uniform: empty sample");
    double expect = static_cast<double>(total) / counts.size();
    ChiSquareResult r;
    for (int64_t c : counts) {
        double d = c - expect;
        r.statistic += d * d / expect;
    }
    r.dof = static_cast<int>(counts.size()) - 1;
    r.p_value = chi_square_sf(r.statistic, r.dof);
    return r;
}

ChiSquareResult chi_square_homogeneity(const std::vector<std::pair<int64_t, int64_t>>& groups) {
    if (groups.size() < 2) throw std::invalid_argument("chi_square_homogeneity: need >= 2 groups");
    int64_t s_tot = 0, f_tot = 0;
    for (auto& [s, f] : groups) {
        s_tot += s;
        f_tot += f;
    }
    int64_t n = s_tot + f_tot;
    if (n == 0 || s_tot == 0 || f_tot == 0) {
        // Degenerate margins: groups are trivially homogeneous.
        return {0.0, static_cast<int>(groups.size()) - 1, 1.0};
    }
    ChiSquareResult r;
    for (auto& [s, f] : groups) {
        double row = static_cast<double>(s + f);
        double es = row * s_tot / n;
        double ef = row * f_tot / n;
        r.statistic += (s - es) * (s - es) / es + (f - ef) * (f - ef) / ef;
    }
    r.dof = static_cast<int>(groups.size()) - 1;
    r.p_value = chi_square_sf(r.statistic, r.dof);
    return r;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        double fa = static_cast<double>(i) / a.size();
        double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

double ks_p_value(double d, size_t n, size_t m) {
    double ne = static_cast<double>(n) * m / (n + m);
    double sq = std::sqrt(ne);
    double lambda = (sq + 0.12 + 0.11 / sq) * d;
    // Kolmogorov tail sum.
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-10) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> a, std::vector<double> b) {
    KsResult r;
    size_t n = a.size(), m = b.size();
    r.distance = ks_statistic(std::move(a), std::move(b));
    r.p_value = ks_p_value(r.distance, n, m);
    return r;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: bad input");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    double vx = sxx - sx * sx / n;
    double vy = syy - sy * sy / n;
    double cov = sxy - sx * sy / n;
    if (vx <= 0) throw std::invalid_argument("fit_line: degenerate x grid");
    LineFit f;
    f.slope = cov / vx;
    f.intercept = (sy - f.slope * sx) / n;
    f.r2 = vy > 0 ? cov * cov / (vx * vy) : 1.0;
    f.n = x.size();
    return f;
}

TailFit tail_fit(const std::vector<double>& samples, const std::vector<double>& t_grid) {
    if (samples.size() < 1000) throw std::invalid_argument("tail_fit: need >= 1000 samples");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    TailFit out;
    for (double t : t_grid) {
        auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
        size_t exceed = static_cast<size_t>(sorted.end() - it);
        if (exceed == 0) continue;  // empty tail cell
        out.t_used.push_back(t);
        out.log_p.push_back(std::log(static_cast<double>(exceed) / sorted.size()));
    }
    if (out.t_used.size() < 3) throw std::invalid_argument("tail_fit: fewer than 3 usable cells");
    out.line = fit_line(out.t_used, out.log_p);
    return out;
}

double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median: empty sample");
    std::sort(xs.begin(), xs.end());
    size_t n = xs.size();
    return (n % 2) ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

MedianCI median_ci(std::vector<double> xs, double confidence) {
    if (xs.empty()) throw std::invalid_argument("median_ci: empty sample");
    std::sort(xs.begin(), xs.end());
    size_t n = xs.size();
    MedianCI m;
    m.med = (n % 2) ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
    // Exact binomial order-statistic interval [x_(a), x_(b)] (1-based ranks):
    // coverage is sum_{k=a}^{b-1} C(n,k) 2^-n; widen symmetrically until it
    // reaches the requested confidence.
    std::vector<double> pmf(n + 1);
    double logp = n * std::log(0.5);
    for (size_t k = 0; k <= n; ++k)
        pmf[k] = std::exp(logp + std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                          std::lgamma(n - k + 1.0));
    size_t a = (n + 1) / 2, b = a + 1;
    double mass = pmf[a];
    while (mass < confidence && (a > 1 || b <= n)) {
        if (a > 1) {
            --a;
            mass += pmf[a];
        }
        if (mass < confidence && b <= n) {
            mass += pmf[b];
            ++b;
        }
    }
    m.lo = xs[a - 1];
    m.hi = xs[std::min(b, n) - 1];
    return m;
}

}  // namespace gdlab

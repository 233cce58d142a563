#pragma once

// Independent numeric oracles for the tests. These avoid the library's own
// summation, RNG, and solver code paths so a shared bug can't vouch for
// itself.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracles {

// Upper regularized incomplete gamma Q(a, x): series for x < a+1, modified
// Lentz continued fraction otherwise. Accurate to ~1e-12 over the df range
// the tests exercise.
inline double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0))
        throw std::invalid_argument("regularized_gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    const double log_gamma = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 2000; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - log_gamma);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 2000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - log_gamma) * h;
}

// Survival probability of a chi-squared statistic with df degrees of freedom.
inline double chi_squared_pvalue(double stat, double df) {
    return regularized_gamma_q(df / 2.0, stat / 2.0);
}

// Least-squares slope of y on x.
inline double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_slope: need matching series of length >= 2");
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate x series");
    return sxy / sxx;
}

// Sample mean and standard error of the mean.
inline std::pair<double, double> mean_se(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean_se: empty series");
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (const double x : v) sum += x;
    const double mean = sum / n;
    if (v.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (const double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty series");
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Exact weighted 1-D k-means cost by dynamic programming over the sorted
// order (optimal clusters are intervals on the line). O(k n^2).
inline double kmeans_1d_cost(std::vector<std::pair<double, double>> pts, std::size_t k) {
    if (pts.empty() || k == 0) throw std::invalid_argument("kmeans_1d_cost: bad input");
    std::sort(pts.begin(), pts.end());
    const std::size_t n = pts.size();
    std::vector<long double> w(n + 1, 0.0L), wx(n + 1, 0.0L), wxx(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
        const long double wi = pts[i].second;
        const long double xi = pts[i].first;
        w[i + 1] = w[i] + wi;
        wx[i + 1] = wx[i] + wi * xi;
        wxx[i + 1] = wxx[i] + wi * xi * xi;
    }
    auto interval = [&](std::size_t a, std::size_t b) -> long double {  // points [a, b)
        const long double mass = w[b] - w[a];
        if (mass <= 0.0L) return 0.0L;
        const long double s = wx[b] - wx[a];
        const long double cost = (wxx[b] - wxx[a]) - s * s / mass;
        return cost > 0.0L ? cost : 0.0L;
    };
    const long double inf = 1e300L;
    std::vector<long double> prev(n + 1, inf), cur(n + 1, inf);
    prev[0] = 0.0L;
    for (std::size_t j = 1; j <= std::min(k, n); ++j) {
        std::fill(cur.begin(), cur.end(), inf);
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t t = j - 1; t < i; ++t)
                cur[i] = std::min(cur[i], prev[t] + interval(t, i));
        prev = cur;
    }
    return static_cast<double>(prev[n]);
}

}  // namespace oracles

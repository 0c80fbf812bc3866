// stats.hpp - small statistics toolbox used by the experiment harnesses:
// Wilson score intervals for binomial rates, two-sample chi-square tests on
// categorical histograms, and least-squares fits on log-log data.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace weldlab {

struct WilsonInterval {
    double center = 0.0;
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval for wins/trials at confidence z (default 95%).
inline WilsonInterval wilson_interval(std::uint64_t wins, std::uint64_t trials,
                                      double z = 1.959963984540054) {
    if (trials == 0) throw std::invalid_argument("wilson_interval: zero trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(wins) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {center, std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Regularized lower incomplete gamma P(a, x), series + continued fraction.
inline double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // series representation
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    // continued fraction for Q(a,x), Lentz's method
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

// Survival function of the chi-square distribution with df degrees of freedom.
inline double chi2_sf(double stat, int df) {
    if (df <= 0) throw std::invalid_argument("chi2_sf: df must be positive");
    if (stat <= 0.0) return 1.0;
    return 1.0 - gamma_p(df / 2.0, stat / 2.0);
}

struct Chi2Result {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

// Two-sample chi-square homogeneity test on categorical count maps.
// Categories with combined count below min_expected are pooled into one bin.
template <class Key>
Chi2Result chi2_two_sample(const std::map<Key, std::uint64_t>& h1,
                           const std::map<Key, std::uint64_t>& h2,
                           double min_expected = 5.0) {
    double n1 = 0.0, n2 = 0.0;
    std::map<Key, std::pair<double, double>> merged;
    for (const auto& [k, v] : h1) { merged[k].first += static_cast<double>(v); n1 += static_cast<double>(v); }
    for (const auto& [k, v] : h2) { merged[k].second += static_cast<double>(v); n2 += static_cast<double>(v); }
    if (n1 == 0.0 || n2 == 0.0) throw std::invalid_argument("chi2_two_sample: empty sample");

    std::vector<std::pair<double, double>> bins;
    std::pair<double, double> pooled{0.0, 0.0};
    for (const auto& [k, v] : merged) {
        if (v.first + v.second < min_expected) {
            pooled.first += v.first;
            pooled.second += v.second;
        } else {
            bins.push_back(v);
        }
    }
    if (pooled.first + pooled.second > 0.0) bins.push_back(pooled);

    // K. Pearson two-sample statistic with sqrt(N2/N1) scaling.
    const double k1 = std::sqrt(n2 / n1), k2 = std::sqrt(n1 / n2);
    double stat = 0.0;
    int df = -1;
    for (const auto& [o1, o2] : bins) {
        const double denom = o1 + o2;
        if (denom <= 0.0) continue;
        const double d = k1 * o1 - k2 * o2;
        stat += d * d / denom;
        ++df;
    }
    if (df <= 0) return {0.0, 0, 1.0};
    return {stat, df, chi2_sf(stat, df)};
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("least_squares: degenerate x");
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0;
    const double mean_y = sy / n;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = fit.intercept + fit.slope * x[i];
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
    }
    fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

// Fit y = a * x^b on positive data; returns slope b and R^2 in log-log space.
inline LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0)
            throw std::invalid_argument("loglog_fit: data must be positive");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    return least_squares(lx, ly);
}

} // namespace weldlab

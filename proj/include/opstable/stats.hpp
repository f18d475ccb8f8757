#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "opstable/errors.hpp"

namespace opstable {

struct KsResult {
    double statistic = 0.0;
    double critical = 0.0; // at the configured significance
    bool reject = false;
};

/// Asymptotic Kolmogorov critical coefficient c(alpha) with
/// P(D > c sqrt((n+m)/(nm))) ~ alpha. Common significance levels only.
inline double ks_coefficient(double significance) {
    // c(a) = sqrt(-ln(a/2)/2)
    return std::sqrt(-0.5 * std::log(significance / 2.0));
}

/// Two-sample Kolmogorov-Smirnov test.
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b,
                              double significance = 0.01) {
    if (a.empty() || b.empty()) throw Error("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    KsResult r;
    r.statistic = d;
    r.critical = ks_coefficient(significance) * std::sqrt((na + nb) / (na * nb));
    r.reject = r.statistic > r.critical;
    return r;
}

/// One-sample KS against the uniform law on [0, 1).
inline KsResult ks_uniform01(std::vector<double> samples, double significance = 0.01) {
    if (samples.empty()) throw Error("ks_uniform01: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        d = std::max(d, (i + 1) / n - samples[i]);
        d = std::max(d, samples[i] - i / n);
    }
    KsResult r;
    r.statistic = d;
    r.critical = ks_coefficient(significance) / std::sqrt(n);
    r.reject = r.statistic > r.critical;
    return r;
}

inline double sample_mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double sample_variance(const std::vector<double>& x) {
    const double m = sample_mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

} // namespace opstable

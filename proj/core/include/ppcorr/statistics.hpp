#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ppcorr {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

/// Point estimate with a confidence interval [lower, upper].
struct McEstimate {
    double estimate = 0.0;
    double lower = 0.0;
    double upper = 0.0;

    double halfwidth() const { return 0.5 * (upper - lower); }
    bool contains(double x) const { return x >= lower && x <= upper; }
};

/// Wilson score interval for a binomial proportion.
McEstimate wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95);

/// mean +- z sqrt(variance / n).
McEstimate normal_interval(double mean, double variance, std::size_t n, double z = kZ95);

/// Streaming mean and variance (Welford), mergeable across workers.
class Moments {
public:
    void add(double x);
    void merge(const Moments& other);

    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    /// Unbiased sample variance.
    double variance() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Streaming bivariate moments for a Pearson correlation, mergeable.
class CoMoments {
public:
    void add(double a, double b);
    void merge(const CoMoments& other);

    std::size_t count() const noexcept { return n_; }
    double mean_a() const noexcept { return mean_a_; }
    double mean_b() const noexcept { return mean_b_; }
    /// Throws DegenerateSample when either variance is zero.
    double correlation() const;

private:
    std::size_t n_ = 0;
    double mean_a_ = 0.0;
    double mean_b_ = 0.0;
    double m2_a_ = 0.0;
    double m2_b_ = 0.0;
    double c_ab_ = 0.0;
};

/// Pearson correlation of the pooled blocks with a delete-one-block
/// jackknife normal interval. Needs at least two blocks.
McEstimate jackknife_correlation(std::span<const CoMoments> blocks, double z = kZ95);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Kolmogorov survival function Q(t) = 2 sum_k (-1)^(k-1) exp(-2 k^2 t^2).
double kolmogorov_survival(double t);

}  // namespace ppcorr

#include "ppcorr/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "ppcorr/errors.hpp"

namespace ppcorr {

McEstimate wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) throw DegenerateSample("Wilson interval needs at least one trial");
    if (successes > trials) throw InvalidArgument("successes exceed trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {p, std::max(0.0, center - spread), std::min(1.0, center + spread)};
}

McEstimate normal_interval(double mean, double variance, std::size_t n, double z) {
    if (n == 0) throw DegenerateSample("normal interval needs at least one sample");
    const double half = z * std::sqrt(std::max(variance, 0.0) / static_cast<double>(n));
    return {mean, mean - half, mean + half};
}

void Moments::add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void Moments::merge(const Moments& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / n;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    n_ += other.n_;
}

double Moments::variance() const {
    if (n_ < 2) return 0.0;
    return m2_ / static_cast<double>(n_ - 1);
}

void CoMoments::add(double a, double b) {
    ++n_;
    const double n = static_cast<double>(n_);
    const double da = a - mean_a_;
    const double db = b - mean_b_;
    mean_a_ += da / n;
    mean_b_ += db / n;
    m2_a_ += da * (a - mean_a_);
    m2_b_ += db * (b - mean_b_);
    c_ab_ += da * (b - mean_b_);
}

void CoMoments::merge(const CoMoments& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double n = na + nb;
    const double da = other.mean_a_ - mean_a_;
    const double db = other.mean_b_ - mean_b_;
    mean_a_ += da * nb / n;
    mean_b_ += db * nb / n;
    m2_a_ += other.m2_a_ + da * da * na * nb / n;
    m2_b_ += other.m2_b_ + db * db * na * nb / n;
    c_ab_ += other.c_ab_ + da * db * na * nb / n;
    n_ += other.n_;
}

double CoMoments::correlation() const {
    if (n_ < 2 || !(m2_a_ > 0.0) || !(m2_b_ > 0.0)) {
        throw DegenerateSample("correlation undefined: a sample has zero variance");
    }
    return c_ab_ / std::sqrt(m2_a_ * m2_b_);
}

McEstimate jackknife_correlation(std::span<const CoMoments> blocks, double z) {
    const std::size_t b = blocks.size();
    if (b < 2) throw DegenerateSample("jackknife needs at least two blocks");

    std::vector<CoMoments> prefix(b + 1);
    std::vector<CoMoments> suffix(b + 1);
    for (std::size_t i = 0; i < b; ++i) {
        prefix[i + 1] = prefix[i];
        prefix[i + 1].merge(blocks[i]);
    }
    for (std::size_t i = b; i-- > 0;) {
        suffix[i] = suffix[i + 1];
        suffix[i].merge(blocks[i]);
    }
    const double full = prefix[b].correlation();

    std::vector<double> loo(b);
    double mean = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
        CoMoments rest = prefix[i];
        rest.merge(suffix[i + 1]);
        loo[i] = rest.correlation();
        mean += loo[i];
    }
    mean /= static_cast<double>(b);
    double ss = 0.0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss * static_cast<double>(b - 1) / static_cast<double>(b));
    return {full, full - z * se, full + z * se};
}

double kolmogorov_survival(double t) {
    if (t < 1e-3) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DegenerateSample("KS test needs non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return {d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

}  // namespace ppcorr

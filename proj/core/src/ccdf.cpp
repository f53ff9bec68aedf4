#include "ppcorr/ccdf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "ppcorr/errors.hpp"
#include "ppcorr/interference.hpp"

namespace ppcorr {
namespace {

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void require_unit_epsilon(const ModelParams& params) {
    if (params.epsilon() != 1.0) {
        throw InvalidArgument("closed-form CCDF evaluators require epsilon = 1");
    }
}

void require_dimension(std::size_t expected, std::size_t got) {
    if (expected != got) {
        throw InvalidArgument("dimension mismatch: expected " + std::to_string(expected) +
                              " thresholds, got " + std::to_string(got));
    }
}

}  // namespace

SirThresholds normalize_thresholds(std::span<const double> y, const PointSet& points,
                                   const ModelParams& params) {
    require_dimension(points.size(), y.size());
    SirThresholds th;
    th.y.assign(y.begin(), y.end());
    th.y_hat.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] >= 0.0) || !std::isfinite(y[i])) {
            throw InvalidArgument("SIR threshold " + std::to_string(i + 1) +
                                  " must be finite and >= 0");
        }
        th.y_hat[i] = y[i] * (params.epsilon() + distance_pow(points[i].norm2(), params.alpha()));
    }
    return th;
}

double joint_ccdf_ppp(const PointSet& points, const SirThresholds& th, const ModelParams& params,
                      const QuadratureSpec& spec) {
    require_dimension(points.size(), th.size());
    double total_y = 0.0;
    for (double v : th.y_hat) total_y += v;
    if (total_y == 0.0 || params.density() == 0.0) return 1.0;

    const Point2 center = points.centroid();
    double rho = 0.0;
    for (const Point2& z : points.points()) rho = std::max(rho, distance(z, center));

    const std::span<const Point2> zs = points.points();
    const std::span<const double> yh = th.y_hat;
    auto f = [&](Point2 x) {
        double log_keep = 0.0;
        for (std::size_t i = 0; i < zs.size(); ++i) {
            if (yh[i] == 0.0) continue;
            log_keep += std::log1p(yh[i] * path_loss(x, zs[i], params));
        }
        return -std::expm1(-log_keep);
    };
    // 1 - prod(...) <= sum_i y_hat_i l(x, z_i) <= (sum y_hat) (|x - c| - rho)^-alpha
    const TailBound tail{total_y, params.alpha(), rho};
    const QuadratureResult integral = integrate_r2(f, center, spec, zs, tail);
    return std::exp(-params.density() * integral.value);
}

void for_each_assignment(const MixtureWeights& q, std::span<const double> y_hat,
                         const std::function<void(const MixtureAssignment&)>& visit,
                         std::size_t cap) {
    const std::size_t n = q.size();
    require_dimension(n, y_hat.size());
    if (n > std::min(cap, kMaxEnumerationCap)) throw EnumerationLimit(n, std::min(cap, kMaxEnumerationCap));

    MixtureAssignment cur;
    cur.a.assign(n, 0);
    cur.s.assign(n, 0.0);

    // Depth-first over rows; component k collects y_hat in increasing i, so
    // equal subsets always produce bit-identical S_k.
    std::function<void(std::size_t, double)> descend = [&](std::size_t i, double weight) {
        if (i == n) {
            cur.weight = weight;
            visit(cur);
            return;
        }
        for (std::size_t k = 0; k <= i; ++k) {
            const double w = q(i, k);
            if (w == 0.0) continue;
            cur.a[i] = k;
            const double saved = cur.s[k];
            cur.s[k] = saved + y_hat[i];
            descend(i + 1, weight * w);
            cur.s[k] = saved;
        }
    };
    descend(0, 1.0);
}

namespace {

double mixture_sum(const SquareMatrix& q, const SirThresholds& th, const ModelParams& params,
                   std::size_t cap) {
    require_unit_epsilon(params);
    const std::size_t n = q.size();
    require_dimension(n, th.size());
    if (n > std::min(cap, kMaxEnumerationCap)) throw EnumerationLimit(n, std::min(cap, kMaxEnumerationCap));

    // Laplace factor memoized per subset of points sharing a component.
    const std::size_t subsets = std::size_t{1} << n;
    std::vector<double> factor(subsets, 1.0);
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) s += th.y_hat[i];
        }
        factor[mask] = interference_laplace(s, params);
    }

    CompensatedSum total;
    std::vector<std::size_t> members(n, 0);
    std::function<void(std::size_t, double)> descend = [&](std::size_t i, double weight) {
        if (i == n) {
            double prod = weight;
            for (std::size_t k = 0; k < n; ++k) {
                if (members[k] != 0) prod *= factor[members[k]];
            }
            total.add(prod);
            return;
        }
        for (std::size_t k = 0; k <= i; ++k) {
            const double w = q(i, k);
            if (w == 0.0) continue;
            members[k] |= std::size_t{1} << i;
            descend(i + 1, weight * w);
            members[k] &= ~(std::size_t{1} << i);
        }
    };
    descend(0, 1.0);
    return total.value();
}

double combination_exponent(const SquareMatrix& lam, const SirThresholds& th, double alpha,
                            double p) {
    double exponent = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        for (std::size_t j = i + 1; j < lam.size(); ++j) {
            if (lam(i, j) != 0.0) {
                exponent += p * lam(i, j) * laplace_exponent(th.y_hat[i] + th.y_hat[j], alpha);
            }
        }
        exponent += p * lam(i, i) * laplace_exponent(th.y_hat[i], alpha);
    }
    return exponent;
}

}  // namespace

double joint_ccdf_mixture(const MixtureWeights& q, const SirThresholds& th,
                          const ModelParams& params, std::size_t cap) {
    return mixture_sum(q.matrix(), th, params, cap);
}

double joint_ccdf_mixture_signed(const SquareMatrix& q, const SirThresholds& th,
                                 const ModelParams& params, std::size_t cap) {
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = i + 1; j < q.size(); ++j) {
            if (q(i, j) != 0.0) throw InvalidArgument("mixture weights must be lower-triangular");
        }
    }
    return mixture_sum(q, th, params, cap);
}

double joint_ccdf_combination(const IntensitySplit& split, const SirThresholds& th,
                              const ModelParams& params) {
    require_unit_epsilon(params);
    require_dimension(split.size(), th.size());
    return std::exp(-combination_exponent(split.matrix(), th, params.alpha(), params.p()));
}

double joint_ccdf_combination_signed(const CorrelationMatrix& zeta, const SirThresholds& th,
                                     const ModelParams& params) {
    require_unit_epsilon(params);
    const std::size_t n = zeta.size();
    require_dimension(n, th.size());
    const double lambda = params.lambda();
    SquareMatrix lam(n);
    for (std::size_t m = 0; m < n; ++m) {
        double own = lambda;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == m) continue;
            lam(m, k) = lambda * zeta(m, k);
            own -= lam(m, k);
        }
        lam(m, m) = own;
    }
    return std::exp(-combination_exponent(lam, th, params.alpha(), params.p()));
}

}  // namespace ppcorr

#include "ppcorr/frameworks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ppcorr/errors.hpp"
#include "ppcorr/interference.hpp"

namespace ppcorr {
namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kRowSumTolerance = 1e-12;

std::string pos(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

SquareMatrix SquareMatrix::identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CorrelationMatrix::CorrelationMatrix(SquareMatrix zeta) : zeta_(std::move(zeta)) {
    const std::size_t n = zeta_.size();
    if (n == 0) throw InvalidArgument("correlation matrix must be at least 1x1");
    for (std::size_t i = 0; i < n; ++i) {
        if (zeta_(i, i) != 1.0) {
            throw InvalidArgument("correlation matrix diagonal must be 1 at " + pos(i, i));
        }
        for (std::size_t j = 0; j < i; ++j) {
            const double a = zeta_(i, j);
            const double b = zeta_(j, i);
            if (!std::isfinite(a) || std::abs(a - b) > kSymmetryTolerance) {
                throw InvalidArgument("correlation matrix is not symmetric at " + pos(i, j));
            }
            if (a < 0.0 || a > 1.0) {
                throw InvalidArgument("correlation " + pos(i, j) + " outside [0, 1]");
            }
        }
    }
}

CorrelationMatrix CorrelationMatrix::identity(std::size_t n) {
    return CorrelationMatrix(SquareMatrix::identity(n));
}

CorrelationMatrix CorrelationMatrix::uniform(std::size_t n, double zeta) {
    SquareMatrix m(n, zeta);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return CorrelationMatrix(std::move(m));
}

MixtureWeights::MixtureWeights(SquareMatrix q) : q_(std::move(q)) {
    const std::size_t n = q_.size();
    if (n == 0) throw InvalidArgument("mixture weights must be at least 1x1");
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = q_(i, j);
            if (j > i && v != 0.0) {
                throw InvalidArgument("mixture weights must be lower-triangular; entry " + pos(i, j) +
                                      " is non-zero");
            }
            if (!std::isfinite(v) || v < 0.0) {
                throw InvalidArgument("mixture weight " + pos(i, j) + " is negative or non-finite");
            }
            row += v;
        }
        if (std::abs(row - 1.0) > kRowSumTolerance) {
            throw InvalidArgument("mixture weight row " + std::to_string(i + 1) +
                                  " does not sum to 1");
        }
    }
}

MixtureWeights MixtureWeights::identity(std::size_t n) {
    return MixtureWeights(SquareMatrix::identity(n));
}

IntensitySplit::IntensitySplit(SquareMatrix lam, double lambda) : lam_(std::move(lam)), lambda_(lambda) {
    const std::size_t n = lam_.size();
    if (n == 0) throw InvalidArgument("intensity split must be at least 1x1");
    if (!std::isfinite(lambda) || lambda < 0.0) throw InvalidArgument("total intensity must be >= 0");
    const double tol = kRowSumTolerance * std::max(1.0, lambda);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = lam_(i, j);
            if (!std::isfinite(v) || v < 0.0) {
                throw InvalidArgument("component intensity " + pos(i, j) + " is negative");
            }
            if (std::abs(v - lam_(j, i)) > tol) {
                throw InvalidArgument("intensity split is not symmetric at " + pos(i, j));
            }
            row += v;
        }
        if (std::abs(row - lambda) > tol) {
            throw InvalidArgument("intensity split row " + std::to_string(i + 1) +
                                  " does not sum to lambda");
        }
    }
}

CorrelationMatrix build_correlation_matrix(const PointSet& points, const ModelParams& params,
                                           const QuadratureSpec& spec) {
    const std::size_t n = points.size();
    SquareMatrix zeta = SquareMatrix::identity(n);
    if (n == 1) return CorrelationMatrix(std::move(zeta));

    double denom = 0.0;
    try {
        denom = correlation_denominator(params, spec).value;
    } catch (const NonConvergence& e) {
        throw NonConvergence(std::string("correlation denominator: ") + e.what(), e.kind(), e.value(),
                             e.err_est());
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double overlap = 0.0;
            try {
                overlap = overlap_integral(points[i], points[j], params, spec).value;
            } catch (const NonConvergence& e) {
                throw NonConvergence("correlation for pair " + pos(i, j) + ": " + e.what(), e.kind(),
                                     e.value(), e.err_est());
            }
            const double z = std::min(overlap / denom, 1.0);
            zeta(i, j) = z;
            zeta(j, i) = z;
        }
    }
    return CorrelationMatrix(std::move(zeta));
}

namespace {

/// Forward substitution shared by the strict and signed solvers. `strict`
/// rejects negative weights as they appear; otherwise only a vanishing pivot
/// is fatal.
SignedMixtureWeights forward_substitute(const CorrelationMatrix& zeta, bool strict) {
    const std::size_t n = zeta.size();
    SignedMixtureWeights out{SquareMatrix(n), true};
    SquareMatrix& q = out.q;
    q(0, 0) = 1.0;

    auto settle = [&](double v, std::size_t i, std::size_t j, const char* what) {
        if (v >= 0.0) return v;
        if (v >= -kWeightTolerance) return 0.0;  // rounding
        if (strict) {
            throw InfeasibleWeights(std::string(what) + " q" + pos(i, j) + " = " + std::to_string(v),
                                    i, j, v);
        }
        out.feasible = false;
        return v;
    };

    for (std::size_t i = 1; i < n; ++i) {
        // Row i solves sum_{k<=j} q(j,k) q(i,k) = zeta(i,j) for j = 0..i-1.
        double used = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double pivot = q(j, j);
            double rhs = zeta(i, j);
            for (std::size_t k = 0; k < j; ++k) rhs -= q(j, k) * q(i, k);
            if (std::abs(pivot) < kPivotTolerance) {
                throw InfeasibleWeights("zero pivot q" + pos(j, j) + " while solving row " +
                                            std::to_string(i + 1),
                                        j, j, pivot);
            }
            const double v = settle(rhs / pivot, i, j, "negative mixture weight");
            q(i, j) = v;
            used += v;
        }
        q(i, i) = settle(1.0 - used, i, i, "negative diagonal weight");
    }
    return out;
}

}  // namespace

MixtureWeights solve_mixture_weights(const CorrelationMatrix& zeta) {
    return MixtureWeights(forward_substitute(zeta, true).q);
}

SignedMixtureWeights solve_mixture_weights_signed(const CorrelationMatrix& zeta) {
    return forward_substitute(zeta, false);
}

CorrelationMatrix mixture_implied_correlation(const MixtureWeights& q) {
    const std::size_t n = q.size();
    SquareMatrix zeta = SquareMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k <= j; ++k) s += q(i, k) * q(j, k);
            zeta(i, j) = s;
            zeta(j, i) = s;
        }
    }
    return CorrelationMatrix(std::move(zeta));
}

double forward_substitution_residual(const MixtureWeights& q, const CorrelationMatrix& zeta) {
    if (q.size() != zeta.size()) throw InvalidArgument("dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 1; i < q.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double lhs = 0.0;
            for (std::size_t k = 0; k <= j; ++k) lhs += q(j, k) * q(i, k);
            worst = std::max(worst, std::abs(lhs - zeta(i, j)));
        }
    }
    return worst;
}

std::vector<double> check_combination_feasibility(const CorrelationMatrix& zeta) {
    const std::size_t n = zeta.size();
    std::vector<double> margins(n, 1.0);
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k != m) margins[m] -= zeta(m, k);
        }
    }
    return margins;
}

bool combination_feasible(const CorrelationMatrix& zeta) {
    const auto margins = check_combination_feasibility(zeta);
    return std::all_of(margins.begin(), margins.end(), [](double m) { return m >= 0.0; });
}

IntensitySplit build_intensity_split(const CorrelationMatrix& zeta, const ModelParams& params) {
    const std::size_t n = zeta.size();
    const double lambda = params.lambda();
    SquareMatrix lam(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) lam(i, j) = lambda * zeta(i, j);
        }
    }
    for (std::size_t m = 0; m < n; ++m) {
        double shared = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k != m) shared += lam(m, k);
        }
        double own = lambda - shared;
        if (own < 0.0) {
            const double margin = own / (lambda > 0.0 ? lambda : 1.0);
            if (margin < -kWeightTolerance) {
                throw InfeasibleSplit("combination framework infeasible: row " +
                                          std::to_string(m + 1) + " correlations sum to " +
                                          std::to_string(1.0 - margin) + " > 1",
                                      m, margin);
            }
            own = 0.0;
        }
        lam(m, m) = own;
    }
    return IntensitySplit(std::move(lam), lambda);
}

}  // namespace ppcorr

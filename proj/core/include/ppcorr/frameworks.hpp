#pragma once

#include <cstddef>
#include <vector>

#include "ppcorr/model.hpp"
#include "ppcorr/quadrature.hpp"

namespace ppcorr {

/// Dense row-major N x N matrix.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    static SquareMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Pairwise interference correlations zeta_ij. Symmetric, unit diagonal,
/// off-diagonal entries in [0, 1].
class CorrelationMatrix {
public:
    explicit CorrelationMatrix(SquareMatrix zeta);

    static CorrelationMatrix identity(std::size_t n);
    /// Every off-diagonal entry equal to `zeta`.
    static CorrelationMatrix uniform(std::size_t n, double zeta);

    std::size_t size() const noexcept { return zeta_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return zeta_(i, j); }
    const SquareMatrix& matrix() const noexcept { return zeta_; }

private:
    SquareMatrix zeta_;
};

/// Lower-triangular row-stochastic weights; row i (0-based) is the PMF of the
/// selector A_i over components 0..i.
class MixtureWeights {
public:
    explicit MixtureWeights(SquareMatrix q);

    static MixtureWeights identity(std::size_t n);

    std::size_t size() const noexcept { return q_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return q_(i, j); }
    const SquareMatrix& matrix() const noexcept { return q_; }

private:
    SquareMatrix q_;
};

/// Component intensities of the combination framework (before ALOHA
/// thinning). Symmetric, non-negative, every row sums to `lambda`.
class IntensitySplit {
public:
    IntensitySplit(SquareMatrix lam, double lambda);

    std::size_t size() const noexcept { return lam_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return lam_(i, j); }
    const SquareMatrix& matrix() const noexcept { return lam_; }
    double lambda() const noexcept { return lambda_; }

private:
    SquareMatrix lam_;
    double lambda_;
};

/// zeta_ij for every pair of the point set. A quadrature failure is rethrown
/// as NonConvergence naming the offending (1-based) pair.
CorrelationMatrix build_correlation_matrix(const PointSet& points, const ModelParams& params,
                                           const QuadratureSpec& spec = {});

/// Solves the N lower-triangular systems of the mixture construction by
/// forward substitution in increasing row order. Throws InfeasibleWeights on a
/// negative weight or a pivot below kPivotTolerance.
MixtureWeights solve_mixture_weights(const CorrelationMatrix& zeta);

/// Result of the same forward substitution with signs left unchecked.
struct SignedMixtureWeights {
    SquareMatrix q;        ///< lower-triangular, rows sum to 1, entries may be < 0
    bool feasible = true;  ///< every entry >= 0, i.e. q is a valid MixtureWeights
};

/// Forward substitution without the sign checks, for evaluating the mixture
/// formulas as an algebraic continuation outside the feasible region. Only a
/// pivot with |q_jj| < kPivotTolerance throws InfeasibleWeights.
SignedMixtureWeights solve_mixture_weights_signed(const CorrelationMatrix& zeta);

inline constexpr double kPivotTolerance = 1e-12;
/// Negative weights above this magnitude are infeasible; smaller ones are
/// rounding and read as zero.
inline constexpr double kWeightTolerance = 1e-12;

/// Correlations induced by independent selectors: P(A_i = A_j) = sum_k q_ik q_jk.
CorrelationMatrix mixture_implied_correlation(const MixtureWeights& q);

/// max over rows i of |Q_(i-1) q_i - zeta_i|_inf for the systems solved by
/// solve_mixture_weights.
double forward_substitution_residual(const MixtureWeights& q, const CorrelationMatrix& zeta);

/// Per-row margins 1 - sum_{k != m} zeta_mk. Feasible iff all are >= 0.
std::vector<double> check_combination_feasibility(const CorrelationMatrix& zeta);

bool combination_feasible(const CorrelationMatrix& zeta);

/// lam_ij = lambda zeta_ij off the diagonal, lam_mm = lambda - sum_{k != m} lam_mk.
/// Throws InfeasibleSplit when a diagonal entry would be negative.
IntensitySplit build_intensity_split(const CorrelationMatrix& zeta, const ModelParams& params);

}  // namespace ppcorr

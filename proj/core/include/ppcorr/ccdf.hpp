#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ppcorr/frameworks.hpp"
#include "ppcorr/model.hpp"
#include "ppcorr/quadrature.hpp"

namespace ppcorr {

/// Linear SIR thresholds y_i and their normalized form
/// y_hat_i = y_i / l(o, z_i) = y_i (eps + |z_i|^alpha).
struct SirThresholds {
    std::vector<double> y;
    std::vector<double> y_hat;

    std::size_t size() const noexcept { return y.size(); }
};

/// Throws InvalidArgument on negative thresholds or a size mismatch.
SirThresholds normalize_thresholds(std::span<const double> y, const PointSet& points,
                                   const ModelParams& params);

/// Exact joint CCDF under the PPP field:
/// exp(-lambda p * integral of 1 - prod_i 1 / (1 + y_hat_i l(x, z_i)) dx).
double joint_ccdf_ppp(const PointSet& points, const SirThresholds& th, const ModelParams& params,
                      const QuadratureSpec& spec = {});

/// One selector outcome with its aggregated thresholds and probability.
struct MixtureAssignment {
    std::vector<std::size_t> a;  ///< a[i] in 0..i (0-based component index)
    std::vector<double> s;       ///< S_k = sum_i y_hat_i 1(a_i = k)
    double weight = 0.0;         ///< prod_i q(i, a_i)
};

inline constexpr std::size_t kDefaultEnumerationCap = 10;
/// Subset tables are 2^N entries; no cap may exceed this.
inline constexpr std::size_t kMaxEnumerationCap = 20;

/// Visits every assignment with non-zero weight in lexicographic order of
/// (a_1..a_N). Throws EnumerationLimit when N > cap.
void for_each_assignment(const MixtureWeights& q, std::span<const double> y_hat,
                         const std::function<void(const MixtureAssignment&)>& visit,
                         std::size_t cap = kDefaultEnumerationCap);

/// Joint CCDF under the mixture model:
/// sum_a (prod_i q(i, a_i)) prod_k E[exp(-S_k J)]. Requires epsilon = 1.
double joint_ccdf_mixture(const MixtureWeights& q, const SirThresholds& th,
                          const ModelParams& params, std::size_t cap = kDefaultEnumerationCap);

/// The mixture formula evaluated with possibly negative weights (see
/// solve_mixture_weights_signed). Equals joint_ccdf_mixture when the weights
/// are feasible; otherwise it is not a probability and may leave [0, 1].
double joint_ccdf_mixture_signed(const SquareMatrix& q, const SirThresholds& th,
                                 const ModelParams& params,
                                 std::size_t cap = kDefaultEnumerationCap);

/// Joint CCDF under the combination model: shared components evaluated at
/// y_hat_i + y_hat_j, private ones at y_hat_k. Requires epsilon = 1.
double joint_ccdf_combination(const IntensitySplit& split, const SirThresholds& th,
                              const ModelParams& params);

/// The combination formula with lam_ij = lambda zeta_ij and private
/// intensities lambda (1 - sum_k zeta_mk) left unclamped, so rows violating
/// the feasibility condition enter with negative intensity.
double joint_ccdf_combination_signed(const CorrelationMatrix& zeta, const SirThresholds& th,
                                     const ModelParams& params);

}  // namespace ppcorr

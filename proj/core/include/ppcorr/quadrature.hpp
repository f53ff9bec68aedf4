#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ppcorr/model.hpp"

namespace ppcorr {

/// How the radial domain beyond the last feature is handled.
enum class TailPolicy {
    /// Integrate [R, inf) exactly after the substitution r = R u^(-1/(beta-2)).
    kMapped,
    /// Drop r > R_max, with R_max chosen so the certified tail bound is below
    /// abs_tol / 2. The bound is added to the error estimate.
    kTruncate,
};

struct QuadratureSpec {
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    std::size_t max_evals = 1'000'000;
    TailPolicy tail = TailPolicy::kMapped;
    /// Largest cutoff radius kTruncate may pick before reporting a tail failure.
    double max_cutoff_radius = 1e6;

    /// Throws InvalidArgument unless tolerances and budget are positive.
    void validate() const;
};

/// Certified envelope |f(x)| <= coefficient * (|x - c| - core_radius)^(-exponent)
/// for |x - c| > core_radius, with c the integration center. exponent > 2.
struct TailBound {
    double coefficient = 1.0;
    double exponent = 4.0;
    double core_radius = 0.0;

    /// Bound on the integral of |f| over |x - c| > radius.
    double integral_beyond(double radius) const;
};

/// Smallest radius whose tail bound does not exceed tol (bisection on the
/// monotone bound). Returns +inf when no radius below max_radius suffices.
double cutoff_radius(const TailBound& tail, double tol, double max_radius);

struct QuadratureResult {
    double value = 0.0;
    double err_est = 0.0;
    std::size_t evals = 0;
    /// Radius beyond which the integrand was dropped; +inf under kMapped.
    double cutoff = 0.0;
};

/// Globally adaptive 21-point Gauss-Kronrod integration over [a, b], split at
/// the given interior breakpoints. Converges when err <= max(abs_tol, rel_tol |I|).
/// Throws NonConvergence when max_evals is exhausted.
QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_tol, std::size_t max_evals,
                                    std::span<const double> breaks = {});

/// Integral of f over the plane in polar coordinates about `center`.
///
/// `features` are locations where f is least smooth (observation points); the
/// radial and angular grids are split at their polar radii and angles. `tail`
/// must dominate |f| away from the features and certifies the radial cutoff.
///
/// Budget exhaustion throws NonConvergence{kBudgetExhausted}; a tail that
/// cannot be certified under kTruncate throws NonConvergence{kTailTruncation}.
QuadratureResult integrate_r2(const std::function<double(Point2)>& f, Point2 center,
                              const QuadratureSpec& spec, std::span<const Point2> features,
                              const TailBound& tail);

/// Integral of f over the axis-aligned square [-w, w]^2, split at the
/// coordinates of `features`.
QuadratureResult integrate_square(const std::function<double(Point2)>& f, double half_width,
                                  const QuadratureSpec& spec, std::span<const Point2> features);

}  // namespace ppcorr

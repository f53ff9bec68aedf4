#pragma once

#include "ppcorr/model.hpp"
#include "ppcorr/quadrature.hpp"

namespace ppcorr {

/// Second moment of the unit-mean exponential fading power, E[h^2].
inline constexpr double kFadingSecondMoment = 2.0;

/// E[I(z)] = 2 pi^2 lambda p / (eps^(1 - 2/alpha) alpha sin(2 pi / alpha)).
double interference_mean(const ModelParams& params);

/// Var[I(z)] = 4 pi^2 lambda p (alpha - 2) / (eps^(2 - 2/alpha) alpha^2 sin(2 pi / alpha)).
double interference_variance(const ModelParams& params);

/// Laplace-transform exponent per unit intensity at epsilon = 1:
/// 2 pi^2 s / (alpha sin(2 pi / alpha) (1 + s)^(1 - 2/alpha)).
/// E[exp(-s I)] = exp(-lambda p * laplace_exponent(s, alpha)).
double laplace_exponent(double s, double alpha);

/// E[exp(-s I)] for the PPP interference. Requires s >= 0 and epsilon == 1.
double interference_laplace(double s, const ModelParams& params);

/// Integral over the plane of l(x, zi) l(x, zj).
QuadratureResult overlap_integral(Point2 zi, Point2 zj, const ModelParams& params,
                                  const QuadratureSpec& spec = {});

/// E[h^2] times the integral of l^2(o, x), evaluated by quadrature.
/// Times lambda p this is Var[I].
QuadratureResult correlation_denominator(const ModelParams& params,
                                         const QuadratureSpec& spec = {});

/// Corr[I(zi), I(zj)]; exactly 1 when zi == zj. Independent of lambda and p.
double spatial_correlation(Point2 zi, Point2 zj, const ModelParams& params,
                           const QuadratureSpec& spec = {});

/// Closed form of the integral of l^2 over the plane,
/// 2 pi^2 (alpha - 2) eps^(2/alpha - 2) / (alpha^2 sin(2 pi / alpha)).
double path_loss_square_integral(const ModelParams& params);

}  // namespace ppcorr

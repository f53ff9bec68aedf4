#include "ppcorr/interference.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ppcorr/errors.hpp"

namespace ppcorr {
namespace {

constexpr double kPi = std::numbers::pi;

double sin_term(double alpha) { return std::sin(2.0 * kPi / alpha); }

}  // namespace

double interference_mean(const ModelParams& params) {
    const double a = params.alpha();
    return 2.0 * kPi * kPi * params.density() /
           (std::pow(params.epsilon(), 1.0 - 2.0 / a) * a * sin_term(a));
}

double interference_variance(const ModelParams& params) {
    const double a = params.alpha();
    return 4.0 * kPi * kPi * params.density() * (a - 2.0) /
           (std::pow(params.epsilon(), 2.0 - 2.0 / a) * a * a * sin_term(a));
}

double path_loss_square_integral(const ModelParams& params) {
    const double a = params.alpha();
    return 2.0 * kPi * kPi * (a - 2.0) * std::pow(params.epsilon(), 2.0 / a - 2.0) /
           (a * a * sin_term(a));
}

double laplace_exponent(double s, double alpha) {
    if (!(s >= 0.0)) throw InvalidArgument("Laplace argument must be >= 0, got " + std::to_string(s));
    if (!(alpha > 2.0)) throw InvalidArgument("alpha must exceed 2");
    if (s == 0.0) return 0.0;
    return 2.0 * kPi * kPi * s / (alpha * sin_term(alpha) * std::pow(1.0 + s, 1.0 - 2.0 / alpha));
}

double interference_laplace(double s, const ModelParams& params) {
    if (params.epsilon() != 1.0) {
        throw InvalidArgument("closed-form Laplace transform is only valid for epsilon = 1");
    }
    return std::exp(-params.density() * laplace_exponent(s, params.alpha()));
}

QuadratureResult overlap_integral(Point2 zi, Point2 zj, const ModelParams& params,
                                  const QuadratureSpec& spec) {
    const Point2 mid = 0.5 * (zi + zj);
    const Point2 features[] = {zi, zj};
    // l(x,zi) l(x,zj) <= (|x - mid| - half separation)^(-2 alpha)
    const TailBound tail{1.0, 2.0 * params.alpha(), 0.5 * distance(zi, zj)};
    auto f = [&](Point2 x) { return path_loss(x, zi, params) * path_loss(x, zj, params); };
    return integrate_r2(f, mid, spec, features, tail);
}

QuadratureResult correlation_denominator(const ModelParams& params, const QuadratureSpec& spec) {
    const TailBound tail{1.0, 2.0 * params.alpha(), 0.0};
    auto f = [&](Point2 x) {
        const double l = path_loss(x, Point2{}, params);
        return l * l;
    };
    QuadratureResult r = integrate_r2(f, Point2{}, spec, {}, tail);
    r.value *= kFadingSecondMoment;
    r.err_est *= kFadingSecondMoment;
    return r;
}

double spatial_correlation(Point2 zi, Point2 zj, const ModelParams& params,
                           const QuadratureSpec& spec) {
    if (zi == zj) return 1.0;
    return overlap_integral(zi, zj, params, spec).value /
           correlation_denominator(params, spec).value;
}

}  // namespace ppcorr

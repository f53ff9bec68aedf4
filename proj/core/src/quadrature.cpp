#include "ppcorr/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "ppcorr/errors.hpp"

namespace ppcorr {
namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600412842101, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEpsMach = std::numeric_limits<double>::epsilon();

struct Panel {
    double a;
    double b;
    double value;
    double err;

    bool operator<(const Panel& other) const { return err < other.err; }
};

/// Shared evaluation budget for nested integrations.
struct Budget {
    std::size_t used = 0;
    std::size_t max = 0;
};

Panel gauss_kronrod21(const std::function<double(double)>& f, double a, double b, Budget& budget) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    const double fc = f(center);
    double res_gauss = 0.0;
    double res_kronrod = kWgk[10] * fc;
    double res_abs = std::abs(res_kronrod);
    std::array<double, 10> fv1{};
    std::array<double, 10> fv2{};

    for (std::size_t j = 0; j < 5; ++j) {
        const std::size_t jtw = 2 * j + 1;
        const double absc = half * kXgk[jtw];
        const double f1 = f(center - absc);
        const double f2 = f(center + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += kWg[j] * (f1 + f2);
        res_kronrod += kWgk[jtw] * (f1 + f2);
        res_abs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (std::size_t j = 0; j < 5; ++j) {
        const std::size_t jtwm1 = 2 * j;
        const double absc = half * kXgk[jtwm1];
        const double f1 = f(center - absc);
        const double f2 = f(center + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod += kWgk[jtwm1] * (f1 + f2);
        res_abs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    budget.used += 21;

    const double mean = 0.5 * res_kronrod;
    double res_asc = kWgk[10] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 10; ++j) {
        res_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    }

    const double value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    double err = std::abs((res_kronrod - res_gauss) * half);
    if (res_asc != 0.0 && err != 0.0) {
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    }
    if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEpsMach)) {
        err = std::max(50.0 * kEpsMach * res_abs, err);
    }
    return {a, b, value, err};
}

QuadratureResult adaptive(const std::function<double(double)>& f, std::vector<double> edges,
                          double rel_tol, double abs_tol, Budget& budget) {
    std::priority_queue<Panel> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i + 1] > edges[i])) continue;
        Panel p = gauss_kronrod21(f, edges[i], edges[i + 1], budget);
        total += p.value;
        total_err += p.err;
        heap.push(p);
    }

    // Panels too narrow to split are retired with their error intact.
    double retired_value = 0.0;
    double retired_err = 0.0;

    auto require_finite = [&] {
        if (!std::isfinite(total) || !std::isfinite(total_err)) {
            throw NonConvergence("integrand is not finite on the domain",
                                 ConvergenceFailure::kNonFinite, total, total_err);
        }
    };
    require_finite();
    while (!heap.empty() && total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (budget.used + 42 > budget.max) {
            throw NonConvergence("quadrature budget of " + std::to_string(budget.max) +
                                     " evaluations exhausted",
                                 ConvergenceFailure::kBudgetExhausted, total, total_err);
        }
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const double width = worst.b - worst.a;
        if (width <= 1e3 * kEpsMach * std::max(std::abs(worst.a), std::abs(worst.b)) ||
            !(mid > worst.a && mid < worst.b)) {
            retired_value += worst.value;
            retired_err += worst.err;
            continue;
        }
        const Panel left = gauss_kronrod21(f, worst.a, mid, budget);
        const Panel right = gauss_kronrod21(f, mid, worst.b, budget);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        require_finite();
    }

    // Re-sum from the panels so incremental updates do not accumulate rounding.
    QuadratureResult out;
    out.value = retired_value;
    out.err_est = retired_err;
    while (!heap.empty()) {
        out.value += heap.top().value;
        out.err_est += heap.top().err;
        heap.pop();
    }
    out.evals = budget.used;
    out.cutoff = std::numeric_limits<double>::infinity();
    return out;
}

std::vector<double> make_edges(double a, double b, std::span<const double> breaks) {
    std::vector<double> edges{a};
    std::vector<double> inner;
    for (double x : breaks) {
        if (x > a && x < b) inner.push_back(x);
    }
    std::sort(inner.begin(), inner.end());
    for (double x : inner) {
        if (x - edges.back() > 1e-12 * std::max(1.0, std::abs(x))) edges.push_back(x);
    }
    if (b - edges.back() <= 1e-12 * std::max(1.0, std::abs(b)) && edges.size() > 1) edges.pop_back();
    edges.push_back(b);
    return edges;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw InvalidArgument("quadrature tolerances must be positive");
    }
    if (max_evals == 0) throw InvalidArgument("quadrature evaluation budget must be positive");
    if (!(max_cutoff_radius > 0.0)) throw InvalidArgument("max_cutoff_radius must be positive");
}

double TailBound::integral_beyond(double radius) const {
    const double s = radius - core_radius;
    if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
    // 2 pi C int_R^inf r (r - rho)^-beta dr, split as (r - rho) + rho.
    return 2.0 * std::numbers::pi * coefficient *
           (std::pow(s, 2.0 - exponent) / (exponent - 2.0) +
            core_radius * std::pow(s, 1.0 - exponent) / (exponent - 1.0));
}

double cutoff_radius(const TailBound& tail, double tol, double max_radius) {
    if (!(tail.exponent > 2.0)) {
        throw InvalidArgument("tail decay exponent must exceed 2 for an integrable tail");
    }
    if (tail.coefficient <= 0.0) return tail.core_radius;
    if (tail.integral_beyond(max_radius) > tol) return std::numeric_limits<double>::infinity();
    double lo = tail.core_radius;
    double hi = max_radius;
    for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tail.integral_beyond(mid) > tol) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_tol, std::size_t max_evals,
                                    std::span<const double> breaks) {
    if (!(b >= a)) throw InvalidArgument("integration interval must satisfy a <= b");
    Budget budget{0, max_evals};
    return adaptive(f, make_edges(a, b, breaks), rel_tol, abs_tol, budget);
}

QuadratureResult integrate_r2(const std::function<double(Point2)>& f, Point2 center,
                              const QuadratureSpec& spec, std::span<const Point2> features,
                              const TailBound& tail) {
    spec.validate();
    if (!(tail.exponent > 2.0)) {
        throw InvalidArgument("tail decay exponent must exceed 2 for an integrable tail");
    }
    constexpr double kTwoPi = 2.0 * std::numbers::pi;

    std::vector<double> radii;
    std::vector<double> angles;
    double rho_max = tail.core_radius;
    for (const Point2& z : features) {
        const Point2 d = z - center;
        const double r = d.norm();
        rho_max = std::max(rho_max, r);
        if (r > 1e-12) {
            radii.push_back(r);
            double th = std::atan2(d.y, d.x);
            if (th < 0.0) th += kTwoPi;
            angles.push_back(th);
        }
    }
    // Angular splitting only matters close to the features.
    const double near_radius = 2.0 * rho_max + 1.0;

    Budget budget{0, spec.max_evals};
    const double inner_rel = 0.05 * spec.rel_tol;
    const double inner_abs = 1e-3 * spec.abs_tol;
    double worst_inner_rel = 0.0;

    auto ring = [&](double r) -> double {
        if (r == 0.0) return 0.0;
        auto g = [&](double th) { return f(center + from_polar(r, th)); };
        std::vector<double> edges =
            r < near_radius ? make_edges(0.0, kTwoPi, angles) : std::vector<double>{0.0, kTwoPi};
        const QuadratureResult in = adaptive(g, std::move(edges), inner_rel, inner_abs, budget);
        if (in.value != 0.0) {
            worst_inner_rel = std::max(worst_inner_rel, in.err_est / std::abs(in.value));
        }
        return r * in.value;
    };

    const double split = near_radius;
    radii.push_back(split);

    QuadratureResult out;
    if (spec.tail == TailPolicy::kMapped) {
        // t in [0, split] is the radius itself; t in (split, split + 1] maps to
        // r = split * u^-k with u = split + 1 - t and k = 1 / (beta - 2).
        const double k = 1.0 / (tail.exponent - 2.0);
        auto radial = [&](double t) -> double {
            if (t <= split) return ring(t);
            const double u = split + 1.0 - t;
            if (u <= 0.0) return 0.0;
            const double r = split * std::pow(u, -k);
            if (!std::isfinite(r)) return 0.0;
            return ring(r) * k * r / u;
        };
        out = adaptive(radial, make_edges(0.0, split + 1.0, radii), 0.5 * spec.rel_tol,
                       0.5 * spec.abs_tol, budget);
        out.cutoff = std::numeric_limits<double>::infinity();
    } else {
        const double cut = cutoff_radius(tail, 0.5 * spec.abs_tol, spec.max_cutoff_radius);
        if (!std::isfinite(cut)) {
            throw NonConvergence("no cutoff radius below " + std::to_string(spec.max_cutoff_radius) +
                                     " certifies the integrand tail",
                                 ConvergenceFailure::kTailTruncation, 0.0,
                                 tail.integral_beyond(spec.max_cutoff_radius));
        }
        const double upper = std::max(cut, split);
        out = adaptive(ring, make_edges(0.0, upper, radii), 0.5 * spec.rel_tol, 0.5 * spec.abs_tol,
                       budget);
        out.err_est += tail.integral_beyond(upper);
        out.cutoff = upper;
    }
    out.err_est += worst_inner_rel * std::abs(out.value);
    out.evals = budget.used;
    return out;
}

QuadratureResult integrate_square(const std::function<double(Point2)>& f, double half_width,
                                  const QuadratureSpec& spec, std::span<const Point2> features) {
    spec.validate();
    if (!(half_width > 0.0)) throw InvalidArgument("square half-width must be positive");
    std::vector<double> xs;
    std::vector<double> ys;
    for (const Point2& z : features) {
        xs.push_back(z.x);
        ys.push_back(z.y);
    }
    Budget budget{0, spec.max_evals};
    const std::vector<double> y_edges = make_edges(-half_width, half_width, ys);
    auto column = [&](double x) {
        auto g = [&](double y) { return f({x, y}); };
        return adaptive(g, y_edges, 0.05 * spec.rel_tol, 1e-3 * spec.abs_tol, budget).value;
    };
    QuadratureResult out = adaptive(column, make_edges(-half_width, half_width, xs), spec.rel_tol,
                                    spec.abs_tol, budget);
    out.evals = budget.used;
    return out;
}

}  // namespace ppcorr

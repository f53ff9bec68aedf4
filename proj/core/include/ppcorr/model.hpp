#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ppcorr {

/// Planar location. Coordinates share the length unit of the field intensity.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point2, Point2) = default;

    constexpr double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
};

inline double distance(Point2 a, Point2 b) { return (a - b).norm(); }

/// Point at polar coordinates (r, theta).
inline Point2 from_polar(double r, double theta) {
    return {r * std::cos(theta), r * std::sin(theta)};
}

/// Parameters of the interferer field and the bounded path-loss law
/// l(u, v) = 1 / (epsilon + |u - v|^alpha).
///
/// The transmitting field has intensity lambda * p (ALOHA thinning).
/// lambda = 0 is admitted as the empty-field limit.
class ModelParams {
public:
    ModelParams(double lambda, double p, double alpha, double epsilon = 1.0);

    double lambda() const noexcept { return lambda_; }
    double p() const noexcept { return p_; }
    double alpha() const noexcept { return alpha_; }
    double epsilon() const noexcept { return epsilon_; }

    /// Intensity of the active interferer process, lambda * p.
    double density() const noexcept { return lambda_ * p_; }

    /// Same law with a different base intensity (used for component fields).
    ModelParams with_lambda(double lambda) const { return {lambda, p_, alpha_, epsilon_}; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
    double lambda_;
    double p_;
    double alpha_;
    double epsilon_;
};

/// |d|^alpha from the squared distance, with a fast path for alpha = 4.
inline double distance_pow(double dist2, double alpha) {
    if (alpha == 4.0) return dist2 * dist2;
    return std::pow(dist2, 0.5 * alpha);
}

/// Bounded path loss (epsilon + |u - v|^alpha)^-1.
inline double path_loss(Point2 u, Point2 v, const ModelParams& params) {
    return 1.0 / (params.epsilon() + distance_pow((u - v).norm2(), params.alpha()));
}

/// Path loss at distance d.
inline double path_loss_at(double d, const ModelParams& params) {
    return 1.0 / (params.epsilon() + distance_pow(d * d, params.alpha()));
}

/// Ordered observation locations z_1..z_N. Points are finite and pairwise
/// distinct; the order is authoritative and never changed.
class PointSet {
public:
    explicit PointSet(std::vector<Point2> points);

    /// N points on a circle of radius R: z_i = (R, 2 pi i / N) in polar form.
    static PointSet circle(double radius, std::size_t n);

    std::size_t size() const noexcept { return points_.size(); }
    const Point2& operator[](std::size_t i) const { return points_[i]; }
    std::span<const Point2> points() const noexcept { return points_; }

    /// Arithmetic mean of the points.
    Point2 centroid() const;

private:
    std::vector<Point2> points_;
};

}  // namespace ppcorr

#include "ppcorr/errors.hpp"
#include "ppcorr/model.hpp"

#include <numbers>
#include <string>

namespace ppcorr {

ModelParams::ModelParams(double lambda, double p, double alpha, double epsilon)
    : lambda_(lambda), p_(p), alpha_(alpha), epsilon_(epsilon) {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw InvalidArgument("lambda must be finite and >= 0, got " + std::to_string(lambda));
    }
    if (!(p > 0.0 && p <= 1.0)) {
        throw InvalidArgument("ALOHA probability p must lie in (0, 1], got " + std::to_string(p));
    }
    if (!std::isfinite(alpha) || alpha <= 2.0) {
        throw InvalidArgument("path-loss exponent alpha must exceed 2, got " + std::to_string(alpha));
    }
    if (!std::isfinite(epsilon) || epsilon <= 0.0) {
        throw InvalidArgument("path-loss offset epsilon must be > 0 (bounded path loss), got " +
                              std::to_string(epsilon));
    }
}

PointSet::PointSet(std::vector<Point2> points) : points_(std::move(points)) {
    if (points_.empty()) throw InvalidArgument("point set must contain at least one point");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
            throw InvalidArgument("point " + std::to_string(i + 1) + " has non-finite coordinates");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (points_[i] == points_[j]) {
                throw InvalidArgument("points " + std::to_string(j + 1) + " and " +
                                      std::to_string(i + 1) + " coincide");
            }
        }
    }
}

PointSet PointSet::circle(double radius, std::size_t n) {
    if (n == 0) throw InvalidArgument("circle geometry needs at least one point");
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw InvalidArgument("circle radius must be positive and finite");
    }
    std::vector<Point2> pts;
    pts.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back(from_polar(radius, theta));
    }
    return PointSet(std::move(pts));
}

Point2 PointSet::centroid() const {
    Point2 c;
    for (const auto& z : points_) c = c + z;
    return (1.0 / static_cast<double>(points_.size())) * c;
}

}  // namespace ppcorr

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppcorr/ccdf.hpp"
#include "ppcorr/model.hpp"
#include "ppcorr/quadrature.hpp"
#include "ppcorr/simulator.hpp"

namespace ppcorr::app {

enum class ModelKind { kPpp, kMixture, kCombination };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct FieldConfig {
    double lambda = 1.0;
    double p = 1.0;
    double alpha = 4.0;
    double epsilon = 1.0;

    friend bool operator==(const FieldConfig&, const FieldConfig&) = default;
};

/// Observation points: either explicit, or n points on a circle of radius
/// `radius` around the origin at angles 2 pi i / n.
struct GeometryConfig {
    double radius = 0.25;
    std::size_t n = 2;
    std::vector<Point2> points;

    friend bool operator==(const GeometryConfig&, const GeometryConfig&) = default;
};

struct SimulationConfig {
    std::size_t samples = 100'000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    double half_width = 20.0;
    FarField far_field = FarField::kCompensated;
    double bias_tolerance = 0.01;

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

struct QuadratureConfig {
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    std::size_t max_evals = 1'000'000;
    TailPolicy tail = TailPolicy::kMapped;
    double max_cutoff_radius = 1e6;

    friend bool operator==(const QuadratureConfig&, const QuadratureConfig&) = default;
};

struct Figure1Config {
    std::vector<double> lambda_p{1.0, 0.1, 0.01};
    std::vector<double> y_db{-10.0, -7.5, -5.0, -2.5, 0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0};

    friend bool operator==(const Figure1Config&, const Figure1Config&) = default;
};

struct Figure2Config {
    std::vector<double> lambda_p{0.01, 0.03, 0.1, 0.3, 1.0, 3.0};
    std::vector<double> alpha{2.5, 4.0};

    friend bool operator==(const Figure2Config&, const Figure2Config&) = default;
};

struct Figure3Config {
    double lambda_p = 0.01;
    double y_db = 5.0;
    std::vector<double> alpha{2.5, 4.0};
    std::vector<std::size_t> n{1, 2, 3, 4, 5, 6};

    friend bool operator==(const Figure3Config&, const Figure3Config&) = default;
};

/// Branches sit on a circle of radius branch_radius around the receiver; the
/// reference transmitter is link_distance away from every branch.
struct MrcScenario {
    std::size_t n_branches = 2;
    double branch_radius = 1.0;
    double link_distance = 1.0;
    std::vector<double> thresholds{0.5, 1.0, 2.0};

    friend bool operator==(const MrcScenario&, const MrcScenario&) = default;
};

/// A complete, resolved run configuration.
struct Scenario {
    FieldConfig field;
    GeometryConfig geometry;
    /// One entry for a common threshold, or one per point.
    std::vector<double> thresholds_db{5.0};
    std::vector<ModelKind> models{ModelKind::kPpp, ModelKind::kMixture, ModelKind::kCombination};
    SimulationConfig simulation;
    QuadratureConfig quadrature;
    std::size_t enumeration_cap = kDefaultEnumerationCap;
    /// Model written by `simulate`.
    ModelKind simulate_model = ModelKind::kPpp;
    Figure1Config figure1;
    Figure2Config figure2;
    Figure3Config figure3;
    MrcScenario mrc;

    friend bool operator==(const Scenario&, const Scenario&) = default;

    /// Throws InvalidArgument on any inconsistent field.
    void validate() const;

    ModelParams params() const;
    PointSet points() const;
    QuadratureSpec quadrature_spec() const;
    McOptions mc_options() const;
    /// Thresholds in linear scale, expanded to one per point.
    std::vector<double> thresholds_linear() const;
};

/// y_linear = 10^(y_dB / 10).
double db_to_linear(double db);

nlohmann::json to_json(const Scenario& s);
/// Fields absent from `j` keep their defaults; unknown keys are rejected.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

}  // namespace ppcorr::app

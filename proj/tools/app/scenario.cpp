#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "ppcorr/errors.hpp"

namespace ppcorr::app {
namespace {

using nlohmann::json;

/// Reads the keys of one JSON object and rejects any it does not know.
class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw InvalidArgument("config section '" + name_ + "' must be an object");
    }

    template <class T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw InvalidArgument("config field '" + name_ + "." + key + "': " + e.what());
        }
    }

    /// Sub-object, or nullptr when absent.
    const json* child(const char* key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) {
                throw InvalidArgument("unknown config field '" + name_ + "." + it.key() + "'");
            }
        }
    }

private:
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

const char* far_field_name(FarField f) {
    return f == FarField::kCompensated ? "compensated" : "truncate";
}

FarField far_field_from(const std::string& s) {
    if (s == "compensated") return FarField::kCompensated;
    if (s == "truncate") return FarField::kTruncate;
    throw InvalidArgument("far_field must be 'compensated' or 'truncate', got '" + s + "'");
}

const char* tail_name(TailPolicy t) { return t == TailPolicy::kMapped ? "mapped" : "truncate"; }

TailPolicy tail_from(const std::string& s) {
    if (s == "mapped") return TailPolicy::kMapped;
    if (s == "truncate") return TailPolicy::kTruncate;
    throw InvalidArgument("quadrature tail must be 'mapped' or 'truncate', got '" + s + "'");
}

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

void require_positive_list(const std::vector<double>& v, const char* what) {
    require(!v.empty(), std::string(what) + " must not be empty");
    for (double x : v) require(std::isfinite(x) && x > 0.0, std::string(what) + " entries must be > 0");
}

}  // namespace

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::kPpp: return "ppp";
        case ModelKind::kMixture: return "mixture";
        case ModelKind::kCombination: return "combination";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "ppp") return ModelKind::kPpp;
    if (name == "mixture") return ModelKind::kMixture;
    if (name == "combination") return ModelKind::kCombination;
    throw InvalidArgument("unknown model '" + name + "' (expected ppp, mixture or combination)");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void Scenario::validate() const {
    (void)params();
    (void)points();
    quadrature_spec().validate();
    require(!thresholds_db.empty(), "at least one threshold is required");
    const std::size_t n = points().size();
    require(thresholds_db.size() == 1 || thresholds_db.size() == n,
            "thresholds_db needs one entry or one per point");
    for (double y : thresholds_db) require(std::isfinite(y), "thresholds_db entries must be finite");
    require(!models.empty(), "at least one model must be selected");
    require(simulation.half_width > 0.0 && std::isfinite(simulation.half_width),
            "simulation.half_width must be > 0");
    require(simulation.bias_tolerance > 0.0, "simulation.bias_tolerance must be > 0");
    require(enumeration_cap >= 1 && enumeration_cap <= kMaxEnumerationCap,
            "enumeration_cap must lie in [1, " + std::to_string(kMaxEnumerationCap) + "]");

    require_positive_list(figure1.lambda_p, "figure1.lambda_p");
    require(!figure1.y_db.empty(), "figure1.y_db must not be empty");
    require_positive_list(figure2.lambda_p, "figure2.lambda_p");
    for (double a : figure2.alpha) (void)ModelParams(1.0, 1.0, a);
    require(!figure2.alpha.empty(), "figure2.alpha must not be empty");
    require(figure3.lambda_p > 0.0, "figure3.lambda_p must be > 0");
    require(!figure3.alpha.empty() && !figure3.n.empty(), "figure3 sweeps must not be empty");
    for (double a : figure3.alpha) (void)ModelParams(1.0, 1.0, a);
    for (std::size_t k : figure3.n) require(k >= 1, "figure3.n entries must be >= 1");

    MrcConfig{mrc.n_branches, mrc.link_distance, 1.0}.validate();
    require(mrc.branch_radius > 0.0 || mrc.n_branches == 1, "mrc.branch_radius must be > 0");
    require(!mrc.thresholds.empty(), "mrc.thresholds must not be empty");
    for (double t : mrc.thresholds) require(t >= 0.0 && std::isfinite(t), "mrc thresholds must be >= 0");
}

ModelParams Scenario::params() const {
    return ModelParams(field.lambda, field.p, field.alpha, field.epsilon);
}

PointSet Scenario::points() const {
    if (!geometry.points.empty()) return PointSet(geometry.points);
    require(geometry.n >= 1, "geometry.n must be >= 1");
    require(geometry.radius > 0.0 || geometry.n == 1, "geometry.radius must be > 0");
    return PointSet::circle(geometry.radius, geometry.n);
}

QuadratureSpec Scenario::quadrature_spec() const {
    QuadratureSpec q;
    q.rel_tol = quadrature.rel_tol;
    q.abs_tol = quadrature.abs_tol;
    q.max_evals = quadrature.max_evals;
    q.tail = quadrature.tail;
    q.max_cutoff_radius = quadrature.max_cutoff_radius;
    return q;
}

McOptions Scenario::mc_options() const {
    McOptions o;
    o.samples = simulation.samples;
    o.seed = RngSeed{simulation.seed, 0};
    o.threads = simulation.threads;
    o.window = SimWindow{simulation.half_width, simulation.far_field};
    o.bias_tolerance = simulation.bias_tolerance;
    return o;
}

std::vector<double> Scenario::thresholds_linear() const {
    const std::size_t n = points().size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = db_to_linear(thresholds_db.size() == 1 ? thresholds_db[0] : thresholds_db[i]);
    }
    return out;
}

json to_json(const Scenario& s) {
    json points = json::array();
    for (const Point2& z : s.geometry.points) points.push_back({z.x, z.y});
    json models = json::array();
    for (ModelKind m : s.models) models.push_back(to_string(m));

    return {
        {"field", {{"lambda", s.field.lambda}, {"p", s.field.p}, {"alpha", s.field.alpha},
                   {"epsilon", s.field.epsilon}}},
        {"geometry", {{"radius", s.geometry.radius}, {"n", s.geometry.n}, {"points", points}}},
        {"thresholds_db", s.thresholds_db},
        {"models", models},
        {"simulation", {{"samples", s.simulation.samples},
                        {"seed", s.simulation.seed},
                        {"threads", s.simulation.threads},
                        {"half_width", s.simulation.half_width},
                        {"far_field", far_field_name(s.simulation.far_field)},
                        {"bias_tolerance", s.simulation.bias_tolerance}}},
        {"quadrature", {{"rel_tol", s.quadrature.rel_tol},
                        {"abs_tol", s.quadrature.abs_tol},
                        {"max_evals", s.quadrature.max_evals},
                        {"tail", tail_name(s.quadrature.tail)},
                        {"max_cutoff_radius", s.quadrature.max_cutoff_radius}}},
        {"enumeration_cap", s.enumeration_cap},
        {"simulate_model", to_string(s.simulate_model)},
        {"figure1", {{"lambda_p", s.figure1.lambda_p}, {"y_db", s.figure1.y_db}}},
        {"figure2", {{"lambda_p", s.figure2.lambda_p}, {"alpha", s.figure2.alpha}}},
        {"figure3", {{"lambda_p", s.figure3.lambda_p},
                     {"y_db", s.figure3.y_db},
                     {"alpha", s.figure3.alpha},
                     {"n", s.figure3.n}}},
        {"mrc", {{"n_branches", s.mrc.n_branches},
                 {"branch_radius", s.mrc.branch_radius},
                 {"link_distance", s.mrc.link_distance},
                 {"thresholds", s.mrc.thresholds}}},
    };
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    Section root(j, "config");

    if (const json* f = root.child("field")) {
        Section sec(*f, "field");
        sec.read("lambda", s.field.lambda);
        sec.read("p", s.field.p);
        sec.read("alpha", s.field.alpha);
        sec.read("epsilon", s.field.epsilon);
        sec.finish();
    }
    if (const json* g = root.child("geometry")) {
        Section sec(*g, "geometry");
        sec.read("radius", s.geometry.radius);
        sec.read("n", s.geometry.n);
        std::vector<std::vector<double>> pts;
        sec.read("points", pts);
        s.geometry.points.clear();
        for (const auto& p : pts) {
            require(p.size() == 2, "geometry.points entries must be [x, y] pairs");
            s.geometry.points.push_back({p[0], p[1]});
        }
        sec.finish();
    }
    root.read("thresholds_db", s.thresholds_db);
    std::vector<std::string> models;
    root.read("models", models);
    if (j.contains("models")) {
        s.models.clear();
        for (const auto& m : models) s.models.push_back(model_kind_from_string(m));
    }
    if (const json* sim = root.child("simulation")) {
        Section sec(*sim, "simulation");
        sec.read("samples", s.simulation.samples);
        sec.read("seed", s.simulation.seed);
        sec.read("threads", s.simulation.threads);
        sec.read("half_width", s.simulation.half_width);
        std::string far = far_field_name(s.simulation.far_field);
        sec.read("far_field", far);
        s.simulation.far_field = far_field_from(far);
        sec.read("bias_tolerance", s.simulation.bias_tolerance);
        sec.finish();
    }
    if (const json* q = root.child("quadrature")) {
        Section sec(*q, "quadrature");
        sec.read("rel_tol", s.quadrature.rel_tol);
        sec.read("abs_tol", s.quadrature.abs_tol);
        sec.read("max_evals", s.quadrature.max_evals);
        std::string tail = tail_name(s.quadrature.tail);
        sec.read("tail", tail);
        s.quadrature.tail = tail_from(tail);
        sec.read("max_cutoff_radius", s.quadrature.max_cutoff_radius);
        sec.finish();
    }
    root.read("enumeration_cap", s.enumeration_cap);
    std::string sim_model = to_string(s.simulate_model);
    root.read("simulate_model", sim_model);
    s.simulate_model = model_kind_from_string(sim_model);
    if (const json* f = root.child("figure1")) {
        Section sec(*f, "figure1");
        sec.read("lambda_p", s.figure1.lambda_p);
        sec.read("y_db", s.figure1.y_db);
        sec.finish();
    }
    if (const json* f = root.child("figure2")) {
        Section sec(*f, "figure2");
        sec.read("lambda_p", s.figure2.lambda_p);
        sec.read("alpha", s.figure2.alpha);
        sec.finish();
    }
    if (const json* f = root.child("figure3")) {
        Section sec(*f, "figure3");
        sec.read("lambda_p", s.figure3.lambda_p);
        sec.read("y_db", s.figure3.y_db);
        sec.read("alpha", s.figure3.alpha);
        sec.read("n", s.figure3.n);
        sec.finish();
    }
    if (const json* m = root.child("mrc")) {
        Section sec(*m, "mrc");
        sec.read("n_branches", s.mrc.n_branches);
        sec.read("branch_radius", s.mrc.branch_radius);
        sec.read("link_distance", s.mrc.link_distance);
        sec.read("thresholds", s.mrc.thresholds);
        sec.finish();
    }
    root.finish();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidArgument("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return scenario_from_json(j);
}

}  // namespace ppcorr::app

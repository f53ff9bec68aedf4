#include "commands.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "ppcorr/ccdf.hpp"
#include "ppcorr/errors.hpp"
#include "ppcorr/frameworks.hpp"
#include "ppcorr/serialize.hpp"
#include "ppcorr/simulator.hpp"

#ifndef PPCORR_VERSION
#define PPCORR_VERSION "unknown"
#endif

namespace ppcorr::app {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t flag(bool b) { return b ? 1 : 0; }

std::int64_t index1(std::size_t i) { return static_cast<std::int64_t>(i + 1); }

ModelParams with_density(const ModelParams& base, double lambda_p, double alpha) {
    return ModelParams(lambda_p / base.p(), base.p(), alpha, base.epsilon());
}

SirThresholds common_thresholds(double y, const PointSet& points, const ModelParams& params) {
    const std::vector<double> ys(points.size(), y);
    return normalize_thresholds(ys, points, params);
}

bool selected(const Scenario& s, ModelKind kind) {
    for (ModelKind m : s.models) {
        if (m == kind) return true;
    }
    return false;
}

/// Strictly validated sampler model for the given correlations.
InterferenceModel build_model(ModelKind kind, const CorrelationMatrix& zeta,
                              const ModelParams& params) {
    switch (kind) {
        case ModelKind::kPpp: return PppModel{};
        case ModelKind::kMixture: return solve_mixture_weights(zeta);
        case ModelKind::kCombination: return build_intensity_split(zeta, params);
    }
    throw InvalidArgument("unknown model");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

json cell_json(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) {
        return std::isfinite(*d) ? json(*d) : json(nullptr);
    }
    if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
    return std::get<std::string>(c);
}

}  // namespace

Format format_from_string(const std::string& name) {
    if (name == "csv") return Format::kCsv;
    if (name == "json") return Format::kJson;
    throw InvalidArgument("unknown format '" + name + "' (expected csv or json)");
}

CommandOutput cmd_zeta(const Scenario& s) {
    const PointSet points = s.points();
    const CorrelationMatrix zeta = build_correlation_matrix(points, s.params(), s.quadrature_spec());
    CommandOutput out{"zeta", {{"i", "j", "distance", "zeta"}, {}}, {}};
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            out.table.rows.push_back(
                {index1(i), index1(j), distance(points[i], points[j]), zeta(i, j)});
        }
    }
    out.summary["correlation_matrix"] = to_json(zeta);
    return out;
}

CommandOutput cmd_weights(const Scenario& s) {
    const CorrelationMatrix zeta = build_correlation_matrix(s.points(), s.params(), s.quadrature_spec());
    const MixtureWeights q = solve_mixture_weights(zeta);
    CommandOutput out{"weights", {{"i"}, {}}, {}};
    for (std::size_t k = 0; k < q.size(); ++k) out.table.columns.push_back("q_" + std::to_string(k + 1));
    for (std::size_t i = 0; i < q.size(); ++i) {
        std::vector<Cell> row{index1(i)};
        for (std::size_t k = 0; k < q.size(); ++k) row.emplace_back(q(i, k));
        out.table.rows.push_back(std::move(row));
    }
    out.summary["mixture_weights"] = to_json(q);
    out.summary["correlation_matrix"] = to_json(zeta);
    out.summary["residual"] = forward_substitution_residual(q, zeta);
    return out;
}

CommandOutput cmd_split(const Scenario& s) {
    const ModelParams params = s.params();
    const CorrelationMatrix zeta = build_correlation_matrix(s.points(), params, s.quadrature_spec());
    const std::vector<double> margins = check_combination_feasibility(zeta);
    const IntensitySplit split = build_intensity_split(zeta, params);
    CommandOutput out{"split", {{"i"}, {}}, {}};
    for (std::size_t k = 0; k < split.size(); ++k) {
        out.table.columns.push_back("lambda_" + std::to_string(k + 1));
    }
    out.table.columns.push_back("margin");
    for (std::size_t i = 0; i < split.size(); ++i) {
        std::vector<Cell> row{index1(i)};
        for (std::size_t k = 0; k < split.size(); ++k) row.emplace_back(split(i, k));
        row.emplace_back(margins[i]);
        out.table.rows.push_back(std::move(row));
    }
    out.summary["intensity_split"] = to_json(split);
    out.summary["correlation_matrix"] = to_json(zeta);
    return out;
}

CommandOutput cmd_ccdf(const Scenario& s) {
    const ModelParams params = s.params();
    const PointSet points = s.points();
    const SirThresholds th = normalize_thresholds(s.thresholds_linear(), points, params);
    const CorrelationMatrix zeta = build_correlation_matrix(points, params, s.quadrature_spec());
    const McOptions opts = s.mc_options();

    CommandOutput out{"ccdf", {{"model", "analytic", "mc", "mc_ci", "mc_lower", "mc_upper"}, {}}, {}};
    for (ModelKind kind : s.models) {
        const InterferenceModel model = build_model(kind, zeta, params);
        double analytic = kNaN;
        switch (kind) {
            case ModelKind::kPpp:
                analytic = joint_ccdf_ppp(points, th, params, s.quadrature_spec());
                break;
            case ModelKind::kMixture:
                analytic = joint_ccdf_mixture(std::get<MixtureWeights>(model), th, params,
                                              s.enumeration_cap);
                break;
            case ModelKind::kCombination:
                analytic = joint_ccdf_combination(std::get<IntensitySplit>(model), th, params);
                break;
        }
        std::vector<Cell> row{std::string(to_string(kind)), analytic};
        if (opts.samples > 0) {
            const McEstimate mc = estimate_joint_ccdf(model, points, th, params, opts);
            row.insert(row.end(), {mc.estimate, mc.halfwidth(), mc.lower, mc.upper});
        } else {
            row.insert(row.end(), {kNaN, kNaN, kNaN, kNaN});
        }
        out.table.rows.push_back(std::move(row));
    }
    out.summary["correlation_matrix"] = to_json(zeta);
    return out;
}

CommandOutput cmd_figure1(const Scenario& s) {
    const PointSet points = s.points();
    const ModelParams base = s.params();
    const CorrelationMatrix zeta = build_correlation_matrix(points, base, s.quadrature_spec());
    const SignedMixtureWeights q = solve_mixture_weights_signed(zeta);
    const bool comb_ok = combination_feasible(zeta);
    const McOptions opts = s.mc_options();

    CommandOutput out{"figure1",
                      {{"lambda_p", "y_db", "ppp", "mixture", "combination", "mixture_feasible",
                        "combination_feasible", "mc_ppp", "mc_ci", "mc_lower", "mc_upper"},
                       {}},
                      {}};
    for (double lp : s.figure1.lambda_p) {
        const ModelParams params = with_density(base, lp, base.alpha());
        std::vector<SirThresholds> grid;
        for (double y_db : s.figure1.y_db) grid.push_back(common_thresholds(db_to_linear(y_db), points, params));

        std::vector<McEstimate> mc;
        if (opts.samples > 0) mc = estimate_joint_ccdf_grid(PppModel{}, points, grid, params, opts);

        for (std::size_t k = 0; k < grid.size(); ++k) {
            const McEstimate e = mc.empty() ? McEstimate{kNaN, kNaN, kNaN} : mc[k];
            out.table.rows.push_back({
                lp,
                s.figure1.y_db[k],
                joint_ccdf_ppp(points, grid[k], params, s.quadrature_spec()),
                joint_ccdf_mixture_signed(q.q, grid[k], params, s.enumeration_cap),
                joint_ccdf_combination_signed(zeta, grid[k], params),
                flag(q.feasible),
                flag(comb_ok),
                e.estimate,
                mc.empty() ? kNaN : e.halfwidth(),
                e.lower,
                e.upper,
            });
        }
    }
    out.summary["correlation_matrix"] = to_json(zeta);
    return out;
}

CommandOutput cmd_figure2(const Scenario& s) {
    const PointSet points = s.points();
    if (points.size() != 2) throw InvalidArgument("figure2 needs exactly two observation points");
    const ModelParams base = s.params();
    McOptions opts = s.mc_options();

    CommandOutput out{"figure2",
                      {{"alpha", "lambda_p", "zeta", "ppp", "ppp_ci", "mixture", "mixture_ci",
                        "combination", "combination_ci"},
                       {}},
                      {}};
    json zetas = json::array();
    for (double alpha : s.figure2.alpha) {
        const ModelParams shape = with_density(base, 1.0, alpha);
        const CorrelationMatrix zeta = build_correlation_matrix(points, shape, s.quadrature_spec());
        zetas.push_back({{"alpha", alpha}, {"zeta", zeta(0, 1)}});
        for (double lp : s.figure2.lambda_p) {
            const ModelParams params = with_density(base, lp, alpha);
            std::vector<Cell> row{alpha, lp, zeta(0, 1)};
            for (ModelKind kind : {ModelKind::kPpp, ModelKind::kMixture, ModelKind::kCombination}) {
                if (!selected(s, kind)) {
                    row.insert(row.end(), {kNaN, kNaN});
                    continue;
                }
                const McEstimate e =
                    estimate_sir_correlation(build_model(kind, zeta, params), points, params, opts);
                row.insert(row.end(), {e.estimate, e.halfwidth()});
            }
            out.table.rows.push_back(std::move(row));
        }
    }
    out.summary["zeta"] = zetas;
    return out;
}

CommandOutput cmd_figure3(const Scenario& s) {
    const ModelParams base = s.params();
    const McOptions opts = s.mc_options();
    const double y = db_to_linear(s.figure3.y_db);

    CommandOutput out{"figure3",
                      {{"alpha", "n", "ppp", "mixture", "combination", "mixture_feasible",
                        "combination_feasible", "mc_ppp", "mc_ci", "mc_lower", "mc_upper"},
                       {}},
                      {}};
    for (double alpha : s.figure3.alpha) {
        const ModelParams params = with_density(base, s.figure3.lambda_p, alpha);
        for (std::size_t n : s.figure3.n) {
            const PointSet points = PointSet::circle(s.geometry.radius, n);
            const SirThresholds th = common_thresholds(y, points, params);
            const CorrelationMatrix zeta = build_correlation_matrix(points, params, s.quadrature_spec());
            const SignedMixtureWeights q = solve_mixture_weights_signed(zeta);
            McEstimate e{kNaN, kNaN, kNaN};
            if (opts.samples > 0) e = estimate_joint_ccdf(PppModel{}, points, th, params, opts);
            out.table.rows.push_back({
                alpha,
                static_cast<std::int64_t>(n),
                joint_ccdf_ppp(points, th, params, s.quadrature_spec()),
                joint_ccdf_mixture_signed(q.q, th, params, s.enumeration_cap),
                joint_ccdf_combination_signed(zeta, th, params),
                flag(q.feasible),
                flag(combination_feasible(zeta)),
                e.estimate,
                opts.samples > 0 ? e.halfwidth() : kNaN,
                e.lower,
                e.upper,
            });
        }
    }
    return out;
}

CommandOutput cmd_mrc(const Scenario& s) {
    const ModelParams params = s.params();
    const PointSet branches = PointSet::circle(s.mrc.branch_radius, s.mrc.n_branches);
    const CorrelationMatrix zeta = build_correlation_matrix(branches, params, s.quadrature_spec());
    const MixtureWeights q = solve_mixture_weights(zeta);
    const McOptions opts = s.mc_options();

    CommandOutput out{"mrc",
                      {{"threshold", "mixture", "mixture_ci", "ppp", "ppp_ci", "difference",
                        "combined_ci", "agree"},
                       {}},
                      {}};
    for (double t : s.mrc.thresholds) {
        const MrcConfig cfg{s.mrc.n_branches, s.mrc.link_distance, t};
        const McEstimate mix = mrc_outage_mixture(cfg, q, params, opts, s.enumeration_cap);
        const McEstimate ppp = mrc_outage_ppp(cfg, branches, params, opts);
        const double diff = mix.estimate - ppp.estimate;
        const double combined = std::hypot(mix.halfwidth(), ppp.halfwidth());
        out.table.rows.push_back({t, mix.estimate, mix.halfwidth(), ppp.estimate, ppp.halfwidth(),
                                  diff, combined, flag(std::abs(diff) <= combined)});
    }
    out.summary["mixture_weights"] = to_json(q);
    return out;
}

CommandOutput cmd_simulate(const Scenario& s) {
    const ModelParams params = s.params();
    const PointSet points = s.points();
    InterferenceModel model = PppModel{};
    if (s.simulate_model != ModelKind::kPpp) {
        const CorrelationMatrix zeta = build_correlation_matrix(points, params, s.quadrature_spec());
        model = build_model(s.simulate_model, zeta, params);
    }
    std::ostringstream csv;
    write_samples_csv(csv, model, points, params, s.mc_options());

    // Re-read the core CSV so both output formats share one code path.
    CommandOutput out{"simulate", {}, {{"model", to_string(s.simulate_model)}}};
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    {
        std::istringstream header(line);
        std::string name;
        while (std::getline(header, name, ',')) out.table.columns.push_back(name);
    }
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string field;
        std::vector<Cell> row;
        std::getline(fields, field, ',');
        row.emplace_back(static_cast<std::int64_t>(std::stoll(field)));
        while (std::getline(fields, field, ',')) row.emplace_back(std::stod(field));
        out.table.rows.push_back(std::move(row));
    }
    return out;
}

CommandOutput run_command(const std::string& name, const Scenario& s) {
    s.validate();
    if (name == "zeta") return cmd_zeta(s);
    if (name == "weights") return cmd_weights(s);
    if (name == "split") return cmd_split(s);
    if (name == "ccdf") return cmd_ccdf(s);
    if (name == "figure1") return cmd_figure1(s);
    if (name == "figure2") return cmd_figure2(s);
    if (name == "figure3") return cmd_figure3(s);
    if (name == "mrc") return cmd_mrc(s);
    if (name == "simulate") return cmd_simulate(s);
    throw InvalidArgument("unknown command '" + name + "'");
}

json metadata(const CommandOutput& out, const Scenario& s) {
    return {{"command", out.command},
            {"version", PPCORR_VERSION},
            {"config", to_json(s)},
            {"summary", out.summary}};
}

void write_csv(std::ostream& os, const Table& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        os << (c ? "," : "") << table.columns[c];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        os << format_double(v);
                    } else {
                        os << v;
                    }
                },
                row[c]);
        }
        os << '\n';
    }
}

json to_json(const CommandOutput& out, const Scenario& s) {
    json rows = json::array();
    for (const auto& row : out.table.rows) {
        json r = json::array();
        for (const Cell& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    return {{"metadata", metadata(out, s)}, {"columns", out.table.columns}, {"rows", std::move(rows)}};
}

std::string render(const CommandOutput& out, const Scenario& s, Format format) {
    if (format == Format::kJson) return to_json(out, s).dump(2) + "\n";
    std::ostringstream os;
    write_csv(os, out.table);
    return os.str();
}

}  // namespace ppcorr::app

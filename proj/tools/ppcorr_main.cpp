// ppcorr: correlated-interference experiments from the command line.
//
//   ppcorr <command> [--config file.json] [--seed N] [--samples N]
//                    [--out path] [--format csv|json] [overrides...]
//
// Exit codes: 0 ok, 2 infeasible model, 3 numerical non-convergence,
// 4 configuration error, 1 anything else.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "app/commands.hpp"
#include "app/scenario.hpp"
#include "ppcorr/errors.hpp"

namespace {

using namespace ppcorr;
using namespace ppcorr::app;

enum ExitCode : int {
    kOk = 0,
    kOther = 1,
    kInfeasible = 2,
    kNonConvergence = 3,
    kConfigError = 4,
};

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<unsigned> threads;
    std::string out;
    std::string meta;
    std::string format = "csv";

    std::optional<double> lambda;
    std::optional<double> p;
    std::optional<double> alpha;
    std::optional<double> radius;
    std::optional<std::size_t> n;
    std::vector<double> y_db;
    std::vector<std::string> models;
    std::optional<double> half_width;
    std::optional<std::string> far_field;
    std::optional<std::size_t> cap;

    std::optional<std::size_t> branches;
    std::optional<double> branch_radius;
    std::optional<double> link_distance;
    std::vector<double> mrc_thresholds;
    std::optional<std::string> simulate_model;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON scenario file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "root RNG seed");
    cmd->add_option("--samples", o.samples, "Monte-Carlo sample count (0 disables simulation)");
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores); results do not depend on it");
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--meta", o.meta, "metadata JSON path for CSV output (default <out>.meta.json)");
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));

    cmd->add_option("--lambda", o.lambda, "interferer intensity");
    cmd->add_option("--p", o.p, "ALOHA transmit probability");
    cmd->add_option("--alpha", o.alpha, "path-loss exponent");
    cmd->add_option("--radius", o.radius, "radius of the observation circle");
    cmd->add_option("-n,--points", o.n, "number of observation points on the circle");
    cmd->add_option("--y-db", o.y_db, "SIR threshold(s) in dB: one common value or one per point")->delimiter(',');
    cmd->add_option("--models", o.models, "models to evaluate (ppp, mixture, combination)")->delimiter(',');
    cmd->add_option("--half-width", o.half_width, "simulation window half-width");
    cmd->add_option("--far-field", o.far_field, "far-field treatment")
        ->check(CLI::IsMember({"compensated", "truncate"}));
    cmd->add_option("--cap", o.cap, "mixture enumeration cap");
}

Scenario resolve(const Overrides& o) {
    Scenario s = o.config.empty() ? Scenario{} : load_scenario(o.config);
    if (o.seed) s.simulation.seed = *o.seed;
    if (o.samples) s.simulation.samples = *o.samples;
    if (o.threads) s.simulation.threads = *o.threads;
    if (o.lambda) s.field.lambda = *o.lambda;
    if (o.p) s.field.p = *o.p;
    if (o.alpha) s.field.alpha = *o.alpha;
    if (o.radius) {
        s.geometry.radius = *o.radius;
        s.geometry.points.clear();
    }
    if (o.n) {
        s.geometry.n = *o.n;
        s.geometry.points.clear();
    }
    if (!o.y_db.empty()) s.thresholds_db = o.y_db;
    if (!o.models.empty()) {
        s.models.clear();
        for (const auto& m : o.models) s.models.push_back(model_kind_from_string(m));
    }
    if (o.half_width) s.simulation.half_width = *o.half_width;
    if (o.far_field) {
        s.simulation.far_field = *o.far_field == "truncate" ? FarField::kTruncate : FarField::kCompensated;
    }
    if (o.cap) s.enumeration_cap = *o.cap;
    if (o.branches) s.mrc.n_branches = *o.branches;
    if (o.branch_radius) s.mrc.branch_radius = *o.branch_radius;
    if (o.link_distance) s.mrc.link_distance = *o.link_distance;
    if (!o.mrc_thresholds.empty()) s.mrc.thresholds = o.mrc_thresholds;
    if (o.simulate_model) s.simulate_model = model_kind_from_string(*o.simulate_model);
    return s;
}

int run(const std::string& command, const Overrides& o) {
    const Scenario s = resolve(o);
    const Format format = format_from_string(o.format);
    const CommandOutput result = run_command(command, s);
    const std::string text = render(result, s, format);

    if (o.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(o.out, std::ios::binary);
        if (!file) throw InvalidArgument("cannot write '" + o.out + "'");
        file << text;
    }
    if (format == Format::kCsv && (!o.meta.empty() || !o.out.empty())) {
        const std::string path = o.meta.empty() ? o.out + ".meta.json" : o.meta;
        std::ofstream meta(path, std::ios::binary);
        if (!meta) throw InvalidArgument("cannot write '" + path + "'");
        meta << metadata(result, s).dump(2) << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatially correlated interference in Poisson fields"};
    app.require_subcommand(1);
    Overrides o;

    const std::vector<std::pair<const char*, const char*>> commands{
        {"zeta", "pairwise interference correlation coefficients"},
        {"weights", "mixture weights solved from the correlation matrix"},
        {"split", "combination-framework intensity split and feasibility margins"},
        {"ccdf", "joint SIR CCDF per model, analytic and Monte-Carlo"},
        {"figure1", "joint CCDF versus common threshold for several densities"},
        {"figure2", "SIR correlation versus density per model"},
        {"figure3", "joint CCDF versus number of points"},
        {"mrc", "MRC outage: mixture decomposition versus shared-field simulation"},
        {"simulate", "raw interference and SIR samples"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_common(cmd, o);
        subs.push_back(cmd);
    }
    CLI::App* mrc = app.get_subcommand("mrc");
    mrc->add_option("--branches", o.branches, "number of receive branches");
    mrc->add_option("--branch-radius", o.branch_radius, "radius of the branch circle");
    mrc->add_option("--link-distance", o.link_distance, "reference link length");
    mrc->add_option("--thresholds", o.mrc_thresholds, "outage thresholds T (linear)")->delimiter(',');
    app.get_subcommand("simulate")
        ->add_option("--model", o.simulate_model, "model to sample")
        ->check(CLI::IsMember({"ppp", "mixture", "combination"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    std::string command;
    for (CLI::App* cmd : subs) {
        if (cmd->parsed()) command = cmd->get_name();
    }

    try {
        return run(command, o);
    } catch (const InfeasibleModel& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const DegenerateSample& e) {
        std::cerr << "degenerate sample: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
}

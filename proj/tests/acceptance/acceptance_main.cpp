// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "ppcorr/ccdf.hpp"
#include "ppcorr/errors.hpp"
#include "ppcorr/frameworks.hpp"
#include "ppcorr/interference.hpp"
#include "ppcorr/simulator.hpp"
#include "ppcorr/statistics.hpp"

using namespace ppcorr;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "  FAILED: " << what << "\n";
        }
    }
};

double db(double v) { return std::pow(10.0, v / 10.0); }

SirThresholds common(double y, const PointSet& ps, const ModelParams& p) {
    return normalize_thresholds(std::vector<double>(ps.size(), y), ps, p);
}

McOptions run(std::size_t samples, std::uint64_t seed = 1) {
    McOptions o;
    o.samples = samples;
    o.seed = RngSeed{seed, 0};
    return o;
}

SquareMatrix to_matrix(const std::vector<std::vector<double>>& m) {
    SquareMatrix out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = m[i][j];
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// 1. Monte-Carlo mean and variance against the closed forms.
void moment_closure(Outcome& o) {
    const ModelParams p(0.1, 1.0, 4.0);
    McOptions opts = run(100'000);
    opts.window = SimWindow{20.0, FarField::kTruncate};
    const auto xs = sample_marginal(PppModel{}, PointSet({{0.0, 0.0}}), p, opts, 0);
    Moments m;
    for (double x : xs) m.add(x);
    const double deficit = window_mean_deficit(p, opts.window);
    const double mean = m.mean() + deficit;
    const double var = m.variance();
    const double mu = interference_mean(p);
    const double sigma2 = interference_variance(p);
    o.detail << "  mean " << fmt(mean) << " (sample " << fmt(m.mean()) << " + deficit " << fmt(deficit)
             << ") vs " << fmt(mu) << "; variance " << fmt(var) << " vs " << fmt(sigma2) << "\n";
    o.require(std::abs(mean / mu - 1.0) <= 0.02, "mean within 2%");
    o.require(std::abs(var / sigma2 - 1.0) <= 0.02, "variance within 2%");
}

// 2. The PPP joint CCDF at N = 1 is the Laplace transform.
void laplace_closure(Outcome& o) {
    double worst = 0.0;
    for (double alpha : {2.5, 4.0}) {
        const ModelParams p(1.0, 1.0, alpha);
        for (double yh : {0.1, 1.0, 3.17, 10.0}) {
            SirThresholds th{{yh}, {yh}};
            const double gap = std::abs(joint_ccdf_ppp(PointSet({{0.0, 0.0}}), th, p) - interference_laplace(yh, p));
            worst = std::max(worst, gap);
            o.require(gap <= 1e-5, "alpha " + fmt(alpha) + ", y_hat " + fmt(yh));
        }
    }
    o.detail << "  max |F^c - L| = " << fmt(worst) << "\n";
}

// 3. lambda p times the correlation denominator is the variance.
void variance_identity(Outcome& o) {
    for (double alpha : {2.5, 3.0, 4.0}) {
        const ModelParams p(0.37, 1.0, alpha);
        const double lhs = correlation_denominator(p).value * p.density();
        const double rhs = interference_variance(p);
        const double rel = std::abs(lhs / rhs - 1.0);
        o.detail << "  alpha " << alpha << ": relative difference " << fmt(rel) << "\n";
        o.require(rel <= 1e-6, "alpha " + fmt(alpha));
    }
}

// 4. Random feasible zeta matrices survive the weights round trip.
void mixture_round_trip(Outcome& o) {
    std::mt19937_64 rng(4);
    double worst_back = 0.0;
    double worst_residual = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(t) % 6;
        const CorrelationMatrix zeta(to_matrix(oracle::implied_correlation(oracle::random_weights(n, rng))));
        const MixtureWeights q = solve_mixture_weights(zeta);
        const CorrelationMatrix back = mixture_implied_correlation(q);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) worst_back = std::max(worst_back, std::abs(back(i, j) - zeta(i, j)));
        }
        worst_residual = std::max(worst_residual, forward_substitution_residual(q, zeta));
    }
    o.detail << "  max |Z' - Z| = " << fmt(worst_back) << ", max residual " << fmt(worst_residual) << "\n";
    o.require(worst_back <= 1e-10, "implied correlation");
    o.require(worst_residual <= 1e-12, "forward-substitution residual");
}

// 5. The mixture marginal has the PPP interference distribution.
void distribution_preservation(Outcome& o) {
    const ModelParams p(0.1, 1.0, 4.0);
    const PointSet ps = PointSet::circle(0.25, 3);
    const MixtureWeights q = solve_mixture_weights(build_correlation_matrix(ps, p));
    const auto mix = sample_marginal(q, ps, p, run(100'000, 1), 2);
    const auto ppp = sample_marginal(PppModel{}, ps, p, run(100'000, 2), 2);
    const KsResult ks = ks_two_sample(mix, ppp);
    o.detail << "  KS D = " << fmt(ks.statistic) << ", p = " << fmt(ks.p_value) << "\n";
    o.require(ks.p_value >= 0.01, "KS does not reject at 0.01");
}

// 6. Sampled interference correlations hit their targets.
void correlation_matching(Outcome& o) {
    const ModelParams p(0.1, 1.0, 4.0);
    const PointSet ps = PointSet::circle(0.25, 2);
    const CorrelationMatrix zeta = build_correlation_matrix(ps, p);
    const double target = zeta(0, 1);
    const McOptions opts = run(100'000);
    const double mix = estimate_interference_correlation(solve_mixture_weights(zeta), ps, p, opts).estimate;
    const double comb = estimate_interference_correlation(build_intensity_split(zeta, p), ps, p, opts).estimate;
    const double ppp = estimate_interference_correlation(PppModel{}, ps, p, opts).estimate;
    o.detail << "  target " << fmt(target) << "; mixture " << fmt(mix) << ", combination " << fmt(comb)
             << ", PPP " << fmt(ppp) << "\n";
    o.require(std::abs(mix - target) <= 0.01, "mixture within 0.01");
    o.require(std::abs(comb - target) <= 0.01, "combination within 0.01");
    o.require(std::abs(ppp - target) <= 0.02, "PPP field within 0.02");
}

// 7. Each analytic evaluator falls inside its own sampler's 95% interval.
void analytic_oracle_closure(Outcome& o) {
    const PointSet ps = PointSet::circle(0.25, 2);
    const double ys[] = {-5.0, 0.0, 5.0, 10.0};
    for (double lp : {1.0, 0.01}) {
        const ModelParams p(lp, 1.0, 4.0);
        const CorrelationMatrix zeta = build_correlation_matrix(ps, p);
        const MixtureWeights q = solve_mixture_weights(zeta);
        const IntensitySplit split = build_intensity_split(zeta, p);
        std::vector<SirThresholds> grid;
        for (double y : ys) grid.push_back(common(db(y), ps, p));

        const std::vector<std::pair<std::string, InterferenceModel>> models{
            {"ppp", PppModel{}}, {"mixture", q}, {"combination", split}};
        for (const auto& [name, model] : models) {
            const auto mc = estimate_joint_ccdf_grid(model, ps, grid, p, run(100'000));
            for (std::size_t k = 0; k < grid.size(); ++k) {
                double exact = 0.0;
                if (name == "ppp") exact = joint_ccdf_ppp(ps, grid[k], p);
                if (name == "mixture") exact = joint_ccdf_mixture(q, grid[k], p);
                if (name == "combination") exact = joint_ccdf_combination(split, grid[k], p);
                const bool ok = mc[k].contains(exact);
                o.detail << "  lp " << lp << " y " << ys[k] << " dB " << name << ": analytic " << fmt(exact)
                         << ", MC " << fmt(mc[k].estimate) << " [" << fmt(mc[k].lower) << ", "
                         << fmt(mc[k].upper) << "]" << (ok ? "" : "  <-- outside") << "\n";
                o.require(ok, name + " at lp " + fmt(lp) + ", y " + fmt(ys[k]) + " dB");
            }
        }
    }
}

// 8. Figure 1 gaps between the frameworks and the exact PPP result.
void figure1_fidelity(Outcome& o) {
    const PointSet ps = PointSet::circle(0.25, 2);
    const double ys[] = {-5.0, 0.0, 5.0, 10.0};
    double max_gap[2] = {0.0, 0.0};
    const double lps[] = {1.0, 0.01};
    for (int l = 0; l < 2; ++l) {
        const ModelParams p(lps[l], 1.0, 4.0);
        const CorrelationMatrix zeta = build_correlation_matrix(ps, p);
        const MixtureWeights q = solve_mixture_weights(zeta);
        const bool comb_ok = combination_feasible(zeta);
        for (double y : ys) {
            const SirThresholds th = common(db(y), ps, p);
            const double exact = joint_ccdf_ppp(ps, th, p);
            const double mix_gap = std::abs(joint_ccdf_mixture(q, th, p) - exact);
            max_gap[l] = std::max(max_gap[l], mix_gap);
            o.detail << "  lp " << lps[l] << " y " << y << " dB: ppp " << fmt(exact) << ", mixture gap "
                     << fmt(mix_gap);
            bool better = true;
            if (comb_ok) {
                const double comb_gap = std::abs(joint_ccdf_combination(build_intensity_split(zeta, p), th, p) - exact);
                o.detail << ", combination gap " << fmt(comb_gap);
                better = mix_gap <= comb_gap;
            }
            o.detail << "\n";
            o.require(better, "mixture gap <= combination gap at lp " + fmt(lps[l]) + ", y " + fmt(y) + " dB");
        }
    }
    o.detail << "  max mixture gap: lp 1 -> " << fmt(max_gap[0]) << ", lp 0.01 -> " << fmt(max_gap[1]) << "\n";
    o.require(max_gap[0] <= 0.03, "max gap at lp 1 <= 0.03");
    o.require(max_gap[1] > max_gap[0], "gap widens as lp decreases");
}

// 9. Figure 3 trend in N and alpha.
void figure3_trend(Outcome& o) {
    const std::size_t ns[] = {2, 3, 4, 5, 6};
    std::vector<double> gaps[2];
    const double alphas[] = {4.0, 2.5};
    for (int a = 0; a < 2; ++a) {
        const ModelParams p(0.01, 1.0, alphas[a]);
        for (std::size_t n : ns) {
            const PointSet ps = PointSet::circle(0.25, n);
            const SirThresholds th = common(db(5.0), ps, p);
            const SignedMixtureWeights q = solve_mixture_weights_signed(build_correlation_matrix(ps, p));
            const double analytic = joint_ccdf_mixture_signed(q.q, th, p);
            const McEstimate mc = estimate_joint_ccdf(PppModel{}, ps, th, p, run(2'000'000));
            const double gap = std::abs(analytic - mc.estimate);
            gaps[a].push_back(gap);
            o.detail << "  alpha " << alphas[a] << " N " << n << ": mixture " << fmt(analytic)
                     << (q.feasible ? "" : " (outside feasible region)") << ", MC PPP " << fmt(mc.estimate)
                     << " +- " << fmt(mc.halfwidth()) << ", gap " << fmt(gap) << "\n";
        }
    }
    for (std::size_t k = 1; k < gaps[0].size(); ++k) {
        o.require(gaps[0][k] >= gaps[0][k - 1], "alpha 4 gap non-decreasing at N " + std::to_string(ns[k]));
    }
    for (std::size_t k = 0; k < gaps[0].size(); ++k) {
        o.require(gaps[1][k] < gaps[0][k], "alpha 2.5 gap below alpha 4 gap at N " + std::to_string(ns[k]));
    }
}

// 10. Combination feasibility boundary.
void combination_feasibility(Outcome& o) {
    const ModelParams p(1.0, 1.0, 4.0);
    bool threw = false;
    try {
        build_intensity_split(CorrelationMatrix::uniform(3, 0.6), p);
    } catch (const InfeasibleSplit& e) {
        threw = true;
        o.detail << "  N 3, zeta 0.6: InfeasibleSplit (row " << e.row() << ", margin " << fmt(e.margin()) << ")\n";
    }
    o.require(threw, "N 3, zeta 0.6 raises InfeasibleSplit");
    std::size_t checked = 0;
    for (int k = 1; k < 500; ++k) {
        const double z = k / 1000.0;
        try {
            build_intensity_split(CorrelationMatrix::uniform(2, z), p);
            ++checked;
        } catch (const InfeasibleSplit&) {
            o.require(false, "N 2, zeta " + fmt(z) + " feasible");
        }
    }
    o.detail << "  N 2: " << checked << " of 499 zeta values in (0, 0.5) feasible\n";
}

// 11. MRC outage: mixture decomposition against the shared PPP field.
void mrc_cross_check(Outcome& o) {
    const ModelParams p(1.0, 1.0, 4.0);
    for (std::size_t n : {2u, 4u}) {
        const PointSet ps = PointSet::circle(1.0, n);
        const MixtureWeights q = solve_mixture_weights(build_correlation_matrix(ps, p));
        for (double t : {0.5, 1.0, 2.0}) {
            const MrcConfig cfg{n, 1.0, t};
            const McEstimate mix = mrc_outage_mixture(cfg, q, p, run(100'000));
            const McEstimate ppp = mrc_outage_ppp(cfg, ps, p, run(100'000));
            const double diff = std::abs(mix.estimate - ppp.estimate);
            const double ci = std::hypot(mix.halfwidth(), ppp.halfwidth());
            o.detail << "  N " << n << " T " << t << ": mixture " << fmt(mix.estimate) << ", PPP "
                     << fmt(ppp.estimate) << ", |diff| " << fmt(diff) << " vs " << fmt(ci)
                     << (diff <= ci ? "" : "  <-- outside") << "\n";
            o.require(diff <= ci, "N " + std::to_string(n) + ", T " + fmt(t));
        }
    }
}

// 12. Identical seeds give byte-identical CSV output.
std::string slurp(const std::filesystem::path& f) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void determinism(Outcome& o) {
    const auto dir = std::filesystem::temp_directory_path() / "ppcorr_acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::string> commands{
        "simulate --model ppp --samples 3000 --seed 7 -n 3",
        "simulate --model mixture --samples 3000 --seed 7 -n 3",
        "ccdf --samples 20000 --seed 11",
        "figure1 --samples 5000 --seed 3",
    };
    int k = 0;
    for (const auto& c : commands) {
        std::string outputs[2];
        for (int r = 0; r < 2; ++r) {
            const auto f = dir / ("run" + std::to_string(k) + "_" + std::to_string(r) + ".csv");
            const std::string cmd = std::string(PPCORR_CLI_PATH) + " " + c + " --out " + f.string() + " 2>/dev/null";
            const int status = std::system(cmd.c_str());
            o.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "'" + c + "' exits 0");
            outputs[r] = slurp(f);
        }
        const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
        o.detail << "  '" << c << "': " << outputs[0].size() << " bytes, " << (same ? "identical" : "DIFFERENT") << "\n";
        o.require(same, "'" + c + "' byte-identical");
        ++k;
    }
    std::filesystem::remove_all(dir);
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"moment closure", moment_closure},
        {"Laplace closure", laplace_closure},
        {"variance identity", variance_identity},
        {"mixture round trip", mixture_round_trip},
        {"distribution preservation", distribution_preservation},
        {"correlation matching", correlation_matching},
        {"analytic vs Monte-Carlo CCDF", analytic_oracle_closure},
        {"figure 1 fidelity", figure1_fidelity},
        {"figure 3 trend", figure3_trend},
        {"combination feasibility", combination_feasibility},
        {"MRC cross-check", mrc_cross_check},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << " ("
                  << fmt(secs) << " s)\n"
                  << o.detail.str() << std::flush;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}

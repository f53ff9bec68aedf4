#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ppcorr/errors.hpp"
#include "ppcorr/interference.hpp"
#include "ppcorr/simulator.hpp"

using namespace ppcorr;
using doctest::Approx;

namespace {

/// Outage of two-branch MRC when both branches see the same interference J:
/// P(h1 + h2 < s J) = 1 - L(s) + s L'(s), with L(s) = exp(-lambda p k(s)).
double shared_two_branch_outage(double s, const ModelParams& p) {
    const double a = p.alpha();
    const double c = 2.0 * std::numbers::pi * std::numbers::pi / (a * std::sin(2.0 * std::numbers::pi / a));
    const double e = 1.0 - 2.0 / a;
    const double k = c * s * std::pow(1.0 + s, -e);
    const double dk = c * (std::pow(1.0 + s, -e) - s * e * std::pow(1.0 + s, -e - 1.0));
    const double l = std::exp(-p.density() * k);
    return 1.0 - l - s * p.density() * dk * l;
}

McOptions small_run(std::size_t samples, std::uint64_t seed = 42) {
    McOptions o;
    o.samples = samples;
    o.seed = RngSeed{seed, 0};
    o.threads = 1;
    return o;
}

}  // namespace

TEST_CASE("PPP sampling") {
    const SimWindow w{5.0, FarField::kTruncate};
    const auto a = sample_ppp(2.0, w, RngSeed{9, 0});
    const auto b = sample_ppp(2.0, w, RngSeed{9, 0});
    const auto c = sample_ppp(2.0, w, RngSeed{10, 0});
    CHECK(a == b);
    CHECK(a != c);
    for (const Point2& x : a) {
        CHECK(std::abs(x.x) <= 5.0);
        CHECK(std::abs(x.y) <= 5.0);
    }
    CHECK(sample_ppp(0.0, w, RngSeed{}).empty());

    // Poisson count with mean 200 over many seeds.
    double total = 0.0;
    for (std::uint64_t s = 0; s < 400; ++s) total += static_cast<double>(sample_ppp(2.0, w, RngSeed{s, 0}).size());
    CHECK(total / 400.0 == Approx(200.0).epsilon(0.01));
}

TEST_CASE("window bias accounting") {
    const ModelParams p(0.1, 1.0, 4.0);
    const SimWindow trunc{20.0, FarField::kTruncate};
    CHECK(window_mean_deficit(p, trunc) == Approx(2.0 * std::numbers::pi * 0.1 / 400.0 / 2.0));
    CHECK(window_mean_deficit(p, SimWindow{20.0, FarField::kCompensated}) == 0.0);
    CHECK_NOTHROW(check_window(p, trunc, 0.01));
    CHECK_THROWS_AS(check_window(ModelParams(0.1, 1.0, 2.5), trunc, 0.01), InvalidArgument);

    // The square holds the disk of radius w and sits inside the disk of radius w sqrt 2.
    const ModelParams q(1.0, 1.0, 4.0);
    auto beyond = [](double r) { return std::numbers::pi * (std::numbers::pi / 2.0 - std::atan(r * r)); };
    const double far = far_field_mean_per_density({0, 0}, q, trunc);
    CHECK(far < beyond(20.0));
    CHECK(far > beyond(20.0 * std::sqrt(2.0)));
    // Off-centre points see more of the far field on the near side.
    CHECK(far_field_mean_per_density({10.0, 0.0}, q, trunc) > far);
}

TEST_CASE("field simulation basics") {
    const PointSet ps = PointSet::circle(0.25, 3);
    const FieldSample empty = simulate_field(ps, ModelParams(0.0, 1.0, 4.0), SimWindow{20, FarField::kTruncate}, {});
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(empty.interference[i] == 0.0);
        CHECK(std::isinf(empty.sir[i]));
    }
    const ModelParams p(0.5, 1.0, 4.0);
    const FieldSample a = simulate_field(ps, p, SimWindow{}, RngSeed{3, 1});
    const FieldSample b = simulate_field(ps, p, SimWindow{}, RngSeed{3, 1});
    CHECK(a.interference == b.interference);
    CHECK(a.sir == b.sir);

    const auto q = solve_mixture_weights(CorrelationMatrix::uniform(3, 0.3));
    CHECK(sample_mixture_model(q, p, SimWindow{}, RngSeed{}).size() == 3);
    const auto split = build_intensity_split(CorrelationMatrix::uniform(3, 0.3), p);
    CHECK(sample_combination_model(split, p, SimWindow{}, RngSeed{}).size() == 3);
}

TEST_CASE("interference marginal mean") {
    const ModelParams p(0.1, 1.0, 4.0);
    const PointSet ps({{0.0, 0.0}});
    const auto mixture_q = MixtureWeights::identity(1);
    for (const InterferenceModel& model : {InterferenceModel{PppModel{}}, InterferenceModel{mixture_q}}) {
        const auto xs = sample_marginal(model, ps, p, small_run(20000), 0);
        Moments m;
        for (double x : xs) m.add(x);
        const McEstimate e = normal_interval(m.mean(), m.variance(), m.count(), 3.5);
        CHECK(e.contains(interference_mean(p)));
    }
}

TEST_CASE("sampled correlations follow the framework targets") {
    const ModelParams p(0.1, 1.0, 4.0);
    const PointSet ps = PointSet::circle(0.25, 2);
    const McOptions opts = small_run(30000, 5);

    const auto q = solve_mixture_weights(CorrelationMatrix::uniform(2, 0.3));
    CHECK(std::abs(estimate_interference_correlation(q, ps, p, opts).estimate - 0.3) < 0.03);

    const auto split = build_intensity_split(CorrelationMatrix::uniform(2, 0.3), p);
    CHECK(std::abs(estimate_interference_correlation(split, ps, p, opts).estimate - 0.3) < 0.03);

    const McEstimate ind = estimate_interference_correlation(MixtureWeights::identity(2), ps, p, opts);
    CHECK(std::abs(ind.estimate) < 0.03);
}

TEST_CASE("estimates are invariant to the worker count") {
    const ModelParams p(0.1, 1.0, 4.0);
    const PointSet ps = PointSet::circle(0.25, 2);
    const SirThresholds th = normalize_thresholds(std::vector<double>{1.0, 1.0}, ps, p);
    McOptions one = small_run(5000);
    McOptions many = one;
    many.threads = 4;
    const McEstimate a = estimate_joint_ccdf(PppModel{}, ps, th, p, one);
    const McEstimate b = estimate_joint_ccdf(PppModel{}, ps, th, p, many);
    CHECK(a.estimate == b.estimate);
    CHECK(a.lower == b.lower);

    const auto q = solve_mixture_weights(CorrelationMatrix::uniform(2, 0.4));
    CHECK(estimate_interference_correlation(q, ps, p, one).estimate ==
          estimate_interference_correlation(q, ps, p, many).estimate);

    std::ostringstream s1, s2;
    write_samples_csv(s1, PppModel{}, ps, p, small_run(3000));
    McOptions threaded = small_run(3000);
    threaded.threads = 3;
    write_samples_csv(s2, PppModel{}, ps, p, threaded);
    CHECK(s1.str() == s2.str());
}

TEST_CASE("joint CCDF estimator") {
    const ModelParams p(0.1, 1.0, 4.0);
    const PointSet ps = PointSet::circle(0.25, 2);
    const SirThresholds zero = normalize_thresholds(std::vector<double>{0.0, 0.0}, ps, p);
    const McEstimate e = estimate_joint_ccdf(PppModel{}, ps, zero, p, small_run(2000));
    CHECK(e.estimate == 1.0);
    CHECK(e.halfwidth() == 0.0);

    McOptions none = small_run(0);
    const SirThresholds th = normalize_thresholds(std::vector<double>{1.0, 1.0}, ps, p);
    CHECK_THROWS_AS(estimate_joint_ccdf(PppModel{}, ps, th, p, none), InvalidArgument);
    CHECK_THROWS_AS(estimate_joint_ccdf(PppModel{}, ps, normalize_thresholds(std::vector<double>{1.0}, PointSet({{0, 0}}), p), p, small_run(100)),
                    InvalidArgument);

    // Empty field: every realization succeeds.
    const McEstimate full = estimate_joint_ccdf(PppModel{}, ps, th, ModelParams(0.0, 1.0, 4.0), small_run(1000));
    CHECK(full.estimate == 1.0);
}

TEST_CASE("SIR correlation estimator") {
    const ModelParams p(0.1, 1.0, 4.0);
    CHECK_THROWS_AS(estimate_sir_correlation(PppModel{}, PointSet::circle(0.25, 3), p, small_run(20000)),
                    InvalidArgument);
    CHECK_THROWS_AS(estimate_sir_correlation(PppModel{}, PointSet::circle(0.25, 2), p, small_run(5000)),
                    InvalidArgument);
    const McEstimate far = estimate_sir_correlation(PppModel{}, PointSet({{-20.0, 0.0}, {20.0, 0.0}}), p,
                                                    small_run(10000));
    CHECK(far.contains(0.0));
}

TEST_CASE("MRC outage") {
    const ModelParams p(0.1, 1.0, 4.0);
    MrcConfig cfg{2, 1.0, 0.0};
    const auto q = solve_mixture_weights(CorrelationMatrix::uniform(2, 0.2));
    CHECK(mrc_outage_mixture(cfg, q, p, small_run(1000)).estimate == 0.0);
    CHECK(mrc_outage_ppp(cfg, PointSet::circle(1.0, 2), p, small_run(10000)).estimate == 0.0);
    CHECK_THROWS_AS(mrc_outage_ppp(cfg, PointSet::circle(1.0, 2), p, small_run(9999)), InvalidArgument);

    // N = 1: 1 - L(T / l(d)).
    cfg = MrcConfig{1, 1.0, 2.0};
    const double s = 2.0 / path_loss_at(1.0, p);
    const McEstimate one = mrc_outage_mixture(cfg, MixtureWeights::identity(1), p, small_run(40000));
    const double exact = 1.0 - interference_laplace(s, p);
    CHECK(std::abs(one.estimate - exact) <= one.halfwidth() * 1.5);
    const McEstimate one_ppp = mrc_outage_ppp(cfg, PointSet({{0.0, 0.0}}), p, small_run(40000, 8));
    CHECK(std::abs(one_ppp.estimate - exact) <= one_ppp.halfwidth() * 1.5);

    // Fully correlated two-branch mixture: both branches share one J.
    cfg = MrcConfig{2, 1.0, 3.0};
    const auto full = solve_mixture_weights(CorrelationMatrix::uniform(2, 1.0));
    const McEstimate shared = mrc_outage_mixture(cfg, full, p, small_run(40000));
    const double ref = shared_two_branch_outage(3.0 / path_loss_at(1.0, p), p);
    CHECK(std::abs(shared.estimate - ref) <= shared.halfwidth() * 1.5);

    // Empty field never drops out.
    CHECK(mrc_outage_ppp(cfg, PointSet::circle(1.0, 2), ModelParams(0.0, 1.0, 4.0), small_run(10000)).estimate == 0.0);

    CHECK_THROWS_AS(mrc_outage_mixture(MrcConfig{3, 1.0, 1.0}, q, p, small_run(100)), InvalidArgument);
    CHECK_THROWS_AS(MrcConfig({0, 1.0, 1.0}).validate(), InvalidArgument);
}

TEST_CASE("sample CSV") {
    const ModelParams p(0.1, 1.0, 4.0);
    const PointSet ps = PointSet::circle(0.25, 2);
    std::ostringstream out;
    write_samples_csv(out, PppModel{}, ps, p, small_run(10));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "sample,I_1,I_2,SIR_1,SIR_2");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 10);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ppcorr/ccdf.hpp"
#include "ppcorr/errors.hpp"
#include "ppcorr/frameworks.hpp"
#include "ppcorr/interference.hpp"

using namespace ppcorr;
using doctest::Approx;

namespace {

double db(double v) { return std::pow(10.0, v / 10.0); }

SirThresholds common(double y, const PointSet& ps, const ModelParams& p) {
    return normalize_thresholds(std::vector<double>(ps.size(), y), ps, p);
}

std::vector<std::vector<double>> to_vectors(const SquareMatrix& m) {
    std::vector<std::vector<double>> out(m.size(), std::vector<double>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = m(i, j);
    }
    return out;
}

// Exact PPP joint CCDF for N = 2, R = 0.25, alpha = 4 at y = -5, 0, 5, 10 dB:
// the plane integral of 1 - prod 1/(1 + y_hat l) from an independent
// adaptive evaluation at relative tolerance 1e-12.
constexpr double kPppIntegral[] = {2.579611513221488, 6.185179633260551, 12.565784059677704,
                                   23.253199022540556};

}  // namespace

TEST_CASE("threshold normalization") {
    const ModelParams p(1.0, 1.0, 4.0);
    const PointSet ps({{0.5, 0.0}, {0.0, 2.0}});
    const SirThresholds th = normalize_thresholds(std::vector<double>{2.0, 0.5}, ps, p);
    CHECK(th.y_hat[0] == Approx(2.0 * (1.0 + 0.0625)));
    CHECK(th.y_hat[1] == Approx(0.5 * 17.0));
    CHECK_THROWS_AS(normalize_thresholds(std::vector<double>{1.0}, ps, p), InvalidArgument);
    CHECK_THROWS_AS(normalize_thresholds(std::vector<double>{1.0, -1.0}, ps, p), InvalidArgument);
}

TEST_CASE("joint CCDF under the PPP: reference values") {
    const PointSet ps = PointSet::circle(0.25, 2);
    const double ys[] = {-5.0, 0.0, 5.0, 10.0};
    for (int k = 0; k < 4; ++k) {
        for (double lp : {1.0, 0.01}) {
            const ModelParams p(lp, 1.0, 4.0);
            const double v = joint_ccdf_ppp(ps, common(db(ys[k]), ps, p), p);
            CHECK(v == Approx(std::exp(-lp * kPppIntegral[k])).epsilon(1e-6));
        }
    }
}

TEST_CASE("joint CCDF under the PPP: N = 1 reduces to the Laplace transform") {
    for (double alpha : {2.5, 4.0}) {
        const ModelParams p(0.7, 1.0, alpha);
        const PointSet ps({{0.3, 0.1}});
        for (double yh : {0.1, 1.0, 3.17, 10.0}) {
            SirThresholds th;
            th.y = {yh};
            th.y_hat = {yh};
            CHECK(joint_ccdf_ppp(ps, th, p) == Approx(interference_laplace(yh, p)).epsilon(1e-7));
        }
    }
}

TEST_CASE("joint CCDF under the PPP: trivial limits and properties") {
    const PointSet ps = PointSet::circle(0.25, 3);
    const ModelParams p(1.0, 1.0, 4.0);
    CHECK(joint_ccdf_ppp(ps, common(0.0, ps, p), p) == 1.0);
    CHECK(joint_ccdf_ppp(ps, common(1.0, ps, p), ModelParams(0.0, 1.0, 4.0)) == 1.0);

    // Decreasing in y and bounded by every marginal.
    double prev = 1.0;
    for (double y_db = -10.0; y_db <= 10.0; y_db += 5.0) {
        const SirThresholds th = common(db(y_db), ps, p);
        const double v = joint_ccdf_ppp(ps, th, p);
        CHECK(v < prev);
        CHECK(v >= 0.0);
        CHECK(v <= interference_laplace(th.y_hat[0], p) + 1e-12);
        prev = v;
    }

    // Far-apart points decouple into a product of marginals.
    const PointSet far({{0.0, 0.0}, {200.0, 0.0}});
    const ModelParams q(0.05, 1.0, 4.0);
    SirThresholds th;
    th.y = {1.0, 1.0};
    th.y_hat = {2.0, 3.0};
    CHECK(joint_ccdf_ppp(far, th, q) ==
          Approx(interference_laplace(2.0, q) * interference_laplace(3.0, q)).epsilon(1e-6));
}

TEST_CASE("assignment enumeration") {
    const MixtureWeights q = solve_mixture_weights(CorrelationMatrix::uniform(3, 0.3));
    const std::vector<double> yh{1.0, 2.0, 4.0};
    std::vector<std::vector<std::size_t>> seen;
    double total = 0.0;
    for_each_assignment(q, yh, [&](const MixtureAssignment& a) {
        seen.push_back(a.a);
        total += a.weight;
        double s = 0.0;
        for (double v : a.s) s += v;
        CHECK(s == Approx(7.0));
    });
    CHECK(seen.size() == 6);  // 1 * 2 * 3
    CHECK(total == Approx(1.0).epsilon(1e-14));
    CHECK(std::is_sorted(seen.begin(), seen.end()));

    CHECK_THROWS_AS(for_each_assignment(MixtureWeights::identity(11), std::vector<double>(11, 1.0),
                                        [](const MixtureAssignment&) {}),
                    EnumerationLimit);
    CHECK_THROWS_AS(for_each_assignment(MixtureWeights::identity(3), yh,
                                        [](const MixtureAssignment&) {}, 2),
                    EnumerationLimit);
    CHECK_THROWS_AS(joint_ccdf_mixture(MixtureWeights::identity(4),
                                       SirThresholds{{1, 1, 1, 1}, {1, 1, 1, 1}},
                                       ModelParams(1.0, 1.0, 4.0), 3),
                    EnumerationLimit);
}

TEST_CASE("joint CCDF under the mixture against brute-force oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 4.0);
    for (std::size_t n = 1; n <= 4; ++n) {
        for (double alpha : {2.5, 4.0}) {
            const auto qv = oracle::random_weights(n, rng);
            SquareMatrix m(n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) m(i, j) = qv[i][j];
            }
            const MixtureWeights q(m);
            SirThresholds th;
            for (std::size_t i = 0; i < n; ++i) {
                th.y.push_back(1.0);
                th.y_hat.push_back(u(rng));
            }
            const ModelParams p(0.2, 1.0, alpha);
            CHECK(joint_ccdf_mixture(q, th, p) ==
                  Approx(oracle::mixture_ccdf(qv, th.y_hat, 0.2, alpha)).epsilon(1e-8));
        }
    }
}

TEST_CASE("mixture and combination: structural identities") {
    const ModelParams p(0.5, 1.0, 4.0);
    SirThresholds th{{1, 1, 1}, {0.7, 1.3, 2.1}};

    // Identity weights and a diagonal split are both the independent product.
    double indep = 1.0;
    for (double v : th.y_hat) indep *= interference_laplace(v, p);
    CHECK(joint_ccdf_mixture(MixtureWeights::identity(3), th, p) == Approx(indep).epsilon(1e-13));
    const IntensitySplit diag = build_intensity_split(CorrelationMatrix::identity(3), p);
    CHECK(joint_ccdf_combination(diag, th, p) == Approx(indep).epsilon(1e-13));

    // Fully correlated mixture evaluates the Laplace transform at the sum.
    SquareMatrix shared(3);
    for (std::size_t i = 0; i < 3; ++i) shared(i, 0) = 1.0;
    const MixtureWeights one(shared);
    CHECK(joint_ccdf_mixture(one, th, p) == Approx(interference_laplace(4.1, p)).epsilon(1e-12));

    // N = 1: every framework equals the marginal.
    SirThresholds t1{{1}, {2.5}};
    CHECK(joint_ccdf_mixture(MixtureWeights::identity(1), t1, p) ==
          Approx(interference_laplace(2.5, p)));
    CHECK(joint_ccdf_combination(build_intensity_split(CorrelationMatrix::identity(1), p), t1, p) ==
          Approx(interference_laplace(2.5, p)));

    // Combination closed form for N = 2 against the per-component oracle.
    const auto zeta = CorrelationMatrix::uniform(2, 0.3);
    const IntensitySplit split = build_intensity_split(zeta, p);
    SirThresholds t2{{1, 1}, {0.8, 1.9}};
    const double ref = oracle::laplace(0.8, 0.5 * 0.7, 4.0) * oracle::laplace(1.9, 0.5 * 0.7, 4.0) *
                       oracle::laplace(2.7, 0.5 * 0.3, 4.0);
    CHECK(joint_ccdf_combination(split, t2, p) == Approx(ref).epsilon(1e-8));
    CHECK_THROWS_AS(joint_ccdf_combination(split, t2, ModelParams(0.5, 1.0, 4.0, 2.0)),
                    InvalidArgument);
}

TEST_CASE("signed evaluators") {
    const ModelParams p(0.01, 1.0, 4.0);
    const PointSet ps = PointSet::circle(0.25, 3);
    const SirThresholds th = common(db(5.0), ps, p);
    const CorrelationMatrix z = build_correlation_matrix(ps, p);

    // Feasible inputs reproduce the strict evaluators exactly.
    const SignedMixtureWeights s = solve_mixture_weights_signed(z);
    REQUIRE(s.feasible);
    CHECK(joint_ccdf_mixture_signed(s.q, th, p) == joint_ccdf_mixture(MixtureWeights(s.q), th, p));
    const auto zc = CorrelationMatrix::uniform(3, 0.3);
    CHECK(joint_ccdf_combination_signed(zc, th, p) ==
          Approx(joint_ccdf_combination(build_intensity_split(zc, p), th, p)).epsilon(1e-14));

    // Outside the feasible region they still evaluate, matching the oracle on signed weights.
    const PointSet ps4 = PointSet::circle(0.25, 4);
    const CorrelationMatrix z4 = build_correlation_matrix(ps4, p);
    const SignedMixtureWeights s4 = solve_mixture_weights_signed(z4);
    CHECK_FALSE(s4.feasible);
    const SirThresholds th4 = common(db(5.0), ps4, p);
    CHECK(joint_ccdf_mixture_signed(s4.q, th4, p) ==
          Approx(oracle::mixture_ccdf(to_vectors(s4.q), th4.y_hat, 0.01, 4.0)).epsilon(1e-8));
    CHECK_FALSE(combination_feasible(z4));
    CHECK(std::isfinite(joint_ccdf_combination_signed(z4, th4, p)));

    SquareMatrix upper = SquareMatrix::identity(2);
    upper(0, 1) = 0.1;
    CHECK_THROWS_AS(joint_ccdf_mixture_signed(upper, SirThresholds{{1, 1}, {1, 1}}, p), InvalidArgument);
}

TEST_CASE("analytic frameworks near the PPP at high density") {
    // N = 2, R = 0.25, alpha = 4, lambda p = 1: mixture within 1.2e-3 of exact.
    const ModelParams p(1.0, 1.0, 4.0);
    const PointSet ps = PointSet::circle(0.25, 2);
    const CorrelationMatrix z = build_correlation_matrix(ps, p);
    const MixtureWeights q = solve_mixture_weights(z);
    const IntensitySplit split = build_intensity_split(z, p);
    for (double y_db : {-5.0, 0.0, 5.0, 10.0}) {
        const SirThresholds th = common(db(y_db), ps, p);
        const double exact = joint_ccdf_ppp(ps, th, p);
        CHECK(std::abs(joint_ccdf_mixture(q, th, p) - exact) < 1.2e-3);
        CHECK(std::abs(joint_ccdf_combination(split, th, p) - exact) < 2.0e-3);
    }
}

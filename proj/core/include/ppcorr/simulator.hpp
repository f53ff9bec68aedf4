#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "ppcorr/ccdf.hpp"
#include "ppcorr/frameworks.hpp"
#include "ppcorr/model.hpp"
#include "ppcorr/rng.hpp"
#include "ppcorr/statistics.hpp"

namespace ppcorr {

/// Treatment of interferers outside the sampling square.
enum class FarField {
    /// Ignore them; the mean interference is short by window_mean_deficit().
    kTruncate,
    /// Add their mean contribution, computed by quadrature, as a constant.
    kCompensated,
};

/// Sampling region [-w, w]^2.
struct SimWindow {
    double half_width = 20.0;
    FarField far_field = FarField::kCompensated;

    double area() const { return 4.0 * half_width * half_width; }
};

/// Bound on the interference mean lost by truncating the field to the
/// window: 2 pi lambda p w^(2 - alpha) / (alpha - 2). Zero when compensated.
double window_mean_deficit(const ModelParams& params, const SimWindow& window);

/// Throws InvalidArgument if window_mean_deficit / E[I] exceeds tolerance.
void check_window(const ModelParams& params, const SimWindow& window, double tolerance);

/// Mean interference at z per unit intensity from interferers outside the
/// window: the integral of l(x, z) over the complement of the square.
double far_field_mean_per_density(Point2 z, const ModelParams& params, const SimWindow& window);

/// One realization of the interference and SIR at N observation points.
/// sir[i] is +inf when interference[i] == 0.
struct FieldSample {
    std::vector<double> interference;
    std::vector<double> sir;
};

/// Homogeneous PPP of the given intensity in the window.
std::vector<Point2> sample_ppp(double intensity, const SimWindow& window, RngSeed rng);

/// Shared interferer positions, independent exp(1) fading per
/// (interferer, observation point) pair and per reference link.
FieldSample simulate_field(const PointSet& points, const ModelParams& params,
                           const SimWindow& window, RngSeed rng);

/// (J_{A_1}, ..., J_{A_N}) with J_n independent PPP interference at the origin
/// and independent selectors A_i drawn from row i of q.
std::vector<double> sample_mixture_model(const MixtureWeights& q, const ModelParams& params,
                                         const SimWindow& window, RngSeed rng);

/// Row sums of independent component interferences L_mn = L_nm with
/// intensities p lam_mn.
std::vector<double> sample_combination_model(const IntensitySplit& split,
                                             const ModelParams& params, const SimWindow& window,
                                             RngSeed rng);

/// Exact PPP field at the observation points.
struct PppModel {};

using InterferenceModel = std::variant<PppModel, MixtureWeights, IntensitySplit>;

/// Draws interference vectors of one model. Construction precomputes the
/// far-field compensation; draw() is const and thread-safe.
class InterferenceSampler {
public:
    InterferenceSampler(InterferenceModel model, const PointSet& points, const ModelParams& params,
                        const SimWindow& window);

    std::size_t size() const noexcept { return n_; }
    void draw(Streams& streams, std::span<double> out) const;

private:
    double origin_interference(Engine& positions, Engine& fading, double density) const;

    InterferenceModel model_;
    std::vector<Point2> points_;
    ModelParams params_;
    SimWindow window_;
    std::size_t n_;
    std::vector<double> far_field_;  ///< per observation point, per unit intensity
    double far_origin_ = 0.0;        ///< at the origin, per unit intensity
};

struct McOptions {
    std::size_t samples = 100'000;
    RngSeed seed{};
    /// Worker threads; 0 picks the hardware concurrency. Results do not
    /// depend on this value.
    unsigned threads = 0;
    SimWindow window{};
    /// Largest admissible window_mean_deficit relative to E[I].
    double bias_tolerance = 0.01;
};

/// Samples per RNG batch; batch b always uses Streams(seed, b).
inline constexpr std::size_t kBatchSize = 1024;

/// Fraction of realizations with SIR_i > y_i at every point, with a 95%
/// Wilson interval. All thresholds zero gives exactly 1 with a zero-width CI.
McEstimate estimate_joint_ccdf(const InterferenceModel& model, const PointSet& points,
                               const SirThresholds& th, const ModelParams& params,
                               const McOptions& opts);

/// Same realizations scored against several threshold vectors.
std::vector<McEstimate> estimate_joint_ccdf_grid(const InterferenceModel& model,
                                                 const PointSet& points,
                                                 std::span<const SirThresholds> grid,
                                                 const ModelParams& params, const McOptions& opts);

/// Pearson correlation of (SIR_1, SIR_2) with a jackknife 95% interval over
/// RNG batches. Requires exactly two points and samples >= 10^4.
McEstimate estimate_sir_correlation(const InterferenceModel& model, const PointSet& points,
                                    const ModelParams& params, const McOptions& opts);

/// Pearson correlation of the interference at points i and j.
McEstimate estimate_interference_correlation(const InterferenceModel& model,
                                             const PointSet& points, const ModelParams& params,
                                             const McOptions& opts, std::size_t i = 0,
                                             std::size_t j = 1);

/// Raw interference samples at point i (for marginal comparisons).
std::vector<double> sample_marginal(const InterferenceModel& model, const PointSet& points,
                                    const ModelParams& params, const McOptions& opts,
                                    std::size_t i);

/// Maximal-ratio-combining scenario: N branches, reference link of length d,
/// outage when sum_i h_i l(d) / I(z_i) < threshold.
struct MrcConfig {
    std::size_t n_branches = 2;
    double link_distance = 1.0;
    double threshold = 1.0;

    void validate() const;
};

/// Outage under the mixture model: exact outer sum over selector patterns,
/// inner probability by Monte Carlo with shared J draws. Normal 95% interval.
McEstimate mrc_outage_mixture(const MrcConfig& cfg, const MixtureWeights& q,
                              const ModelParams& params, const McOptions& opts,
                              std::size_t cap = kDefaultEnumerationCap);

/// Outage by direct simulation of the shared PPP field. Wilson 95% interval.
/// Requires samples >= 10^4.
McEstimate mrc_outage_ppp(const MrcConfig& cfg, const PointSet& points, const ModelParams& params,
                          const McOptions& opts);

/// One CSV row per realization: sample, I_1..I_N, SIR_1..SIR_N.
void write_samples_csv(std::ostream& out, const InterferenceModel& model, const PointSet& points,
                       const ModelParams& params, const McOptions& opts);

}  // namespace ppcorr

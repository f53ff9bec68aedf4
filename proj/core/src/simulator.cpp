#include "ppcorr/simulator.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>

#include "ppcorr/errors.hpp"
#include "ppcorr/interference.hpp"

namespace ppcorr {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double draw_exp(Engine& eng) { return std::exponential_distribution<double>(1.0)(eng); }

std::int64_t draw_count(Engine& eng, double mean) {
    if (!(mean > 0.0)) return 0;
    return std::poisson_distribution<std::int64_t>(mean)(eng);
}

unsigned resolve_threads(unsigned requested, std::size_t batches) {
    unsigned t = requested;
    if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(1, batches)));
}

/// Runs fn(streams, count, acc) for every batch and returns the per-batch
/// accumulators in batch order. Batch b always sees Streams(seed, b), so the
/// result does not depend on the number of workers.
template <class Acc, class Fn>
std::vector<Acc> run_batches(std::size_t samples, RngSeed seed, unsigned threads, Fn&& fn) {
    const std::size_t batches = (samples + kBatchSize - 1) / kBatchSize;
    std::vector<Acc> out(batches);
    auto work = [&](std::size_t b) {
        Streams streams(seed, b);
        const std::size_t count = std::min(kBatchSize, samples - b * kBatchSize);
        fn(streams, count, out[b]);
    };

    const unsigned workers = resolve_threads(threads, batches);
    if (workers <= 1) {
        for (std::size_t b = 0; b < batches; ++b) work(b);
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t b = next++; b < batches; b = next++) {
                    try {
                        work(b);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = batches;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

void require_size(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
        throw InvalidArgument(std::string(what) + ": expected dimension " + std::to_string(expected) +
                              ", got " + std::to_string(got));
    }
}

std::vector<double> signal_path_loss(const PointSet& points, const ModelParams& params) {
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = path_loss(Point2{}, points[i], params);
    return out;
}

bool all_zero(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

double window_mean_deficit(const ModelParams& params, const SimWindow& window) {
    if (window.far_field == FarField::kCompensated) return 0.0;
    const double a = params.alpha();
    return 2.0 * std::numbers::pi * params.density() * std::pow(window.half_width, 2.0 - a) / (a - 2.0);
}

void check_window(const ModelParams& params, const SimWindow& window, double tolerance) {
    if (!(window.half_width > 0.0) || !std::isfinite(window.half_width)) {
        throw InvalidArgument("window half-width must be positive and finite");
    }
    const double mean = interference_mean(params);
    if (mean == 0.0) return;
    const double rel = window_mean_deficit(params, window) / mean;
    if (rel > tolerance) {
        throw InvalidArgument("window half-width " + std::to_string(window.half_width) +
                              " truncates " + std::to_string(100.0 * rel) +
                              "% of the mean interference (tolerance " +
                              std::to_string(100.0 * tolerance) +
                              "%); enlarge the window or compensate the far field");
    }
}

double far_field_mean_per_density(Point2 z, const ModelParams& params, const SimWindow& window) {
    const ModelParams unit(1.0, 1.0, params.alpha(), params.epsilon());
    const double whole = interference_mean(unit);
    QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    spec.abs_tol = 1e-12;
    spec.max_evals = 20'000'000;
    const Point2 features[] = {z};
    auto f = [&](Point2 x) { return path_loss(x, z, params); };
    const double inside = integrate_square(f, window.half_width, spec, features).value;
    return std::max(0.0, whole - inside);
}

std::vector<Point2> sample_ppp(double intensity, const SimWindow& window, RngSeed rng) {
    if (!(intensity >= 0.0)) throw InvalidArgument("PPP intensity must be >= 0");
    Engine eng = make_engine(rng, 0, Substream::kPositions);
    const std::int64_t count = draw_count(eng, intensity * window.area());
    std::uniform_real_distribution<double> coord(-window.half_width, window.half_width);
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) {
        const double x = coord(eng);
        const double y = coord(eng);
        pts.push_back({x, y});
    }
    return pts;
}

InterferenceSampler::InterferenceSampler(InterferenceModel model, const PointSet& points,
                                         const ModelParams& params, const SimWindow& window)
    : model_(std::move(model)),
      points_(points.points().begin(), points.points().end()),
      params_(params),
      window_(window),
      n_(points.size()) {
    std::visit(Overloaded{[](const PppModel&) {},
                          [&](const MixtureWeights& q) { require_size(n_, q.size(), "mixture weights"); },
                          [&](const IntensitySplit& s) {
                              require_size(n_, s.size(), "intensity split");
                              if (s.lambda() != params.lambda()) {
                                  throw InvalidArgument("intensity split total differs from lambda");
                              }
                          }},
               model_);
    far_field_.assign(n_, 0.0);
    if (window_.far_field == FarField::kCompensated) {
        if (std::holds_alternative<PppModel>(model_)) {
            for (std::size_t i = 0; i < n_; ++i) {
                far_field_[i] = far_field_mean_per_density(points_[i], params_, window_);
            }
        } else {
            far_origin_ = far_field_mean_per_density(Point2{}, params_, window_);
        }
    }
}

double InterferenceSampler::origin_interference(Engine& positions, Engine& fading,
                                                double density) const {
    if (!(density > 0.0)) return 0.0;
    const std::int64_t count = draw_count(positions, density * window_.area());
    std::uniform_real_distribution<double> coord(-window_.half_width, window_.half_width);
    const double eps = params_.epsilon();
    const double alpha = params_.alpha();
    double total = far_origin_ * density;
    for (std::int64_t k = 0; k < count; ++k) {
        const double x = coord(positions);
        const double y = coord(positions);
        total += draw_exp(fading) / (eps + distance_pow(x * x + y * y, alpha));
    }
    return total;
}

void InterferenceSampler::draw(Streams& streams, std::span<double> out) const {
    require_size(n_, out.size(), "interference buffer");
    const double density = params_.density();
    std::visit(
        Overloaded{
            [&](const PppModel&) {
                for (std::size_t i = 0; i < n_; ++i) out[i] = far_field_[i] * density;
                if (!(density > 0.0)) return;
                const std::int64_t count = draw_count(streams.positions, density * window_.area());
                std::uniform_real_distribution<double> coord(-window_.half_width, window_.half_width);
                const double eps = params_.epsilon();
                const double alpha = params_.alpha();
                for (std::int64_t k = 0; k < count; ++k) {
                    const double x = coord(streams.positions);
                    const double y = coord(streams.positions);
                    for (std::size_t i = 0; i < n_; ++i) {
                        const double dx = x - points_[i].x;
                        const double dy = y - points_[i].y;
                        out[i] += draw_exp(streams.fading) /
                                  (eps + distance_pow(dx * dx + dy * dy, alpha));
                    }
                }
            },
            [&](const MixtureWeights& q) {
                std::vector<double> j(n_);
                for (std::size_t k = 0; k < n_; ++k) {
                    j[k] = origin_interference(streams.positions, streams.fading, density);
                }
                std::uniform_real_distribution<double> unit(0.0, 1.0);
                for (std::size_t i = 0; i < n_; ++i) {
                    const double u = unit(streams.selectors);
                    std::size_t pick = i;
                    double cum = 0.0;
                    for (std::size_t k = 0; k <= i; ++k) {
                        cum += q(i, k);
                        if (u < cum && q(i, k) > 0.0) {
                            pick = k;
                            break;
                        }
                    }
                    // Rounding can leave u >= cum; fall back to the last
                    // component with positive weight.
                    if (u >= cum) {
                        for (std::size_t k = i + 1; k-- > 0;) {
                            if (q(i, k) > 0.0) {
                                pick = k;
                                break;
                            }
                        }
                    }
                    out[i] = j[pick];
                }
            },
            [&](const IntensitySplit& split) {
                const double p = params_.p();
                SquareMatrix l(n_);
                for (std::size_t m = 0; m < n_; ++m) {
                    for (std::size_t k = m; k < n_; ++k) {
                        const double v =
                            origin_interference(streams.positions, streams.fading, p * split(m, k));
                        l(m, k) = v;
                        l(k, m) = v;
                    }
                }
                for (std::size_t i = 0; i < n_; ++i) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < n_; ++k) s += l(i, k);
                    out[i] = s;
                }
            }},
        model_);
}

FieldSample simulate_field(const PointSet& points, const ModelParams& params,
                           const SimWindow& window, RngSeed rng) {
    const InterferenceSampler sampler(PppModel{}, points, params, window);
    Streams streams(rng, 0);
    FieldSample s;
    s.interference.resize(points.size());
    sampler.draw(streams, s.interference);
    s.sir.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double signal = draw_exp(streams.signal) * path_loss(Point2{}, points[i], params);
        s.sir[i] = s.interference[i] > 0.0 ? signal / s.interference[i]
                                           : std::numeric_limits<double>::infinity();
    }
    return s;
}

std::vector<double> sample_mixture_model(const MixtureWeights& q, const ModelParams& params,
                                         const SimWindow& window, RngSeed rng) {
    // Observation geometry does not enter the mixture model; any distinct
    // points of the right count will do.
    const InterferenceSampler sampler(q, PointSet::circle(1.0, q.size()), params, window);
    Streams streams(rng, 0);
    std::vector<double> out(q.size());
    sampler.draw(streams, out);
    return out;
}

std::vector<double> sample_combination_model(const IntensitySplit& split,
                                             const ModelParams& params, const SimWindow& window,
                                             RngSeed rng) {
    const InterferenceSampler sampler(split, PointSet::circle(1.0, split.size()), params, window);
    Streams streams(rng, 0);
    std::vector<double> out(split.size());
    sampler.draw(streams, out);
    return out;
}

std::vector<McEstimate> estimate_joint_ccdf_grid(const InterferenceModel& model,
                                                 const PointSet& points,
                                                 std::span<const SirThresholds> grid,
                                                 const ModelParams& params, const McOptions& opts) {
    for (const auto& th : grid) require_size(points.size(), th.size(), "thresholds");
    check_window(params, opts.window, opts.bias_tolerance);
    if (opts.samples == 0) throw InvalidArgument("sample count must be positive");

    const InterferenceSampler sampler(model, points, params, opts.window);
    const std::size_t n = points.size();
    const std::size_t g = grid.size();

    struct Hits {
        std::vector<std::size_t> count;
    };
    auto batches = run_batches<Hits>(opts.samples, opts.seed, opts.threads,
                                     [&](Streams& s, std::size_t count, Hits& acc) {
                                         acc.count.assign(g, 0);
                                         std::vector<double> interference(n);
                                         std::vector<double> h(n);
                                         for (std::size_t r = 0; r < count; ++r) {
                                             sampler.draw(s, interference);
                                             for (std::size_t i = 0; i < n; ++i) h[i] = draw_exp(s.signal);
                                             for (std::size_t k = 0; k < g; ++k) {
                                                 const auto& yh = grid[k].y_hat;
                                                 bool ok = true;
                                                 for (std::size_t i = 0; i < n && ok; ++i) {
                                                     ok = interference[i] == 0.0 ||
                                                          h[i] > yh[i] * interference[i];
                                                 }
                                                 if (ok) ++acc.count[k];
                                             }
                                         }
                                     });

    std::vector<McEstimate> out;
    out.reserve(g);
    for (std::size_t k = 0; k < g; ++k) {
        if (all_zero(grid[k].y)) {
            out.push_back({1.0, 1.0, 1.0});
            continue;
        }
        std::size_t hits = 0;
        for (const auto& b : batches) hits += b.count[k];
        out.push_back(wilson_interval(hits, opts.samples));
    }
    return out;
}

McEstimate estimate_joint_ccdf(const InterferenceModel& model, const PointSet& points,
                               const SirThresholds& th, const ModelParams& params,
                               const McOptions& opts) {
    return estimate_joint_ccdf_grid(model, points, std::span<const SirThresholds>(&th, 1), params,
                                    opts)
        .front();
}

McEstimate estimate_sir_correlation(const InterferenceModel& model, const PointSet& points,
                                    const ModelParams& params, const McOptions& opts) {
    if (points.size() != 2) throw InvalidArgument("SIR correlation needs exactly two points");
    if (opts.samples < 10'000) throw InvalidArgument("SIR correlation needs at least 10^4 samples");
    check_window(params, opts.window, opts.bias_tolerance);

    const InterferenceSampler sampler(model, points, params, opts.window);
    const std::vector<double> signal = signal_path_loss(points, params);
    auto blocks = run_batches<CoMoments>(
        opts.samples, opts.seed, opts.threads, [&](Streams& s, std::size_t count, CoMoments& acc) {
            std::array<double, 2> interference{};
            for (std::size_t r = 0; r < count; ++r) {
                sampler.draw(s, interference);
                const double h0 = draw_exp(s.signal);
                const double h1 = draw_exp(s.signal);
                if (interference[0] == 0.0 || interference[1] == 0.0) {
                    throw DegenerateSample(
                        "interference-free realization gives infinite SIR; "
                        "compensate the far field or enlarge the window");
                }
                acc.add(h0 * signal[0] / interference[0], h1 * signal[1] / interference[1]);
            }
        });
    return jackknife_correlation(blocks);
}

McEstimate estimate_interference_correlation(const InterferenceModel& model,
                                             const PointSet& points, const ModelParams& params,
                                             const McOptions& opts, std::size_t i, std::size_t j) {
    if (i >= points.size() || j >= points.size() || i == j) {
        throw InvalidArgument("interference correlation needs two distinct point indices");
    }
    check_window(params, opts.window, opts.bias_tolerance);
    const InterferenceSampler sampler(model, points, params, opts.window);
    const std::size_t n = points.size();
    auto blocks = run_batches<CoMoments>(
        opts.samples, opts.seed, opts.threads, [&](Streams& s, std::size_t count, CoMoments& acc) {
            std::vector<double> interference(n);
            for (std::size_t r = 0; r < count; ++r) {
                sampler.draw(s, interference);
                acc.add(interference[i], interference[j]);
            }
        });
    return jackknife_correlation(blocks);
}

std::vector<double> sample_marginal(const InterferenceModel& model, const PointSet& points,
                                    const ModelParams& params, const McOptions& opts,
                                    std::size_t i) {
    if (i >= points.size()) throw InvalidArgument("point index out of range");
    check_window(params, opts.window, opts.bias_tolerance);
    const InterferenceSampler sampler(model, points, params, opts.window);
    const std::size_t n = points.size();
    auto blocks = run_batches<std::vector<double>>(
        opts.samples, opts.seed, opts.threads,
        [&](Streams& s, std::size_t count, std::vector<double>& acc) {
            std::vector<double> interference(n);
            acc.reserve(count);
            for (std::size_t r = 0; r < count; ++r) {
                sampler.draw(s, interference);
                acc.push_back(interference[i]);
            }
        });
    std::vector<double> out;
    out.reserve(opts.samples);
    for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    return out;
}

void MrcConfig::validate() const {
    if (n_branches == 0) throw InvalidArgument("MRC needs at least one branch");
    if (!(link_distance >= 0.0) || !std::isfinite(link_distance)) {
        throw InvalidArgument("MRC link distance must be finite and >= 0");
    }
    if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
        throw InvalidArgument("MRC threshold must be finite and >= 0");
    }
}

McEstimate mrc_outage_mixture(const MrcConfig& cfg, const MixtureWeights& q,
                              const ModelParams& params, const McOptions& opts, std::size_t cap) {
    cfg.validate();
    require_size(cfg.n_branches, q.size(), "mixture weights");
    check_window(params, opts.window, opts.bias_tolerance);
    if (cfg.threshold == 0.0) return {0.0, 0.0, 0.0};

    // Inner probabilities only depend on how branches group onto shared J's:
    // collapse assignments to sorted group sizes with summed weights.
    const std::size_t n = q.size();
    std::map<std::vector<std::size_t>, double> patterns;
    const std::vector<double> unused(n, 0.0);
    for_each_assignment(
        q, unused,
        [&](const MixtureAssignment& as) {
            std::vector<std::size_t> sizes(n, 0);
            for (std::size_t k : as.a) ++sizes[k];
            std::erase(sizes, 0u);
            std::sort(sizes.begin(), sizes.end(), std::greater<>());
            patterns[sizes] += as.weight;
        },
        cap);

    const double scaled = cfg.threshold / path_loss_at(cfg.link_distance, params);
    const InterferenceSampler sampler(MixtureWeights::identity(n), PointSet::circle(1.0, n), params,
                                      opts.window);
    auto blocks = run_batches<Moments>(
        opts.samples, opts.seed, opts.threads, [&](Streams& s, std::size_t count, Moments& acc) {
            std::vector<double> j(n);
            std::vector<double> h(n);
            for (std::size_t r = 0; r < count; ++r) {
                sampler.draw(s, j);  // identity weights: independent J_1..J_N
                for (std::size_t i = 0; i < n; ++i) h[i] = draw_exp(s.signal);
                double y = 0.0;
                for (const auto& [sizes, weight] : patterns) {
                    double sum = 0.0;
                    std::size_t next = 0;
                    for (std::size_t g = 0; g < sizes.size(); ++g) {
                        double hs = 0.0;
                        for (std::size_t t = 0; t < sizes[g]; ++t) hs += h[next++];
                        sum += j[g] > 0.0 ? hs / j[g] : std::numeric_limits<double>::infinity();
                    }
                    if (sum < scaled) y += weight;
                }
                acc.add(y);
            }
        });
    Moments total;
    for (const auto& b : blocks) total.merge(b);
    return normal_interval(total.mean(), total.variance(), total.count());
}

McEstimate mrc_outage_ppp(const MrcConfig& cfg, const PointSet& points, const ModelParams& params,
                          const McOptions& opts) {
    cfg.validate();
    require_size(cfg.n_branches, points.size(), "branch locations");
    if (opts.samples < 10'000) throw InvalidArgument("MRC simulation needs at least 10^4 samples");
    check_window(params, opts.window, opts.bias_tolerance);
    if (cfg.threshold == 0.0) return {0.0, 0.0, 0.0};

    const double link = path_loss_at(cfg.link_distance, params);
    const InterferenceSampler sampler(PppModel{}, points, params, opts.window);
    const std::size_t n = points.size();
    auto blocks = run_batches<std::size_t>(
        opts.samples, opts.seed, opts.threads, [&](Streams& s, std::size_t count, std::size_t& hits) {
            hits = 0;
            std::vector<double> interference(n);
            for (std::size_t r = 0; r < count; ++r) {
                sampler.draw(s, interference);
                double sum = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double h = draw_exp(s.signal);
                    sum += interference[i] > 0.0 ? h * link / interference[i]
                                                 : std::numeric_limits<double>::infinity();
                }
                if (sum < cfg.threshold) ++hits;
            }
        });
    std::size_t hits = 0;
    for (std::size_t b : blocks) hits += b;
    return wilson_interval(hits, opts.samples);
}

void write_samples_csv(std::ostream& out, const InterferenceModel& model, const PointSet& points,
                       const ModelParams& params, const McOptions& opts) {
    check_window(params, opts.window, opts.bias_tolerance);
    const InterferenceSampler sampler(model, points, params, opts.window);
    const std::size_t n = points.size();
    const std::vector<double> signal = signal_path_loss(points, params);

    out << "sample";
    for (std::size_t i = 1; i <= n; ++i) out << ",I_" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",SIR_" << i;
    out << '\n';

    const auto old_precision = out.precision(12);
    std::vector<double> interference(n);
    const std::size_t batches = (opts.samples + kBatchSize - 1) / kBatchSize;
    std::size_t row = 0;
    for (std::size_t b = 0; b < batches; ++b) {
        Streams s(opts.seed, b);
        const std::size_t count = std::min(kBatchSize, opts.samples - b * kBatchSize);
        for (std::size_t r = 0; r < count; ++r, ++row) {
            sampler.draw(s, interference);
            out << row;
            for (double v : interference) out << ',' << v;
            for (std::size_t i = 0; i < n; ++i) {
                const double h = draw_exp(s.signal);
                const double sir = interference[i] > 0.0 ? h * signal[i] / interference[i]
                                                         : std::numeric_limits<double>::infinity();
                out << ',' << sir;
            }
            out << '\n';
        }
    }
    out.precision(old_precision);
}

}  // namespace ppcorr

#include "betti/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "betti/error.hpp"

namespace betti {

std::string to_string(ComplexKind kind)
{
    return kind == ComplexKind::Cech ? "cech" : "vr";
}

ComplexKind parse_complex_kind(std::string_view text)
{
    if (text == "vr") {
        return ComplexKind::VietorisRips;
    }
    if (text == "cech") {
        return ComplexKind::Cech;
    }
    throw InvalidArgument("unknown complex kind '" + std::string(text) + "' (expected vr or cech)");
}

namespace {

constexpr std::size_t kTrialsPerBlock = 4096;

void check_grid(std::span<const double> grid)
{
    if (grid.empty()) {
        throw InvalidArgument("scale grid is empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
            throw InvalidArgument("scale grid values must be finite and nonnegative");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw InvalidArgument("scale grid must be strictly increasing");
        }
    }
}

unsigned resolve_workers(unsigned workers)
{
    if (workers == 0) {
        workers = std::max(1U, std::thread::hardware_concurrency());
    }
    return workers;
}

/// Streaming mean / M2 (Welford), fed in trial order.
struct Moments {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }
};

} // namespace

int resolve_max_dim(const CurveRequest& request)
{
    if (request.n == 0) {
        throw InvalidArgument("sample size n must be at least 1");
    }
    if (request.trials < 2) {
        throw InvalidArgument("at least 2 trials are needed for a sample variance, got " +
                              std::to_string(request.trials));
    }
    check_grid(request.grid);
    if (request.complex_kind == ComplexKind::Cech) {
        if (request.manifold.kind() != ManifoldKind::Circle) {
            throw InvalidArgument("Cech complexes are only available on the circle, not " +
                                  request.manifold.name());
        }
        if (request.grid.front() <= 0.0) {
            throw InvalidArgument("Cech complexes need scales t > 0");
        }
    }
    const int required = request.invariant.required_dim();
    if (!request.max_dim) {
        return required;
    }
    const int max_dim = *request.max_dim;
    if (max_dim < 1 && max_dim != kFullDimension) {
        throw InvalidArgument("max_dim must be a positive integer or full");
    }
    if (required == kFullDimension && max_dim != kFullDimension) {
        throw InvalidArgument(request.invariant.name() + " needs the full complex (max_dim = full)");
    }
    if (max_dim != kFullDimension && max_dim < required) {
        throw InvalidArgument(request.invariant.name() + " needs max_dim >= " +
                              std::to_string(required) + ", got " + std::to_string(max_dim));
    }
    return max_dim;
}

namespace {

std::vector<double> run_trial(const CurveRequest& request, int max_dim, std::uint64_t trial_index)
{
    const PointSample points = sample(request.manifold, request.n, request.master_seed, trial_index);
    const BuildOptions options{max_dim, request.simplex_budget};
    std::vector<double> values;
    values.reserve(request.grid.size());
    if (request.complex_kind == ComplexKind::Cech) {
        for (double t : request.grid) {
            values.push_back(request.invariant.evaluate(cech_complex_circle(points, t, options)));
        }
        return values;
    }
    const DistanceMatrix distances(points);
    for (double t : request.grid) {
        values.push_back(request.invariant.evaluate(vr_complex(distances, t, options)));
    }
    return values;
}

} // namespace

std::vector<double> evaluate_trial(const CurveRequest& request, std::uint64_t trial_index)
{
    return run_trial(request, resolve_max_dim(request), trial_index);
}

CurveEstimate estimate_curve(const CurveRequest& request)
{
    const int max_dim = resolve_max_dim(request);
    const std::size_t points = request.grid.size();
    const unsigned workers = resolve_workers(request.workers);

    std::vector<Moments> moments(points);
    std::vector<double> block;

    for (std::size_t begin = 0; begin < request.trials; begin += kTrialsPerBlock) {
        const std::size_t end = std::min(request.trials, begin + kTrialsPerBlock);
        block.assign((end - begin) * points, 0.0);

        std::atomic<std::size_t> next{begin};
        std::atomic<bool> failed{false};
        std::mutex failure_mutex;
        std::size_t failed_trial = std::numeric_limits<std::size_t>::max();
        std::exception_ptr failure;

        auto work = [&] {
            for (;;) {
                if (failed.load(std::memory_order_relaxed)) {
                    return;
                }
                const std::size_t trial = next.fetch_add(1);
                if (trial >= end) {
                    return;
                }
                try {
                    const auto values = run_trial(request, max_dim, trial);
                    std::copy(values.begin(), values.end(),
                              block.begin() + static_cast<std::ptrdiff_t>((trial - begin) * points));
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (trial < failed_trial) {
                        failed_trial = trial;
                        failure = std::current_exception();
                    }
                    failed.store(true);
                }
            }
        };

        const unsigned threads = static_cast<unsigned>(
            std::min<std::size_t>(workers, end - begin));
        if (threads <= 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(threads);
            for (unsigned w = 0; w < threads; ++w) {
                pool.emplace_back(work);
            }
        }

        if (failure) {
            try {
                std::rethrow_exception(failure);
            } catch (const ResourceLimit& e) {
                throw ResourceLimit("trial " + std::to_string(failed_trial) +
                                    " aborted the run: " + e.what());
            }
        }

        for (std::size_t j = 0; j < end - begin; ++j) {
            for (std::size_t i = 0; i < points; ++i) {
                moments[i].add(block[j * points + i]);
            }
        }
    }

    CurveEstimate out;
    out.manifold = request.manifold;
    out.invariant = request.invariant;
    out.complex_kind = request.complex_kind;
    out.n = request.n;
    out.trials = request.trials;
    out.master_seed = request.master_seed;
    out.max_dim = max_dim;
    out.grid = request.grid;
    const auto trials = static_cast<double>(request.trials);
    for (const Moments& m : moments) {
        const double variance = std::max(0.0, m.m2 / (trials - 1.0));
        out.mean.push_back(m.mean);
        out.variance.push_back(variance);
        out.std_error.push_back(std::sqrt(variance / trials));
    }
    return out;
}

ConvergenceTable convergence_study(const ConvergenceRequest& request)
{
    if (!(request.t > 0.0)) {
        throw InvalidArgument("convergence study needs t > 0");
    }
    if (request.n_values.empty()) {
        throw InvalidArgument("convergence study needs at least one sample size");
    }
    for (std::size_t i = 1; i < request.n_values.size(); ++i) {
        if (request.n_values[i] <= request.n_values[i - 1]) {
            throw InvalidArgument("sample sizes must be strictly increasing");
        }
    }
    ConvergenceTable table{request.t, request.target, request.target_source, {}};
    for (std::size_t n : request.n_values) {
        CurveRequest curve;
        curve.manifold = request.manifold;
        curve.complex_kind = request.complex_kind;
        curve.invariant = request.invariant;
        curve.n = n;
        curve.grid = {request.t};
        curve.trials = request.trials;
        curve.master_seed = request.master_seed;
        curve.max_dim = request.max_dim;
        curve.workers = request.workers;
        curve.simplex_budget = request.simplex_budget;
        const CurveEstimate estimate = estimate_curve(curve);
        table.rows.push_back({n, estimate.mean[0], estimate.variance[0], estimate.std_error[0],
                              std::fabs(estimate.mean[0] - request.target)});
    }
    return table;
}

LipschitzDiagnostic lipschitz_diagnostic(std::span<const double> grid,
                                         std::span<const double> values)
{
    if (grid.size() != values.size()) {
        throw InvalidArgument("grid and values differ in length");
    }
    if (grid.size() < 2) {
        throw InvalidArgument("Lipschitz diagnostic needs at least two grid points");
    }
    LipschitzDiagnostic out;
    out.theoretical_bound = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double h = grid[i + 1] - grid[i];
        if (!(h > 0.0)) {
            throw InvalidArgument("grid must be strictly increasing");
        }
        const double slope = std::fabs(values[i + 1] - values[i]) / h;
        out.slopes.push_back(slope);
        if (slope > out.max_slope) {
            out.max_slope = slope;
            out.argmax = i;
        }
    }
    return out;
}

LipschitzDiagnostic lipschitz_diagnostic(const CurveEstimate& curve)
{
    LipschitzDiagnostic out = lipschitz_diagnostic(curve.grid, curve.mean);
    out.theoretical_bound = theoretical_lipschitz_bound(curve.n, curve.manifold.ball_measure_lipschitz());
    return out;
}

double theoretical_lipschitz_bound(std::size_t n, double ball_measure_lipschitz)
{
    const auto nd = static_cast<double>(n);
    const double pairs = nd * (nd - 1.0) / 2.0;
    return 2.0 * pairs * std::pow(2.0, nd) * ball_measure_lipschitz;
}

} // namespace betti

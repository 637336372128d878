#include "betti/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "betti/error.hpp"
#include "betti/seed.hpp"

namespace betti {
namespace {

constexpr double kSphereNormTolerance = 1e-9;

double wrapped_gap(double a, double b) noexcept
{
    const double delta = std::fabs(a - b);
    return std::min(delta, 1.0 - delta);
}

double unit_ball_volume(int d)
{
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

} // namespace

ManifoldModel ManifoldModel::circle()
{
    return {ManifoldKind::Circle, 1};
}

ManifoldModel ManifoldModel::flat_torus(int dim)
{
    if (dim < 1) {
        throw InvalidArgument("flat torus dimension must be positive, got " + std::to_string(dim));
    }
    return {ManifoldKind::FlatTorus, dim};
}

ManifoldModel ManifoldModel::sphere2()
{
    return {ManifoldKind::Sphere2, 2};
}

int ManifoldModel::intrinsic_dim() const noexcept
{
    return dim_;
}

int ManifoldModel::coord_dim() const noexcept
{
    return kind_ == ManifoldKind::Sphere2 ? 3 : dim_;
}

double ManifoldModel::convexity_radius() const noexcept
{
    return kind_ == ManifoldKind::Sphere2 ? std::numbers::pi / 2 : 0.25;
}

double ManifoldModel::ball_measure_lipschitz() const noexcept
{
    switch (kind_) {
    case ManifoldKind::Circle:
        return 2.0;
    case ManifoldKind::Sphere2:
        return 0.5;
    case ManifoldKind::FlatTorus:
        // d * omega_d * t^(d-1), maximal at the domain edge t = 1/2.
        return dim_ * unit_ball_volume(dim_) * std::pow(0.5, dim_ - 1);
    }
    return 0.0;
}

double ManifoldModel::diameter() const noexcept
{
    switch (kind_) {
    case ManifoldKind::Circle:
        return 0.5;
    case ManifoldKind::Sphere2:
        return std::numbers::pi;
    case ManifoldKind::FlatTorus:
        return 0.5 * std::sqrt(static_cast<double>(dim_));
    }
    return 0.0;
}

double ManifoldModel::ball_measure_domain_max() const noexcept
{
    return kind_ == ManifoldKind::FlatTorus ? 0.5 : std::numeric_limits<double>::infinity();
}

std::string ManifoldModel::name() const
{
    switch (kind_) {
    case ManifoldKind::Circle:
        return "circle";
    case ManifoldKind::Sphere2:
        return "sphere2";
    case ManifoldKind::FlatTorus:
        return "torus" + std::to_string(dim_);
    }
    return {};
}

bool ManifoldModel::in_domain(std::span<const double> p) const noexcept
{
    if (p.size() != static_cast<std::size_t>(coord_dim())) {
        return false;
    }
    if (kind_ == ManifoldKind::Sphere2) {
        const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        return std::isfinite(norm) && std::fabs(norm - 1.0) <= kSphereNormTolerance;
    }
    return std::all_of(p.begin(), p.end(), [](double x) { return x >= 0.0 && x < 1.0; });
}

double ManifoldModel::distance(std::span<const double> p, std::span<const double> q) const
{
    if (!in_domain(p) || !in_domain(q)) {
        throw InvalidArgument("point outside the fundamental domain of " + name());
    }
    return distance_unchecked(p.data(), q.data());
}

double ManifoldModel::distance_unchecked(const double* p, const double* q) const noexcept
{
    switch (kind_) {
    case ManifoldKind::Circle:
        return wrapped_gap(p[0], q[0]);
    case ManifoldKind::FlatTorus: {
        double sum = 0.0;
        for (int i = 0; i < dim_; ++i) {
            const double g = wrapped_gap(p[i], q[i]);
            sum += g * g;
        }
        return std::sqrt(sum);
    }
    case ManifoldKind::Sphere2: {
        const double dot = p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
        return std::acos(std::clamp(dot, -1.0, 1.0));
    }
    }
    return 0.0;
}

double ManifoldModel::ball_measure(double t) const
{
    if (!(t >= 0.0)) {
        throw InvalidArgument("ball radius must be nonnegative");
    }
    switch (kind_) {
    case ManifoldKind::Circle:
        return std::min(2.0 * t, 1.0);
    case ManifoldKind::Sphere2:
        return 0.5 * (1.0 - std::cos(std::min(t, std::numbers::pi)));
    case ManifoldKind::FlatTorus:
        if (t > 0.5) {
            throw Unsupported(name() + " ball measure has no closed form for t > 1/2 (got t = " +
                              std::to_string(t) + ")");
        }
        return unit_ball_volume(dim_) * std::pow(t, dim_);
    }
    return 0.0;
}

PointSample::PointSample(ManifoldModel manifold, std::vector<double> coords,
                         SeedProvenance provenance)
    : manifold_(manifold), coords_(std::move(coords)), size_(0), provenance_(provenance)
{
    const auto stride = static_cast<std::size_t>(manifold_.coord_dim());
    if (coords_.size() % stride != 0) {
        throw InvalidArgument("coordinate count is not a multiple of " + std::to_string(stride));
    }
    size_ = coords_.size() / stride;
    for (std::size_t i = 0; i < size_; ++i) {
        if (!manifold_.in_domain(point(i))) {
            throw InvalidArgument("point " + std::to_string(i) + " lies outside the domain of " +
                                  manifold_.name());
        }
    }
}

PointSample PointSample::circle(std::vector<double> positions)
{
    return {ManifoldModel::circle(), std::move(positions)};
}

std::span<const double> PointSample::point(std::size_t i) const noexcept
{
    const auto stride = static_cast<std::size_t>(manifold_.coord_dim());
    return std::span<const double>(coords_).subspan(i * stride, stride);
}

double PointSample::distance(std::size_t i, std::size_t j) const noexcept
{
    const auto stride = static_cast<std::size_t>(manifold_.coord_dim());
    return manifold_.distance_unchecked(coords_.data() + i * stride, coords_.data() + j * stride);
}

PointSample sample(const ManifoldModel& manifold, std::size_t n, std::uint64_t master_seed,
                   std::uint64_t trial_index)
{
    if (n == 0) {
        throw InvalidArgument("sample size must be at least 1");
    }
    TrialRng rng(master_seed, trial_index);
    std::vector<double> coords;
    coords.reserve(n * static_cast<std::size_t>(manifold.coord_dim()));

    if (manifold.kind() == ManifoldKind::Sphere2) {
        for (std::size_t i = 0; i < n; ++i) {
            double x, y, z, norm;
            do {
                x = rng.standard_normal();
                y = rng.standard_normal();
                z = rng.standard_normal();
                norm = std::sqrt(x * x + y * y + z * z);
            } while (norm == 0.0);
            coords.push_back(x / norm);
            coords.push_back(y / norm);
            coords.push_back(z / norm);
        }
    } else {
        const std::size_t count = n * static_cast<std::size_t>(manifold.coord_dim());
        for (std::size_t i = 0; i < count; ++i) {
            coords.push_back(rng.uniform01());
        }
    }
    return PointSample(manifold, std::move(coords), {master_seed, trial_index});
}

namespace {

CoveringRadius circle_covering_radius(const PointSample& s)
{
    std::vector<double> xs(s.coords().begin(), s.coords().end());
    std::sort(xs.begin(), xs.end());
    double largest = 1.0 - xs.back() + xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i) {
        largest = std::max(largest, xs[i] - xs[i - 1]);
    }
    return {0.5 * largest, 0.0, true};
}

template <class ProbeFn>
double max_min_distance(const PointSample& s, std::size_t probe_count, ProbeFn&& probe)
{
    const ManifoldModel& m = s.manifold();
    std::vector<double> q(static_cast<std::size_t>(m.coord_dim()));
    double worst = 0.0;
    for (std::size_t k = 0; k < probe_count; ++k) {
        probe(k, q);
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < s.size(); ++i) {
            nearest = std::min(nearest, m.distance_unchecked(q.data(), s.point(i).data()));
        }
        worst = std::max(worst, nearest);
    }
    return worst;
}

} // namespace

CoveringRadius covering_radius(const PointSample& s, std::optional<int> grid_resolution)
{
    if (s.empty()) {
        throw InvalidArgument("covering radius of an empty sample");
    }
    const ManifoldModel& m = s.manifold();
    if (m.kind() == ManifoldKind::Circle) {
        return circle_covering_radius(s);
    }
    if (!grid_resolution) {
        throw InvalidArgument("covering radius on " + m.name() + " requires a probe grid resolution");
    }
    const int res = *grid_resolution;
    if (res < 1) {
        throw InvalidArgument("probe grid resolution must be positive");
    }
    const auto r = static_cast<std::size_t>(res);

    if (m.kind() == ManifoldKind::FlatTorus) {
        const int d = m.intrinsic_dim();
        std::size_t count = 1;
        for (int i = 0; i < d; ++i) {
            count *= r;
        }
        const double radius = max_min_distance(s, count, [&](std::size_t k, std::vector<double>& q) {
            for (int i = 0; i < d; ++i) {
                q[static_cast<std::size_t>(i)] = static_cast<double>(k % r) / res;
                k /= r;
            }
        });
        return {radius, 0.5 * std::sqrt(static_cast<double>(d)) / res, false};
    }

    // Sphere: latitudes pi (i + 1/2) / R, longitudes 2 pi j / R. Any point is
    // within pi/(2R) of a latitude circle and then within pi/R along it.
    const double radius = max_min_distance(s, r * r, [&](std::size_t k, std::vector<double>& q) {
        const double theta = std::numbers::pi * (static_cast<double>(k / r) + 0.5) / res;
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k % r) / res;
        q[0] = std::sin(theta) * std::cos(phi);
        q[1] = std::sin(theta) * std::sin(phi);
        q[2] = std::cos(theta);
    });
    return {radius, 1.5 * std::numbers::pi / res, false};
}

double covering_tail_bound(const ManifoldModel& manifold, double epsilon, std::size_t n)
{
    if (manifold.kind() != ManifoldKind::Circle) {
        throw Unsupported("covering tail bound is only implemented for the circle");
    }
    if (!(epsilon > 0.0)) {
        throw InvalidArgument("epsilon must be positive");
    }
    if (n == 0) {
        throw InvalidArgument("sample size must be at least 1");
    }
    const double arcs = std::ceil(1.0 / epsilon);
    const double smallest_arc = std::min(epsilon, 1.0);
    const double bound = arcs * std::pow(1.0 - smallest_arc, static_cast<double>(n));
    return std::min(bound, 1.0);
}

DegeneracyReport detect_degeneracies(const PointSample& s)
{
    DegeneracyReport report;
    struct Entry {
        double d;
        IndexPair pair;
    };
    std::vector<Entry> entries;
    entries.reserve(s.size() * (s.size() > 0 ? s.size() - 1 : 0) / 2);
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            const double d = s.distance(i, j);
            if (d == 0.0) {
                report.collisions.emplace_back(i, j);
            }
            entries.push_back({d, {i, j}});
        }
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.d < b.d; });
    for (std::size_t lo = 0; lo < entries.size();) {
        std::size_t hi = lo + 1;
        while (hi < entries.size() && entries[hi].d == entries[lo].d) {
            ++hi;
        }
        for (std::size_t a = lo; a < hi; ++a) {
            for (std::size_t b = a + 1; b < hi; ++b) {
                report.distance_ties.emplace_back(entries[a].pair, entries[b].pair);
            }
        }
        lo = hi;
    }
    return report;
}

} // namespace betti

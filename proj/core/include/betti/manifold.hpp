#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace betti {

enum class ManifoldKind { Circle, FlatTorus, Sphere2 };

/// One of the model manifolds with its uniform probability measure.
///
/// Coordinates live in a fixed fundamental domain:
///   Circle       R/Z, one coordinate in [0, 1)
///   FlatTorus(d) R^d/Z^d, d coordinates in [0, 1)
///   Sphere2      unit sphere in R^3, three coordinates with norm 1
class ManifoldModel {
public:
    static ManifoldModel circle();
    static ManifoldModel flat_torus(int dim);
    static ManifoldModel sphere2();

    ManifoldKind kind() const noexcept { return kind_; }
    int intrinsic_dim() const noexcept;
    /// Number of doubles per point.
    int coord_dim() const noexcept;
    double convexity_radius() const noexcept;
    /// K with |mu(B_b(p)) - mu(B_a(p))| <= K |b - a| on the ball-measure domain.
    double ball_measure_lipschitz() const noexcept;
    double diameter() const noexcept;
    /// Largest t accepted by ball_measure (infinity when unrestricted).
    double ball_measure_domain_max() const noexcept;
    /// "circle", "torus<d>" or "sphere2".
    std::string name() const;

    bool in_domain(std::span<const double> p) const noexcept;

    /// Geodesic distance. Throws InvalidArgument for points outside the domain.
    double distance(std::span<const double> p, std::span<const double> q) const;
    /// Geodesic distance without domain validation.
    double distance_unchecked(const double* p, const double* q) const noexcept;

    /// Measure of a closed geodesic ball of radius t.
    double ball_measure(double t) const;

    friend bool operator==(const ManifoldModel&, const ManifoldModel&) = default;

private:
    ManifoldModel(ManifoldKind kind, int dim) : kind_(kind), dim_(dim) {}

    ManifoldKind kind_;
    int dim_;
};

struct SeedProvenance {
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
};

/// An ordered n-tuple of points on a manifold. Coordinates are validated on
/// construction and the sample is immutable afterwards.
class PointSample {
public:
    PointSample(ManifoldModel manifold, std::vector<double> coords, SeedProvenance provenance = {});

    /// Convenience for circle samples.
    static PointSample circle(std::vector<double> positions);

    const ManifoldModel& manifold() const noexcept { return manifold_; }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    std::span<const double> point(std::size_t i) const noexcept;
    std::span<const double> coords() const noexcept { return coords_; }
    const SeedProvenance& provenance() const noexcept { return provenance_; }

    double distance(std::size_t i, std::size_t j) const noexcept;

private:
    ManifoldModel manifold_;
    std::vector<double> coords_;
    std::size_t size_;
    SeedProvenance provenance_;
};

/// n i.i.d. uniform points, fully determined by (master_seed, trial_index).
PointSample sample(const ManifoldModel& manifold, std::size_t n, std::uint64_t master_seed,
                   std::uint64_t trial_index);

struct CoveringRadius {
    double radius = 0.0;
    /// Upper bound on (true radius - radius); zero when exact.
    double mesh_error = 0.0;
    bool exact = false;
};

/// Covering radius of the sample. Exact on the circle; elsewhere a lower
/// bound from a probe grid of grid_resolution^intrinsic_dim points.
CoveringRadius covering_radius(const PointSample& sample,
                               std::optional<int> grid_resolution = std::nullopt);

/// Union bound k (1 - mu(B_J))^n on P(covering radius > epsilon), using
/// k = ceil(1/epsilon) arcs of width epsilon. Circle only; clamped to 1.
double covering_tail_bound(const ManifoldModel& manifold, double epsilon, std::size_t n);

using IndexPair = std::pair<std::size_t, std::size_t>;

struct DegeneracyReport {
    std::vector<IndexPair> collisions;
    std::vector<std::pair<IndexPair, IndexPair>> distance_ties;

    bool empty() const noexcept { return collisions.empty() && distance_ties.empty(); }
};

/// Exact floating-point coincidences among points and pairwise distances.
DegeneracyReport detect_degeneracies(const PointSample& sample);

} // namespace betti

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "betti/manifold.hpp"

namespace betti {

using Vertex = std::uint32_t;

inline constexpr int kFullDimension = -1;
inline constexpr std::size_t kDefaultSimplexBudget = 10'000'000;

/// All simplices of one dimension, stored flat and in lexicographic order.
class SimplexList {
public:
    explicit SimplexList(int dim) : dim_(dim) {}

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return verts_.size() / width(); }
    bool empty() const noexcept { return verts_.empty(); }
    std::size_t width() const noexcept { return static_cast<std::size_t>(dim_) + 1; }

    std::span<const Vertex> operator[](std::size_t i) const noexcept
    {
        return std::span<const Vertex>(verts_).subspan(i * width(), width());
    }

    /// Index of `simplex` (sorted vertices) or nullopt.
    std::optional<std::size_t> find(std::span<const Vertex> simplex) const noexcept;

    /// Appends; the caller keeps lexicographic order.
    void push_back(std::span<const Vertex> simplex);

private:
    int dim_;
    std::vector<Vertex> verts_;
};

/// A finite simplicial complex on vertices {0, ..., num_vertices - 1}.
///
/// Every vertex is a 0-simplex. `max_dim_built` records truncation: -1 means
/// the complex is complete in all dimensions, k >= 0 means simplices of
/// dimension > k were never generated.
class SimplicialComplex {
public:
    SimplicialComplex(std::size_t num_vertices, int max_dim_built);

    /// Builds a complex from an arbitrary simplex list. Vertices are sorted,
    /// duplicates removed; throws InvalidArgument if the set is not closed
    /// under taking faces or references a vertex >= num_vertices.
    static SimplicialComplex from_simplices(std::size_t num_vertices,
                                            std::vector<std::vector<Vertex>> simplices,
                                            int max_dim_built = kFullDimension);

    std::size_t num_vertices() const noexcept { return num_vertices_; }
    int max_dim_built() const noexcept { return max_dim_built_; }
    bool is_full() const noexcept { return max_dim_built_ == kFullDimension; }
    /// Whether every simplex of dimension <= dim has been generated.
    bool is_built_to(int dim) const noexcept { return is_full() || max_dim_built_ >= dim; }

    /// Highest dimension with at least one simplex, -1 for the empty complex.
    int top_dim() const noexcept;
    const SimplexList& simplices(int dim) const noexcept;
    std::size_t count(int dim) const noexcept { return simplices(dim).size(); }
    std::size_t total_size() const noexcept;

    bool contains(std::span<const Vertex> simplex) const noexcept;
    /// Simplex-set inclusion (dimension by dimension).
    bool is_subcomplex_of(const SimplicialComplex& other) const noexcept;
    bool is_downward_closed() const noexcept;

    /// One simplex per line, vertex indices separated by spaces, ordered by
    /// dimension then lexicographically.
    void write_text(std::ostream& out) const;

    /// Used by builders: append a simplex of dimension simplex.size() - 1.
    void append(std::span<const Vertex> simplex);

private:
    std::size_t num_vertices_;
    int max_dim_built_;
    std::vector<SimplexList> by_dim_;
};

struct BuildOptions {
    /// Highest simplex dimension generated, or kFullDimension.
    int max_dim = kFullDimension;
    std::size_t simplex_budget = kDefaultSimplexBudget;
};

/// Condensed symmetric matrix of pairwise geodesic distances.
class DistanceMatrix {
public:
    explicit DistanceMatrix(const PointSample& sample);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept
    {
        return i == j ? 0.0 : d_[i < j ? index(i, j) : index(j, i)];
    }

private:
    std::size_t index(std::size_t i, std::size_t j) const noexcept
    {
        return i * n_ - i * (i + 1) / 2 + (j - i - 1);
    }

    std::size_t n_;
    std::vector<double> d_;
};

/// The Vietoris-Rips edge rule: d <= t.
bool vr_edge(double distance, double t) noexcept;

/// Clique complex of the graph {i, j} with d(X_i, X_j) <= t.
SimplicialComplex vr_complex(const PointSample& sample, double t, BuildOptions options = {});
SimplicialComplex vr_complex(const DistanceMatrix& distances, double t, BuildOptions options = {});

/// Nerve of open arcs of radius t around circle points.
SimplicialComplex cech_complex_circle(const PointSample& sample, double t,
                                      BuildOptions options = {});

/// Whether the open arcs of radius t around `positions` share a point.
bool circle_arcs_intersect(std::span<const double> positions, double t);

using EuclideanPoint = std::vector<double>;

struct EnclosingBall {
    std::array<double, 3> center{};
    double radius = 0.0;
};

/// Minimum enclosing ball of points in R^d, d <= 3 (Welzl recursion).
EnclosingBall minimum_enclosing_ball(std::span<const EuclideanPoint> points);

/// Cech complex of open Euclidean balls of radius t: a set is a simplex iff
/// its minimum enclosing ball has radius < t. Requires max_dim >= 0 (finite).
SimplicialComplex cech_complex_euclidean(std::span<const EuclideanPoint> points, double t,
                                         int max_dim,
                                         std::size_t simplex_budget = kDefaultSimplexBudget);

/// Maximal cliques of the graph {i, j} with d(X_i, X_j) <= t, each sorted
/// ascending (Bron-Kerbosch with pivoting).
std::vector<std::vector<Vertex>> maximal_cliques(const DistanceMatrix& distances, double t);

/// Sorted edge-creation scales l_0 = 0 <= l_1 <= ... <= l_{C(n,2)}.
struct FiltrationScales {
    std::vector<double> scales;
    /// edges[k - 1] is the edge created at scales[k]; ties broken by
    /// lexicographic pair order.
    std::vector<IndexPair> edges;

    /// e(X, t): number of k >= 1 with scales[k] <= t.
    std::size_t edge_count_at(double t) const noexcept;
};

FiltrationScales edge_scales(const PointSample& sample);

/// Number of pairs with d(X_i, X_j) <= t.
std::size_t edge_count(const PointSample& sample, double t);

} // namespace betti

#include "betti/complex.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "betti/error.hpp"

namespace betti {

// ---------------------------------------------------------------------------
// SimplexList / SimplicialComplex

std::optional<std::size_t> SimplexList::find(std::span<const Vertex> simplex) const noexcept
{
    if (simplex.size() != width()) {
        return std::nullopt;
    }
    std::size_t lo = 0;
    std::size_t hi = size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const auto probe = (*this)[mid];
        if (std::lexicographical_compare(probe.begin(), probe.end(), simplex.begin(),
                                         simplex.end())) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo < size() && std::ranges::equal((*this)[lo], simplex)) {
        return lo;
    }
    return std::nullopt;
}

void SimplexList::push_back(std::span<const Vertex> simplex)
{
    verts_.insert(verts_.end(), simplex.begin(), simplex.end());
}

SimplicialComplex::SimplicialComplex(std::size_t num_vertices, int max_dim_built)
    : num_vertices_(num_vertices), max_dim_built_(max_dim_built)
{
    if (max_dim_built < kFullDimension) {
        throw InvalidArgument("max_dim_built must be -1 (full) or nonnegative");
    }
    by_dim_.emplace_back(0);
    for (std::size_t v = 0; v < num_vertices; ++v) {
        const Vertex vertex = static_cast<Vertex>(v);
        by_dim_[0].push_back(std::span<const Vertex>(&vertex, 1));
    }
}

SimplicialComplex SimplicialComplex::from_simplices(std::size_t num_vertices,
                                                    std::vector<std::vector<Vertex>> simplices,
                                                    int max_dim_built)
{
    for (auto& s : simplices) {
        if (s.empty()) {
            throw InvalidArgument("empty simplex");
        }
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
            throw InvalidArgument("simplex with a repeated vertex");
        }
        if (s.back() >= num_vertices) {
            throw InvalidArgument("simplex references vertex " + std::to_string(s.back()) +
                                  " but the complex has " + std::to_string(num_vertices));
        }
        if (max_dim_built != kFullDimension && static_cast<int>(s.size()) - 1 > max_dim_built) {
            throw InvalidArgument("simplex above the declared build dimension");
        }
    }
    std::sort(simplices.begin(), simplices.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    simplices.erase(std::unique(simplices.begin(), simplices.end()), simplices.end());

    SimplicialComplex out(num_vertices, max_dim_built);
    for (const auto& s : simplices) {
        if (s.size() > 1) {
            out.append(s);
        }
    }
    if (!out.is_downward_closed()) {
        throw InvalidArgument("simplex set is not closed under taking faces");
    }
    return out;
}

int SimplicialComplex::top_dim() const noexcept
{
    for (int k = static_cast<int>(by_dim_.size()) - 1; k >= 0; --k) {
        if (!by_dim_[static_cast<std::size_t>(k)].empty()) {
            return k;
        }
    }
    return -1;
}

const SimplexList& SimplicialComplex::simplices(int dim) const noexcept
{
    static const std::vector<SimplexList> empties = [] {
        std::vector<SimplexList> lists;
        for (int k = 0; k < 64; ++k) {
            lists.emplace_back(k);
        }
        return lists;
    }();
    if (dim >= 0 && static_cast<std::size_t>(dim) < by_dim_.size()) {
        return by_dim_[static_cast<std::size_t>(dim)];
    }
    return empties[static_cast<std::size_t>(std::clamp(dim, 0, 63))];
}

std::size_t SimplicialComplex::total_size() const noexcept
{
    std::size_t total = 0;
    for (const auto& list : by_dim_) {
        total += list.size();
    }
    return total;
}

bool SimplicialComplex::contains(std::span<const Vertex> simplex) const noexcept
{
    if (simplex.empty()) {
        return false;
    }
    return simplices(static_cast<int>(simplex.size()) - 1).find(simplex).has_value();
}

bool SimplicialComplex::is_subcomplex_of(const SimplicialComplex& other) const noexcept
{
    for (const auto& list : by_dim_) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (!other.contains(list[i])) {
                return false;
            }
        }
    }
    return true;
}

bool SimplicialComplex::is_downward_closed() const noexcept
{
    const SimplexList& vertices = by_dim_[0];
    if (vertices.size() != num_vertices_) {
        return false;
    }
    for (std::size_t v = 0; v < num_vertices_; ++v) {
        if (vertices[v][0] != v) {
            return false;
        }
    }
    std::vector<Vertex> facet;
    for (std::size_t k = 1; k < by_dim_.size(); ++k) {
        const SimplexList& list = by_dim_[k];
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto s = list[i];
            if (!std::ranges::is_sorted(s) || std::adjacent_find(s.begin(), s.end()) != s.end() ||
                s.back() >= num_vertices_) {
                return false;
            }
            if (i > 0 && !std::lexicographical_compare(list[i - 1].begin(), list[i - 1].end(),
                                                       s.begin(), s.end())) {
                return false;
            }
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                facet.clear();
                for (std::size_t j = 0; j < s.size(); ++j) {
                    if (j != drop) {
                        facet.push_back(s[j]);
                    }
                }
                if (!by_dim_[k - 1].find(facet)) {
                    return false;
                }
            }
        }
    }
    return true;
}

void SimplicialComplex::write_text(std::ostream& out) const
{
    for (const auto& list : by_dim_) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto s = list[i];
            for (std::size_t j = 0; j < s.size(); ++j) {
                out << (j ? " " : "") << s[j];
            }
            out << '\n';
        }
    }
}

void SimplicialComplex::append(std::span<const Vertex> simplex)
{
    const std::size_t dim = simplex.size() - 1;
    while (by_dim_.size() <= dim) {
        by_dim_.emplace_back(static_cast<int>(by_dim_.size()));
    }
    by_dim_[dim].push_back(simplex);
}

// ---------------------------------------------------------------------------
// Distances and graphs

DistanceMatrix::DistanceMatrix(const PointSample& sample) : n_(sample.size())
{
    d_.reserve(n_ * (n_ > 0 ? n_ - 1 : 0) / 2);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            d_.push_back(sample.distance(i, j));
        }
    }
}

bool vr_edge(double distance, double t) noexcept
{
#ifdef BETTI_MUTATION_STRICT_VR
    return distance < t;
#else
    return distance <= t;
#endif
}

namespace {

/// Adjacency as bit rows; row v holds only neighbours u > v ("upper").
class UpperGraph {
public:
    template <class EdgePredicate>
    UpperGraph(std::size_t n, EdgePredicate&& edge)
        : n_(n), words_((n + 63) / 64), bits_(n * words_, 0)
    {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (edge(i, j)) {
                    bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
                }
            }
        }
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t words() const noexcept { return words_; }
    const std::uint64_t* upper(std::size_t v) const noexcept { return bits_.data() + v * words_; }
    bool adjacent(std::size_t i, std::size_t j) const noexcept
    {
        if (i > j) {
            std::swap(i, j);
        }
        return i != j && ((upper(i)[j / 64] >> (j % 64)) & 1U);
    }

private:
    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

void check_max_dim(int max_dim)
{
    if (max_dim < 1 && max_dim != kFullDimension) {
        throw InvalidArgument("max_dim must be a positive integer or full, got " +
                              std::to_string(max_dim));
    }
}

[[noreturn]] void budget_exceeded(std::size_t budget)
{
    throw ResourceLimit("simplex budget of " + std::to_string(budget) + " simplices exceeded");
}

/// Enumerates every clique of `graph` (up to max_dim) that passes `accept`,
/// depth first in lexicographic order. `accept` sees candidate simplices of
/// two or more vertices and must be closed under taking faces.
template <class Accept>
SimplicialComplex expand_cliques(const UpperGraph& graph, int max_dim, std::size_t budget,
                                 Accept&& accept)
{
    const std::size_t n = graph.size();
    if (n > budget) {
        budget_exceeded(budget);
    }
    SimplicialComplex out(n, max_dim);
    if (max_dim == 0) {
        return out;
    }
    const std::size_t words = graph.words();
    std::size_t emitted = n;
    std::vector<Vertex> simplex;
    std::vector<std::vector<std::uint64_t>> candidates;

    std::function<void(std::size_t)> grow = [&](std::size_t depth) {
        const std::vector<std::uint64_t>& pool = candidates[depth - 1];
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t word = pool[w];
            while (word != 0) {
                const auto bit = static_cast<std::size_t>(std::countr_zero(word));
                word &= word - 1;
                const auto v = static_cast<Vertex>(w * 64 + bit);
                simplex.push_back(v);
                if (accept(std::span<const Vertex>(simplex))) {
                    if (++emitted > budget) {
                        budget_exceeded(budget);
                    }
                    out.append(simplex);
                    if (max_dim == kFullDimension || static_cast<int>(depth) < max_dim) {
                        if (candidates.size() <= depth) {
                            candidates.emplace_back(words);
                        }
                        std::vector<std::uint64_t>& next = candidates[depth];
                        const std::uint64_t* row = graph.upper(v);
                        bool any = false;
                        for (std::size_t k = 0; k < words; ++k) {
                            next[k] = candidates[depth - 1][k] & row[k];
                            any = any || next[k] != 0;
                        }
                        if (any) {
                            grow(depth + 1);
                        }
                    }
                }
                simplex.pop_back();
            }
        }
    };

    // Depth never exceeds n; reserving keeps `pool` references stable.
    candidates.reserve(n + 1);
    candidates.emplace_back(words);
    for (std::size_t v = 0; v < n; ++v) {
        simplex.assign(1, static_cast<Vertex>(v));
        std::copy_n(graph.upper(v), words, candidates[0].begin());
        grow(1);
    }
    return out;
}

/// Number of simplices of dimension <= max_dim spanned by a clique of size s,
/// saturating at `cap`.
std::size_t clique_face_count(std::size_t s, int max_dim, std::size_t cap)
{
    const std::size_t top = max_dim == kFullDimension ? s : std::min<std::size_t>(s, max_dim + 1);
    long double total = 0.0L;
    long double binom = 1.0L;
    for (std::size_t k = 1; k <= top; ++k) {
        binom = binom * static_cast<long double>(s - k + 1) / static_cast<long double>(k);
        total += binom;
        if (total > static_cast<long double>(cap)) {
            return cap + 1;
        }
    }
    return static_cast<std::size_t>(total);
}

void bron_kerbosch(const UpperGraph& g, std::vector<Vertex>& clique, std::vector<Vertex> candidates,
                   std::vector<Vertex> excluded, std::vector<std::vector<Vertex>>& out)
{
    if (candidates.empty()) {
        if (excluded.empty()) {
            std::vector<Vertex> sorted = clique;
            std::sort(sorted.begin(), sorted.end());
            out.push_back(std::move(sorted));
        }
        return;
    }
    // Pivot: the vertex of P u X with most neighbours in P.
    Vertex pivot = candidates.front();
    std::size_t best = 0;
    for (const auto* set : {&candidates, &excluded}) {
        for (Vertex u : *set) {
            const auto hits = static_cast<std::size_t>(std::ranges::count_if(
                candidates, [&](Vertex w) { return g.adjacent(u, w); }));
            if (hits >= best) {
                best = hits;
                pivot = u;
            }
        }
    }
    const std::vector<Vertex> branch = [&] {
        std::vector<Vertex> b;
        for (Vertex v : candidates) {
            if (!g.adjacent(pivot, v)) {
                b.push_back(v);
            }
        }
        return b;
    }();
    for (Vertex v : branch) {
        std::vector<Vertex> next_p;
        std::vector<Vertex> next_x;
        for (Vertex w : candidates) {
            if (g.adjacent(v, w)) {
                next_p.push_back(w);
            }
        }
        for (Vertex w : excluded) {
            if (g.adjacent(v, w)) {
                next_x.push_back(w);
            }
        }
        clique.push_back(v);
        bron_kerbosch(g, clique, std::move(next_p), std::move(next_x), out);
        clique.pop_back();
        std::erase(candidates, v);
        excluded.push_back(v);
    }
}

std::vector<std::vector<Vertex>> maximal_cliques(const UpperGraph& graph)
{
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> clique;
    std::vector<Vertex> all(graph.size());
    for (std::size_t v = 0; v < graph.size(); ++v) {
        all[v] = static_cast<Vertex>(v);
    }
    bron_kerbosch(graph, clique, std::move(all), {}, out);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

SimplicialComplex vr_complex(const PointSample& sample, double t, BuildOptions options)
{
    return vr_complex(DistanceMatrix(sample), t, options);
}

SimplicialComplex vr_complex(const DistanceMatrix& distances, double t, BuildOptions options)
{
    if (!(t >= 0.0)) {
        throw InvalidArgument("scale t must be nonnegative");
    }
    check_max_dim(options.max_dim);
    const UpperGraph graph(distances.size(),
                           [&](std::size_t i, std::size_t j) { return vr_edge(distances(i, j), t); });
    if (options.max_dim == kFullDimension) {
        // A maximal clique of size s alone contributes 2^s - 1 simplices; fail
        // before enumerating anything if one of them is over budget.
        for (const auto& clique : maximal_cliques(graph)) {
            if (clique_face_count(clique.size(), kFullDimension, options.simplex_budget) >
                options.simplex_budget) {
                budget_exceeded(options.simplex_budget);
            }
        }
    }
    return expand_cliques(graph, options.max_dim, options.simplex_budget,
                          [](std::span<const Vertex>) { return true; });
}

std::vector<std::vector<Vertex>> maximal_cliques(const DistanceMatrix& distances, double t)
{
    const UpperGraph graph(distances.size(),
                           [&](std::size_t i, std::size_t j) { return vr_edge(distances(i, j), t); });
    return maximal_cliques(graph);
}

// ---------------------------------------------------------------------------
// Cech on the circle

bool circle_arcs_intersect(std::span<const double> positions, double t)
{
    if (positions.empty()) {
        return false;
    }
    std::vector<double> xs(positions.begin(), positions.end());
    std::sort(xs.begin(), xs.end());
    // Points fit in an arc of length 1 - (largest circular gap). Unrolling
    // across that gap, the open arcs share a point iff that span is < 2t.
    double span = xs.back() - xs.front();
    double largest_gap = 1.0 - span;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double gap = xs[i] - xs[i - 1];
        if (gap > largest_gap) {
            largest_gap = gap;
            span = xs[i - 1] + (1.0 - xs[i]);
        }
    }
    return span < 2.0 * t;
}

SimplicialComplex cech_complex_circle(const PointSample& sample, double t, BuildOptions options)
{
    if (sample.manifold().kind() != ManifoldKind::Circle) {
        throw Unsupported("Cech complex is only implemented on the circle, not " +
                          sample.manifold().name());
    }
    if (!(t > 0.0)) {
        throw InvalidArgument("Cech scale t must be positive");
    }
    check_max_dim(options.max_dim);
    const auto xs = sample.coords();
    const UpperGraph graph(sample.size(), [&](std::size_t i, std::size_t j) {
        const double pair[2] = {xs[i], xs[j]};
        return circle_arcs_intersect(pair, t);
    });
    std::vector<double> positions;
    return expand_cliques(graph, options.max_dim, options.simplex_budget,
                          [&](std::span<const Vertex> simplex) {
                              if (simplex.size() <= 2) {
                                  return true;
                              }
                              positions.clear();
                              for (Vertex v : simplex) {
                                  positions.push_back(xs[v]);
                              }
                              return circle_arcs_intersect(positions, t);
                          });
}

// ---------------------------------------------------------------------------
// Euclidean minimum enclosing ball and Cech

namespace {

using Vec3 = std::array<double, 3>;

double dist2(const Vec3& a, const Vec3& b)
{
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return s;
}

EnclosingBall diameter_ball(const Vec3& a, const Vec3& b)
{
    EnclosingBall ball;
    for (int i = 0; i < 3; ++i) {
        ball.center[i] = 0.5 * (a[i] + b[i]);
    }
    ball.radius = 0.5 * std::sqrt(dist2(a, b));
    return ball;
}

/// Smallest ball with all of `support` on its boundary, centred in their
/// affine hull. Falls back to the widest pair if the support is degenerate.
EnclosingBall circumball(std::span<const Vec3> support)
{
    if (support.empty()) {
        return {};
    }
    if (support.size() == 1) {
        return {support[0], 0.0};
    }
    const std::size_t k = support.size() - 1;
    const Vec3& origin = support[0];
    std::array<Vec3, 3> edge{};
    for (std::size_t i = 0; i < k; ++i) {
        for (int c = 0; c < 3; ++c) {
            edge[i][c] = support[i + 1][c] - origin[c];
        }
    }
    // Solve G lambda = b with G_ij = 2 e_i . e_j, b_i = |e_i|^2.
    double gram[3][4] = {};
    double scale = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double dot = 0.0;
            for (int c = 0; c < 3; ++c) {
                dot += edge[i][c] * edge[j][c];
            }
            gram[i][j] = 2.0 * dot;
        }
        gram[i][3] = 0.5 * gram[i][i];
        scale = std::max(scale, gram[i][i]);
    }
    bool singular = false;
    for (std::size_t col = 0; col < k && !singular; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r) {
            if (std::fabs(gram[r][col]) > std::fabs(gram[pivot][col])) {
                pivot = r;
            }
        }
        if (std::fabs(gram[pivot][col]) <= 1e-14 * scale) {
            singular = true;
            break;
        }
        std::swap(gram[col], gram[pivot]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r != col) {
                const double f = gram[r][col] / gram[col][col];
                for (std::size_t c = col; c < 4; ++c) {
                    gram[r][c] -= f * gram[col][c];
                }
            }
        }
    }
    if (singular) {
        EnclosingBall widest = diameter_ball(support[0], support[1]);
        for (std::size_t i = 0; i < support.size(); ++i) {
            for (std::size_t j = i + 1; j < support.size(); ++j) {
                const EnclosingBall b = diameter_ball(support[i], support[j]);
                if (b.radius > widest.radius) {
                    widest = b;
                }
            }
        }
        return widest;
    }
    EnclosingBall ball{origin, 0.0};
    for (std::size_t i = 0; i < k; ++i) {
        const double lambda = gram[i][3] / gram[i][i];
        for (int c = 0; c < 3; ++c) {
            ball.center[c] += lambda * edge[i][c];
        }
    }
    for (const Vec3& p : support) {
        ball.radius = std::max(ball.radius, std::sqrt(dist2(ball.center, p)));
    }
    return ball;
}

bool inside(const EnclosingBall& ball, const Vec3& p)
{
    return std::sqrt(dist2(ball.center, p)) <= ball.radius * (1.0 + 1e-12) + 1e-15;
}

EnclosingBall welzl(std::span<const Vec3> points, std::size_t count, std::vector<Vec3>& support,
                    std::size_t max_support)
{
    if (count == 0 || support.size() == max_support) {
        return circumball(support);
    }
    const Vec3& p = points[count - 1];
    EnclosingBall ball = welzl(points, count - 1, support, max_support);
    if (inside(ball, p)) {
        return ball;
    }
    support.push_back(p);
    ball = welzl(points, count - 1, support, max_support);
    support.pop_back();
    return ball;
}

std::size_t euclidean_dim(std::span<const EuclideanPoint> points)
{
    if (points.empty()) {
        return 0;
    }
    const std::size_t d = points[0].size();
    for (const auto& p : points) {
        if (p.size() != d) {
            throw InvalidArgument("points have inconsistent dimensions");
        }
    }
    if (d > 3) {
        throw Unsupported("Euclidean Cech complex supports d <= 3, got d = " + std::to_string(d));
    }
    if (d == 0) {
        throw InvalidArgument("points must have at least one coordinate");
    }
    return d;
}

Vec3 pad(const EuclideanPoint& p)
{
    Vec3 v{};
    std::copy(p.begin(), p.end(), v.begin());
    return v;
}

} // namespace

EnclosingBall minimum_enclosing_ball(std::span<const EuclideanPoint> points)
{
    const std::size_t d = euclidean_dim(points);
    std::vector<Vec3> padded;
    padded.reserve(points.size());
    for (const auto& p : points) {
        padded.push_back(pad(p));
    }
    std::vector<Vec3> support;
    return welzl(padded, padded.size(), support, d + 1);
}

SimplicialComplex cech_complex_euclidean(std::span<const EuclideanPoint> points, double t,
                                         int max_dim, std::size_t simplex_budget)
{
    const std::size_t d = euclidean_dim(points);
    if (!(t > 0.0)) {
        throw InvalidArgument("Cech scale t must be positive");
    }
    if (max_dim < 1) {
        throw InvalidArgument("Euclidean Cech complex needs a finite max_dim >= 1");
    }
    std::vector<Vec3> padded;
    for (const auto& p : points) {
        padded.push_back(pad(p));
    }
    const UpperGraph graph(points.size(), [&](std::size_t i, std::size_t j) {
        return 0.5 * std::sqrt(dist2(padded[i], padded[j])) < t;
    });
    std::vector<Vec3> subset;
    std::vector<Vec3> support;
    return expand_cliques(graph, max_dim, simplex_budget, [&](std::span<const Vertex> simplex) {
        if (simplex.size() <= 2) {
            return true;
        }
        subset.clear();
        for (Vertex v : simplex) {
            subset.push_back(padded[v]);
        }
        support.clear();
        return welzl(subset, subset.size(), support, d + 1).radius < t;
    });
}

// ---------------------------------------------------------------------------
// Edge scales

std::size_t FiltrationScales::edge_count_at(double t) const noexcept
{
    std::size_t count = 0;
    for (std::size_t k = 1; k < scales.size(); ++k) {
        count += vr_edge(scales[k], t) ? 1 : 0;
    }
    return count;
}

FiltrationScales edge_scales(const PointSample& sample)
{
    struct Entry {
        double d;
        IndexPair edge;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            entries.push_back({sample.distance(i, j), {i, j}});
        }
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.d < b.d; });
    FiltrationScales out;
    out.scales.reserve(entries.size() + 1);
    out.edges.reserve(entries.size());
    out.scales.push_back(0.0);
    for (const auto& e : entries) {
        out.scales.push_back(e.d);
        out.edges.push_back(e.edge);
    }
    return out;
}

std::size_t edge_count(const PointSample& sample, double t)
{
    if (!(t >= 0.0)) {
        throw InvalidArgument("scale t must be nonnegative");
    }
    std::size_t count = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            count += vr_edge(sample.distance(i, j), t) ? 1 : 0;
        }
    }
    return count;
}

} // namespace betti

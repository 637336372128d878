#pragma once

// Slow, independent reference implementations used as test oracles. None of
// them share code with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "betti/complex.hpp"
#include "betti/manifold.hpp"

namespace betti::reference {

/// Classical inclusion-exclusion for the event that every one of the n
/// spacings of n uniform points on R/Z is below r:
///   sum_k (-1)^k C(n, k) (1 - k r)_+^(n-1).
/// Long double; accurate while the alternating terms stay moderate (n <= 40).
inline long double all_spacings_below(int n, long double r)
{
    long double sum = 0.0L;
    long double binom = 1.0L;
    for (int k = 0; k <= n; ++k) {
        const long double base = 1.0L - k * r;
        if (base <= 0.0L) {
            break;
        }
        const long double term = binom * std::pow(base, n - 1);
        sum += (k % 2 == 0) ? term : -term;
        binom = binom * (n - k) / (k + 1);
    }
    return sum;
}

/// Wrap-around distance on R/Z written out directly.
inline double circle_distance(double a, double b)
{
    const double d = std::fabs(a - b);
    return std::min(d, 1.0 - d);
}

/// Connected components of the graph {d <= t} via union-find.
inline std::size_t components(const PointSample& s, double t)
{
    std::vector<std::size_t> parent(s.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t count = s.size();
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            if (s.distance(i, j) <= t) {
                const std::size_t a = find(i);
                const std::size_t b = find(j);
                if (a != b) {
                    parent[a] = b;
                    --count;
                }
            }
        }
    }
    return count;
}

/// Every nonempty vertex subset (as sorted index lists) of size <= max_size
/// accepted by `keep`; enumerates all 2^n masks.
template <class Keep>
std::set<std::vector<Vertex>> subsets(std::size_t n, std::size_t max_size, Keep&& keep)
{
    std::set<std::vector<Vertex>> out;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
        std::vector<Vertex> s;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (mask & (std::uint32_t{1} << v)) {
                s.push_back(v);
            }
        }
        if (s.size() <= max_size && keep(s)) {
            out.insert(s);
        }
    }
    return out;
}

/// VR simplices by definition: diameter <= t.
inline std::set<std::vector<Vertex>> vr_simplices(const PointSample& s, double t,
                                                  std::size_t max_size)
{
    return subsets(s.size(), max_size, [&](const std::vector<Vertex>& v) {
        for (std::size_t a = 0; a < v.size(); ++a) {
            for (std::size_t b = a + 1; b < v.size(); ++b) {
                if (s.distance(v[a], v[b]) > t) {
                    return false;
                }
            }
        }
        return true;
    });
}

/// Common point of open arcs (p - t, p + t) on R/Z, searched among witness
/// candidates just inside each arc endpoint and at every center. For
/// distinct generic positions this is exact.
inline bool arcs_share_point(const std::vector<double>& centers, double t)
{
    if (2.0 * t > 1.0) {
        return true;
    }
    std::vector<double> candidates;
    constexpr double kInside = 1e-12;
    for (double p : centers) {
        candidates.push_back(p);
        candidates.push_back(p + t - kInside);
        candidates.push_back(p - t + kInside);
    }
    for (double w : candidates) {
        w -= std::floor(w);
        bool all = true;
        for (double p : centers) {
            if (!(circle_distance(w, p) < t)) {
                all = false;
                break;
            }
        }
        if (all) {
            return true;
        }
    }
    return false;
}

/// Smallest enclosing ball radius by trying every ball spanned by at most
/// three points (enough in the plane).
inline double planar_meb_radius(const std::vector<EuclideanPoint>& pts)
{
    auto covers = [&](double cx, double cy, double r) {
        for (const auto& p : pts) {
            if (std::hypot(p[0] - cx, p[1] - cy) > r * (1.0 + 1e-12) + 1e-15) {
                return false;
            }
        }
        return true;
    };
    double best = INFINITY;
    const std::size_t n = pts.size();
    if (n == 1) {
        return 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double cx = 0.5 * (pts[i][0] + pts[j][0]);
            const double cy = 0.5 * (pts[i][1] + pts[j][1]);
            const double r = 0.5 * std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
            if (r < best && covers(cx, cy, r)) {
                best = r;
            }
            for (std::size_t k = j + 1; k < n; ++k) {
                const double ax = pts[i][0], ay = pts[i][1];
                const double bx = pts[j][0], by = pts[j][1];
                const double qx = pts[k][0], qy = pts[k][1];
                const double d = 2.0 * (ax * (by - qy) + bx * (qy - ay) + qx * (ay - by));
                if (std::fabs(d) < 1e-14) {
                    continue;
                }
                const double a2 = ax * ax + ay * ay;
                const double b2 = bx * bx + by * by;
                const double q2 = qx * qx + qy * qy;
                const double ux = (a2 * (by - qy) + b2 * (qy - ay) + q2 * (ay - by)) / d;
                const double uy = (a2 * (qx - bx) + b2 * (ax - qx) + q2 * (bx - ax)) / d;
                const double rr = std::hypot(ax - ux, ay - uy);
                if (rr < best && covers(ux, uy, rr)) {
                    best = rr;
                }
            }
        }
    }
    return best;
}

} // namespace betti::reference

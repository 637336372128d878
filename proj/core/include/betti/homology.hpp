#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "betti/complex.hpp"

namespace betti {

enum class InvariantKind { Betti, EulerCharacteristic };

/// A topological invariant T whose absolute value is bounded by the number of
/// simplices of the complex it is evaluated on.
struct InvariantSpec {
    InvariantKind kind = InvariantKind::Betti;
    int betti_index = 0;

    static InvariantSpec betti(int i);
    static InvariantSpec euler();
    /// Parses "betti<i>" or "euler".
    static InvariantSpec parse(std::string_view text);

    std::string name() const;
    /// Dimension the complex must be built to, or kFullDimension.
    int required_dim() const noexcept;
    double evaluate(const SimplicialComplex& complex) const;
    /// f(|S|) with |T(S)| <= f(|S|); the identity on the simplex count.
    std::size_t growth_bound(const SimplicialComplex& complex) const noexcept
    {
        return complex.total_size();
    }
    std::string growth_bound_description() const { return "f(|S|) = |S| (simplex count)"; }

    friend bool operator==(const InvariantSpec&, const InvariantSpec&) = default;
};

/// Rank over GF(2) of the boundary map from k-simplices to (k-1)-simplices.
/// rank of the 0-th boundary is 0.
std::size_t boundary_rank(const SimplicialComplex& complex, int k);

/// dim H_i(S; GF(2)), unreduced. Requires the complex built to dimension i+1.
std::size_t betti(const SimplicialComplex& complex, int i);

/// Sum over k of (-1)^k times the number of k-simplices. Full complexes only.
long long euler_characteristic(const SimplicialComplex& complex);

inline constexpr std::size_t kBruteForceSimplexLimit = std::size_t{1} << 14;

/// Independent reference for betti(): dense 0/1 matrices, map-based facet
/// lookup, textbook row reduction. Limited to kBruteForceSimplexLimit simplices.
std::size_t betti_oracle_bruteforce(const SimplicialComplex& complex, int i);

} // namespace betti

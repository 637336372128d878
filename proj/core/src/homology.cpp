#include "betti/homology.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <map>
#include <optional>

#include "betti/error.hpp"

namespace betti {

InvariantSpec InvariantSpec::betti(int i)
{
    if (i < 0) {
        throw InvalidArgument("Betti index must be nonnegative");
    }
    return {InvariantKind::Betti, i};
}

InvariantSpec InvariantSpec::euler()
{
    return {InvariantKind::EulerCharacteristic, 0};
}

InvariantSpec InvariantSpec::parse(std::string_view text)
{
    if (text == "euler") {
        return euler();
    }
    constexpr std::string_view prefix = "betti";
    if (text.starts_with(prefix) && text.size() > prefix.size()) {
        int index = 0;
        const char* first = text.data() + prefix.size();
        const char* last = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(first, last, index);
        if (ec == std::errc() && ptr == last) {
            return betti(index);
        }
    }
    throw InvalidArgument("unknown invariant '" + std::string(text) +
                          "' (expected betti<i> or euler)");
}

std::string InvariantSpec::name() const
{
    return kind == InvariantKind::EulerCharacteristic ? "euler"
                                                      : "betti" + std::to_string(betti_index);
}

int InvariantSpec::required_dim() const noexcept
{
    return kind == InvariantKind::EulerCharacteristic ? kFullDimension : betti_index + 1;
}

double InvariantSpec::evaluate(const SimplicialComplex& complex) const
{
    if (kind == InvariantKind::EulerCharacteristic) {
        return static_cast<double>(euler_characteristic(complex));
    }
    return static_cast<double>(::betti::betti(complex, betti_index));
}

namespace {

/// Maps a (k-1)-simplex to its row index.
class FacetIndex {
public:
    FacetIndex(const SimplicialComplex& complex, int facet_dim)
        : list_(complex.simplices(facet_dim)), n_(complex.num_vertices())
    {
        if (facet_dim == 1 && n_ <= 4096) {
            pair_index_.assign(n_ * n_, 0);
            for (std::size_t e = 0; e < list_.size(); ++e) {
                const auto s = list_[e];
                pair_index_[s[0] * n_ + s[1]] = static_cast<std::uint32_t>(e);
            }
        }
    }

    std::size_t operator()(std::span<const Vertex> facet) const
    {
        if (facet.size() == 1) {
            return facet[0];
        }
        if (!pair_index_.empty()) {
            return pair_index_[facet[0] * n_ + facet[1]];
        }
        return *list_.find(facet);
    }

private:
    const SimplexList& list_;
    std::size_t n_;
    std::vector<std::uint32_t> pair_index_;
};

} // namespace

std::size_t boundary_rank(const SimplicialComplex& complex, int k)
{
    if (k <= 0) {
        return 0;
    }
    const SimplexList& cols = complex.simplices(k);
    const std::size_t rows = complex.count(k - 1);
    if (cols.empty() || rows == 0) {
        return 0;
    }
    const std::size_t words = (rows + 63) / 64;
    const FacetIndex index(complex, k - 1);

    std::vector<std::uint64_t> matrix(cols.size() * words, 0);
    std::vector<Vertex> facet;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto s = cols[c];
        std::uint64_t* column = matrix.data() + c * words;
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            facet.clear();
            for (std::size_t j = 0; j < s.size(); ++j) {
                if (j != drop) {
                    facet.push_back(s[j]);
                }
            }
            const std::size_t r = index(facet);
            column[r / 64] ^= std::uint64_t{1} << (r % 64);
        }
    }

    // Column reduction: eliminate each column's highest row against the
    // column that already owns it.
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> owner(rows, kNone);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        std::uint64_t* column = matrix.data() + c * words;
        std::size_t top = words;
        while (top > 0) {
            if (column[top - 1] == 0) {
                --top;
                continue;
            }
            const std::size_t pivot =
                (top - 1) * 64 + 63 - static_cast<std::size_t>(std::countl_zero(column[top - 1]));
            if (owner[pivot] == kNone) {
                owner[pivot] = c;
                ++rank;
                break;
            }
            const std::uint64_t* other = matrix.data() + owner[pivot] * words;
            for (std::size_t w = 0; w < top; ++w) {
                column[w] ^= other[w];
            }
        }
    }
    return rank;
}

std::size_t betti(const SimplicialComplex& complex, int i)
{
    if (i < 0) {
        throw InvalidArgument("Betti index must be nonnegative");
    }
    if (!complex.is_built_to(i + 1)) {
        throw InvalidArgument("b" + std::to_string(i) + " needs the complex built to dimension " +
                              std::to_string(i + 1) + ", but it was truncated at " +
                              std::to_string(complex.max_dim_built()));
    }
    const std::size_t cells = complex.count(i);
    if (cells == 0) {
        return 0;
    }
    return cells - boundary_rank(complex, i) - boundary_rank(complex, i + 1);
}

long long euler_characteristic(const SimplicialComplex& complex)
{
    if (!complex.is_full()) {
        throw InvalidArgument("Euler characteristic needs a full complex, this one is truncated at "
                              "dimension " +
                              std::to_string(complex.max_dim_built()));
    }
    long long chi = 0;
    for (int k = 0; k <= complex.top_dim(); ++k) {
        const auto count = static_cast<long long>(complex.count(k));
        chi += (k % 2 == 0) ? count : -count;
    }
    return chi;
}

namespace {

std::size_t dense_rank_gf2(std::vector<std::vector<int>> m)
{
    if (m.empty()) {
        return 0;
    }
    const std::size_t nrows = m.size();
    const std::size_t ncols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < ncols && rank < nrows; ++c) {
        std::optional<std::size_t> found;
        for (std::size_t r = rank; r < nrows; ++r) {
            if (m[r][c] % 2 != 0) {
                found = r;
                break;
            }
        }
        if (!found) {
            continue;
        }
        std::swap(m[rank], m[*found]);
        for (std::size_t r = 0; r < nrows; ++r) {
            if (r != rank && m[r][c] % 2 != 0) {
                for (std::size_t j = 0; j < ncols; ++j) {
                    m[r][j] = (m[r][j] + m[rank][j]) % 2;
                }
            }
        }
        ++rank;
    }
    return rank;
}

std::size_t dense_boundary_rank(const SimplicialComplex& complex, int k)
{
    if (k <= 0 || complex.count(k) == 0 || complex.count(k - 1) == 0) {
        return 0;
    }
    std::map<std::vector<Vertex>, std::size_t> row_of;
    const SimplexList& faces = complex.simplices(k - 1);
    for (std::size_t r = 0; r < faces.size(); ++r) {
        const auto s = faces[r];
        row_of[std::vector<Vertex>(s.begin(), s.end())] = r;
    }
    const SimplexList& cols = complex.simplices(k);
    std::vector<std::vector<int>> m(faces.size(), std::vector<int>(cols.size(), 0));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto s = cols[c];
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            std::vector<Vertex> facet;
            for (std::size_t j = 0; j < s.size(); ++j) {
                if (j != drop) {
                    facet.push_back(s[j]);
                }
            }
            m[row_of.at(facet)][c] += 1;
        }
    }
    return dense_rank_gf2(std::move(m));
}

} // namespace

std::size_t betti_oracle_bruteforce(const SimplicialComplex& complex, int i)
{
    if (i < 0) {
        throw InvalidArgument("Betti index must be nonnegative");
    }
    if (!complex.is_built_to(i + 1)) {
        throw InvalidArgument("brute-force b" + std::to_string(i) +
                              " needs the complex built to dimension " + std::to_string(i + 1));
    }
    if (complex.total_size() > kBruteForceSimplexLimit) {
        throw ResourceLimit("brute-force Betti oracle is limited to " +
                            std::to_string(kBruteForceSimplexLimit) + " simplices, complex has " +
                            std::to_string(complex.total_size()));
    }
    const std::size_t cells = complex.count(i);
    if (cells == 0) {
        return 0;
    }
    return cells - dense_boundary_rank(complex, i) - dense_boundary_rank(complex, i + 1);
}

} // namespace betti

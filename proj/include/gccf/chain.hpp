#pragma once

/**
 * @file chain.hpp
 * @brief Nested lattice chain: shaping/coding assignment and derived index sets.
 *
 * All indices in this header are 1-based: sources and receivers l, m in 1..L,
 * chain positions in 1..2L and virtual blocks k in 1..2L-1. The permutation is
 * stored as pi[0..2L-1] where pi[2l-2] is the chain position of the shaping
 * lattice of source l and pi[2l-1] that of its coding lattice.
 */

#include "gccf/ffla.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace gccf {

using Index = std::size_t;
using IndexSet = std::vector<Index>;

/// Inclusive interval of block indices.
struct BlockRange {
    Index lo;
    Index hi;
    [[nodiscard]] bool contains(Index k) const noexcept { return lo <= k && k <= hi; }
    [[nodiscard]] std::size_t size() const noexcept { return hi >= lo ? hi - lo + 1 : 0; }
};

class ChainSpec {
public:
    /// Block widths over F_gamma; r_v[k] = d[k] log2(gamma).
    [[nodiscard]] static ChainSpec symbolic(std::size_t L, std::vector<Index> pi,
                                            std::vector<std::size_t> dims, ffla::Elem gamma);
    /// Real block rates with no field structure attached.
    [[nodiscard]] static ChainSpec continuous(std::size_t L, std::vector<Index> pi,
                                              std::vector<double> rates);
    /// Index structure only; all block rates zero.
    [[nodiscard]] static ChainSpec structure(std::size_t L, std::vector<Index> pi);

    [[nodiscard]] std::size_t sources() const noexcept { return L_; }
    [[nodiscard]] std::size_t blocks() const noexcept { return 2 * L_ - 1; }
    [[nodiscard]] const std::vector<Index>& pi() const noexcept { return pi_; }
    [[nodiscard]] bool is_symbolic() const noexcept { return gamma_.has_value(); }
    /// Throws InvalidArgument for a continuous chain.
    [[nodiscard]] ffla::Elem gamma() const;

    [[nodiscard]] Index shaping_index(Index l) const noexcept { return pi_[2 * l - 2]; }
    [[nodiscard]] Index coding_index(Index l) const noexcept { return pi_[2 * l - 1]; }

    /// K_l = [pi(2l-1), pi(2l)-1].
    [[nodiscard]] BlockRange K(Index l) const noexcept {
        return {shaping_index(l), coding_index(l) - 1};
    }
    /// L_k = {l : k in K_l}, ascending.
    [[nodiscard]] const IndexSet& L_of(Index k) const noexcept { return block_sources_[k - 1]; }

    [[nodiscard]] std::size_t dim(Index k) const noexcept { return dims_[k - 1]; }
    [[nodiscard]] double rate(Index k) const noexcept { return rates_[k - 1]; }
    [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    [[nodiscard]] const std::vector<double>& rates() const noexcept { return rates_; }

    /// Total message length of source l: sum of d_k over K_l.
    [[nodiscard]] std::size_t message_length(Index l) const noexcept;

private:
    ChainSpec(std::size_t L, std::vector<Index> pi);

    std::size_t L_;
    std::vector<Index> pi_;
    std::vector<std::size_t> dims_;
    std::vector<double> rates_;
    std::optional<ffla::Elem> gamma_;
    std::vector<IndexSet> block_sources_;
};

/// Throws InvalidPermutation unless pi is a bijection on 1..2L with pi(2l-1) < pi(2l).
void validate_permutation(std::size_t L, const std::vector<Index>& pi);

/// r_l = sum of r_v[k] over K_l.
[[nodiscard]] std::vector<double> source_rates(const ChainSpec& c);

/// Every shaping lattice strictly coarser than every coding lattice.
[[nodiscard]] bool is_separable(const ChainSpec& c);

/// Sources ordered from coarsest to finest shaping lattice.
[[nodiscard]] IndexSet shaping_order(const ChainSpec& c);

/// Blocks between consecutive shaping lattices, L-1 ranges in shaping order.
[[nodiscard]] std::vector<BlockRange> shaping_gap_sets(const ChainSpec& c);

/// Parses key=value chain text (L, gamma, pi, dims | rates); '#' starts a comment.
[[nodiscard]] ChainSpec parse_chain(const std::string& text);
[[nodiscard]] ChainSpec load_chain(const std::string& path);
[[nodiscard]] std::string format_chain(const ChainSpec& c);

} // namespace gccf

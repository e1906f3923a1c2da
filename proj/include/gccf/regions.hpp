#pragma once

/**
 * @file regions.hpp
 * @brief Rate regions: computation rates, the rank-based compression region,
 *        its greedy vertices, and an exhaustive Slepian-Wolf entropy oracle.
 *
 * Subsets of receivers are bitmasks: bit m-1 set means receiver m is in S.
 */

#include "gccf/chain.hpp"
#include "gccf/codeword.hpp"
#include "gccf/ffla.hpp"

#include <cstdint>
#include <vector>

namespace gccf {

using Mask = std::uint32_t;

[[nodiscard]] inline Mask full_mask(std::size_t L) noexcept { return (Mask{1} << L) - 1; }

struct RateFunction {
    std::size_t L = 0;
    std::vector<double> f;  ///< f[mask], size 2^L, f[0] = 0

    [[nodiscard]] double operator()(Mask s) const { return f[s]; }
};

/// c[mask][k-1] = rank(A(I_L, L_k)) - rank(A(complement of mask, L_k)); the region's integer weights.
struct RankCoefficients {
    std::size_t L = 0;
    std::size_t blocks = 0;
    std::vector<std::vector<int>> c;

    [[nodiscard]] double evaluate(Mask s, const std::vector<double>& block_rates) const;
};

[[nodiscard]] RankCoefficients rank_coefficients(const ffla::FieldMatrix& A, const ChainSpec& chain);

/// f(S) = sum_k c[S][k] r_v[k] over the chain's block rates.
[[nodiscard]] RateFunction rank_rate_function(const ffla::FieldMatrix& A, const ChainSpec& chain);

/// Greedy vertex for weight order pi_alpha (1-based receivers); result indexed m-1.
[[nodiscard]] std::vector<double> vertex(const RateFunction& f, const IndexSet& pi_alpha);

/// Every inequality sum_{m in S} R_m >= f(S) - tol holds.
[[nodiscard]] bool region_contains(const RateFunction& f, const std::vector<double>& R, double tol);

[[nodiscard]] bool is_supermodular(const RateFunction& f, double tol);
[[nodiscard]] bool is_monotone(const RateFunction& f, double tol);

/// One receiver's view of the first hop.
struct ChannelRow {
    std::vector<double> h;       ///< channel gains from each source
    std::vector<double> p;       ///< transmit powers
    std::vector<double> beta;    ///< scalings
    std::vector<std::int64_t> a; ///< integer coefficients
};

/// Effective noise a~^T (P - P h h^T P / (1 + h^T P h)) a~ with a~ = diag(beta) a.
/// Small negative rounding is clamped to 0; below -1e-12 throws DegenerateDenominator.
[[nodiscard]] double effective_noise(const ChannelRow& row);

/// 1/2 log2+(p_l beta_l^2 / effective_noise) for source l (1-based).
[[nodiscard]] double computation_rate(const ChannelRow& row, Index l);

/**
 * @brief Per-source computation bound: minimum over receivers m with a_ml != 0.
 * @param H rows are receivers, H[m-1][l-1] the gain from source l
 * @param A integer coefficients, one row per receiver
 */
[[nodiscard]] std::vector<double> computation_rates(const std::vector<std::vector<double>>& H,
                                                    const std::vector<double>& p,
                                                    const std::vector<double>& beta,
                                                    const ffla::IntMatrix& A);

/// Largest enumerable message space for the entropy oracle.
inline constexpr std::uint64_t kMaxOracleStates = std::uint64_t{1} << 24;

/**
 * @brief Exact joint statistics of the receiver words under uniform source messages.
 *
 * Enumerates every source message tuple, computes all receiver words, and
 * assigns dense identifiers to their values so entropies come from exact counts.
 */
class EntropyOracle {
public:
    /// Throws StateSpaceTooLarge when gamma^(total message length) exceeds kMaxOracleStates.
    EntropyOracle(const ffla::FieldMatrix& A, const ChainSpec& chain, const DitherSpec& d);

    [[nodiscard]] std::size_t receivers() const noexcept { return ids_.size(); }
    [[nodiscard]] std::uint64_t states() const noexcept { return states_; }

    /// H({v_m : m in S}) in bits; 0 for the empty set.
    [[nodiscard]] double joint_entropy(Mask s) const;

    /// H(v_T | v_G) computed group by group from conditional counts.
    [[nodiscard]] double conditional_entropy(Mask target, Mask given) const;

    /// h(S) = H(v_S | v_{S complement}) for every S.
    [[nodiscard]] RateFunction sw_rate_function() const;

private:
    std::vector<std::uint32_t> combined_ids(Mask s, std::uint32_t* distinct) const;

    std::uint64_t states_ = 0;
    std::vector<std::vector<std::uint32_t>> ids_;
    std::vector<std::uint32_t> id_count_;
};

[[nodiscard]] RateFunction sw_rate_function(const ffla::FieldMatrix& A, const ChainSpec& chain,
                                            const DitherSpec& d);

struct RegionComparison {
    RateFunction f;                 ///< rank-based compression region
    RateFunction h;                 ///< Slepian-Wolf region
    std::vector<double> gap;        ///< f - h per mask
    std::vector<bool> equal;        ///< |gap| <= tol per mask
    bool total_equal = false;       ///< f(I_L) = h(I_L) = sum of source rates
    bool all_equal = false;
    bool regime_no_dither = false;
    bool regime_two_sources = false;
    bool regime_common_shaping = false;  ///< every shaping gap has zero width
};

[[nodiscard]] RegionComparison compare_regions(const ffla::FieldMatrix& A, const ChainSpec& chain,
                                               const DitherSpec& d, double tol = 1e-9);

} // namespace gccf

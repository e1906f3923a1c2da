#pragma once

/**
 * @file codeword.hpp
 * @brief Finite-field block model of source codewords and receiver computations.
 *
 * A source message over F_gamma is split into blocks w[l][k], one per virtual
 * codebook k in K_l. Receiver m computes v[m][k] = sum_l A[m][l] * t[l][k]
 * blockwise, where t is the dithered message.
 */

#include "gccf/chain.hpp"
#include "gccf/ffla.hpp"

#include <cstdint>
#include <vector>

namespace gccf {

using Block = std::vector<ffla::Elem>;
using Vec = std::vector<ffla::Elem>;

/// Per-source block decomposition; blocks[l-1][k-1] has width d_k and is zero for k outside K_l.
struct SplitMessage {
    std::vector<std::vector<Block>> blocks;

    [[nodiscard]] const Block& at(Index l, Index k) const { return blocks[l - 1][k - 1]; }
    [[nodiscard]] Block& at(Index l, Index k) { return blocks[l - 1][k - 1]; }
    [[nodiscard]] bool operator==(const SplitMessage&) const = default;
};

/// Same layout as SplitMessage, after the residual dither offsets were added.
struct DitheredMessage {
    std::vector<std::vector<Block>> blocks;

    [[nodiscard]] const Block& at(Index l, Index k) const { return blocks[l - 1][k - 1]; }
    [[nodiscard]] bool operator==(const DitheredMessage&) const = default;
};

/**
 * @brief Per-source dither keys, or none.
 *
 * The offset a source adds to block k (only for k coarser than its shaping
 * lattice) is a keyed hash of its full message. It is a deterministic function
 * of the message and supported strictly below the shaping index.
 */
struct DitherSpec {
    std::vector<std::uint64_t> keys;

    [[nodiscard]] static DitherSpec absent() { return {}; }
    [[nodiscard]] bool present() const noexcept { return !keys.empty(); }
};

struct ReceiverWord {
    Index receiver;
    std::vector<Block> blocks;  ///< blocks[k-1], width d_k
    [[nodiscard]] bool operator==(const ReceiverWord&) const = default;
};

/// Empty message structure with all blocks zero.
[[nodiscard]] SplitMessage zero_message(const ChainSpec& chain);

/// Slices the full message of source l into its K_l blocks. Throws LengthMismatch.
void split_into(SplitMessage& s, const Vec& full, Index l, const ChainSpec& chain);
[[nodiscard]] SplitMessage split(const std::vector<Vec>& full_messages, const ChainSpec& chain);

/// Concatenation of blocks K_l in ascending k.
[[nodiscard]] Vec recombine(const SplitMessage& s, Index l, const ChainSpec& chain);

/// 64-bit finalizer used by the keyed dither hash.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// Offsets u_l[k] for k = 1..shaping_index(l)-1 (index k-1); empty when the key is absent.
[[nodiscard]] std::vector<Block> dither_offsets(std::uint64_t key, const Vec& full_message,
                                                Index l, const ChainSpec& chain);

[[nodiscard]] DitheredMessage apply_dither(const SplitMessage& s, const DitherSpec& d,
                                           const ChainSpec& chain);

/// One receiver word per row of A. Throws DimensionMismatch.
[[nodiscard]] std::vector<ReceiverWord> compute(const ffla::FieldMatrix& A,
                                                const DitheredMessage& t, const ChainSpec& chain);

} // namespace gccf

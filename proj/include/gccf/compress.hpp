#pragma once

/**
 * @file compress.hpp
 * @brief Receiver-side compression of computed codewords and lossless recovery.
 *
 * For a weight order pi_alpha (pi_alpha[i-1] is the receiver at position i),
 * the receiver at position i keeps block k when appending its row raises the
 * rank of A restricted to the rows of positions i..L and the columns L_k.
 */

#include "gccf/chain.hpp"
#include "gccf/codeword.hpp"
#include "gccf/ffla.hpp"

#include <vector>

namespace gccf {

struct CompressionPlan {
    IndexSet pi_alpha;            ///< receiver at each position, 1-based
    std::vector<IndexSet> J;      ///< J[m-1]: blocks kept by receiver m, ascending
    std::vector<IndexSet> M;      ///< M[k-1]: receivers keeping block k, ascending
};

struct CompressedWord {
    Index receiver;
    IndexSet kept;                ///< block indices, ascending
    std::vector<Block> blocks;    ///< one per entry of kept
    [[nodiscard]] bool operator==(const CompressedWord&) const = default;
};

/**
 * @brief Rank-test plan over the field of A.
 *
 * In a symbolic chain, zero-width blocks never enter any J.
 * @throws Error SingularCoefficientMatrix if A is not invertible, InvalidPermutation for a bad pi_alpha.
 */
[[nodiscard]] CompressionPlan plan(const ffla::FieldMatrix& A, const IndexSet& pi_alpha,
                                   const ChainSpec& chain);

/// Keeps the blocks J[m].
[[nodiscard]] CompressedWord compress(const ReceiverWord& v, const CompressionPlan& p);

/// Single quantize-and-modulo form: keeps the contiguous hull [min J[m], max J[m]].
[[nodiscard]] CompressedWord compress_ccf(const ReceiverWord& v, const CompressionPlan& p);

/// Contiguous hull of a block set; empty for an empty set.
[[nodiscard]] IndexSet hull(const IndexSet& blocks);

/// R_m = sum of r_v[k] over J[m], indexed m-1.
[[nodiscard]] std::vector<double> rates(const CompressionPlan& p, const ChainSpec& chain);
[[nodiscard]] std::vector<double> rates_ccf(const CompressionPlan& p, const ChainSpec& chain);

/**
 * @brief Reconstructs every source message from the compressed words.
 *
 * Blocks are solved in descending k. Dither offsets of a source are cancelled
 * once all of its blocks are known, which always happens before they are needed.
 * @throws Error InconsistentInput if a needed offset belongs to an unrecovered source.
 */
[[nodiscard]] SplitMessage recover(const std::vector<CompressedWord>& deltas,
                                   const ffla::FieldMatrix& A, const CompressionPlan& p,
                                   const ChainSpec& chain, const DitherSpec& d);

/// Throws InvalidPermutation unless order is a permutation of 1..L.
void validate_order(const IndexSet& order, std::size_t L);

} // namespace gccf

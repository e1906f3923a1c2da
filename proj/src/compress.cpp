#include "gccf/compress.hpp"

#include "gccf/error.hpp"

#include <algorithm>
#include <string>

namespace gccf {

void validate_order(const IndexSet& order, std::size_t L) {
    if (order.size() != L) throw Error(ErrorCode::InvalidPermutation, "order must have L entries");
    std::vector<bool> seen(L + 1, false);
    for (Index m : order) {
        if (m < 1 || m > L || seen[m]) {
            throw Error(ErrorCode::InvalidPermutation, "order is not a permutation of 1..L");
        }
        seen[m] = true;
    }
}

namespace {

IndexSet zero_based(const IndexSet& s) {
    IndexSet out(s.size());
    std::transform(s.begin(), s.end(), out.begin(), [](Index i) { return i - 1; });
    return out;
}

} // namespace

CompressionPlan plan(const ffla::FieldMatrix& A, const IndexSet& pi_alpha, const ChainSpec& chain) {
    const std::size_t L = chain.sources();
    if (A.rows() != L || A.cols() != L) {
        throw Error(ErrorCode::DimensionMismatch, "A must be L x L");
    }
    validate_order(pi_alpha, L);
    if (ffla::rank(A) != L) {
        throw Error(ErrorCode::SingularCoefficientMatrix, "A is not invertible over F_gamma");
    }

    CompressionPlan p{pi_alpha, std::vector<IndexSet>(L), std::vector<IndexSet>(chain.blocks())};
    for (Index k = 1; k <= chain.blocks(); ++k) {
        if (chain.is_symbolic() && chain.dim(k) == 0) continue;
        const IndexSet cols = zero_based(chain.L_of(k));
        // tail_rank[i-1] = rank of A(rows at positions i..L, L_k); tail_rank[L] = 0.
        std::vector<std::size_t> tail_rank(L + 1, 0);
        for (std::size_t i = L; i >= 1; --i) {
            IndexSet rows;
            for (std::size_t j = i; j <= L; ++j) rows.push_back(pi_alpha[j - 1] - 1);
            std::sort(rows.begin(), rows.end());
            tail_rank[i - 1] = ffla::rank(A.submatrix(rows, cols));
        }
        for (std::size_t i = 1; i <= L; ++i) {
            if (tail_rank[i - 1] == tail_rank[i] + 1) {
                const Index m = pi_alpha[i - 1];
                p.J[m - 1].push_back(k);
                p.M[k - 1].push_back(m);
            }
        }
        std::sort(p.M[k - 1].begin(), p.M[k - 1].end());
    }
    return p;
}

IndexSet hull(const IndexSet& blocks) {
    IndexSet out;
    if (blocks.empty()) return out;
    const auto [lo, hi] = std::minmax_element(blocks.begin(), blocks.end());
    for (Index k = *lo; k <= *hi; ++k) out.push_back(k);
    return out;
}

namespace {

CompressedWord keep(const ReceiverWord& v, const IndexSet& kept) {
    CompressedWord w{v.receiver, kept, {}};
    for (Index k : kept) {
        if (k < 1 || k > v.blocks.size()) {
            throw Error(ErrorCode::DimensionMismatch, "plan refers to a missing block");
        }
        w.blocks.push_back(v.blocks[k - 1]);
    }
    return w;
}

double sum_rates(const IndexSet& ks, const ChainSpec& chain) {
    double r = 0.0;
    for (Index k : ks) r += chain.rate(k);
    return r;
}

} // namespace

CompressedWord compress(const ReceiverWord& v, const CompressionPlan& p) {
    return keep(v, p.J.at(v.receiver - 1));
}

CompressedWord compress_ccf(const ReceiverWord& v, const CompressionPlan& p) {
    return keep(v, hull(p.J.at(v.receiver - 1)));
}

std::vector<double> rates(const CompressionPlan& p, const ChainSpec& chain) {
    std::vector<double> r;
    for (const auto& J : p.J) r.push_back(sum_rates(J, chain));
    return r;
}

std::vector<double> rates_ccf(const CompressionPlan& p, const ChainSpec& chain) {
    std::vector<double> r;
    for (const auto& J : p.J) r.push_back(sum_rates(hull(J), chain));
    return r;
}

SplitMessage recover(const std::vector<CompressedWord>& deltas, const ffla::FieldMatrix& A,
                     const CompressionPlan& p, const ChainSpec& chain, const DitherSpec& d) {
    const std::size_t L = chain.sources();
    const ffla::Elem g = chain.gamma();
    if (A.rows() != L || A.cols() != L || A.gamma() != g) {
        throw Error(ErrorCode::DimensionMismatch, "A must be L x L over the chain's field");
    }
    if (d.present() && d.keys.size() != L) {
        throw Error(ErrorCode::LengthMismatch, "one dither key per source required");
    }

    auto find_block = [&](Index m, Index k) -> const Block& {
        for (const auto& w : deltas) {
            if (w.receiver != m) continue;
            for (std::size_t i = 0; i < w.kept.size(); ++i) {
                if (w.kept[i] == k) return w.blocks[i];
            }
        }
        throw Error(ErrorCode::InconsistentInput,
                    "receiver " + std::to_string(m) + " did not forward block " + std::to_string(k));
    };

    auto out = zero_message(chain);
    std::vector<bool> complete(L, false);
    std::vector<std::vector<Block>> offsets(L);

    for (Index k = chain.blocks(); k >= 1; --k) {
        const auto& Lk = chain.L_of(k);
        const auto& Mk = p.M[k - 1];
        const std::size_t dk = chain.dim(k);
        if (dk > 0 && !Lk.empty()) {
            if (Mk.size() != Lk.size()) {
                throw Error(ErrorCode::InconsistentInput,
                            "block " + std::to_string(k) + " has |M_k| != |L_k|");
            }
            ffla::FieldMatrix delta(g, Mk.size(), dk);
            for (std::size_t r = 0; r < Mk.size(); ++r) {
                const Index m = Mk[r];
                const Block& b = find_block(m, k);
                if (b.size() != dk) throw Error(ErrorCode::DimensionMismatch, "block width");
                for (std::size_t j = 0; j < dk; ++j) {
                    std::int64_t val = b[j];
                    // Sources whose shaping lattice is finer than block k add an offset here.
                    for (Index l = 1; l <= L; ++l) {
                        if (!d.present() || k >= chain.shaping_index(l)) continue;
                        const auto a = A(m - 1, l - 1);
                        if (a == 0) continue;
                        if (!complete[l - 1]) {
                            throw Error(ErrorCode::InconsistentInput,
                                        "offset of source " + std::to_string(l) +
                                            " needed before it was recovered");
                        }
                        val -= static_cast<std::int64_t>(
                            (std::uint64_t{a} * offsets[l - 1][k - 1][j]) % g);
                    }
                    delta.set(r, j, val);
                }
            }
            IndexSet rows(Mk), cols(Lk);
            for (auto& i : rows) --i;
            for (auto& i : cols) --i;
            const auto W = ffla::invert(A.submatrix(rows, cols)) * delta;
            for (std::size_t i = 0; i < Lk.size(); ++i) {
                auto& blk = out.at(Lk[i], k);
                for (std::size_t j = 0; j < dk; ++j) blk[j] = W(i, j);
            }
        }
        for (Index l = 1; l <= L; ++l) {
            if (chain.shaping_index(l) != k) continue;
            complete[l - 1] = true;
            if (d.present()) {
                offsets[l - 1] = dither_offsets(d.keys[l - 1], recombine(out, l, chain), l, chain);
            }
        }
    }
    return out;
}

} // namespace gccf

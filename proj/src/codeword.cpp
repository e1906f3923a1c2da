#include "gccf/codeword.hpp"

#include "gccf/error.hpp"

#include <string>

namespace gccf {

SplitMessage zero_message(const ChainSpec& chain) {
    SplitMessage s;
    s.blocks.resize(chain.sources());
    for (auto& src : s.blocks) {
        src.resize(chain.blocks());
        for (Index k = 1; k <= chain.blocks(); ++k) src[k - 1].assign(chain.dim(k), 0);
    }
    return s;
}

void split_into(SplitMessage& s, const Vec& full, Index l, const ChainSpec& chain) {
    if (full.size() != chain.message_length(l)) {
        throw Error(ErrorCode::LengthMismatch,
                    "source " + std::to_string(l) + " expects " +
                        std::to_string(chain.message_length(l)) + " coordinates, got " +
                        std::to_string(full.size()));
    }
    const auto K = chain.K(l);
    std::size_t pos = 0;
    for (Index k = K.lo; k <= K.hi; ++k) {
        auto& b = s.at(l, k);
        for (auto& x : b) x = full[pos++];
    }
}

SplitMessage split(const std::vector<Vec>& full_messages, const ChainSpec& chain) {
    if (full_messages.size() != chain.sources()) {
        throw Error(ErrorCode::LengthMismatch, "one message per source required");
    }
    auto s = zero_message(chain);
    for (Index l = 1; l <= chain.sources(); ++l) split_into(s, full_messages[l - 1], l, chain);
    return s;
}

Vec recombine(const SplitMessage& s, Index l, const ChainSpec& chain) {
    Vec out;
    out.reserve(chain.message_length(l));
    const auto K = chain.K(l);
    for (Index k = K.lo; k <= K.hi; ++k) {
        const auto& b = s.at(l, k);
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<Block> dither_offsets(std::uint64_t key, const Vec& full_message, Index l,
                                  const ChainSpec& chain) {
    const ffla::Elem g = chain.gamma();
    std::uint64_t h = mix64(key ^ 0xd1b54a32d192ed03ULL);
    h = mix64(h ^ full_message.size());
    for (auto x : full_message) h = mix64(h ^ x);

    std::vector<Block> u;
    for (Index k = 1; k < chain.shaping_index(l); ++k) {
        const std::uint64_t hk = mix64(h ^ (k * 0xa0761d6478bd642fULL));
        Block b(chain.dim(k));
        for (std::size_t j = 0; j < b.size(); ++j) {
            b[j] = static_cast<ffla::Elem>(mix64(hk + (j + 1) * 0xe7037ed1a0b428dbULL) % g);
        }
        u.push_back(std::move(b));
    }
    return u;
}

DitheredMessage apply_dither(const SplitMessage& s, const DitherSpec& d, const ChainSpec& chain) {
    DitheredMessage t{s.blocks};
    if (!d.present()) return t;
    if (d.keys.size() != chain.sources()) {
        throw Error(ErrorCode::LengthMismatch, "one dither key per source required");
    }
    const ffla::Elem g = chain.gamma();
    for (Index l = 1; l <= chain.sources(); ++l) {
        const auto u = dither_offsets(d.keys[l - 1], recombine(s, l, chain), l, chain);
        for (Index k = 1; k <= u.size(); ++k) {
            auto& b = t.blocks[l - 1][k - 1];
            for (std::size_t j = 0; j < b.size(); ++j) b[j] = (b[j] + u[k - 1][j]) % g;
        }
    }
    return t;
}

std::vector<ReceiverWord> compute(const ffla::FieldMatrix& A, const DitheredMessage& t,
                                  const ChainSpec& chain) {
    const std::size_t L = chain.sources();
    if (A.rows() != L || A.cols() != L || t.blocks.size() != L) {
        throw Error(ErrorCode::DimensionMismatch, "A must be L x L with one message per source");
    }
    if (A.gamma() != chain.gamma()) {
        throw Error(ErrorCode::DimensionMismatch, "A and chain use different fields");
    }
    const ffla::Elem g = A.gamma();
    std::vector<ReceiverWord> out;
    out.reserve(L);
    for (Index m = 1; m <= L; ++m) {
        ReceiverWord v{m, {}};
        v.blocks.resize(chain.blocks());
        for (Index k = 1; k <= chain.blocks(); ++k) {
            auto& b = v.blocks[k - 1];
            b.assign(chain.dim(k), 0);
            for (Index l = 1; l <= L; ++l) {
                const std::uint64_t a = A(m - 1, l - 1);
                if (a == 0) continue;
                const auto& src = t.at(l, k);
                if (src.size() != b.size()) {
                    throw Error(ErrorCode::DimensionMismatch, "block width differs from chain");
                }
                for (std::size_t j = 0; j < b.size(); ++j) {
                    b[j] = static_cast<ffla::Elem>((b[j] + a * src[j]) % g);
                }
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace gccf

#include "gccf/regions.hpp"

#include "gccf/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gccf {

double RankCoefficients::evaluate(Mask s, const std::vector<double>& block_rates) const {
    double v = 0.0;
    for (std::size_t k = 0; k < blocks; ++k) v += c[s][k] * block_rates[k];
    return v;
}

namespace {

IndexSet mask_rows(Mask s, std::size_t L) {
    IndexSet rows;
    for (std::size_t m = 0; m < L; ++m)
        if (s & (Mask{1} << m)) rows.push_back(m);
    return rows;
}

} // namespace

RankCoefficients rank_coefficients(const ffla::FieldMatrix& A, const ChainSpec& chain) {
    const std::size_t L = chain.sources();
    if (A.rows() != L || A.cols() != L) throw Error(ErrorCode::DimensionMismatch, "A must be L x L");
    RankCoefficients rc{L, chain.blocks(), std::vector<std::vector<int>>(std::size_t{1} << L)};
    const Mask full = full_mask(L);
    for (auto& row : rc.c) row.assign(chain.blocks(), 0);
    for (Index k = 1; k <= chain.blocks(); ++k) {
        IndexSet cols;
        for (Index l : chain.L_of(k)) cols.push_back(l - 1);
        const auto all_rows = mask_rows(full, L);
        const auto total = static_cast<int>(ffla::rank(A.submatrix(all_rows, cols)));
        for (Mask s = 0; s <= full; ++s) {
            const auto rest = static_cast<int>(ffla::rank(A.submatrix(mask_rows(full & ~s, L), cols)));
            rc.c[s][k - 1] = total - rest;
        }
    }
    return rc;
}

RateFunction rank_rate_function(const ffla::FieldMatrix& A, const ChainSpec& chain) {
    const auto rc = rank_coefficients(A, chain);
    RateFunction f{rc.L, std::vector<double>(rc.c.size(), 0.0)};
    for (Mask s = 0; s < rc.c.size(); ++s) f.f[s] = rc.evaluate(s, chain.rates());
    return f;
}

std::vector<double> vertex(const RateFunction& f, const IndexSet& pi_alpha) {
    if (pi_alpha.size() != f.L) throw Error(ErrorCode::InvalidPermutation, "order must have L entries");
    std::vector<double> R(f.L, 0.0);
    Mask prefix = 0;
    for (Index m : pi_alpha) {
        if (m < 1 || m > f.L || (prefix & (Mask{1} << (m - 1)))) {
            throw Error(ErrorCode::InvalidPermutation, "order is not a permutation of 1..L");
        }
        const Mask next = prefix | (Mask{1} << (m - 1));
        R[m - 1] = f(next) - f(prefix);
        prefix = next;
    }
    return R;
}

bool region_contains(const RateFunction& f, const std::vector<double>& R, double tol) {
    if (R.size() != f.L) throw Error(ErrorCode::DimensionMismatch, "rate vector length");
    for (Mask s = 1; s <= full_mask(f.L); ++s) {
        double sum = 0.0;
        for (std::size_t m = 0; m < f.L; ++m)
            if (s & (Mask{1} << m)) sum += R[m];
        if (sum < f(s) - tol) return false;
    }
    return true;
}

bool is_supermodular(const RateFunction& f, double tol) {
    const Mask full = full_mask(f.L);
    for (Mask s = 0; s <= full; ++s)
        for (Mask t = 0; t <= full; ++t)
            if (f(s | t) + f(s & t) < f(s) + f(t) - tol) return false;
    return true;
}

bool is_monotone(const RateFunction& f, double tol) {
    const Mask full = full_mask(f.L);
    for (Mask s = 0; s <= full; ++s)
        for (std::size_t m = 0; m < f.L; ++m)
            if (f(s | (Mask{1} << m)) < f(s) - tol) return false;
    return true;
}

double effective_noise(const ChannelRow& row) {
    const std::size_t L = row.h.size();
    if (row.p.size() != L || row.beta.size() != L || row.a.size() != L) {
        throw Error(ErrorCode::DimensionMismatch, "channel row vectors differ in length");
    }
    double norm = 0.0, cross = 0.0, gain = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
        const double at = row.beta[i] * static_cast<double>(row.a[i]);
        norm += row.p[i] * at * at;
        cross += row.p[i] * row.h[i] * at;
        gain += row.p[i] * row.h[i] * row.h[i];
    }
    const double q = norm - cross * cross / (1.0 + gain);
    if (q < -1e-12) throw Error(ErrorCode::DegenerateDenominator, "effective noise is negative");
    return std::max(q, 0.0);
}

double computation_rate(const ChannelRow& row, Index l) {
    const double q = effective_noise(row);
    const double signal = row.p.at(l - 1) * row.beta[l - 1] * row.beta[l - 1];
    if (q <= 0.0) {
        if (signal > 0.0) return std::numeric_limits<double>::infinity();
        throw Error(ErrorCode::DegenerateDenominator, "zero signal over zero noise");
    }
    return std::max(0.0, 0.5 * std::log2(signal / q));
}

std::vector<double> computation_rates(const std::vector<std::vector<double>>& H,
                                      const std::vector<double>& p, const std::vector<double>& beta,
                                      const ffla::IntMatrix& A) {
    const std::size_t L = p.size();
    std::vector<double> r(L, std::numeric_limits<double>::infinity());
    for (std::size_t m = 0; m < A.size(); ++m) {
        ChannelRow row{H.at(m), p, beta, A[m]};
        const double q = effective_noise(row);
        for (std::size_t l = 0; l < L; ++l) {
            if (A[m][l] == 0) continue;
            const double signal = p[l] * beta[l] * beta[l];
            const double rate =
                q <= 0.0 ? std::numeric_limits<double>::infinity() : std::max(0.0, 0.5 * std::log2(signal / q));
            r[l] = std::min(r[l], rate);
        }
    }
    return r;
}

namespace {

// Replaces keys by dense ids in [0, distinct).
std::vector<std::uint32_t> densify(const std::vector<std::uint64_t>& keys, std::uint32_t* distinct) {
    std::vector<std::uint64_t> uniq(keys);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<std::uint32_t> ids(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        ids[i] = static_cast<std::uint32_t>(std::lower_bound(uniq.begin(), uniq.end(), keys[i]) - uniq.begin());
    }
    *distinct = static_cast<std::uint32_t>(uniq.size());
    return ids;
}

// sum c log2 c over a histogram
long double plogp_sum(const std::vector<std::uint64_t>& counts) {
    long double s = 0.0L;
    for (auto c : counts)
        if (c > 1) s += static_cast<long double>(c) * std::log2(static_cast<long double>(c));
    return s;
}

} // namespace

EntropyOracle::EntropyOracle(const ffla::FieldMatrix& A, const ChainSpec& chain, const DitherSpec& d) {
    const std::size_t L = chain.sources();
    const ffla::Elem g = chain.gamma();
    if (A.rows() != L || A.cols() != L || A.gamma() != g) {
        throw Error(ErrorCode::DimensionMismatch, "A must be L x L over the chain's field");
    }

    // Per-source message counts gamma^{n_l}, with an overflow-safe product.
    std::vector<std::uint64_t> count(L, 1);
    states_ = 1;
    for (Index l = 1; l <= L; ++l) {
        for (std::size_t i = 0; i < chain.message_length(l); ++i) {
            count[l - 1] *= g;
            states_ *= g;
            if (states_ > kMaxOracleStates) {
                throw Error(ErrorCode::StateSpaceTooLarge,
                            "message space exceeds 2^24 states");
            }
        }
    }

    std::size_t width = 0;
    for (Index k = 1; k <= chain.blocks(); ++k) width += chain.dim(k);
    const long double pack_bits = static_cast<long double>(width) * std::log2(static_cast<long double>(g));
    if (pack_bits > 63.0L) throw Error(ErrorCode::StateSpaceTooLarge, "receiver word too wide to pack");

    // contrib[m][l][msg * width + j]: A[m][l] times the dithered message, flattened over blocks.
    std::vector<std::vector<std::vector<ffla::Elem>>> contrib(L, std::vector<std::vector<ffla::Elem>>(L));
    for (Index l = 1; l <= L; ++l) {
        const std::size_t n = chain.message_length(l);
        std::vector<std::vector<ffla::Elem>> flat(count[l - 1]);
        auto s = zero_message(chain);
        Vec msg(n, 0);
        for (std::uint64_t idx = 0; idx < count[l - 1]; ++idx) {
            std::uint64_t x = idx;
            for (std::size_t i = 0; i < n; ++i) {
                msg[i] = static_cast<ffla::Elem>(x % g);
                x /= g;
            }
            split_into(s, msg, l, chain);
            std::vector<ffla::Elem> row;
            row.reserve(width);
            std::vector<Block> u;
            if (d.present()) u = dither_offsets(d.keys.at(l - 1), msg, l, chain);
            for (Index k = 1; k <= chain.blocks(); ++k) {
                const auto& b = s.at(l, k);
                for (std::size_t j = 0; j < b.size(); ++j) {
                    ffla::Elem v = b[j];
                    if (k <= u.size()) v = (v + u[k - 1][j]) % g;
                    row.push_back(v);
                }
            }
            flat[idx] = std::move(row);
        }
        for (Index m = 1; m <= L; ++m) {
            const std::uint64_t a = A(m - 1, l - 1);
            auto& out = contrib[m - 1][l - 1];
            out.resize(count[l - 1] * width);
            for (std::uint64_t idx = 0; idx < count[l - 1]; ++idx)
                for (std::size_t j = 0; j < width; ++j)
                    out[idx * width + j] = static_cast<ffla::Elem>((a * flat[idx][j]) % g);
        }
    }

    std::vector<std::vector<std::uint64_t>> packed(L, std::vector<std::uint64_t>(states_));
    std::vector<std::uint64_t> digit(L, 0);
    std::vector<ffla::Elem> acc(width);
    for (std::uint64_t st = 0; st < states_; ++st) {
        for (std::size_t m = 0; m < L; ++m) {
            std::fill(acc.begin(), acc.end(), 0);
            for (std::size_t l = 0; l < L; ++l) {
                const ffla::Elem* c = contrib[m][l].data() + digit[l] * width;
                for (std::size_t j = 0; j < width; ++j) acc[j] += c[j];
            }
            std::uint64_t key = 0;
            for (std::size_t j = 0; j < width; ++j) key = key * g + acc[j] % g;
            packed[m][st] = key;
        }
        for (std::size_t l = 0; l < L; ++l) {
            if (++digit[l] < count[l]) break;
            digit[l] = 0;
        }
    }

    ids_.resize(L);
    id_count_.resize(L);
    for (std::size_t m = 0; m < L; ++m) {
        ids_[m] = densify(packed[m], &id_count_[m]);
        std::vector<std::uint64_t>().swap(packed[m]);
    }
}

std::vector<std::uint32_t> EntropyOracle::combined_ids(Mask s, std::uint32_t* distinct) const {
    std::vector<std::uint32_t> cur;
    std::uint32_t n = 1;
    bool first = true;
    for (std::size_t m = 0; m < ids_.size(); ++m) {
        if (!(s & (Mask{1} << m))) continue;
        if (first) {
            cur = ids_[m];
            n = id_count_[m];
            first = false;
            continue;
        }
        std::vector<std::uint64_t> keys(cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) {
            keys[i] = std::uint64_t{cur[i]} * id_count_[m] + ids_[m][i];
        }
        cur = densify(keys, &n);
    }
    if (first) cur.assign(states_, 0);
    *distinct = n;
    return cur;
}

double EntropyOracle::joint_entropy(Mask s) const {
    if (s == 0) return 0.0;
    std::uint32_t n = 0;
    const auto ids = combined_ids(s, &n);
    std::vector<std::uint64_t> counts(n, 0);
    for (auto id : ids) ++counts[id];
    const long double N = static_cast<long double>(states_);
    return static_cast<double>(std::log2(N) - plogp_sum(counts) / N);
}

double EntropyOracle::conditional_entropy(Mask target, Mask given) const {
    if (given == 0) return joint_entropy(target);
    std::uint32_t nt = 0, ng = 0;
    const auto tid = combined_ids(target, &nt);
    const auto gid = combined_ids(given, &ng);
    std::vector<std::uint64_t> keys(states_);
    for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = std::uint64_t{gid[i]} * nt + tid[i];
    std::sort(keys.begin(), keys.end());

    long double total = 0.0L;
    std::size_t i = 0;
    while (i < keys.size()) {
        const std::uint64_t group = keys[i] / nt;
        std::uint64_t group_size = 0;
        std::vector<std::uint64_t> counts;
        while (i < keys.size() && keys[i] / nt == group) {
            std::size_t j = i;
            while (j < keys.size() && keys[j] == keys[i]) ++j;
            counts.push_back(j - i);
            group_size += j - i;
            i = j;
        }
        const long double ng_l = static_cast<long double>(group_size);
        total += ng_l * std::log2(ng_l) - plogp_sum(counts);
    }
    return static_cast<double>(total / static_cast<long double>(states_));
}

RateFunction EntropyOracle::sw_rate_function() const {
    const std::size_t L = ids_.size();
    const Mask full = full_mask(L);
    std::vector<double> H(std::size_t{1} << L, 0.0);
    for (Mask s = 1; s <= full; ++s) H[s] = joint_entropy(s);
    RateFunction h{L, std::vector<double>(H.size(), 0.0)};
    for (Mask s = 1; s <= full; ++s) h.f[s] = H[full] - H[full & ~s];
    return h;
}

RateFunction sw_rate_function(const ffla::FieldMatrix& A, const ChainSpec& chain, const DitherSpec& d) {
    return EntropyOracle(A, chain, d).sw_rate_function();
}

RegionComparison compare_regions(const ffla::FieldMatrix& A, const ChainSpec& chain,
                                 const DitherSpec& d, double tol) {
    RegionComparison rc;
    rc.f = rank_rate_function(A, chain);
    rc.h = sw_rate_function(A, chain, d);
    const Mask full = full_mask(chain.sources());
    rc.all_equal = true;
    for (Mask s = 0; s <= full; ++s) {
        rc.gap.push_back(rc.f(s) - rc.h(s));
        rc.equal.push_back(std::abs(rc.gap.back()) <= tol);
        rc.all_equal = rc.all_equal && rc.equal.back();
    }
    double total = 0.0;
    for (double r : source_rates(chain)) total += r;
    rc.total_equal = std::abs(rc.f(full) - total) <= tol && std::abs(rc.h(full) - total) <= tol;
    rc.regime_no_dither = !d.present();
    rc.regime_two_sources = chain.sources() == 2;
    rc.regime_common_shaping = true;
    for (const auto& gap : shaping_gap_sets(chain))
        for (Index k = gap.lo; k <= gap.hi; ++k)
            if (chain.rate(k) != 0.0) rc.regime_common_shaping = false;
    return rc;
}

} // namespace gccf

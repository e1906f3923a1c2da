#include "gccf/optimize.hpp"

#include "gccf/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace gccf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr ffla::Elem kLargePrime = 2147483647u;

Mask bit(Index m) { return Mask{1} << (m - 1); }

// Rank over F_gamma of the rows in `rows` restricted to the columns in `cols` (0-based masks).
int rank_mod(const ffla::IntMatrix& A, Mask rows, Mask cols, std::uint64_t gamma) {
    constexpr std::size_t kMax = 32;
    std::array<std::uint64_t, kMax * kMax> m;
    const auto g = static_cast<std::int64_t>(gamma);
    std::size_t nr = 0, nc = 0;
    for (std::size_t r = 0; r < A.size(); ++r) {
        if (!(rows >> r & 1u)) continue;
        nc = 0;
        for (std::size_t c = 0; c < A[r].size(); ++c) {
            if (!(cols >> c & 1u)) continue;
            m[nr * kMax + nc++] = static_cast<std::uint64_t>(((A[r][c] % g) + g) % g);
        }
        ++nr;
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < nc && rank < nr; ++c) {
        std::size_t piv = rank;
        while (piv < nr && m[piv * kMax + c] == 0) ++piv;
        if (piv == nr) continue;
        if (piv != rank) {
            for (std::size_t j = c; j < nc; ++j) std::swap(m[piv * kMax + j], m[rank * kMax + j]);
        }
        std::uint64_t* pr = &m[rank * kMax];
        const std::uint64_t inv = ffla::mod_inverse(static_cast<ffla::Elem>(pr[c]), static_cast<ffla::Elem>(gamma));
        for (std::size_t j = c; j < nc; ++j) pr[j] = pr[j] * inv % gamma;
        for (std::size_t i = rank + 1; i < nr; ++i) {
            std::uint64_t* pi = &m[i * kMax];
            const std::uint64_t f = pi[c];
            if (f == 0) continue;
            for (std::size_t j = c; j < nc; ++j) pi[j] = (pi[j] + (gamma - f) * pr[j]) % gamma;
        }
        ++rank;
    }
    return static_cast<int>(rank);
}

Mask sources_mask(const IndexSet& s) {
    Mask out = 0;
    for (Index l : s) out |= bit(l);
    return out;
}

// ranks[rowmask][k-1] = rank of A(rowmask, L_k) over F_gamma.
std::vector<std::vector<int>> rank_table(const ffla::IntMatrix& A, const ChainSpec& chain) {
    const std::size_t L = chain.sources();
    const auto gamma = field_for(A);
    std::vector<std::vector<int>> t(std::size_t{1} << L, std::vector<int>(chain.blocks(), 0));
    for (Index k = 1; k <= chain.blocks(); ++k) {
        const Mask cols = sources_mask(chain.L_of(k));
        for (Mask s = 1; s <= full_mask(L); ++s) t[s][k - 1] = rank_mod(A, s, cols, gamma);
    }
    return t;
}

RankCoefficients coefficients_from(const std::vector<std::vector<int>>& t, const ChainSpec& chain) {
    const std::size_t L = chain.sources();
    const Mask full = full_mask(L);
    RankCoefficients rc{L, chain.blocks(), std::vector<std::vector<int>>(t.size())};
    for (Mask s = 0; s <= full; ++s) {
        rc.c[s].resize(chain.blocks());
        for (std::size_t k = 0; k < chain.blocks(); ++k) rc.c[s][k] = t[full][k] - t[full & ~s][k];
    }
    return rc;
}

double beta2p(const std::vector<double>& beta, const std::vector<double>& p, Index l) {
    return beta[l - 1] * beta[l - 1] * p[l - 1];
}

std::vector<double> second_hop_caps(const NetworkInstance& inst) {
    std::vector<double> caps;
    for (double q : inst.p2) caps.push_back(0.5 * std::log2(1.0 + q));
    return caps;
}

// Gap rates in the chain's shaping order; false when beta^2 p contradicts that order.
bool gap_rates_for(const ChainSpec& chain, const std::vector<double>& beta, const std::vector<double>& p,
                   std::vector<double>& out) {
    const auto order = shaping_order(chain);
    out.clear();
    for (std::size_t j = 0; j + 1 < order.size(); ++j) {
        const double hi = beta2p(beta, p, order[j]), lo = beta2p(beta, p, order[j + 1]);
        if (hi < lo * (1.0 - 1e-12)) return false;
        out.push_back(hi <= lo ? 0.0 : 0.5 * std::log2(hi / lo));
    }
    return true;
}

std::vector<double> slice(const std::vector<double>& x, std::size_t from, std::size_t n) {
    return {x.begin() + static_cast<std::ptrdiff_t>(from), x.begin() + static_cast<std::ptrdiff_t>(from + n)};
}

} // namespace

void NetworkInstance::validate() const {
    const std::size_t L = sources();
    if (L == 0 || L > 16) throw Error(ErrorCode::InvalidArgument, "network needs 1 to 16 sources");
    if (H.size() != L || p2.size() != L) throw Error(ErrorCode::InvalidArgument, "H and p2 must have L relays");
    for (const auto& row : H) {
        if (row.size() != L) throw Error(ErrorCode::InvalidArgument, "H must be L x L");
        for (double h : row) {
            if (!std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "channel gains must be finite");
        }
    }
    for (double v : P) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "powers must be positive");
    }
    for (double v : p2) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "relay SNRs must be >= 0");
    }
    if (!(beta_lo > 0.0) || !(beta_hi >= beta_lo)) throw Error(ErrorCode::InvalidArgument, "beta bounds");
    if (!(p_floor > 0.0) || p_floor > 1.0) throw Error(ErrorCode::InvalidArgument, "p_floor must be in (0, 1]");
}

// ---------------------------------------------------------------- coefficient selection

Eigen::MatrixXd noise_form(const std::vector<double>& h, const std::vector<double>& p,
                           const std::vector<double>& beta) {
    const auto n = static_cast<Eigen::Index>(p.size());
    if (h.size() != p.size() || beta.size() != p.size()) {
        throw Error(ErrorCode::DimensionMismatch, "h, p and beta must have equal length");
    }
    const Eigen::VectorXd hv = Eigen::Map<const Eigen::VectorXd>(h.data(), n);
    const Eigen::VectorXd pv = Eigen::Map<const Eigen::VectorXd>(p.data(), n);
    const Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(beta.data(), n);
    const Eigen::VectorXd ph = pv.cwiseProduct(hv);
    Eigen::MatrixXd G = Eigen::MatrixXd(pv.asDiagonal()) - ph * ph.transpose() / (1.0 + hv.dot(ph));
    G = bv.asDiagonal() * G * bv.asDiagonal();
    return 0.5 * (G + G.transpose());
}

std::vector<std::vector<std::int64_t>> candidate_rows(const Eigen::MatrixXd& G, const SelectionConfig& cfg) {
    const auto n = G.rows();
    Eigen::MatrixXd M = G;
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    double jitter = 1e-12 * std::max(G.trace() / static_cast<double>(std::max<Eigen::Index>(n, 1)), 1e-300);
    while (llt.info() != Eigen::Success) {
        M = G + jitter * Eigen::MatrixXd::Identity(n, n);
        llt.compute(M);
        jitter *= 10.0;
    }
    const Eigen::MatrixXd basis = llt.matrixL().transpose();
    const auto red = lll_reduce(basis);

    std::set<std::vector<std::int64_t>> seen;
    std::vector<std::pair<double, std::vector<std::int64_t>>> out;
    auto consider = [&](const Eigen::Matrix<long long, Eigen::Dynamic, 1>& a) {
        std::vector<std::int64_t> v(a.data(), a.data() + a.size());
        const auto first = std::find_if(v.begin(), v.end(), [](std::int64_t x) { return x != 0; });
        if (first == v.end()) return;
        if (*first < 0) {
            for (auto& x : v) x = -x;
        }
        for (auto x : v) {
            if (std::llabs(x) > cfg.max_entry) return;
        }
        if (!seen.insert(v).second) return;
        Eigen::VectorXd ad(n);
        for (Eigen::Index i = 0; i < n; ++i) ad(i) = static_cast<double>(v[static_cast<std::size_t>(i)]);
        out.emplace_back(ad.dot(G * ad), std::move(v));
    };

    std::size_t combos = 1;
    for (Eigen::Index i = 0; i < n; ++i) combos *= 3;
    Eigen::Matrix<long long, Eigen::Dynamic, 1> c(n);
    for (std::size_t code = 0; code < combos; ++code) {
        std::size_t rest = code;
        for (Eigen::Index i = 0; i < n; ++i) {
            c(i) = static_cast<long long>(rest % 3) - 1;
            rest /= 3;
        }
        consider(red.U * c);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        consider(Eigen::Matrix<long long, Eigen::Dynamic, 1>::Unit(n, i));
    }
    std::sort(out.begin(), out.end());
    std::vector<std::vector<std::int64_t>> rows;
    rows.reserve(out.size());
    for (auto& [q, v] : out) rows.push_back(std::move(v));
    return rows;
}

ffla::IntMatrix select_coefficients(const NetworkInstance& inst, const std::vector<double>& beta,
                                    const std::vector<double>& p, const SelectionConfig& cfg) {
    const std::size_t L = inst.sources();
    if (beta.size() != L || p.size() != L) throw Error(ErrorCode::DimensionMismatch, "beta and p need L entries");
    std::vector<std::vector<std::vector<std::int64_t>>> cands(L);
    std::vector<double> best(L, kInf);
    for (std::size_t m = 0; m < L; ++m) {
        const auto G = noise_form(inst.H[m], p, beta);
        cands[m] = candidate_rows(G, cfg);
        if (!cands[m].empty()) {
            Eigen::VectorXd a(static_cast<Eigen::Index>(L));
            for (std::size_t i = 0; i < L; ++i) a(static_cast<Eigen::Index>(i)) = static_cast<double>(cands[m][0][i]);
            best[m] = a.dot(G * a);
        }
    }
    std::vector<std::size_t> order(L);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return best[a] < best[b]; });

    ffla::IntMatrix A(L);
    ffla::IntMatrix chosen;
    auto independent_with = [&](const std::vector<std::int64_t>& row) {
        auto trial = chosen;
        trial.push_back(row);
        return rank_mod(trial, full_mask(trial.size()), full_mask(L), kLargePrime) ==
               static_cast<int>(trial.size());
    };
    std::vector<bool> done(L, false);
    for (std::size_t m : order) {
        for (const auto& row : cands[m]) {
            if (independent_with(row)) {
                A[m] = row;
                chosen.push_back(row);
                done[m] = true;
                break;
            }
        }
    }
    for (std::size_t m : order) {
        if (done[m]) continue;
        for (std::size_t i = 0; i < L; ++i) {
            std::vector<std::int64_t> e(L, 0);
            e[i] = 1;
            if (independent_with(e)) {
                A[m] = e;
                chosen.push_back(e);
                break;
            }
        }
    }
    return A;
}

ffla::Elem field_for(const ffla::IntMatrix& A) {
    std::int64_t maxabs = 0;
    double hadamard = 1.0;
    for (const auto& row : A) {
        double norm2 = 0.0;
        for (auto v : row) {
            maxabs = std::max<std::int64_t>(maxabs, std::llabs(v));
            norm2 += static_cast<double>(v) * static_cast<double>(v);
        }
        hadamard *= std::sqrt(norm2);
    }
    const double bound = std::max(static_cast<double>(maxabs) * static_cast<double>(A.size()), std::ceil(hadamard));
    if (bound >= static_cast<double>(kLargePrime)) return kLargePrime;
    return static_cast<ffla::Elem>(ffla::next_prime(static_cast<std::uint64_t>(bound)));
}

// ---------------------------------------------------------------- sum-rate program

LpProblem build_sum_rate_lp(const ChainSpec& chain, const std::vector<double>& gap_rates,
                            const std::vector<double>& rhat, const std::vector<ForwardingRow>& forwarding,
                            const std::vector<double>& caps, const LpFamilies& fam) {
    const std::size_t L = chain.sources(), B = chain.blocks(), n = B + L;
    if (gap_rates.size() + 1 != L || rhat.size() != L || caps.size() != L) {
        throw Error(ErrorCode::DimensionMismatch, "gap rates need L-1 entries, rhat and caps L");
    }
    LpProblem lp;
    lp.variables = n;
    lp.objective.assign(n, 0.0);
    for (Index k = 1; k <= B; ++k) lp.objective[k - 1] = static_cast<double>(chain.L_of(k).size());

    if (fam.shaping) {
        const auto gaps = shaping_gap_sets(chain);
        for (std::size_t j = 0; j < gaps.size(); ++j) {
            std::vector<double> c(n, 0.0);
            for (Index k = gaps[j].lo; k <= gaps[j].hi; ++k) c[k - 1] = 1.0;
            lp.add(std::move(c), Sense::Equal, gap_rates[j]);
        }
    }
    if (fam.computation) {
        for (Index l = 1; l <= L; ++l) {
            if (!std::isfinite(rhat[l - 1])) continue;
            std::vector<double> c(n, 0.0);
            const auto K = chain.K(l);
            for (Index k = K.lo; k <= K.hi; ++k) c[k - 1] = 1.0;
            lp.add(std::move(c), Sense::LessEqual, rhat[l - 1]);
        }
    }
    if (fam.compression) {
        for (const auto& row : forwarding) {
            if (row.coef.size() != B) throw Error(ErrorCode::DimensionMismatch, "forwarding row length");
            std::vector<double> c(n, 0.0);
            for (std::size_t k = 0; k < B; ++k) c[k] = -row.coef[k];
            for (Index m = 1; m <= L; ++m) {
                if (row.receivers & bit(m)) c[B + m - 1] = 1.0;
            }
            lp.add(std::move(c), Sense::GreaterEqual, 0.0);
        }
    }
    if (fam.second_hop) {
        for (Index m = 1; m <= L; ++m) {
            if (!std::isfinite(caps[m - 1])) continue;
            std::vector<double> c(n, 0.0);
            c[B + m - 1] = 1.0;
            lp.add(std::move(c), Sense::LessEqual, caps[m - 1]);
        }
    }
    return lp;
}

std::vector<ForwardingRow> region_rows(const RankCoefficients& rc) {
    std::vector<ForwardingRow> rows;
    for (Mask s = 1; s <= full_mask(rc.L); ++s) {
        rows.push_back({s, std::vector<double>(rc.c[s].begin(), rc.c[s].end())});
    }
    return rows;
}

IndexSet power_order(const std::vector<double>& beta, const std::vector<double>& p) {
    if (beta.size() != p.size()) throw Error(ErrorCode::DimensionMismatch, "beta and p must have equal length");
    IndexSet order(p.size());
    std::iota(order.begin(), order.end(), Index{1});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return beta2p(beta, p, a) > beta2p(beta, p, b); });
    return order;
}

LpProblem build_lp(const NetworkInstance& inst, const std::vector<double>& beta, const std::vector<double>& p,
                   const std::vector<Index>& pi, const ffla::IntMatrix& A, const LpFamilies& fam) {
    inst.validate();
    const std::size_t L = inst.sources();
    const auto chain = ChainSpec::structure(L, pi);
    if (A.size() != L || beta.size() != L || p.size() != L) {
        throw Error(ErrorCode::DimensionMismatch, "A, beta and p must match the network size");
    }
    std::vector<double> gaps;
    if (!gap_rates_for(chain, beta, p, gaps)) {
        throw Error(ErrorCode::OrderMismatch, "chain shaping order contradicts the beta^2 p ordering");
    }
    const auto rhat = computation_rates(inst.H, p, beta, A);
    const auto rc = coefficients_from(rank_table(A, chain), chain);
    return build_sum_rate_lp(chain, gaps, rhat, region_rows(rc), second_hop_caps(inst), fam);
}

// ---------------------------------------------------------------- algorithm and schemes

std::string_view to_string(Scheme s) noexcept {
    switch (s) {
    case Scheme::GccfFull: return "gccf-full";
    case Scheme::GccfS: return "gccf-s";
    case Scheme::Ccf: return "ccf";
    case Scheme::Cf: return "cf";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    for (auto s : {Scheme::GccfFull, Scheme::GccfS, Scheme::Ccf, Scheme::Cf}) {
        if (to_string(s) == name) return s;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

std::vector<std::vector<Index>> separable_chains(const IndexSet& shaping) {
    const std::size_t L = shaping.size();
    std::vector<std::vector<Index>> out;
    std::vector<Index> coding(L);
    std::iota(coding.begin(), coding.end(), Index{1});
    do {
        std::vector<Index> pi(2 * L);
        for (std::size_t j = 0; j < L; ++j) pi[2 * (shaping[j] - 1)] = j + 1;
        for (std::size_t l = 0; l < L; ++l) pi[2 * l + 1] = L + coding[l];
        out.push_back(std::move(pi));
    } while (std::next_permutation(coding.begin(), coding.end()));
    return out;
}

std::vector<std::vector<Index>> all_chains(std::size_t L) {
    std::vector<std::vector<Index>> out;
    std::vector<Index> pi(2 * L);
    std::iota(pi.begin(), pi.end(), Index{1});
    do {
        bool ok = true;
        for (std::size_t l = 0; l < L && ok; ++l) ok = pi[2 * l] < pi[2 * l + 1];
        if (ok) out.push_back(pi);
    } while (std::next_permutation(pi.begin(), pi.end()));
    return out;
}

namespace {

// Moves the (beta, p) pairs so that the j-th largest beta^2 p lands on the j-th coarsest shaping lattice of pi.
void reorder_for(const ChainSpec& chain, std::vector<double>& beta, std::vector<double>& p) {
    const auto have = power_order(beta, p);
    const auto want = shaping_order(chain);
    auto b = beta, q = p;
    for (std::size_t j = 0; j < want.size(); ++j) {
        b[want[j] - 1] = beta[have[j] - 1];
        q[want[j] - 1] = p[have[j] - 1];
    }
    beta = std::move(b);
    p = std::move(q);
}

SchemePoint point_from(const LpResult& r, const ChainSpec& chain, const ffla::IntMatrix& A,
                       const std::vector<double>& beta, const std::vector<double>& p) {
    SchemePoint pt;
    pt.sum_rate = r.value;
    pt.pi = chain.pi();
    pt.A = A;
    pt.beta = beta;
    pt.p = p;
    pt.block_rates = slice(r.x, 0, chain.blocks());
    pt.relay_rates = slice(r.x, chain.blocks(), chain.sources());
    return pt;
}

// Blocks [1, kmax(m)] where kmax is the finest block touching a source with a nonzero coefficient.
std::vector<ForwardingRow> cf_rows(const ffla::IntMatrix& A, const ChainSpec& chain) {
    const std::size_t L = chain.sources();
    std::vector<ForwardingRow> rows;
    for (Index m = 1; m <= L; ++m) {
        Index kmax = 0;
        for (Index k = 1; k <= chain.blocks(); ++k) {
            for (Index l : chain.L_of(k)) {
                if (A[m - 1][l - 1] != 0) kmax = k;
            }
        }
        std::vector<double> c(chain.blocks(), 0.0);
        for (Index k = 1; k <= kmax; ++k) c[k - 1] = 1.0;
        rows.push_back({bit(m), std::move(c)});
    }
    return rows;
}

// One row set per weight order: receiver m forwards the contiguous hull of the blocks it is charged with.
std::vector<std::pair<IndexSet, std::vector<ForwardingRow>>> ccf_row_sets(const std::vector<std::vector<int>>& t,
                                                                         const ChainSpec& chain) {
    const std::size_t L = chain.sources();
    std::vector<std::pair<IndexSet, std::vector<ForwardingRow>>> out;
    std::set<std::vector<std::pair<Index, Index>>> seen;
    IndexSet order(L);
    std::iota(order.begin(), order.end(), Index{1});
    do {
        std::vector<std::pair<Index, Index>> hulls(L, {0, 0});
        for (Index k = 1; k <= chain.blocks(); ++k) {
            Mask tail = 0;
            std::vector<int> tail_rank(L + 1, 0);
            for (std::size_t i = L; i >= 1; --i) {
                tail |= bit(order[i - 1]);
                tail_rank[i - 1] = t[tail][k - 1];
            }
            for (std::size_t i = 1; i <= L; ++i) {
                if (tail_rank[i - 1] != tail_rank[i] + 1) continue;
                auto& h = hulls[order[i - 1] - 1];
                if (h.first == 0) h.first = k;
                h.second = k;
            }
        }
        if (!seen.insert(hulls).second) continue;
        std::vector<ForwardingRow> rows;
        for (Index m = 1; m <= L; ++m) {
            std::vector<double> c(chain.blocks(), 0.0);
            const auto [lo, hi] = hulls[m - 1];
            for (Index k = lo; lo != 0 && k <= hi; ++k) c[k - 1] = 1.0;
            rows.push_back({bit(m), std::move(c)});
        }
        out.emplace_back(order, std::move(rows));
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

} // namespace

Algorithm1Result algorithm1(const NetworkInstance& inst, const std::vector<Index>& pi,
                            const std::vector<double>& beta, const std::vector<double>& p) {
    inst.validate();
    const std::size_t L = inst.sources();
    if (beta.size() != L || p.size() != L) throw Error(ErrorCode::DimensionMismatch, "beta and p need L entries");
    const auto chain = ChainSpec::structure(L, pi);
    Algorithm1Result res;
    res.beta = beta;
    res.p = p;
    reorder_for(chain, res.beta, res.p);
    for (std::size_t l = 0; l < L; ++l) {
        res.p[l] = std::clamp(res.p[l], inst.p_floor * inst.P[l], inst.P[l]);
    }
    std::vector<double> gaps;
    if (!gap_rates_for(chain, res.beta, res.p, gaps)) {
        res.diagnostic = "power budgets prevent matching the chain's shaping order";
        return res;
    }
    res.A = select_coefficients(inst, res.beta, res.p);
    res.rhat = computation_rates(inst.H, res.p, res.beta, res.A);
    const auto rc = coefficients_from(rank_table(res.A, chain), chain);
    const auto lp = build_sum_rate_lp(chain, gaps, res.rhat, region_rows(rc), second_hop_caps(inst));
    const auto r = solve_lp(lp);
    res.status = r.status;
    if (r.status != LpStatus::Optimal) {
        res.diagnostic = std::string("linear program ") + std::string(to_string(r.status));
        return res;
    }
    res.sum_rate = r.value;
    res.block_rates = slice(r.x, 0, chain.blocks());
    res.relay_rates = slice(r.x, chain.blocks(), L);
    return res;
}

SchemePoint evaluate_scheme(const NetworkInstance& inst, Scheme scheme, const std::vector<double>& beta_in,
                            const std::vector<double>& p) {
    const std::size_t L = inst.sources();
    if (beta_in.size() != L || p.size() != L) throw Error(ErrorCode::DimensionMismatch, "beta and p need L entries");
    const std::vector<double> beta =
        scheme == Scheme::Ccf || scheme == Scheme::Cf ? std::vector<double>(L, 1.0) : beta_in;
    const auto caps = second_hop_caps(inst);

    SchemePoint best;
    best.beta = beta;
    best.p = p;
    bool have = false;
    auto offer = [&](const LpResult& r, const ChainSpec& chain, const ffla::IntMatrix& A,
                     const std::vector<double>& b, const std::vector<double>& q, const IndexSet& pi_alpha) {
        if (r.status != LpStatus::Optimal) return;
        if (have && !(r.value > best.sum_rate)) return;
        best = point_from(r, chain, A, b, q);
        best.pi_alpha = pi_alpha;
        have = true;
    };

    if (scheme == Scheme::GccfFull) {
        std::map<IndexSet, std::tuple<std::vector<double>, std::vector<double>, ffla::IntMatrix>> by_order;
        for (const auto& pi : all_chains(L)) {
            const auto chain = ChainSpec::structure(L, pi);
            const auto order = shaping_order(chain);
            auto it = by_order.find(order);
            if (it == by_order.end()) {
                auto b = beta, q = p;
                reorder_for(chain, b, q);
                for (std::size_t l = 0; l < L; ++l) q[l] = std::clamp(q[l], inst.p_floor * inst.P[l], inst.P[l]);
                auto A = select_coefficients(inst, b, q);
                it = by_order.emplace(order, std::make_tuple(std::move(b), std::move(q), std::move(A))).first;
            }
            const auto& [b, q, A] = it->second;
            std::vector<double> gaps;
            if (!gap_rates_for(chain, b, q, gaps)) continue;
            const auto rhat = computation_rates(inst.H, q, b, A);
            const auto rc = coefficients_from(rank_table(A, chain), chain);
            offer(solve_lp(build_sum_rate_lp(chain, gaps, rhat, region_rows(rc), caps)), chain, A, b, q, {});
        }
        if (!have) best.sum_rate = 0.0;
        return best;
    }

    const auto A = select_coefficients(inst, beta, p);
    const auto rhat = computation_rates(inst.H, p, beta, A);
    best.A = A;
    for (const auto& pi : separable_chains(power_order(beta, p))) {
        const auto chain = ChainSpec::structure(L, pi);
        std::vector<double> gaps;
        if (!gap_rates_for(chain, beta, p, gaps)) continue;
        if (scheme == Scheme::Cf) {
            offer(solve_lp(build_sum_rate_lp(chain, gaps, rhat, cf_rows(A, chain), caps)), chain, A, beta, p, {});
            continue;
        }
        const auto t = rank_table(A, chain);
        if (scheme == Scheme::GccfS) {
            const auto rc = coefficients_from(t, chain);
            offer(solve_lp(build_sum_rate_lp(chain, gaps, rhat, region_rows(rc), caps)), chain, A, beta, p, {});
            continue;
        }
        for (const auto& [order, rows] : ccf_row_sets(t, chain)) {
            offer(solve_lp(build_sum_rate_lp(chain, gaps, rhat, rows, caps)), chain, A, beta, p, order);
        }
    }
    if (!have) best.sum_rate = 0.0;
    return best;
}

OptimizationResult optimize_sum_rate(const NetworkInstance& inst, Scheme scheme, const OptimizeConfig& cfg) {
    inst.validate();
    const std::size_t L = inst.sources();
    const bool with_beta = scheme == Scheme::GccfFull || scheme == Scheme::GccfS;

    std::vector<std::pair<double, double>> bounds;
    if (with_beta) {
        for (std::size_t l = 0; l < L; ++l) bounds.emplace_back(inst.beta_lo, inst.beta_hi);
    }
    for (std::size_t l = 0; l < L; ++l) bounds.emplace_back(inst.p_floor * inst.P[l], inst.P[l]);

    auto split = [&](const std::vector<double>& x) {
        std::vector<double> beta(L, 1.0);
        if (with_beta) beta.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(L));
        return std::make_pair(beta, slice(x, with_beta ? L : 0, L));
    };

    DeConfig de = cfg.de;
    for (const auto& [b, q] : cfg.warm_starts) {
        if (q.size() != L || (with_beta && b.size() != L)) {
            throw Error(ErrorCode::DimensionMismatch, "warm start needs L entries");
        }
        std::vector<double> x;
        if (with_beta) x = b;
        x.insert(x.end(), q.begin(), q.end());
        de.initial.insert(de.initial.begin(), std::move(x));
    }
    std::reverse(de.initial.begin(), de.initial.begin() + static_cast<std::ptrdiff_t>(cfg.warm_starts.size()));

    OptimizationResult res;
    res.scheme = scheme;
    bool have = false;
    auto f = [&](const std::vector<double>& x) {
        const auto [beta, p] = split(x);
        auto pt = evaluate_scheme(inst, scheme, beta, p);
        ++res.evaluations;
        const double value = pt.sum_rate;
        if (!have || value > res.best.sum_rate) {
            res.best = std::move(pt);
            have = true;
        }
        return -value;
    };
    (void)differential_evolution(f, bounds, de);
    return res;
}

} // namespace gccf

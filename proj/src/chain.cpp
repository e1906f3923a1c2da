#include "gccf/chain.hpp"

#include "gccf/error.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace gccf {

void validate_permutation(std::size_t L, const std::vector<Index>& pi) {
    if (L == 0) throw Error(ErrorCode::InvalidPermutation, "L must be positive");
    if (pi.size() != 2 * L) {
        throw Error(ErrorCode::InvalidPermutation,
                    "pi must have 2L=" + std::to_string(2 * L) + " entries");
    }
    std::vector<bool> seen(2 * L + 1, false);
    for (Index v : pi) {
        if (v < 1 || v > 2 * L || seen[v]) {
            throw Error(ErrorCode::InvalidPermutation, "pi is not a bijection on 1..2L");
        }
        seen[v] = true;
    }
    for (Index l = 1; l <= L; ++l) {
        if (pi[2 * l - 2] >= pi[2 * l - 1]) {
            throw Error(ErrorCode::InvalidPermutation,
                        "shaping lattice of source " + std::to_string(l) +
                            " is not coarser than its coding lattice");
        }
    }
}

ChainSpec::ChainSpec(std::size_t L, std::vector<Index> pi) : L_(L), pi_(std::move(pi)) {
    validate_permutation(L_, pi_);
    block_sources_.resize(blocks());
    for (Index k = 1; k <= blocks(); ++k) {
        for (Index l = 1; l <= L_; ++l) {
            if (K(l).contains(k)) block_sources_[k - 1].push_back(l);
        }
    }
}

ChainSpec ChainSpec::symbolic(std::size_t L, std::vector<Index> pi, std::vector<std::size_t> dims,
                              ffla::Elem gamma) {
    ChainSpec c(L, std::move(pi));
    if (dims.size() != c.blocks()) {
        throw Error(ErrorCode::LengthMismatch, "dims needs 2L-1 entries");
    }
    if (gamma >= ffla::kMaxModulus || !ffla::is_prime(gamma)) {
        throw Error(ErrorCode::NonPrimeModulus, "gamma=" + std::to_string(gamma));
    }
    c.gamma_ = gamma;
    const double bits = std::log2(static_cast<double>(gamma));
    for (auto d : dims) c.rates_.push_back(static_cast<double>(d) * bits);
    c.dims_ = std::move(dims);
    return c;
}

ChainSpec ChainSpec::continuous(std::size_t L, std::vector<Index> pi, std::vector<double> rates) {
    ChainSpec c(L, std::move(pi));
    if (rates.size() != c.blocks()) {
        throw Error(ErrorCode::LengthMismatch, "rates needs 2L-1 entries");
    }
    for (double r : rates) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw Error(ErrorCode::InvalidArgument, "block rates must be finite and nonnegative");
        }
    }
    c.rates_ = std::move(rates);
    c.dims_.assign(c.blocks(), 0);
    return c;
}

ChainSpec ChainSpec::structure(std::size_t L, std::vector<Index> pi) {
    return continuous(L, pi, std::vector<double>(2 * L - 1, 0.0));
}

ffla::Elem ChainSpec::gamma() const {
    if (!gamma_) throw Error(ErrorCode::InvalidArgument, "chain has no field structure");
    return *gamma_;
}

std::size_t ChainSpec::message_length(Index l) const noexcept {
    std::size_t n = 0;
    const auto r = K(l);
    for (Index k = r.lo; k <= r.hi; ++k) n += dims_[k - 1];
    return n;
}

std::vector<double> source_rates(const ChainSpec& c) {
    std::vector<double> r(c.sources(), 0.0);
    for (Index l = 1; l <= c.sources(); ++l) {
        const auto K = c.K(l);
        for (Index k = K.lo; k <= K.hi; ++k) r[l - 1] += c.rate(k);
    }
    return r;
}

bool is_separable(const ChainSpec& c) {
    Index max_s = 0, min_c = 2 * c.sources() + 1;
    for (Index l = 1; l <= c.sources(); ++l) {
        max_s = std::max(max_s, c.shaping_index(l));
        min_c = std::min(min_c, c.coding_index(l));
    }
    return max_s < min_c;
}

IndexSet shaping_order(const ChainSpec& c) {
    IndexSet order(c.sources());
    std::iota(order.begin(), order.end(), Index{1});
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return c.shaping_index(a) < c.shaping_index(b); });
    return order;
}

std::vector<BlockRange> shaping_gap_sets(const ChainSpec& c) {
    const auto order = shaping_order(c);
    std::vector<BlockRange> gaps;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        gaps.push_back({c.shaping_index(order[i]), c.shaping_index(order[i + 1]) - 1});
    }
    return gaps;
}

ChainSpec parse_chain(const std::string& content) {
    std::map<std::string, std::string> kv;
    std::istringstream in(content);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = text::strip_comment(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key(text::trim(std::string_view(body).substr(0, eq)));
        const std::string value(text::trim(std::string_view(body).substr(eq + 1)));
        if (key != "L" && key != "gamma" && key != "pi" && key != "dims" && key != "rates") {
            throw Error(ErrorCode::ParseError, "unknown key '" + key + "'");
        }
        if (kv.count(key)) throw Error(ErrorCode::ParseError, "duplicate key '" + key + "'");
        kv[key] = value;
    }
    if (!kv.count("L") || !kv.count("pi")) throw Error(ErrorCode::ParseError, "L and pi are required");
    const auto L = text::parse_number<std::size_t>(kv["L"]);
    auto pi = text::parse_list<Index>(kv["pi"]);
    if (kv.count("dims") && kv.count("rates")) {
        throw Error(ErrorCode::ParseError, "give either dims or rates, not both");
    }
    if (kv.count("dims")) {
        if (!kv.count("gamma")) throw Error(ErrorCode::ParseError, "dims requires gamma");
        return ChainSpec::symbolic(L, std::move(pi), text::parse_list<std::size_t>(kv["dims"]),
                                   text::parse_number<ffla::Elem>(kv["gamma"]));
    }
    if (kv.count("rates")) {
        if (kv.count("gamma")) throw Error(ErrorCode::ParseError, "gamma applies only to dims");
        return ChainSpec::continuous(L, std::move(pi), text::parse_list<double>(kv["rates"]));
    }
    throw Error(ErrorCode::ParseError, "one of dims or rates is required");
}

ChainSpec load_chain(const std::string& path) { return parse_chain(text::read_file(path)); }

std::string format_chain(const ChainSpec& c) {
    std::ostringstream os;
    os << "L=" << c.sources() << '\n';
    if (c.is_symbolic()) os << "gamma=" << c.gamma() << '\n';
    os << "pi=";
    for (std::size_t i = 0; i < c.pi().size(); ++i) os << (i ? "," : "") << c.pi()[i];
    os << '\n';
    if (c.is_symbolic()) {
        os << "dims=";
        for (std::size_t i = 0; i < c.dims().size(); ++i) os << (i ? "," : "") << c.dims()[i];
    } else {
        os << "rates=";
        for (std::size_t i = 0; i < c.rates().size(); ++i) os << (i ? "," : "") << c.rates()[i];
    }
    os << '\n';
    return os.str();
}

} // namespace gccf

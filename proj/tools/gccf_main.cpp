// gccf: command-line front end for the codec, region and optimizer modules.

#include "gccf/bench.hpp"
#include "gccf/chain.hpp"
#include "gccf/codeword.hpp"
#include "gccf/compress.hpp"
#include "gccf/error.hpp"
#include "gccf/io.hpp"
#include "gccf/optimize.hpp"
#include "gccf/regions.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace {

using namespace gccf;

struct CodecArgs {
    std::string chain, matrix, messages, blocks, out;
    std::string dither, order;
    bool ccf = false;
};

DitherSpec parse_dither(const std::string& s, std::size_t L) {
    if (s.empty()) return DitherSpec::absent();
    DitherSpec d;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            std::size_t used = 0;
            d.keys.push_back(std::stoull(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad dither key '" + tok + "'");
        }
    }
    if (d.keys.size() != L) throw Error(ErrorCode::LengthMismatch, "one dither key per source required");
    return d;
}

IndexSet parse_order(const std::string& s, std::size_t L) {
    IndexSet order(L);
    std::iota(order.begin(), order.end(), Index{1});
    if (!s.empty()) {
        order.clear();
        std::stringstream in(s);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            try {
                order.push_back(std::stoul(tok));
            } catch (const std::exception&) {
                throw Error(ErrorCode::ParseError, "bad order entry '" + tok + "'");
            }
        }
    }
    validate_order(order, L);
    return order;
}

void emit(const std::string& out, const std::string& body) {
    if (out.empty() || out == "-") {
        std::cout << body;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + out);
    f << body;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

template <typename T>
std::string join(const std::vector<T>& v, const char* sep = ",") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        if constexpr (std::is_floating_point_v<T>) s += fmt(v[i]);
        else s += std::to_string(v[i]);
    }
    return s;
}

std::string join_matrix(const ffla::IntMatrix& A) {
    std::string s;
    for (std::size_t i = 0; i < A.size(); ++i) s += (i ? ";" : "") + join(A[i]);
    return s;
}

ffla::FieldMatrix load_matrix(const std::string& path, const ChainSpec& chain) {
    const auto A = io::parse_int_matrix(io::read_file(path));
    if (A.size() != chain.sources() || A[0].size() != chain.sources()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix must be L x L");
    }
    return ffla::reduce_mod(A, chain.gamma());
}

void run_compress(const CodecArgs& a) {
    const auto chain = load_chain(a.chain);
    const auto A = load_matrix(a.matrix, chain);
    const auto msgs = io::parse_messages(io::read_file(a.messages), chain.gamma());
    const auto d = parse_dither(a.dither, chain.sources());
    const auto p = plan(A, parse_order(a.order, chain.sources()), chain);
    std::vector<CompressedWord> words;
    for (const auto& v : compute(A, apply_dither(split(msgs, chain), d, chain), chain)) {
        words.push_back(a.ccf ? compress_ccf(v, p) : compress(v, p));
    }
    emit(a.out, io::format_blocks(words));
}

void run_recover(const CodecArgs& a) {
    const auto chain = load_chain(a.chain);
    const auto A = load_matrix(a.matrix, chain);
    const auto words = io::parse_blocks(io::read_file(a.blocks), chain.sources(), chain.gamma());
    const auto d = parse_dither(a.dither, chain.sources());
    const auto p = plan(A, parse_order(a.order, chain.sources()), chain);
    const auto s = recover(words, A, p, chain, d);
    std::vector<Vec> msgs;
    for (Index l = 1; l <= chain.sources(); ++l) msgs.push_back(recombine(s, l, chain));
    emit(a.out, io::format_messages(msgs));
}

void run_region(const CodecArgs& a) {
    const auto chain = load_chain(a.chain);
    const auto A = load_matrix(a.matrix, chain);
    const auto cmp = compare_regions(A, chain, parse_dither(a.dither, chain.sources()));
    const std::size_t L = chain.sources();
    std::string s = "mask,f,h,gap\n";
    for (Mask m = 1; m <= full_mask(L); ++m) {
        s += std::to_string(m) + "," + fmt(cmp.f(m)) + "," + fmt(cmp.h(m)) + "," + fmt(cmp.gap[m]) + "\n";
    }
    s += "\norder";
    for (Index m = 1; m <= L; ++m) s += ",f_R" + std::to_string(m);
    for (Index m = 1; m <= L; ++m) s += ",h_R" + std::to_string(m);
    s += "\n";
    IndexSet order(L);
    std::iota(order.begin(), order.end(), Index{1});
    do {
        s += join(order, "-");
        for (double r : vertex(cmp.f, order)) s += "," + fmt(r);
        for (double r : vertex(cmp.h, order)) s += "," + fmt(r);
        s += "\n";
    } while (std::next_permutation(order.begin(), order.end()));
    emit(a.out, s);
}

void run_entropy(const CodecArgs& a, Mask target, Mask given) {
    const auto chain = load_chain(a.chain);
    const auto A = load_matrix(a.matrix, chain);
    const EntropyOracle oracle(A, chain, parse_dither(a.dither, chain.sources()));
    if (target != 0) {
        emit(a.out, "H=" + fmt(oracle.conditional_entropy(target, given)) + "\n");
        return;
    }
    std::string s = "mask,joint_entropy\n";
    for (Mask m = 1; m <= full_mask(chain.sources()); ++m) {
        s += std::to_string(m) + "," + fmt(oracle.joint_entropy(m)) + "\n";
    }
    emit(a.out, s);
}

struct OptimizeArgs {
    std::string chain = "auto", mode = "gccf-s", channel, out;
    std::size_t L = 3, generations = 60;
    double p_db = 20.0, relay_fraction = 0.25;
    std::uint64_t seed = 1;
};

void run_optimize(const OptimizeArgs& a) {
    NetworkInstance inst;
    if (!a.channel.empty()) {
        std::istringstream in(io::read_file(a.channel));
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ls(line.substr(0, line.find('#')));
            std::vector<double> row;
            for (double x; ls >> x;) row.push_back(x);
            if (!row.empty()) inst.H.push_back(std::move(row));
        }
    } else {
        GaussianSampler g(a.seed);
        inst.H = sample_channel(a.L, g);
    }
    const std::size_t L = inst.H.size();
    const double P = std::pow(10.0, a.p_db / 10.0);
    inst.P.assign(L, P);
    inst.p2.assign(L, a.relay_fraction * P);
    inst.validate();

    std::string s;
    DeConfig de;
    de.seed = a.seed;
    de.generations = a.generations;
    if (a.chain == "auto") {
        OptimizeConfig cfg;
        cfg.de = de;
        const auto r = optimize_sum_rate(inst, parse_scheme(a.mode), cfg);
        const auto& b = r.best;
        s += "mode=" + std::string(to_string(r.scheme)) + "\n";
        s += "sum_rate=" + fmt(b.sum_rate) + "\n";
        s += "pi=" + join(b.pi) + "\n";
        if (!b.pi_alpha.empty()) s += "pi_alpha=" + join(b.pi_alpha) + "\n";
        s += "A=" + join_matrix(b.A) + "\n";
        s += "beta=" + join(b.beta) + "\n";
        s += "p=" + join(b.p) + "\n";
        s += "block_rates=" + join(b.block_rates) + "\n";
        s += "relay_rates=" + join(b.relay_rates) + "\n";
        s += "evaluations=" + std::to_string(r.evaluations) + "\n";
    } else {
        const auto pi = load_chain(a.chain).pi();
        std::vector<std::pair<double, double>> bounds;
        for (std::size_t l = 0; l < L; ++l) bounds.emplace_back(inst.beta_lo, inst.beta_hi);
        for (std::size_t l = 0; l < L; ++l) bounds.emplace_back(inst.p_floor * P, P);
        auto eval = [&](const std::vector<double>& x) {
            return algorithm1(inst, pi, {x.begin(), x.begin() + static_cast<std::ptrdiff_t>(L)},
                              {x.begin() + static_cast<std::ptrdiff_t>(L), x.end()});
        };
        const auto r = differential_evolution([&](const std::vector<double>& x) { return -eval(x).sum_rate; },
                                              bounds, de);
        const auto b = eval(r.x);
        s += "mode=fixed-chain\n";
        s += "sum_rate=" + fmt(b.sum_rate) + "\n";
        s += "status=" + std::string(to_string(b.status)) + "\n";
        if (!b.diagnostic.empty()) s += "diagnostic=" + b.diagnostic + "\n";
        s += "pi=" + join(pi) + "\n";
        s += "A=" + join_matrix(b.A) + "\n";
        s += "beta=" + join(b.beta) + "\n";
        s += "p=" + join(b.p) + "\n";
        s += "computation_rates=" + join(b.rhat) + "\n";
        s += "block_rates=" + join(b.block_rates) + "\n";
        s += "relay_rates=" + join(b.relay_rates) + "\n";
        s += "evaluations=" + std::to_string(r.evaluations) + "\n";
    }
    s += "H=";
    for (std::size_t m = 0; m < L; ++m) s += (m ? ";" : "") + join(inst.H[m]);
    s += "\n";
    emit(a.out, s);
}

struct SweepArgs {
    std::size_t L = 3, trials = 100, generations = 60, threads = 0;
    std::string snr = "0:2.5:30", schemes = "gccf-s,ccf,cf", out = "sweep.csv";
    std::uint64_t seed = 42;
};

void run_sweep_cmd(const SweepArgs& a) {
    SweepConfig cfg;
    cfg.L = a.L;
    cfg.snr_db = parse_snr_grid(a.snr);
    cfg.trials = a.trials;
    std::stringstream in(a.schemes);
    for (std::string tok; std::getline(in, tok, ',');) cfg.schemes.push_back(parse_scheme(tok));
    cfg.seed = a.seed;
    cfg.de.generations = a.generations;
    cfg.threads = a.threads;
    const auto r = run_sweep(cfg);
    write_sweep(r, a.out);
    std::cout << format_aggregate(r.aggregate);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized compute-compress-and-forward laboratory"};
    app.require_subcommand(1);

    CodecArgs codec;
    Mask target = 0, given = 0;
    auto add_codec = [&](CLI::App* sub, bool needs_messages, bool needs_blocks) {
        sub->add_option("--chain", codec.chain, "chain description file")->required();
        sub->add_option("--matrix", codec.matrix, "coefficient matrix file")->required();
        if (needs_messages) sub->add_option("--messages", codec.messages, "message file")->required();
        if (needs_blocks) sub->add_option("--blocks", codec.blocks, "block dump from compress")->required();
        sub->add_option("--dither-key", codec.dither, "comma-separated per-source dither keys");
        sub->add_option("--out", codec.out, "output file (default stdout)");
    };
    auto* compress_cmd = app.add_subcommand("compress", "compute and compress receiver words");
    add_codec(compress_cmd, true, false);
    compress_cmd->add_option("--order", codec.order, "receiver order, comma-separated");
    compress_cmd->add_flag("--ccf", codec.ccf, "keep the contiguous hull of each block set");
    auto* recover_cmd = app.add_subcommand("recover", "recover messages from compressed blocks");
    add_codec(recover_cmd, false, true);
    recover_cmd->add_option("--order", codec.order, "receiver order used by compress");
    auto* region_cmd = app.add_subcommand("region", "rank-based and Slepian-Wolf regions as CSV");
    add_codec(region_cmd, false, false);
    auto* entropy_cmd = app.add_subcommand("entropy", "joint or conditional entropies of receiver words");
    add_codec(entropy_cmd, false, false);
    entropy_cmd->add_option("--target", target, "receiver mask of the conditioned words");
    entropy_cmd->add_option("--given", given, "receiver mask conditioned on");

    OptimizeArgs opt;
    auto* optimize_cmd = app.add_subcommand("optimize", "sum-rate optimization on one channel draw");
    optimize_cmd->add_option("--chain", opt.chain, "'auto' for the scheme's permutation search, or a chain file");
    optimize_cmd->add_option("--l", opt.L, "number of sources (ignored with --channel)");
    optimize_cmd->add_option("--p-db", opt.p_db, "source power in dB");
    optimize_cmd->add_option("--mode", opt.mode, "gccf-full, gccf-s, ccf or cf");
    optimize_cmd->add_option("--seed", opt.seed, "seed for the channel draw and the optimizer");
    optimize_cmd->add_option("--generations", opt.generations, "differential evolution generations");
    optimize_cmd->add_option("--relay-fraction", opt.relay_fraction, "second-hop SNR as a fraction of P");
    optimize_cmd->add_option("--channel", opt.channel, "file with the L x L channel matrix");
    optimize_cmd->add_option("--out", opt.out, "output file (default stdout)");

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sum-rate sweep over SNR");
    sweep_cmd->add_option("--l", sw.L, "number of sources");
    sweep_cmd->add_option("--snr-db", sw.snr, "start:step:stop or comma list");
    sweep_cmd->add_option("--trials", sw.trials, "channel draws per SNR point");
    sweep_cmd->add_option("--schemes", sw.schemes, "comma-separated schemes");
    sweep_cmd->add_option("--seed", sw.seed, "master seed");
    sweep_cmd->add_option("--out", sw.out, "per-trial CSV; the aggregate goes next to it");
    sweep_cmd->add_option("--generations", sw.generations, "differential evolution generations");
    sweep_cmd->add_option("--threads", sw.threads, "worker threads (0 = all cores)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*compress_cmd) run_compress(codec);
        else if (*recover_cmd) run_recover(codec);
        else if (*region_cmd) run_region(codec);
        else if (*entropy_cmd) run_entropy(codec, target, given);
        else if (*optimize_cmd) run_optimize(opt);
        else if (*sweep_cmd) run_sweep_cmd(sw);
    } catch (const std::exception& e) {
        std::cerr << "gccf: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include "gccf/bench.hpp"

#include "gccf/codeword.hpp"
#include "gccf/error.hpp"
#include "text.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace gccf {

double GaussianSampler::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

double GaussianSampler::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

std::vector<std::vector<double>> sample_channel(std::size_t L, GaussianSampler& g) {
    std::vector<std::vector<double>> H(L, std::vector<double>(L));
    for (auto& row : H) {
        for (auto& h : row) h = g();
    }
    return H;
}

std::vector<double> parse_snr_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        const auto parts = text::parse_list<double>(spec, ':');
        if (parts.size() != 3) throw Error(ErrorCode::ParseError, "SNR range must be start:step:stop");
        const double start = parts[0], step = parts[1], stop = parts[2];
        if (!(step > 0.0) || stop < start) throw Error(ErrorCode::InvalidArgument, "SNR range needs step > 0, stop >= start");
        const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    } else {
        out = text::parse_list<double>(spec, ',');
    }
    if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty SNR grid");
    return out;
}

namespace {

std::uint64_t derive(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0;
    for (auto p : parts) h = mix64(h ^ mix64(p));
    return h;
}

// Rank in the dominance chain; lower schemes seed the ones above them.
int strength(Scheme s) {
    switch (s) {
    case Scheme::Cf: return 0;
    case Scheme::Ccf: return 1;
    case Scheme::GccfS: return 2;
    case Scheme::GccfFull: return 3;
    }
    return 4;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
    if (cfg.snr_db.empty()) throw Error(ErrorCode::InvalidArgument, "empty SNR grid");
    if (cfg.schemes.empty()) throw Error(ErrorCode::InvalidArgument, "no schemes requested");
    if (cfg.trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
    if (cfg.L == 0) throw Error(ErrorCode::InvalidArgument, "L must be positive");
    for (double s : cfg.snr_db) {
        if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "SNR values must be finite");
    }
    auto schemes = cfg.schemes;
    std::sort(schemes.begin(), schemes.end(), [](Scheme a, Scheme b) { return strength(a) < strength(b); });
    schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());

    const std::size_t jobs = cfg.snr_db.size() * cfg.trials;
    std::vector<std::vector<double>> values(jobs);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t job; (job = next.fetch_add(1)) < jobs;) {
            try {
                const std::size_t si = job / cfg.trials, trial = job % cfg.trials;
                GaussianSampler g(derive({cfg.seed, cfg.L, trial}));
                NetworkInstance inst;
                inst.H = sample_channel(cfg.L, g);
                const double P = std::pow(10.0, cfg.snr_db[si] / 10.0);
                inst.P.assign(cfg.L, P);
                inst.p2.assign(cfg.L, cfg.relay_snr_fraction * P);

                std::vector<double> seed_beta, seed_p;
                for (Scheme s : schemes) {
                    OptimizeConfig oc;
                    oc.de = cfg.de;
                    oc.de.seed = derive({cfg.seed, si, trial, static_cast<std::uint64_t>(s)});
                    if (!seed_p.empty()) {
                        oc.warm_starts.push_back({seed_beta.empty() ? std::vector<double>(cfg.L, 1.0) : seed_beta,
                                                  seed_p});
                    }
                    const auto r = optimize_sum_rate(inst, s, oc);
                    values[job].push_back(r.best.sum_rate);
                    seed_p = r.best.p;
                    seed_beta = r.best.beta;
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, jobs);
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    SweepResult res;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        for (std::size_t j = 0; j < schemes.size(); ++j) {
            for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
                res.rows.push_back({cfg.snr_db[si], schemes[j], trial, values[si * cfg.trials + trial][j]});
            }
        }
    }
    std::stable_sort(res.rows.begin(), res.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
        if (a.scheme != b.scheme) return to_string(a.scheme) < to_string(b.scheme);
        return a.trial < b.trial;
    });
    res.aggregate = aggregate(res.rows);
    return res;
}

std::vector<AggregateRow> aggregate(const std::vector<SweepRow>& rows) {
    std::map<std::pair<double, std::string_view>, std::vector<double>> groups;
    std::map<std::string_view, Scheme> names;
    for (const auto& r : rows) {
        groups[{r.snr_db, to_string(r.scheme)}].push_back(r.sum_rate);
        names[to_string(r.scheme)] = r.scheme;
    }
    std::vector<AggregateRow> out;
    for (const auto& [key, v] : groups) {
        const double n = static_cast<double>(v.size());
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= n;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        const double se = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        out.push_back({key.first, names[key.second], mean, se});
    }
    return out;
}

std::string aggregate_path(const std::string& out) {
    const std::string ext = ".csv";
    if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
        return out.substr(0, out.size() - ext.size()) + ".agg.csv";
    }
    return out + ".agg.csv";
}

std::string format_rows(const std::vector<SweepRow>& rows) {
    std::string s = "snr_db,scheme,trial,sum_rate_bits\n";
    for (const auto& r : rows) {
        s += format_number(r.snr_db) + "," + std::string(to_string(r.scheme)) + "," + std::to_string(r.trial) + "," +
             format_number(r.sum_rate) + "\n";
    }
    return s;
}

std::string format_aggregate(const std::vector<AggregateRow>& rows) {
    std::string s = "snr_db,scheme,mean,stderr\n";
    for (const auto& r : rows) {
        s += format_number(r.snr_db) + "," + std::string(to_string(r.scheme)) + "," + format_number(r.mean) + "," +
             format_number(r.stderr_) + "\n";
    }
    return s;
}

void write_sweep(const SweepResult& r, const std::string& out) {
    auto write = [](const std::string& path, const std::string& body) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error(ErrorCode::IoError, "cannot write " + path);
        f << body;
        if (!f) throw Error(ErrorCode::IoError, "write failed for " + path);
    };
    write(out, format_rows(r.rows));
    write(aggregate_path(out), format_aggregate(r.aggregate));
}

} // namespace gccf

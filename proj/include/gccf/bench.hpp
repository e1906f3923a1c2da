#pragma once

/**
 * @file bench.hpp
 * @brief Monte Carlo sum-rate sweeps over SNR for the relaying schemes.
 */

#include "gccf/optimize.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gccf {

/// Standard normal samples by the polar method on 53-bit uniforms; identical on every platform.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}
    double operator()();
    double uniform();

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// L x L matrix of i.i.d. N(0,1) gains, row-major draw order.
[[nodiscard]] std::vector<std::vector<double>> sample_channel(std::size_t L, GaussianSampler& g);

/// Parses "start:step:stop" (inclusive) or a comma list of dB values.
[[nodiscard]] std::vector<double> parse_snr_grid(const std::string& spec);

struct SweepConfig {
    std::size_t L = 2;
    std::vector<double> snr_db;
    std::size_t trials = 1;
    std::vector<Scheme> schemes;
    std::uint64_t seed = 1;
    double relay_snr_fraction = 0.25;  ///< p2 = fraction * P
    DeConfig de;                       ///< seed field is ignored; per-run seeds are derived
    std::size_t threads = 0;           ///< 0 uses the hardware concurrency
};

struct SweepRow {
    double snr_db;
    Scheme scheme;
    std::size_t trial;
    double sum_rate;
};

struct AggregateRow {
    double snr_db;
    Scheme scheme;
    double mean;
    double stderr_;
};

struct SweepResult {
    std::vector<SweepRow> rows;            ///< sorted by (snr, scheme, trial)
    std::vector<AggregateRow> aggregate;   ///< sorted by (snr, scheme)
};

/// Throws InvalidArgument for an empty grid, no schemes, zero trials or a non-finite SNR.
[[nodiscard]] SweepResult run_sweep(const SweepConfig& cfg);

[[nodiscard]] std::vector<AggregateRow> aggregate(const std::vector<SweepRow>& rows);

/// "sweep.csv" -> "sweep.agg.csv"; other names get ".agg.csv" appended.
[[nodiscard]] std::string aggregate_path(const std::string& out);

[[nodiscard]] std::string format_rows(const std::vector<SweepRow>& rows);
[[nodiscard]] std::string format_aggregate(const std::vector<AggregateRow>& rows);

/// Writes the per-trial CSV to `out` and the aggregate next to it. Throws IoError.
void write_sweep(const SweepResult& r, const std::string& out);

} // namespace gccf

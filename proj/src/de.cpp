#include "gccf/error.hpp"
#include "gccf/optimize.hpp"

#include <algorithm>
#include <random>

namespace gccf {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

} // namespace

DeResult differential_evolution(const Objective& f, const std::vector<std::pair<double, double>>& bounds,
                                const DeConfig& cfg) {
    const std::size_t dim = bounds.size();
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "DE needs at least one dimension");
    for (const auto& [lo, hi] : bounds) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
            throw Error(ErrorCode::InvalidArgument, "DE bounds must be finite with lo <= hi");
        }
    }
    const std::size_t np = std::max<std::size_t>(4, cfg.population ? cfg.population : 15 * dim);
    std::mt19937_64 rng(cfg.seed);

    auto clip = [&](std::vector<double>& x) {
        for (std::size_t j = 0; j < dim; ++j) x[j] = std::clamp(x[j], bounds[j].first, bounds[j].second);
    };

    std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
    for (std::size_t i = 0; i < np; ++i) {
        if (i < cfg.initial.size()) {
            if (cfg.initial[i].size() != dim) throw Error(ErrorCode::DimensionMismatch, "DE seed point");
            pop[i] = cfg.initial[i];
            clip(pop[i]);
            continue;
        }
        for (std::size_t j = 0; j < dim; ++j) {
            pop[i][j] = bounds[j].first + uniform01(rng) * (bounds[j].second - bounds[j].first);
        }
    }

    DeResult res;
    std::vector<double> fit(np);
    std::size_t best = 0;
    for (std::size_t i = 0; i < np; ++i) {
        fit[i] = f(pop[i]);
        ++res.evaluations;
        if (fit[i] < fit[best]) best = i;
    }

    std::size_t since_improvement = 0;
    std::vector<double> trial(dim);
    for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
        const double before = fit[best];
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r1, r2, r3;
            do { r1 = pick(rng, np); } while (r1 == i);
            do { r2 = pick(rng, np); } while (r2 == i || r2 == r1);
            do { r3 = pick(rng, np); } while (r3 == i || r3 == r1 || r3 == r2);
            const std::size_t jrand = pick(rng, dim);
            for (std::size_t j = 0; j < dim; ++j) {
                const bool cross = j == jrand || uniform01(rng) < cfg.CR;
                trial[j] = cross ? pop[r1][j] + cfg.F * (pop[r2][j] - pop[r3][j]) : pop[i][j];
            }
            clip(trial);
            const double ft = f(trial);
            ++res.evaluations;
            if (ft <= fit[i]) {
                pop[i] = trial;
                fit[i] = ft;
                if (ft < fit[best]) best = i;
            }
        }
        res.generations = gen + 1;
        since_improvement = fit[best] < before ? 0 : since_improvement + 1;
        if (cfg.stagnation && since_improvement >= cfg.stagnation) break;
    }
    res.x = pop[best];
    res.value = fit[best];
    return res;
}

} // namespace gccf

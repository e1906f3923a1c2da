#pragma once

/**
 * @file optimize.hpp
 * @brief Two-hop sum-rate maximization: coefficient selection by lattice
 *        reduction, the block-rate linear program, differential evolution over
 *        powers and scalings, and the permutation search per relaying scheme.
 */

#include "gccf/chain.hpp"
#include "gccf/ffla.hpp"
#include "gccf/regions.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace gccf {

struct NetworkInstance {
    std::vector<std::vector<double>> H;  ///< H[m-1][l-1]: first-hop gain from source l to relay m
    std::vector<double> P;               ///< per-source power budgets, linear
    std::vector<double> p2;              ///< per-relay second-hop SNRs, linear
    double beta_lo = 0.1;
    double beta_hi = 4.0;
    double p_floor = 1e-3;               ///< lowest searched power as a fraction of P_l

    [[nodiscard]] std::size_t sources() const noexcept { return P.size(); }
    /// Throws InvalidArgument on inconsistent sizes or nonpositive powers.
    void validate() const;
};

// ---------------------------------------------------------------- lattice reduction

using IntMatrixE = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

struct LllResult {
    Eigen::MatrixXd basis;  ///< reduced basis, columns are basis vectors
    IntMatrixE U;           ///< unimodular transform: basis = input * U
};

/// LLL reduction of the columns of `basis`. Throws DependentBasis, InvalidArgument for delta outside (0.25, 1].
[[nodiscard]] LllResult lll_reduce(const Eigen::MatrixXd& basis, double delta = 0.75);

/// Size reduction |mu_ij| <= 1/2 + tol and the Lovasz condition with slack tol.
[[nodiscard]] bool is_lll_reduced(const Eigen::MatrixXd& basis, double delta, double tol = 1e-9);

// ---------------------------------------------------------------- coefficient selection

/// G = D_beta (P - P h h^T P / (1 + h^T P h)) D_beta for one relay; a^T G a is the effective noise.
[[nodiscard]] Eigen::MatrixXd noise_form(const std::vector<double>& h, const std::vector<double>& p,
                                         const std::vector<double>& beta);

struct SelectionConfig {
    long long max_entry = 32;  ///< candidates with a larger |a_ml| are discarded
};

/// Short integer rows per relay ranked by effective noise, assembled into a full-rank matrix.
[[nodiscard]] ffla::IntMatrix select_coefficients(const NetworkInstance& inst,
                                                  const std::vector<double>& beta,
                                                  const std::vector<double>& p,
                                                  const SelectionConfig& cfg = {});

/// Candidate rows for one relay, best first (no duplicates up to sign).
[[nodiscard]] std::vector<std::vector<std::int64_t>> candidate_rows(const Eigen::MatrixXd& G,
                                                                    const SelectionConfig& cfg = {});

/// Smallest prime exceeding both max|a|*L and the Hadamard bound of A, capped below 2^31.
[[nodiscard]] ffla::Elem field_for(const ffla::IntMatrix& A);

// ---------------------------------------------------------------- linear programming

enum class Sense { LessEqual, GreaterEqual, Equal };

struct LpConstraint {
    std::vector<double> coef;
    Sense sense;
    double rhs;
};

/// maximize objective^T x subject to the constraints and x >= 0.
struct LpProblem {
    std::size_t variables = 0;
    std::vector<double> objective;
    std::vector<LpConstraint> constraints;

    void add(std::vector<double> coef, Sense sense, double rhs) {
        constraints.push_back({std::move(coef), sense, rhs});
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

[[nodiscard]] std::string_view to_string(LpStatus s) noexcept;

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> x;
    std::vector<double> duals;  ///< one per constraint; dual objective is sum duals_i * rhs_i
};

/// Dense two-phase simplex with Bland's rule; feasibility tolerance 1e-9.
[[nodiscard]] LpResult solve_lp(const LpProblem& lp);

// ---------------------------------------------------------------- sum-rate program

/// Constraint families that can be switched off to study their effect.
struct LpFamilies {
    bool shaping = true;
    bool computation = true;
    bool compression = true;
    bool second_hop = true;
};

/// One forwarding requirement: sum_{m in S} r2[m] >= sum_k coef[k-1] r_v[k].
struct ForwardingRow {
    Mask receivers;
    std::vector<double> coef;
};

/**
 * @brief Assembles the block-rate program. Variables are r_v[1..2L-1] then r2[1..L].
 *
 * @param gap_rates required total rate of each shaping gap, in shaping order
 * @param rhat per-source computation bounds; +inf drops the row
 * @param caps per-relay second-hop caps; +inf drops the row
 */
[[nodiscard]] LpProblem build_sum_rate_lp(const ChainSpec& chain, const std::vector<double>& gap_rates,
                                          const std::vector<double>& rhat,
                                          const std::vector<ForwardingRow>& forwarding,
                                          const std::vector<double>& caps, const LpFamilies& fam = {});

/// Forwarding rows of the rank-based region: one per nonempty subset.
[[nodiscard]] std::vector<ForwardingRow> region_rows(const RankCoefficients& rc);

/// Sources ordered by decreasing beta^2 p (ties by index): coarsest shaping lattice first.
[[nodiscard]] IndexSet power_order(const std::vector<double>& beta, const std::vector<double>& p);

/**
 * @brief The program for a given network point and chain.
 * @throws Error OrderMismatch if pi's shaping order disagrees with the beta^2 p order.
 */
[[nodiscard]] LpProblem build_lp(const NetworkInstance& inst, const std::vector<double>& beta,
                                 const std::vector<double>& p, const std::vector<Index>& pi,
                                 const ffla::IntMatrix& A, const LpFamilies& fam = {});

// ---------------------------------------------------------------- differential evolution

struct DeConfig {
    std::size_t population = 0;   ///< 0 means 15 * dimension
    double F = 0.8;
    double CR = 0.9;
    std::size_t generations = 60;
    std::size_t stagnation = 0;   ///< stop after this many generations without improvement; 0 disables
    std::uint64_t seed = 1;
    std::vector<std::vector<double>> initial;  ///< points placed first in the initial population
};

struct DeResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    std::size_t generations = 0;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// DE/rand/1/bin minimizing `f` over the box `bounds`; trial vectors are clipped to the box.
[[nodiscard]] DeResult differential_evolution(const Objective& f,
                                              const std::vector<std::pair<double, double>>& bounds,
                                              const DeConfig& cfg);

// ---------------------------------------------------------------- algorithm and schemes

struct Algorithm1Result {
    double sum_rate = 0.0;
    LpStatus status = LpStatus::Infeasible;
    std::string diagnostic;
    ffla::IntMatrix A;
    std::vector<double> beta;  ///< after reordering to match pi
    std::vector<double> p;
    std::vector<double> rhat;
    std::vector<double> block_rates;
    std::vector<double> relay_rates;
};

/// Reorder, select A, bound computation rates, build and solve the program. Failures give 0.
[[nodiscard]] Algorithm1Result algorithm1(const NetworkInstance& inst, const std::vector<Index>& pi,
                                          const std::vector<double>& beta, const std::vector<double>& p);

enum class Scheme { GccfFull, GccfS, Ccf, Cf };

[[nodiscard]] std::string_view to_string(Scheme s) noexcept;
/// Throws InvalidArgument for an unknown name.
[[nodiscard]] Scheme parse_scheme(std::string_view name);

/// Chain permutations searched by a scheme for a given shaping order (coarsest source first).
[[nodiscard]] std::vector<std::vector<Index>> separable_chains(const IndexSet& shaping);
[[nodiscard]] std::vector<std::vector<Index>> all_chains(std::size_t L);

struct SchemePoint {
    double sum_rate = 0.0;
    std::vector<Index> pi;
    IndexSet pi_alpha;  ///< weight order used by the single-vertex schemes
    ffla::IntMatrix A;
    std::vector<double> beta;
    std::vector<double> p;
    std::vector<double> block_rates;
    std::vector<double> relay_rates;
};

/// Best value of a scheme at a fixed (beta, p); ccf and cf force beta = 1.
[[nodiscard]] SchemePoint evaluate_scheme(const NetworkInstance& inst, Scheme scheme,
                                          const std::vector<double>& beta, const std::vector<double>& p);

struct OptimizeConfig {
    DeConfig de;
    /// Extra DE starting points as (beta, p) pairs; beta is ignored for ccf and cf.
    std::vector<std::pair<std::vector<double>, std::vector<double>>> warm_starts;
};

struct OptimizationResult {
    Scheme scheme = Scheme::GccfS;
    SchemePoint best;
    std::size_t evaluations = 0;
};

[[nodiscard]] OptimizationResult optimize_sum_rate(const NetworkInstance& inst, Scheme scheme,
                                                   const OptimizeConfig& cfg);

} // namespace gccf

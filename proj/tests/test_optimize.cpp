#include "gccf/compress.hpp"
#include "gccf/error.hpp"
#include "gccf/optimize.hpp"
#include "instances.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

using namespace gccf;

namespace {

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> r(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return r;
}

Eigen::MatrixXd random_basis(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> nd(0.0, 3.0);
    Eigen::MatrixXd b(n, n);
    do {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) b(i, j) = nd(rng);
    } while (std::abs(b.determinant()) < 1e-3);
    return b;
}

NetworkInstance random_network(std::mt19937_64& rng, std::size_t L, double P) {
    std::normal_distribution<double> nd;
    NetworkInstance inst;
    inst.H.assign(L, std::vector<double>(L));
    for (auto& row : inst.H)
        for (auto& h : row) h = nd(rng);
    inst.P.assign(L, P);
    inst.p2.assign(L, 0.25 * P);
    return inst;
}

std::vector<double> uniform_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

double form(const Eigen::MatrixXd& G, const std::vector<std::int64_t>& a) {
    Eigen::VectorXd v(G.rows());
    for (Eigen::Index i = 0; i < G.rows(); ++i) v(i) = static_cast<double>(a[static_cast<std::size_t>(i)]);
    return v.dot(G * v);
}

// Best quadratic-form value over nonzero integer rows with |a_i| <= K.
double brute_best_form(const Eigen::MatrixXd& G, int K, std::vector<std::int64_t>* arg = nullptr) {
    const auto n = static_cast<std::size_t>(G.rows());
    std::vector<std::int64_t> a(n, -K);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        if (std::any_of(a.begin(), a.end(), [](auto x) { return x != 0; })) {
            const double q = form(G, a);
            if (q < best) {
                best = q;
                if (arg) *arg = a;
            }
        }
        std::size_t i = 0;
        while (i < n && a[i] == K) a[i++] = -K;
        if (i == n) break;
        ++a[i];
    }
    return best;
}

int integer_rank(const ffla::IntMatrix& A) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(A.size()), static_cast<Eigen::Index>(A[0].size()));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(A[i][j]);
    return static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank());
}

std::vector<oracle::Row> oracle_rows(const LpProblem& lp) {
    std::vector<oracle::Row> rows;
    for (const auto& c : lp.constraints) {
        const int s = c.sense == Sense::LessEqual ? -1 : c.sense == Sense::Equal ? 0 : 1;
        rows.push_back({c.coef, s, c.rhs});
    }
    return rows;
}

double dual_objective(const LpProblem& lp, const LpResult& r) {
    double d = 0.0;
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) d += r.duals[i] * lp.constraints[i].rhs;
    return d;
}

// The two-source example: K_1 = {1,2}, K_2 = {2,3}; f({1}) = r2+r3, f({2}) = r2, f({1,2}) = r1+2r2+r3.
LpProblem example_one_lp(double cap = 1.2) {
    const auto chain = ChainSpec::structure(2, {1, 3, 2, 4});
    const std::vector<ForwardingRow> rows{{1, {0, 1, 1}}, {2, {0, 1, 0}}, {3, {1, 2, 1}}};
    return build_sum_rate_lp(chain, {0.5}, {2.0, 1.5}, rows, {cap, cap});
}

} // namespace

TEST_CASE("LLL reduces random bases and keeps the lattice") {
    std::mt19937_64 rng(11);
    for (Eigen::Index n : {2, 3, 4}) {
        for (int t = 0; t < 40; ++t) {
            const auto B = random_basis(rng, n);
            const auto r = lll_reduce(B);
            CHECK(is_lll_reduced(r.basis, 0.75));
            std::vector<std::vector<double>> mu;
            std::vector<double> norms;
            oracle::gram_schmidt(to_rows(r.basis), mu, norms);
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto ii = static_cast<std::size_t>(i);
                for (std::size_t j = 0; j < ii; ++j) CHECK(std::abs(mu[ii][j]) <= 0.5 + 1e-9);
                if (i > 0) CHECK(norms[ii] >= (0.75 - mu[ii][ii - 1] * mu[ii][ii - 1]) * norms[ii - 1] - 1e-9 * norms[ii - 1]);
            }
            CHECK((B * r.U.cast<double>() - r.basis).cwiseAbs().maxCoeff() < 1e-8);
            CHECK(std::abs(std::abs(r.U.cast<double>().determinant()) - 1.0) < 1e-9);
            if (n <= 3) {
                const double lambda1 = oracle::brute_lambda1(to_rows(B), 8);
                CHECK(r.basis.col(0).norm() <= std::pow(2.0, (static_cast<double>(n) - 1.0) / 2.0) * lambda1 + 1e-9);
            }
        }
    }
}

TEST_CASE("LLL on a skewed two-dimensional basis finds a vector of norm at most sqrt 2") {
    const double K = 1000.0;
    Eigen::MatrixXd B(2, 2);
    B << 1, 0, K, 1;
    const auto r = lll_reduce(B);
    CHECK(r.basis.col(0).norm() <= std::sqrt(2.0) * oracle::brute_lambda1(to_rows(B), 1000) + 1e-9);
    CHECK(lll_reduce(Eigen::MatrixXd::Identity(3, 3)).basis == Eigen::MatrixXd::Identity(3, 3));
}

TEST_CASE("LLL rejects dependent bases and bad delta") {
    Eigen::MatrixXd B(2, 2);
    B << 1, 2, 2, 4;
    CHECK_THROWS_AS(lll_reduce(B), Error);
    try {
        (void)lll_reduce(B);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DependentBasis);
    }
    CHECK_THROWS_AS(lll_reduce(Eigen::MatrixXd::Identity(2, 2), 0.2), Error);
}

TEST_CASE("noise form matches the scalar MMSE search") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const auto h = uniform_vec(rng, 3, -2, 2);
        const auto p = uniform_vec(rng, 3, 0.5, 50);
        const auto beta = uniform_vec(rng, 3, 0.1, 4);
        std::uniform_int_distribution<int> d(-3, 3);
        std::vector<std::int64_t> a{d(rng), d(rng), d(rng)};
        const auto G = noise_form(h, p, beta);
        CHECK(form(G, a) == doctest::Approx(oracle::mmse_noise_search(h, p, beta, a)).epsilon(1e-8));
    }
}

TEST_CASE("coefficient selection on near-identity channels picks the identity") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        NetworkInstance inst = random_network(rng, 3, 100.0);
        for (std::size_t m = 0; m < 3; ++m)
            for (std::size_t l = 0; l < 3; ++l) inst.H[m][l] = m == l ? 3.0 + inst.H[m][l] * 0.1 : 0.02 * inst.H[m][l];
        const std::vector<double> beta(3, 1.0), p(3, 100.0);
        const auto A = select_coefficients(inst, beta, p);
        for (std::size_t m = 0; m < 3; ++m) {
            std::vector<std::int64_t> best;
            (void)brute_best_form(noise_form(inst.H[m], p, beta), 4, &best);
            for (std::size_t l = 0; l < 3; ++l) {
                CHECK(std::llabs(A[m][l]) == (m == l ? 1 : 0));
                CHECK(std::llabs(best[l]) == (m == l ? 1 : 0));
            }
        }
    }
}

TEST_CASE("coefficient selection is full rank and near the brute-force optimum") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 60; ++t) {
        const std::size_t L = 2 + static_cast<std::size_t>(t % 2);
        const auto inst = random_network(rng, L, 100.0);
        const auto beta = uniform_vec(rng, L, 0.1, 4.0);
        const auto p = uniform_vec(rng, L, 1.0, 100.0);
        const auto A = select_coefficients(inst, beta, p);
        CHECK(integer_rank(A) == static_cast<int>(L));
        const auto gamma = field_for(A);
        CHECK(ffla::rank(ffla::reduce_mod(A, gamma)) == L);

        // The receiver with the smallest attainable noise is served first and gets its optimum.
        double first = std::numeric_limits<double>::infinity();
        std::size_t first_m = 0;
        for (std::size_t m = 0; m < L; ++m) {
            const double q = brute_best_form(noise_form(inst.H[m], p, beta), 8);
            if (q < first) { first = q; first_m = m; }
        }
        CHECK(form(noise_form(inst.H[first_m], p, beta), A[first_m]) <= first * (1.0 + 1e-9) + 1e-12);
        if (L == 2) {
            for (std::size_t m = 0; m < L; ++m) {
                const auto G = noise_form(inst.H[m], p, beta);
                // Best row linearly independent of the other selected row.
                const auto& other = A[1 - m];
                double best_indep = std::numeric_limits<double>::infinity();
                for (int a0 = -8; a0 <= 8; ++a0)
                    for (int a1 = -8; a1 <= 8; ++a1) {
                        if (a0 * other[1] - a1 * other[0] == 0) continue;
                        best_indep = std::min(best_indep, form(G, {a0, a1}));
                    }
                CHECK(form(G, A[m]) <= 2.0 * best_indep + 1e-9);
            }
        }
    }
}

TEST_CASE("a receiver that hears nothing picks the cheapest unit vector") {
    const std::vector<double> h{0.0, 0.0, 0.0}, p{5.0, 2.0, 9.0}, beta{1.0, 1.5, 0.5};
    const auto rows = candidate_rows(noise_form(h, p, beta));
    REQUIRE(!rows.empty());
    CHECK(rows[0] == std::vector<std::int64_t>{0, 0, 1});
}

TEST_CASE("field size keeps finite-field ranks equal to integer ranks") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> d(-6, 6);
    for (int t = 0; t < 200; ++t) {
        const std::size_t L = 2 + static_cast<std::size_t>(t % 3);
        ffla::IntMatrix A(L, std::vector<std::int64_t>(L));
        for (auto& row : A)
            for (auto& x : row) x = d(rng);
        if (std::all_of(A.begin(), A.end(), [](const auto& r) { return std::all_of(r.begin(), r.end(), [](auto x) { return x == 0; }); })) continue;
        const auto g = field_for(A);
        CHECK(ffla::is_prime(g));
        std::int64_t maxabs = 0;
        for (const auto& row : A)
            for (auto x : row) maxabs = std::max<std::int64_t>(maxabs, std::llabs(x));
        CHECK(static_cast<std::int64_t>(g) > maxabs * static_cast<std::int64_t>(L));
        CHECK(static_cast<int>(ffla::rank(ffla::reduce_mod(A, g))) == integer_rank(A));
    }
}

TEST_CASE("sum-rate program of the two-source example has optimum 2.4") {
    const auto lp = example_one_lp();
    const auto r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    // Grid oracle: second-hop rates sit at their caps, which only relaxes the lower bounds.
    double grid = -1.0;
    const double r1 = 0.5, cap = 1.2;
    for (int i = 0; i <= 300; ++i)
        for (int j = 0; j <= 300; ++j) {
            const double r2 = 0.01 * i, r3 = 0.01 * j;
            const bool ok = r1 + r2 <= 2.0 + 1e-12 && r2 + r3 <= 1.5 + 1e-12 && r2 + r3 <= cap + 1e-12 &&
                            r2 <= cap + 1e-12 && r1 + 2 * r2 + r3 <= 2 * cap + 1e-12;
            if (ok) grid = std::max(grid, r1 + 2 * r2 + r3);
        }
    CHECK(r.value == doctest::Approx(2.4).epsilon(1e-9));
    CHECK(std::abs(r.value - grid) < 1e-6);
    CHECK(dual_objective(lp, r) == doctest::Approx(r.value).epsilon(1e-9));
}

TEST_CASE("sum-rate program edge cases") {
    SUBCASE("zero second-hop caps make the example infeasible") {
        CHECK(solve_lp(example_one_lp(0.0)).status == LpStatus::Infeasible);
    }
    SUBCASE("no computation bounds and no caps is unbounded") {
        const auto chain = ChainSpec::structure(2, {1, 3, 2, 4});
        const std::vector<ForwardingRow> rows{{1, {0, 1, 1}}, {2, {0, 1, 0}}, {3, {1, 2, 1}}};
        const double inf = std::numeric_limits<double>::infinity();
        const auto lp = build_sum_rate_lp(chain, {0.5}, {inf, inf}, rows, {inf, inf});
        CHECK(solve_lp(lp).status == LpStatus::Unbounded);
    }
    SUBCASE("zero objective") {
        LpProblem lp;
        lp.variables = 2;
        lp.objective = {0.0, 0.0};
        lp.add({1.0, 1.0}, Sense::LessEqual, 3.0);
        const auto r = solve_lp(lp);
        CHECK(r.status == LpStatus::Optimal);
        CHECK(r.value == 0.0);
    }
    SUBCASE("negative right-hand sides") {
        LpProblem lp;
        lp.variables = 2;
        lp.objective = {1.0, 1.0};
        lp.add({-1.0, 0.0}, Sense::GreaterEqual, -2.0);  // x <= 2
        lp.add({0.0, -1.0}, Sense::LessEqual, -1.0);     // y >= 1
        lp.add({1.0, 2.0}, Sense::LessEqual, 6.0);
        const auto r = solve_lp(lp);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.value == doctest::Approx(4.0));
        CHECK(dual_objective(lp, r) == doctest::Approx(4.0));
    }
    SUBCASE("size mismatch throws") {
        LpProblem lp;
        lp.variables = 2;
        lp.objective = {1.0};
        CHECK_THROWS_AS(solve_lp(lp), Error);
    }
}

TEST_CASE("simplex agrees with vertex enumeration and strong duality on random programs") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 2.0), pos(0.1, 3.0);
    int optimal = 0, infeasible = 0;
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 5);
        LpProblem lp;
        lp.variables = n;
        for (std::size_t j = 0; j < n; ++j) lp.objective.push_back(u(rng));
        std::vector<double> box(n, 1.0);
        lp.add(box, Sense::LessEqual, 10.0 * pos(rng));
        const std::size_t m = 1 + static_cast<std::size_t>(rng() % 4);
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> c(n);
            for (auto& x : c) x = u(rng);
            const auto kind = rng() % 5;
            const Sense s = kind < 3 ? Sense::LessEqual : kind == 3 ? Sense::GreaterEqual : Sense::Equal;
            lp.add(std::move(c), s, 3.0 * u(rng));
        }
        const auto r = solve_lp(lp);
        const double ref = oracle::lp_by_vertices(lp.objective, oracle_rows(lp));
        if (std::isinf(ref)) {
            CHECK(r.status == LpStatus::Infeasible);
            ++infeasible;
            continue;
        }
        REQUIRE(r.status == LpStatus::Optimal);
        ++optimal;
        CHECK(r.value == doctest::Approx(ref).epsilon(1e-7));
        CHECK(std::abs(dual_objective(lp, r) - r.value) < 1e-7);
        for (const auto& c : lp.constraints) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += c.coef[j] * r.x[j];
            if (c.sense != Sense::GreaterEqual) CHECK(s <= c.rhs + 1e-7);
            if (c.sense != Sense::LessEqual) CHECK(s >= c.rhs - 1e-7);
        }
    }
    CHECK(optimal > 100);
    CHECK(infeasible > 5);
}

TEST_CASE("build_lp has one row per requirement and checks the shaping order") {
    std::mt19937_64 rng(4);
    const auto inst = random_network(rng, 3, 100.0);
    const std::vector<double> beta{1.0, 2.0, 0.5}, p{50.0, 20.0, 90.0};
    // beta^2 p = 50, 80, 22.5: coarsest source 2, then 1, then 3.
    CHECK(power_order(beta, p) == IndexSet{2, 1, 3});
    const std::vector<Index> pi{2, 5, 1, 4, 3, 6};
    const auto A = select_coefficients(inst, beta, p);
    const auto lp = build_lp(inst, beta, p, pi, A);
    CHECK(lp.variables == 5 + 3);
    CHECK(lp.constraints.size() == 2 + 3 + 7 + 3);
    CHECK(lp.constraints[0].sense == Sense::Equal);
    CHECK(lp.constraints[0].rhs == doctest::Approx(0.5 * std::log2(80.0 / 50.0)));

    // Compression rows reproduce the rank coefficients over the chosen field.
    const auto chain = ChainSpec::structure(3, pi);
    const auto rc = rank_coefficients(ffla::reduce_mod(A, field_for(A)), chain);
    for (Mask s = 1; s <= 7; ++s) {
        const auto& row = lp.constraints[5 + s - 1];
        for (std::size_t k = 0; k < 5; ++k) CHECK(-row.coef[k] == rc.c[s][k]);
    }

    const std::vector<Index> wrong{1, 5, 2, 4, 3, 6};
    try {
        (void)build_lp(inst, beta, p, wrong, A);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OrderMismatch);
    }
}

TEST_CASE("every constraint family of the program can bind") {
    std::mt19937_64 rng(13);
    const LpFamilies all{};
    std::array<bool, 4> enlarged{};
    for (int t = 0; t < 80 && !std::all_of(enlarged.begin(), enlarged.end(), [](bool b) { return b; }); ++t) {
        const std::size_t L = 2 + static_cast<std::size_t>(t % 2);
        auto inst = random_network(rng, L, t % 3 == 0 ? 10.0 : 1000.0);
        const auto beta = uniform_vec(rng, L, 0.3, 3.0);
        const auto p = uniform_vec(rng, L, 1.0, inst.P[0]);
        const auto pis = separable_chains(power_order(beta, p));
        const auto& pi = pis[rng() % pis.size()];
        const auto A = select_coefficients(inst, beta, p);
        const auto base = solve_lp(build_lp(inst, beta, p, pi, A, all));
        if (base.status != LpStatus::Optimal) continue;
        for (int f = 0; f < 4; ++f) {
            LpFamilies fam;
            (f == 0 ? fam.shaping : f == 1 ? fam.computation : f == 2 ? fam.compression : fam.second_hop) = false;
            const auto r = solve_lp(build_lp(inst, beta, p, pi, A, fam));
            if (r.status == LpStatus::Unbounded || (r.status == LpStatus::Optimal && r.value > base.value + 1e-6)) {
                enlarged[static_cast<std::size_t>(f)] = true;
            }
            if (r.status == LpStatus::Optimal) CHECK(r.value >= base.value - 1e-9);
        }
    }
    CHECK(enlarged[0]);
    CHECK(enlarged[1]);
    CHECK(enlarged[2]);
    CHECK(enlarged[3]);
}

TEST_CASE("differential evolution") {
    SUBCASE("sphere") {
        DeConfig cfg;
        cfg.generations = 200;
        cfg.seed = 3;
        const std::vector<std::pair<double, double>> bounds(4, {-5.0, 5.0});
        const auto r = differential_evolution(
            [](const std::vector<double>& x) { return std::inner_product(x.begin(), x.end(), x.begin(), 0.0); }, bounds, cfg);
        CHECK(r.value < 1e-6);
        CHECK(r.generations == 200);
    }
    SUBCASE("constant objective") {
        DeConfig cfg;
        cfg.generations = 5;
        const auto r = differential_evolution([](const std::vector<double>&) { return 7.0; }, {{0.0, 1.0}, {2.0, 3.0}}, cfg);
        CHECK(r.value == 7.0);
        CHECK(r.x[0] >= 0.0);
        CHECK(r.x[0] <= 1.0);
        CHECK(r.x[1] >= 2.0);
        CHECK(r.x[1] <= 3.0);
    }
    SUBCASE("optimum on the bound") {
        DeConfig cfg;
        const auto r = differential_evolution([](const std::vector<double>& x) { return (x[0] - 5.0) * (x[0] - 5.0); }, {{-1.0, 2.0}}, cfg);
        CHECK(r.x[0] == 2.0);
    }
    SUBCASE("initial points enter the population and determinism") {
        DeConfig cfg;
        cfg.generations = 0;
        cfg.initial = {{0.25}};
        const auto r = differential_evolution([](const std::vector<double>& x) { return std::abs(x[0] - 0.25); }, {{0.0, 1.0}}, cfg);
        CHECK(r.value == 0.0);
        cfg.generations = 10;
        cfg.initial.clear();
        auto f = [](const std::vector<double>& x) { return std::sin(3 * x[0]) + x[1] * x[1]; };
        const auto a = differential_evolution(f, {{-2.0, 2.0}, {-1.0, 1.0}}, cfg);
        const auto b = differential_evolution(f, {{-2.0, 2.0}, {-1.0, 1.0}}, cfg);
        CHECK(a.x == b.x);
        CHECK(a.evaluations == 15 * 2 * 11);
    }
    SUBCASE("stagnation stops early") {
        DeConfig cfg;
        cfg.stagnation = 3;
        const auto r = differential_evolution([](const std::vector<double>&) { return 1.0; }, {{0.0, 1.0}}, cfg);
        CHECK(r.generations == 3);
    }
    SUBCASE("infinite bounds are rejected") {
        CHECK_THROWS_AS(differential_evolution([](const std::vector<double>&) { return 0.0; },
                                               {{0.0, std::numeric_limits<double>::infinity()}}, DeConfig{}),
                        Error);
    }
}

TEST_CASE("algorithm1 on parallel channels reaches the decoupled closed form") {
    NetworkInstance inst;
    inst.H = {{1.0, 0.0}, {0.0, 1.0}};
    const double P = 1000.0;
    inst.P = {P, P};
    inst.p2 = {0.25 * P, 0.25 * P};
    const auto r = algorithm1(inst, {1, 3, 2, 4}, {1.0, 1.0}, {P, P});
    const double closed = 2.0 * std::min(0.5 * std::log2(1.0 + P), 0.5 * std::log2(1.0 + 0.25 * P));
    CHECK(r.status == LpStatus::Optimal);
    CHECK(std::abs(r.sum_rate - closed) <= 0.05 * closed);
    const auto again = algorithm1(inst, {1, 3, 2, 4}, {1.0, 1.0}, {P, P});
    CHECK(again.sum_rate == r.sum_rate);
    CHECK(again.block_rates == r.block_rates);

    inst.p2 = {1e-9, 1e-9};
    CHECK(algorithm1(inst, {1, 3, 2, 4}, {1.0, 1.0}, {P, P}).sum_rate < 1e-8);
}

TEST_CASE("algorithm1 reorders the scalings to the chain") {
    std::mt19937_64 rng(17);
    const auto inst = random_network(rng, 3, 100.0);
    const std::vector<double> beta{0.5, 1.0, 2.0}, p{100.0, 100.0, 100.0};
    const std::vector<Index> pi{1, 4, 2, 5, 3, 6};  // source 1 coarsest
    const auto r = algorithm1(inst, pi, beta, p);
    CHECK(r.beta == std::vector<double>{2.0, 1.0, 0.5});
    CHECK(r.status == LpStatus::Optimal);
}

TEST_CASE("scheme enumeration sizes") {
    CHECK(all_chains(2).size() == 6);
    CHECK(all_chains(3).size() == 90);
    const auto s = separable_chains({2, 1, 3});
    CHECK(s.size() == 6);
    for (const auto& pi : s) {
        const auto c = ChainSpec::structure(3, pi);
        CHECK(is_separable(c));
        CHECK(shaping_order(c) == IndexSet{2, 1, 3});
    }
    CHECK(parse_scheme("gccf-s") == Scheme::GccfS);
    CHECK_THROWS_AS(parse_scheme("df"), Error);
}

TEST_CASE("schemes are nested at a fixed operating point") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
        const std::size_t L = 2 + static_cast<std::size_t>(t % 2);
        const auto inst = random_network(rng, L, t % 2 ? 100.0 : 1000.0);
        const auto p = uniform_vec(rng, L, 1.0, inst.P[0]);
        const std::vector<double> ones(L, 1.0);
        const double cf = evaluate_scheme(inst, Scheme::Cf, ones, p).sum_rate;
        const auto ccf = evaluate_scheme(inst, Scheme::Ccf, ones, p);
        const double gs = evaluate_scheme(inst, Scheme::GccfS, ones, p).sum_rate;
        CHECK(ccf.sum_rate >= cf - 1e-9);
        CHECK(gs >= ccf.sum_rate - 1e-9);

        // The single-vertex rates cover the hull of each receiver's planned blocks.
        if (ccf.sum_rate > 0.0) {
            const auto chain = ChainSpec::structure(L, ccf.pi);
            const auto A = ffla::reduce_mod(ccf.A, field_for(ccf.A));
            const auto pl = plan(A, ccf.pi_alpha, chain);
            for (Index m = 1; m <= L; ++m) {
                double need = 0.0;
                for (Index k : hull(pl.J[m - 1])) need += ccf.block_rates[k - 1];
                CHECK(ccf.relay_rates[m - 1] >= need - 1e-9);
            }
        }

        const auto beta = uniform_vec(rng, L, 0.1, 4.0);
        if (L == 2) {
            CHECK(evaluate_scheme(inst, Scheme::GccfFull, beta, p).sum_rate >=
                  evaluate_scheme(inst, Scheme::GccfS, beta, p).sum_rate - 1e-9);
        }
    }
}

TEST_CASE("warm-started optimization preserves the scheme ordering") {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 4; ++t) {
        const auto inst = random_network(rng, 2, 100.0);
        OptimizeConfig cfg;
        cfg.de.generations = 8;
        cfg.de.seed = 100 + static_cast<std::uint64_t>(t);
        const auto cf = optimize_sum_rate(inst, Scheme::Cf, cfg);
        cfg.warm_starts = {{cf.best.beta, cf.best.p}};
        const auto ccf = optimize_sum_rate(inst, Scheme::Ccf, cfg);
        cfg.warm_starts = {{std::vector<double>(2, 1.0), ccf.best.p}};
        const auto gs = optimize_sum_rate(inst, Scheme::GccfS, cfg);
        cfg.warm_starts = {{gs.best.beta, gs.best.p}};
        const auto full = optimize_sum_rate(inst, Scheme::GccfFull, cfg);
        CHECK(ccf.best.sum_rate >= cf.best.sum_rate - 1e-9);
        CHECK(gs.best.sum_rate >= ccf.best.sum_rate - 1e-9);
        CHECK(full.best.sum_rate >= gs.best.sum_rate - 1e-9);
        CHECK(cf.evaluations == 15 * 2 * 9);
    }
}

TEST_CASE("network validation") {
    NetworkInstance inst;
    inst.H = {{1.0}};
    inst.P = {0.0};
    inst.p2 = {1.0};
    CHECK_THROWS_AS(inst.validate(), Error);
    inst.P = {1.0};
    CHECK_NOTHROW(inst.validate());
    inst.H = {{1.0, 2.0}};
    CHECK_THROWS_AS(inst.validate(), Error);
}

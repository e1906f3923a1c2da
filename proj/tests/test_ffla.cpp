#include "gccf/error.hpp"
#include "gccf/ffla.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace gccf;
using ffla::FieldMatrix;

TEST_CASE("reduce_mod maps signed entries into the field") {
    CHECK(ffla::reduce_mod({{2, 3}, {-1, 0}}, 5) == FieldMatrix(5, {{2, 3}, {4, 0}}));
    CHECK(ffla::reduce_mod({{1, 1}, {1, 0}}, 5) == FieldMatrix(5, {{1, 1}, {1, 0}}));
    CHECK(ffla::reduce_mod({{5, 10}, {15, 20}}, 5) == FieldMatrix(5, 2, 2));
    CHECK_THROWS_AS(ffla::reduce_mod({{1}}, 4), Error);
    try {
        (void)ffla::reduce_mod({{1}}, 9);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPrimeModulus);
    }
}

TEST_CASE("rank examples") {
    CHECK(ffla::rank(FieldMatrix(5, {{2, 3}, {1, 3}})) == 2);
    CHECK(ffla::rank(FieldMatrix(5, 0, 3)) == 0);
    CHECK(ffla::rank(FieldMatrix(5, 3, 0)) == 0);
    CHECK(ffla::rank(FieldMatrix(5, {{3, 3}, {3, 3}})) == 1);
}

TEST_CASE("rref examples") {
    auto e = ffla::rref(FieldMatrix(5, {{2, 4}, {1, 2}}));
    CHECK(e.form == FieldMatrix(5, {{1, 2}, {0, 0}}));
    CHECK(e.pivots == std::vector<std::size_t>{0});

    auto id = ffla::rref(FieldMatrix::identity(7, 3));
    CHECK(id.form == FieldMatrix::identity(7, 3));
    CHECK(id.pivots == std::vector<std::size_t>{0, 1, 2});

    auto f = ffla::rref(FieldMatrix(5, {{1, 3}, {2, 2}}));
    CHECK(f.form == FieldMatrix::identity(5, 2));
    CHECK(f.pivots == std::vector<std::size_t>{0, 1});
}

TEST_CASE("invert examples") {
    const FieldMatrix a(5, {{1, 1}, {1, 0}});
    const auto inv = ffla::invert(a);
    CHECK(inv == FieldMatrix(5, {{0, 1}, {1, 4}}));
    CHECK(a * inv == FieldMatrix::identity(5, 2));
    CHECK(ffla::invert(FieldMatrix::identity(3, 4)) == FieldMatrix::identity(3, 4));
    try {
        (void)ffla::invert(FieldMatrix(5, {{1, 2}, {2, 4}}));
        FAIL("expected SingularMatrix");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularMatrix);
    }
}

TEST_CASE("solve examples") {
    const FieldMatrix b(5, {{3}, {4}});
    auto s = ffla::solve(FieldMatrix::identity(5, 2), b);
    CHECK(s.x == b);
    CHECK_FALSE(s.underdetermined);

    try {
        (void)ffla::solve(FieldMatrix(5, {{2, 2}, {2, 2}}), FieldMatrix(5, {{1}, {2}}));
        FAIL("expected Inconsistent");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Inconsistent);
    }

    const FieldMatrix a(5, {{1, 3}, {2, 2}});
    const FieldMatrix rhs(5, {{0}, {1}});
    auto t = ffla::solve(a, rhs);
    CHECK(t.x == FieldMatrix(5, {{2}, {1}}));
    CHECK(a * t.x == rhs);
}

TEST_CASE("solve returns a nullspace basis for underdetermined systems") {
    const FieldMatrix a(7, {{1, 2, 3}, {2, 4, 6}});
    auto s = ffla::solve(a, FieldMatrix(7, {{1}, {2}}));
    CHECK(s.underdetermined);
    CHECK(s.nullspace.cols() == 2);
    CHECK(a * s.x == FieldMatrix(7, {{1}, {2}}));
    CHECK(a * s.nullspace == FieldMatrix(7, 2, 2));
    CHECK(ffla::rank(s.nullspace) == 2);
}

TEST_CASE("rank agrees with the row-space counting oracle") {
    std::mt19937_64 rng(11);
    for (std::uint32_t g : {2u, 3u, 5u}) {
        for (int rep = 0; rep < 40; ++rep) {
            const auto m = oracle::random_matrix(rng, g, 1 + rng() % 3, 1 + rng() % 4);
            CHECK(ffla::rank(m) == oracle::rank_by_span(m));
        }
    }
}

TEST_CASE("rank properties on random matrices") {
    std::mt19937_64 rng(5);
    for (std::uint32_t g : {2u, 3u, 5u, 7u}) {
        for (int rep = 0; rep < 50; ++rep) {
            const auto m = oracle::random_matrix(rng, g, 1 + rng() % 5, 1 + rng() % 5);
            CHECK(ffla::rank(m) == ffla::rank(m.transpose()));
            const auto e = ffla::rref(m);
            CHECK(ffla::rank(e.form) == ffla::rank(m));
            CHECK(e.pivots.size() == ffla::rank(m));
            CHECK(ffla::rref(e.form).form == e.form);
        }
    }
}

TEST_CASE("inversion round trips") {
    std::mt19937_64 rng(9);
    for (std::uint32_t g : {2u, 3u, 5u, 7u, 2147483647u}) {
        for (int rep = 0; rep < 20; ++rep) {
            const std::size_t n = 1 + rng() % 5;
            const auto m = oracle::random_invertible(rng, g, n);
            const auto inv = ffla::invert(m);
            CHECK(m * inv == FieldMatrix::identity(g, n));
            CHECK(ffla::invert(inv) == m);
        }
    }
}

TEST_CASE("column rank is submodular") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 100; ++rep) {
        const std::uint32_t g = rep % 2 ? 3 : 2;
        const std::size_t cols = 5;
        const auto m = oracle::random_matrix(rng, g, 4, cols);
        std::vector<std::size_t> all(m.rows());
        std::iota(all.begin(), all.end(), 0);
        auto colrank = [&](unsigned mask) {
            std::vector<std::size_t> c;
            for (std::size_t j = 0; j < cols; ++j)
                if (mask & (1u << j)) c.push_back(j);
            return static_cast<long>(ffla::rank(m.submatrix(all, c)));
        };
        const unsigned T = rng() % 32;
        const unsigned S = T & static_cast<unsigned>(rng() % 32);
        for (std::size_t c = 0; c < cols; ++c) {
            if (T & (1u << c)) continue;
            const unsigned bit = 1u << c;
            CHECK(colrank(S | bit) - colrank(S) >= colrank(T | bit) - colrank(T));
        }
    }
}

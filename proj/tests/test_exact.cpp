#include <doctest.h>

#include <random>

#include "clsets/exact.hpp"
#include "clsets/flats.hpp"

using namespace clsets;
using namespace clsets::exact;

namespace {

Rational frac(long num, long den);

RationalMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int rank_cap) {
    // Product of r x k and k x c with small entries: rank at most k.
    std::uniform_int_distribution<int> d(-3, 3);
    RationalMatrix a(r, rank_cap), b(rank_cap, c);
    for (std::size_t i = 0; i < r; ++i)
        for (int k = 0; k < rank_cap; ++k) a(i, k) = d(rng);
    for (int k = 0; k < rank_cap; ++k)
        for (std::size_t j = 0; j < c; ++j) b(k, j) = frac(d(rng), 1 + static_cast<long>(rng() % 3));
    return a * b;
}

IntRows to_int_rows(const flats::IncidenceMatrix& m) { return m.as_rows(); }

Rational frac(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace

TEST_CASE("rank basics") {
    CHECK(rank(RationalMatrix::identity(5)) == 5);
    CHECK(rank(RationalMatrix(4, 3)) == 0);
    RationalMatrix a = RationalMatrix::from_rows(IntRows{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
    CHECK(rank(a) == 2);
    CHECK(modular_rank(a, kPrimeA) == 2);
}

TEST_CASE("rank agrees with two modular ranks on random matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t r = 2 + rng() % 9, c = 2 + rng() % 9;
        int cap = 1 + static_cast<int>(rng() % 6);
        auto a = random_matrix(rng, r, c, cap);
        auto rk = rank(a);
        CHECK(rk <= static_cast<std::size_t>(cap));
        CHECK(rk == modular_rank(a, kPrimeA));
        CHECK(rk == modular_rank(a, kPrimeB));
        auto ns = nullspace(a);
        CHECK(ns.size() == c - rk);
        for (auto& v : ns)
            for (auto& x : a * v) CHECK(x == 0);
        RationalVector y(c);
        for (auto& x : y) x = frac(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 4));
        auto b = a * y;
        auto sol = solve(a, b);
        REQUIRE(sol);
        CHECK(a * *sol == b);
        // Perturbed right-hand side: NoSolution iff the augmented rank rises.
        b[0] += 1;
        RationalMatrix aug(r, c + 1);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < c; ++j) aug(i, j) = a(i, j);
            aug(i, c) = b[i];
        }
        CHECK(solve(a, b).has_value() == (rank(aug) == rk));
    }
}

TEST_CASE("incidence rank and kernel") {
    auto cfg = geometry::make_config(field::FormCase::symplectic, 2, 2);
    flats::MaximalFlats cat(cfg);
    auto m = flats::incidence_matrix(cat);
    auto a = RationalMatrix::from_rows(m.as_rows());
    CHECK(rank(a) == 16);
    CHECK(modular_rank(a, kPrimeA) == 16);

    auto cfg1 = geometry::make_config(field::FormCase::symplectic, 2, 1);
    flats::MaximalFlats cat1(cfg1);
    auto m1 = RationalMatrix::from_rows(flats::incidence_matrix(cat1).as_rows());
    CHECK(nullspace(m1).size() == 2);
    // A single flat is not in the image of M^T.
    RationalVector chi(6);
    chi[0] = 1;
    CHECK(!solve(m1.transpose(), chi));
    RationalVector zero(6);
    auto z = solve(m1.transpose(), zero);
    REQUIRE(z);
    for (auto& x : *z) CHECK(x == 0);
}

TEST_CASE("ExactSystem matches rational elimination") {
    for (auto [kind, q, nu] : {std::tuple{field::FormCase::symplectic, 2, 2}, std::tuple{field::FormCase::orthogonal, 3, 2},
                               std::tuple{field::FormCase::unitary, 4, 1}, std::tuple{field::FormCase::symplectic, 3, 1}}) {
        auto cfg = geometry::make_config(kind, q, nu);
        flats::MaximalFlats cat(cfg);
        auto rows = to_int_rows(flats::incidence_matrix(cat));
        auto a = RationalMatrix::from_rows(rows);
        auto at = a.transpose();
        IntRows trows(at.rows(), std::vector<long>(at.cols()));
        for (std::size_t i = 0; i < at.rows(); ++i)
            for (std::size_t j = 0; j < at.cols(); ++j) trows[i][j] = at(i, j).get_num().get_si();
        ExactSystem sys(trows);
        CHECK(sys.rank() == rank(a));
        CHECK(sys.nullspace().size() == at.cols() - sys.rank());
        CHECK(sys.left_nullspace().size() == at.rows() - sys.rank());
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 30; ++trial) {
            RationalVector b(at.rows());
            if (trial % 2 == 0) {
                RationalVector y(at.cols());
                for (auto& x : y) x = static_cast<long>(rng() % 5) - 2;
                b = at * y;
            } else {
                for (auto& x : b) x = static_cast<long>(rng() % 2);
            }
            auto s1 = sys.solve(b);
            auto s2 = solve(at, b);
            CHECK(s1.has_value() == s2.has_value());
            if (s1) CHECK(at * *s1 == b);
        }
    }
    CHECK(certified_rank(IntRows{{1, 1, 0}, {0, 1, 1}, {1, 2, 1}}) == 2);
    CHECK(certified_rank(IntRows{{2, 0}, {0, 3}}) == 2);
}

TEST_CASE("checked helpers") {
    CHECK(checked_add(1, 2) == 3);
    CHECK_THROWS_AS(checked_add(INT64_MAX, 1), std::overflow_error);
    CHECK_THROWS_AS(checked_mul(INT64_MAX / 2, 3), std::overflow_error);
    CHECK_THROWS_AS(narrow(static_cast<__int128>(INT64_MAX) + 1), std::overflow_error);
    CHECK(to_int64(BigInt(-5)) == -5);
}

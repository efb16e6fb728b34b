#include <doctest.h>

#include <random>

#include "clsets/exact.hpp"
#include "clsets/spreads.hpp"

using namespace clsets;
using namespace clsets::spreads;
using field::FormCase;
using geometry::make_config;
using geometry::unit_vec;

namespace {

Subspace span_of(const geometry::SpaceConfig& cfg, std::initializer_list<int> units) {
    geometry::Mat rows;
    for (int u : units) rows.push_back(unit_vec(cfg.dim(), u));
    return geometry::canonicalize(cfg.field, cfg.dim(), rows);
}

std::vector<int> covered_points(const MaximalFlats& cat, const std::vector<int>& ids) {
    std::vector<int> pts;
    for (int id : ids) pts.insert(pts.end(), cat.points_of(id).begin(), cat.points_of(id).end());
    std::sort(pts.begin(), pts.end());
    return pts;
}

std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

TEST_CASE("support rank mod p") {
    // Rows of the 3x3 all-ones-minus-identity pattern have rank 3; adding their sum-dependent row keeps 3.
    std::vector<std::vector<int>> rows{{1, 2}, {0, 2}, {0, 1}, {0, 1, 2}};
    CHECK(exact::support_rank_mod_p(rows, 3) == 3);
    CHECK(exact::support_rank_mod_p(rows, 3, 2) == 2);
    CHECK(exact::support_rank_mod_p({{0, 1}, {2, 3}, {0, 2}, {1, 3}}, 4) == 3);
    CHECK(exact::support_rank_mod_p({}, 5) == 0);

    // Agrees with the exact rank on random 0/1 matrices.
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<int>> supports;
        exact::IntRows dense;
        for (int r = 0; r < 9; ++r) {
            std::vector<int> s;
            std::vector<long> row(7, 0);
            for (int c = 0; c < 7; ++c)
                if (rng() % 3 == 0) {
                    s.push_back(c);
                    row[c] = 1;
                }
            supports.push_back(s);
            dense.push_back(row);
        }
        CHECK(exact::support_rank_mod_p(supports, 7) == exact::certified_rank(dense));
    }
}

TEST_CASE("type-I spreads") {
    auto cfg = make_config(FormCase::symplectic, 2, 1);
    MaximalFlats cat(cfg);
    auto s = spread_type_I(cat, span_of(cfg, {0}));
    CHECK(s.members.size() == 2);
    CHECK(covered_points(cat, s.members).size() == 4);
    CHECK(classify_set(cat, s.members) == SetKind::full_spread);
    CHECK(classify_set(cat, {s.members[0]}) == SetKind::partial_spread);
    CHECK_THROWS_AS(spread_type_I(cat, span_of(cfg, {0, 1})), std::invalid_argument);

    auto cfg2 = make_config(FormCase::symplectic, 2, 2);
    MaximalFlats cat2(cfg2);
    auto family = type_I_spreads(cat2);
    CHECK(family.size() == 15);
    for (const auto& sp : family) {
        CHECK(covered_points(cat2, sp.members).size() == 16);
        CHECK(spread_type(cat2, sp.members) == SpreadType::I);
    }
}

TEST_CASE("type-II construction") {
    auto cfg = make_config(FormCase::symplectic, 2, 2);
    MaximalFlats cat(cfg);
    auto q = span_of(cfg, {0, 1, 3});
    auto p1 = span_of(cfg, {0, 1});
    auto p2 = span_of(cfg, {0, 3});
    auto s = spread_type_II(cat, q, p1, p2);
    REQUIRE(s.members.size() == 4);
    CHECK(classify_set(cat, s.members) == SetKind::full_spread);
    int n1 = 0;
    for (int id : s.members) n1 += cat.direction_of(id) == cat.direction_index(p1);
    CHECK(n1 == 2);
    CHECK(spread_type(cat, s.members) == SpreadType::II);

    auto swapped = spread_type_II(cat, q, p2, p1);
    CHECK(swapped.members != s.members);
    CHECK(covered_points(cat, swapped.members) == covered_points(cat, s.members));

    CHECK(interior_directions(cat, q).size() == 3);
    CHECK_THROWS_AS(spread_type_II(cat, q, p1, p1), std::invalid_argument);
    CHECK_THROWS_AS(spread_type_II(cat, span_of(cfg, {0, 1, 2}), p1, p2), std::invalid_argument);

    for (const auto& base : type_II_bases(cat)) CHECK(interior_directions(cat, base).size() == 3);

    auto family = type_II_spreads(cat);
    CHECK(family.size() == 90);
    for (const auto& sp : family) CHECK(classify_set(cat, sp.members) == SetKind::full_spread);
}

TEST_CASE("interior count is q^e + 1") {
    for (auto [kind, q, want] : {std::tuple{FormCase::symplectic, 3, 4}, std::tuple{FormCase::unitary, 4, 3},
                                 std::tuple{FormCase::orthogonal, 3, 2}}) {
        MaximalFlats cat(make_config(kind, q, 2));
        auto bases = type_II_bases(cat);
        REQUIRE(!bases.empty());
        for (const auto& b : bases) CHECK(static_cast<int>(interior_directions(cat, b).size()) == want);
    }
}

TEST_CASE("set classification and switching pairs") {
    auto cfg = make_config(FormCase::symplectic, 2, 2);
    MaximalFlats cat(cfg);
    const auto& pencil = cat.flats_through_point(0);
    CHECK(classify_set(cat, {pencil[0], pencil[1]}) == SetKind::neither);
    CHECK(classify_set(cat, {}) == SetKind::partial_spread);

    auto all = enumerate_spreads(cat);
    REQUIRE(all.exhaustive);
    for (std::size_t a = 0; a < all.spreads.size(); a += 7)
        for (std::size_t b = a + 1; b < all.spreads.size(); b += 5) {
            const auto& s1 = all.spreads[a].members;
            const auto& s2 = all.spreads[b].members;
            CHECK(is_switching_pair(cat, set_minus(s1, s2), set_minus(s2, s1)));
        }
    CHECK_FALSE(is_switching_pair(cat, {pencil[0]}, {pencil[0]}));
}

TEST_CASE("exhaustive spread search at nu = 1") {
    for (auto [kind, q, want] :
         {std::tuple{FormCase::symplectic, 2, 3}, std::tuple{FormCase::symplectic, 3, 4},
          std::tuple{FormCase::orthogonal, 3, 2}, std::tuple{FormCase::orthogonal, 5, 2},
          std::tuple{FormCase::unitary, 4, 3}}) {
        auto cfg = make_config(kind, q, 1);
        MaximalFlats cat(cfg);
        auto found = enumerate_spreads(cat);
        CHECK(found.exhaustive);
        CHECK(static_cast<int>(found.spreads.size()) == want);
        for (const auto& s : found.spreads) {
            CHECK(s.type == SpreadType::I);
            CHECK(static_cast<int>(s.members.size()) == q);
        }
    }
}

TEST_CASE("exhaustive spread search at symplectic (2,2)") {
    auto cfg = make_config(FormCase::symplectic, 2, 2);
    MaximalFlats cat(cfg);
    auto found = enumerate_spreads(cat);
    REQUIRE(found.exhaustive);
    int n1 = 0, n2 = 0;
    for (const auto& s : found.spreads) {
        CHECK(s.members.size() == 4);
        CHECK(classify_set(cat, s.members) == SetKind::full_spread);
        n1 += s.type == SpreadType::I;
        n2 += s.type == SpreadType::II;
    }
    CHECK(n1 == 15);
    CHECK(n2 == 90);
    // Each spread covers the same points, so differences lie in the kernel of M.
    auto m = flats::incidence_matrix(cat).as_rows();
    const auto& a = found.spreads.front().members;
    for (std::size_t k = 1; k < found.spreads.size(); k += 11) {
        std::vector<long> d(cat.size(), 0);
        for (int id : a) d[id] += 1;
        for (int id : found.spreads[k].members) d[id] -= 1;
        for (const auto& row : m) {
            long dot = 0;
            for (int c = 0; c < cat.size(); ++c) dot += row[c] * d[c];
            CHECK(dot == 0);
        }
    }
}

TEST_CASE("spreads inside a container") {
    auto cfg = make_config(FormCase::symplectic, 2, 2);
    MaximalFlats cat(cfg);
    Flat big = flats::flat_make(cfg.field, span_of(cfg, {0, 1, 2}), geometry::zero_vec(4));
    auto found = enumerate_spreads(cat, big);
    CHECK(found.exhaustive);
    REQUIRE(found.spreads.size() == 3);
    for (const auto& s : found.spreads) {
        CHECK(s.members.size() == 2);
        CHECK(s.type == SpreadType::I);
        CHECK(classify_set(cat, s.members, big) == SetKind::full_spread);
    }
    CHECK_THROWS_AS(enumerate_spreads(cat, cat.flat(0)), std::invalid_argument);

    // Above the point bound a container falls back to its one-direction family.
    auto ucfg = make_config(FormCase::unitary, 4, 2);
    MaximalFlats ucat(ucfg);
    auto ubig = flats::container_flats(ucfg, ucat.flat(0), 1).front();
    auto fallback = enumerate_spreads(ucat, ubig);
    CHECK_FALSE(fallback.exhaustive);
    CHECK(fallback.spreads.size() == 3);
    for (const auto& s : fallback.spreads) CHECK(classify_set(ucat, s.members, ubig) == SetKind::full_spread);
}

TEST_CASE("span checks at symplectic (2,2)") {
    auto cfg = make_config(FormCase::symplectic, 2, 2);
    MaximalFlats cat(cfg);
    auto t = scheme::scheme_tables(cfg);
    scheme::RelationTable rt(cat);
    auto r1 = typeI_span_check(cat, t, rt);
    CHECK(r1.passed());
    auto r2 = typeII_span_check(cat, t, rt);
    for (const auto& c : r2.failures()) MESSAGE(c.name << ": " << c.expected << " vs " << c.actual);
    CHECK(r2.passed());

    // Exact ranks of the two stacks, independently of the bracket.
    exact::IntRows s1, s2;
    for (const auto& s : type_I_spreads(cat)) {
        std::vector<long> row(cat.size(), 0);
        for (int id : s.members) row[id] = 1;
        s1.push_back(row);
    }
    for (const auto& s : type_II_spreads(cat)) {
        std::vector<long> row(cat.size(), 0);
        for (int id : s.members) row[id] = 1;
        s2.push_back(row);
    }
    CHECK(exact::certified_rank(s1) == 15);
    CHECK(exact::certified_rank(s2) == 45);
}

TEST_CASE("span checks across configs") {
    for (auto [kind, q, nu] : {std::tuple{FormCase::symplectic, 3, 2}, std::tuple{FormCase::unitary, 4, 2},
                               std::tuple{FormCase::orthogonal, 3, 2}}) {
        auto cfg = make_config(kind, q, nu);
        MaximalFlats cat(cfg);
        auto t = scheme::scheme_tables(cfg);
        scheme::RelationTable rt(cat);
        auto r1 = typeI_span_check(cat, t, rt);
        auto r2 = typeII_span_check(cat, t, rt);
        for (const auto& c : r1.failures()) MESSAGE(c.name << ": " << c.expected << " vs " << c.actual);
        for (const auto& c : r2.failures()) MESSAGE(c.name << ": " << c.expected << " vs " << c.actual);
        CHECK(r1.passed());
        CHECK(r2.passed());
    }
}

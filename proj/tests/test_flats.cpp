#include <doctest.h>

#include <set>

#include "clsets/flats.hpp"

using namespace clsets;
using namespace clsets::flats;
using geometry::canonicalize;
using geometry::make_config;
using geometry::unit_vec;
using field::FormCase;

namespace {

Subspace span(const SpaceConfig& cfg, std::initializer_list<int> units) {
    Mat rows;
    for (int u : units) rows.push_back(unit_vec(cfg.dim(), u));
    return canonicalize(cfg.field, cfg.dim(), rows);
}

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

// Closed form |O_m| = q^{2nu-m} [nu m] prod_{t=nu-m+1}^{nu} (q^{t+e-1}+1)
BigInt closed_o(FormCase kind, int q, int nu, int m) {
    return field::int_pow(q, 2 * nu - m) * field::gauss_binomial(nu, m, q) *
           field::isotropic_product(kind, q, nu - m + 1, nu);
}

}  // namespace

TEST_CASE("flat_make canonical reps") {
    auto cfg = make_config(FormCase::symplectic, 2, 1);
    auto p = span(cfg, {0});
    CHECK(flat_make(cfg.field, p, Vec{1, 0}).rep == Vec{0, 0});
    CHECK(flat_make(cfg.field, p, Vec{0, 1}).rep == Vec{0, 1});
    CHECK(flat_make(cfg.field, p, Vec{1, 1}) == flat_make(cfg.field, p, Vec{0, 1}));
    CHECK_THROWS_AS(flat_make(cfg.field, p, Vec{1}), std::invalid_argument);
}

TEST_CASE("meet and join examples") {
    auto cfg = make_config(FormCase::symplectic, 2, 2);
    const auto& f = cfg.field;
    auto a = flat_make(f, span(cfg, {0, 1}), Vec{0, 0, 0, 0});
    auto b = flat_make(f, span(cfg, {0, 3}), Vec{0, 0, 0, 0});
    auto m = flat_meet(f, a, b);
    REQUIRE(m);
    CHECK(*m == flat_make(f, span(cfg, {0}), Vec{0, 0, 0, 0}));
    CHECK(*flat_meet(f, a, a) == a);
    auto a2 = flat_make(f, span(cfg, {0, 1}), unit_vec(4, 2));
    CHECK(!flat_meet(f, a, a2));
    CHECK(flat_join(f, a, a2).dim() == 3);
    auto x = point_flat(cfg, Vec{1, 0, 0, 0});
    auto y = point_flat(cfg, Vec{0, 1, 0, 0});
    CHECK(flat_join(f, x, x) == x);
    auto xy = flat_join(f, x, y);
    CHECK(xy.dim() == 1);
    CHECK(flat_type(cfg, xy) == geometry::SubspaceType{1, 0});
}

TEST_CASE("meet and join agree with point sets") {
    for (auto [kind, q, nu] : {std::tuple{FormCase::symplectic, 2, 2}, std::tuple{FormCase::orthogonal, 3, 2},
                               std::tuple{FormCase::symplectic, 3, 1}, std::tuple{FormCase::unitary, 4, 1}}) {
        auto cfg = make_config(kind, q, nu);
        MaximalFlats cat(cfg);
        if (cat.size() > 100) continue;
        for (int a = 0; a < cat.size(); ++a)
            for (int b = 0; b < cat.size(); ++b) {
                auto pa = as_set(cat.points_of(a)), pb = as_set(cat.points_of(b));
                std::set<int> common;
                for (int p : pa)
                    if (pb.count(p)) common.insert(p);
                auto meet = flat_meet(cfg.field, cat.flat(a), cat.flat(b));
                if (common.empty()) {
                    CHECK(!meet);
                } else {
                    REQUIRE(meet);
                    CHECK(as_set(flat_points(cfg, *meet)) == common);
                }
                // Join: contains both, and its dimension follows the epsilon rule.
                auto join = flat_join(cfg.field, cat.flat(a), cat.flat(b));
                auto pj = as_set(flat_points(cfg, join));
                for (int p : pa) CHECK(pj.count(p));
                for (int p : pb) CHECK(pj.count(p));
                int inter = geometry::intersection(cfg.field, cat.flat(a).direction, cat.flat(b).direction).dim();
                CHECK(join.dim() == 2 * nu - inter + (meet ? 0 : 1));
            }
    }
}

TEST_CASE("minimal enclosing flat is the join") {
    // Brute force over all flats of F_2^4: the smallest containing two maximal flats.
    auto cfg = make_config(FormCase::symplectic, 2, 2);
    MaximalFlats cat(cfg);
    std::vector<Flat> all;
    for (int m = 0; m <= 4; ++m)
        for (auto& s : geometry::enumerate_subspaces(cfg.field, 4, m))
            for (int x = 0; x < 16; ++x) {
                auto F = flat_make(cfg.field, s, geometry::point_vector(cfg, x));
                if (std::find(all.begin(), all.end(), F) == all.end()) all.push_back(F);
            }
    for (int a = 0; a < cat.size(); a += 7)
        for (int b = 0; b < cat.size(); b += 5) {
            int best = 99;
            for (auto& F : all)
                if (flat_contains(cfg.field, F, cat.flat(a)) && flat_contains(cfg.field, F, cat.flat(b)))
                    best = std::min(best, F.dim());
            CHECK(flat_join(cfg.field, cat.flat(a), cat.flat(b)).dim() == best);
        }
}

TEST_CASE("flat counts match the closed forms") {
    for (auto [kind, q, nu] : {std::tuple{FormCase::symplectic, 2, 2}, std::tuple{FormCase::orthogonal, 3, 2},
                               std::tuple{FormCase::unitary, 4, 1}, std::tuple{FormCase::symplectic, 3, 1}}) {
        auto cfg = make_config(kind, q, nu);
        for (int m = 0; m <= nu; ++m)
            CHECK(BigInt(static_cast<long>(enumerate_flats(cfg, m).size())) == closed_o(kind, q, nu, m));
    }
    CHECK(enumerate_flats(make_config(FormCase::symplectic, 2, 2), 2).size() == 60);
    CHECK(enumerate_flats(make_config(FormCase::orthogonal, 3, 2), 2).size() == 72);
    CHECK(enumerate_flats(make_config(FormCase::symplectic, 2, 2), 0).size() == 16);
}

TEST_CASE("pencils") {
    auto cfg = make_config(FormCase::symplectic, 2, 2);
    auto origin = point_flat(cfg, geometry::zero_vec(4));
    CHECK(flats_through(cfg, origin, 2).size() == 15);
    CHECK(flats_through(cfg, origin, 0).size() == 1);
    auto u = make_config(FormCase::unitary, 4, 1);
    CHECK(flats_through(u, point_flat(u, Vec{3, 1}), 1).size() == 3);
    auto line = flat_make(cfg.field, span(cfg, {0}), Vec{0, 1, 0, 0});
    // [1 1] * (q^{1+e-1}+1) = 3
    CHECK(flats_through(cfg, line, 2).size() == 3);
    CHECK_THROWS_AS(flats_through(cfg, line, 0), std::invalid_argument);
}

TEST_CASE("catalog ids and incidence") {
    auto cfg = make_config(FormCase::symplectic, 2, 2);
    MaximalFlats cat(cfg);
    CHECK(cat.size() == 60);
    for (int id = 0; id < cat.size(); ++id) {
        CHECK(cat.id_of(cat.flat(id)) == id);
        CHECK(cat.points_of(id).size() == 4);
        for (int p : cat.points_of(id)) CHECK(cat.id_through(cat.direction_of(id), geometry::point_vector(cfg, p)) == id);
    }
    auto m = incidence_matrix(cat);
    for (int c = 0; c < m.cols(); ++c) {
        int s = 0;
        for (int r = 0; r < m.rows(); ++r) s += m.at(r, c);
        CHECK(s == 4);
    }
    for (int r = 0; r < m.rows(); ++r) {
        int s = 0;
        for (int c = 0; c < m.cols(); ++c) s += m.at(r, c);
        CHECK(s == 15);
    }
}

TEST_CASE("containers and flats inside them") {
    auto cfg = make_config(FormCase::symplectic, 2, 2);
    MaximalFlats cat(cfg);
    auto big = flat_make(cfg.field, span(cfg, {0, 1, 2}), geometry::zero_vec(4));
    int i = 0;
    CHECK(is_container(cfg, big, &i));
    CHECK(i == 1);
    auto inside = flats_in(cat, big);
    CHECK(inside.size() == 6);
    for (int id : inside) CHECK(flat_contains(cfg.field, big, cat.flat(id)));
    auto restricted = incidence_matrix_in(cat, big);
    CHECK(restricted.rows() == 8);
    CHECK(restricted.cols() == 6);
    auto conts = container_flats(cfg, cat.flat(0), 1);
    CHECK(conts.size() == 3);
    for (auto& T : conts) CHECK(flat_contains(cfg.field, T, cat.flat(0)));
    CHECK_THROWS_AS(container_flats(cfg, cat.flat(0), 2), std::invalid_argument);
    CHECK_THROWS_AS(flats_in(cat, cat.flat(0)), std::invalid_argument);

    auto o = make_config(FormCase::orthogonal, 3, 2);
    MaximalFlats ocat(o);
    auto oconts = container_flats(o, ocat.flat(5), 1);
    CHECK(oconts.size() == 4);
    for (auto& T : oconts) CHECK(flats_in(ocat, T).size() == 6);

    // Brute force: dim-3 supersets of the direction with Gram rank 2.
    int brute = 0;
    for (auto& w : geometry::enumerate_subspaces(o.field, 4, 3))
        if (geometry::contains(o.field, w, ocat.flat(5).direction) && geometry::subspace_type(o, w).gram_rank == 2)
            ++brute;
    CHECK(brute == 4);
}

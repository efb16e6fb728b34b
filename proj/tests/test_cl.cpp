#include <doctest.h>

#include <numeric>
#include <random>

#include "clsets/cl.hpp"

using namespace clsets;
using namespace clsets::cl;
using field::FormCase;
using geometry::make_config;

namespace {

FlatSet all_flats(const MaximalFlats& cat) {
    std::vector<int> ids(cat.size());
    std::iota(ids.begin(), ids.end(), 0);
    return FlatSet::from_ids(cat, ids);
}

FlatSet random_subset(const MaximalFlats& cat, std::size_t size, std::uint64_t seed) {
    std::vector<int> ids(cat.size());
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), std::mt19937_64(seed));
    ids.resize(size);
    return FlatSet::from_ids(cat, ids);
}

// Direct neighbour count of F inside L for one relation class.
long neighbours(const scheme::RelationTable& rt, const FlatSet& l, int f, RelationIndex r) {
    long c = 0;
    for (int g : l.ids) c += rt.at(f, g) == r.position();
    return c;
}

struct Space {
    geometry::SpaceConfig cfg;
    MaximalFlats cat;
    Battery battery;
    Space(FormCase kind, int q, int nu) : cfg(make_config(kind, q, nu)), cat(cfg), battery(cat) {}
};

}  // namespace

TEST_CASE("parameter") {
    Space s(FormCase::symplectic, 2, 2);
    CHECK(cl_parameter(s.cat, FlatSet::from_ids(s.cat, {})) == 0);
    CHECK(construct_pencil(s.cat, 5).x == 1);
    CHECK(construct_pencil(s.cat, 5).size() == 15);
    CHECK(all_flats(s.cat).x == 4);
    CHECK(FlatSet::from_ids(s.cat, {0, 1}).x == Rational(2, 15));
    CHECK_THROWS_AS(FlatSet::from_ids(s.cat, {60}), std::out_of_range);
}

TEST_CASE("image and kernel routes") {
    Space s1(FormCase::symplectic, 2, 1);
    CHECK(s1.battery.test_image(all_flats(s1.cat)));
    CHECK(s1.battery.test_image(construct_pencil(s1.cat, 0)));
    auto single = FlatSet::from_ids(s1.cat, {0});
    CHECK_FALSE(s1.battery.test_image(single));
    CHECK_FALSE(s1.battery.test_kernel(single));

    Space s2(FormCase::symplectic, 2, 2);
    CHECK(s2.battery.test_image(construct_pencil(s2.cat, 7)));
    CHECK(s2.battery.test_kernel(construct_pencil(s2.cat, 7)));
    // dim ker M = |O| - rank M = 60 - 16.
    CHECK(s2.battery.kernel_basis().size() == 44);
}

TEST_CASE("spectrum route") {
    Space s(FormCase::symplectic, 2, 2);
    auto pencil = construct_pencil(s.cat, 0);
    CHECK(s.battery.test_spectrum(pencil));
    auto prof = scheme::relation_profile(s.battery.relations(), std::vector<std::int64_t>(pencil.chi.begin(), pencil.chi.end()));
    for (RelationIndex r : {RelationIndex{1, 0}, RelationIndex{1, 1}, RelationIndex{2, 0}})
        CHECK(scheme::projection_vanishes(s.battery.idempotents(), r.position(), prof, 5));

    auto comp = complement(s.cat, pencil);
    CHECK(s.battery.test_spectrum(comp));
    CHECK(comp.x == 3);
    // v = chi - x q^-nu j flips sign under complement.
    for (int f = 0; f < s.cat.size(); ++f) {
        Rational v = Rational(pencil.chi[f]) - pencil.x / 4;
        Rational vc = Rational(comp.chi[f]) - comp.x / 4;
        CHECK(vc == -v);
    }

    auto rnd = random_subset(s.cat, 15, 11);
    CHECK_FALSE(s.battery.test_spectrum(rnd));
    CHECK(s.battery.test_image(rnd) == s.battery.test_spectrum(rnd));
}

TEST_CASE("count route") {
    Space s(FormCase::symplectic, 2, 2);
    auto pencil = construct_pencil(s.cat, 0);
    const auto& rt = s.battery.relations();
    int in = pencil.ids.front();
    int out = -1;
    for (int f = 0; f < s.cat.size() && out < 0; ++f)
        if (!pencil.contains(f)) out = f;
    CHECK(neighbours(rt, pencil, in, {1, 0}) == 6);
    CHECK(neighbours(rt, pencil, in, {1, 1}) == 0);
    CHECK(neighbours(rt, pencil, out, {1, 1}) == 4);
    CHECK(s.battery.lemma310_expected(1, {1, 0}, true) == 6);
    CHECK(s.battery.lemma310_expected(1, {1, 1}, true) == 0);
    CHECK(s.battery.lemma310_expected(1, {1, 1}, false) == 4);
    CHECK(s.battery.test_counts(pencil));
    CHECK_FALSE(s.battery.test_counts(random_subset(s.cat, 15, 2)));
}

TEST_CASE("spread route") {
    Space s(FormCase::symplectic, 2, 2);
    auto full = s.battery.test_spreads(all_flats(s.cat));
    CHECK(full.pass());
    for (long c : full.intersections) CHECK(c == 4);

    auto pencil = s.battery.test_spreads(construct_pencil(s.cat, 3));
    CHECK(pencil.pass());
    CHECK(pencil.conclusive);
    CHECK(pencil.intersections.size() == 105);
    for (long c : pencil.intersections) CHECK(c == 1);

    Space s1(FormCase::symplectic, 2, 1);
    auto single = s1.battery.test_spreads(FlatSet::from_ids(s1.cat, {0}));
    CHECK_FALSE(single.pass());
    auto counts = single.intersections;
    std::sort(counts.begin(), counts.end());
    CHECK(counts == std::vector<long>{0, 0, 1});

    auto bad = spreads::type_I_spreads(s1.cat);
    bad[0].members.pop_back();
    CHECK_THROWS_AS(s1.battery.test_spreads(FlatSet::from_ids(s1.cat, {0}), bad, false), std::invalid_argument);
}

TEST_CASE("general count table") {
    Space s(FormCase::symplectic, 2, 2);
    auto pencil = construct_pencil(s.cat, 0);
    const auto& rt = s.battery.relations();
    int in = pencil.ids.front();
    CHECK(neighbours(rt, pencil, in, {0, 1}) == 0);
    CHECK(s.battery.lemma310_expected(1, {0, 1}, true) == 0);
    CHECK(neighbours(rt, pencil, in, {2, 0}) == 8);
    CHECK(s.battery.lemma310_expected(1, {2, 0}, true) == 8);

    auto full = all_flats(s.cat);
    for (auto r : scheme::relation_indices(2)) {
        CHECK(s.battery.lemma310_counts(pencil, r));
        CHECK(s.battery.lemma310_counts(full, r));
        CHECK(s.battery.lemma310_expected(full.x, r, true) == Rational(scheme::valency(s.cfg, r)));
    }
}

TEST_CASE("pencils under isometries") {
    Space s(FormCase::unitary, 4, 1);
    auto pencil = construct_pencil(s.cat, 0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto perm = flat_permutation(s.cat, geometry::random_isometry(s.cfg, seed));
        auto img = apply(s.cat, perm, pencil);
        CHECK(img.x == 1);
        CHECK(s.battery.test_kernel(img));
        CHECK(s.battery.test_spectrum(img));
    }
}

TEST_CASE("combinations") {
    Space s(FormCase::symplectic, 2, 2);
    auto pencil = construct_pencil(s.cat, 0);
    auto comp = combine(s.cat, pencil, pencil, CombineMode::complement);
    CHECK(comp.x == 3);
    CHECK(s.battery.test_kernel(comp));
    CHECK(combine(s.cat, all_flats(s.cat), pencil, CombineMode::difference) == comp);
    CHECK_THROWS_AS(combine(s.cat, pencil, construct_pencil(s.cat, 1), CombineMode::disjoint_union),
                    std::invalid_argument);
    CHECK_THROWS_AS(combine(s.cat, pencil, construct_pencil(s.cat, 1), CombineMode::difference), std::invalid_argument);
    CHECK_FALSE(pencils_disjoint(s.cfg, 0, 1));

    Space o(FormCase::orthogonal, 3, 2);
    int b = -1;
    for (int x = 1; x < o.cat.point_count() && b < 0; ++x)
        if (pencils_disjoint(o.cfg, 0, x)) b = x;
    REQUIRE(b > 0);
    auto u = combine(o.cat, construct_pencil(o.cat, 0), construct_pencil(o.cat, b), CombineMode::disjoint_union);
    CHECK(u.x == 2);
    CHECK(o.battery.test_kernel(u));
    CHECK(o.battery.test_image(u));
    CHECK(o.battery.test_spectrum(u));
    CHECK(o.battery.test_counts(u));
}

TEST_CASE("classification at nu = 1") {
    Space s(FormCase::symplectic, 2, 1);
    auto c = classify_nu1(s.battery);
    CHECK(c.sets.size() == 10);
    CHECK(c.by_x == std::map<long, long>{{0, 1}, {1, 8}, {2, 1}});
    CHECK(c.matches_cosets);
    CHECK(c.x1_maximum_intersecting);

    Space s3(FormCase::symplectic, 3, 1);
    auto c3 = classify_nu1(s3.battery);
    CHECK(c3.by_x[1] == 81);
    CHECK(c3.matches_cosets);
    CHECK(c3.x1_maximum_intersecting);

    Space two(FormCase::symplectic, 2, 2);
    CHECK_THROWS_AS(classify_nu1(two.battery), std::invalid_argument);
}

TEST_CASE("intersecting families") {
    Space s(FormCase::symplectic, 2, 2);
    auto v = intersecting_check(s.cat, construct_pencil(s.cat, 9));
    CHECK(v.is_intersecting);
    CHECK(v.is_maximum);
    CHECK_FALSE(intersecting_check(s.cat, complement(s.cat, construct_pencil(s.cat, 9))).is_intersecting);
    CHECK(clique_coclique_check(s.cat).passed());
    auto pencil = construct_pencil(s.cat, 0);
    for (const auto& sp : spreads::type_I_spreads(s.cat)) {
        int common = 0;
        for (int id : sp.members) common += pencil.contains(id);
        CHECK(common == 1);
    }
}

TEST_CASE("restriction to containers") {
    Space s(FormCase::symplectic, 2, 2);
    auto full = all_flats(s.cat);
    auto big = flats::container_flats(s.cfg, s.cat.flat(0), 1);
    REQUIRE(big.size() == 3);
    for (const auto& f : big) {
        auto r = restrict_cl(s.cat, full, f);
        CHECK(r.x_f == 2);
        CHECK(r.in_image);
        CHECK(r.within_bounds);
    }
    auto pts = flats::flat_points(s.cfg, big[0]);
    auto inside = restrict_cl(s.cat, construct_pencil(s.cat, pts[0]), big[0]);
    CHECK(inside.x_f == 1);
    CHECK(inside.in_image);
    int outside_pt = -1;
    for (int x = 0; x < s.cat.point_count() && outside_pt < 0; ++x)
        if (!std::binary_search(pts.begin(), pts.end(), x)) outside_pt = x;
    auto outside = restrict_cl(s.cat, construct_pencil(s.cat, outside_pt), big[0]);
    CHECK(outside.x_f == 0);
    CHECK(outside.ids.empty());
    CHECK_THROWS_AS(restrict_cl(s.cat, full, s.cat.flat(0)), std::invalid_argument);
    // A single flat restricted to a container holding it is not CL there.
    auto one = restrict_cl(s.cat, FlatSet::from_ids(s.cat, {0}), big[0]);
    CHECK_FALSE(one.in_image);
}

TEST_CASE("degree identity") {
    Space s(FormCase::symplectic, 2, 2);
    auto pencil = construct_pencil(s.cat, 0);
    auto d = degree_identity(s.cat, pencil, pencil.ids.front(), 1);
    CHECK(d.sum_x == 3);
    CHECK(d.holds);

    auto full = all_flats(s.cat);
    auto df = degree_identity(s.cat, full, 0, 1);
    CHECK(df.sum_x == Rational(2 * field::gauss_binomial(2, 1, 2)));
    CHECK(df.rhs == 4);

    auto comp = complement(s.cat, pencil);
    for (int f : comp.ids) CHECK(degree_identity(s.cat, comp, f, 1).holds);
    CHECK_THROWS_AS(degree_identity(s.cat, pencil, comp.ids.front(), 1), std::invalid_argument);
    CHECK_THROWS_AS(degree_identity(s.cat, pencil, pencil.ids.front(), 2), std::invalid_argument);
}

TEST_CASE("pencil distribution") {
    Space s(FormCase::symplectic, 2, 2);
    auto full = pencil_distribution(s.cat, all_flats(s.cat), 0, 1);
    CHECK(full.evaluated);
    CHECK(full.histogram == std::map<long, long>{{2, 3}});
    CHECK(full.count_identity);
    CHECK(full.weighted_identity);
    CHECK(full.bound_i);
    CHECK(full.branch == 'e');
    CHECK(full.branch_consistent);

    auto comp = complement(s.cat, construct_pencil(s.cat, 0));
    for (int f : comp.ids) {
        auto p = pencil_distribution(s.cat, comp, f, 1);
        REQUIRE(p.evaluated);
        long total = 0;
        for (auto [theta, n] : p.histogram) total += n;
        CHECK(total == 3);
        CHECK(p.count_identity);
        CHECK(p.weighted_identity);
        CHECK(p.bound_i);
        CHECK(p.branch_consistent);
    }
    auto pencil = construct_pencil(s.cat, 0);
    CHECK_FALSE(pencil_distribution(s.cat, pencil, pencil.ids.front(), 1).evaluated);

    // x = 9, m = 3: the bound (x-1)/(m-1) is a reducible fraction and |T_1| = 0 meets it.
    Space o(FormCase::orthogonal, 3, 2);
    auto top = pencil_distribution(o.cat, all_flats(o.cat), 0, 1);
    CHECK(top.histogram == std::map<long, long>{{3, 4}});
    CHECK(top.branch == 'e');
    CHECK(top.branch_consistent);

    // Complement of a pencil: x = 8, |T_1| = 0 below the bound 1/2, so ell = 1 and the
    // limit 4 - 7/2 is not above it; x >= 4 - 1 + 2 still holds.
    auto ocomp = complement(o.cat, construct_pencil(o.cat, 0));
    auto strict = pencil_distribution(o.cat, ocomp, ocomp.ids.front(), 1);
    CHECK(strict.branch == 'l');
    CHECK(strict.ell == 1);
    CHECK_FALSE(strict.ell_below_limit);
    CHECK(strict.branch_consistent);
}

TEST_CASE("search") {
    Space s(FormCase::symplectic, 2, 1);
    CHECK(search_cl(s.battery, 1, Strategy::exhaustive).size() == 8);
    auto top = search_cl(s.battery, 2, Strategy::exhaustive);
    REQUIRE(top.size() == 1);
    CHECK(top[0] == all_flats(s.cat));

    Space s2(FormCase::symplectic, 2, 2);
    auto pencils = search_cl(s2.battery, 1, Strategy::pencil_closure);
    CHECK(pencils.size() == 16);
    for (int x = 0; x < 16; ++x) CHECK(std::find(pencils.begin(), pencils.end(), construct_pencil(s2.cat, x)) != pencils.end());
    CHECK_THROWS_AS(search_cl(s2.battery, 1, Strategy::exhaustive), std::length_error);
    CHECK(search_cl(s2.battery, 1, Strategy::seeded_random, 4) == search_cl(s2.battery, 1, Strategy::seeded_random, 4));
    CHECK_THROWS_AS(strategy_from_string("greedy"), std::invalid_argument);
}

#include "clsets/cl.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace clsets::cl {

using field::gauss_binomial;
using field::int_pow;

namespace {

Rational ratio(const BigInt& num, const BigInt& den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

bool integral(const Rational& r) { return r.get_den() == 1; }

exact::IntRows transpose_rows(const exact::IntRows& a, std::size_t cols) {
    exact::IntRows t(cols, std::vector<long>(a.size(), 0));
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c) t[c][r] = a[r][c];
    return t;
}

}  // namespace

BigInt pencil_size(const geometry::SpaceConfig& cfg) { return field::isotropic_product(cfg.kind, cfg.q, 1, cfg.nu); }

FlatSet FlatSet::from_ids(const MaximalFlats& catalog, std::vector<int> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    FlatSet s;
    s.chi.assign(catalog.size(), 0);
    for (int id : ids) {
        if (id < 0 || id >= catalog.size()) throw std::out_of_range("FlatSet: flat id out of range");
        s.chi[id] = 1;
    }
    s.ids = std::move(ids);
    s.x = ratio(BigInt(static_cast<long>(s.ids.size())), pencil_size(catalog.config()));
    return s;
}

FlatSet FlatSet::from_chi(const MaximalFlats& catalog, std::vector<std::uint8_t> chi) {
    if (static_cast<int>(chi.size()) != catalog.size()) throw std::invalid_argument("FlatSet: length mismatch");
    std::vector<int> ids;
    for (int id = 0; id < catalog.size(); ++id)
        if (chi[id]) ids.push_back(id);
    return from_ids(catalog, std::move(ids));
}

Rational cl_parameter(const MaximalFlats& catalog, const FlatSet& l) {
    return ratio(BigInt(static_cast<long>(l.size())), pencil_size(catalog.config()));
}

Method method_from_string(const std::string& name) {
    if (name == "image") return Method::image;
    if (name == "kernel" || name == "auto") return Method::kernel;
    if (name == "spectrum") return Method::spectrum;
    if (name == "counts") return Method::counts;
    if (name == "spreads") return Method::spreads;
    throw std::invalid_argument("unknown method: " + name);
}

std::string to_string(Method m) {
    switch (m) {
        case Method::image: return "image";
        case Method::kernel: return "kernel";
        case Method::spectrum: return "spectrum";
        case Method::counts: return "counts";
        default: return "spreads";
    }
}

// Battery ---------------------------------------------------------------------

Battery::Battery(const MaximalFlats& catalog) : catalog_(&catalog), tables_(scheme::scheme_tables(catalog.config())) {}

const scheme::RelationTable& Battery::relations() const {
    if (!relations_) relations_ = std::make_unique<scheme::RelationTable>(*catalog_);
    return *relations_;
}

const scheme::ScaledIdempotents& Battery::idempotents() const {
    if (!idempotents_) idempotents_ = std::make_unique<scheme::ScaledIdempotents>(scheme::scaled_idempotents(tables_));
    return *idempotents_;
}

const std::vector<std::vector<std::int64_t>>& Battery::kernel_basis() const {
    if (!kernel_) {
        exact::ExactSystem m(flats::incidence_matrix(*catalog_).as_rows());
        std::vector<std::vector<std::int64_t>> out;
        for (const auto& k : m.nullspace()) {
            BigInt g = 0;
            for (const auto& v : k) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
            std::vector<std::int64_t> row;
            row.reserve(k.size());
            for (const auto& v : k) row.push_back(exact::to_int64(g == 0 ? v : BigInt(v / g)));
            out.push_back(std::move(row));
        }
        kernel_ = std::move(out);
    }
    return *kernel_;
}

const spreads::SpreadSearch& Battery::spread_family() const {
    if (!spreads_) spreads_ = std::make_unique<spreads::SpreadSearch>(spreads::enumerate_spreads(*catalog_));
    return *spreads_;
}

bool Battery::test_image(const FlatSet& l) const {
    if (!image_) {
        auto m = flats::incidence_matrix(*catalog_);
        image_ = std::make_unique<exact::ExactSystem>(transpose_rows(m.as_rows(), m.cols()));
    }
    exact::RationalVector b(l.chi.size());
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = l.chi[k];
    return image_->solve(b).has_value();
}

bool Battery::test_kernel(const FlatSet& l) const {
    for (const auto& k : kernel_basis()) {
        __int128 dot = 0;
        for (int id : l.ids) dot += k[id];
        if (dot != 0) return false;
    }
    return true;
}

std::vector<std::int64_t> Battery::profile(const FlatSet& l) const {
    std::vector<std::int64_t> w(l.chi.begin(), l.chi.end());
    return scheme::relation_profile(relations(), w);
}

bool Battery::test_spectrum(const FlatSet& l) const {
    const auto& s = idempotents();
    const int d = relations().classes();
    auto prof = profile(l);
    for (int j = 2; j < d; ++j)
        if (!scheme::projection_vanishes(s, j, prof, d)) return false;
    // scale_0 |O| E_(0,0) chi has every entry scale_0 |L|.
    BigInt want = s.scale[0] * static_cast<long>(l.size());
    for (auto y : scheme::project_scaled(s, 0, prof, d))
        if (BigInt(y) != want) return false;
    return true;
}

Rational Battery::lemma310_expected(const Rational& x, RelationIndex r, bool member) const {
    const auto& cfg = config();
    const int e2 = field::doubled_e(cfg.kind);
    const long i = r.i;
    Rational a = field::half_power(cfg.q, i * (i + e2 + 1)) * Rational(gauss_binomial(cfg.nu - 1, i, cfg.q));
    Rational b = field::half_power(cfg.q, i * (i + e2 - 1)) * Rational(gauss_binomial(cfg.nu - 1, i - 1, cfg.q));
    Rational out;
    if (r.xi == 0)
        out = member ? Rational(a + x * b) : Rational(x * b);
    else
        out = member ? Rational((x - 1) * a) : Rational(x * a);
    out.canonicalize();
    return out;
}

bool Battery::lemma310_counts(const FlatSet& l, RelationIndex r) const {
    scheme::check_index(config().nu, r);
    const int d = relations().classes(), pos = r.position();
    auto prof = profile(l);
    const Rational in = lemma310_expected(l.x, r, true), out = lemma310_expected(l.x, r, false);
    for (int f = 0; f < catalog_->size(); ++f)
        if (Rational(prof[static_cast<std::size_t>(f) * d + pos]) != (l.chi[f] ? in : out)) return false;
    return true;
}

bool Battery::test_counts(const FlatSet& l) const {
    if (!lemma310_counts(l, {1, 0})) return false;
    // At nu = 1 there is no (1,1) class; the table value there is 0.
    return config().nu < 2 || lemma310_counts(l, {1, 1});
}

namespace {

SpreadVerdict score_spreads(const FlatSet& l, const std::vector<spreads::Spread>& family, bool exhaustive) {
    SpreadVerdict v;
    v.conclusive = exhaustive;
    std::optional<long> first;
    for (const auto& s : family) {
        long c = 0;
        for (int id : s.members) c += l.chi[id];
        v.intersections.push_back(c);
        if (Rational(c) != l.x) v.meets_x = false;
        // |L cap (S1\S2)| - |L cap (S2\S1)| = |L cap S1| - |L cap S2|.
        if (!first) first = c;
        if (c != *first) v.switching_equal = false;
    }
    return v;
}

}  // namespace

SpreadVerdict Battery::test_spreads(const FlatSet& l) const {
    const auto& fam = spread_family();
    return score_spreads(l, fam.spreads, fam.exhaustive);
}

SpreadVerdict Battery::test_spreads(const FlatSet& l, const std::vector<spreads::Spread>& family, bool exhaustive) const {
    for (const auto& s : family)
        if (spreads::classify_set(*catalog_, s.members, s.scope) != spreads::SetKind::full_spread)
            throw std::invalid_argument("test_spreads: family member is not a spread");
    return score_spreads(l, family, exhaustive);
}

bool Battery::test(const FlatSet& l, Method m) const {
    switch (m) {
        case Method::image: return test_image(l);
        case Method::kernel: return test_kernel(l);
        case Method::spectrum: return test_spectrum(l);
        case Method::counts: return test_counts(l);
        default: return test_spreads(l).pass();
    }
}

// Constructions -----------------------------------------------------------------

FlatSet construct_pencil(const MaximalFlats& catalog, int point) {
    if (point < 0 || point >= catalog.point_count()) throw std::out_of_range("construct_pencil: point out of range");
    return FlatSet::from_ids(catalog, catalog.flats_through_point(point));
}

FlatSet complement(const MaximalFlats& catalog, const FlatSet& a) {
    std::vector<std::uint8_t> chi(catalog.size());
    for (int id = 0; id < catalog.size(); ++id) chi[id] = a.chi.at(id) ? 0 : 1;
    return FlatSet::from_chi(catalog, std::move(chi));
}

FlatSet combine(const MaximalFlats& catalog, const FlatSet& a, const FlatSet& b, CombineMode mode) {
    if (mode == CombineMode::complement) return complement(catalog, a);
    std::vector<std::uint8_t> chi = a.chi;
    for (int id : b.ids) {
        if (mode == CombineMode::disjoint_union) {
            if (chi[id]) throw std::invalid_argument("combine: sets are not disjoint");
            chi[id] = 1;
        } else {
            if (!chi[id]) throw std::invalid_argument("combine: second set is not contained in the first");
            chi[id] = 0;
        }
    }
    return FlatSet::from_chi(catalog, std::move(chi));
}

std::vector<int> flat_permutation(const MaximalFlats& catalog, const geometry::Isometry& g) {
    const auto& f = catalog.config().field;
    std::vector<int> out(catalog.size());
    for (int id = 0; id < catalog.size(); ++id) {
        const auto& fl = catalog.flat(id);
        out[id] = catalog.id_of(flats::flat_make(f, g.apply(f, fl.direction), g.apply(f, fl.rep)));
        if (out[id] < 0) throw std::logic_error("flat_permutation: image is not a maximal flat");
    }
    return out;
}

FlatSet apply(const MaximalFlats& catalog, const std::vector<int>& perm, const FlatSet& l) {
    std::vector<int> ids;
    for (int id : l.ids) ids.push_back(perm.at(id));
    return FlatSet::from_ids(catalog, std::move(ids));
}

// nu = 1 ---------------------------------------------------------------------------

Nu1Classification classify_nu1(const Battery& b) {
    const auto& cat = b.catalog();
    if (b.config().nu != 1) throw std::invalid_argument("classify_nu1: needs nu = 1");
    const int n = cat.size();
    if (n > kExhaustiveSubsetBound) throw std::length_error("classify_nu1: more than 24 flats");

    Nu1Classification out;
    std::set<std::uint32_t> found;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        std::vector<int> ids;
        for (int id = 0; id < n; ++id)
            if (mask >> id & 1) ids.push_back(id);
        auto l = FlatSet::from_ids(cat, std::move(ids));
        if (!b.test_image(l)) continue;
        found.insert(mask);
        ++out.by_x[integral(l.x) ? l.x.get_num().get_si() : -1];
        out.sets.push_back(std::move(l));
    }

    // Choose the same number x of cosets in every direction.
    const int c = cat.cosets_per_direction(), dirs = n / c;
    std::set<std::uint32_t> predicted;
    for (int x = 0; x <= c; ++x) {
        std::vector<std::uint32_t> picks;
        for (std::uint32_t m = 0; m < (std::uint32_t{1} << c); ++m)
            if (std::popcount(m) == x) picks.push_back(m);
        std::vector<std::uint32_t> acc{0};
        for (int d = 0; d < dirs; ++d) {
            std::vector<std::uint32_t> next;
            for (auto base : acc)
                for (auto p : picks) next.push_back(base | p << (d * c));
            acc = std::move(next);
        }
        predicted.insert(acc.begin(), acc.end());
    }
    out.matches_cosets = predicted == found;

    out.x1_maximum_intersecting = true;
    for (const auto& l : out.sets)
        if (l.x == 1 && !intersecting_check(cat, l).is_maximum) out.x1_maximum_intersecting = false;
    return out;
}

// Intersecting families -----------------------------------------------------------------

IntersectingVerdict intersecting_check(const MaximalFlats& catalog, const FlatSet& l) {
    IntersectingVerdict v;
    v.is_intersecting = true;
    std::vector<char> mark(catalog.point_count());
    for (std::size_t a = 0; a < l.ids.size() && v.is_intersecting; ++a) {
        std::fill(mark.begin(), mark.end(), 0);
        for (int x : catalog.points_of(l.ids[a])) mark[x] = 1;
        for (std::size_t b = a + 1; b < l.ids.size(); ++b) {
            bool meet = false;
            for (int x : catalog.points_of(l.ids[b]))
                if (mark[x]) {
                    meet = true;
                    break;
                }
            if (!meet) {
                v.is_intersecting = false;
                break;
            }
        }
    }
    v.is_maximum = v.is_intersecting && BigInt(static_cast<long>(l.size())) == pencil_size(catalog.config());
    return v;
}

Report clique_coclique_check(const MaximalFlats& catalog) {
    Report r;
    const BigInt order = catalog.size();
    const BigInt pencil = pencil_size(catalog.config());
    const long spread = catalog.cosets_per_direction();
    const int dirs = static_cast<int>(catalog.directions().size());
    long above = 0, equality_bad = 0;
    for (int x = 0; x < catalog.point_count(); ++x) {
        std::vector<long> per_dir(dirs, 0);
        for (int id : catalog.flats_through_point(x)) ++per_dir[catalog.direction_of(id)];
        const BigInt product = BigInt(static_cast<long>(catalog.flats_through_point(x).size())) * spread;
        for (int d = 0; d < dirs; ++d) {
            if (product > order) ++above;
            if (product == order && per_dir[d] != 1) ++equality_bad;
        }
    }
    r.add("pencil size", pencil.get_str(), std::to_string(catalog.flats_through_point(0).size()));
    r.add("pencil x spread pairs above |O|", "0", std::to_string(above));
    r.add("equality pairs with |C cap A| != 1", "0", std::to_string(equality_bad));
    return r;
}

// Restriction -----------------------------------------------------------------------------

Restriction restrict_cl(const MaximalFlats& catalog, const FlatSet& l, const Flat& big) {
    const auto& cfg = catalog.config();
    Restriction out;
    out.container = big;
    if (!flats::is_container(cfg, big, &out.i)) throw std::invalid_argument("restrict_cl: not a container flat");
    auto inc = flats::incidence_matrix_in(catalog, big);
    exact::RationalVector chi(inc.cols());
    for (int c = 0; c < inc.cols(); ++c) {
        int id = inc.flats[c];
        chi[c] = l.chi.at(id);
        if (l.chi[id]) out.ids.push_back(id);
    }
    exact::ExactSystem ft(transpose_rows(inc.as_rows(), inc.cols()));
    out.in_image = ft.solve(chi).has_value();
    out.x_f = ratio(BigInt(static_cast<long>(out.ids.size())), field::isotropic_product(cfg.kind, cfg.q, 1, out.i));
    out.integral = integral(out.x_f);
    Rational cap = std::min(l.x, Rational(int_pow(cfg.q, out.i)));
    out.within_bounds = out.x_f >= 0 && out.x_f <= cap;
    return out;
}

DegreeIdentity degree_identity(const MaximalFlats& catalog, const FlatSet& l, int s, int i) {
    const auto& cfg = catalog.config();
    if (s < 0 || s >= catalog.size() || !l.contains(s)) throw std::invalid_argument("degree_identity: S is not in L");
    if (i < 1 || i >= cfg.nu) throw std::invalid_argument("degree_identity: need 1 <= i < nu");
    DegreeIdentity out;
    out.s = s;
    out.i = i;
    out.sum_x = 0;
    for (const auto& t : flats::container_flats(cfg, catalog.flat(s), i)) {
        out.containers.push_back(restrict_cl(catalog, l, t));
        out.sum_x += out.containers.back().x_f;
    }
    out.rhs = out.sum_x / Rational(gauss_binomial(cfg.nu - 1, cfg.nu - i, cfg.q)) -
              ratio(int_pow(cfg.q, cfg.nu) - 1, int_pow(cfg.q, i) - 1) + 1;
    out.rhs.canonicalize();
    out.holds = out.rhs == l.x;
    return out;
}

PencilProfile pencil_distribution(const MaximalFlats& catalog, const FlatSet& l, int s, int i) {
    const auto& cfg = catalog.config();
    auto deg = degree_identity(catalog, l, s, i);
    PencilProfile p;
    p.s = s;
    p.i = i;
    p.integral = true;
    for (const auto& r : deg.containers) {
        p.containers.push_back(r.container);
        p.x_t.push_back(r.x_f);
        if (!r.integral) p.integral = false;
    }
    if (!p.integral) return p;
    for (const auto& x : p.x_t) ++p.histogram[x.get_num().get_si()];
    if (!integral(l.x) || l.x < 2) return p;
    p.evaluated = true;

    const BigInt big_b = gauss_binomial(cfg.nu, cfg.nu - i, cfg.q);
    const BigInt small_b = gauss_binomial(cfg.nu - 1, cfg.nu - i, cfg.q);
    const long x = l.x.get_num().get_si();
    const long m = std::min<long>(x, int_pow(cfg.q, i).get_si());
    auto count = [&](long theta) {
        auto it = p.histogram.find(theta);
        return it == p.histogram.end() ? 0L : it->second;
    };
    long total = 0, weighted = 0;
    for (long th = 1; th <= m; ++th) total += count(th);
    for (long th = 2; th <= m; ++th) weighted += (th - 1) * count(th);
    p.count_identity = BigInt(total) == big_b;
    p.weighted_identity = BigInt(x - 1) * small_b == BigInt(weighted);

    const Rational share = ratio(x - 1, m - 1) * Rational(small_b);
    const Rational limit = Rational(big_b) - share;
    const long t1 = count(1);
    p.bound_i = Rational(t1) <= limit;
    if (Rational(t1) == limit) {
        p.branch = 'e';
        bool ok = Rational(count(m)) == share;
        for (long th = 2; th < m; ++th) ok = ok && count(th) == 0;
        p.branch_consistent = ok;
    } else {
        p.branch = 'l';
        p.ell = BigInt(BigInt(t1) / small_b).get_si() + 1;
        const Rational ratio_q = ratio(int_pow(cfg.q, cfg.nu) - 1, int_pow(cfg.q, i) - 1);
        p.ell_below_limit = Rational(p.ell) < ratio_q - ratio(x - 1, m - 1);
        p.branch_consistent = BigInt(p.ell - 1) * small_b <= BigInt(t1) && BigInt(t1) < BigInt(p.ell) * small_b &&
                              Rational(x) >= ratio_q - p.ell + 2;
    }
    return p;
}

// Search -------------------------------------------------------------------------------------

Strategy strategy_from_string(const std::string& name) {
    if (name == "exhaustive") return Strategy::exhaustive;
    if (name == "pencil_closure") return Strategy::pencil_closure;
    if (name == "seeded_random") return Strategy::seeded_random;
    throw std::invalid_argument("unknown strategy: " + name);
}

bool pencils_disjoint(const geometry::SpaceConfig& cfg, int a, int b) {
    if (a == b) return false;
    auto d = geometry::vec_sub(cfg.field, geometry::point_vector(cfg, a), geometry::point_vector(cfg, b));
    return !geometry::is_isotropic(cfg, d);
}

namespace {

bool full_battery(const Battery& b, const FlatSet& l) {
    return b.test_kernel(l) && b.test_image(l) && b.test_spectrum(l) && b.test_counts(l);
}

}  // namespace

std::vector<FlatSet> search_cl(const Battery& b, long x_target, Strategy strategy, std::uint64_t seed) {
    const auto& cat = b.catalog();
    const int n = cat.size();
    const BigInt want_size = BigInt(x_target) * pencil_size(b.config());
    std::vector<FlatSet> out;
    if (x_target < 0 || want_size > n) return out;
    const long k = want_size.get_si();

    std::set<std::vector<int>> seen;
    auto consider = [&](FlatSet l) {
        if (static_cast<long>(l.size()) != k || seen.count(l.ids)) return;
        if (!full_battery(b, l)) return;
        seen.insert(l.ids);
        out.push_back(std::move(l));
    };

    switch (strategy) {
        case Strategy::exhaustive: {
            if (n > kExhaustiveSubsetBound) throw std::length_error("search_cl: exhaustive search above 24 flats");
            for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
                if (std::popcount(mask) != k) continue;
                std::vector<int> ids;
                for (int id = 0; id < n; ++id)
                    if (mask >> id & 1) ids.push_back(id);
                consider(FlatSet::from_ids(cat, std::move(ids)));
            }
            break;
        }
        case Strategy::pencil_closure: {
            const int np = cat.point_count();
            auto full = FlatSet::from_ids(cat, [&] {
                std::vector<int> all(n);
                std::iota(all.begin(), all.end(), 0);
                return all;
            }());
            consider(FlatSet::from_ids(cat, {}));
            consider(full);
            for (int a = 0; a < np; ++a) {
                auto pa = construct_pencil(cat, a);
                consider(pa);
                consider(complement(cat, pa));
                for (int c = a + 1; c < np; ++c) {
                    if (!pencils_disjoint(b.config(), a, c)) continue;
                    auto u = combine(cat, pa, construct_pencil(cat, c), CombineMode::disjoint_union);
                    consider(complement(cat, u));
                    consider(std::move(u));
                }
            }
            break;
        }
        case Strategy::seeded_random: {
            std::mt19937_64 rng(seed);
            std::vector<int> all(n);
            std::iota(all.begin(), all.end(), 0);
            for (int trial = 0; trial < kRandomSearchTrials; ++trial) {
                std::shuffle(all.begin(), all.end(), rng);
                consider(FlatSet::from_ids(cat, std::vector<int>(all.begin(), all.begin() + k)));
            }
            break;
        }
    }
    std::sort(out.begin(), out.end(), [](const FlatSet& a, const FlatSet& c) { return a.ids < c.ids; });
    return out;
}

}  // namespace clsets::cl

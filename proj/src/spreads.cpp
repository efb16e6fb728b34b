#include "clsets/spreads.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

namespace clsets::spreads {

using geometry::Vec;
using scheme::RelationIndex;

std::string to_string(SpreadType t) {
    switch (t) {
        case SpreadType::I: return "I";
        case SpreadType::II: return "II";
        default: return "other";
    }
}

std::string to_string(SetKind k) {
    switch (k) {
        case SetKind::partial_spread: return "partial_spread";
        case SetKind::full_spread: return "full_spread";
        default: return "neither";
    }
}

namespace {

int direction_or_throw(const MaximalFlats& catalog, const Subspace& p, const char* what) {
    int d = catalog.direction_index(p);
    if (d < 0) throw std::invalid_argument(std::string(what) + ": not a maximal totally isotropic subspace");
    return d;
}

bool is_type_II_base(const geometry::SpaceConfig& cfg, const Subspace& q) {
    auto t = geometry::subspace_type(cfg, q);
    return t.dim == cfg.nu + 1 && t.gram_rank == 2;
}

std::vector<Flat> translates(const geometry::SpaceConfig& cfg, const Subspace& q) {
    std::set<Flat> seen;
    for (int x = 0; x < cfg.point_count(); ++x) seen.insert(flats::flat_make(cfg.field, q, geometry::point_vector(cfg, x)));
    return {seen.begin(), seen.end()};
}

}  // namespace

Spread spread_type_I(const MaximalFlats& catalog, const Subspace& p) {
    int d = direction_or_throw(catalog, p, "spread_type_I");
    Spread s;
    const int c = catalog.cosets_per_direction();
    for (int id = d * c; id < (d + 1) * c; ++id) s.members.push_back(id);
    s.type = SpreadType::I;
    return s;
}

Spread spread_type_II(const MaximalFlats& catalog, const Flat& q, const Subspace& p1, const Subspace& p2) {
    const auto& cfg = catalog.config();
    const auto& f = cfg.field;
    if (cfg.nu < 2) throw std::invalid_argument("spread_type_II: needs nu >= 2");
    if (!is_type_II_base(cfg, q.direction)) throw std::invalid_argument("spread_type_II: Q is not of type (nu+1, 2)");
    int d1 = direction_or_throw(catalog, p1, "spread_type_II");
    int d2 = direction_or_throw(catalog, p2, "spread_type_II");
    if (d1 == d2) throw std::invalid_argument("spread_type_II: P1 == P2");
    if (!geometry::contains(f, q.direction, p1) || !geometry::contains(f, q.direction, p2))
        throw std::invalid_argument("spread_type_II: P1 and P2 must lie in Q");
    std::set<int> ids;
    for (int x = 0; x < cfg.point_count(); ++x) {
        Vec y = geometry::point_vector(cfg, x);
        ids.insert(catalog.id_through(flats::flat_contains_point(f, q, y) ? d1 : d2, y));
    }
    Spread s;
    s.members.assign(ids.begin(), ids.end());
    s.type = SpreadType::II;
    return s;
}

Spread spread_type_II(const MaximalFlats& catalog, const Subspace& q, const Subspace& p1, const Subspace& p2) {
    return spread_type_II(catalog, Flat{q, geometry::zero_vec(catalog.config().dim())}, p1, p2);
}

std::vector<Subspace> type_II_bases(const MaximalFlats& catalog) {
    const auto& cfg = catalog.config();
    if (cfg.nu < 2) return {};
    std::set<Subspace> out;
    const int c = catalog.cosets_per_direction();
    for (int d = 0; d < static_cast<int>(catalog.directions().size()); ++d)
        for (const auto& big : flats::container_flats(cfg, catalog.flat(d * c), 1)) out.insert(big.direction);
    return {out.begin(), out.end()};
}

std::vector<int> interior_directions(const MaximalFlats& catalog, const Subspace& q) {
    std::vector<int> out;
    const auto& dirs = catalog.directions();
    for (int d = 0; d < static_cast<int>(dirs.size()); ++d)
        if (geometry::contains(catalog.config().field, q, dirs[d])) out.push_back(d);
    return out;
}

std::vector<Spread> type_I_spreads(const MaximalFlats& catalog) {
    std::vector<Spread> out;
    for (const auto& p : catalog.directions()) out.push_back(spread_type_I(catalog, p));
    return out;
}

std::vector<Spread> type_II_spreads(const MaximalFlats& catalog) {
    const auto& cfg = catalog.config();
    std::map<std::vector<int>, Spread> found;
    const auto& dirs = catalog.directions();
    for (const auto& q : type_II_bases(catalog)) {
        auto inner = interior_directions(catalog, q);
        for (const auto& qz : translates(cfg, q))
            for (int a : inner)
                for (int b : inner) {
                    if (a == b) continue;
                    auto s = spread_type_II(catalog, qz, dirs[a], dirs[b]);
                    found.emplace(s.members, std::move(s));
                }
    }
    std::vector<Spread> out;
    for (auto& [k, s] : found) out.push_back(std::move(s));
    return out;
}

SpreadType spread_type(const MaximalFlats& catalog, const std::vector<int>& members) {
    std::map<int, std::vector<int>> by_dir;
    for (int id : members) by_dir[catalog.direction_of(id)].push_back(id);
    if (by_dir.size() == 1) return SpreadType::I;
    const auto& cfg = catalog.config();
    if (by_dir.size() != 2 || cfg.nu < 2 || classify_set(catalog, members) != SetKind::full_spread)
        return SpreadType::other;
    auto it = by_dir.begin();
    const auto& [da, ida] = *it++;
    const auto& [db, idb] = *it;
    const auto& dirs = catalog.directions();
    auto q = geometry::subspace_sum(cfg.field, dirs[da], dirs[db]);
    if (!is_type_II_base(cfg, q)) return SpreadType::other;
    std::vector<int> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    for (auto [d1, d2, first] : {std::tuple{da, db, ida.front()}, std::tuple{db, da, idb.front()}}) {
        Flat qz = flats::flat_make(cfg.field, q, catalog.flat(first).rep);
        if (spread_type_II(catalog, qz, dirs[d1], dirs[d2]).members == sorted) return SpreadType::II;
    }
    return SpreadType::other;
}

SetKind classify_set(const MaximalFlats& catalog, const std::vector<int>& members, const std::optional<Flat>& scope) {
    const auto& cfg = catalog.config();
    std::vector<char> covered(cfg.point_count(), 0);
    std::size_t total = 0;
    std::set<int> seen;
    for (int id : members) {
        if (id < 0 || id >= catalog.size() || !seen.insert(id).second) return SetKind::neither;
        if (scope && !flats::flat_contains(cfg.field, *scope, catalog.flat(id))) return SetKind::neither;
        for (int x : catalog.points_of(id)) {
            if (covered[x]) return SetKind::neither;
            covered[x] = 1;
            ++total;
        }
    }
    std::size_t scope_points = scope ? flats::flat_points(cfg, *scope).size() : cfg.point_count();
    return total == scope_points ? SetKind::full_spread : SetKind::partial_spread;
}

bool is_switching_pair(const MaximalFlats& catalog, const std::vector<int>& r1, const std::vector<int>& r2) {
    if (classify_set(catalog, r1) == SetKind::neither || classify_set(catalog, r2) == SetKind::neither) return false;
    std::set<int> a(r1.begin(), r1.end());
    for (int id : r2)
        if (a.count(id)) return false;
    auto cover = [&](const std::vector<int>& r) {
        std::vector<int> pts;
        for (int id : r) pts.insert(pts.end(), catalog.points_of(id).begin(), catalog.points_of(id).end());
        std::sort(pts.begin(), pts.end());
        return pts;
    };
    return cover(r1) == cover(r2);
}

SpreadSearch enumerate_spreads(const MaximalFlats& catalog, const std::optional<Flat>& scope) {
    const auto& cfg = catalog.config();
    std::vector<int> points, candidates;
    if (scope) {
        points = flats::flat_points(cfg, *scope);
        candidates = flats::flats_in(catalog, *scope);
    } else {
        for (int x = 0; x < cfg.point_count(); ++x) points.push_back(x);
        for (int id = 0; id < catalog.size(); ++id) candidates.push_back(id);
    }

    SpreadSearch out;
    if (static_cast<int>(points.size()) > kExhaustiveSpreadPoints) {
        if (!scope) {
            out.spreads = type_I_spreads(catalog);
            for (auto& s : type_II_spreads(catalog)) out.spreads.push_back(std::move(s));
        } else {
            std::map<int, std::vector<int>> by_dir;
            for (int id : candidates) by_dir[catalog.direction_of(id)].push_back(id);
            for (auto& [d, ids] : by_dir) out.spreads.push_back({ids, scope, SpreadType::I});
        }
        return out;
    }

    std::map<int, int> local;
    for (int k = 0; k < static_cast<int>(points.size()); ++k) local[points[k]] = k;
    std::vector<std::uint64_t> mask(candidates.size(), 0);
    std::vector<std::vector<int>> through(points.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        for (int x : catalog.points_of(candidates[c])) mask[c] |= std::uint64_t{1} << local.at(x);
        through[std::countr_zero(mask[c])].push_back(static_cast<int>(c));
    }
    // Every candidate is listed under its smallest point only, so each
    // partition is produced once.
    const std::uint64_t full = points.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << points.size()) - 1;
    std::vector<int> chosen;
    std::vector<std::vector<int>> found;
    auto search = [&](auto&& self, std::uint64_t covered) -> void {
        if (covered == full) {
            auto ids = chosen;
            std::sort(ids.begin(), ids.end());
            found.push_back(std::move(ids));
            return;
        }
        int k = std::countr_zero(~covered);
        for (int c : through[k]) {
            if (mask[c] & covered) continue;
            chosen.push_back(candidates[c]);
            self(self, covered | mask[c]);
            chosen.pop_back();
        }
    };
    search(search, 0);
    std::sort(found.begin(), found.end());
    for (auto& ids : found) {
        SpreadType t = spread_type(catalog, ids);
        out.spreads.push_back({std::move(ids), scope, t});
    }
    out.exhaustive = true;
    return out;
}

namespace {

std::vector<std::int64_t> indicator(int n, const std::vector<int>& ids) {
    std::vector<std::int64_t> w(n, 0);
    for (int id : ids) w[id] = 1;
    return w;
}

void add_rank(Report& r, const std::string& name, const StackRank& s) {
    r.add(name + " mod-p rank reaches target", std::to_string(s.target), std::to_string(s.lower));
    r.add_bool(name + " rows lie in the target space", s.upper_holds);
}

}  // namespace

Report typeI_span_check(const MaximalFlats& catalog, const scheme::SchemeTables& t, const scheme::RelationTable& rt) {
    Report r;
    const auto& cfg = catalog.config();
    const int n = catalog.size();
    auto family = type_I_spreads(catalog);
    auto scaled = scheme::scaled_idempotents(t);

    BigInt sum_m0 = 0;
    for (int j = 0; j <= cfg.nu; ++j) sum_m0 += t.multiplicities[RelationIndex{j, 0}.position()];
    BigInt product = field::isotropic_product(cfg.kind, cfg.q, 1, cfg.nu);
    r.add("sum of m_(j,0) equals the pencil size", product.get_str(), sum_m0.get_str());

    std::vector<int> seen(n, 0);
    bool disjoint = true;
    for (const auto& s : family)
        for (int id : s.members)
            if (seen[id]++) disjoint = false;
    r.add_bool("distinct type-I spreads share no flat", disjoint);

    int vanish_fail = 0;
    for (const auto& s : family) {
        auto prof = scheme::relation_profile(rt, indicator(n, s.members));
        for (int j = 0; j < cfg.nu; ++j)
            if (!scheme::projection_vanishes(scaled, RelationIndex{j, 1}.position(), prof, rt.classes())) ++vanish_fail;
    }
    r.add("E_(j,1) chi = 0 failures", "0", std::to_string(vanish_fail));

    StackRank sr;
    sr.rows = family.size();
    sr.target = static_cast<std::size_t>(exact::to_int64(sum_m0));
    sr.upper_holds = vanish_fail == 0;
    std::vector<std::vector<int>> supports;
    for (const auto& s : family) supports.push_back(s.members);
    sr.lower = exact::support_rank_mod_p(supports, n, sr.target);
    add_rank(r, "type-I stack", sr);
    r.add("type-I stack rank", std::to_string(sr.target), sr.exact() ? std::to_string(sr.target) : "unresolved");
    return r;
}

Report typeII_span_check(const MaximalFlats& catalog, const scheme::SchemeTables& t, const scheme::RelationTable& rt) {
    const auto& cfg = catalog.config();
    if (cfg.nu < 2) throw std::invalid_argument("typeII_span_check: needs nu >= 2");
    Report r;
    const int n = catalog.size();
    auto family = type_II_spreads(catalog);
    auto scaled = scheme::scaled_idempotents(t);
    r.add_bool("type-II family is nonempty", !family.empty());

    int spread_fail = 0;
    for (const auto& s : family)
        if (classify_set(catalog, s.members) != SetKind::full_spread ||
            static_cast<int>(s.members.size()) != catalog.cosets_per_direction())
            ++spread_fail;
    r.add("type-II members that are not spreads of size q^nu", "0", std::to_string(spread_fail));

    const int classes = rt.classes();
    std::vector<int> nonzero_fail(classes, 0);
    int vanish_fail = 0;
    const int e01 = RelationIndex{0, 1}.position();
    for (const auto& s : family) {
        auto prof = scheme::relation_profile(rt, indicator(n, s.members));
        if (!scheme::projection_vanishes(scaled, e01, prof, classes)) ++vanish_fail;
        for (int pos = 2; pos < classes; ++pos)
            if (scheme::projection_vanishes(scaled, pos, prof, classes)) ++nonzero_fail[pos];
    }
    r.add("E_(0,1) chi = 0 failures", "0", std::to_string(vanish_fail));
    for (int pos = 2; pos < classes; ++pos)
        r.add("E_" + scheme::index_at(pos).str() + " chi != 0 failures", "0", std::to_string(nonzero_fail[pos]));

    StackRank sr;
    sr.rows = family.size();
    sr.target = static_cast<std::size_t>(n) - static_cast<std::size_t>(exact::to_int64(t.multiplicities[e01]));
    sr.upper_holds = vanish_fail == 0;
    std::vector<std::vector<int>> supports;
    for (const auto& s : family) supports.push_back(s.members);
    // Seeded shuffle: neighbouring rows share a base and are highly dependent.
    std::shuffle(supports.begin(), supports.end(), std::mt19937_64(0));
    sr.lower = exact::support_rank_mod_p(supports, n, sr.target);
    add_rank(r, "type-II stack", sr);
    r.add("type-II stack rank", std::to_string(sr.target), sr.exact() ? std::to_string(sr.target) : "unresolved");
    return r;
}

}  // namespace clsets::spreads

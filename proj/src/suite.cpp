#include "clsets/suite.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <sstream>

#include "clsets/exact.hpp"
#include "clsets/field.hpp"
#include "clsets/flats.hpp"
#include "clsets/geometry.hpp"
#include "clsets/scheme.hpp"
#include "clsets/spreads.hpp"

namespace clsets::suite {

using field::FormCase;
using field::gauss_binomial;
using field::half_power_int;
using field::int_pow;
using field::isotropic_product;

std::string GridPoint::str() const {
    return field::to_string(kind) + " (" + std::to_string(q) + "," + std::to_string(nu) + ")";
}

std::vector<GridPoint> standard_grid() {
    return {{FormCase::symplectic, 2, 1}, {FormCase::symplectic, 3, 1}, {FormCase::symplectic, 2, 2},
            {FormCase::symplectic, 3, 2}, {FormCase::symplectic, 2, 3}, {FormCase::unitary, 4, 1},
            {FormCase::unitary, 4, 2},    {FormCase::orthogonal, 3, 1}, {FormCase::orthogonal, 5, 1},
            {FormCase::orthogonal, 3, 2}};
}

namespace {

std::string str(std::size_t v) { return std::to_string(v); }
std::string str(const BigInt& v) { return v.get_str(); }

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? "," : "") + parts[k];
    return out;
}

bool integral(const Rational& r) { return r.get_den() == 1; }

// Valuation grid: fields admitted by each case.
std::vector<std::pair<FormCase, int>> valuation_fields() {
    return {{FormCase::symplectic, 2}, {FormCase::symplectic, 3}, {FormCase::symplectic, 5},
            {FormCase::orthogonal, 3}, {FormCase::orthogonal, 5}, {FormCase::unitary, 4},
            {FormCase::unitary, 9}};
}

std::string field_label(FormCase kind, int q) { return field::to_string(kind) + " q=" + std::to_string(q); }

}  // namespace

Report flat_counts(const geometry::SpaceConfig& cfg) {
    Report r;
    const int nu = cfg.nu, q = cfg.q;
    std::vector<std::vector<flats::Flat>> by_dim;
    for (int m = 0; m <= nu; ++m) {
        by_dim.push_back(flats::enumerate_flats(cfg, m));
        BigInt want = int_pow(q, 2 * nu - m) * gauss_binomial(nu, m, q) * isotropic_product(cfg.kind, q, nu - m + 1, nu);
        r.add("|O_" + std::to_string(m) + "|", str(want), str(by_dim.back().size()));
    }
    for (int i = 0; i <= nu; ++i) {
        const auto& pool = by_dim[i];
        for (const auto* f : {&pool.front(), &pool.back()})
            for (int j = i; j <= nu; ++j) {
                BigInt want = gauss_binomial(nu - i, j - i, q) * isotropic_product(cfg.kind, q, nu - j + 1, nu - i);
                r.add("|O'_" + std::to_string(j) + "(F)|, F of dimension " + std::to_string(i), str(want),
                      str(flats::flats_through(cfg, *f, j).size()));
            }
    }
    return r;
}

Report incidence_rank(const flats::MaximalFlats& catalog) {
    const auto& cfg = catalog.config();
    BigInt want = (int_pow(cfg.q, cfg.nu) - 1) * (half_power_int(cfg.q, 2 * (cfg.nu - 1) + cfg.e2) + 1) + 1;
    Report r;
    r.add("rank M", str(want), str(exact::certified_rank(flats::incidence_matrix(catalog).as_rows())));
    return r;
}

Report gram_identity(const flats::MaximalFlats& catalog) {
    const auto& cfg = catalog.config();
    const int n = catalog.point_count();
    std::vector<long> gram(static_cast<std::size_t>(n) * n, 0);
    for (int id = 0; id < catalog.size(); ++id) {
        const auto& pts = catalog.points_of(id);
        for (int a : pts)
            for (int b : pts) ++gram[static_cast<std::size_t>(a) * n + b];
    }
    const long diag = exact::to_int64(isotropic_product(cfg.kind, cfg.q, 1, cfg.nu));
    const long adj = exact::to_int64(isotropic_product(cfg.kind, cfg.q, 1, cfg.nu - 1));
    auto g = geometry::point_graph(cfg);
    long bad = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            long want = a == b ? diag : (g.adjacent(a, b) ? adj : 0);
            bad += gram[static_cast<std::size_t>(a) * n + b] != want;
        }
    Report r;
    r.add("M M^T entries off the point-graph identity", "0", std::to_string(bad));
    return r;
}

Report point_graph_check(const geometry::SpaceConfig& cfg) {
    const long v = cfg.point_count();
    geometry::SrgParameters want{};
    if (cfg.kind == FormCase::symplectic) {
        want = {v, v - 1, v - 2, 0};
    } else {
        // h = q^{nu+e-1}
        const long h = exact::to_int64(half_power_int(cfg.q, 2 * (cfg.nu - 1) + cfg.e2));
        const long qn = exact::to_int64(int_pow(cfg.q, cfg.nu));
        want = {v, (qn - 1) * (h + 1), h * h + qn - h - 2, h * (h + 1)};
    }
    auto fmt = [](const geometry::SrgParameters& p) {
        std::ostringstream os;
        os << "(" << p.v << "," << p.k << "," << p.lambda << "," << p.mu << ")";
        return os.str();
    };
    auto got = geometry::strongly_regular_parameters(geometry::point_graph(cfg));
    Report r;
    r.add("point graph parameters", fmt(want), got ? fmt(*got) : "not strongly regular");
    return r;
}

Report scheme_check(const cl::Battery& b) {
    Report r;
    r.merge("tables: ", scheme::check_tables(b.tables()));
    r.merge("idempotents: ", scheme::verify_idempotents(b.tables(), b.relations()));
    r.merge("axioms: ", scheme::verify_scheme(b.relations()));
    return r;
}

Report valency_check(const cl::Battery& b) {
    const auto& rt = b.relations();
    const auto& t = b.tables();
    const int n = rt.size();
    Report r;
    BigInt total = 0;
    std::vector<std::string> vals;
    for (int k = 0; k < t.size(); ++k) {
        std::vector<long> sums(n, 0);
        for (int a = 0; a < n; ++a) {
            const auto* row = rt.row(a);
            for (int c = 0; c < n; ++c) sums[a] += row[c] == k;
        }
        bool constant = std::all_of(sums.begin(), sums.end(), [&](long s) { return s == sums[0]; });
        BigInt closed = scheme::valency(b.config(), t.index[k]);
        r.add("valency " + t.index[k].str(), str(closed), constant ? std::to_string(sums[0]) : "nonconstant");
        total += closed;
        vals.push_back(str(closed));
    }
    r.add("valencies sum to |O_nu|", str(t.order), str(total));
    const auto& cfg = b.config();
    if (cfg.kind == FormCase::symplectic && cfg.q == 2 && cfg.nu == 2) r.add("valency row", "1,3,12,12,32", join(vals));
    return r;
}

Report valuation_grid() {
    Report r;
    for (auto [kind, q] : valuation_fields()) {
        long mismatch = 0, cells = 0, separation = 0, even_rule = 0;
        const bool e_zero = kind == FormCase::orthogonal;
        for (int nup = 2; nup <= kValuationMaxRank; ++nup)
            for (int i = 2; i <= nup; ++i) {
                auto phi0 = scheme::q_valuation(kind, q, nup, i, 0);
                for (int j = 1; j <= nup; ++j) {
                    auto direct = scheme::q_valuation(kind, q, nup, i, j);
                    if (j >= 2) {
                        ++cells;
                        auto formula = scheme::q_valuation_formula(kind, nup, i, j);
                        mismatch += !formula || *formula != direct;
                    }
                    if (!(j == nup && e_zero)) separation += phi0 == direct;
                }
                if (e_zero) {
                    bool equal = scheme::dual_polar_eigenvalue(kind, q, nup, i, 0) ==
                                 scheme::dual_polar_eigenvalue(kind, q, nup, i, nup);
                    even_rule += equal != (i % 2 == 0);
                }
            }
        const auto label = field_label(kind, q);
        r.add(label + ": formula cells off the direct valuation (of " + std::to_string(cells) + ")", "0",
              std::to_string(mismatch));
        r.add(label + ": cells with phi_i(0) = phi_i(j)", "0", std::to_string(separation));
        if (e_zero) r.add(label + ": p_i(0) = p_i(nu') iff i even, violations", "0", std::to_string(even_rule));
    }
    return r;
}

Report uniqueness_grid() {
    Report r;
    for (auto [kind, q] : valuation_fields()) {
        long outside = 0, ab_unique = 0, c_rows = 0, c_repeated = 0;
        for (int nu = 1; nu <= kUniquenessMaxRank; ++nu) {
            auto cfg = geometry::make_config(kind, q, nu);
            for (auto idx : scheme::relation_indices(nu)) {
                if (idx.position() == 0) continue;
                auto scan = scheme::column_uniqueness(cfg, idx);
                if (!scan.unique && scan.exception == 0) ++outside;
                if (nu >= 2 && (scan.exception == 'a' || scan.exception == 'b') && scan.unique) ++ab_unique;
                if (scan.exception == 'c') {
                    ++c_rows;
                    c_repeated += !scan.unique;
                }
            }
        }
        const auto label = field_label(kind, q);
        r.add(label + ": repeated rows outside (a), (b), (c)", "0", std::to_string(outside));
        r.add(label + ": unique rows in (a) or (b)", "0", std::to_string(ab_unique));
        // Family (c) repeats exactly when e = 0.
        r.add(label + ": repeated rows in (c)", kind == FormCase::orthogonal ? std::to_string(c_rows) : "0",
              std::to_string(c_repeated));
    }
    return r;
}

std::vector<std::pair<std::string, cl::FlatSet>> constructed_positives(const flats::MaximalFlats& catalog) {
    std::vector<std::pair<std::string, cl::FlatSet>> out;
    const int last = catalog.point_count() - 1;
    std::vector<int> all(catalog.size());
    std::iota(all.begin(), all.end(), 0);
    out.emplace_back("empty", cl::FlatSet::from_ids(catalog, {}));
    out.emplace_back("all", cl::FlatSet::from_ids(catalog, all));
    for (int p : {0, 1, last}) out.emplace_back("pencil " + std::to_string(p), cl::construct_pencil(catalog, p));
    auto p0 = cl::construct_pencil(catalog, 0);
    out.emplace_back("complement of pencil 0", cl::complement(catalog, p0));
    for (int p = 1; p <= last; ++p)
        if (cl::pencils_disjoint(catalog.config(), 0, p)) {
            auto u = cl::combine(catalog, p0, cl::construct_pencil(catalog, p), cl::CombineMode::disjoint_union);
            out.emplace_back("pencils 0 and " + std::to_string(p), u);
            out.emplace_back("complement of pencils 0 and " + std::to_string(p), cl::complement(catalog, u));
            break;
        }
    return out;
}

Report equivalence_check(const cl::Battery& b, std::uint64_t seed, int samples) {
    const auto& catalog = b.catalog();
    const int n = catalog.size();
    auto positives = constructed_positives(catalog);

    std::vector<cl::FlatSet> randoms;
    std::mt19937_64 rng(seed);
    std::vector<int> ids(n);
    for (int s = 0; s < samples; ++s) {
        std::iota(ids.begin(), ids.end(), 0);
        std::shuffle(ids.begin(), ids.end(), rng);
        const auto size = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n + 1));
        randoms.push_back(cl::FlatSet::from_ids(catalog, std::vector<int>(ids.begin(), ids.begin() + size)));
    }

    const bool with_spreads = b.spread_family().exhaustive;
    long rejected_positive = 0, route_disagree = 0, spread_disagree = 0;
    auto judge = [&](const cl::FlatSet& l) {
        bool image = b.test_image(l);
        route_disagree += (b.test_kernel(l) != image) + (b.test_spectrum(l) != image) + (b.test_counts(l) != image);
        if (with_spreads) {
            auto v = b.test_spreads(l);
            spread_disagree += (v.meets_x != image) + (v.switching_equal != image);
        }
        return image;
    };
    for (const auto& [label, l] : positives) rejected_positive += !judge(l);
    for (const auto& l : randoms) judge(l);

    // Verdicts are invariant under isometries.
    long moved = 0;
    for (int k = 0; k < kIsometrySamples; ++k) {
        auto perm = cl::flat_permutation(catalog, geometry::random_isometry(b.config(), seed + 1 + k));
        for (const auto& [label, l] : positives) moved += !b.test_kernel(cl::apply(catalog, perm, l));
        for (int s = 0; s < std::min<int>(samples, kIsometrySamples); ++s)
            moved += b.test_kernel(cl::apply(catalog, perm, randoms[s])) != b.test_kernel(randoms[s]);
    }

    Report r;
    r.add("constructed positives rejected by the image test", "0", std::to_string(rejected_positive));
    r.add("route disagreements with the image test", "0", std::to_string(route_disagree));
    if (with_spreads) r.add("spread route disagreements with the image test", "0", std::to_string(spread_disagree));
    r.add("verdicts changed by an isometry", "0", std::to_string(moved));
    return r;
}

Report count_table_check(const cl::Battery& b) {
    Report r;
    const int nu = b.config().nu;
    for (const auto& [label, l] : constructed_positives(b.catalog())) {
        long bad = 0;
        for (auto idx : scheme::relation_indices(nu)) bad += !b.lemma310_counts(l, idx);
        r.add(label + ": relations off the count table", "0", std::to_string(bad));
    }
    const auto& cfg = b.config();
    if (cfg.kind == FormCase::symplectic && cfg.q == 2 && cfg.nu == 2) {
        auto pencil = cl::construct_pencil(b.catalog(), 0);
        const int f = pencil.ids.front();
        const int pos = scheme::RelationIndex{2, 0}.position();
        long direct = 0;
        for (int g : pencil.ids) direct += b.relations().at(f, g) == pos;
        r.add("(2,0) neighbours of a pencil member", "8", std::to_string(direct));
        r.add("(2,0) table entry for a pencil member", "8", b.lemma310_expected(1, {2, 0}, true).get_str());
    }
    return r;
}

Report nu1_check(const cl::Battery& b) {
    auto c = cl::classify_nu1(b);
    Report r;
    r.add_bool("CL sets are the coset unions", c.matches_cosets);
    r.add_bool("x = 1 sets are maximum intersecting families", c.x1_maximum_intersecting);
    const auto& cfg = b.config();
    long at1 = c.by_x.count(1) ? c.by_x.at(1) : 0;
    if (cfg.kind == FormCase::symplectic && cfg.q == 2) {
        r.add("CL sets", "10", str(c.sets.size()));
        r.add("CL sets with x = 1", "8", std::to_string(at1));
    }
    if (cfg.kind == FormCase::symplectic && cfg.q == 3) r.add("CL sets with x = 1", "81", std::to_string(at1));
    r.merge("pencils against spreads: ", cl::clique_coclique_check(b.catalog()));
    return r;
}

Report span_check(const cl::Battery& b) {
    Report r;
    auto one = spreads::typeI_span_check(b.catalog(), b.tables(), b.relations());
    r.merge("type I: ", one);
    std::optional<Report> two;
    if (b.config().nu >= 2) {
        two = spreads::typeII_span_check(b.catalog(), b.tables(), b.relations());
        r.merge("type II: ", *two);
    }
    const auto& cfg = b.config();
    if (cfg.kind == FormCase::symplectic && cfg.q == 2 && cfg.nu == 2) {
        auto actual = [](const Report& rep, const std::string& name) {
            for (const auto& c : rep.checks)
                if (c.name == name) return c.actual;
            return std::string("missing");
        };
        r.add("type-I stack rank value", "15", actual(one, "type-I stack rank"));
        r.add("type-II stack rank value", "45", actual(*two, "type-II stack rank"));
    }
    return r;
}

Report container_check(const cl::Battery& b) {
    const auto& catalog = b.catalog();
    const auto& cfg = b.config();
    const int i = 1;
    Report r;
    for (const auto& [label, l] : constructed_positives(catalog)) {
        if (l.ids.empty()) continue;
        long restriction_bad = 0, degree_bad = 0, profile_bad = 0, evaluated = 0;
        const bool profiled = l.x >= 2 && integral(l.x);
        for (int s : l.ids) {
            auto d = cl::degree_identity(catalog, l, s, i);
            degree_bad += !d.holds;
            for (const auto& res : d.containers) restriction_bad += !(res.in_image && res.integral && res.within_bounds);
            auto p = cl::pencil_distribution(catalog, l, s, i);
            if (!profiled) continue;
            ++evaluated;
            profile_bad += !(p.evaluated && p.count_identity && p.weighted_identity && p.bound_i && p.branch_consistent);
        }
        r.add(label + ": restrictions not CL in their container", "0", std::to_string(restriction_bad));
        r.add(label + ": degree identity failures", "0", std::to_string(degree_bad));
        if (profiled) {
            r.add(label + ": profiles evaluated", str(l.ids.size()), std::to_string(evaluated));
            r.add(label + ": profile identity failures", "0", std::to_string(profile_bad));
        }
    }
    // At x = q^nu every container is full.
    std::vector<int> all(catalog.size());
    std::iota(all.begin(), all.end(), 0);
    auto full = cl::pencil_distribution(catalog, cl::FlatSet::from_ids(catalog, all), 0, i);
    const long top = exact::to_int64(int_pow(cfg.q, i));
    r.add("full profile", std::to_string(top) + ":" + str(gauss_binomial(cfg.nu, cfg.nu - i, cfg.q)),
          [&] {
              std::vector<std::string> parts;
              for (auto [theta, count] : full.histogram) parts.push_back(std::to_string(theta) + ":" + std::to_string(count));
              return join(parts);
          }());
    return r;
}

std::vector<Section> paper_suite(const geometry::SpaceConfig& cfg, std::uint64_t seed) {
    std::vector<Section> out;
    auto timed = [&](const std::string& name, auto&& body) {
        auto start = std::chrono::steady_clock::now();
        Report rep = body();
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        out.push_back({name, std::move(rep), dt.count()});
    };
    flats::MaximalFlats catalog(cfg);
    cl::Battery b(catalog);
    const bool dense = catalog.size() <= kDenseFlatBound;

    timed("flat counts", [&] { return flat_counts(cfg); });
    timed("incidence rank", [&] { return incidence_rank(catalog); });
    if (dense) timed("gram identity", [&] { return gram_identity(catalog); });
    timed("point graph", [&] { return point_graph_check(cfg); });
    timed("scheme", [&] { return scheme_check(b); });
    timed("valencies", [&] { return valency_check(b); });
    if (dense) {
        timed("equivalence", [&] { return equivalence_check(b, seed); });
        timed("count table", [&] { return count_table_check(b); });
    }
    if (cfg.nu == 1 && catalog.size() <= cl::kExhaustiveSubsetBound) timed("nu = 1 classification", [&] { return nu1_check(b); });
    timed("spread spans", [&] { return span_check(b); });
    if (cfg.nu >= 2 && dense) timed("containers", [&] { return container_check(b); });
    return out;
}

}  // namespace clsets::suite

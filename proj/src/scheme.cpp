#include "clsets/scheme.hpp"

#include <map>
#include <random>
#include <stdexcept>

namespace clsets::scheme {

using field::FormCase;
using field::gauss_binomial;
using field::half_power;
using field::half_power_int;
using field::int_pow;
using geometry::Subspace;
using geometry::Vec;

std::string RelationIndex::str() const { return "(" + std::to_string(i) + "," + std::to_string(xi) + ")"; }

std::vector<RelationIndex> relation_indices(int nu) {
    std::vector<RelationIndex> out;
    for (int i = 0; i < nu; ++i) {
        out.push_back({i, 0});
        out.push_back({i, 1});
    }
    out.push_back({nu, 0});
    return out;
}

RelationIndex index_at(int position) { return {position / 2, position % 2}; }

void check_index(int nu, RelationIndex r) {
    bool ok = r.i >= 0 && r.i <= nu && (r.xi == 0 || r.xi == 1) && !(r.i == nu && r.xi == 1);
    if (!ok) throw std::out_of_range("relation index " + r.str() + " outside the family for nu = " + std::to_string(nu));
}

RelationIndex relation_of(const SpaceConfig& cfg, const Flat& a, const Flat& b) {
    for (const Flat* f : {&a, &b})
        if (f->dim() != cfg.nu || !geometry::is_totally_isotropic(cfg, f->direction))
            throw std::invalid_argument("relation_of: flat is not maximal totally isotropic");
    int i = cfg.nu - geometry::intersection(cfg.field, a.direction, b.direction).dim();
    int xi = flats::flat_meet(cfg.field, a, b) ? 0 : 1;
    return {i, xi};
}

RelationTable::RelationTable(const MaximalFlats& catalog) : catalog_(&catalog) {
    const auto& cfg = catalog.config();
    const auto& f = cfg.field;
    n_ = catalog.size();
    if (n_ > kBound) throw std::length_error("RelationTable: more than 1100 flats");
    classes_ = relation_count(cfg.nu);
    const auto& dirs = catalog.directions();
    const int nd = static_cast<int>(dirs.size());
    const int np = cfg.point_count();

    // Per direction pair: dim of the intersection and which points lie in P + Q.
    std::vector<int> meet_dim(static_cast<std::size_t>(nd) * nd);
    std::vector<int> sum_id(static_cast<std::size_t>(nd) * nd);
    std::map<Subspace, int> sums;
    std::vector<std::vector<char>> members;
    for (int d1 = 0; d1 < nd; ++d1)
        for (int d2 = d1; d2 < nd; ++d2) {
            int md = geometry::intersection(f, dirs[d1], dirs[d2]).dim();
            auto s = geometry::subspace_sum(f, dirs[d1], dirs[d2]);
            auto [it, fresh] = sums.emplace(s, static_cast<int>(members.size()));
            if (fresh) {
                std::vector<char> in(np);
                for (int x = 0; x < np; ++x) in[x] = geometry::contains(f, s, geometry::point_vector(cfg, x));
                members.push_back(std::move(in));
            }
            meet_dim[d1 * nd + d2] = meet_dim[d2 * nd + d1] = md;
            sum_id[d1 * nd + d2] = sum_id[d2 * nd + d1] = it->second;
        }

    std::vector<Vec> reps;
    reps.reserve(n_);
    for (int id = 0; id < n_; ++id) reps.push_back(catalog.flat(id).rep);

    rel_.assign(static_cast<std::size_t>(n_) * n_, 0);
    Vec diff(cfg.dim());
    for (int a = 0; a < n_; ++a) {
        int da = catalog.direction_of(a);
        for (int b = 0; b < n_; ++b) {
            int db = catalog.direction_of(b);
            for (int k = 0; k < cfg.dim(); ++k) diff[k] = f.sub(reps[b][k], reps[a][k]);
            int i = cfg.nu - meet_dim[da * nd + db];
            int xi = members[sum_id[da * nd + db]][geometry::point_index(cfg, diff)] ? 0 : 1;
            rel_[static_cast<std::size_t>(a) * n_ + b] = static_cast<std::uint8_t>(2 * i + xi);
        }
    }
}

std::vector<std::int64_t> relation_profile(const RelationTable& t, const std::vector<std::int64_t>& w) {
    const int n = t.size(), d = t.classes();
    if (static_cast<int>(w.size()) != n) throw std::invalid_argument("relation_profile: length mismatch");
    std::vector<std::int64_t> out(static_cast<std::size_t>(n) * d, 0);
    std::vector<int> support;
    for (int b = 0; b < n; ++b)
        if (w[b] != 0) support.push_back(b);
    if (4 * support.size() < static_cast<std::size_t>(n)) {
        // Relations are symmetric, so row b serves as column b.
        for (int b : support) {
            const std::uint8_t* col = t.row(b);
            for (int a = 0; a < n; ++a) out[static_cast<std::size_t>(a) * d + col[a]] += w[b];
        }
        return out;
    }
    for (int a = 0; a < n; ++a) {
        const std::uint8_t* row = t.row(a);
        std::int64_t* acc = out.data() + static_cast<std::size_t>(a) * d;
        for (int b = 0; b < n; ++b) acc[row[b]] += w[b];
    }
    return out;
}

exact::IntRows adjacency_matrix(const RelationTable& t, RelationIndex r) {
    check_index(t.catalog().config().nu, r);
    const int n = t.size(), pos = r.position();
    exact::IntRows out(n, std::vector<long>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out[a][b] = t.at(a, b) == pos ? 1 : 0;
    return out;
}

// Closed forms ----------------------------------------------------------------

namespace {

long choose2(long n) { return n * (n - 1) / 2; }

// The alternating sum; an empty s-range (i > nu') gives 0.
BigInt dual_polar_sum(FormCase kind, int q, int nup, int i, int j) {
    BigInt total = 0;
    int lo = std::max(0, j - i), hi = std::min(j, nup - i);
    for (int s = lo; s <= hi; ++s) {
        BigInt term = gauss_binomial(j, s, q) * gauss_binomial(nup - j, nup - i - s, q) *
                      field::e_power(kind, q, i + s - j) * int_pow(q, choose2(j - s) + choose2(i + s - j));
        if ((j + s) % 2 == 0)
            total += term;
        else
            total -= term;
    }
    return total;
}

Rational dual_polar_multiplicity_rational(FormCase kind, int q, int nup, int j) {
    const long e2 = field::doubled_e(kind);
    Rational r = Rational(int_pow(q, j) * gauss_binomial(nup, j, q));
    r *= half_power(q, 2 * nup + e2 - 4 * j) + 1;
    r /= half_power(q, 2 * nup + e2 - 2 * j) + 1;
    for (int s = 1; s <= j; ++s) {
        r *= half_power(q, 2 * nup + e2 - 2 * s) + 1;
        r /= half_power(q, 2 * s - e2) + 1;
    }
    return r;
}

BigInt integral(const Rational& r, const char* what) {
    if (r.get_den() != 1) throw std::logic_error(std::string(what) + ": non-integral value " + r.get_str());
    return r.get_num();
}

}  // namespace

BigInt dual_polar_eigenvalue(FormCase kind, int q, int nup, int i, int j) {
    if (nup < 0 || i < 0 || j < 0 || i > nup || j > nup)
        throw std::out_of_range("dual_polar_eigenvalue: index outside 0..nu'");
    return dual_polar_sum(kind, q, nup, i, j);
}

BigInt dual_polar_multiplicity(FormCase kind, int q, int nup, int j) {
    if (nup < 0 || j < 0 || j > nup) throw std::out_of_range("dual_polar_multiplicity: index outside 0..nu'");
    return integral(dual_polar_multiplicity_rational(kind, q, nup, j), "dual_polar_multiplicity");
}

BigInt dual_polar_valency(FormCase kind, int q, int nup, int i) {
    if (nup < 0 || i < 0 || i > nup) throw std::out_of_range("dual_polar_valency: index outside 0..nu'");
    return half_power_int(q, static_cast<long>(i) * (i - 1) + static_cast<long>(i) * field::doubled_e(kind)) *
           gauss_binomial(nup, i, q);
}

BigInt complete_graph_eigenvalue(int q, int l, int xi, int eta) {
    if (eta == 0) return xi == 0 ? BigInt(1) : BigInt(int_pow(q, l) - 1);
    return xi == 0 ? BigInt(1) : BigInt(-1);
}

BigInt valency(const SpaceConfig& cfg, RelationIndex r) {
    check_index(cfg.nu, r);
    BigInt v = half_power_int(cfg.q, static_cast<long>(r.i) * (r.i + 1) + static_cast<long>(r.i) * cfg.e2) *
               gauss_binomial(cfg.nu, r.i, cfg.q);
    if (r.xi == 1) v *= int_pow(cfg.q, cfg.nu - r.i) - 1;
    return v;
}

BigInt scheme_eigenvalue(const SpaceConfig& cfg, RelationIndex r, RelationIndex col) {
    check_index(cfg.nu, r);
    check_index(cfg.nu, col);
    return int_pow(cfg.q, r.i) * complete_graph_eigenvalue(cfg.q, cfg.nu - r.i, r.xi, col.xi) *
           dual_polar_sum(cfg.kind, cfg.q, cfg.nu - col.xi, r.i, col.i);
}

BigInt scheme_multiplicity(const SpaceConfig& cfg, RelationIndex col) {
    check_index(cfg.nu, col);
    if (col.xi == 0) return dual_polar_multiplicity(cfg.kind, cfg.q, cfg.nu, col.i);
    return (int_pow(cfg.q, cfg.nu) - 1) * (half_power_int(cfg.q, 2 * cfg.nu + cfg.e2 - 2) + 1) *
           dual_polar_multiplicity(cfg.kind, cfg.q, cfg.nu - 1, col.i);
}

SchemeTables scheme_tables(const SpaceConfig& cfg) {
    SchemeTables t;
    t.kind = cfg.kind;
    t.q = cfg.q;
    t.nu = cfg.nu;
    t.order = int_pow(cfg.q, cfg.nu) * field::isotropic_product(cfg.kind, cfg.q, 1, cfg.nu);
    t.index = relation_indices(cfg.nu);
    const int d = t.size();
    for (auto r : t.index) t.valencies.push_back(valency(cfg, r));
    for (auto c : t.index) t.multiplicities.push_back(scheme_multiplicity(cfg, c));
    t.P.assign(d, std::vector<BigInt>(d));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) t.P[r][c] = scheme_eigenvalue(cfg, t.index[r], t.index[c]);
    t.Q.assign(d, std::vector<Rational>(d));
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) {
            Rational x(t.multiplicities[c] * t.P[r][c], t.valencies[r]);
            x.canonicalize();
            t.Q[c][r] = x;
        }
    return t;
}

Report check_tables(const SchemeTables& t) {
    Report rep;
    const int d = t.size();
    BigInt sv = 0, sm = 0;
    for (auto& v : t.valencies) sv += v;
    for (auto& m : t.multiplicities) sm += m;
    rep.add("sum of valencies", t.order.get_str(), sv.get_str());
    rep.add("sum of multiplicities", t.order.get_str(), sm.get_str());

    bool row0 = true, col0 = true;
    for (int c = 0; c < d; ++c) row0 = row0 && t.P[0][c] == 1;
    for (int r = 0; r < d; ++r) col0 = col0 && t.P[r][0] == t.valencies[r];
    rep.add_bool("row (0,0) of P is all ones", row0);
    rep.add_bool("column (0,0) of P holds the valencies", col0);

    int pq_bad = 0, qp_bad = 0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            Rational pq = 0, qp = 0;
            for (int k = 0; k < d; ++k) {
                pq += Rational(t.P[a][k]) * t.Q[k][b];
                qp += t.Q[a][k] * Rational(t.P[k][b]);
            }
            Rational want = a == b ? Rational(t.order) : Rational(0);
            pq_bad += pq != want;
            qp_bad += qp != want;
        }
    rep.add("PQ = |O| I (bad entries)", "0", std::to_string(pq_bad));
    rep.add("QP = |O| I (bad entries)", "0", std::to_string(qp_bad));

    for (int c = 0; c < d; ++c) {
        BigInt s = 0;
        for (int r = 0; r < d; ++r) s += t.P[r][c];
        rep.add("column sum of P at " + t.index[c].str(), c == 0 ? t.order.get_str() : "0", s.get_str());
    }
    return rep;
}

ScaledIdempotents scaled_idempotents(const SchemeTables& t) {
    ScaledIdempotents s;
    const int d = t.size();
    for (int j = 0; j < d; ++j) {
        BigInt l = 1;
        for (int r = 0; r < d; ++r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.Q[j][r].get_den_mpz_t());
        std::vector<std::int64_t> c(d);
        for (int r = 0; r < d; ++r) {
            Rational x = t.Q[j][r] * Rational(l);
            c[r] = exact::to_int64(x.get_num());
        }
        s.scale.push_back(l);
        s.coeff.push_back(std::move(c));
    }
    return s;
}

std::vector<std::int64_t> project_scaled(const ScaledIdempotents& s, int j, const std::vector<std::int64_t>& profile,
                                         int classes) {
    const std::size_t n = profile.size() / classes;
    const auto& c = s.coeff.at(j);
    std::vector<std::int64_t> out(n);
    for (std::size_t a = 0; a < n; ++a) {
        __int128 acc = 0;
        for (int k = 0; k < classes; ++k) acc += static_cast<__int128>(c[k]) * profile[a * classes + k];
        out[a] = exact::narrow(acc);
    }
    return out;
}

bool projection_vanishes(const ScaledIdempotents& s, int j, const std::vector<std::int64_t>& profile, int classes) {
    const std::size_t n = profile.size() / classes;
    const auto& c = s.coeff.at(j);
    for (std::size_t a = 0; a < n; ++a) {
        __int128 acc = 0;
        for (int k = 0; k < classes; ++k) acc += static_cast<__int128>(c[k]) * profile[a * classes + k];
        if (acc != 0) return false;
    }
    return true;
}

exact::RationalMatrix idempotent(const SchemeTables& t, const RelationTable& rt, RelationIndex col) {
    check_index(t.nu, col);
    if (rt.size() > kIdempotentMatrixBound) throw std::length_error("idempotent: more than 500 flats");
    const int n = rt.size(), j = col.position();
    std::vector<Rational> entry(t.size());
    for (int r = 0; r < t.size(); ++r) {
        entry[r] = t.Q[j][r] / Rational(t.order);
        entry[r].canonicalize();
    }
    exact::RationalMatrix e(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) e(a, b) = entry[rt.at(a, b)];
    return e;
}

namespace {

// Checks that depend only on the relation-indexed coefficients.
void coefficient_checks(const SchemeTables& t, const ScaledIdempotents& s, int n, Report& rep) {
    const int d = t.size();
    rep.add("flat count matches |O|", t.order.get_str(), std::to_string(n));
    int sum_bad = 0;
    for (int r = 0; r < d; ++r) {
        Rational total = 0;
        for (int j = 0; j < d; ++j) total += Rational(s.coeff[j][r]) / Rational(s.scale[j]);
        sum_bad += total != (r == 0 ? Rational(t.order) : Rational(0));
    }
    rep.add("sum of E = I (bad relation classes)", "0", std::to_string(sum_bad));
    for (int j = 0; j < d; ++j) {
        Rational tr = Rational(BigInt(n) * s.coeff[j][0]) / Rational(s.scale[j] * t.order);
        tr.canonicalize();
        rep.add("trace E" + t.index[j].str(), t.multiplicities[j].get_str(), tr.get_str());
    }
}

void verify_by_counts(const SchemeTables& t, const RelationTable& rt, const ScaledIdempotents& s, Report& rep) {
    const int n = rt.size(), d = t.size(), dd = d * d;
    std::vector<std::vector<std::int64_t>> p(d, std::vector<std::int64_t>(d));
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) p[k][j] = exact::to_int64(t.P[k][j]);
    std::vector<std::int64_t> square(d);
    for (int j = 0; j < d; ++j) square[j] = exact::to_int64(s.scale[j] * t.order);

    long ae_bad = 0, ee_bad = 0;
    std::vector<std::int32_t> h(static_cast<std::size_t>(n) * dd);
    for (int a = 0; a < n; ++a) {
        std::fill(h.begin(), h.end(), 0);
        const std::uint8_t* ra = rt.row(a);
        for (int c = 0; c < n; ++c) {
            const std::uint8_t* rc = rt.row(c);
            std::int32_t* base = h.data() + ra[c] * d;
            for (int b = 0; b < n; ++b) ++base[static_cast<std::size_t>(b) * dd + rc[b]];
        }
        for (int b = 0; b < n; ++b) {
            const std::int32_t* hb = h.data() + static_cast<std::size_t>(b) * dd;
            const int l0 = ra[b];
            for (int j = 0; j < d; ++j) {
                const auto& cj = s.coeff[j];
                // A_k S_j = p_k(j) S_j
                for (int k = 0; k < d; ++k) {
                    __int128 acc = 0;
                    for (int l = 0; l < d; ++l) acc += static_cast<__int128>(hb[k * d + l]) * cj[l];
                    if (acc != static_cast<__int128>(p[k][j]) * cj[l0]) ++ae_bad;
                }
                // S_j S_j' = delta scale_j |O| S_j
                for (int j2 = j; j2 < d; ++j2) {
                    const auto& cj2 = s.coeff[j2];
                    __int128 acc = 0;
                    for (int k = 0; k < d; ++k) {
                        __int128 inner = 0;
                        for (int l = 0; l < d; ++l) inner += static_cast<__int128>(hb[k * d + l]) * cj2[l];
                        acc += inner * cj[k];
                    }
                    __int128 want = j == j2 ? static_cast<__int128>(square[j]) * cj[l0] : 0;
                    if (acc != want) ++ee_bad;
                }
            }
        }
    }
    rep.add("A E = p E (bad entries)", "0", std::to_string(ae_bad));
    rep.add("E E' = delta E (bad entries)", "0", std::to_string(ee_bad));
}

void verify_by_probes(const SchemeTables& t, const RelationTable& rt, const ScaledIdempotents& s, int probes,
                      std::uint64_t seed, Report& rep) {
    const int n = rt.size(), d = t.size();
    std::mt19937_64 rng(seed);
    long ae_bad = 0, ee_bad = 0, sum_bad = 0;
    BigInt common = 1;
    for (auto& l : s.scale) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), l.get_mpz_t());
    for (int probe = 0; probe < probes; ++probe) {
        std::vector<std::int64_t> w(n);
        for (auto& x : w) x = static_cast<std::int64_t>(rng() % 5) - 2;
        auto prof = relation_profile(rt, w);
        std::vector<BigInt> total(n, 0);
        for (int j = 0; j < d; ++j) {
            auto y = project_scaled(s, j, prof, d);
            BigInt f = common / s.scale[j];
            for (int a = 0; a < n; ++a) total[a] += f * y[a];
            auto py = relation_profile(rt, y);
            for (int a = 0; a < n; ++a)
                for (int k = 0; k < d; ++k)
                    if (BigInt(py[static_cast<std::size_t>(a) * d + k]) != t.P[k][j] * y[a]) ++ae_bad;
            for (int j2 = 0; j2 < d; ++j2) {
                auto z = project_scaled(s, j2, py, d);
                BigInt factor = j2 == j ? BigInt(s.scale[j] * t.order) : BigInt(0);
                for (int a = 0; a < n; ++a)
                    if (BigInt(z[a]) != factor * y[a]) ++ee_bad;
            }
        }
        for (int a = 0; a < n; ++a)
            if (total[a] != common * t.order * w[a]) ++sum_bad;
    }
    rep.add("probe vectors (seed " + std::to_string(seed) + ")", std::to_string(probes), std::to_string(probes));
    rep.add("A E w = p E w (bad entries)", "0", std::to_string(ae_bad));
    rep.add("E' E w = delta E w (bad entries)", "0", std::to_string(ee_bad));
    rep.add("sum of E w = w (bad entries)", "0", std::to_string(sum_bad));
}

}  // namespace

Report verify_idempotents(const SchemeTables& t, const RelationTable& rt, int probes, std::uint64_t seed) {
    Report rep;
    auto s = scaled_idempotents(t);
    coefficient_checks(t, s, rt.size(), rep);
    if (rt.size() <= kIdempotentMatrixBound)
        verify_by_counts(t, rt, s, rep);
    else
        verify_by_probes(t, rt, s, probes, seed, rep);
    return rep;
}

InnerDistribution inner_distribution(const SchemeTables& t, const RelationTable& rt, const std::vector<int>& ids) {
    if (ids.empty()) throw std::invalid_argument("inner_distribution: empty set");
    const int d = t.size();
    std::vector<std::int64_t> chi(rt.size(), 0);
    for (int id : ids) chi.at(id) = 1;
    auto prof = relation_profile(rt, chi);
    InnerDistribution out;
    out.u.assign(d, 0);
    for (int id : ids)
        for (int k = 0; k < d; ++k) out.u[k] += prof[static_cast<std::size_t>(id) * d + k];
    for (auto& x : out.u) {
        x /= static_cast<long>(ids.size());
        x.canonicalize();
    }
    out.uQ.assign(d, 0);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) out.uQ[j] += out.u[k] * t.Q[j][k];
    return out;
}

// Valuations ------------------------------------------------------------------

std::string Valuation::str() const { return infinite ? "inf" : value.get_str(); }

Valuation q_valuation_of(int q, const BigInt& x) {
    if (x == 0) return Valuation::infinity();
    auto f = field::field_of_order(q);
    long v = 0;
    BigInt y = abs(x);
    while (mpz_divisible_ui_p(y.get_mpz_t(), f.p())) {
        y /= f.p();
        ++v;
    }
    Rational r(v, f.k());
    r.canonicalize();
    return Valuation::of(r);
}

Valuation q_valuation(FormCase kind, int q, int nup, int i, int j) {
    return q_valuation_of(q, dual_polar_eigenvalue(kind, q, nup, i, j));
}

std::optional<Valuation> q_valuation_formula(FormCase kind, int nup, int i, int j) {
    if (i < 0 || j < 0 || i > nup || j > nup) return std::nullopt;
    Rational e(field::doubled_e(kind), 2);
    e.canonicalize();
    if (j == 0) return Valuation::of(Rational(choose2(i)) + e * i);
    if (i < 2) return std::nullopt;
    if (j == 1) return Valuation::of(Rational(choose2(i - 1)) + e * (i - 1));
    // Regimes by D = j - i/2 - e/2, compared as 4D.
    const long four_d = 4L * j - 2L * i - field::doubled_e(kind);
    if (four_d < 0) return Valuation::of(Rational(choose2(i)) + (j - i) * (j - e));
    if (four_d > 4L * (nup - i))
        return Valuation::of((j - e - nup + 1) * (j - nup + i - 1) + Rational(choose2(i - 1)) + e * (i - 1));
    auto quarter = [](long num) {
        Rational r(num, 4);
        r.canonicalize();
        return Valuation::of(r);
    };
    switch (kind) {
        case FormCase::orthogonal:
            if (i % 2 == 0) return quarter(static_cast<long>(i) * (i - 2));
            if (2 * j == nup) return Valuation::infinity();
            return quarter(static_cast<long>(i - 1) * (i - 1));
        case FormCase::unitary:
            return quarter(static_cast<long>(i) * (i - 1));
        case FormCase::symplectic:
            if (i % 2 == 0) {
                if (2 * (j - 1) == nup && 2 * i == nup && nup % 4 == 0) return Valuation::infinity();
                return quarter(static_cast<long>(i) * i);
            }
            return quarter(static_cast<long>(i) * i - 1);
    }
    return std::nullopt;
}

char uniqueness_exception(int nu, RelationIndex r) {
    if (nu >= 2 && r == RelationIndex{0, 1}) return 'a';
    if (nu >= 2 && r == RelationIndex{nu, 0}) return 'b';
    if (r.i % 2 == 0 && r.i >= 2 && r.i <= nu - 1) return 'c';
    return 0;
}

ColumnScan column_uniqueness(const SpaceConfig& cfg, RelationIndex r) {
    check_index(cfg.nu, r);
    if (r == RelationIndex{0, 0}) throw std::invalid_argument("column_uniqueness: row (0,0) is constant");
    ColumnScan scan;
    scan.row = r;
    scan.exception = uniqueness_exception(cfg.nu, r);
    const RelationIndex target{0, 1};
    BigInt value = scheme_eigenvalue(cfg, r, target);
    for (auto col : relation_indices(cfg.nu))
        if (col != target && scheme_eigenvalue(cfg, r, col) == value) scan.repeats.push_back(col);
    scan.unique = scan.repeats.empty();
    return scan;
}

Report verify_scheme(const RelationTable& rt) {
    Report rep;
    const int n = rt.size(), d = rt.classes(), dd = d * d;
    long refl_bad = 0, sym_bad = 0;
    std::vector<long> class_size(d, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int r = rt.at(a, b);
            ++class_size[r];
            if ((a == b) != (r == 0)) ++refl_bad;
            if (rt.at(b, a) != r) ++sym_bad;
        }
    rep.add("reflexive class is the diagonal (bad pairs)", "0", std::to_string(refl_bad));
    rep.add("symmetry (bad pairs)", "0", std::to_string(sym_bad));
    long empty = 0;
    for (long c : class_size) empty += c == 0;
    rep.add("empty relation classes", "0", std::to_string(empty));

    std::vector<std::pair<int, int>> pairs;
    bool exhaustive = n <= kExhaustiveSchemeBound;
    if (exhaustive) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) pairs.emplace_back(a, b);
    } else {
        std::vector<char> seen(d, 0);
        for (int b = 0; b < n; ++b)
            if (!seen[rt.at(0, b)]) {
                seen[rt.at(0, b)] = 1;
                pairs.emplace_back(0, b);
            }
        std::mt19937_64 rng(kSchemeSampleSeed);
        for (int s = 0; s < kSchemeSamples; ++s) pairs.emplace_back(rng() % n, rng() % n);
    }
    std::vector<std::vector<long>> first(d);
    long varying = 0;
    std::vector<long> h(dd);
    for (auto [a, b] : pairs) {
        std::fill(h.begin(), h.end(), 0);
        const std::uint8_t* ra = rt.row(a);
        for (int c = 0; c < n; ++c) ++h[ra[c] * d + rt.at(c, b)];
        int r = ra[b];
        if (first[r].empty())
            first[r] = h;
        else if (first[r] != h)
            ++varying;
    }
    rep.add(std::string(exhaustive ? "pairs checked (exhaustive)" : "pairs checked (sampled, seed ") +
                (exhaustive ? "" : std::to_string(kSchemeSampleSeed) + ")"),
            std::to_string(pairs.size()), std::to_string(pairs.size()));
    rep.add("pairs with non-constant intersection numbers", "0", std::to_string(varying));
    return rep;
}

}  // namespace clsets::scheme

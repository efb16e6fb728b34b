#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clsets/exact.hpp"
#include "clsets/flats.hpp"
#include "clsets/report.hpp"

namespace clsets::scheme {

using flats::Flat;
using flats::MaximalFlats;
using geometry::SpaceConfig;

/// (i, xi): i = nu - dim(P cap Q), xi = 1 when the two cosets are disjoint.
/// The same pairs label the eigenspaces (j, eta).
struct RelationIndex {
    int i = 0;
    int xi = 0;

    int position() const { return 2 * i + xi; }
    bool operator==(const RelationIndex& o) const { return i == o.i && xi == o.xi; }
    bool operator!=(const RelationIndex& o) const { return !(*this == o); }
    std::string str() const;
};

/// (0,0), (0,1), ..., (nu-1,0), (nu-1,1), (nu,0).
std::vector<RelationIndex> relation_indices(int nu);
inline int relation_count(int nu) { return 2 * nu + 1; }
RelationIndex index_at(int position);
/// Throws std::out_of_range for anything outside the family.
void check_index(int nu, RelationIndex r);

/// Direct computation from the two flats.
RelationIndex relation_of(const SpaceConfig& cfg, const Flat& a, const Flat& b);

/// Relation positions for every ordered pair of O_nu.
///
/// dim(P cap Q) and a point-membership bitmap of P + Q are cached per pair of
/// directions; the coset test is then a lookup of rep_b - rep_a.
class RelationTable {
public:
    static constexpr int kBound = 1100;

    explicit RelationTable(const MaximalFlats& catalog);

    const MaximalFlats& catalog() const { return *catalog_; }
    int size() const { return n_; }
    int classes() const { return classes_; }
    int at(int a, int b) const { return rel_[static_cast<std::size_t>(a) * n_ + b]; }
    const std::uint8_t* row(int a) const { return rel_.data() + static_cast<std::size_t>(a) * n_; }

private:
    const MaximalFlats* catalog_;
    int n_ = 0;
    int classes_ = 0;
    std::vector<std::uint8_t> rel_;
};

/// out[a * classes + k] = sum of w[b] over b with (a, b) in relation k.
/// For a 0/1 vector this is every A_k chi at once.
std::vector<std::int64_t> relation_profile(const RelationTable& t, const std::vector<std::int64_t>& w);

/// A_{(i,xi)} as 0/1 rows.
exact::IntRows adjacency_matrix(const RelationTable& t, RelationIndex r);

// Closed forms --------------------------------------------------------------

/// p_i^{(2nu')}(j) of the dual polar scheme. Throws std::out_of_range unless
/// 0 <= i, j <= nu'.
BigInt dual_polar_eigenvalue(field::FormCase kind, int q, int nup, int i, int j);
/// m_j^{(2nu')}; throws std::logic_error if the product is not integral.
BigInt dual_polar_multiplicity(field::FormCase kind, int q, int nup, int j);
/// v_i^{(2nu')} = q^{i(i+2e-1)/2} [nu' i].
BigInt dual_polar_valency(field::FormCase kind, int q, int nup, int i);
/// Entry c^{(l)}_xi(eta) of [[1, q^l - 1], [1, -1]] (row eta, column xi).
BigInt complete_graph_eigenvalue(int q, int l, int xi, int eta);

BigInt valency(const SpaceConfig& cfg, RelationIndex r);
BigInt scheme_eigenvalue(const SpaceConfig& cfg, RelationIndex r, RelationIndex col);
BigInt scheme_multiplicity(const SpaceConfig& cfg, RelationIndex col);

/// The eigen tables of X(O_nu) built from the closed forms only.
struct SchemeTables {
    field::FormCase kind;
    int q = 0;
    int nu = 0;
    BigInt order;                             // |O_nu|
    std::vector<RelationIndex> index;         // shared order of relations and eigenspaces
    std::vector<BigInt> valencies;            // v[rel]
    std::vector<BigInt> multiplicities;       // m[eig]
    std::vector<std::vector<BigInt>> P;       // P[rel][eig]
    std::vector<std::vector<Rational>> Q;     // Q[eig][rel] = m[eig] P[rel][eig] / v[rel]

    int size() const { return static_cast<int>(index.size()); }
};

SchemeTables scheme_tables(const SpaceConfig& cfg);

/// Checks on the tables alone: PQ = |O|I, QP = |O|I, row (0,0), column
/// (0,0), sums of valencies and multiplicities, signed row sums.
Report check_tables(const SchemeTables& t);

/// |O| E_j scaled to integers: entry (a, b) of scale[j] |O| E_j is
/// coeff[j][rel(a, b)].
struct ScaledIdempotents {
    std::vector<BigInt> scale;
    std::vector<std::vector<std::int64_t>> coeff;
};
ScaledIdempotents scaled_idempotents(const SchemeTables& t);

/// scale[j] |O| E_j w computed from a relation profile of w.
std::vector<std::int64_t> project_scaled(const ScaledIdempotents& s, int j, const std::vector<std::int64_t>& profile,
                                         int classes);
/// True when E_j w = 0.
bool projection_vanishes(const ScaledIdempotents& s, int j, const std::vector<std::int64_t>& profile, int classes);

inline constexpr int kIdempotentMatrixBound = 500;
/// E_{(j,eta)} as an exact matrix on O_nu.
exact::RationalMatrix idempotent(const SchemeTables& t, const RelationTable& rt, RelationIndex col);

/// Exact idempotent checks. Up to kIdempotentMatrixBound flats the full
/// products are formed (through per-pair counts h_kl(a,b)); above it the
/// eigen relations are tested on seeded integer probe vectors.
Report verify_idempotents(const SchemeTables& t, const RelationTable& rt, int probes = 100,
                          std::uint64_t seed = 0);

/// u_{(i,xi)} = chi^T A chi / |L| and the derived uQ.
struct InnerDistribution {
    std::vector<Rational> u;
    std::vector<Rational> uQ;
};
InnerDistribution inner_distribution(const SchemeTables& t, const RelationTable& rt, const std::vector<int>& ids);

// Valuations -----------------------------------------------------------------

/// Exponent of q; may be a half-integer in the unitary case.
struct Valuation {
    bool infinite = false;
    Rational value;

    static Valuation infinity() { return {true, Rational(0)}; }
    static Valuation of(Rational v) {
        v.canonicalize();
        return {false, v};
    }
    bool operator==(const Valuation& o) const { return infinite == o.infinite && (infinite || value == o.value); }
    bool operator!=(const Valuation& o) const { return !(*this == o); }
    std::string str() const;
};

/// Largest k with q^k dividing an integer, i.e. v_p(x)/[F_q:F_p].
Valuation q_valuation_of(int q, const BigInt& x);
/// Valuation of the evaluated eigenvalue p_i^{(2nu')}(j).
Valuation q_valuation(field::FormCase kind, int q, int nup, int i, int j);
/// The piecewise closed form. Defined for j in {0, 1} and for 2 <= i, j <= nu';
/// nullopt elsewhere.
std::optional<Valuation> q_valuation_formula(field::FormCase kind, int nup, int i, int j);

/// Scan of row (i, xi) for repeats of the value in column (0,1).
struct ColumnScan {
    RelationIndex row;
    bool unique = true;
    std::vector<RelationIndex> repeats;  // other columns holding the same value
    /// 'a', 'b', 'c' when the row falls in one of the known exception
    /// families, 0 otherwise.
    char exception = 0;
};
ColumnScan column_uniqueness(const SpaceConfig& cfg, RelationIndex r);
char uniqueness_exception(int nu, RelationIndex r);

inline constexpr int kExhaustiveSchemeBound = 120;
inline constexpr int kSchemeSamples = 10000;
inline constexpr std::uint64_t kSchemeSampleSeed = 7;

/// Brute-force association scheme axioms: reflexive class is the diagonal,
/// symmetry, every class nonempty, and constant intersection numbers on each
/// class (all pairs up to kExhaustiveSchemeBound flats, kSchemeSamples seeded
/// pairs above).
Report verify_scheme(const RelationTable& rt);

}  // namespace clsets::scheme

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clsets/exact.hpp"
#include "clsets/flats.hpp"
#include "clsets/report.hpp"
#include "clsets/scheme.hpp"
#include "clsets/spreads.hpp"

namespace clsets::cl {

using flats::Flat;
using flats::MaximalFlats;
using scheme::RelationIndex;

/// prod_{t=1}^{nu} (q^{t+e-1} + 1): the pencil size, and |O_nu| / q^nu.
BigInt pencil_size(const geometry::SpaceConfig& cfg);

/// A subset of O_nu. x = |ids| / pencil_size is kept exact and may be non-integral.
struct FlatSet {
    std::vector<int> ids;           // ascending
    std::vector<std::uint8_t> chi;  // indexed by FlatId
    Rational x;

    static FlatSet from_ids(const MaximalFlats& catalog, std::vector<int> ids);
    static FlatSet from_chi(const MaximalFlats& catalog, std::vector<std::uint8_t> chi);
    std::size_t size() const { return ids.size(); }
    bool contains(int id) const { return chi.at(id) != 0; }
    bool operator==(const FlatSet& o) const { return ids == o.ids; }
};

Rational cl_parameter(const MaximalFlats& catalog, const FlatSet& l);

enum class Method { image, kernel, spectrum, counts, spreads };
Method method_from_string(const std::string& name);
std::string to_string(Method m);

/// Outcome of the spread characterizations for one family.
struct SpreadVerdict {
    bool meets_x = true;          // |L cap S| = x for every spread in the family
    bool switching_equal = true;  // |L cap R| = |L cap R'| for every (S1\S2, S2\S1)
    bool conclusive = false;      // the family is every spread of the scope
    std::vector<long> intersections;
    bool pass() const { return meets_x && switching_equal; }
};

/// Precomputed tables shared by every test on one space. Heavy pieces are
/// built on first use.
class Battery {
public:
    explicit Battery(const MaximalFlats& catalog);

    const MaximalFlats& catalog() const { return *catalog_; }
    const geometry::SpaceConfig& config() const { return catalog_->config(); }
    const scheme::SchemeTables& tables() const { return tables_; }
    const scheme::RelationTable& relations() const;
    const scheme::ScaledIdempotents& idempotents() const;
    /// Integer basis of ker(M) over Q.
    const std::vector<std::vector<std::int64_t>>& kernel_basis() const;
    /// Every spread when exhaustive search is in reach, else the type-I and type-II families.
    const spreads::SpreadSearch& spread_family() const;

    /// M^T y = chi solvable exactly.
    bool test_image(const FlatSet& l) const;
    /// chi orthogonal to every kernel vector of M.
    bool test_kernel(const FlatSet& l) const;
    /// E_j chi = 0 outside (0,0), (0,1), and E_(0,0) chi = (|L| / |O|) j.
    bool test_spectrum(const FlatSet& l) const;
    /// The (1,0) and (1,1) neighbour counts of the count table.
    bool test_counts(const FlatSet& l) const;
    SpreadVerdict test_spreads(const FlatSet& l) const;
    SpreadVerdict test_spreads(const FlatSet& l, const std::vector<spreads::Spread>& family, bool exhaustive) const;
    bool test(const FlatSet& l, Method m) const;
    /// Default route.
    bool is_cl(const FlatSet& l) const { return test_kernel(l); }

    /// (A_r chi)_F matches the count table for every F, with x = |L| / pencil size.
    bool lemma310_counts(const FlatSet& l, RelationIndex r) const;
    /// Count table entry for F in L (member) or not.
    Rational lemma310_expected(const Rational& x, RelationIndex r, bool member) const;

private:
    const MaximalFlats* catalog_;
    scheme::SchemeTables tables_;
    mutable std::unique_ptr<scheme::RelationTable> relations_;
    mutable std::unique_ptr<scheme::ScaledIdempotents> idempotents_;
    mutable std::unique_ptr<exact::ExactSystem> image_;
    mutable std::optional<std::vector<std::vector<std::int64_t>>> kernel_;
    mutable std::unique_ptr<spreads::SpreadSearch> spreads_;
    std::vector<std::int64_t> profile(const FlatSet& l) const;
};

// Constructions ----------------------------------------------------------------

/// All flats through a point.
FlatSet construct_pencil(const MaximalFlats& catalog, int point);

enum class CombineMode { complement, disjoint_union, difference };
/// complement ignores b; disjoint_union needs a cap b empty; difference needs b inside a.
/// Throws std::invalid_argument on a violated precondition.
FlatSet combine(const MaximalFlats& catalog, const FlatSet& a, const FlatSet& b, CombineMode mode);
FlatSet complement(const MaximalFlats& catalog, const FlatSet& a);

/// Image ids of every flat under an affine isometry.
std::vector<int> flat_permutation(const MaximalFlats& catalog, const geometry::Isometry& g);
FlatSet apply(const MaximalFlats& catalog, const std::vector<int>& perm, const FlatSet& l);

// Classification at nu = 1 -------------------------------------------------------

inline constexpr int kExhaustiveSubsetBound = 24;

struct Nu1Classification {
    std::vector<FlatSet> sets;  // every CL set, in subset order
    std::map<long, long> by_x;  // parameter -> count
    /// Found sets are exactly the unions of x cosets from each direction.
    bool matches_cosets = false;
    /// Every x = 1 set pairwise meets and has pencil size.
    bool x1_maximum_intersecting = false;
};
/// Throws std::invalid_argument unless nu = 1, std::length_error above the subset bound.
Nu1Classification classify_nu1(const Battery& b);

// Intersecting families -----------------------------------------------------------

struct IntersectingVerdict {
    bool is_intersecting = false;
    bool is_maximum = false;
};
IntersectingVerdict intersecting_check(const MaximalFlats& catalog, const FlatSet& l);
/// For every pencil C and type-I spread A: |C||A| <= |O_nu|, and |C cap A| = 1 at equality.
Report clique_coclique_check(const MaximalFlats& catalog);

// Restriction to containers ------------------------------------------------------------

struct Restriction {
    Flat container;
    int i = 0;
    std::vector<int> ids;  // L cap O_nu(F), as FlatIds of O_nu
    Rational x_f;
    bool in_image = false;  // chi in Im(F^T) for the container incidence F
    bool integral = false;
    bool within_bounds = false;  // 0 <= x_F <= min(x, q^i)
};
/// Throws std::invalid_argument when big is not a container.
Restriction restrict_cl(const MaximalFlats& catalog, const FlatSet& l, const Flat& big);

struct DegreeIdentity {
    int s = -1;
    int i = 0;
    std::vector<Restriction> containers;
    Rational sum_x;     // sum of x_T over containers T of S
    Rational rhs;       // sum / [nu-1, nu-i] - (q^nu - 1)/(q^i - 1) + 1
    bool holds = false; // rhs == x
};
/// Throws std::invalid_argument when s is not in L or i is outside [1, nu).
DegreeIdentity degree_identity(const MaximalFlats& catalog, const FlatSet& l, int s, int i);

struct PencilProfile {
    int s = -1;
    int i = 0;
    std::vector<Flat> containers;
    std::vector<Rational> x_t;
    std::map<long, long> histogram;  // theta -> |T_theta|
    bool integral = false;
    bool count_identity = false;     // sum |T_theta| = [nu, nu-i]
    bool weighted_identity = false;  // (x-1)[nu-1, nu-i] = sum (theta-1)|T_theta|
    bool bound_i = false;            // |T_1| <= [nu, nu-i] - (x-1)/(m-1) [nu-1, nu-i], m = min(x, q^i)
    char branch = 0;                 // 'e' equality (ii), 'l' strict (iii)
    bool branch_consistent = false;
    long ell = 0;                    // in the strict branch: (ell-1)[nu-1, nu-i] <= |T_1| < ell [nu-1, nu-i]
    /// ell < (q^nu-1)/(q^i-1) - (x-1)/(m-1). Not implied by the strict bound: only ell - 1 is below it.
    bool ell_below_limit = false;
    /// False when x < 2 or x_T is non-integral: the identities above are not evaluated.
    bool evaluated = false;
};
PencilProfile pencil_distribution(const MaximalFlats& catalog, const FlatSet& l, int s, int i);

// Search ---------------------------------------------------------------------------

enum class Strategy { exhaustive, pencil_closure, seeded_random };
Strategy strategy_from_string(const std::string& name);

inline constexpr int kRandomSearchTrials = 2000;

/// Sets passing the default test with the given parameter, ascending by ids.
/// Throws std::length_error for an exhaustive search above the subset bound.
std::vector<FlatSet> search_cl(const Battery& b, long x_target, Strategy strategy, std::uint64_t seed = 0);

/// Pencils at a, b are disjoint iff a - b is non-isotropic (and a != b).
bool pencils_disjoint(const geometry::SpaceConfig& cfg, int a, int b);

}  // namespace clsets::cl

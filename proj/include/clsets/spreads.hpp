#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clsets/flats.hpp"
#include "clsets/report.hpp"
#include "clsets/scheme.hpp"

namespace clsets::spreads {

using flats::Flat;
using flats::MaximalFlats;
using geometry::Subspace;

enum class SpreadType { I, II, other };
std::string to_string(SpreadType t);

/// Members are FlatIds into O_nu, ascending. An empty scope means the whole
/// space; otherwise the members lie in the given container flat.
struct Spread {
    std::vector<int> members;
    std::optional<Flat> scope;
    SpreadType type = SpreadType::other;
};

/// The q^nu cosets of a maximal totally isotropic P.
Spread spread_type_I(const MaximalFlats& catalog, const Subspace& p);

/// {P1 + y : y in Q + z} together with {P2 + y : y outside Q + z}, where the
/// flat q = Q + z has a direction of type (nu+1, 2) and P1 != P2 lie in Q.
Spread spread_type_II(const MaximalFlats& catalog, const Flat& q, const Subspace& p1, const Subspace& p2);
Spread spread_type_II(const MaximalFlats& catalog, const Subspace& q, const Subspace& p1, const Subspace& p2);

/// Every subspace of type (nu+1, 2) (dimension nu+1, Gram rank 2), canonical order.
std::vector<Subspace> type_II_bases(const MaximalFlats& catalog);
/// Maximal totally isotropic subspaces inside q, as catalog direction indices.
std::vector<int> interior_directions(const MaximalFlats& catalog, const Subspace& q);

std::vector<Spread> type_I_spreads(const MaximalFlats& catalog);
/// All type-II spreads over every translate of every base and every ordered
/// pair of distinct interior directions, deduplicated by member set.
std::vector<Spread> type_II_spreads(const MaximalFlats& catalog);

/// I when one direction, II when it matches the two-direction construction.
SpreadType spread_type(const MaximalFlats& catalog, const std::vector<int>& members);

enum class SetKind { partial_spread, full_spread, neither };
std::string to_string(SetKind k);
/// Full means the members partition the scope's points (the whole space by default).
SetKind classify_set(const MaximalFlats& catalog, const std::vector<int>& members,
                     const std::optional<Flat>& scope = std::nullopt);
/// Disjoint member sets, each a partial spread, covering the same points.
bool is_switching_pair(const MaximalFlats& catalog, const std::vector<int>& r1, const std::vector<int>& r2);

inline constexpr int kExhaustiveSpreadPoints = 32;

struct SpreadSearch {
    std::vector<Spread> spreads;
    /// False when the scope was too large and only constructive families are listed.
    bool exhaustive = false;
};

/// Backtracking over flats through the smallest uncovered point when the scope
/// has at most kExhaustiveSpreadPoints points. Above the bound the full space
/// falls back to the type-I and type-II families and a container to its
/// type-I family {P_s + y : y in F}.
SpreadSearch enumerate_spreads(const MaximalFlats& catalog, const std::optional<Flat>& scope = std::nullopt);

/// Spread characteristic vectors as supports; their span rank is pinned from
/// below by a mod-p elimination and from above by vanishing projections.
struct StackRank {
    std::size_t rows = 0;
    std::size_t lower = 0;   // mod-p rank, stopped at the target
    std::size_t target = 0;  // dimension of the space the rows were shown to lie in
    bool upper_holds = false;
    bool exact() const { return upper_holds && lower == target; }
};

Report typeI_span_check(const MaximalFlats& catalog, const scheme::SchemeTables& t, const scheme::RelationTable& rt);
Report typeII_span_check(const MaximalFlats& catalog, const scheme::SchemeTables& t, const scheme::RelationTable& rt);

}  // namespace clsets::spreads

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clsets/cl.hpp"
#include "clsets/report.hpp"

// Property checks shared by the acceptance binary and `clsets verify`.
namespace clsets::suite {

struct GridPoint {
    field::FormCase kind;
    int q;
    int nu;
    std::string str() const;
};

/// symplectic (2,1) (3,1) (2,2) (3,2) (2,3), unitary (4,1) (4,2), orthogonal (3,1) (5,1) (3,2).
std::vector<GridPoint> standard_grid();

/// Configs with at most this many maximal flats get the dense checks.
inline constexpr int kDenseFlatBound = 500;
inline constexpr int kRandomSubsets = 1000;
inline constexpr int kIsometrySamples = 20;
inline constexpr int kValuationMaxRank = 8;
inline constexpr int kUniquenessMaxRank = 6;

Report flat_counts(const geometry::SpaceConfig& cfg);
Report incidence_rank(const flats::MaximalFlats& catalog);
/// M M^T against the point graph.
Report gram_identity(const flats::MaximalFlats& catalog);
Report point_graph_check(const geometry::SpaceConfig& cfg);
/// Table identities, idempotent products and the scheme axioms.
Report scheme_check(const cl::Battery& b);
Report valency_check(const cl::Battery& b);

/// Piecewise valuation formula against direct valuations, plus the
/// separation pattern. Independent of any one space.
Report valuation_grid();
/// Non-unique rows of the eigenvalue table against the exception families.
Report uniqueness_grid();

/// The membership routes agree on seeded random subsets and constructed
/// positives, spreads included when the spread family is exhaustive.
Report equivalence_check(const cl::Battery& b, std::uint64_t seed, int samples = kRandomSubsets);
/// Count table on pencils, complements and disjoint pencil unions.
Report count_table_check(const cl::Battery& b);
Report nu1_check(const cl::Battery& b);
Report span_check(const cl::Battery& b);
/// Restrictions, degree identity and pencil distributions with i = 1.
Report container_check(const cl::Battery& b);

/// Pencils, complements and (when the point graph is not complete) one
/// disjoint pencil union, labelled.
std::vector<std::pair<std::string, cl::FlatSet>> constructed_positives(const flats::MaximalFlats& catalog);

struct Section {
    std::string name;
    Report report;
    double seconds = 0;
};

/// Every per-space section that is in reach for the config.
std::vector<Section> paper_suite(const geometry::SpaceConfig& cfg, std::uint64_t seed);

}  // namespace clsets::suite

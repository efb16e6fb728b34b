#pragma once

#include <map>
#include <optional>
#include <vector>

#include "clsets/geometry.hpp"

namespace clsets::flats {

using geometry::Mat;
using geometry::SpaceConfig;
using geometry::Subspace;
using geometry::Vec;

/// The coset rep + direction. rep vanishes at the pivot columns of direction.
struct Flat {
    Subspace direction;
    Vec rep;

    int dim() const { return direction.dim(); }
    bool operator==(const Flat& o) const { return direction == o.direction && rep == o.rep; }
    bool operator<(const Flat& o) const;
};

Flat flat_make(const field::FiniteField& f, const Subspace& p, const Vec& x);
/// Single point as a 0-flat.
Flat point_flat(const SpaceConfig& cfg, const Vec& x);

bool flat_contains_point(const field::FiniteField& f, const Flat& F, const Vec& x);
/// small is a subset of big.
bool flat_contains(const field::FiniteField& f, const Flat& big, const Flat& small);

/// Empty when x2 - x1 is outside V1 + V2.
std::optional<Flat> flat_meet(const field::FiniteField& f, const Flat& a, const Flat& b);
/// Smallest flat containing both: direction V1 + V2 + <x2 - x1>.
Flat flat_join(const field::FiniteField& f, const Flat& a, const Flat& b);

/// All points of a flat (as point indices), ascending.
std::vector<int> flat_points(const SpaceConfig& cfg, const Flat& F);

/// (dim, gram rank) of the direction.
geometry::SubspaceType flat_type(const SpaceConfig& cfg, const Flat& F);

inline constexpr long kFlatEnumerationBound = 100000;

/// O_m in canonical order: direction index first, then rep lexicographically.
std::vector<Flat> enumerate_flats(const SpaceConfig& cfg, int m);
/// O'_j(F): every j-dimensional totally isotropic flat containing F.
std::vector<Flat> flats_through(const SpaceConfig& cfg, const Flat& F, int j);

/// O_nu with point incidences, indexed by FlatId.
///
/// FlatId = direction index * q^nu + coset index, where the coset index reads
/// the rep's non-pivot coordinates as base-q digits (first column most significant).
class MaximalFlats {
public:
    explicit MaximalFlats(const SpaceConfig& cfg);

    const SpaceConfig& config() const { return cfg_; }
    int size() const { return static_cast<int>(flats_.size()); }
    int point_count() const { return cfg_.point_count(); }
    int cosets_per_direction() const { return cosets_; }
    const std::vector<Subspace>& directions() const { return directions_; }

    const Flat& flat(int id) const { return flats_.at(id); }
    const std::vector<Flat>& flats() const { return flats_; }
    int direction_of(int id) const { return id / cosets_; }
    /// Sorted point indices of a flat.
    const std::vector<int>& points_of(int id) const { return points_.at(id); }
    /// Sorted flat ids through a point (the pencil).
    const std::vector<int>& flats_through_point(int point) const { return through_.at(point); }

    /// -1 if the direction is not maximal totally isotropic.
    int direction_index(const Subspace& p) const;
    /// Flat of the given direction through the given point.
    int id_through(int direction, const Vec& x) const;
    /// -1 when F is not in O_nu.
    int id_of(const Flat& F) const;

private:
    SpaceConfig cfg_;
    int cosets_ = 0;
    std::vector<Subspace> directions_;
    std::map<Subspace, int> direction_ids_;
    std::vector<Flat> flats_;
    std::vector<std::vector<int>> points_;
    std::vector<std::vector<int>> through_;
};

/// 0/1 incidence between an ordered point list and an ordered flat list.
struct IncidenceMatrix {
    std::vector<int> points;
    std::vector<int> flats;
    std::vector<std::uint8_t> entries;  // row-major, points x flats

    int rows() const { return static_cast<int>(points.size()); }
    int cols() const { return static_cast<int>(flats.size()); }
    bool at(int r, int c) const { return entries[static_cast<std::size_t>(r) * flats.size() + c] != 0; }
    std::vector<std::vector<long>> as_rows() const;
};

/// M: all points against all of O_nu.
IncidenceMatrix incidence_matrix(const MaximalFlats& catalog);
/// The restriction to a container flat: its points against O_nu(F_big).
IncidenceMatrix incidence_matrix_in(const MaximalFlats& catalog, const Flat& big);

/// True when F has a direction of dimension nu + i and Gram rank 2i with 1 <= i < nu.
bool is_container(const SpaceConfig& cfg, const Flat& F, int* i_out = nullptr);
/// O_nu(F_big): ids of maximal flats inside a container, ascending.
std::vector<int> flats_in(const MaximalFlats& catalog, const Flat& big);
/// Every (nu+i, 2i)-flat containing the maximal flat S, canonical order.
std::vector<Flat> container_flats(const SpaceConfig& cfg, const Flat& S, int i);

}  // namespace clsets::flats

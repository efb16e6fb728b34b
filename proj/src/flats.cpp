#include "clsets/flats.hpp"

#include <algorithm>
#include <stdexcept>

namespace clsets::flats {

using geometry::canonicalize;
using geometry::contains;
using geometry::reduce_mod;
using geometry::vec_add;
using geometry::vec_scale;
using geometry::vec_sub;

bool Flat::operator<(const Flat& o) const {
    if (!(direction == o.direction)) return direction < o.direction;
    return rep < o.rep;
}

Flat flat_make(const field::FiniteField& f, const Subspace& p, const Vec& x) {
    if (static_cast<int>(x.size()) != p.ambient) throw std::invalid_argument("flat_make: dimension mismatch");
    return Flat{p, reduce_mod(f, p, x)};
}

Flat point_flat(const SpaceConfig& cfg, const Vec& x) {
    return flat_make(cfg.field, geometry::zero_subspace(cfg.dim()), x);
}

bool flat_contains_point(const field::FiniteField& f, const Flat& F, const Vec& x) {
    return contains(f, F.direction, vec_sub(f, x, F.rep));
}

bool flat_contains(const field::FiniteField& f, const Flat& big, const Flat& small) {
    return contains(f, big.direction, small.direction) && flat_contains_point(f, big, small.rep);
}

std::optional<Flat> flat_meet(const field::FiniteField& f, const Flat& a, const Flat& b) {
    // A common point a.rep + u1 = b.rep + u2 exists iff b.rep - a.rep = u1 - u2 is in V1 + V2.
    Mat rows = a.direction.basis;
    rows.insert(rows.end(), b.direction.basis.begin(), b.direction.basis.end());
    auto c = geometry::solve_combination(f, rows, vec_sub(f, b.rep, a.rep));
    if (!c) return std::nullopt;
    Vec z = a.rep;
    for (int k = 0; k < a.dim(); ++k)
        if ((*c)[k] != 0) z = vec_add(f, z, vec_scale(f, (*c)[k], a.direction.basis[k]));
    return flat_make(f, geometry::intersection(f, a.direction, b.direction), z);
}

Flat flat_join(const field::FiniteField& f, const Flat& a, const Flat& b) {
    Mat rows = a.direction.basis;
    rows.insert(rows.end(), b.direction.basis.begin(), b.direction.basis.end());
    rows.push_back(vec_sub(f, b.rep, a.rep));
    return flat_make(f, canonicalize(f, a.direction.ambient, rows), a.rep);
}

std::vector<int> flat_points(const SpaceConfig& cfg, const Flat& F) {
    const auto& f = cfg.field;
    std::vector<Vec> pts{F.rep};
    for (const auto& b : F.direction.basis) {
        std::vector<Vec> next;
        next.reserve(pts.size() * cfg.q);
        for (const auto& p : pts)
            for (int c = 0; c < cfg.q; ++c) next.push_back(vec_add(f, p, vec_scale(f, static_cast<field::Elem>(c), b)));
        pts = std::move(next);
    }
    std::vector<int> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(geometry::point_index(cfg, p));
    std::sort(out.begin(), out.end());
    return out;
}

geometry::SubspaceType flat_type(const SpaceConfig& cfg, const Flat& F) {
    return geometry::subspace_type(cfg, F.direction);
}

namespace {

std::vector<int> free_columns(const Subspace& p) {
    std::vector<int> free;
    for (int c = 0; c < p.ambient; ++c)
        if (std::find(p.pivots.begin(), p.pivots.end(), c) == p.pivots.end()) free.push_back(c);
    return free;
}

// Coset reps of p in lexicographic order.
std::vector<Vec> coset_reps(const Subspace& p, int q) {
    auto free = free_columns(p);
    long count = 1;
    for (std::size_t i = 0; i < free.size(); ++i) count *= q;
    std::vector<Vec> reps;
    reps.reserve(count);
    for (long idx = 0; idx < count; ++idx) {
        Vec v(p.ambient, 0);
        long rest = idx;
        for (int k = static_cast<int>(free.size()) - 1; k >= 0; --k) {
            v[free[k]] = static_cast<field::Elem>(rest % q);
            rest /= q;
        }
        reps.push_back(std::move(v));
    }
    return reps;
}

}  // namespace

std::vector<Flat> enumerate_flats(const SpaceConfig& cfg, int m) {
    auto dirs = geometry::enumerate_isotropic(cfg, m);
    long per = 1;
    for (int k = 0; k < cfg.dim() - m; ++k) per *= cfg.q;
    if (static_cast<long>(dirs.size()) * per > kFlatEnumerationBound)
        throw std::length_error("enumerate_flats: more than 100000 flats");
    std::vector<Flat> out;
    out.reserve(dirs.size() * per);
    for (const auto& d : dirs)
        for (auto& r : coset_reps(d, cfg.q)) out.push_back(Flat{d, std::move(r)});
    return out;
}

std::vector<Flat> flats_through(const SpaceConfig& cfg, const Flat& F, int j) {
    if (j < F.dim()) throw std::invalid_argument("flats_through: j below dim F");
    if (j > cfg.nu) throw std::invalid_argument("flats_through: j above nu");
    if (!geometry::is_totally_isotropic(cfg, F.direction))
        throw std::invalid_argument("flats_through: F is not totally isotropic");
    std::vector<Flat> out;
    for (const auto& w : geometry::enumerate_isotropic(cfg, j))
        if (contains(cfg.field, w, F.direction)) out.push_back(flat_make(cfg.field, w, F.rep));
    std::sort(out.begin(), out.end());
    return out;
}

MaximalFlats::MaximalFlats(const SpaceConfig& cfg) : cfg_(cfg) {
    cosets_ = 1;
    for (int k = 0; k < cfg.nu; ++k) cosets_ *= cfg.q;
    flats_ = enumerate_flats(cfg, cfg.nu);
    directions_.reserve(flats_.size() / cosets_);
    for (std::size_t id = 0; id < flats_.size(); id += cosets_) {
        direction_ids_.emplace(flats_[id].direction, static_cast<int>(directions_.size()));
        directions_.push_back(flats_[id].direction);
    }
    points_.reserve(flats_.size());
    through_.assign(cfg.point_count(), {});
    for (std::size_t id = 0; id < flats_.size(); ++id) {
        points_.push_back(flat_points(cfg, flats_[id]));
        for (int p : points_.back()) through_[p].push_back(static_cast<int>(id));
    }
}

int MaximalFlats::direction_index(const Subspace& p) const {
    auto it = direction_ids_.find(p);
    return it == direction_ids_.end() ? -1 : it->second;
}

int MaximalFlats::id_through(int direction, const Vec& x) const {
    const Subspace& p = directions_.at(direction);
    Vec rep = reduce_mod(cfg_.field, p, x);
    int coset = 0;
    for (int c : free_columns(p)) coset = coset * cfg_.q + rep[c];
    return direction * cosets_ + coset;
}

int MaximalFlats::id_of(const Flat& F) const {
    int d = direction_index(F.direction);
    return d < 0 ? -1 : id_through(d, F.rep);
}

std::vector<std::vector<long>> IncidenceMatrix::as_rows() const {
    std::vector<std::vector<long>> out(rows(), std::vector<long>(cols()));
    for (int r = 0; r < rows(); ++r)
        for (int c = 0; c < cols(); ++c) out[r][c] = at(r, c) ? 1 : 0;
    return out;
}

namespace {

IncidenceMatrix build_incidence(const MaximalFlats& catalog, std::vector<int> points, std::vector<int> ids) {
    IncidenceMatrix m{std::move(points), std::move(ids), {}};
    m.entries.assign(m.points.size() * m.flats.size(), 0);
    std::vector<int> row_of(catalog.point_count(), -1);
    for (std::size_t r = 0; r < m.points.size(); ++r) row_of[m.points[r]] = static_cast<int>(r);
    for (std::size_t c = 0; c < m.flats.size(); ++c)
        for (int p : catalog.points_of(m.flats[c]))
            if (row_of[p] >= 0) m.entries[static_cast<std::size_t>(row_of[p]) * m.flats.size() + c] = 1;
    return m;
}

}  // namespace

IncidenceMatrix incidence_matrix(const MaximalFlats& catalog) {
    std::vector<int> points(catalog.point_count()), ids(catalog.size());
    for (int i = 0; i < catalog.point_count(); ++i) points[i] = i;
    for (int i = 0; i < catalog.size(); ++i) ids[i] = i;
    return build_incidence(catalog, std::move(points), std::move(ids));
}

IncidenceMatrix incidence_matrix_in(const MaximalFlats& catalog, const Flat& big) {
    if (!is_container(catalog.config(), big)) throw std::invalid_argument("incidence_matrix_in: not a container flat");
    return build_incidence(catalog, flat_points(catalog.config(), big), flats_in(catalog, big));
}

bool is_container(const SpaceConfig& cfg, const Flat& F, int* i_out) {
    auto t = flat_type(cfg, F);
    int i = t.dim - cfg.nu;
    if (i < 1 || i >= cfg.nu || t.gram_rank != 2 * i) return false;
    if (i_out) *i_out = i;
    return true;
}

std::vector<int> flats_in(const MaximalFlats& catalog, const Flat& big) {
    const auto& cfg = catalog.config();
    if (!is_container(cfg, big)) throw std::invalid_argument("flats_in: not a container flat");
    std::vector<int> out;
    for (int d = 0; d < static_cast<int>(catalog.directions().size()); ++d) {
        if (!contains(cfg.field, big.direction, catalog.directions()[d])) continue;
        for (int id = d * catalog.cosets_per_direction(); id < (d + 1) * catalog.cosets_per_direction(); ++id)
            if (flat_contains_point(cfg.field, big, catalog.flat(id).rep)) out.push_back(id);
    }
    return out;
}

std::vector<Flat> container_flats(const SpaceConfig& cfg, const Flat& S, int i) {
    if (i < 1 || i >= cfg.nu) throw std::invalid_argument("container_flats: need 1 <= i < nu");
    if (S.dim() != cfg.nu || !geometry::is_totally_isotropic(cfg, S.direction))
        throw std::invalid_argument("container_flats: S is not maximal totally isotropic");
    auto free = free_columns(S.direction);
    std::vector<Flat> out;
    for (const auto& u : geometry::enumerate_subspaces(cfg.field, static_cast<int>(free.size()), i)) {
        Mat rows = S.direction.basis;
        for (const auto& r : u.basis) {
            Vec v(cfg.dim(), 0);
            for (std::size_t k = 0; k < free.size(); ++k) v[free[k]] = r[k];
            rows.push_back(std::move(v));
        }
        auto w = canonicalize(cfg.field, cfg.dim(), rows);
        if (geometry::subspace_type(cfg, w).gram_rank != 2 * i) continue;
        out.push_back(flat_make(cfg.field, w, S.rep));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace clsets::flats

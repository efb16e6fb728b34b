#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clsets/field.hpp"

namespace clsets::geometry {

using field::Elem;
using field::FiniteField;
using field::FormCase;

using Vec = std::vector<Elem>;
/// Row-major matrix over F_q: one Vec per row.
using Mat = std::vector<Vec>;

/// The classical space F_q^{2nu} with its form.
struct SpaceConfig {
    FormCase kind;
    int q;
    int nu;
    int e2;  ///< 2e: 2 symplectic, 1 unitary, 0 orthogonal
    FiniteField field;
    Mat form;

    int dim() const { return 2 * nu; }
    /// q^{2nu}
    int point_count() const;
};

/// Validates the (case, q) combination: unitary needs a square q, orthogonal an odd q.
SpaceConfig make_config(FormCase kind, int q, int nu);

// Linear algebra over F_q ------------------------------------------------

Vec zero_vec(int n);
Vec unit_vec(int n, int k);
Vec vec_add(const FiniteField& f, const Vec& a, const Vec& b);
Vec vec_sub(const FiniteField& f, const Vec& a, const Vec& b);
Vec vec_scale(const FiniteField& f, Elem c, const Vec& a);
bool is_zero(const Vec& v);
Mat mat_mul(const FiniteField& f, const Mat& a, const Mat& b);
/// Conjugate transpose when conjugate is set, plain transpose otherwise.
Mat transpose(const FiniteField& f, const Mat& a, bool conjugate = false);
int mat_rank(const FiniteField& f, Mat a);

/// Coefficients c with sum_k c_k rows_k == target, if any.
std::optional<Vec> solve_combination(const FiniteField& f, const Mat& rows, const Vec& target);
/// Basis of coefficient vectors c with sum_k c_k rows_k == 0.
Mat left_kernel(const FiniteField& f, const Mat& rows);

// Subspaces ----------------------------------------------------------------

/// A subspace stored as its unique reduced row echelon basis.
struct Subspace {
    int ambient = 0;
    Mat basis;
    std::vector<int> pivots;

    int dim() const { return static_cast<int>(basis.size()); }
    /// Flattened basis entries; the canonical sort key.
    std::vector<Elem> flattened() const;

    bool operator==(const Subspace& o) const { return ambient == o.ambient && basis == o.basis; }
    bool operator<(const Subspace& o) const;
};

/// RREF of the row space of `rows` (rank-deficient input is reduced).
Subspace canonicalize(const FiniteField& f, int ambient, const Mat& rows);
Subspace zero_subspace(int ambient);
/// x minus the unique element of P making x vanish at P's pivot columns.
Vec reduce_mod(const FiniteField& f, const Subspace& p, const Vec& x);
bool contains(const FiniteField& f, const Subspace& p, const Vec& x);
bool contains(const FiniteField& f, const Subspace& big, const Subspace& small);
Subspace subspace_sum(const FiniteField& f, const Subspace& a, const Subspace& b);
Subspace intersection(const FiniteField& f, const Subspace& a, const Subspace& b);
/// Image of the subspace under x -> xT.
Subspace transform(const FiniteField& f, const Subspace& p, const Mat& t);

/// All k-dimensional subspaces of F_q^n in canonical order.
std::vector<Subspace> enumerate_subspaces(const FiniteField& f, int n, int k);

// Forms ----------------------------------------------------------------------

/// x * form * conj(y)^T (conjugation only in the unitary case).
Elem form_value(const SpaceConfig& cfg, const Vec& x, const Vec& y);
bool is_isotropic(const SpaceConfig& cfg, const Vec& x);
/// P * form * conj(P)^T
Mat gram_matrix(const SpaceConfig& cfg, const Mat& rows);

/// (m, r): dimension and Gram rank. The rank is always even in the
/// symplectic case; it can be odd in the unitary and orthogonal cases.
struct SubspaceType {
    int dim;
    int gram_rank;
    bool operator==(const SubspaceType&) const = default;
};
SubspaceType subspace_type(const SpaceConfig& cfg, const Subspace& p);
bool is_totally_isotropic(const SpaceConfig& cfg, const Subspace& p);

/// All m-dimensional totally isotropic subspaces in canonical order,
/// grown one dimension at a time inside the perp of the current subspace.
std::vector<Subspace> enumerate_isotropic(const SpaceConfig& cfg, int m);

// Isometries ---------------------------------------------------------------

/// x -> x*T + v with T preserving the form.
struct Isometry {
    Mat t;
    Vec v;

    Vec apply(const FiniteField& f, const Vec& x) const;
    Subspace apply(const FiniteField& f, const Subspace& p) const;
};

bool preserves_form(const SpaceConfig& cfg, const Mat& t);
/// Checked construction; throws std::invalid_argument if T is not an isometry.
Isometry make_isometry(const SpaceConfig& cfg, Mat t, Vec v);
/// Deterministic per seed: a random hyperbolic basis plus a random translation.
Isometry random_isometry(const SpaceConfig& cfg, std::uint64_t seed);

// Points ---------------------------------------------------------------------

/// Points are numbered lexicographically: index = sum_k x_k q^{n-1-k}.
int point_index(const SpaceConfig& cfg, const Vec& x);
Vec point_vector(const SpaceConfig& cfg, int index);

/// Adjacency of the point graph: x ~ y iff x != y and x - y is isotropic.
struct PointGraph {
    int n = 0;
    std::vector<std::uint8_t> adj;
    bool adjacent(int a, int b) const { return adj[static_cast<std::size_t>(a) * n + b] != 0; }
};

inline constexpr int kPointGraphBound = 1 << 14;
PointGraph point_graph(const SpaceConfig& cfg);

struct SrgParameters {
    long v, k, lambda, mu;
    bool operator==(const SrgParameters&) const = default;
};
/// Parameters by common-neighbour counting; nullopt if not strongly regular.
/// A complete graph reports mu = 0.
std::optional<SrgParameters> strongly_regular_parameters(const PointGraph& g);

}  // namespace clsets::geometry

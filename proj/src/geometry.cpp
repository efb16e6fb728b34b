#include "clsets/geometry.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace clsets::geometry {

int SpaceConfig::point_count() const {
    int n = 1;
    for (int i = 0; i < dim(); ++i) n *= q;
    return n;
}

SpaceConfig make_config(FormCase kind, int q, int nu) {
    if (nu < 1) throw std::invalid_argument("nu must be at least 1");
    FiniteField f = field::field_of_order(q);
    if (kind == FormCase::unitary && !f.has_conjugation())
        throw std::invalid_argument("unitary case needs a square field order");
    if (kind == FormCase::orthogonal && f.p() == 2)
        throw std::invalid_argument("orthogonal case needs odd characteristic");

    const int n = 2 * nu;
    Mat form(n, Vec(n, 0));
    const Elem lower = kind == FormCase::symplectic ? f.neg(1) : Elem{1};
    for (int i = 0; i < nu; ++i) {
        form[i][nu + i] = 1;
        form[nu + i][i] = lower;
    }
    return SpaceConfig{kind, q, nu, field::doubled_e(kind), f, std::move(form)};
}

// Linear algebra -------------------------------------------------------------

Vec zero_vec(int n) { return Vec(n, 0); }

Vec unit_vec(int n, int k) {
    Vec v(n, 0);
    v.at(k) = 1;
    return v;
}

Vec vec_add(const FiniteField& f, const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.add(a[i], b[i]);
    return r;
}

Vec vec_sub(const FiniteField& f, const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.sub(a[i], b[i]);
    return r;
}

Vec vec_scale(const FiniteField& f, Elem c, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(c, a[i]);
    return r;
}

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](Elem e) { return e == 0; });
}

Mat mat_mul(const FiniteField& f, const Mat& a, const Mat& b) {
    if (a.empty()) return {};
    const std::size_t inner = b.size();
    const std::size_t cols = inner == 0 ? 0 : b[0].size();
    Mat r(a.size(), Vec(cols, 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != inner) throw std::invalid_argument("matrix shape mismatch");
        for (std::size_t k = 0; k < inner; ++k) {
            const Elem c = a[i][k];
            if (c == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) r[i][j] = f.add(r[i][j], f.mul(c, b[k][j]));
        }
    }
    return r;
}

Mat transpose(const FiniteField& f, const Mat& a, bool conjugate) {
    if (a.empty()) return {};
    Mat r(a[0].size(), Vec(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = conjugate ? f.conj(a[i][j]) : a[i][j];
    return r;
}

namespace {

// In-place Gauss-Jordan; returns pivot columns. Rows past the rank end up zero.
std::vector<int> rref_in_place(const FiniteField& f, Mat& a, int cols) {
    std::vector<int> pivots;
    std::size_t row = 0;
    for (int c = 0; c < cols && row < a.size(); ++c) {
        std::size_t sel = row;
        while (sel < a.size() && a[sel][c] == 0) ++sel;
        if (sel == a.size()) continue;
        std::swap(a[row], a[sel]);
        const Elem inv = f.inv(a[row][c]);
        for (auto& e : a[row]) e = f.mul(e, inv);
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][c] == 0) continue;
            const Elem factor = a[r][c];
            for (std::size_t j = 0; j < a[r].size(); ++j)
                a[r][j] = f.sub(a[r][j], f.mul(factor, a[row][j]));
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

}  // namespace

int mat_rank(const FiniteField& f, Mat a) {
    if (a.empty()) return 0;
    return static_cast<int>(rref_in_place(f, a, static_cast<int>(a[0].size())).size());
}

std::optional<Vec> solve_combination(const FiniteField& f, const Mat& rows, const Vec& target) {
    const int r = static_cast<int>(rows.size());
    const int n = static_cast<int>(target.size());
    if (r == 0) return is_zero(target) ? std::optional<Vec>(Vec{}) : std::nullopt;
    // Columns: coefficients c_0..c_{r-1}, then the target.
    Mat aug(n, Vec(r + 1));
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < r; ++k) aug[j][k] = rows[k].at(j);
        aug[j][r] = target[j];
    }
    auto pivots = rref_in_place(f, aug, r + 1);
    if (!pivots.empty() && pivots.back() == r) return std::nullopt;
    Vec c(r, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) c[pivots[i]] = aug[i][r];
    return c;
}

Mat left_kernel(const FiniteField& f, const Mat& rows) {
    const int r = static_cast<int>(rows.size());
    if (r == 0) return {};
    const int n = static_cast<int>(rows[0].size());
    Mat t(n, Vec(r));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < r; ++k) t[j][k] = rows[k][j];
    auto pivots = rref_in_place(f, t, r);
    std::vector<bool> is_pivot(r, false);
    for (int p : pivots) is_pivot[p] = true;
    Mat kernel;
    for (int free = 0; free < r; ++free) {
        if (is_pivot[free]) continue;
        Vec c(r, 0);
        c[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) c[pivots[i]] = f.neg(t[i][free]);
        kernel.push_back(std::move(c));
    }
    return kernel;
}

// Subspaces ------------------------------------------------------------------

std::vector<Elem> Subspace::flattened() const {
    std::vector<Elem> out;
    for (const auto& row : basis) out.insert(out.end(), row.begin(), row.end());
    return out;
}

bool Subspace::operator<(const Subspace& o) const {
    if (dim() != o.dim()) return dim() < o.dim();
    return basis < o.basis;
}

Subspace canonicalize(const FiniteField& f, int ambient, const Mat& rows) {
    Mat a = rows;
    for (const auto& r : a)
        if (static_cast<int>(r.size()) != ambient) throw std::invalid_argument("row length mismatch");
    auto pivots = rref_in_place(f, a, ambient);
    a.resize(pivots.size());
    return Subspace{ambient, std::move(a), std::move(pivots)};
}

Subspace zero_subspace(int ambient) { return Subspace{ambient, {}, {}}; }

Vec reduce_mod(const FiniteField& f, const Subspace& p, const Vec& x) {
    if (static_cast<int>(x.size()) != p.ambient) throw std::invalid_argument("vector length mismatch");
    Vec r = x;
    for (int k = 0; k < p.dim(); ++k) {
        const Elem c = r[p.pivots[k]];
        if (c == 0) continue;
        for (int j = 0; j < p.ambient; ++j) r[j] = f.sub(r[j], f.mul(c, p.basis[k][j]));
    }
    return r;
}

bool contains(const FiniteField& f, const Subspace& p, const Vec& x) { return is_zero(reduce_mod(f, p, x)); }

bool contains(const FiniteField& f, const Subspace& big, const Subspace& small) {
    return std::all_of(small.basis.begin(), small.basis.end(),
                       [&](const Vec& row) { return contains(f, big, row); });
}

Subspace subspace_sum(const FiniteField& f, const Subspace& a, const Subspace& b) {
    Mat rows = a.basis;
    rows.insert(rows.end(), b.basis.begin(), b.basis.end());
    return canonicalize(f, a.ambient, rows);
}

Subspace intersection(const FiniteField& f, const Subspace& a, const Subspace& b) {
    Mat rows = a.basis;
    rows.insert(rows.end(), b.basis.begin(), b.basis.end());
    Mat common;
    for (const auto& c : left_kernel(f, rows)) {
        Vec v = zero_vec(a.ambient);
        for (int k = 0; k < a.dim(); ++k)
            if (c[k] != 0) v = vec_add(f, v, vec_scale(f, c[k], a.basis[k]));
        common.push_back(std::move(v));
    }
    return canonicalize(f, a.ambient, common);
}

Subspace transform(const FiniteField& f, const Subspace& p, const Mat& t) {
    return canonicalize(f, p.ambient, mat_mul(f, p.basis, t));
}

std::vector<Subspace> enumerate_subspaces(const FiniteField& f, int n, int k) {
    std::vector<Subspace> out;
    if (k < 0 || k > n) return out;
    const int q = f.q();
    std::vector<int> piv(k);
    for (int i = 0; i < k; ++i) piv[i] = i;
    while (true) {
        // Free slots: row r, column c > piv[r] that is not a pivot.
        std::vector<std::pair<int, int>> slots;
        for (int r = 0; r < k; ++r)
            for (int c = piv[r] + 1; c < n; ++c)
                if (std::find(piv.begin(), piv.end(), c) == piv.end()) slots.emplace_back(r, c);
        std::vector<int> digit(slots.size(), 0);
        while (true) {
            Mat basis(k, Vec(n, 0));
            for (int r = 0; r < k; ++r) basis[r][piv[r]] = 1;
            for (std::size_t s = 0; s < slots.size(); ++s)
                basis[slots[s].first][slots[s].second] = static_cast<Elem>(digit[s]);
            out.push_back(Subspace{n, std::move(basis), piv});
            std::size_t s = 0;
            while (s < digit.size() && ++digit[s] == q) digit[s++] = 0;
            if (s == digit.size()) break;
        }
        int i = k - 1;
        while (i >= 0 && piv[i] == n - k + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Forms ------------------------------------------------------------------------

Elem form_value(const SpaceConfig& cfg, const Vec& x, const Vec& y) {
    const int n = cfg.dim();
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw std::invalid_argument("form_value: dimension mismatch");
    const auto& f = cfg.field;
    const bool conj = cfg.kind == FormCase::unitary;
    Elem acc = 0;
    for (int a = 0; a < n; ++a) {
        if (x[a] == 0) continue;
        for (int b = 0; b < n; ++b) {
            const Elem g = cfg.form[a][b];
            if (g == 0) continue;
            const Elem yb = conj ? f.conj(y[b]) : y[b];
            acc = f.add(acc, f.mul(f.mul(x[a], g), yb));
        }
    }
    return acc;
}

bool is_isotropic(const SpaceConfig& cfg, const Vec& x) { return form_value(cfg, x, x) == 0; }

Mat gram_matrix(const SpaceConfig& cfg, const Mat& rows) {
    Mat g(rows.size(), Vec(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) g[i][j] = form_value(cfg, rows[i], rows[j]);
    return g;
}

SubspaceType subspace_type(const SpaceConfig& cfg, const Subspace& p) {
    if (p.ambient != cfg.dim()) throw std::invalid_argument("subspace_type: dimension mismatch");
    return {p.dim(), mat_rank(cfg.field, gram_matrix(cfg, p.basis))};
}

bool is_totally_isotropic(const SpaceConfig& cfg, const Subspace& p) {
    return subspace_type(cfg, p).gram_rank == 0;
}

std::vector<Subspace> enumerate_isotropic(const SpaceConfig& cfg, int m) {
    if (m < 0 || m > cfg.nu) throw std::invalid_argument("enumerate_isotropic: need 0 <= m <= nu");
    const int n = cfg.dim();
    std::vector<Vec> iso;
    for (int idx = 1; idx < cfg.point_count(); ++idx) {
        Vec v = point_vector(cfg, idx);
        if (is_isotropic(cfg, v)) iso.push_back(std::move(v));
    }
    std::vector<Subspace> level{zero_subspace(n)};
    for (int d = 0; d < m; ++d) {
        std::set<Subspace> next;
        for (const auto& p : level) {
            for (const auto& v : iso) {
                bool perp = std::all_of(p.basis.begin(), p.basis.end(),
                                        [&](const Vec& b) { return form_value(cfg, b, v) == 0; });
                if (!perp) continue;
                // Only the reduced representative of each coset of p matters.
                if (reduce_mod(cfg.field, p, v) != v) continue;
                Mat rows = p.basis;
                rows.push_back(v);
                next.insert(canonicalize(cfg.field, n, rows));
            }
        }
        level.assign(next.begin(), next.end());
    }
    return level;
}

// Isometries -----------------------------------------------------------------

Vec Isometry::apply(const FiniteField& f, const Vec& x) const {
    const std::size_t n = t.size();
    if (x.size() != n) throw std::invalid_argument("isometry: dimension mismatch");
    Vec r = v;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) r[j] = f.add(r[j], f.mul(x[i], t[i][j]));
    }
    return r;
}

Subspace Isometry::apply(const FiniteField& f, const Subspace& p) const { return transform(f, p, t); }

bool preserves_form(const SpaceConfig& cfg, const Mat& t) {
    const auto& f = cfg.field;
    const bool conj = cfg.kind == FormCase::unitary;
    return mat_mul(f, mat_mul(f, t, cfg.form), transpose(f, t, conj)) == cfg.form;
}

Isometry make_isometry(const SpaceConfig& cfg, Mat t, Vec v) {
    if (static_cast<int>(t.size()) != cfg.dim() || static_cast<int>(v.size()) != cfg.dim())
        throw std::invalid_argument("isometry: dimension mismatch");
    if (!preserves_form(cfg, t)) throw std::invalid_argument("matrix does not preserve the form");
    return Isometry{std::move(t), std::move(v)};
}

Isometry random_isometry(const SpaceConfig& cfg, std::uint64_t seed) {
    const auto& f = cfg.field;
    const int n = cfg.dim();
    const int q = cfg.q;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    auto random_vec = [&] {
        Vec v(n);
        for (auto& e : v) e = static_cast<Elem>(rng() % static_cast<std::uint64_t>(q));
        return v;
    };

    Mat es, fs;
    auto perp_to_previous = [&](const Vec& v) {
        for (const auto& e : es)
            if (form_value(cfg, e, v) != 0) return false;
        for (const auto& g : fs)
            if (form_value(cfg, g, v) != 0) return false;
        return true;
    };

    for (int i = 0; i < cfg.nu; ++i) {
        Vec e;
        do {
            e = random_vec();
        } while (is_zero(e) || !perp_to_previous(e) || !is_isotropic(cfg, e));

        Vec w;
        Elem b = 0;
        do {
            w = random_vec();
            if (!perp_to_previous(w)) continue;
            b = form_value(cfg, e, w);
        } while (b == 0);

        // B(e, c w) = conj(c) B(e, w) in the unitary case.
        Elem c = f.inv(b);
        if (cfg.kind == FormCase::unitary) c = f.conj(c);
        Vec g = vec_scale(f, c, w);

        const Elem self = form_value(cfg, g, g);
        Elem shift = 0;
        if (cfg.kind == FormCase::orthogonal) {
            shift = f.neg(f.div(self, f.from_int(2)));
        } else if (cfg.kind == FormCase::unitary) {
            // B(g + a e, g + a e) = B(g, g) + a + conj(a)
            bool found = false;
            for (int a = 0; a < q && !found; ++a) {
                const Elem ae = static_cast<Elem>(a);
                if (f.add(self, f.add(ae, f.conj(ae))) == 0) {
                    shift = ae;
                    found = true;
                }
            }
            if (!found) throw std::logic_error("trace map not surjective");
        }
        if (shift != 0) g = vec_add(f, g, vec_scale(f, shift, e));
        es.push_back(std::move(e));
        fs.push_back(std::move(g));
    }

    Mat t = es;
    t.insert(t.end(), fs.begin(), fs.end());
    if (!preserves_form(cfg, t)) throw std::logic_error("random_isometry: construction failed");
    return Isometry{std::move(t), random_vec()};
}

// Points ---------------------------------------------------------------------

int point_index(const SpaceConfig& cfg, const Vec& x) {
    if (static_cast<int>(x.size()) != cfg.dim()) throw std::invalid_argument("point_index: dimension mismatch");
    int idx = 0;
    for (Elem e : x) idx = idx * cfg.q + e;
    return idx;
}

Vec point_vector(const SpaceConfig& cfg, int index) {
    const int n = cfg.dim();
    Vec v(n);
    for (int k = n - 1; k >= 0; --k) {
        v[k] = static_cast<Elem>(index % cfg.q);
        index /= cfg.q;
    }
    return v;
}

PointGraph point_graph(const SpaceConfig& cfg) {
    const int n = cfg.point_count();
    if (n > kPointGraphBound) throw std::length_error("point_graph: too many points");
    std::vector<Vec> pts(n);
    std::vector<bool> iso(n);
    for (int i = 0; i < n; ++i) {
        pts[i] = point_vector(cfg, i);
        iso[i] = is_isotropic(cfg, pts[i]);
    }
    PointGraph g{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n, 0)};
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (iso[point_index(cfg, vec_sub(cfg.field, pts[a], pts[b]))]) {
                g.adj[static_cast<std::size_t>(a) * n + b] = 1;
                g.adj[static_cast<std::size_t>(b) * n + a] = 1;
            }
    return g;
}

std::optional<SrgParameters> strongly_regular_parameters(const PointGraph& g) {
    const int n = g.n;
    std::vector<std::vector<int>> nbrs(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (g.adjacent(a, b)) nbrs[a].push_back(b);
    const long k = n ? static_cast<long>(nbrs[0].size()) : 0;
    for (const auto& nb : nbrs)
        if (static_cast<long>(nb.size()) != k) return std::nullopt;
    long lambda = -1, mu = -1;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            long common = 0;
            for (int c : nbrs[a])
                if (g.adjacent(c, b)) ++common;
            long& slot = g.adjacent(a, b) ? lambda : mu;
            if (slot < 0) slot = common;
            else if (slot != common) return std::nullopt;
        }
    }
    return SrgParameters{n, k, std::max(lambda, 0L), std::max(mu, 0L)};
}

}  // namespace clsets::geometry

#include "clsets/exact.hpp"

#include <algorithm>
#include <stdexcept>

namespace clsets::exact {

// RationalMatrix ---------------------------------------------------------------

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::from_rows(const IntRows& rows) {
    RationalMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged rows");
        for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector>& rows) {
    RationalMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged rows");
        for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

RationalVector RationalMatrix::row(std::size_t r) const {
    return RationalVector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    RationalMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (sgn(a) == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                if (sgn(o(k, j)) != 0) r(i, j) += a * o(k, j);
        }
    return r;
}

RationalVector RationalMatrix::operator*(const RationalVector& v) const {
    if (cols_ != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
    RationalVector r(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k)
            if (sgn(v[k]) != 0 && sgn((*this)(i, k)) != 0) r[i] += (*this)(i, k) * v[k];
    return r;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    RationalMatrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
    return r;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix difference shape mismatch");
    RationalMatrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
}

RationalMatrix RationalMatrix::scaled(const Rational& s) const {
    RationalMatrix r = *this;
    for (auto& x : r.data_) x *= s;
    return r;
}

bool RationalMatrix::operator==(const RationalMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool RationalMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return sgn(x) == 0; });
}

Rational RationalMatrix::trace() const {
    Rational t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

// Rank, nullspace, solve ---------------------------------------------------------

namespace {

std::vector<IntegerVector> integer_rows(const RationalMatrix& a) {
    std::vector<IntegerVector> w(a.rows(), IntegerVector(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        BigInt l = 1;
        for (std::size_t j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < a.cols(); ++j) w[i][j] = a(i, j).get_num() * (l / a(i, j).get_den());
    }
    return w;
}

// Rational Gauss-Jordan in place; returns pivot columns (limited to the first `cols`).
std::vector<std::size_t> gauss_jordan(std::vector<RationalVector>& w, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < w.size(); ++c) {
        std::size_t p = r;
        while (p < w.size() && sgn(w[p][c]) == 0) ++p;
        if (p == w.size()) continue;
        std::swap(w[r], w[p]);
        const Rational inv = 1 / w[r][c];
        for (auto& x : w[r]) x *= inv;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i == r || sgn(w[i][c]) == 0) continue;
            const Rational factor = w[i][c];
            for (std::size_t j = c; j < w[i].size(); ++j)
                if (sgn(w[r][j]) != 0) w[i][j] -= factor * w[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::size_t rank(const RationalMatrix& a) {
    auto w = integer_rows(a);
    const std::size_t m = a.rows(), n = a.cols();
    BigInt prev = 1, tmp;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = m;
        for (std::size_t i = r; i < m; ++i) {
            if (sgn(w[i][c]) == 0) continue;
            if (p == m || mpz_cmpabs(w[i][c].get_mpz_t(), w[p][c].get_mpz_t()) < 0) p = i;
        }
        if (p == m) continue;
        std::swap(w[r], w[p]);
        const BigInt& piv = w[r][c];
        for (std::size_t i = r + 1; i < m; ++i) {
            const BigInt lead = w[i][c];
            for (std::size_t j = c + 1; j < n; ++j) {
                mpz_mul(tmp.get_mpz_t(), piv.get_mpz_t(), w[i][j].get_mpz_t());
                if (sgn(lead) != 0 && sgn(w[r][j]) != 0)
                    mpz_submul(tmp.get_mpz_t(), lead.get_mpz_t(), w[r][j].get_mpz_t());
                mpz_divexact(w[i][j].get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
            }
            w[i][c] = 0;
        }
        prev = piv;
        ++r;
    }
    return r;
}

std::vector<RationalVector> nullspace(const RationalMatrix& a) {
    std::vector<RationalVector> w(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) w[i] = a.row(i);
    auto pivots = gauss_jordan(w, a.cols());
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<RationalVector> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        RationalVector v(a.cols());
        v[f] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -w[k][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<RationalVector> solve(const RationalMatrix& a, const RationalVector& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve: shape mismatch");
    std::vector<RationalVector> w(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        w[i] = a.row(i);
        w[i].push_back(b[i]);
    }
    auto pivots = gauss_jordan(w, a.cols() + 1);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    RationalVector y(a.cols());
    for (std::size_t k = 0; k < pivots.size(); ++k) y[pivots[k]] = w[k][a.cols()];
    return y;
}

// Modular elimination ------------------------------------------------------------

namespace {

using u64 = std::uint64_t;

u64 pow_mod(u64 b, u64 e, u64 p) {
    u64 r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = static_cast<u64>(static_cast<unsigned __int128>(r) * b % p);
        b = static_cast<u64>(static_cast<unsigned __int128>(b) * b % p);
        e >>= 1;
    }
    return r;
}

u64 inv_mod(u64 a, u64 p) { return pow_mod(a, p - 2, p); }

u64 reduce_mod(const BigInt& v, u64 p) {
    BigInt r;
    mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
    return r.get_ui();
}

u64 reduce_long(long v, u64 p) {
    long r = v % static_cast<long>(p);
    return static_cast<u64>(r < 0 ? r + static_cast<long>(p) : r);
}

// Row echelon mod p with row tracking. Returns pivot (original row, column) pairs.
RankProfile eliminate_mod(std::vector<std::vector<u64>> w, u64 p) {
    const std::size_t m = w.size(), n = m ? w[0].size() : 0;
    std::vector<int> origin(m);
    for (std::size_t i = 0; i < m; ++i) origin[i] = static_cast<int>(i);
    RankProfile prof;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t sel = r;
        while (sel < m && w[sel][c] == 0) ++sel;
        if (sel == m) continue;
        std::swap(w[r], w[sel]);
        std::swap(origin[r], origin[sel]);
        const u64 inv = inv_mod(w[r][c], p);
        for (std::size_t j = c; j < n; ++j) w[r][j] = w[r][j] * inv % p;
        for (std::size_t i = r + 1; i < m; ++i) {
            const u64 factor = w[i][c];
            if (factor == 0) continue;
            for (std::size_t j = c; j < n; ++j) {
                if (w[r][j] == 0) continue;
                w[i][j] = (w[i][j] + (p - factor) * w[r][j]) % p;
            }
        }
        prof.rows.push_back(origin[r]);
        prof.cols.push_back(static_cast<int>(c));
        ++r;
    }
    return prof;
}

}  // namespace

std::size_t modular_rank(const RationalMatrix& a, std::uint64_t prime) {
    std::vector<std::vector<u64>> w(a.rows(), std::vector<u64>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Rational& x = a(i, j);
            u64 den = reduce_mod(x.get_den(), prime);
            if (den == 0) throw std::domain_error("denominator vanishes modulo the prime");
            w[i][j] = reduce_mod(x.get_num(), prime) * inv_mod(den, prime) % prime;
        }
    return eliminate_mod(std::move(w), prime).rows.size();
}

RankProfile modular_rank_profile(const IntRows& a, std::uint64_t prime) {
    std::vector<std::vector<u64>> w(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        w[i].resize(a[i].size());
        for (std::size_t j = 0; j < a[i].size(); ++j) w[i][j] = reduce_long(a[i][j], prime);
    }
    return eliminate_mod(std::move(w), prime);
}

std::size_t support_rank_mod_p(const std::vector<std::vector<int>>& supports, std::size_t cols, std::size_t stop_at) {
    constexpr u64 p = kPrimeA;
    // Echelon rows stored from their pivot onward, leading entry 1.
    std::vector<std::vector<u64>> basis;
    std::vector<int> row_of_pivot(cols, -1);
    std::vector<u64> v(cols);
    for (const auto& s : supports) {
        if (basis.size() >= stop_at) break;
        std::fill(v.begin(), v.end(), 0);
        for (int c : s) v.at(c) = (v[c] + 1) % p;
        std::size_t lead = cols;
        for (std::size_t c = 0; c < cols; ++c) {
            if (v[c] == 0) continue;
            int r = row_of_pivot[c];
            if (r < 0) {
                if (lead == cols) lead = c;
                continue;
            }
            const u64 f = p - v[c];
            const auto& row = basis[r];
            for (std::size_t k = 0; k < row.size(); ++k) v[c + k] = (v[c + k] + f * row[k]) % p;
        }
        // Reductions by later pivots never touch column lead.
        if (lead == cols) continue;
        const u64 inv = inv_mod(v[lead], p);
        std::vector<u64> row(v.begin() + lead, v.end());
        for (auto& x : row) x = x * inv % p;
        row_of_pivot[lead] = static_cast<int>(basis.size());
        basis.push_back(std::move(row));
    }
    return basis.size();
}

// ExactSystem ----------------------------------------------------------------------

namespace {

constexpr std::uint64_t kPrimes[] = {kPrimeA, kPrimeB, 2147483647ULL, 1000000009ULL, 754974721ULL};

// Fraction-free Gauss-Jordan on [B | I]; on return x = d * B^{-1}.
void invert_fraction_free(std::vector<IntegerVector> w, std::vector<IntegerVector>& x, BigInt& d) {
    const std::size_t r = w.size();
    for (std::size_t i = 0; i < r; ++i) {
        w[i].resize(2 * r);
        w[i][r + i] = 1;
    }
    BigInt prev = 1, tmp;
    for (std::size_t k = 0; k < r; ++k) {
        std::size_t p = r;
        for (std::size_t i = k; i < r; ++i) {
            if (sgn(w[i][k]) == 0) continue;
            if (p == r || mpz_cmpabs(w[i][k].get_mpz_t(), w[p][k].get_mpz_t()) < 0) p = i;
        }
        if (p == r) throw std::logic_error("minor is singular");
        std::swap(w[k], w[p]);
        const BigInt piv = w[k][k];
        for (std::size_t i = 0; i < r; ++i) {
            if (i == k) continue;
            const BigInt lead = w[i][k];
            for (std::size_t j = 0; j < 2 * r; ++j) {
                if (j == k) continue;
                if (sgn(w[i][j]) == 0 && (sgn(lead) == 0 || sgn(w[k][j]) == 0)) continue;
                mpz_mul(tmp.get_mpz_t(), piv.get_mpz_t(), w[i][j].get_mpz_t());
                if (sgn(lead) != 0 && sgn(w[k][j]) != 0)
                    mpz_submul(tmp.get_mpz_t(), lead.get_mpz_t(), w[k][j].get_mpz_t());
                mpz_divexact(w[i][j].get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
            }
            w[i][k] = 0;
        }
        prev = piv;
    }
    d = prev;
    x.assign(r, IntegerVector(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) x[i][j] = w[i][r + j];
}

void normalize(IntegerVector& v) {
    BigInt g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

}  // namespace

ExactSystem::ExactSystem(IntRows a) : a_(std::move(a)) {
    m_ = a_.size();
    n_ = m_ ? a_[0].size() : 0;
    row_support_.assign(m_, {});
    col_support_.assign(n_, {});
    for (std::size_t i = 0; i < m_; ++i) {
        if (a_[i].size() != n_) throw std::invalid_argument("ragged rows");
        for (std::size_t j = 0; j < n_; ++j)
            if (a_[i][j] != 0) {
                row_support_[i].push_back(static_cast<int>(j));
                col_support_[j].push_back(static_cast<int>(i));
            }
    }
    for (auto p : kPrimes)
        if (try_prime(p)) return;
    throw std::runtime_error("ExactSystem: no prime certified the rank");
}

bool ExactSystem::try_prime(std::uint64_t prime) {
    auto prof = modular_rank_profile(a_, prime);
    const std::size_t r = prof.rows.size();
    std::vector<IntegerVector> b(r, IntegerVector(r));
    for (std::size_t s = 0; s < r; ++s)
        for (std::size_t t = 0; t < r; ++t) b[s][t] = a_[prof.rows[s]][prof.cols[t]];
    std::vector<IntegerVector> x;
    BigInt d;
    invert_fraction_free(b, x, d);

    std::vector<bool> in_cols(n_, false);
    for (int c : prof.cols) in_cols[c] = true;
    std::vector<IntegerVector> kernel;
    std::vector<BigInt> acc(m_);
    for (std::size_t g = 0; g < n_; ++g) {
        if (in_cols[g]) continue;
        IntegerVector k(n_);
        k[g] = d;
        for (std::size_t t = 0; t < r; ++t) {
            BigInt s = 0;
            for (std::size_t u = 0; u < r; ++u) {
                long coef = a_[prof.rows[u]][g];
                if (coef != 0 && sgn(x[t][u]) != 0) s += x[t][u] * coef;
            }
            k[prof.cols[t]] = -s;
        }
        for (auto& v : acc) v = 0;
        for (std::size_t c = 0; c < n_; ++c) {
            if (sgn(k[c]) == 0) continue;
            for (int i : col_support_[c]) acc[i] += k[c] * a_[i][c];
        }
        for (const auto& v : acc)
            if (sgn(v) != 0) return false;
        normalize(k);
        kernel.push_back(std::move(k));
    }
    prime_ = prime;
    pivot_rows_ = std::move(prof.rows);
    pivot_cols_ = std::move(prof.cols);
    inverse_ = std::move(x);
    det_ = d;
    right_kernel_ = std::move(kernel);
    return true;
}

const std::vector<IntegerVector>& ExactSystem::left_nullspace() const {
    if (left_ready_) return left_kernel_;
    const std::size_t r = rank();
    std::vector<bool> in_rows(m_, false);
    for (int i : pivot_rows_) in_rows[i] = true;
    std::vector<BigInt> acc(n_);
    for (std::size_t f = 0; f < m_; ++f) {
        if (in_rows[f]) continue;
        IntegerVector k(m_);
        k[f] = det_;
        // k_I = -(a[f, J] N)
        for (std::size_t u = 0; u < r; ++u) {
            BigInt s = 0;
            for (std::size_t t = 0; t < r; ++t) {
                long coef = a_[f][pivot_cols_[t]];
                if (coef != 0 && sgn(inverse_[t][u]) != 0) s += inverse_[t][u] * coef;
            }
            k[pivot_rows_[u]] = -s;
        }
        for (auto& v : acc) v = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (sgn(k[i]) == 0) continue;
            for (int c : row_support_[i]) acc[c] += k[i] * a_[i][c];
        }
        for (const auto& v : acc)
            if (sgn(v) != 0) throw std::logic_error("left nullspace vector failed verification");
        normalize(k);
        left_kernel_.push_back(std::move(k));
    }
    left_ready_ = true;
    return left_kernel_;
}

std::optional<RationalVector> ExactSystem::solve(const RationalVector& b) const {
    if (b.size() != m_) throw std::invalid_argument("ExactSystem::solve: shape mismatch");
    const std::size_t r = rank();
    // z = N b_I, candidate y_J = z / d.
    std::vector<Rational> z(r);
    for (std::size_t t = 0; t < r; ++t)
        for (std::size_t u = 0; u < r; ++u) {
            const Rational& bu = b[pivot_rows_[u]];
            if (sgn(bu) != 0 && sgn(inverse_[t][u]) != 0) z[t] += inverse_[t][u] * bu;
        }
    RationalVector y(n_);
    for (std::size_t t = 0; t < r; ++t) y[pivot_cols_[t]] = z[t] / det_;
    for (std::size_t i = 0; i < m_; ++i) {
        Rational s = 0;
        for (int c : row_support_[i])
            if (sgn(y[c]) != 0) s += y[c] * a_[i][c];
        if (s != b[i]) return std::nullopt;
    }
    return y;
}

std::size_t certified_rank(const IntRows& a) { return ExactSystem(a).rank(); }

// Checked integers -------------------------------------------------------------------

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 addition overflow");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 multiplication overflow");
    return r;
}

std::int64_t narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("int128 value out of int64 range");
    return static_cast<std::int64_t>(v);
}

std::int64_t to_int64(const BigInt& v) {
    if (!mpz_fits_slong_p(v.get_mpz_t())) throw std::overflow_error("integer out of int64 range");
    return v.get_si();
}

}  // namespace clsets::exact

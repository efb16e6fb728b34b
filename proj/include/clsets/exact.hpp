#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clsets/field.hpp"

namespace clsets::exact {

using RationalVector = std::vector<Rational>;
using IntegerVector = std::vector<BigInt>;
/// Small integer matrix given by rows; the input format for certified routines.
using IntRows = std::vector<std::vector<long>>;

class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols);
    static RationalMatrix identity(std::size_t n);
    static RationalMatrix from_rows(const IntRows& rows);
    static RationalMatrix from_rows(const std::vector<RationalVector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    RationalVector row(std::size_t r) const;

    RationalMatrix transpose() const;
    RationalMatrix operator*(const RationalMatrix& o) const;
    RationalVector operator*(const RationalVector& v) const;
    RationalMatrix operator+(const RationalMatrix& o) const;
    RationalMatrix operator-(const RationalMatrix& o) const;
    RationalMatrix scaled(const Rational& s) const;
    bool operator==(const RationalMatrix& o) const;
    bool is_zero() const;
    Rational trace() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

/// Fraction-free (Bareiss) elimination over the integers after clearing row
/// denominators; pivots on the smallest nonzero magnitude in each column.
std::size_t rank(const RationalMatrix& a);
/// Basis of {y : a y = 0} by rational Gauss-Jordan; one vector per free column.
std::vector<RationalVector> nullspace(const RationalMatrix& a);
/// Some y with a y = b, or nullopt when b is outside the column space.
std::optional<RationalVector> solve(const RationalMatrix& a, const RationalVector& b);

inline constexpr std::uint64_t kPrimeA = 1000000007ULL;
inline constexpr std::uint64_t kPrimeB = 998244353ULL;
/// Rank over F_p; throws if a denominator vanishes mod p. A lower bound for rank().
std::size_t modular_rank(const RationalMatrix& a, std::uint64_t prime);

/// Pivot rows and columns of an elimination mod p; a[rows, cols] is invertible mod p.
struct RankProfile {
    std::vector<int> rows;
    std::vector<int> cols;
};
RankProfile modular_rank_profile(const IntRows& a, std::uint64_t prime);

/// Rank mod kPrimeA of the 0/1 rows given by their supports, processed in
/// order and stopping once stop_at independent rows are found. A lower bound
/// for the rational rank.
std::size_t support_rank_mod_p(const std::vector<std::vector<int>>& supports, std::size_t cols,
                               std::size_t stop_at = static_cast<std::size_t>(-1));

/// Exact solver for a fixed integer matrix with a certified rank.
///
/// A nonsingular r x r minor B is located mod p and inverted exactly as
/// N / d (B N = d I). Every nullspace vector built from it is checked against
/// the matrix, so the rank is bracketed from both sides; if a check fails the
/// next prime is tried.
class ExactSystem {
public:
    explicit ExactSystem(IntRows a);

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    std::size_t rank() const { return pivot_rows_.size(); }
    std::uint64_t prime_used() const { return prime_; }

    /// y with a y = b (supported on the pivot columns), checked exactly.
    std::optional<RationalVector> solve(const RationalVector& b) const;
    /// Integer basis of {k : a k = 0}, each vector verified.
    const std::vector<IntegerVector>& nullspace() const { return right_kernel_; }
    /// Integer basis of {k : k^T a = 0}, each vector verified; built on first use.
    const std::vector<IntegerVector>& left_nullspace() const;

private:
    bool try_prime(std::uint64_t prime);

    IntRows a_;
    std::size_t m_ = 0, n_ = 0;
    std::vector<std::vector<int>> row_support_, col_support_;
    std::uint64_t prime_ = 0;
    std::vector<int> pivot_rows_, pivot_cols_;
    std::vector<IntegerVector> inverse_;  // N, r x r
    BigInt det_;                          // d
    std::vector<IntegerVector> right_kernel_;
    mutable std::vector<IntegerVector> left_kernel_;
    mutable bool left_ready_ = false;
};

/// Rank of an integer matrix certified by ExactSystem (modular minor plus
/// verified nullspace); used where Bareiss elimination is too slow.
std::size_t certified_rank(const IntRows& a);

// Checked machine-integer helpers for scaled idempotent arithmetic.
/// a + b, throwing std::overflow_error on wrap.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
/// Narrowing from __int128, throwing on overflow.
std::int64_t narrow(__int128 v);
/// BigInt to int64, throwing if out of range.
std::int64_t to_int64(const BigInt& v);

}  // namespace clsets::exact

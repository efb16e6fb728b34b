#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace clsets {

using BigInt = mpz_class;
using Rational = mpq_class;

namespace field {

/// Element encoding: base-p digits of the polynomial coefficients, constant term first.
using Elem = std::uint8_t;

/// The three classical forms; e = 1, 1/2, 0 respectively.
enum class FormCase { symplectic, unitary, orthogonal };

std::string to_string(FormCase kind);
FormCase form_case_from_string(const std::string& name);

/// Twice the parameter e, so half-integers stay integral.
int doubled_e(FormCase kind);

/// Small finite field with precomputed operation tables.
///
/// Supported orders are 2, 3, 4, 5, 7, 8 and 9. Extension fields use fixed
/// moduli: t^2+t+1 over F_2, t^3+t+1 over F_2 and t^2+1 over F_3.
class FiniteField {
public:
    static constexpr int kMaxOrder = 9;

    FiniteField(int p, int k);

    int p() const { return p_; }
    int k() const { return k_; }
    int q() const { return q_; }
    /// Order of the fixed field of conjugation; 0 when k is odd.
    int q0() const { return q0_; }
    /// Modulus coefficients, constant term first; empty for prime fields.
    const std::vector<int>& modulus() const { return modulus_; }

    Elem add(Elem a, Elem b) const { return add_[a * kMaxOrder + b]; }
    Elem sub(Elem a, Elem b) const { return add_[a * kMaxOrder + neg_[b]]; }
    Elem mul(Elem a, Elem b) const { return mul_[a * kMaxOrder + b]; }
    Elem neg(Elem a) const { return neg_[a]; }
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, unsigned e) const;

    bool has_conjugation() const { return q0_ != 0; }
    /// a -> a^{q0}; requires a square order.
    Elem conj(Elem a) const;

    /// Integer n reduced into the prime subfield.
    Elem from_int(long n) const;

    bool operator==(const FiniteField& other) const { return q_ == other.q_; }

private:
    int p_;
    int k_;
    int q_;
    int q0_ = 0;
    std::vector<int> modulus_;
    std::array<Elem, kMaxOrder * kMaxOrder> add_{};
    std::array<Elem, kMaxOrder * kMaxOrder> mul_{};
    std::array<Elem, kMaxOrder> neg_{};
    std::array<Elem, kMaxOrder> inv_{};
    std::array<Elem, kMaxOrder> conj_{};
};

FiniteField make_field(int p, int k);
/// Field of the given order (2, 3, 4, 5, 7, 8 or 9).
FiniteField field_of_order(int q);

/// An element bound to its field; mixing fields throws.
class FieldElement {
public:
    FieldElement(const FiniteField& f, Elem value);

    Elem value() const { return value_; }
    const FiniteField& field() const { return *field_; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement inverse() const;
    bool operator==(const FieldElement& o) const;

private:
    void require_same(const FieldElement& o) const;
    const FiniteField* field_;
    Elem value_;
};

FieldElement conjugate(const FieldElement& a);

// q-analog integer combinatorics ------------------------------------------

BigInt int_pow(long base, unsigned long exp);

/// [n k]_q; zero outside 0 <= k <= n.
BigInt gauss_binomial(long n, long k, long q);

/// prod_{t=lo}^{hi} (q^{t+e-1} + 1); 1 for an empty range.
BigInt isotropic_product(FormCase kind, int q, long lo, long hi);

/// q^{d/2} for a doubled exponent d of any sign. Odd d needs a square q.
Rational half_power(int q, long doubled_exp);

/// Integral q^{d/2}; throws std::logic_error when the result is not an integer.
BigInt half_power_int(int q, long doubled_exp);

/// q^{e*t}, evaluated in base q0 for the unitary case.
BigInt e_power(FormCase kind, int q, long t);

}  // namespace field
}  // namespace clsets

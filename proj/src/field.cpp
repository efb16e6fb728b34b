#include "clsets/field.hpp"

#include <stdexcept>

namespace clsets::field {

std::string to_string(FormCase kind) {
    switch (kind) {
    case FormCase::symplectic: return "symplectic";
    case FormCase::unitary: return "unitary";
    case FormCase::orthogonal: return "orthogonal";
    }
    return "?";
}

FormCase form_case_from_string(const std::string& name) {
    if (name == "symplectic") return FormCase::symplectic;
    if (name == "unitary") return FormCase::unitary;
    if (name == "orthogonal") return FormCase::orthogonal;
    throw std::invalid_argument("unknown case '" + name + "'");
}

int doubled_e(FormCase kind) {
    switch (kind) {
    case FormCase::symplectic: return 2;
    case FormCase::unitary: return 1;
    case FormCase::orthogonal: return 0;
    }
    return 0;
}

namespace {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<int> fixed_modulus(int p, int k) {
    if (k == 1) return {};
    if (p == 2 && k == 2) return {1, 1, 1};     // t^2 + t + 1
    if (p == 2 && k == 3) return {1, 1, 0, 1};  // t^3 + t + 1
    if (p == 3 && k == 2) return {1, 0, 1};     // t^2 + 1
    throw std::invalid_argument("unsupported field order");
}

// Evaluate a monic polynomial over F_p at a prime-field value.
int eval_mod(const std::vector<int>& poly, int x, int p) {
    int acc = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = (acc * x + *it) % p;
    return acc;
}

std::vector<int> digits(int value, int p, int k) {
    std::vector<int> d(k);
    for (int i = 0; i < k; ++i) {
        d[i] = value % p;
        value /= p;
    }
    return d;
}

int pack(const std::vector<int>& d, int p) {
    int value = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) value = value * p + *it;
    return value;
}

}  // namespace

FiniteField::FiniteField(int p, int k) : p_(p), k_(k) {
    if (!is_prime(p)) throw std::invalid_argument("characteristic must be prime");
    if (k < 1) throw std::invalid_argument("extension degree must be positive");
    long order = 1;
    for (int i = 0; i < k; ++i) order *= p;
    if (order > kMaxOrder || order == 6) throw std::invalid_argument("unsupported field order");
    q_ = static_cast<int>(order);
    modulus_ = fixed_modulus(p, k);

    // Degree <= 3: irreducible iff no root in F_p.
    if (k > 1) {
        for (int x = 0; x < p; ++x)
            if (eval_mod(modulus_, x, p) == 0)
                throw std::logic_error("field modulus is reducible");
    }

    for (int a = 0; a < q_; ++a) {
        auto da = digits(a, p, k);
        for (int b = 0; b < q_; ++b) {
            auto db = digits(b, p, k);
            std::vector<int> s(k);
            for (int i = 0; i < k; ++i) s[i] = (da[i] + db[i]) % p;
            add_[a * kMaxOrder + b] = static_cast<Elem>(pack(s, p));

            std::vector<int> prod(2 * k - 1, 0);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            // Reduce using the monic modulus t^k = -(lower terms).
            for (int deg = 2 * k - 2; deg >= k; --deg) {
                int c = prod[deg];
                if (c == 0) continue;
                prod[deg] = 0;
                for (int i = 0; i < k; ++i)
                    prod[deg - k + i] = ((prod[deg - k + i] - c * modulus_[i]) % p + p) % p;
            }
            prod.resize(k);
            mul_[a * kMaxOrder + b] = static_cast<Elem>(pack(prod, p));
        }
    }
    for (int a = 0; a < q_; ++a) {
        for (int b = 0; b < q_; ++b) {
            if (add_[a * kMaxOrder + b] == 0) neg_[a] = static_cast<Elem>(b);
            if (mul_[a * kMaxOrder + b] == 1) inv_[a] = static_cast<Elem>(b);
        }
    }
    if (k % 2 == 0) {
        q0_ = 1;
        for (int i = 0; i < k / 2; ++i) q0_ *= p;
        for (int a = 0; a < q_; ++a) conj_[a] = pow(static_cast<Elem>(a), q0_);
    }
}

Elem FiniteField::inv(Elem a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return inv_[a];
}

Elem FiniteField::pow(Elem a, unsigned e) const {
    Elem result = 1;
    while (e--) result = mul(result, a);
    return result;
}

Elem FiniteField::conj(Elem a) const {
    if (!has_conjugation()) throw std::domain_error("conjugation needs a square field order");
    return conj_[a];
}

Elem FiniteField::from_int(long n) const {
    long r = ((n % p_) + p_) % p_;
    return static_cast<Elem>(r);
}

FiniteField make_field(int p, int k) { return FiniteField(p, k); }

FiniteField field_of_order(int q) {
    for (int p = 2; p <= q; ++p) {
        int power = 1;
        for (int k = 1; k <= 4; ++k) {
            power *= p;
            if (power == q) return FiniteField(p, k);
            if (power > q) break;
        }
        if (q % p == 0) break;
    }
    throw std::invalid_argument("unsupported field order " + std::to_string(q));
}

FieldElement::FieldElement(const FiniteField& f, Elem value) : field_(&f), value_(value) {
    if (value >= f.q()) throw std::out_of_range("field element out of range");
}

void FieldElement::require_same(const FieldElement& o) const {
    if (!(*field_ == *o.field_)) throw std::invalid_argument("elements of different fields");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    require_same(o);
    return {*field_, field_->add(value_, o.value_)};
}
FieldElement FieldElement::operator-(const FieldElement& o) const {
    require_same(o);
    return {*field_, field_->sub(value_, o.value_)};
}
FieldElement FieldElement::operator*(const FieldElement& o) const {
    require_same(o);
    return {*field_, field_->mul(value_, o.value_)};
}
FieldElement FieldElement::operator/(const FieldElement& o) const {
    require_same(o);
    return {*field_, field_->div(value_, o.value_)};
}
FieldElement FieldElement::operator-() const { return {*field_, field_->neg(value_)}; }
FieldElement FieldElement::inverse() const { return {*field_, field_->inv(value_)}; }
bool FieldElement::operator==(const FieldElement& o) const {
    require_same(o);
    return value_ == o.value_;
}

FieldElement conjugate(const FieldElement& a) { return {a.field(), a.field().conj(a.value())}; }

BigInt int_pow(long base, unsigned long exp) {
    BigInt r;
    BigInt b = base;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), exp);
    return r;
}

BigInt gauss_binomial(long n, long k, long q) {
    if (q < 2) throw std::invalid_argument("gauss_binomial needs q >= 2");
    if (k < 0 || k > n) return 0;
    BigInt num = 1, den = 1;
    for (long t = 0; t < k; ++t) {
        num *= int_pow(q, n - t) - 1;
        den *= int_pow(q, t + 1) - 1;
    }
    BigInt r;
    mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return r;
}

BigInt isotropic_product(FormCase kind, int q, long lo, long hi) {
    BigInt r = 1;
    const int e2 = doubled_e(kind);
    for (long t = lo; t <= hi; ++t) r *= half_power_int(q, 2 * t + e2 - 2) + 1;
    return r;
}

namespace {

int integer_sqrt_exact(int q) {
    for (int r = 1; r * r <= q; ++r)
        if (r * r == q) return r;
    return 0;
}

}  // namespace

Rational half_power(int q, long doubled_exp) {
    long base = q;
    long exp = doubled_exp;
    if (doubled_exp % 2 != 0) {
        int r = integer_sqrt_exact(q);
        if (r == 0)
            throw std::logic_error("odd doubled exponent for non-square q = " + std::to_string(q));
        base = r;
    } else {
        exp = doubled_exp / 2;
    }
    if (exp >= 0) return Rational(int_pow(base, static_cast<unsigned long>(exp)));
    Rational r(BigInt(1), int_pow(base, static_cast<unsigned long>(-exp)));
    r.canonicalize();
    return r;
}

BigInt half_power_int(int q, long doubled_exp) {
    Rational r = half_power(q, doubled_exp);
    if (r.get_den() != 1) throw std::logic_error("non-integral power of q");
    return r.get_num();
}

BigInt e_power(FormCase kind, int q, long t) {
    if (t < 0) throw std::invalid_argument("e_power needs t >= 0");
    return half_power_int(q, doubled_e(kind) * t);
}

}  // namespace clsets::field

#pragma once

#include "edsh/bigfloat.hpp"
#include "edsh/poly.hpp"
#include "edsh/roots.hpp"

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace edsh {

inline constexpr mpfr_prec_t kDefaultPrecision = 128;

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

// K = Q[t]/(f) for a monic, squarefree integer polynomial f. Irreducibility
// is the caller's responsibility: a reducible f gives a product of fields and
// every height computed over it is meaningless.
class NumberField {
public:
    // Throws NotMonic, NotSquarefree or ZeroDegree.
    static FieldPtr create(std::vector<mpz_class> minpoly);
    static FieldPtr rationals();

    int degree() const { return degree_; }
    bool is_rational() const { return degree_ == 1; }
    const poly::ZPoly& minpoly() const { return minpoly_; }
    bool same_as(const NumberField& other) const { return this == &other || minpoly_ == other.minpoly_; }

    // Tr(t^i) for 0 <= i < d: the power sums of the roots of f.
    const std::vector<mpz_class>& power_sums() const { return power_sums_; }

    // Certified complex roots of f, cached per precision (rounded up to a
    // multiple of 32 bits). Sorted by real part, then imaginary part.
    std::shared_ptr<const RootEnclosures> embeddings(mpfr_prec_t bits = kDefaultPrecision) const;

    NumberField(const NumberField&) = delete;
    NumberField& operator=(const NumberField&) = delete;

private:
    explicit NumberField(poly::ZPoly minpoly);

    poly::ZPoly minpoly_;
    int degree_;
    std::vector<mpz_class> power_sums_;
    mutable std::mutex cache_mutex_;
    mutable std::map<mpfr_prec_t, std::shared_ptr<const RootEnclosures>> cache_;
};

// An element of K as (num_0 + num_1 t + ... + num_{d-1} t^{d-1}) / den with
// den > 0 and gcd(den, content(num)) = 1. Always reduced modulo f.
class FieldElement {
public:
    FieldElement() = default;
    explicit FieldElement(FieldPtr field);  // zero
    FieldElement(FieldPtr field, const std::vector<mpq_class>& coeffs);
    FieldElement(FieldPtr field, long value);

    static FieldElement from_integers(FieldPtr field, std::vector<mpz_class> coeffs);
    static FieldElement constant(FieldPtr field, const mpq_class& value);
    static FieldElement generator(FieldPtr field);

    const FieldPtr& field() const { return field_; }
    int degree() const { return field_->degree(); }
    std::vector<mpq_class> coeffs() const;
    const std::vector<mpz_class>& numerator() const { return num_; }
    const mpz_class& denominator() const { return den_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_integral() const { return den_ == 1; }
    mpz_class content() const;  // gcd of the numerator entries
    size_t max_coeff_bits() const;

    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const FieldElement& o);
    FieldElement& operator*=(const mpz_class& s);
    FieldElement& operator/=(const FieldElement& o) { return *this *= o.inverse(); }
    FieldElement operator-() const;

    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    friend FieldElement operator*(FieldElement a, const mpz_class& s) { return a *= s; }
    friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
    friend bool operator==(const FieldElement& a, const FieldElement& b);
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    FieldElement pow(unsigned long e) const;
    // Throws DivisionByZero.
    FieldElement inverse() const;
    // Divides by an integer, throwing InexactDivision unless the quotient of
    // an integral element stays integral.
    FieldElement divexact(const mpz_class& s) const;

    mpq_class trace() const;
    // N_{K|Q}: Res(f, num) / den^d.
    mpq_class norm() const;
    // Characteristic polynomial of multiplication by this element; monic of
    // degree d, ascending coefficients.
    poly::QPoly charpoly() const;

    // Image under the indexed embedding, evaluated with enough guard bits
    // that cancellation among large coefficients does not eat the requested
    // precision. Throws IndexOutOfRange.
    Complex embed(int index, mpfr_prec_t bits = kDefaultPrecision) const;
    // Average over places of log max(1, |a|_v), in nats.
    double naive_height(mpfr_prec_t bits = kDefaultPrecision) const;

    std::string to_string() const;

private:
    void normalize();
    void check_field(const FieldElement& o) const;

    FieldPtr field_;
    std::vector<mpz_class> num_;
    mpz_class den_ = 1;
};

// Reduces a0 + a1 t + ... modulo the monic minpoly in place.
void reduce_mod_monic(std::vector<mpz_class>& coeffs, const poly::ZPoly& monic);

}  // namespace edsh

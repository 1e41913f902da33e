#pragma once

#include "edsh/number_field.hpp"

#include <array>
#include <optional>

namespace edsh {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over K, integral model.
class Curve {
public:
    // Throws SingularCurve, NonIntegralCoefficients, FieldMismatch.
    Curve(FieldElement a1, FieldElement a2, FieldElement a3, FieldElement a4, FieldElement a6);
    // Integral coefficients over Q.
    static Curve over_q(long a1, long a2, long a3, long a4, long a6);

    const FieldPtr& field() const { return a1_.field(); }
    int degree() const { return field()->degree(); }

    const FieldElement& a1() const { return a1_; }
    const FieldElement& a2() const { return a2_; }
    const FieldElement& a3() const { return a3_; }
    const FieldElement& a4() const { return a4_; }
    const FieldElement& a6() const { return a6_; }
    const FieldElement& b2() const { return b2_; }
    const FieldElement& b4() const { return b4_; }
    const FieldElement& b6() const { return b6_; }
    const FieldElement& b8() const { return b8_; }
    const FieldElement& c4() const { return c4_; }
    const FieldElement& c6() const { return c6_; }
    const FieldElement& discriminant() const { return delta_; }

    // D = |N_{K|Q}(Delta)|.
    mpz_class discriminant_norm() const;

private:
    FieldElement a1_, a2_, a3_, a4_, a6_;
    FieldElement b2_, b4_, b6_, b8_, c4_, c6_, delta_;
};

class Point {
public:
    static Point infinity() { return Point(); }
    Point(FieldElement x, FieldElement y) : affine_(std::array<FieldElement, 2>{std::move(x), std::move(y)}) {}

    bool is_infinity() const { return !affine_.has_value(); }
    const FieldElement& x() const { return (*affine_)[0]; }
    const FieldElement& y() const { return (*affine_)[1]; }
    bool is_integral() const { return is_infinity() || (x().is_integral() && y().is_integral()); }

    friend bool operator==(const Point& p, const Point& q);

private:
    Point() = default;
    std::optional<std::array<FieldElement, 2>> affine_;
};

bool is_on_curve(const Curve& c, const Point& p);

// Chord-and-tangent group law. Throw PointNotOnCurve.
Point point_negate(const Curve& c, const Point& p);
Point point_add(const Curve& c, const Point& p, const Point& q);
Point point_double(const Curve& c, const Point& p);
Point point_multiply(const Curve& c, const Point& p, long n);

struct ClearedModel {
    Curve curve;
    Point point;
    mpz_class scale;  // u
};

// Picks u so that u^2 x and u^3 y are integral and returns the model with
// a_i -> u^i a_i. u comes from a coprime base of the two denominators with
// perfect-power roots taken, so no integer factorization is attempted; it is
// the least valid u whenever the base elements are prime powers.
ClearedModel clear_denominators(const Curve& c, const Point& p);

}  // namespace edsh

#include "edsh/curve.hpp"

#include "edsh/error.hpp"

#include <algorithm>

namespace edsh {

namespace {

FieldElement scalar(const FieldPtr& k, long v) { return FieldElement(k, v); }

}  // namespace

Curve::Curve(FieldElement a1, FieldElement a2, FieldElement a3, FieldElement a4, FieldElement a6)
    : a1_(std::move(a1)), a2_(std::move(a2)), a3_(std::move(a3)), a4_(std::move(a4)), a6_(std::move(a6)) {
    for (const auto* a : {&a2_, &a3_, &a4_, &a6_}) {
        if (!a1_.field() || !a->field() || !a1_.field()->same_as(*a->field()))
            throw Error(Errc::FieldMismatch, "curve coefficients lie in different fields");
    }
    for (const auto* a : {&a1_, &a2_, &a3_, &a4_, &a6_}) {
        if (!a->is_integral()) throw Error(Errc::NonIntegralCoefficients, "curve coefficient " + a->to_string() + " is not integral");
    }
    b2_ = a1_ * a1_ + a2_ * mpz_class(4);
    b4_ = a4_ * mpz_class(2) + a1_ * a3_;
    b6_ = a3_ * a3_ + a6_ * mpz_class(4);
    b8_ = a1_ * a1_ * a6_ + a2_ * a6_ * mpz_class(4) - a1_ * a3_ * a4_ + a2_ * a3_ * a3_ - a4_ * a4_;
    c4_ = b2_ * b2_ - b4_ * mpz_class(24);
    c6_ = -(b2_ * b2_ * b2_) + b2_ * b4_ * mpz_class(36) - b6_ * mpz_class(216);
    delta_ = -(b2_ * b2_ * b8_) - b4_ * b4_ * b4_ * mpz_class(8) - b6_ * b6_ * mpz_class(27) + b2_ * b4_ * b6_ * mpz_class(9);
    if (delta_.is_zero()) throw Error(Errc::SingularCurve, "discriminant is zero");
}

Curve Curve::over_q(long a1, long a2, long a3, long a4, long a6) {
    const auto q = NumberField::rationals();
    return Curve(scalar(q, a1), scalar(q, a2), scalar(q, a3), scalar(q, a4), scalar(q, a6));
}

mpz_class Curve::discriminant_norm() const {
    mpq_class n = delta_.norm();
    return abs(n.get_num());
}

bool operator==(const Point& p, const Point& q) {
    if (p.is_infinity() || q.is_infinity()) return p.is_infinity() == q.is_infinity();
    return p.x() == q.x() && p.y() == q.y();
}

bool is_on_curve(const Curve& c, const Point& p) {
    if (p.is_infinity()) return true;
    if (!p.x().field()->same_as(*c.field()) || !p.y().field()->same_as(*c.field())) return false;
    const auto& x = p.x();
    const auto& y = p.y();
    FieldElement lhs = y * y + c.a1() * x * y + c.a3() * y;
    FieldElement rhs = x * x * x + c.a2() * x * x + c.a4() * x + c.a6();
    return lhs == rhs;
}

namespace {

void require_on_curve(const Curve& c, const Point& p) {
    if (!is_on_curve(c, p)) throw Error(Errc::PointNotOnCurve, "point is not on the curve");
}

}  // namespace

Point point_negate(const Curve& c, const Point& p) {
    require_on_curve(c, p);
    if (p.is_infinity()) return p;
    return Point(p.x(), -p.y() - c.a1() * p.x() - c.a3());
}

Point point_add(const Curve& c, const Point& p, const Point& q) {
    require_on_curve(c, p);
    require_on_curve(c, q);
    if (p.is_infinity()) return q;
    if (q.is_infinity()) return p;
    const auto& x1 = p.x();
    const auto& y1 = p.y();
    const auto& x2 = q.x();
    const auto& y2 = q.y();
    FieldElement lambda, nu;
    if (x1 == x2) {
        FieldElement denom = y1 + y2 + c.a1() * x2 + c.a3();
        if (denom.is_zero()) return Point::infinity();
        // Tangent (x1 == x2 and y1 == y2 here, since the other y is -y1 - a1 x1 - a3).
        FieldElement d = y1 * mpz_class(2) + c.a1() * x1 + c.a3();
        lambda = (x1 * x1 * mpz_class(3) + c.a2() * x1 * mpz_class(2) + c.a4() - c.a1() * y1) / d;
        nu = (-(x1 * x1 * x1) + c.a4() * x1 + c.a6() * mpz_class(2) - c.a3() * y1) / d;
    } else {
        FieldElement dx = x2 - x1;
        lambda = (y2 - y1) / dx;
        nu = (y1 * x2 - y2 * x1) / dx;
    }
    FieldElement x3 = lambda * lambda + c.a1() * lambda - c.a2() - x1 - x2;
    FieldElement y3 = -(lambda + c.a1()) * x3 - nu - c.a3();
    return Point(std::move(x3), std::move(y3));
}

Point point_double(const Curve& c, const Point& p) { return point_add(c, p, p); }

Point point_multiply(const Curve& c, const Point& p, long n) {
    if (n < 0) return point_multiply(c, point_negate(c, p), -n);
    Point result = Point::infinity();
    Point base = p;
    while (n) {
        if (n & 1) result = point_add(c, result, base);
        n >>= 1;
        if (n) base = point_double(c, base);
    }
    return result;
}

namespace {

// Factor refinement: a pairwise coprime list whose products of powers give
// back every input.
std::vector<mpz_class> coprime_base(std::vector<mpz_class> xs) {
    std::erase_if(xs, [](const mpz_class& v) { return v <= 1; });
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < xs.size() && !changed; ++i) {
            for (size_t j = i + 1; j < xs.size() && !changed; ++j) {
                mpz_class g;
                mpz_gcd(g.get_mpz_t(), xs[i].get_mpz_t(), xs[j].get_mpz_t());
                if (g == 1) continue;
                mpz_class a = xs[i] / g, b = xs[j] / g;
                xs.erase(xs.begin() + static_cast<long>(j));
                xs.erase(xs.begin() + static_cast<long>(i));
                for (auto* v : {&a, &b, &g})
                    if (*v > 1) xs.push_back(*v);
                changed = true;
            }
        }
    }
    return xs;
}

mpz_class perfect_power_root(const mpz_class& b) {
    if (!mpz_perfect_power_p(b.get_mpz_t())) return b;
    const unsigned long max_k = mpz_sizeinbase(b.get_mpz_t(), 2);
    for (unsigned long k = max_k; k >= 2; --k) {
        mpz_class r;
        if (mpz_root(r.get_mpz_t(), b.get_mpz_t(), k) != 0) return perfect_power_root(r);
    }
    return b;
}

unsigned long valuation(const mpz_class& n, const mpz_class& b) {
    mpz_class rest;
    return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), b.get_mpz_t());
}

}  // namespace

ClearedModel clear_denominators(const Curve& c, const Point& p) {
    if (p.is_infinity()) return {c, p, mpz_class(1)};
    const mpz_class& dx = p.x().denominator();
    const mpz_class& dy = p.y().denominator();
    mpz_class u = 1;
    for (const auto& b0 : coprime_base({dx, dy})) {
        const mpz_class b = perfect_power_root(b0);
        const unsigned long ex = valuation(dx, b), ey = valuation(dy, b);
        const unsigned long e = std::max((ex + 1) / 2, (ey + 2) / 3);
        mpz_class f;
        mpz_pow_ui(f.get_mpz_t(), b.get_mpz_t(), e);
        u *= f;
    }
    if (u == 1) return {c, p, u};
    const mpz_class u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
    Curve scaled(c.a1() * u, c.a2() * u2, c.a3() * u3, c.a4() * u4, c.a6() * u6);
    Point q(p.x() * u2, p.y() * u3);
    return {std::move(scaled), std::move(q), u};
}

}  // namespace edsh

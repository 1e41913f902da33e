#pragma once

#include "edsh/curve.hpp"
#include "edsh/number_field.hpp"

#include <gmpxx.h>

#include <random>
#include <vector>

namespace fx {

using edsh::Curve;
using edsh::FieldElement;
using edsh::FieldPtr;
using edsh::NumberField;
using edsh::Point;
using V = std::vector<mpz_class>;

inline FieldElement el(const FieldPtr& k, V v) {
    v.resize(static_cast<size_t>(k->degree()), 0);
    return FieldElement::from_integers(k, v);
}

inline FieldPtr q() { return NumberField::rationals(); }
inline FieldPtr qi() { return NumberField::create({1, 0, 1}); }
inline FieldPtr qsqrtm2() { return NumberField::create({2, 0, 1}); }
inline FieldPtr qw() { return NumberField::create({1, 1, 1}); }
inline FieldPtr qphi() { return NumberField::create({-1, -1, 1}); }

struct Example {
    Curve curve;
    Point point;
};

// y^2 + y = x^3 - x, (0,0)
inline Example curve37() {
    Curve c = Curve::over_q(0, 0, 1, -1, 0);
    return {c, Point(el(c.field(), {0}), el(c.field(), {0}))};
}

inline Example silver1() {
    auto k = qsqrtm2();
    Curve c(el(k, {0}), el(k, {-1}), el(k, {1}), el(k, {0}), el(k, {0}));
    return {c, Point(el(k, {2, 1}), el(k, {1, 2}))};
}

inline Example silver2() {
    auto k = qi();
    Curve c(el(k, {0}), el(k, {0}), el(k, {4}), el(k, {0, 6}), el(k, {0}));
    return {c, Point(el(k, {0}), el(k, {0}))};
}

// y^2 = x^3 - 16x + 16, (0,4)
inline Example notinmin() {
    Curve c = Curve::over_q(0, 0, 0, -16, 16);
    return {c, Point(el(c.field(), {0}), el(c.field(), {4}))};
}

// y^2 + xy + y = x^3 - x^2 - 48x + 147, (13,33)
inline Example benchmark_point() {
    Curve c = Curve::over_q(1, -1, 1, -48, 147);
    return {c, Point(el(c.field(), {13}), el(c.field(), {33}))};
}

inline mpz_class silnodo_m() {
    mpz_class p("1000000000000000000000000000000"), r("10000000000000000000000000000000000000000");
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    mpz_nextprime(r.get_mpz_t(), r.get_mpz_t());
    return p * r;
}

inline Example silnodo() {
    auto k = q();
    const mpz_class m = silnodo_m();
    Curve c(el(k, {0}), el(k, {0}), el(k, {0}), el(k, {m}), el(k, {m * m}));
    return {c, Point(el(k, {0}), el(k, {m}))};
}

inline Example stillnodo() {
    V f(18, 0);
    f[0] = 996;
    f[1] = 1;
    f[17] = 1;
    auto k = NumberField::create(f);
    V th(3, 0);
    th[0] = 1;
    th[2] = -1728;
    FieldElement t = el(k, th);
    Curve c(el(k, {0}), el(k, {0}), el(k, {0}), t, t * t);
    return {c, Point(el(k, {0}), t)};
}

// 2-torsion: y^2 = x^3 - x, (0,0)
inline Example two_torsion() {
    Curve c = Curve::over_q(0, 0, 0, -1, 0);
    return {c, Point(el(c.field(), {0}), el(c.field(), {0}))};
}

inline FieldElement random_element(const FieldPtr& k, std::mt19937_64& rng, long bound) {
    std::uniform_int_distribution<long> dist(-bound, bound);
    V v(static_cast<size_t>(k->degree()));
    for (auto& c : v) c = dist(rng);
    return FieldElement::from_integers(k, v);
}

// Random integral point on a random integral curve: choose x, y, a1..a4 and
// solve for a6. Retries until the model is nonsingular and 2y+a1x+a3 != 0.
inline Example random_instance(const FieldPtr& k, std::mt19937_64& rng, long bound = 5) {
    for (;;) {
        FieldElement x = random_element(k, rng, bound), y = random_element(k, rng, bound);
        FieldElement a1 = random_element(k, rng, 2), a2 = random_element(k, rng, 2), a3 = random_element(k, rng, 2),
                     a4 = random_element(k, rng, bound);
        FieldElement a6 = y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x;
        try {
            Curve c(a1, a2, a3, a4, a6);
            Point p(x, y);
            const FieldElement two_y = y * mpz_class(2) + a1 * x + a3;
            if (two_y.is_zero()) continue;
            return {c, p};
        } catch (...) {
        }
    }
}

}  // namespace fx

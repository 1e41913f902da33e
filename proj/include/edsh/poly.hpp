#pragma once

// Dense univariate polynomials over Z and Q, coefficients in ascending
// degree order. The zero polynomial is the empty vector.

#include <gmpxx.h>

#include <vector>

namespace edsh::poly {

using ZPoly = std::vector<mpz_class>;
using QPoly = std::vector<mpq_class>;

template <class P>
void trim(P& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

template <class P>
long degree(const P& p) {
    return static_cast<long>(p.size()) - 1;
}

mpz_class content(const ZPoly& p);
ZPoly derivative(const ZPoly& p);

// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b. Requires b != 0.
ZPoly pseudo_remainder(const ZPoly& a, const ZPoly& b);

// Res(a, b) = lc(a)^deg(b) * prod_{a(r)=0} b(r), by the subresultant
// polynomial remainder sequence. Fraction-free; all divisions are exact.
mpz_class resultant(const ZPoly& a, const ZPoly& b);

QPoly to_q(const ZPoly& p);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly mul(const QPoly& a, const QPoly& b);
// Quotient and remainder over Q; b must be nonzero.
void divmod(const QPoly& a, const QPoly& b, QPoly& quo, QPoly& rem);

// Returns s with s*a = g (mod m) where g = gcd(a, m) made monic. The caller
// checks that g == 1 for an inverse.
QPoly inverse_mod(const QPoly& a, const QPoly& m, QPoly& gcd_out);

}  // namespace edsh::poly

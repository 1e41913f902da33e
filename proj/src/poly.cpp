#include "edsh/poly.hpp"

#include <stdexcept>
#include <utility>

namespace edsh::poly {

mpz_class content(const ZPoly& p) {
    mpz_class g = 0;
    for (const auto& c : p) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

ZPoly derivative(const ZPoly& p) {
    ZPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<unsigned long>(i));
    trim(d);
    return d;
}

ZPoly pseudo_remainder(const ZPoly& a, const ZPoly& b) {
    if (b.empty()) throw std::invalid_argument("pseudo_remainder by zero polynomial");
    ZPoly r = a;
    trim(r);
    const long db = degree(b);
    const mpz_class& lb = b.back();
    long steps = degree(r) - db + 1;
    if (steps <= 0) return r;
    while (!r.empty() && degree(r) >= db) {
        const mpz_class lr = r.back();
        const long shift = degree(r) - db;
        for (auto& c : r) c *= lb;
        for (long i = 0; i <= db; ++i) mpz_submul(r[i + shift].get_mpz_t(), lr.get_mpz_t(), b[i].get_mpz_t());
        trim(r);
        --steps;
    }
    // Remaining powers of lc(b) the loop skipped because the degree dropped
    // by more than one in a single step.
    if (steps > 0) {
        mpz_class f;
        mpz_pow_ui(f.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(steps));
        for (auto& c : r) c *= f;
    }
    return r;
}

namespace {

mpz_class pow(const mpz_class& b, long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

void divexact_all(ZPoly& p, const mpz_class& d) {
    if (d == 1) return;
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
}

}  // namespace

mpz_class resultant(const ZPoly& a_in, const ZPoly& b_in) {
    ZPoly A = a_in, B = b_in;
    trim(A);
    trim(B);
    if (A.empty() || B.empty()) return 0;
    if (degree(A) == 0 && degree(B) == 0) return 1;
    if (degree(A) == 0) return pow(A[0], degree(B));
    if (degree(B) == 0) return pow(B[0], degree(A));

    const mpz_class ca = content(A), cb = content(B);
    divexact_all(A, ca);
    divexact_all(B, cb);
    mpz_class g = 1, h = 1;
    int s = 1;
    const mpz_class t = pow(ca, degree(B)) * pow(cb, degree(A));
    if (degree(A) < degree(B)) {
        std::swap(A, B);
        if ((degree(A) & 1) && (degree(B) & 1)) s = -s;
    }

    while (degree(B) > 0) {
        const long delta = degree(A) - degree(B);
        if ((degree(A) & 1) && (degree(B) & 1)) s = -s;
        ZPoly R = pseudo_remainder(A, B);
        if (R.empty()) return 0;
        A = std::move(B);
        B = std::move(R);
        divexact_all(B, g * pow(h, delta));
        g = A.back();
        // h <- h^(1-delta) g^delta; exact for delta >= 1.
        if (delta == 0) {
            // h^1 g^0: unchanged
        } else {
            mpz_class num = pow(g, delta);
            mpz_class den = pow(h, delta - 1);
            mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        }
    }
    // deg B == 0, B != 0.
    const long da = degree(A);
    mpz_class num = pow(B[0], da);
    mpz_class den = pow(h, da - 1);
    mpz_class r;
    mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return s * t * r;
}

QPoly to_q(const ZPoly& p) {
    QPoly q(p.size());
    for (size_t i = 0; i < p.size(); ++i) q[i] = p[i];
    return q;
}

QPoly sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

QPoly mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

void divmod(const QPoly& a, const QPoly& b, QPoly& quo, QPoly& rem) {
    if (b.empty()) throw std::invalid_argument("polynomial division by zero");
    rem = a;
    trim(rem);
    quo.assign(rem.size() >= b.size() ? rem.size() - b.size() + 1 : 0, mpq_class(0));
    const long db = degree(b);
    while (!rem.empty() && degree(rem) >= db) {
        const long shift = degree(rem) - db;
        mpq_class c = rem.back() / b.back();
        quo[static_cast<size_t>(shift)] = c;
        for (long i = 0; i <= db; ++i) rem[static_cast<size_t>(i + shift)] -= c * b[static_cast<size_t>(i)];
        rem.pop_back();
        trim(rem);
    }
}

QPoly inverse_mod(const QPoly& a, const QPoly& m, QPoly& gcd_out) {
    // Invariant: s0*a = r0, s1*a = r1 (mod m).
    QPoly r0 = m, r1 = a, s0, s1 = {mpq_class(1)};
    trim(r0);
    trim(r1);
    while (!r1.empty()) {
        QPoly q, r;
        divmod(r0, r1, q, r);
        QPoly s = sub(s0, mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (!r0.empty()) {
        const mpq_class lc = r0.back();
        for (auto& c : r0) c /= lc;
        for (auto& c : s0) c /= lc;
    }
    gcd_out = r0;
    return s0;
}

}  // namespace edsh::poly

#include "edsh/roots.hpp"

#include "edsh/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace edsh {

namespace {

struct PolyAndDerivative {
    Complex value;
    Complex slope;
};

PolyAndDerivative evaluate_with_derivative(const std::vector<Real>& coeffs, const Complex& z) {
    const mpfr_prec_t prec = z.prec();
    Complex p(prec), dp(prec);
    for (size_t i = coeffs.size(); i-- > 0;) {
        dp = dp * z + p;
        p = p * z;
        p.re += coeffs[i];
    }
    return {p, dp};
}

// Sum of |c_i| |z|^i, the scale against which rounding in Horner is measured.
Real magnitude_sum(const std::vector<Real>& coeffs, const Real& absz) {
    Real s(absz.prec());
    for (size_t i = coeffs.size(); i-- > 0;) {
        s = s * absz + abs(coeffs[i]);
    }
    return s;
}

std::vector<Real> coefficients_at(const poly::ZPoly& f, mpfr_prec_t prec) {
    std::vector<Real> c;
    c.reserve(f.size());
    for (const auto& a : f) c.emplace_back(a, prec);
    return c;
}

// Fujiwara's bound on the root moduli of a monic polynomial.
double root_bound(const poly::ZPoly& f) {
    const long d = poly::degree(f);
    double bound = 0.0;
    for (long i = 0; i < d; ++i) {
        double lc = log_abs(f[static_cast<size_t>(i)]);
        if (!std::isfinite(lc)) continue;
        if (i == 0) lc -= std::log(2.0);
        bound = std::max(bound, std::exp(lc / static_cast<double>(d - i)));
    }
    return 2.0 * bound;
}

void aberth(const poly::ZPoly& f, std::vector<Complex>& z, mpfr_prec_t prec) {
    const auto coeffs = coefficients_at(f, prec);
    const size_t d = z.size();
    const Real one(1L, prec);
    const long max_iterations = 200 + 4 * static_cast<long>(prec) + 20 * static_cast<long>(d);
    std::vector<bool> done(d, false);
    for (long it = 0; it < max_iterations; ++it) {
        bool all_done = true;
        for (size_t k = 0; k < d; ++k) {
            if (done[k]) continue;
            auto [p, dp] = evaluate_with_derivative(coeffs, z[k]);
            if (p.is_zero()) {
                done[k] = true;
                continue;
            }
            Complex ratio = p / dp;
            Complex s(prec);
            for (size_t j = 0; j < d; ++j) {
                if (j == k) continue;
                Complex diff = z[k] - z[j];
                if (diff.is_zero()) continue;
                s += Complex(one, Real(prec)) / diff;
            }
            Complex denom = Complex(one, Real(prec)) - ratio * s;
            Complex w = denom.is_zero() ? ratio : ratio / denom;
            z[k] -= w;
            Real scale = max(one, abs(z[k]));
            if (abs(w) <= ldexp(scale, -static_cast<long>(prec) + 8)) done[k] = true;
            else all_done = false;
        }
        if (all_done) return;
    }
    throw Error(Errc::PrecisionUnreachable, "Aberth iteration did not converge");
}

void newton_refine(const poly::ZPoly& f, std::vector<Complex>& z, mpfr_prec_t prec, int steps) {
    const auto coeffs = coefficients_at(f, prec);
    for (auto& root : z) {
        root = Complex(root, prec);
        for (int s = 0; s < steps; ++s) {
            auto [p, dp] = evaluate_with_derivative(coeffs, root);
            if (p.is_zero() || dp.is_zero()) break;
            root -= p / dp;
        }
    }
}

bool certify(const poly::ZPoly& f, RootEnclosures& out, mpfr_prec_t wp, mpfr_prec_t bits) {
    const auto coeffs = coefficients_at(f, wp);
    const size_t d = out.roots.size();
    const Real limit = ldexp(Real(1L, wp), -static_cast<long>(bits / 2));
    out.radii.clear();
    for (size_t k = 0; k < d; ++k) {
        const Complex& zk = out.roots[k];
        auto pd = evaluate_with_derivative(coeffs, zk);
        // Horner rounding error is at most ~2n u sum|c_i||z|^i.
        Real slack = ldexp(magnitude_sum(coeffs, abs(zk)), -static_cast<long>(wp) + 2) *
                     Real(static_cast<long>(2 * d + 2), wp);
        Real num = abs(pd.value) + slack;
        Real den(1L, wp);
        for (size_t j = 0; j < d; ++j) {
            if (j == k) continue;
            den *= abs(zk - out.roots[j]);
        }
        if (den.is_zero()) return false;
        Real r = Real(static_cast<long>(d), wp) * num / den;
        r *= Real(1.0 + 1e-9, wp);
        if (!(r < limit)) return false;
        out.radii.push_back(r);
    }
    for (size_t i = 0; i < d; ++i)
        for (size_t j = i + 1; j < d; ++j)
            if (!(abs(out.roots[i] - out.roots[j]) > out.radii[i] + out.radii[j])) return false;
    return true;
}

}  // namespace

Complex evaluate(const poly::ZPoly& p, const Complex& z) {
    const mpfr_prec_t prec = z.prec();
    Complex acc(prec);
    for (size_t i = p.size(); i-- > 0;) {
        acc = acc * z;
        acc.re += Real(p[i], prec);
    }
    return acc;
}

RootEnclosures certified_roots(const poly::ZPoly& f, mpfr_prec_t bits) {
    const long d = poly::degree(f);
    RootEnclosures out;
    out.prec = bits;
    if (d < 1) throw Error(Errc::ZeroDegree, "polynomial has no roots");
    if (d == 1) {
        const mpfr_prec_t wp = bits + 64;
        out.roots.emplace_back(Real(mpz_class(-f[0]), wp), Real(wp));
        out.radii.emplace_back(wp);
        return out;
    }

    for (mpfr_prec_t guard = 64; guard <= 256; guard += 64) {
        const mpfr_prec_t wp = bits + guard;
        const mpfr_prec_t start_prec = std::min<mpfr_prec_t>(wp, 160);
        const double radius = std::max(root_bound(f) * 0.5, 0.5);
        const Real r0(radius, start_prec);
        std::vector<Complex> z;
        z.reserve(static_cast<size_t>(d));
        const Real twopi = pi(start_prec) * Real(2L, start_prec);
        for (long k = 0; k < d; ++k) {
            Real angle = twopi * Real(static_cast<long>(k), start_prec) / Real(d, start_prec) + Real(0.4, start_prec);
            z.emplace_back(r0 * cos(angle), r0 * sin(angle));
        }
        aberth(f, z, start_prec);
        for (mpfr_prec_t p = start_prec; p < wp;) {
            p = std::min<mpfr_prec_t>(2 * p, wp);
            newton_refine(f, z, p, 2);
        }
        newton_refine(f, z, wp, 1);

        const Real tol = ldexp(Real(1L, wp), -static_cast<long>(bits / 2));
        std::sort(z.begin(), z.end(), [&](const Complex& a, const Complex& b) {
            if (abs(a.re - b.re) > tol) return a.re < b.re;
            return a.im < b.im;
        });
        out.roots = std::move(z);
        if (certify(f, out, wp, bits)) return out;
    }
    throw Error(Errc::PrecisionUnreachable, "could not certify root enclosures");
}

}  // namespace edsh

#include "edsh/eds.hpp"

#include "edsh/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace edsh {

// ---------------------------------------------------------------------------
// EdsEvaluator

EdsEvaluator::EdsEvaluator(std::array<FieldElement, 5> seeds, bool integral_division)
    : integral_division_(integral_division) {
    if (seeds[2].is_zero()) throw Error(Errc::TorsionPoint2, "u_2 = 0: even terms cannot be formed");
    u2_inverse_ = seeds[2].inverse();
    for (long i = 0; i < 5; ++i) memo_.emplace(i, std::move(seeds[static_cast<size_t>(i)]));
}

FieldElement EdsEvaluator::divide_by_u2(const FieldElement& v) const {
    FieldElement r = v * u2_inverse_;
    if (integral_division_ && v.is_integral() && !r.is_integral())
        throw Error(Errc::InexactDivision, "division by u_2 left the integers");
    return r;
}

const FieldElement& EdsEvaluator::operator()(long n) {
    if (n < 0) throw Error(Errc::InvalidArgument, "negative sequence index");
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    // Node-based map: references survive the insertions made by recursion.
    const FieldElement& a = (*this)((n + 4) / 2);
    const FieldElement& b = (*this)(n / 2);
    const FieldElement& c = (*this)((n - 1) / 2);
    const FieldElement& d = (*this)((n + 1) / 2);
    const FieldElement& e = (*this)((n - 3) / 2);
    const FieldElement& f = (*this)((n + 2) / 2);
    FieldElement rhs = a * b * (c * c) - d * e * (f * f);
    if (n % 2 == 0) rhs = divide_by_u2(rhs);
    return memo_.emplace(n, std::move(rhs)).first->second;
}

long EdsEvaluator::first_zero_index() const {
    long best = 0;
    for (const auto& [index, value] : memo_) {
        if (index >= 1 && value.is_zero() && (best == 0 || index < best)) best = index;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Division polynomial values

std::array<FieldElement, 8> psi_initial_values(const Curve& c, const Point& q) {
    if (q.is_infinity()) throw Error(Errc::InvalidArgument, "division polynomials need an affine point");
    const FieldPtr& k = c.field();
    const FieldElement& x = q.x();
    const FieldElement& y = q.y();
    const auto& b2 = c.b2();
    const auto& b4 = c.b4();
    const auto& b6 = c.b6();
    const auto& b8 = c.b8();

    std::array<FieldElement, 8> psi;
    psi[0] = FieldElement(k, 0L);
    psi[1] = FieldElement(k, 1L);
    psi[2] = y * mpz_class(2) + c.a1() * x + c.a3();
    if (psi[2].is_zero()) throw Error(Errc::TorsionPoint2, "psi_2(Q) = 0: Q is a 2-torsion point");

    const FieldElement x2 = x * x, x3 = x2 * x, x4 = x2 * x2, x5 = x4 * x, x6 = x3 * x3;
    psi[3] = x4 * mpz_class(3) + b2 * x3 + b4 * x2 * mpz_class(3) + b6 * x * mpz_class(3) + b8;
    psi[4] = psi[2] * (x6 * mpz_class(2) + b2 * x5 + b4 * x4 * mpz_class(5) + b6 * x3 * mpz_class(10) +
                       b8 * x2 * mpz_class(10) + (b2 * b8 - b4 * b6) * x + b4 * b8 - b6 * b6);

    const auto cube = [](const FieldElement& v) { return v * v * v; };
    const auto sq = [](const FieldElement& v) { return v * v; };
    psi[5] = psi[4] * cube(psi[2]) - psi[1] * cube(psi[3]);
    FieldElement six = psi[3] * (psi[5] * sq(psi[2]) - psi[1] * sq(psi[4]));
    psi[6] = six / psi[2];
    if (six.is_integral() && !psi[6].is_integral())
        throw Error(Errc::InexactDivision, "psi_6 division by psi_2 left the integers");
    psi[7] = psi[5] * cube(psi[3]) - psi[2] * cube(psi[4]);
    return psi;
}

FieldElement psi_naive(const Curve& c, const Point& q, long n) {
    if (n < 0) throw Error(Errc::InvalidArgument, "negative index");
    const FieldPtr& k = c.field();
    if (n == 0) return FieldElement(k, 0L);
    if (n == 1) return FieldElement(k, 1L);
    auto psi = psi_initial_values(c, q);
    if (n <= 7) return psi[static_cast<size_t>(n)];
    EdsEvaluator eval({psi[0], psi[1], psi[2], psi[3], psi[4]}, q.is_integral());
    return eval(n);
}

// ---------------------------------------------------------------------------
// Exact Shipsey blocks

double EdsBlock::log_norm(long index) const {
    const mpq_class n = at(index).norm();
    double v = log_abs(n.get_num()) - log_abs(n.get_den());
    if (!scale.is_one()) {
        const mpq_class s = scale.norm();
        v -= static_cast<double>(eds_weight(index)) * (log_abs(s.get_num()) - log_abs(s.get_den()));
    }
    return v;
}

EdsBlock block_from_terms(const std::array<FieldElement, 8>& u, bool integral_division) {
    if (u[2].is_zero()) throw Error(Errc::TorsionPoint2, "u_2 = 0");
    EdsBlock b;
    b.center = 4;
    for (size_t i = 0; i < 7; ++i) b.values[i] = u[i + 1];
    b.psi2 = u[2];
    b.scale = FieldElement(u[2].field(), 1L);
    b.integral_division = integral_division;
    return b;
}

EdsBlock psi_initial_block(const Curve& c, const Point& q) {
    return block_from_terms(psi_initial_values(c, q), q.is_integral());
}

EdsBlock shipsey_step(const EdsBlock& b) {
    const auto& [T, U, V, W, X, Y, Z] = b.values;
    const FieldElement inv = b.psi2.inverse();
    const auto divide = [&](const FieldElement& v) {
        FieldElement r = v * inv;
        if (b.integral_division && v.is_integral() && !r.is_integral())
            throw Error(Errc::InexactDivision, "block entry not divisible by psi_2");
        return r;
    };
    const FieldElement U2 = U * U, U3 = U2 * U;
    const FieldElement V2 = V * V, V3 = V2 * V;
    const FieldElement W2 = W * W, W3 = W2 * W;
    const FieldElement X2 = X * X, X3 = X2 * X;
    const FieldElement Y2 = Y * Y;

    EdsBlock next;
    next.center = 2 * b.center;
    next.psi2 = b.psi2;
    next.scale = b.scale;
    next.integral_division = b.integral_division;
    next.values[0] = W * U3 - V3 * T;
    next.values[1] = divide(V * (X * U2 - T * W2));
    next.values[2] = X * V3 - W3 * U;
    next.values[3] = divide(W * (Y * V2 - U * X2));
    next.values[4] = Y * W3 - X3 * V;
    next.values[5] = divide(X * (Z * W2 - V * Y2));
    next.values[6] = Z * X3 - Y2 * Y * W;
    return next;
}

EdsBlock block_rescale(const EdsBlock& b, const FieldElement& lambda) {
    if (lambda.is_zero()) throw Error(Errc::ZeroScalar, "rescale by zero");
    EdsBlock r = b;
    for (size_t i = 0; i < 7; ++i) {
        const long w = eds_weight(b.first_index() + static_cast<long>(i));
        r.values[i] *= lambda.pow(static_cast<unsigned long>(w));
    }
    r.psi2 *= lambda.pow(3);
    r.scale *= lambda;
    return r;
}

mpz_class block_trim(EdsBlock& b) {
    if (!b.psi2.is_integral()) return 1;
    // Candidate: the common content, shrunk until g^(w_j) divides every entry's content.
    struct Entry {
        mpz_class content;
        unsigned long weight;
    };
    std::vector<Entry> entries;
    for (size_t i = 0; i < 7; ++i) {
        const long w = eds_weight(b.first_index() + static_cast<long>(i));
        if (w == 0) continue;
        if (!b.values[i].is_integral()) return 1;
        entries.push_back({b.values[i].content(), static_cast<unsigned long>(w)});
    }
    entries.push_back({b.psi2.content(), 3});
    mpz_class g = 0;
    for (const auto& e : entries) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.content.get_mpz_t());
    bool ok = false;
    while (g > 1 && !ok) {
        ok = true;
        for (const auto& e : entries) {
            if (e.content == 0) continue;
            mpz_class gw;
            mpz_pow_ui(gw.get_mpz_t(), g.get_mpz_t(), e.weight);
            if (mpz_divisible_p(e.content.get_mpz_t(), gw.get_mpz_t())) continue;
            // Any valid g' satisfies g'^w <= |content|, so the integer w-th root
            // bounds it; give up if that does not shrink g.
            mpz_class root, c = abs(e.content);
            mpz_root(root.get_mpz_t(), c.get_mpz_t(), e.weight);
            const mpz_class before = g;
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), root.get_mpz_t());
            if (g == before) g = 1;
            ok = false;
            break;
        }
    }
    if (g <= 1) return 1;
    for (size_t i = 0; i < 7; ++i) {
        const long w = eds_weight(b.first_index() + static_cast<long>(i));
        if (w == 0) continue;
        mpz_class gw;
        mpz_pow_ui(gw.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(w));
        b.values[i] = b.values[i].divexact(gw);
    }
    mpz_class g3 = g * g * g;
    b.psi2 = b.psi2.divexact(g3);
    b.scale = b.scale * FieldElement(b.scale.field(), std::vector<mpq_class>{mpq_class(mpz_class(1), g)});
    return g;
}

EdsBlock psi_pow2_block(const Curve& c, const Point& q, int N, bool trim) {
    if (N < 2) throw Error(Errc::InvalidArgument, "psi_pow2 needs N >= 2");
    EdsBlock b = psi_initial_block(c, q);
    for (int i = 0; i < N - 2; ++i) {
        b = shipsey_step(b);
        if (trim) block_trim(b);
    }
    return b;
}

FieldElement psi_pow2(const Curve& c, const Point& q, int N) {
    EdsBlock b = psi_pow2_block(c, q, N, false);
    return b.values[3];
}

// ---------------------------------------------------------------------------
// Floating blocks

namespace {

// A complex value with a bound on its relative error.
struct Tracked {
    Complex v;
    double rel = 0.0;
};

double unit_roundoff(mpfr_prec_t prec) { return std::ldexp(1.0, 1 - static_cast<int>(prec)); }

double ratio(const Real& num, const Real& den) {
    if (den.is_zero()) return std::numeric_limits<double>::infinity();
    return (num / den).to_double();
}

bool exact_zero(const Tracked& a) { return a.rel == 0.0 && a.v.is_zero(); }

Tracked mul(const Tracked& a, const Tracked& b) {
    Complex v = a.v * b.v;
    if (exact_zero(a) || exact_zero(b)) return {std::move(v), 0.0};
    const double u = unit_roundoff(v.prec());
    return {std::move(v), a.rel + b.rel + 2 * u};
}

Tracked div(const Tracked& a, const Tracked& b) {
    Complex v = a.v / b.v;
    const double u = unit_roundoff(v.prec());
    return {std::move(v), a.rel + b.rel + 4 * u};
}

Tracked add_signed(const Tracked& a, const Tracked& b, bool subtract) {
    Complex v = subtract ? a.v - b.v : a.v + b.v;
    const double u = unit_roundoff(v.prec());
    if (exact_zero(a)) return {std::move(v), b.rel};
    if (exact_zero(b)) return {std::move(v), a.rel};
    const Real mv = abs(v);
    if (mv.is_zero()) return {std::move(v), std::numeric_limits<double>::infinity()};
    double rel = u;
    if (a.rel > 0 || b.rel > 0) {
        const Real scaled = abs(a.v) * Real(a.rel, 53) + abs(b.v) * Real(b.rel, 53);
        rel += ratio(scaled, mv);
    }
    return {std::move(v), rel};
}

Tracked operator*(const Tracked& a, const Tracked& b) { return mul(a, b); }
Tracked operator-(const Tracked& a, const Tracked& b) { return add_signed(a, b, true); }
Tracked operator+(const Tracked& a, const Tracked& b) { return add_signed(a, b, false); }

Tracked scaled(const Tracked& a, long s) {
    if (exact_zero(a)) return a;
    return {a.v * Real(s, a.v.prec()), a.rel + unit_roundoff(a.v.prec())};
}

Tracked embedded(const FieldElement& e, int index, mpfr_prec_t bits) {
    if (e.is_zero()) return {Complex(Real(bits), Real(bits)), 0.0};
    return {e.embed(index, bits), unit_roundoff(bits)};
}

double loss_threshold(mpfr_prec_t bits) { return std::ldexp(1.0, -static_cast<int>(bits / 4)); }

void check_precision(const FloatBlock& b) {
    const double limit = loss_threshold(b.precision_bits);
    for (double r : b.rel_error)
        if (!(r <= limit)) throw Error(Errc::PrecisionLoss, "relative error bound exceeded at center " + std::to_string(b.center));
    if (!(b.psi2_rel_error <= limit)) throw Error(Errc::PrecisionLoss, "psi_2 relative error bound exceeded");
}

}  // namespace

double FloatBlock::log_abs_at(long index) const {
    Real v = log_abs(at(index)) + Real(static_cast<double>(eds_weight(index)), log_scale.prec()) * log_scale;
    return v.to_double();
}

FloatBlock float_initial_block(const Curve& c, const Point& q, int embedding_index, mpfr_prec_t bits) {
    if (q.is_infinity()) throw Error(Errc::InvalidArgument, "float track needs an affine point");
    // Guard bits for the initial polynomial evaluations; the block itself is
    // rounded to `bits`.
    const mpfr_prec_t wp = bits + 32;
    const Tracked x = embedded(q.x(), embedding_index, wp);
    const Tracked y = embedded(q.y(), embedding_index, wp);
    const Tracked a1 = embedded(c.a1(), embedding_index, wp);
    const Tracked a3 = embedded(c.a3(), embedding_index, wp);
    const Tracked b2 = embedded(c.b2(), embedding_index, wp);
    const Tracked b4 = embedded(c.b4(), embedding_index, wp);
    const Tracked b6 = embedded(c.b6(), embedding_index, wp);
    const Tracked b8 = embedded(c.b8(), embedding_index, wp);
    const Tracked one{Complex(Real(1L, wp), Real(wp)), 0.0};

    Tracked psi2 = scaled(y, 2) + a1 * x + a3;
    if (psi2.v.is_zero()) throw Error(Errc::TorsionPoint2, "psi_2(Q) vanishes at this embedding");
    const Tracked x2 = x * x, x3 = x2 * x, x4 = x2 * x2, x5 = x4 * x, x6 = x3 * x3;
    Tracked psi3 = scaled(x4, 3) + b2 * x3 + scaled(b4 * x2, 3) + scaled(b6 * x, 3) + b8;
    Tracked inner = scaled(x6, 2) + b2 * x5 + scaled(b4 * x4, 5) + scaled(b6 * x3, 10) + scaled(b8 * x2, 10) +
                    (b2 * b8 - b4 * b6) * x + (b4 * b8 - b6 * b6);
    Tracked psi4 = psi2 * inner;
    const auto cube = [](const Tracked& v) { return v * v * v; };
    const auto sq = [](const Tracked& v) { return v * v; };
    Tracked psi5 = psi4 * cube(psi2) - cube(psi3);
    Tracked psi6 = div(psi3 * (psi5 * sq(psi2) - sq(psi4)), psi2);
    Tracked psi7 = psi5 * cube(psi3) - psi2 * cube(psi4);

    FloatBlock b;
    b.center = 4;
    b.precision_bits = bits;
    b.log_scale = Real(bits);
    const Tracked* entries[7] = {&one, &psi2, &psi3, &psi4, &psi5, &psi6, &psi7};
    for (size_t i = 0; i < 7; ++i) {
        b.values[i] = Complex(entries[i]->v, bits);
        b.rel_error[i] = entries[i]->rel + unit_roundoff(bits);
    }
    b.psi2 = Complex(psi2.v, bits);
    b.psi2_rel_error = psi2.rel + unit_roundoff(bits);
    renormalize(b);
    check_precision(b);
    return b;
}

FloatBlock shipsey_step(const FloatBlock& b) {
    std::array<Tracked, 7> e;
    for (size_t i = 0; i < 7; ++i) e[i] = {b.values[i], b.rel_error[i]};
    const Tracked p2{b.psi2, b.psi2_rel_error};
    const auto& [T, U, V, W, X, Y, Z] = e;
    const Tracked U2 = U * U, U3 = U2 * U;
    const Tracked V2 = V * V, V3 = V2 * V;
    const Tracked W2 = W * W, W3 = W2 * W;
    const Tracked X2 = X * X, X3 = X2 * X;
    const Tracked Y2 = Y * Y, Y3 = Y2 * Y;

    std::array<Tracked, 7> n;
    n[0] = W * U3 - V3 * T;
    n[1] = div(V * (X * U2 - T * W2), p2);
    n[2] = X * V3 - W3 * U;
    n[3] = div(W * (Y * V2 - U * X2), p2);
    n[4] = Y * W3 - X3 * V;
    n[5] = div(X * (Z * W2 - V * Y2), p2);
    n[6] = Z * X3 - Y3 * W;

    FloatBlock next;
    next.center = 2 * b.center;
    next.precision_bits = b.precision_bits;
    next.log_scale = b.log_scale;
    next.psi2 = b.psi2;
    next.psi2_rel_error = b.psi2_rel_error;
    for (size_t i = 0; i < 7; ++i) {
        next.values[i] = std::move(n[i].v);
        next.rel_error[i] = n[i].rel;
    }
    check_precision(next);
    return next;
}

FloatBlock block_rescale(const FloatBlock& b, const Real& lambda) {
    if (lambda.is_zero()) throw Error(Errc::ZeroScalar, "rescale by zero");
    const mpfr_prec_t prec = b.precision_bits;
    const Real log_lambda = log(abs(Real(lambda, prec + 32)));
    const bool negative = lambda.sign() < 0;
    const double u = unit_roundoff(prec);
    FloatBlock r = b;
    const auto factor = [&](long w, double& rel) {
        Real f = exp(Real(static_cast<double>(w), prec + 32) * log_lambda);
        // exp amplifies the rounding of its argument by |argument|.
        rel += u * (2.0 + std::fabs(static_cast<double>(w) * log_lambda.to_double()));
        if (negative && (w % 2 != 0)) f = -f;
        return Real(f, prec);
    };
    for (size_t i = 0; i < 7; ++i) {
        const long w = eds_weight(b.center - 3 + static_cast<long>(i));
        r.values[i] *= factor(w, r.rel_error[i]);
    }
    r.psi2 *= factor(3, r.psi2_rel_error);
    r.log_scale = Real(b.log_scale - log_lambda, b.log_scale.prec());
    return r;
}

bool renormalize(FloatBlock& b) {
    const long lo = -64, hi = 64;
    long max_exp = std::numeric_limits<long>::min();
    for (const auto& v : b.values) {
        if (v.is_zero()) continue;
        const Real m = abs(v);
        max_exp = std::max(max_exp, m.exponent());
    }
    if (max_exp == std::numeric_limits<long>::min()) return false;
    // |x| in [2^(e-1), 2^e): inside [2^-64, 2^64] iff e-1 >= -64 and e <= 64.
    if (max_exp - 1 >= lo && max_exp <= hi) return false;
    const Complex& mid = b.values[3];
    if (mid.is_zero()) return false;
    const long w = eds_weight(b.center);
    const mpfr_prec_t prec = b.precision_bits + 32;
    Real log_lambda = -log_abs(Complex(mid, prec)) / Real(w, prec);
    b = block_rescale(b, exp(log_lambda));
    return true;
}

double float_track(const Curve& c, const Point& q, int embedding_index, int N, mpfr_prec_t bits) {
    if (N < 2) throw Error(Errc::InvalidArgument, "float track needs N >= 2");
    FloatBlock b = float_initial_block(c, q, embedding_index, bits);
    for (int i = 0; i < N - 2; ++i) {
        b = shipsey_step(b);
        renormalize(b);
    }
    return b.log_abs_at(b.center);
}

// ---------------------------------------------------------------------------
// Abstract sequences

AbstractEds AbstractEds::from_seed(const FieldElement& u2, const FieldElement& u3, const FieldElement& u4) {
    AbstractEds s;
    s.field = u2.field();
    s.terms = {FieldElement(s.field, 0L), FieldElement(s.field, 1L), u2, u3, u4};
    return s;
}

AbstractEds eds_extend(AbstractEds s, long upto) {
    if (s.terms.size() < 5) throw Error(Errc::InvalidArgument, "sequence needs u_0 .. u_4");
    for (long i = 1; i < std::min<long>(5, upto + 1); ++i)
        if (s.terms[static_cast<size_t>(i)].is_zero()) throw Error(Errc::ZeroTerm, "u_" + std::to_string(i) + " = 0", i);
    const FieldElement u2_inverse = s.terms[2].inverse();
    s.terms.reserve(static_cast<size_t>(std::max<long>(upto + 1, 5)));
    for (long n = s.last_index() + 1; n <= upto; ++n) {
        const auto& u = s.terms;
        const auto at = [&](long i) -> const FieldElement& { return u[static_cast<size_t>(i)]; };
        FieldElement v = at((n + 4) / 2) * at(n / 2) * (at((n - 1) / 2) * at((n - 1) / 2)) -
                         at((n + 1) / 2) * at((n - 3) / 2) * (at((n + 2) / 2) * at((n + 2) / 2));
        if (n % 2 == 0) v *= u2_inverse;
        if (v.is_zero()) throw Error(Errc::ZeroTerm, "u_" + std::to_string(n) + " = 0", n);
        s.terms.push_back(std::move(v));
    }
    return s;
}

}  // namespace edsh

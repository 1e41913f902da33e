#include "edsh/height.hpp"

#include "edsh/error.hpp"

#include <cmath>
#include <sstream>

namespace edsh {

std::string method_name(HeightMethod m) {
    switch (m) {
    case HeightMethod::GcdConsecutive: return "gcd-consecutive";
    case HeightMethod::DPower: return "d-power";
    case HeightMethod::TateOracle: return "tate-oracle";
    }
    return "unknown";
}

namespace {

bool is_pow2(long n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(long n) {
    int k = 0;
    while ((1L << k) < n) ++k;
    return k;
}

mpz_class abs_norm(const FieldElement& v) {
    const mpq_class n = v.norm();
    if (n.get_den() != 1) throw Error(Errc::PointNotIntegral, "norm of a non-integral division value");
    return abs(n.get_num());
}

// psi_n and psi_{n+1}; when the blocks were trimmed, the stored values are
// psi_j / G^(j^2-1).
struct PsiPair {
    FieldElement value;
    FieldElement next;
    mpz_class trim = 1;
    bool torsion = false;
};

PsiPair psi_pair(const Curve& c, const Point& q, long n, const HeightOptions& opts) {
    PsiPair out;
    std::array<FieldElement, 8> init;
    try {
        init = psi_initial_values(c, q);
    } catch (const Error& e) {
        if (e.code() != Errc::TorsionPoint2) throw;
        out.torsion = true;
        return out;
    }
    for (long i = 1; i <= 7; ++i) {
        if (init[static_cast<size_t>(i)].is_zero() && i <= n + 1) {
            out.torsion = true;
            return out;
        }
    }
    if (n + 1 <= 7) {
        out.value = init[static_cast<size_t>(n)];
        out.next = init[static_cast<size_t>(n + 1)];
    } else if (opts.fast && is_pow2(n) && n >= 4) {
        EdsBlock b = psi_pow2_block(c, q, log2_exact(n), opts.trim_blocks);
        out.value = b.at(n);
        out.next = b.at(n + 1);
        out.trim = b.scale.denominator();
    } else {
        EdsEvaluator eval({init[0], init[1], init[2], init[3], init[4]}, true);
        out.value = eval(n);
        out.next = eval(n + 1);
        if (eval.first_zero_index() != 0) out.torsion = true;
    }
    if (out.value.is_zero() || out.next.is_zero()) out.torsion = true;
    return out;
}

HeightEstimate torsion_estimate(const Curve& c, long n, HeightMethod method) {
    HeightEstimate h;
    h.torsion = true;
    h.n_used = n;
    h.d = c.degree();
    h.method = method;
    return h;
}

double log_pow(const mpz_class& base, double exponent) { return exponent * log_abs(base); }

}  // namespace

NormSequenceEntry compute_E(const Curve& c, const Point& q, long n, bool fast) {
    if (n < 1) throw Error(Errc::InvalidArgument, "n must be positive");
    if (!q.is_integral()) throw Error(Errc::PointNotIntegral, "point must be integral; clear denominators first");
    if (fast && !is_pow2(n)) throw Error(Errc::NotPowerOfTwo, std::to_string(n) + " is not a power of two");
    FieldElement v;
    if (n == 1) {
        v = FieldElement(c.field(), 1L);
    } else {
        std::array<FieldElement, 8> init;
        try {
            init = psi_initial_values(c, q);
        } catch (const Error& e) {
            if (e.code() == Errc::TorsionPoint2) throw Error(Errc::TorsionPoint, "Q is 2-torsion");
            throw;
        }
        if (n <= 7) v = init[static_cast<size_t>(n)];
        else if (fast) v = psi_pow2_block(c, q, log2_exact(n)).at(n);
        else v = EdsEvaluator({init[0], init[1], init[2], init[3], init[4]}, true)(n);
    }
    if (v.is_zero()) throw Error(Errc::TorsionPoint, "psi_" + std::to_string(n) + "(Q) = 0");
    return {n, abs_norm(v)};
}

mpz_class gcd_trim(const mpz_class& e_n, const mpz_class& e_next) {
    if (e_n <= 0 || e_next <= 0) throw Error(Errc::ZeroInput, "gcd_trim needs positive inputs");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), e_n.get_mpz_t(), e_next.get_mpz_t());
    return e_n / g;
}

DPart dpart_extract(const mpz_class& e, const mpz_class& d) {
    if (e <= 0 || d == 0) throw Error(Errc::ZeroInput, "dpart_extract needs E > 0 and D != 0");
    DPart out{e, mpz_class(1)};
    mpz_class g;
    mpz_class dd = abs(d);
    mpz_gcd(g.get_mpz_t(), out.trimmed.get_mpz_t(), dd.get_mpz_t());
    // Every D-prime left in `trimmed` divides the previous g.
    while (g > 1) {
        mpz_class before = out.trimmed;
        mpz_remove(out.trimmed.get_mpz_t(), out.trimmed.get_mpz_t(), g.get_mpz_t());
        out.removed *= before / out.trimmed;
        mpz_gcd(g.get_mpz_t(), out.trimmed.get_mpz_t(), g.get_mpz_t());
    }
    return out;
}

HeightEstimate canonical_height(const Curve& c, const Point& q, long n, const HeightOptions& opts) {
    if (n < 1) throw Error(Errc::InvalidArgument, "n must be positive");
    if (opts.method == HeightMethod::TateOracle) throw Error(Errc::InvalidArgument, "use tate_height for the Tate oracle");
    if (q.is_infinity()) return torsion_estimate(c, n, opts.method);
    if (!q.is_integral()) throw Error(Errc::PointNotIntegral, "point must be integral; clear denominators first");

    PsiPair psi = psi_pair(c, q, n, opts);
    if (psi.torsion) return torsion_estimate(c, n, opts.method);

    std::array<mpz_class, 2> norms;
    const std::array<const FieldElement*, 2> values = {&psi.value, &psi.next};
    for_each_index(2, opts.exec, [&](long i) { norms[static_cast<size_t>(i)] = abs_norm(*values[static_cast<size_t>(i)]); });
    const mpz_class& a = norms[0];
    const mpz_class& b = norms[1];

    const int d = c.degree();
    const double scale = 1.0 / (static_cast<double>(d) * static_cast<double>(n) * static_cast<double>(n));
    const double wn = static_cast<double>(eds_weight(n));
    const mpz_class D = c.discriminant_norm();

    // With trimming E_n = a G^(d w_n) and E_{n+1} = b G^(d w_{n+1}).
    const double log_e = log_abs(a) + log_pow(psi.trim, d * wn);
    mpz_class shift = 1;
    if (psi.trim != 1) mpz_pow_ui(shift.get_mpz_t(), psi.trim.get_mpz_t(), static_cast<unsigned long>(d * (2 * n + 1)));
    const double log_gcd_trimmed = log_abs(gcd_trim(a, b * shift));
    const DPart dp = dpart_extract(a, D);
    double log_dpower = log_abs(dp.trimmed);
    if (psi.trim != 1) log_dpower += log_pow(dpart_extract(psi.trim, D).trimmed, d * wn);

    HeightEstimate h;
    h.n_used = n;
    h.d = d;
    h.method = opts.method;
    h.arch = scale * log_e;
    const double total_gcd = scale * log_gcd_trimmed;
    const double total_dpower = scale * log_dpower;
    h.total = opts.method == HeightMethod::DPower ? total_dpower : total_gcd;
    h.nonarch = h.total - h.arch;
    if (std::fabs(total_gcd - total_dpower) > opts.disagreement_threshold) {
        std::ostringstream os;
        os << "gcd-consecutive (" << total_gcd << ") and d-power (" << total_dpower << ") estimates differ by more than "
           << opts.disagreement_threshold;
        h.warnings.push_back(os.str());
    }
    return h;
}

HeightEstimate canonical_height_extrapolated(const Curve& c, const Point& q, long n1, long n2, const HeightOptions& opts) {
    HeightEstimate h1 = canonical_height(c, q, n1, opts);
    HeightEstimate h2 = canonical_height(c, q, n2, opts);
    if (h1.torsion || h2.torsion) return h2;
    h2.extrapolated = extrapolate(h1.total, n1, h2.total, n2);
    h2.spread = std::fabs(h1.total - h2.total);
    for (auto& w : h1.warnings) h2.warnings.push_back("n=" + std::to_string(n1) + ": " + w);
    return h2;
}

long pow2_at_least(long n) {
    long p = 4;
    while (p < n) p *= 2;
    return p;
}

double archimedean_height(const Curve& c, const Point& q, int N, mpfr_prec_t bits, Exec exec) {
    if (N < 2) throw Error(Errc::InvalidArgument, "N must be at least 2");
    if (q.is_infinity()) throw Error(Errc::TorsionPoint, "point at infinity");
    const int d = c.degree();
    std::vector<double> logs(static_cast<size_t>(d));
    try {
        for_each_index(d, exec, [&](long j) { logs[static_cast<size_t>(j)] = float_track(c, q, static_cast<int>(j), N, bits); });
    } catch (const Error& e) {
        if (e.code() == Errc::TorsionPoint2) throw Error(Errc::TorsionPoint, "Q is 2-torsion");
        throw;
    }
    double sum = 0.0;
    for (double v : logs) sum += v;
    const double n = std::ldexp(1.0, N);
    return sum / (static_cast<double>(d) * n * n);
}

std::vector<std::pair<mpz_class, double>> local_decompose(const Curve& c, const Point& q, long n,
                                                         const std::vector<mpz_class>& primes, const HeightOptions& opts) {
    const mpz_class D = c.discriminant_norm();
    for (const auto& p : primes) {
        if (p <= 1 || !mpz_divisible_p(D.get_mpz_t(), p.get_mpz_t()))
            throw Error(Errc::PrimeDoesNotDivideD, p.get_str() + " does not divide D = " + D.get_str());
    }
    const mpz_class e = compute_E(c, q, n, opts.fast && is_pow2(n) && n >= 4).E;
    const double scale = 1.0 / (static_cast<double>(c.degree()) * static_cast<double>(n) * static_cast<double>(n));
    std::vector<std::pair<mpz_class, double>> out;
    out.reserve(primes.size());
    for (const auto& p : primes) {
        mpz_class rest;
        const unsigned long v = mpz_remove(rest.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        out.emplace_back(p, -scale * static_cast<double>(v) * log_abs(p));
    }
    return out;
}

HeightEstimate tate_height(const Curve& c, const Point& q, int iterations, mpfr_prec_t bits) {
    if (iterations < 1) throw Error(Errc::InvalidArgument, "iterations must be >= 1");
    HeightEstimate h;
    h.method = HeightMethod::TateOracle;
    h.d = c.degree();
    h.n_used = 1L << iterations;
    h.has_components = false;
    h.error_order = "O(4^-k)";
    Point p = q;
    for (int i = 0; i < iterations && !p.is_infinity(); ++i) p = point_double(c, p);
    if (p.is_infinity()) {
        h.torsion = true;
        return h;
    }
    h.total = 0.5 * std::ldexp(p.x().naive_height(bits), -2 * iterations);
    h.arch = h.total;
    return h;
}

double extrapolate(double h_n1, long n1, double h_n2, long n2) {
    if (n1 == n2) throw Error(Errc::EqualIndices, "extrapolation needs two distinct n");
    const double a = static_cast<double>(n1) * static_cast<double>(n1);
    const double b = static_cast<double>(n2) * static_cast<double>(n2);
    return (b * h_n2 - a * h_n1) / (b - a);
}

}  // namespace edsh

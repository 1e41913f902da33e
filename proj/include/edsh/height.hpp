#pragma once

#include "edsh/curve.hpp"
#include "edsh/eds.hpp"
#include "edsh/exec.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace edsh {

enum class HeightMethod { GcdConsecutive, DPower, TateOracle };

std::string method_name(HeightMethod m);

struct HeightEstimate {
    double total = 0.0;
    double arch = 0.0;
    double nonarch = 0.0;
    // False for the Tate oracle, which only yields the total.
    bool has_components = true;
    std::vector<std::pair<mpz_class, double>> per_prime;
    long n_used = 0;
    int d = 1;
    HeightMethod method = HeightMethod::GcdConsecutive;
    bool torsion = false;
    std::string error_order = "O(1/n^2) empirical";
    std::optional<double> extrapolated;
    std::optional<double> spread;  // |h_n1 - h_n2|
    std::vector<std::string> warnings;
};

// |N(psi_n(Q))| for an integral point.
struct NormSequenceEntry {
    long n = 0;
    mpz_class E;
};

// fast = true uses the doubling blocks and needs n a power of two.
// Throws TorsionPoint, NotPowerOfTwo, PointNotIntegral.
NormSequenceEntry compute_E(const Curve& c, const Point& q, long n, bool fast);

// E_n / gcd(E_n, E_{n+1}). Throws ZeroInput.
mpz_class gcd_trim(const mpz_class& e_n, const mpz_class& e_next);

struct DPart {
    mpz_class trimmed;
    mpz_class removed;
};

// Splits E into its part supported on the primes of D and the rest, using
// only gcds. Throws ZeroInput.
DPart dpart_extract(const mpz_class& e, const mpz_class& d);

struct HeightOptions {
    HeightMethod method = HeightMethod::GcdConsecutive;
    Exec exec = Exec::Parallel;
    // Use doubling blocks when n is a power of two.
    bool fast = true;
    // Divide integer content out of the blocks as they double (power-of-two n only).
    bool trim_blocks = false;
    // Methods disagreeing by more than this add a warning.
    double disagreement_threshold = 1e-3;
};

// (1/(d n^2)) log F_n with F_n from the chosen trimming method; torsion
// (including psi_2(Q) = 0) yields total 0 with the torsion flag.
// Throws PointNotIntegral.
HeightEstimate canonical_height(const Curve& c, const Point& q, long n, const HeightOptions& opts = {});

// Two estimates combined into the O(1/n^2)-eliminating extrapolation; the
// result is the n2 estimate with extrapolated and spread filled in.
HeightEstimate canonical_height_extrapolated(const Curve& c, const Point& q, long n1, long n2, const HeightOptions& opts = {});

// (1/(d n^2)) sum_v log|psi_n(Q)|_v with n = 2^N, entirely in floating point.
// Throws PrecisionLoss, TorsionPoint.
double archimedean_height(const Curve& c, const Point& q, int N, mpfr_prec_t bits = kDefaultPrecision, Exec exec = Exec::Parallel);

// Smallest power of two >= n (and >= 4): the n the floating path uses.
long pow2_at_least(long n);

// -(1/(d n^2)) v_p(E_n) log p for each supplied prime. Throws PrimeDoesNotDivideD.
std::vector<std::pair<mpz_class, double>> local_decompose(const Curve& c, const Point& q, long n,
                                                         const std::vector<mpz_class>& primes,
                                                         const HeightOptions& opts = {});

// (1/2) 4^-k h(x(2^k Q)).
HeightEstimate tate_height(const Curve& c, const Point& q, int iterations, mpfr_prec_t bits = kDefaultPrecision);

// (n2^2 h2 - n1^2 h1) / (n2^2 - n1^2). Throws EqualIndices.
double extrapolate(double h_n1, long n1, double h_n2, long n2);

}  // namespace edsh

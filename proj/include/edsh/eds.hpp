#pragma once

#include "edsh/bigfloat.hpp"
#include "edsh/curve.hpp"
#include "edsh/number_field.hpp"

#include <array>
#include <unordered_map>
#include <vector>

namespace edsh {

// Homogeneity weight: u_j -> lambda^(j^2 - 1) u_j preserves every EDS relation.
constexpr long eds_weight(long j) { return j * j - 1; }

// ---------------------------------------------------------------------------
// Memoized evaluation

// Evaluates u_n from u_0..u_4 top-down with the floor-index relation
//   u_n u_{n / floor((n+1)/2)} = u_{(n+4)/2} u_{n/2} u_{(n-1)/2}^2
//                              - u_{(n+1)/2} u_{(n-3)/2} u_{(n+2)/2}^2,
// all indices floored. Only O(log n) distinct indices are touched.
class EdsEvaluator {
public:
    // seeds = u_0..u_4 with u_2 != 0. With integral_division, every division
    // by u_2 must stay integral (true for division polynomials at integral
    // points); otherwise it is a field division.
    EdsEvaluator(std::array<FieldElement, 5> seeds, bool integral_division);

    const FieldElement& operator()(long n);
    const std::unordered_map<long, FieldElement>& computed() const { return memo_; }
    // Smallest computed index >= 1 with a zero term, or 0 if none.
    long first_zero_index() const;

private:
    FieldElement divide_by_u2(const FieldElement& v) const;

    FieldElement u2_inverse_;
    bool integral_division_;
    std::unordered_map<long, FieldElement> memo_;
};

// psi_0 .. psi_7 at Q. Throws TorsionPoint2 when psi_2(Q) = 0.
std::array<FieldElement, 8> psi_initial_values(const Curve& c, const Point& q);

// psi_n(Q), exact. Throws TorsionPoint2 for 2-torsion Q (n > 2 only needs it
// for even steps, but every n >= 5 touches one).
FieldElement psi_naive(const Curve& c, const Point& q, long n);

// ---------------------------------------------------------------------------
// Shipsey blocks

// Seven consecutive terms u_{k-3} .. u_{k+3}, possibly rescaled: the stored
// values equal scale^(w_j) u_j, and psi2 is the matching scale^3 u_2.
struct EdsBlock {
    long center = 4;
    std::array<FieldElement, 7> values;
    FieldElement psi2;
    FieldElement scale;
    bool integral_division = true;

    long first_index() const { return center - 3; }
    const FieldElement& at(long index) const { return values[static_cast<size_t>(index - center + 3)]; }
    // log |N_{K|Q}(u_index)| with the scale ledger undone.
    double log_norm(long index) const;
};

// Block centered at 4 from psi_1..psi_7.
EdsBlock psi_initial_block(const Curve& c, const Point& q);
// Block centered at 4 from u_1..u_7 of any sequence with u_2 != 0.
EdsBlock block_from_terms(const std::array<FieldElement, 8>& u0_to_u7, bool integral_division);

// Block centered at 2k from one centered at k. Throws InexactDivision if an
// integral block stops dividing exactly by psi2.
EdsBlock shipsey_step(const EdsBlock& b);
// Multiplies entry j by lambda^(j^2-1) and psi2 by lambda^3. Throws ZeroScalar.
EdsBlock block_rescale(const EdsBlock& b, const FieldElement& lambda);
// Divides out an integer g > 1 (entry j by g^(j^2-1), psi2 by g^3) when one
// exists that keeps every entry integral. Returns the g used, 1 if none.
mpz_class block_trim(EdsBlock& b);

// psi_{2^N}(Q) after N-2 steps; equal to psi_naive(c, q, 2^N).
FieldElement psi_pow2(const Curve& c, const Point& q, int N);
// The block centered at 2^N; trim divides out integer content after each step.
EdsBlock psi_pow2_block(const Curve& c, const Point& q, int N, bool trim = false);

// ---------------------------------------------------------------------------
// Floating blocks at one embedding

struct FloatBlock {
    long center = 4;
    std::array<Complex, 7> values;
    Complex psi2;
    // log|u_j| = log|values_j| + w_j * log_scale.
    Real log_scale;
    // Relative error bounds, propagated as running magnitudes.
    std::array<double, 7> rel_error{};
    double psi2_rel_error = 0.0;
    mpfr_prec_t precision_bits = kDefaultPrecision;

    const Complex& at(long index) const { return values[static_cast<size_t>(index - center + 3)]; }
    double log_abs_at(long index) const;
};

// Initial block computed in floating point from the embedded curve and point.
FloatBlock float_initial_block(const Curve& c, const Point& q, int embedding_index, mpfr_prec_t bits);
// Throws PrecisionLoss when cancellation pushes a relative error bound above
// 2^(-bits/4).
FloatBlock shipsey_step(const FloatBlock& b);
FloatBlock block_rescale(const FloatBlock& b, const Real& lambda);
// Rescales so the center entry has modulus ~1 when max|values| leaves
// [2^-64, 2^64]. Returns true if a rescale happened.
bool renormalize(FloatBlock& b);

// log |psi_{2^N}(Q)|_v for embedding v, never leaving floating point.
double float_track(const Curve& c, const Point& q, int embedding_index, int N, mpfr_prec_t bits = kDefaultPrecision);

// ---------------------------------------------------------------------------
// Abstract sequences

struct AbstractEds {
    FieldPtr field;
    std::vector<FieldElement> terms;

    // u_0 = 0, u_1 = 1 and the given u_2, u_3, u_4.
    static AbstractEds from_seed(const FieldElement& u2, const FieldElement& u3, const FieldElement& u4);
    long last_index() const { return static_cast<long>(terms.size()) - 1; }
};

// Extends through index upto. Throws ZeroTerm (with the index) on the first
// vanishing u_n, n >= 1.
AbstractEds eds_extend(AbstractEds s, long upto);

}  // namespace edsh

#include "edsh/lehmer.hpp"

#include "edsh/error.hpp"

#include <algorithm>
#include <cmath>

namespace edsh {

namespace {

struct NormParts {
    mpz_class num;  // |N(a)| for u = a / den with a integral
    double log_den_power = 0.0;  // d log den
};

NormParts norm_parts(const FieldElement& u) {
    FieldElement a = u;
    const mpz_class den = u.denominator();
    if (den != 1) a *= den;
    const mpq_class n = a.norm();
    return {abs(n.get_num()), den == 1 ? 0.0 : a.field()->degree() * log_abs(den)};
}

double log_norm(const FieldElement& u) {
    const NormParts p = norm_parts(u);
    return log_abs(p.num) - p.log_den_power;
}

AbstractEds extended(const AbstractEds& s, long upto) {
    if (s.last_index() >= upto) return s;
    return eds_extend(s, upto);
}

int compare_elements(const FieldElement& a, const FieldElement& b) {
    const auto ca = a.coeffs();
    const auto cb = b.coeffs();
    for (size_t i = 0; i < ca.size() && i < cb.size(); ++i) {
        if (ca[i] < cb[i]) return -1;
        if (cb[i] < ca[i]) return 1;
    }
    return 0;
}

// All integer vectors of length d with entries in [-B, B], in lexicographic order.
std::vector<FieldElement> box_elements(const FieldPtr& k, long bound) {
    const int d = k->degree();
    std::vector<FieldElement> out;
    std::vector<long> digits(static_cast<size_t>(d), -bound);
    while (true) {
        std::vector<mpz_class> c(digits.begin(), digits.end());
        out.push_back(FieldElement::from_integers(k, c));
        int i = d - 1;
        while (i >= 0 && digits[static_cast<size_t>(i)] == bound) digits[static_cast<size_t>(i--)] = -bound;
        if (i < 0) break;
        ++digits[static_cast<size_t>(i)];
    }
    return out;
}

}  // namespace

HeightEstimate growth_estimate(const AbstractEds& s, long n) {
    if (n < 1) throw Error(Errc::InvalidArgument, "n must be positive");
    for (size_t i = 0; i < std::min<size_t>(5, s.terms.size()); ++i)
        if (!s.terms[i].is_integral()) throw Error(Errc::NonIntegralTerms, "seed term u_" + std::to_string(i) + " has a denominator");
    const AbstractEds t = extended(s, n + 1);
    const FieldElement& un = t.terms[static_cast<size_t>(n)];
    const FieldElement& un1 = t.terms[static_cast<size_t>(n + 1)];

    const NormParts a = norm_parts(un);
    const NormParts b = norm_parts(un1);
    const int d = t.field->degree();
    const double scale = 1.0 / (static_cast<double>(d) * static_cast<double>(n) * static_cast<double>(n));

    HeightEstimate h;
    h.n_used = n;
    h.d = d;
    h.method = HeightMethod::GcdConsecutive;
    h.arch = scale * (log_abs(a.num) - a.log_den_power);
    h.total = scale * (log_abs(gcd_trim(a.num, b.num)) - a.log_den_power);
    h.nonarch = h.total - h.arch;
    if (a.log_den_power > 0) h.warnings.push_back("non-integral terms; gcd trim applied to numerator norms");
    return h;
}

bool torsion_filter(const AbstractEds& s, long horizon) {
    try {
        (void)extended(s, horizon);
    } catch (const Error& e) {
        if (e.code() == Errc::ZeroTerm && e.index() && *e.index() > 1) return true;
        throw;
    }
    return false;
}

bool degenerate_growth(const AbstractEds& s, long m) {
    const AbstractEds t = extended(s, 2 * m);
    const double lo = log_norm(t.terms[static_cast<size_t>(m)]);
    const double hi = log_norm(t.terms[static_cast<size_t>(2 * m)]);
    // Quadratic growth gives hi ~ 4 lo; exponential gives ~ 2 lo, polynomial ~ lo.
    if (std::fabs(hi) < 1e-9) return true;
    return std::fabs(hi) < 3.0 * std::fabs(lo);
}

bool candidate_less(const Candidate& a, const Candidate& b) {
    if (a.normalized != b.normalized) return a.normalized < b.normalized;
    if (int c = compare_elements(a.u2, b.u2)) return c < 0;
    if (int c = compare_elements(a.u3, b.u3)) return c < 0;
    return compare_elements(a.u4, b.u4) < 0;
}

SearchResult search(const SearchConfig& cfg, Exec exec) {
    if (!cfg.field) throw Error(Errc::InvalidArgument, "search needs a field");
    if (cfg.coeff_bound < 1) throw Error(Errc::InvalidArgument, "coeff_bound must be >= 1");
    if (cfg.extend_to < 8) throw Error(Errc::InvalidArgument, "extend_to must be >= 8");
    if (cfg.prepass_n < 4 || cfg.prepass_n > cfg.extend_to) throw Error(Errc::InvalidArgument, "prepass_n must lie in [4, extend_to]");

    const std::vector<FieldElement> box = box_elements(cfg.field, cfg.coeff_bound);
    struct Seed {
        const FieldElement* u2;
        const FieldElement* u3;
        const FieldElement* u4;
    };
    std::vector<Seed> seeds;
    for (const auto& u2 : box) {
        if (u2.is_zero()) continue;
        for (const auto& u3 : box)
            for (const auto& u4 : box) seeds.push_back({&u2, &u3, &u4});
    }

    enum class Outcome { Kept, Pruned, Skipped };
    struct Slot {
        Outcome outcome = Outcome::Pruned;
        HeightEstimate estimate;
        std::string reason;
    };
    std::vector<Slot> slots(seeds.size());
    const long m = std::max<long>(2, cfg.prepass_n / 2);

    for_each_index(static_cast<long>(seeds.size()), exec, [&](long i) {
        const Seed& sd = seeds[static_cast<size_t>(i)];
        Slot& slot = slots[static_cast<size_t>(i)];
        const AbstractEds s0 = AbstractEds::from_seed(*sd.u2, *sd.u3, *sd.u4);
        try {
            const AbstractEds pre = eds_extend(s0, cfg.prepass_n + 1);
            if (degenerate_growth(pre, m)) {
                slot.outcome = Outcome::Skipped;
                slot.reason = "degenerate growth";
                return;
            }
            if (growth_estimate(pre, cfg.prepass_n).total > cfg.prune_threshold) {
                slot.outcome = Outcome::Pruned;
                return;
            }
            slot.estimate = growth_estimate(pre, cfg.extend_to);
            slot.outcome = Outcome::Kept;
        } catch (const Error& e) {
            if (e.code() != Errc::ZeroTerm) throw;
            slot.outcome = Outcome::Skipped;
            slot.reason = "u_" + std::to_string(e.index().value_or(0)) + " = 0";
        }
    });

    SearchResult out;
    out.examined = static_cast<long>(seeds.size());
    for (size_t i = 0; i < seeds.size(); ++i) {
        const Seed& sd = seeds[i];
        Slot& slot = slots[i];
        switch (slot.outcome) {
        case Outcome::Kept: {
            Candidate c{*sd.u2, *sd.u3, *sd.u4, std::move(slot.estimate), 0.0, true};
            c.normalized = c.estimate.d * c.estimate.total;
            out.candidates.push_back(std::move(c));
            break;
        }
        case Outcome::Pruned: ++out.pruned; break;
        case Outcome::Skipped: out.skipped.push_back({*sd.u2, *sd.u3, *sd.u4, std::move(slot.reason)}); break;
        }
    }
    std::sort(out.candidates.begin(), out.candidates.end(), candidate_less);
    if (cfg.max_candidates >= 0 && static_cast<long>(out.candidates.size()) > cfg.max_candidates)
        out.candidates.resize(static_cast<size_t>(cfg.max_candidates));
    return out;
}

}  // namespace edsh

#pragma once

#include "edsh/eds.hpp"
#include "edsh/exec.hpp"
#include "edsh/height.hpp"

#include <string>
#include <vector>

namespace edsh {

// (1/(d n^2)) log(E_n / gcd(E_n, E_{n+1})) with E_n = |N(u_n)|. Terms with
// denominators contribute |N(numerator)| / den^d; the gcd acts on the
// numerator norms only. Extends the sequence as needed.
// Throws ZeroTerm, NonIntegralTerms (seed terms with denominators).
HeightEstimate growth_estimate(const AbstractEds& s, long n);

// True (reject) iff some u_m = 0 for 1 < m <= horizon.
bool torsion_filter(const AbstractEds& s, long horizon);

// Sequences whose norms grow sub-quadratically (u_n = n, Lucas-type
// sequences from singular cubics) have near-zero estimates that say nothing
// about points of small height. Compares log E_{2m} with log E_m.
bool degenerate_growth(const AbstractEds& s, long m);

struct SearchConfig {
    FieldPtr field;
    long coeff_bound = 1;
    long extend_to = 512;
    double prune_threshold = 0.05;
    long prepass_n = 32;
    long max_candidates = 20;
};

struct Candidate {
    FieldElement u2, u3, u4;
    HeightEstimate estimate;
    double normalized = 0.0;  // d * estimate.total
    // Always set: a seed is not known to come from a curve and point.
    bool caveat = true;
};

struct SkippedSeed {
    FieldElement u2, u3, u4;
    std::string reason;
};

struct SearchResult {
    std::vector<Candidate> candidates;  // ranked by normalized, then seed
    std::vector<SkippedSeed> skipped;   // zero terms or degenerate growth
    long examined = 0;
    long pruned = 0;
};

// Throws InvalidArgument for a bad config.
SearchResult search(const SearchConfig& cfg, Exec exec = Exec::Parallel);

// Ranking order: normalized ascending, ties by the coefficient vectors of
// (u2, u3, u4) in lexicographic order.
bool candidate_less(const Candidate& a, const Candidate& b);

}  // namespace edsh

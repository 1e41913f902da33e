#pragma once

#include "edsh/curve.hpp"
#include "edsh/height.hpp"
#include "edsh/number_field.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace edsh {

struct JobParameters {
    std::optional<long> n;
    std::optional<int> N;  // n = 2^N
    std::optional<HeightMethod> method;
    std::optional<long> precision_bits;
    std::vector<mpz_class> primes;
    std::optional<int> threads;
    std::optional<std::pair<long, long>> extrapolate;
    std::optional<int> k;  // tate-check doublings
    std::optional<long> coeff_bound;
    std::optional<long> extend_to;
    std::optional<double> prune;
    std::optional<long> max_candidates;
    bool json = false;
};

struct JobSpec {
    FieldPtr field;
    std::optional<Curve> curve;
    std::optional<Point> point;
    std::optional<std::array<FieldElement, 3>> seed;  // u2, u3, u4 for eds-growth
    JobParameters parameters;
    std::vector<std::string> notices;
};

// Parses the JSON job document. Coefficients are strings holding integers or
// "p/q" rationals, ascending in the field generator, zero-padded to the field
// degree. A non-integral point is moved to an integral model with a notice.
// Throws ParseError (malformed document, with position or key path) and
// ValidationError (singular curve, point off the curve, bad field).
JobSpec parse_input(const std::string& document);

// Coefficient vector from "1,-2,3/4"; used for --seed-terms.
FieldElement parse_element(const FieldPtr& field, const std::string& text, const std::string& context);
// "2,37" -> primes. Throws ParseError.
std::vector<mpz_class> parse_integer_list(const std::string& text, const std::string& context);

// Overwrites every parameter the flags set.
void apply_overrides(JobParameters& target, const JobParameters& flags);

// Default precision: EDSH_PRECISION_BITS if set and valid, else kDefaultPrecision.
long default_precision_bits();

inline constexpr const char* kCommands[] = {"height", "arch", "decompose", "tate-check", "eds-growth", "lehmer-search", "psi"};

// Runs one command. Returns the exit status: 0 success (torsion included),
// 1 invalid input, 2 computation failure.
int run_command(const std::string& command, const JobSpec& spec, std::ostream& out, std::ostream& err);

// Rounds to 12 significant digits, the precision used in all output.
double round12(double v);

}  // namespace edsh

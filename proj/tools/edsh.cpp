// edsh: canonical heights from elliptic divisibility sequences.

#include "edsh/error.hpp"
#include "edsh/job.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>

int main(int argc, char** argv) {
    CLI::App app{"Canonical heights of points on elliptic curves over number fields via elliptic divisibility sequences"};
    app.require_subcommand(1);

    std::string input;
    edsh::JobParameters flags;
    std::string method, primes, extrapolate, seed_terms;
    long n = 0;
    int pow2 = -1, threads = 0, k = 0;
    long precision = 0, coeff_bound = 0, extend_to = 0, max_candidates = -1;
    double prune = -1.0;
    bool json = false;

    const std::map<std::string, std::string> about = {
        {"height", "global canonical height with arch/nonarch split"},
        {"arch", "archimedean component by the floating doubling path"},
        {"decompose", "per-prime local contributions (needs --primes)"},
        {"tate-check", "compare with the naive-height doubling limit"},
        {"eds-growth", "growth estimate of an abstract sequence (--seed-terms)"},
        {"lehmer-search", "small-height search over seed boxes"},
        {"psi", "norm of the n-th division value"},
    };
    for (const char* name : edsh::kCommands) {
        CLI::App* sub = app.add_subcommand(name, about.at(name));
        sub->add_option("input", input, "JSON job file ('-' or omitted: stdin)");
        sub->add_option("-n,--n", n, "sequence index n");
        sub->add_option("--pow2", pow2, "use n = 2^N");
        sub->add_option("--method", method, "gcd | dpower");
        sub->add_option("--precision-bits", precision, "working precision for floating paths");
        sub->add_option("--primes", primes, "comma-separated primes dividing D");
        sub->add_option("--extrapolate", extrapolate, "n1,n2: add the 1/n^2-eliminating combination");
        sub->add_option("--threads", threads, "OpenMP threads (results do not depend on it)");
        sub->add_flag("--json", json, "machine-readable output");
        sub->add_option("--k", k, "doublings for tate-check");
        sub->add_option("--seed-terms", seed_terms, "u2;u3;u4, each a comma-separated coefficient list");
        sub->add_option("--coeff-bound", coeff_bound, "search box bound B");
        sub->add_option("--extend-to", extend_to, "search index n");
        sub->add_option("--prune", prune, "pre-pass cutoff in nats");
        sub->add_option("--max-candidates", max_candidates, "length of the ranked list");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        std::string doc;
        if (input.empty() || input == "-") {
            doc.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
        } else {
            std::ifstream f(input);
            if (!f) throw edsh::Error(edsh::Errc::ParseError, "cannot read " + input);
            doc.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
        }
        if (doc.find_first_not_of(" \t\r\n") == std::string::npos) doc = "{}";
        edsh::JobSpec spec = edsh::parse_input(doc);

        if (n > 0) flags.n = n;
        if (pow2 >= 0) flags.N = pow2;
        if (!method.empty()) {
            if (method == "gcd") flags.method = edsh::HeightMethod::GcdConsecutive;
            else if (method == "dpower") flags.method = edsh::HeightMethod::DPower;
            else throw edsh::Error(edsh::Errc::ParseError, "--method: expected gcd or dpower");
        }
        if (precision > 0) flags.precision_bits = precision;
        if (!primes.empty()) flags.primes = edsh::parse_integer_list(primes, "--primes");
        if (!extrapolate.empty()) {
            const auto v = edsh::parse_integer_list(extrapolate, "--extrapolate");
            if (v.size() != 2) throw edsh::Error(edsh::Errc::ParseError, "--extrapolate: expected n1,n2");
            flags.extrapolate = std::make_pair(v[0].get_si(), v[1].get_si());
        }
        if (threads > 0) flags.threads = threads;
        if (k > 0) flags.k = k;
        if (coeff_bound > 0) flags.coeff_bound = coeff_bound;
        if (extend_to > 0) flags.extend_to = extend_to;
        if (prune >= 0) flags.prune = prune;
        if (max_candidates >= 0) flags.max_candidates = max_candidates;
        flags.json = json;
        edsh::apply_overrides(spec.parameters, flags);

        if (!seed_terms.empty()) {
            std::array<edsh::FieldElement, 3> seed;
            size_t start = 0;
            for (int i = 0; i < 3; ++i) {
                const size_t end = seed_terms.find(';', start);
                if ((i < 2 && end == std::string::npos) || (i == 2 && end != std::string::npos))
                    throw edsh::Error(edsh::Errc::ParseError, "--seed-terms: expected u2;u3;u4");
                seed[static_cast<size_t>(i)] = edsh::parse_element(spec.field, seed_terms.substr(start, end - start),
                                                                   "--seed-terms u" + std::to_string(i + 2));
                start = end + 1;
            }
            spec.seed = seed;
        }
        return edsh::run_command(command, spec, std::cout, std::cerr);
    } catch (const edsh::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

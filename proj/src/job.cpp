#include "edsh/job.hpp"

#include "edsh/error.hpp"
#include "edsh/lehmer.hpp"

#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <regex>
#include <sstream>

namespace edsh {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

namespace {

const std::regex kRational(R"(\s*([+-]?\d+)(\s*/\s*(\d+))?\s*)");

mpq_class parse_rational(const std::string& s, const std::string& context) {
    std::smatch m;
    if (!std::regex_match(s, m, kRational)) throw Error(Errc::ParseError, context + ": \"" + s + "\" is not an integer or p/q");
    mpq_class q;
    q.get_num() = mpz_class(m[1].str());
    q.get_den() = m[3].matched ? mpz_class(m[3].str()) : mpz_class(1);
    if (q.get_den() == 0) throw Error(Errc::ParseError, context + ": zero denominator");
    q.canonicalize();
    return q;
}

std::string coefficient_text(const Json& v, const std::string& context) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw Error(Errc::ParseError, context + ": coefficients must be strings (or integers)");
}

std::vector<mpq_class> parse_vector(const Json& v, const std::string& context) {
    if (!v.is_array()) {
        if (v.is_string() || v.is_number_integer()) return {parse_rational(coefficient_text(v, context), context)};
        throw Error(Errc::ParseError, context + ": expected a list of coefficients");
    }
    std::vector<mpq_class> out;
    for (size_t i = 0; i < v.size(); ++i) {
        const std::string ctx = context + "[" + std::to_string(i) + "]";
        out.push_back(parse_rational(coefficient_text(v[i], ctx), ctx));
    }
    return out;
}

FieldElement element_from(const FieldPtr& k, std::vector<mpq_class> c, const std::string& context) {
    if (c.size() > static_cast<size_t>(k->degree()))
        throw Error(Errc::ParseError, context + ": " + std::to_string(c.size()) + " coefficients for a degree-" +
                                          std::to_string(k->degree()) + " field");
    c.resize(static_cast<size_t>(k->degree()), mpq_class(0));
    return FieldElement(k, c);
}

FieldElement element_at(const FieldPtr& k, const Json& obj, const char* key, const std::string& context) {
    if (!obj.contains(key)) return FieldElement(k);
    return element_from(k, parse_vector(obj.at(key), context + "." + key), context + "." + key);
}

const Json& object_at(const Json& doc, const char* key) {
    const Json& v = doc.at(key);
    if (!v.is_object()) throw Error(Errc::ParseError, std::string(key) + ": expected an object");
    return v;
}

template <class T>
std::optional<T> number_at(const Json& obj, const char* key, const std::string& context) {
    if (!obj.contains(key)) return std::nullopt;
    const Json& v = obj.at(key);
    if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw Error(Errc::ParseError, context + "." + key + ": expected an integer");
    } else {
        if (!v.is_number()) throw Error(Errc::ParseError, context + "." + key + ": expected a number");
    }
    return v.get<T>();
}

HeightMethod parse_method(const std::string& s) {
    if (s == "gcd" || s == "gcd-consecutive") return HeightMethod::GcdConsecutive;
    if (s == "dpower" || s == "d-power") return HeightMethod::DPower;
    throw Error(Errc::ParseError, "method: expected gcd or dpower, got \"" + s + "\"");
}

bool is_validation(Errc c) {
    switch (c) {
    case Errc::ParseError:
    case Errc::ValidationError:
    case Errc::InvalidArgument:
    case Errc::NotPowerOfTwo:
    case Errc::PrimeDoesNotDivideD:
    case Errc::EqualIndices:
    case Errc::NonIntegralTerms:
    case Errc::PointNotIntegral:
    case Errc::FieldMismatch:
    case Errc::NotMonic:
    case Errc::NotSquarefree:
    case Errc::ZeroDegree:
    case Errc::SingularCurve:
    case Errc::NonIntegralCoefficients:
    case Errc::PointNotOnCurve:
        return true;
    default:
        return false;
    }
}

// Library errors raised while building the job are input problems.
template <class F>
auto validated(const std::string& context, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == Errc::ParseError) throw;
        throw Error(Errc::ValidationError, context + ": " + e.what());
    }
}

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Json coeff_json(const FieldElement& e) {
    Json a = Json::array();
    for (const auto& c : e.coeffs()) a.push_back(c.get_str());
    return a;
}

struct Context {
    const JobSpec& spec;
    std::ostream& out;
    std::ostream& err;
    bool json;
    long bits;
};

const Curve& need_curve(const JobSpec& s) {
    if (!s.curve || !s.point) throw Error(Errc::InvalidArgument, "this command needs a curve and a point");
    return *s.curve;
}

void emit_height(Context& cx, const HeightEstimate& h, OrderedJson extra = OrderedJson::object(),
                 const std::vector<std::string>& extra_warnings = {}) {
    std::vector<std::string> warnings = cx.spec.notices;
    warnings.insert(warnings.end(), extra_warnings.begin(), extra_warnings.end());
    warnings.insert(warnings.end(), h.warnings.begin(), h.warnings.end());
    if (cx.json) {
        OrderedJson j;
        j["hhat"] = round12(h.total);
        if (h.has_components) {
            j["arch"] = round12(h.arch);
            j["nonarch"] = round12(h.nonarch);
        } else {
            j["arch"] = nullptr;
            j["nonarch"] = nullptr;
        }
        j["n"] = h.n_used;
        j["d"] = h.d;
        j["method"] = method_name(h.method);
        if (!h.per_prime.empty()) {
            OrderedJson pp = OrderedJson::object();
            for (const auto& [p, v] : h.per_prime) pp[p.get_str()] = round12(v);
            j["per_prime"] = pp;
        }
        j["torsion"] = h.torsion;
        j["error_order"] = h.error_order;
        if (h.extrapolated) j["extrapolated"] = round12(*h.extrapolated);
        if (h.spread) j["spread"] = round12(*h.spread);
        for (auto& [k, v] : extra.items()) j[k] = v;
        j["warnings"] = warnings;
        cx.out << j.dump() << "\n";
        return;
    }
    for (const auto& w : warnings) cx.err << "note: " << w << "\n";
    const auto line = [&](const std::string& k, const std::string& v) { cx.out << std::left << std::setw(13) << k << v << "\n"; };
    line("hhat", fmt12(h.total));
    if (h.has_components) {
        line("arch", fmt12(h.arch));
        line("nonarch", fmt12(h.nonarch));
    }
    for (const auto& [p, v] : h.per_prime) line("  p=" + p.get_str(), fmt12(v));
    line("n", std::to_string(h.n_used));
    line("d", std::to_string(h.d));
    line("method", method_name(h.method));
    line("error", h.error_order);
    if (h.extrapolated) line("extrapolated", fmt12(*h.extrapolated));
    if (h.spread) line("spread", fmt12(*h.spread));
    for (auto& [k, v] : extra.items()) line(k, v.is_number_float() ? fmt12(v.get<double>()) : v.dump());
    if (h.torsion) line("torsion", "yes (total 0)");
}

long requested_n(const JobParameters& p, long fallback) {
    if (p.N) {
        if (*p.N < 0 || *p.N > 40) throw Error(Errc::InvalidArgument, "--pow2 must lie in [0, 40]");
        return 1L << *p.N;
    }
    const long n = p.n.value_or(fallback);
    if (n < 1) throw Error(Errc::InvalidArgument, "n must be positive");
    return n;
}

HeightOptions height_options(const JobParameters& p, HeightMethod fallback) {
    HeightOptions o;
    o.method = p.method.value_or(fallback);
    return o;
}

int cmd_height(Context& cx) {
    const Curve& c = need_curve(cx.spec);
    const Point& q = *cx.spec.point;
    const JobParameters& p = cx.spec.parameters;
    const HeightOptions opts = height_options(p, HeightMethod::GcdConsecutive);
    HeightEstimate h = p.extrapolate ? canonical_height_extrapolated(c, q, p.extrapolate->first, p.extrapolate->second, opts)
                                     : canonical_height(c, q, requested_n(p, 100), opts);
    if (!p.primes.empty() && !h.torsion) h.per_prime = local_decompose(c, q, h.n_used, p.primes, opts);
    emit_height(cx, h);
    return 0;
}

int cmd_decompose(Context& cx) {
    const Curve& c = need_curve(cx.spec);
    const Point& q = *cx.spec.point;
    const JobParameters& p = cx.spec.parameters;
    if (p.primes.empty()) throw Error(Errc::InvalidArgument, "decompose needs --primes");
    const HeightOptions opts = height_options(p, HeightMethod::DPower);
    HeightEstimate h = canonical_height(c, q, requested_n(p, 100), opts);
    OrderedJson extra = OrderedJson::object();
    if (!h.torsion) {
        h.per_prime = local_decompose(c, q, h.n_used, p.primes, opts);
        double sum = h.arch;
        for (const auto& pp : h.per_prime) sum += pp.second;
        extra["residual"] = round12(h.total - sum);
    }
    emit_height(cx, h, extra);
    return 0;
}

int cmd_arch(Context& cx) {
    const Curve& c = need_curve(cx.spec);
    const Point& q = *cx.spec.point;
    const JobParameters& p = cx.spec.parameters;
    const long n = pow2_at_least(requested_n(p, 256));
    int N = 0;
    while ((1L << N) < n) ++N;
    HeightEstimate h;
    h.n_used = n;
    h.d = c.degree();
    h.error_order = "O(1/n^2) empirical";
    std::vector<std::string> warnings;
    if (p.n && *p.n != n) warnings.push_back("float path uses n = " + std::to_string(n) + " (next power of two)");
    long bits = cx.bits;
    for (int attempt = 0;; ++attempt) {
        try {
            if (q.is_infinity()) throw Error(Errc::TorsionPoint, "point at infinity");
            h.arch = archimedean_height(c, q, N, bits);
            break;
        } catch (const Error& e) {
            if (e.code() == Errc::TorsionPoint) {
                h.torsion = true;
                break;
            }
            if (e.code() != Errc::PrecisionLoss || attempt == 2) throw;
            warnings.push_back("precision loss at " + std::to_string(bits) + " bits; retrying at " + std::to_string(2 * bits));
            bits *= 2;
        }
    }
    h.has_components = true;
    h.total = h.arch;
    h.nonarch = 0.0;
    if (cx.json) {
        OrderedJson j;
        j["arch"] = round12(h.arch);
        j["n"] = h.n_used;
        j["d"] = h.d;
        j["method"] = "float-archimedean";
        j["precision_bits"] = bits;
        j["torsion"] = h.torsion;
        std::vector<std::string> all = cx.spec.notices;
        all.insert(all.end(), warnings.begin(), warnings.end());
        j["warnings"] = all;
        cx.out << j.dump() << "\n";
        return 0;
    }
    for (const auto& w : cx.spec.notices) cx.err << "note: " << w << "\n";
    for (const auto& w : warnings) cx.err << "note: " << w << "\n";
    cx.out << std::left << std::setw(13) << "arch" << fmt12(h.arch) << "\n"
           << std::setw(13) << "n" << n << "\n"
           << std::setw(13) << "d" << h.d << "\n"
           << std::setw(13) << "bits" << bits << "\n";
    if (h.torsion) cx.out << std::setw(13) << "torsion" << "yes (total 0)\n";
    return 0;
}

int cmd_tate_check(Context& cx) {
    const Curve& c = need_curve(cx.spec);
    const Point& q = *cx.spec.point;
    const JobParameters& p = cx.spec.parameters;
    const int k = p.k.value_or(6);
    const HeightEstimate eds = canonical_height(c, q, requested_n(p, 100), height_options(p, HeightMethod::GcdConsecutive));
    const HeightEstimate tate = tate_height(c, q, k, cx.bits);
    OrderedJson extra = OrderedJson::object();
    extra["tate"] = round12(tate.total);
    extra["k"] = k;
    extra["difference"] = round12(std::fabs(eds.total - tate.total));
    emit_height(cx, eds, extra);
    return 0;
}

int cmd_psi(Context& cx) {
    const Curve& c = need_curve(cx.spec);
    const Point& q = *cx.spec.point;
    const long n = requested_n(cx.spec.parameters, 8);
    const bool fast = n >= 8 && (n & (n - 1)) == 0;
    mpz_class e = 0;
    bool torsion = false;
    try {
        if (q.is_infinity()) throw Error(Errc::TorsionPoint, "point at infinity");
        e = compute_E(c, q, n, fast).E;
    } catch (const Error& ex) {
        if (ex.code() != Errc::TorsionPoint) throw;
        torsion = true;
    }
    if (cx.json) {
        OrderedJson j;
        j["n"] = n;
        j["E"] = e.get_str();
        j["d"] = c.degree();
        j["torsion"] = torsion;
        j["warnings"] = cx.spec.notices;
        cx.out << j.dump() << "\n";
    } else {
        for (const auto& w : cx.spec.notices) cx.err << "note: " << w << "\n";
        cx.out << e.get_str() << "\n";
    }
    return 0;
}

int cmd_eds_growth(Context& cx) {
    if (!cx.spec.seed) throw Error(Errc::InvalidArgument, "eds-growth needs initial terms (--seed-terms or \"seed\")");
    const auto& sd = *cx.spec.seed;
    const long n = requested_n(cx.spec.parameters, 128);
    const AbstractEds s = AbstractEds::from_seed(sd[0], sd[1], sd[2]);
    HeightEstimate h;
    std::vector<std::string> warnings;
    try {
        h = growth_estimate(s, n);
        if (degenerate_growth(s, 16)) warnings.push_back("norms grow sub-quadratically; the sequence looks degenerate");
    } catch (const Error& e) {
        if (e.code() != Errc::ZeroTerm) throw;
        h.torsion = true;
        h.n_used = n;
        h.d = cx.spec.field->degree();
        warnings.push_back(e.what());
    }
    OrderedJson extra = OrderedJson::object();
    extra["normalized"] = round12(h.d * h.total);
    emit_height(cx, h, extra, warnings);
    return 0;
}

int cmd_lehmer(Context& cx) {
    const JobParameters& p = cx.spec.parameters;
    SearchConfig cfg;
    cfg.field = cx.spec.field;
    cfg.coeff_bound = p.coeff_bound.value_or(1);
    cfg.extend_to = p.extend_to.value_or(128);
    cfg.prune_threshold = p.prune.value_or(0.05);
    cfg.max_candidates = p.max_candidates.value_or(20);
    const SearchResult r = search(cfg);
    if (cx.json) {
        OrderedJson j;
        j["d"] = cfg.field->degree();
        j["n"] = cfg.extend_to;
        j["examined"] = r.examined;
        j["pruned"] = r.pruned;
        j["skipped"] = r.skipped.size();
        OrderedJson list = OrderedJson::array();
        for (const auto& c : r.candidates) {
            OrderedJson e;
            e["u2"] = coeff_json(c.u2);
            e["u3"] = coeff_json(c.u3);
            e["u4"] = coeff_json(c.u4);
            e["hhat"] = round12(c.estimate.total);
            e["normalized"] = round12(c.normalized);
            e["caveat"] = c.caveat;
            list.push_back(e);
        }
        j["candidates"] = list;
        j["warnings"] = cx.spec.notices;
        cx.out << j.dump() << "\n";
        return 0;
    }
    cx.out << "# examined " << r.examined << ", pruned " << r.pruned << ", skipped " << r.skipped.size()
           << "; n = " << cfg.extend_to << "; sequences are not checked against a curve\n";
    cx.out << "# rank  d*hhat  hhat  u2  u3  u4\n";
    long rank = 1;
    for (const auto& c : r.candidates) {
        cx.out << rank++ << "  " << fmt12(c.normalized) << "  " << fmt12(c.estimate.total) << "  " << c.u2.to_string() << "  "
               << c.u3.to_string() << "  " << c.u4.to_string() << "\n";
        cx.out.flush();
    }
    return 0;
}

}  // namespace

double round12(double v) {
    if (!std::isfinite(v)) return v;
    const double r = std::strtod(fmt12(v).c_str(), nullptr);
    return r == 0.0 ? 0.0 : r;
}

FieldElement parse_element(const FieldPtr& field, const std::string& text, const std::string& context) {
    std::vector<mpq_class> c;
    std::stringstream ss(text);
    std::string part;
    size_t i = 0;
    while (std::getline(ss, part, ',')) c.push_back(parse_rational(part, context + "[" + std::to_string(i++) + "]"));
    if (c.empty()) throw Error(Errc::ParseError, context + ": empty coefficient list");
    return element_from(field, std::move(c), context);
}

std::vector<mpz_class> parse_integer_list(const std::string& text, const std::string& context) {
    std::vector<mpz_class> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const mpq_class q = parse_rational(part, context);
        if (q.get_den() != 1) throw Error(Errc::ParseError, context + ": \"" + part + "\" is not an integer");
        out.push_back(q.get_num());
    }
    return out;
}

long default_precision_bits() {
    if (const char* env = std::getenv("EDSH_PRECISION_BITS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 32 && v <= 1 << 20) return v;
    }
    return kDefaultPrecision;
}

JobSpec parse_input(const std::string& document) {
    Json doc;
    try {
        doc = Json::parse(document);
    } catch (const Json::parse_error& e) {
        throw Error(Errc::ParseError, e.what());
    }
    if (!doc.is_object()) throw Error(Errc::ParseError, "top level must be an object");

    JobSpec spec;
    try {
        if (doc.contains("field")) {
            const Json& f = object_at(doc, "field");
            if (!f.contains("minpoly")) throw Error(Errc::ParseError, "field.minpoly missing");
            std::vector<mpz_class> coeffs;
            for (const auto& q : parse_vector(f.at("minpoly"), "field.minpoly")) {
                if (q.get_den() != 1) throw Error(Errc::ParseError, "field.minpoly: coefficients must be integers");
                coeffs.push_back(q.get_num());
            }
            spec.field = validated("field", [&] { return NumberField::create(coeffs); });
        } else {
            spec.field = NumberField::rationals();
        }
        const FieldPtr& k = spec.field;

        if (doc.contains("curve")) {
            const Json& c = object_at(doc, "curve");
            for (const auto& [key, v] : c.items()) {
                (void)v;
                if (key != "a1" && key != "a2" && key != "a3" && key != "a4" && key != "a6")
                    throw Error(Errc::ParseError, "curve: unknown key \"" + key + "\"");
            }
            auto a1 = element_at(k, c, "a1", "curve"), a2 = element_at(k, c, "a2", "curve"), a3 = element_at(k, c, "a3", "curve"),
                 a4 = element_at(k, c, "a4", "curve"), a6 = element_at(k, c, "a6", "curve");
            spec.curve = validated("curve", [&] { return Curve(a1, a2, a3, a4, a6); });
        }
        if (doc.contains("point")) {
            if (!spec.curve) throw Error(Errc::ParseError, "point given without a curve");
            const Json& p = object_at(doc, "point");
            if (!p.contains("x") || !p.contains("y")) throw Error(Errc::ParseError, "point needs x and y");
            Point pt(element_at(k, p, "x", "point"), element_at(k, p, "y", "point"));
            if (!is_on_curve(*spec.curve, pt)) throw Error(Errc::ValidationError, "point: not on the curve");
            if (!pt.is_integral()) {
                ClearedModel m = validated("point", [&] { return clear_denominators(*spec.curve, pt); });
                spec.notices.push_back("point is not integral; working on the model scaled by u = " + m.scale.get_str() +
                                       " (heights are unchanged)");
                spec.curve = std::move(m.curve);
                pt = std::move(m.point);
            }
            spec.point = std::move(pt);
        }
        if (doc.contains("seed")) {
            const Json& s = object_at(doc, "seed");
            if (!s.contains("u2")) throw Error(Errc::ParseError, "seed.u2 missing");
            spec.seed = std::array<FieldElement, 3>{element_at(k, s, "u2", "seed"), element_at(k, s, "u3", "seed"),
                                                    element_at(k, s, "u4", "seed")};
        }
        if (doc.contains("parameters")) {
            const Json& p = object_at(doc, "parameters");
            JobParameters& jp = spec.parameters;
            jp.n = number_at<long>(p, "n", "parameters");
            jp.N = number_at<int>(p, "N", "parameters");
            if (p.contains("method")) {
                if (!p.at("method").is_string()) throw Error(Errc::ParseError, "parameters.method: expected a string");
                jp.method = parse_method(p.at("method").get<std::string>());
            }
            jp.precision_bits = number_at<long>(p, "precision_bits", "parameters");
            if (p.contains("primes")) {
                for (const auto& q : parse_vector(p.at("primes"), "parameters.primes")) {
                    if (q.get_den() != 1) throw Error(Errc::ParseError, "parameters.primes: expected integers");
                    jp.primes.push_back(q.get_num());
                }
            }
            jp.threads = number_at<int>(p, "threads", "parameters");
            if (p.contains("extrapolate")) {
                const Json& e = p.at("extrapolate");
                if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
                    throw Error(Errc::ParseError, "parameters.extrapolate: expected [n1, n2]");
                jp.extrapolate = std::make_pair(e[0].get<long>(), e[1].get<long>());
            }
            jp.k = number_at<int>(p, "k", "parameters");
            jp.coeff_bound = number_at<long>(p, "coeff_bound", "parameters");
            jp.extend_to = number_at<long>(p, "extend_to", "parameters");
            jp.prune = number_at<double>(p, "prune", "parameters");
            jp.max_candidates = number_at<long>(p, "max_candidates", "parameters");
            if (p.contains("output")) {
                const Json& o = p.at("output");
                if (!o.is_string() || (o != "json" && o != "text"))
                    throw Error(Errc::ParseError, "parameters.output: expected \"json\" or \"text\"");
                jp.json = o == "json";
            }
        }
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
    return spec;
}

void apply_overrides(JobParameters& t, const JobParameters& f) {
    if (f.n) {
        t.n = f.n;
        t.N.reset();
    }
    if (f.N) t.N = f.N;
    if (f.method) t.method = f.method;
    if (f.precision_bits) t.precision_bits = f.precision_bits;
    if (!f.primes.empty()) t.primes = f.primes;
    if (f.threads) t.threads = f.threads;
    if (f.extrapolate) t.extrapolate = f.extrapolate;
    if (f.k) t.k = f.k;
    if (f.coeff_bound) t.coeff_bound = f.coeff_bound;
    if (f.extend_to) t.extend_to = f.extend_to;
    if (f.prune) t.prune = f.prune;
    if (f.max_candidates) t.max_candidates = f.max_candidates;
    if (f.json) t.json = true;
}

int run_command(const std::string& command, const JobSpec& spec, std::ostream& out, std::ostream& err) {
    try {
        const JobParameters& p = spec.parameters;
        if (p.threads) {
            if (*p.threads < 1) throw Error(Errc::InvalidArgument, "--threads must be >= 1");
            omp_set_num_threads(*p.threads);
        }
        const long bits = p.precision_bits.value_or(default_precision_bits());
        if (bits < 32) throw Error(Errc::InvalidArgument, "precision must be at least 32 bits");
        Context cx{spec, out, err, p.json, bits};
        if (command == "height") return cmd_height(cx);
        if (command == "arch") return cmd_arch(cx);
        if (command == "decompose") return cmd_decompose(cx);
        if (command == "tate-check") return cmd_tate_check(cx);
        if (command == "eds-growth") return cmd_eds_growth(cx);
        if (command == "lehmer-search") return cmd_lehmer(cx);
        if (command == "psi") return cmd_psi(cx);
        throw Error(Errc::InvalidArgument, "unknown command \"" + command + "\"");
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_validation(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace edsh

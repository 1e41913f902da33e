#include "edsh/number_field.hpp"

#include "edsh/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace edsh {

// ---------------------------------------------------------------------------
// NumberField

FieldPtr NumberField::create(std::vector<mpz_class> minpoly) {
    poly::trim(minpoly);
    if (minpoly.size() < 2) throw Error(Errc::ZeroDegree, "minimal polynomial must have degree >= 1");
    if (minpoly.back() != 1) throw Error(Errc::NotMonic, "minimal polynomial must be monic");
    if (minpoly.size() > 2) {
        // gcd(f, f') = 1 exactly when Res(f, f') != 0.
        if (poly::resultant(minpoly, poly::derivative(minpoly)) == 0)
            throw Error(Errc::NotSquarefree, "minimal polynomial has a repeated factor");
    }
    return FieldPtr(new NumberField(std::move(minpoly)));
}

FieldPtr NumberField::rationals() {
    static const FieldPtr q = create({mpz_class(0), mpz_class(1)});
    return q;
}

NumberField::NumberField(poly::ZPoly minpoly) : minpoly_(std::move(minpoly)), degree_(static_cast<int>(minpoly_.size()) - 1) {
    // Newton's identities for f = t^d + c_{d-1} t^{d-1} + ... + c_0:
    // s_k = -(k c_{d-k} + sum_{i=1}^{k-1} c_{d-i} s_{k-i}).
    const int d = degree_;
    power_sums_.assign(static_cast<size_t>(d), mpz_class(0));
    power_sums_[0] = d;
    for (int k = 1; k < d; ++k) {
        mpz_class s = minpoly_[static_cast<size_t>(d - k)] * k;
        for (int i = 1; i < k; ++i) s += minpoly_[static_cast<size_t>(d - i)] * power_sums_[static_cast<size_t>(k - i)];
        power_sums_[static_cast<size_t>(k)] = -s;
    }
}

std::shared_ptr<const RootEnclosures> NumberField::embeddings(mpfr_prec_t bits) const {
    if (bits < 53) throw Error(Errc::InvalidArgument, "embedding precision must be at least 53 bits");
    const mpfr_prec_t key = (bits + 31) / 32 * 32;
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    auto roots = std::make_shared<const RootEnclosures>(certified_roots(minpoly_, key));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto [it, inserted] = cache_.emplace(key, std::move(roots));
    return it->second;
}

// ---------------------------------------------------------------------------
// FieldElement

void reduce_mod_monic(std::vector<mpz_class>& c, const poly::ZPoly& f) {
    const size_t d = f.size() - 1;
    for (size_t k = c.size(); k-- > d;) {
        if (c[k] == 0) continue;
        const mpz_class lead = c[k];
        for (size_t j = 0; j < d; ++j) {
            if (f[j] == 0) continue;
            mpz_submul(c[k - d + j].get_mpz_t(), lead.get_mpz_t(), f[j].get_mpz_t());
        }
        c[k] = 0;
    }
    c.resize(d);
}

FieldElement::FieldElement(FieldPtr field) : field_(std::move(field)) {
    num_.assign(static_cast<size_t>(field_->degree()), mpz_class(0));
}

FieldElement::FieldElement(FieldPtr field, long value) : FieldElement(std::move(field)) { num_[0] = value; }

FieldElement::FieldElement(FieldPtr field, const std::vector<mpq_class>& coeffs) : FieldElement(std::move(field)) {
    std::vector<mpq_class> q = coeffs;
    mpz_class den = 1;
    for (auto& c : q) {
        c.canonicalize();
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
    std::vector<mpz_class> num(q.size());
    for (size_t i = 0; i < q.size(); ++i) num[i] = q[i].get_num() * (den / q[i].get_den());
    if (num.size() > num_.size()) {
        num.resize(std::max(num.size(), num_.size()));
        reduce_mod_monic(num, field_->minpoly());
    }
    num.resize(num_.size());
    num_ = std::move(num);
    den_ = den;
    normalize();
}

FieldElement FieldElement::from_integers(FieldPtr field, std::vector<mpz_class> coeffs) {
    FieldElement e(field);
    if (coeffs.size() > e.num_.size()) reduce_mod_monic(coeffs, field->minpoly());
    coeffs.resize(e.num_.size());
    e.num_ = std::move(coeffs);
    return e;
}

FieldElement FieldElement::constant(FieldPtr field, const mpq_class& value) {
    return FieldElement(std::move(field), std::vector<mpq_class>{value});
}

FieldElement FieldElement::generator(FieldPtr field) {
    std::vector<mpz_class> c = {0, 1};
    return from_integers(std::move(field), std::move(c));
}

std::vector<mpq_class> FieldElement::coeffs() const {
    std::vector<mpq_class> out(num_.size());
    for (size_t i = 0; i < num_.size(); ++i) {
        out[i] = mpq_class(num_[i], den_);
        out[i].canonicalize();
    }
    return out;
}

bool FieldElement::is_zero() const {
    return std::all_of(num_.begin(), num_.end(), [](const mpz_class& c) { return c == 0; });
}

bool FieldElement::is_one() const {
    if (num_.empty() || num_[0] != den_) return false;
    return std::all_of(num_.begin() + 1, num_.end(), [](const mpz_class& c) { return c == 0; });
}

mpz_class FieldElement::content() const { return poly::content(num_); }

size_t FieldElement::max_coeff_bits() const {
    size_t bits = mpz_sizeinbase(den_.get_mpz_t(), 2);
    for (const auto& c : num_) bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
    return bits;
}

void FieldElement::normalize() {
    if (den_ == 1) return;
    mpz_class g = den_;
    for (const auto& c : num_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) return;
    }
    if (is_zero()) {
        den_ = 1;
        return;
    }
    for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
}

void FieldElement::check_field(const FieldElement& o) const {
    if (!field_ || !o.field_ || !field_->same_as(*o.field_))
        throw Error(Errc::FieldMismatch, "operands belong to different number fields");
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    check_field(o);
    if (den_ == o.den_) {
        for (size_t i = 0; i < num_.size(); ++i) num_[i] += o.num_[i];
    } else {
        for (size_t i = 0; i < num_.size(); ++i) {
            num_[i] *= o.den_;
            mpz_addmul(num_[i].get_mpz_t(), o.num_[i].get_mpz_t(), den_.get_mpz_t());
        }
        den_ *= o.den_;
    }
    normalize();
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
    check_field(o);
    if (den_ == o.den_) {
        for (size_t i = 0; i < num_.size(); ++i) num_[i] -= o.num_[i];
    } else {
        for (size_t i = 0; i < num_.size(); ++i) {
            num_[i] *= o.den_;
            mpz_submul(num_[i].get_mpz_t(), o.num_[i].get_mpz_t(), den_.get_mpz_t());
        }
        den_ *= o.den_;
    }
    normalize();
    return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
    check_field(o);
    const size_t d = num_.size();
    if (d == 1) {
        num_[0] *= o.num_[0];
    } else {
        std::vector<mpz_class> prod(2 * d - 1);
        for (size_t i = 0; i < d; ++i) {
            if (num_[i] == 0) continue;
            for (size_t j = 0; j < d; ++j) {
                if (o.num_[j] == 0) continue;
                mpz_addmul(prod[i + j].get_mpz_t(), num_[i].get_mpz_t(), o.num_[j].get_mpz_t());
            }
        }
        reduce_mod_monic(prod, field_->minpoly());
        num_ = std::move(prod);
    }
    den_ *= o.den_;
    normalize();
    return *this;
}

FieldElement& FieldElement::operator*=(const mpz_class& s) {
    for (auto& c : num_) c *= s;
    normalize();
    return *this;
}

FieldElement FieldElement::operator-() const {
    FieldElement r = *this;
    for (auto& c : r.num_) c = -c;
    return r;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
    a.check_field(b);
    return a.den_ == b.den_ && a.num_ == b.num_;
}

FieldElement FieldElement::pow(unsigned long e) const {
    FieldElement result(field_, 1L), base = *this;
    while (e) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero");
    if (num_.size() == 1) return constant(field_, mpq_class(den_, num_[0]));
    poly::QPoly a(num_.size());
    for (size_t i = 0; i < num_.size(); ++i) a[i] = num_[i];
    poly::trim(a);
    poly::QPoly g;
    poly::QPoly s = poly::inverse_mod(a, poly::to_q(field_->minpoly()), g);
    if (g.size() != 1) throw Error(Errc::DivisionByZero, "element is a zero divisor (minimal polynomial is reducible)");
    // (num/den)^{-1} = den * num^{-1}.
    for (auto& c : s) c *= den_;
    return FieldElement(field_, s);
}

FieldElement FieldElement::divexact(const mpz_class& s) const {
    if (s == 0) throw Error(Errc::DivisionByZero, "division by zero integer");
    FieldElement r = *this;
    if (!is_integral()) {
        r.den_ *= abs(s);
        if (s < 0)
            for (auto& c : r.num_) c = -c;
        r.normalize();
        return r;
    }
    for (auto& c : r.num_) {
        if (!mpz_divisible_p(c.get_mpz_t(), s.get_mpz_t()))
            throw Error(Errc::InexactDivision, "integral element not divisible by " + s.get_str());
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), s.get_mpz_t());
    }
    return r;
}

mpq_class FieldElement::trace() const {
    mpz_class t = 0;
    const auto& s = field_->power_sums();
    for (size_t i = 0; i < num_.size(); ++i) mpz_addmul(t.get_mpz_t(), num_[i].get_mpz_t(), s[i].get_mpz_t());
    mpq_class r(t, den_);
    r.canonicalize();
    return r;
}

mpq_class FieldElement::norm() const {
    const int d = degree();
    mpz_class n;
    if (d == 1) {
        n = num_[0];
    } else {
        poly::ZPoly a = num_;
        poly::trim(a);
        n = poly::resultant(field_->minpoly(), a);
    }
    mpz_class dd;
    mpz_pow_ui(dd.get_mpz_t(), den_.get_mpz_t(), static_cast<unsigned long>(d));
    mpq_class r(n, dd);
    r.canonicalize();
    return r;
}

poly::QPoly FieldElement::charpoly() const {
    // Power sums p_k = Tr(a^k) and Newton's identities give the elementary
    // symmetric functions e_k of the conjugates; the result is
    // sum_k (-1)^k e_k X^{d-k}, i.e. Res_t(f(t), X - a(t)) for monic f.
    const int d = degree();
    std::vector<mpq_class> p(static_cast<size_t>(d) + 1), e(static_cast<size_t>(d) + 1);
    FieldElement power = *this;
    for (int k = 1; k <= d; ++k) {
        p[static_cast<size_t>(k)] = power.trace();
        if (k < d) power *= *this;
    }
    e[0] = 1;
    for (int k = 1; k <= d; ++k) {
        mpq_class acc = 0;
        for (int i = 1; i <= k; ++i) {
            mpq_class term = e[static_cast<size_t>(k - i)] * p[static_cast<size_t>(i)];
            if (i % 2 == 1) acc += term;
            else acc -= term;
        }
        e[static_cast<size_t>(k)] = acc / k;
    }
    poly::QPoly out(static_cast<size_t>(d) + 1);
    for (int k = 0; k <= d; ++k) out[static_cast<size_t>(d - k)] = (k % 2 == 0) ? e[static_cast<size_t>(k)] : mpq_class(-e[static_cast<size_t>(k)]);
    return out;
}

Complex FieldElement::embed(int index, mpfr_prec_t bits) const {
    const int d = degree();
    if (index < 0 || index >= d) throw Error(Errc::IndexOutOfRange, "embedding index " + std::to_string(index) + " out of range");
    const mpfr_prec_t wp = bits + static_cast<mpfr_prec_t>(max_coeff_bits()) + 32;
    const auto roots = field_->embeddings(wp);
    const Complex alpha(roots->roots[static_cast<size_t>(index)], wp);
    Complex acc(wp);
    for (size_t i = num_.size(); i-- > 0;) {
        acc = acc * alpha;
        acc.re += Real(num_[i], wp);
    }
    const Real den(den_, wp);
    return Complex(Real(acc.re / den, bits), Real(acc.im / den, bits));
}

double FieldElement::naive_height(mpfr_prec_t bits) const {
    if (is_zero()) return 0.0;
    // M(g) for the primitive integral multiple g of the characteristic
    // polynomial is lc(g) * prod max(1, |conjugate|); the conjugates are the
    // images under the d embeddings. charpoly = (minpoly of a)^(d/deg) so
    // log M(g) / d is the height.
    const auto cp = charpoly();
    mpz_class lcm_den = 1;
    for (const auto& c : cp) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());
    mpz_class cont = 0;
    for (const auto& c : cp) {
        mpz_class v = c.get_num() * (lcm_den / c.get_den());
        mpz_gcd(cont.get_mpz_t(), cont.get_mpz_t(), v.get_mpz_t());
    }
    const mpz_class lead = lcm_den / cont;
    double sum = log_abs(lead);
    const int d = degree();
    for (int j = 0; j < d; ++j) {
        const Real la = log_abs(embed(j, bits));
        if (la.sign() > 0) sum += la.to_double();
    }
    return sum / d;
}

std::string FieldElement::to_string() const {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < num_.size(); ++i) {
        if (i) os << ", ";
        mpq_class c(num_[i], den_);
        c.canonicalize();
        os << c.get_str();
    }
    os << ']';
    return os.str();
}

}  // namespace edsh

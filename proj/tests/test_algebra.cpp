#include "fixtures.hpp"

#include "edsh/error.hpp"
#include "edsh/poly.hpp"
#include "edsh/roots.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace edsh;
using fx::el;

namespace {

// Determinant of the Sylvester matrix by Bareiss elimination; independent of
// the subresultant code under test.
mpz_class sylvester_resultant(const poly::ZPoly& a, const poly::ZPoly& b) {
    const long m = poly::degree(a), n = poly::degree(b);
    const long size = m + n;
    if (size == 0) return 1;
    std::vector<std::vector<mpz_class>> s(static_cast<size_t>(size), std::vector<mpz_class>(static_cast<size_t>(size), 0));
    for (long r = 0; r < n; ++r)
        for (long i = 0; i <= m; ++i) s[r][r + i] = a[static_cast<size_t>(m - i)];
    for (long r = 0; r < m; ++r)
        for (long i = 0; i <= n; ++i) s[n + r][r + i] = b[static_cast<size_t>(n - i)];
    mpz_class prev = 1;
    int sign = 1;
    for (long k = 0; k < size - 1; ++k) {
        if (s[k][k] == 0) {
            long r = k + 1;
            while (r < size && s[r][k] == 0) ++r;
            if (r == size) return 0;
            std::swap(s[k], s[r]);
            sign = -sign;
        }
        for (long i = k + 1; i < size; ++i)
            for (long j = k + 1; j < size; ++j) s[i][j] = (s[i][j] * s[k][k] - s[i][k] * s[k][j]) / prev;
        prev = s[k][k];
    }
    return sign * s[size - 1][size - 1];
}

poly::ZPoly random_poly(std::mt19937_64& rng, long deg, long bound) {
    std::uniform_int_distribution<long> d(-bound, bound);
    poly::ZPoly p(static_cast<size_t>(deg + 1));
    for (auto& c : p) c = d(rng);
    if (p.back() == 0) p.back() = 1;
    return p;
}

}  // namespace

TEST_CASE("resultant matches the Sylvester determinant") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const long da = 1 + trial % 6, db = 1 + (trial / 6) % 5;
        const auto a = random_poly(rng, da, 20), b = random_poly(rng, db, 20);
        CHECK(poly::resultant(a, b) == sylvester_resultant(a, b));
    }
    // common root gives zero
    CHECK(poly::resultant({-1, 0, 1}, {-1, 1}) == 0);
}

TEST_CASE("polynomial helpers") {
    CHECK(poly::content({6, -4, 10}) == 2);
    CHECK(poly::derivative({5, 3, 0, 2}) == poly::ZPoly{3, 0, 6});
    poly::QPoly quo, rem;
    poly::divmod(poly::to_q({-1, 0, 1}), poly::to_q({-1, 1}), quo, rem);
    CHECK(quo == poly::QPoly{1, 1});
    CHECK(rem.empty());
    poly::QPoly g;
    const poly::QPoly inv = poly::inverse_mod(poly::to_q({0, 1}), poly::to_q({-1, -1, 1}), g);
    CHECK(inv == poly::QPoly{-1, 1});  // t^-1 = t - 1 mod t^2 - t - 1
}

TEST_CASE("field creation") {
    CHECK(NumberField::create({0, 1})->degree() == 1);
    CHECK(NumberField::create({2, 0, 1})->degree() == 2);
    CHECK(fx::stillnodo().curve.degree() == 17);
    auto code = [](std::vector<mpz_class> f) {
        try {
            NumberField::create(f);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::InvalidArgument;
    };
    CHECK(code({1, 0, 2}) == Errc::NotMonic);
    CHECK(code({1, 2, 1}) == Errc::NotSquarefree);
    CHECK(code({5}) == Errc::ZeroDegree);
}

TEST_CASE("field arithmetic") {
    auto ki = fx::qi();
    auto k2 = fx::qsqrtm2();
    auto kp = fx::qphi();
    const FieldElement i = FieldElement::generator(ki);
    CHECK(i * i == el(ki, {-1}));
    CHECK((el(k2, {1, 1}) * el(k2, {1, -1})) == el(k2, {3}));
    const FieldElement a = el(k2, {4, -7});
    CHECK(a + FieldElement(k2) == a);
    CHECK(i.inverse() == -i);
    CHECK(FieldElement::generator(kp).inverse() == el(kp, {-1, 1}));
    CHECK(el(ki, {1}).inverse() == el(ki, {1}));
    CHECK_THROWS_AS(FieldElement(ki).inverse(), Error);
    CHECK_THROWS_AS(el(ki, {1}) + el(k2, {1}), Error);
    const FieldElement half = FieldElement(k2, std::vector<mpq_class>{mpq_class(1, 2), 0});
    CHECK(!half.is_integral());
    CHECK((half * mpz_class(2)).is_one());
    CHECK(el(k2, {6, 4}).divexact(2) == el(k2, {3, 2}));
    CHECK_THROWS_AS(el(k2, {6, 3}).divexact(2), Error);
}

TEST_CASE("norms") {
    CHECK(el(fx::qi(), {1}).norm() == 1);
    CHECK(el(fx::qsqrtm2(), {2, 1}).norm() == 6);
    CHECK(el(fx::qi(), {0, 6}).norm() == 36);
    CHECK(FieldElement(fx::qsqrtm2()).norm() == 0);
    std::mt19937_64 rng(11);
    for (auto k : {fx::qi(), fx::qsqrtm2(), fx::qw(), NumberField::create({3, -1, 0, 1})}) {
        const auto emb = k->embeddings(128);
        for (int t = 0; t < 10; ++t) {
            const FieldElement a = fx::random_element(k, rng, 50), b = fx::random_element(k, rng, 50);
            CHECK((a * b).norm() == a.norm() * b.norm());
            if (a.is_zero()) continue;
            // product of embeddings oracle
            Complex prod(Real(1L, 128), Real(128));
            for (int j = 0; j < k->degree(); ++j) prod = prod * a.embed(j, 128);
            const double rel = std::fabs(abs(prod).to_double() - std::fabs(a.norm().get_d())) / std::fabs(a.norm().get_d());
            CHECK(rel < 1e-25);
        }
    }
}

TEST_CASE("characteristic polynomial") {
    auto k2 = fx::qsqrtm2();
    CHECK(FieldElement::generator(k2).charpoly() == poly::QPoly{2, 0, 1});
    CHECK(el(k2, {2, 1}).charpoly() == poly::QPoly{6, -4, 1});
    CHECK(el(fx::qi(), {3}).charpoly() == poly::QPoly{9, -6, 1});
    std::mt19937_64 rng(3);
    auto k3 = NumberField::create({3, -1, 0, 1});
    for (int t = 0; t < 10; ++t) {
        const FieldElement a = fx::random_element(k3, rng, 9);
        const poly::QPoly cp = a.charpoly();
        FieldElement acc(k3), power = el(k3, {1});
        for (const auto& c : cp) {
            acc += power * FieldElement::constant(k3, c);
            power *= a;
        }
        CHECK(acc.is_zero());
    }
}

TEST_CASE("embeddings") {
    const auto ei = fx::qi()->embeddings(64);
    REQUIRE(ei->roots.size() == 2);
    CHECK(std::fabs(ei->roots[0].re.to_double()) < 1e-15);
    CHECK(std::fabs(std::fabs(ei->roots[0].im.to_double()) - 1.0) < 1e-15);
    CHECK(ei->roots[0].im.to_double() * ei->roots[1].im.to_double() < 0);
    const auto ep = fx::qphi()->embeddings(128);
    CHECK(ep->roots[0].re.to_double() == doctest::Approx(-0.6180339887498949));
    CHECK(ep->roots[1].re.to_double() == doctest::Approx(1.618033988749895));
    const auto e2 = fx::qsqrtm2()->embeddings(128);
    CHECK(std::fabs(e2->roots[1].im.to_double()) == doctest::Approx(std::sqrt(2.0)));
    for (const auto& r : e2->radii) CHECK(r.to_double() < std::ldexp(1.0, -64));

    auto k = NumberField::create({996, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1});
    const auto e = k->embeddings(128);
    Complex sum(Real(128), Real(128)), prod(Real(1L, 128), Real(128));
    for (const auto& r : e->roots) {
        sum = sum + r;
        prod = prod * r;
    }
    CHECK(abs(sum).to_double() < 1e-20);
    CHECK(prod.re.to_double() == doctest::Approx(-996.0).epsilon(1e-15));  // (-1)^17 * 996
    for (size_t i = 1; i < e->roots.size(); ++i) CHECK(e->roots[i - 1].re <= e->roots[i].re);
}

TEST_CASE("embedding of elements") {
    auto k2 = fx::qsqrtm2();
    CHECK(el(k2, {5}).embed(0).re.to_double() == 5.0);
    const Complex t = FieldElement::generator(fx::qi()).embed(0);
    CHECK(std::fabs(std::fabs(t.im.to_double()) - 1) < 1e-30);
    const Complex z = el(k2, {2, 1}).embed(1);
    CHECK(z.re.to_double() == doctest::Approx(2.0));
    CHECK(std::fabs(z.im.to_double()) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(el(k2, {1}).embed(2), Error);
}

TEST_CASE("naive height") {
    auto kq = fx::q();
    CHECK(FieldElement(kq).naive_height() == 0.0);
    CHECK(el(kq, {2}).naive_height() == doctest::Approx(std::log(2.0)));
    CHECK(FieldElement(kq, std::vector<mpq_class>{mpq_class(3, 4)}).naive_height() == doctest::Approx(std::log(4.0)));
    CHECK(FieldElement::generator(fx::qphi()).naive_height() == doctest::Approx(0.5 * std::log((1 + std::sqrt(5.0)) / 2)));
    CHECK(std::fabs(FieldElement::generator(fx::qi()).naive_height()) < 1e-12);
    std::mt19937_64 rng(5);
    for (auto k : {fx::qi(), fx::qsqrtm2(), NumberField::create({3, -1, 0, 1})}) {
        for (int t = 0; t < 8; ++t) {
            const FieldElement a = fx::random_element(k, rng, 30);
            if (a.is_zero()) continue;
            CHECK(std::fabs(a.naive_height(128) - a.inverse().naive_height(128)) < 1e-10);
        }
    }
}

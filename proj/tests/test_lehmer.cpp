#include "fixtures.hpp"

#include "edsh/error.hpp"
#include "edsh/lehmer.hpp"

#include <doctest.h>

#include <cmath>

using namespace edsh;
using fx::el;

namespace {

AbstractEds seed(const FieldPtr& k, fx::V u2, fx::V u3, fx::V u4) {
    return AbstractEds::from_seed(el(k, std::move(u2)), el(k, std::move(u3)), el(k, std::move(u4)));
}

bool contains_seed(const SearchResult& r, const FieldElement& u2, const FieldElement& u3, const FieldElement& u4, double* normalized) {
    for (const auto& c : r.candidates)
        if (c.u2 == u2 && c.u3 == u3 && c.u4 == u4) {
            *normalized = c.normalized;
            return true;
        }
    return false;
}

}  // namespace

TEST_CASE("growth estimates for the small-height examples") {
    auto kw = fx::qw();
    const HeightEstimate a = growth_estimate(seed(kw, {1, 1}, {1, 1}, {1, 1}), 512);
    CHECK(std::fabs(a.total - 0.01032) < 5e-5);
    CHECK(a.d == 2);
    auto kp = fx::qphi();
    const HeightEstimate b = growth_estimate(seed(kp, {1, -1}, {-2, 1}, {5, -3}), 512);
    CHECK(std::fabs(b.total - 0.00971) < 5e-5);
}

TEST_CASE("growth estimate of a curve sequence matches the point's height") {
    auto kq = fx::q();
    const HeightEstimate g = growth_estimate(seed(kq, {1}, {-1}, {1}), 128);
    const auto e = fx::curve37();
    CHECK(std::fabs(g.total - canonical_height(e.curve, e.point, 128).total) < 2e-3);
    CHECK(std::fabs(g.total - tate_height(e.curve, e.point, 10).total) < 2e-3);
}

TEST_CASE("growth estimate is invariant under the unit rescale") {
    // lambda = -1: u_n -> (-1)^(n^2-1) u_n flips u_2 and u_4
    auto kp = fx::qphi();
    const HeightEstimate a = growth_estimate(seed(kp, {1, -1}, {-2, 1}, {5, -3}), 64);
    const HeightEstimate b = growth_estimate(seed(kp, {-1, 1}, {-2, 1}, {-5, 3}), 64);
    CHECK(a.total == b.total);
    CHECK(a.arch == b.arch);
    // the golden ratio is a unit of norm -1
    const FieldElement u = FieldElement::generator(kp);
    const AbstractEds s = seed(kp, {1, -1}, {-2, 1}, {5, -3});
    const AbstractEds t = AbstractEds::from_seed(s.terms[2] * u.pow(3), s.terms[3] * u.pow(8), s.terms[4] * u.pow(15));
    const HeightEstimate c = growth_estimate(t, 64);
    CHECK(c.total == doctest::Approx(a.total).epsilon(1e-12));
    CHECK(c.arch == doctest::Approx(a.arch).epsilon(1e-12));
}

TEST_CASE("growth estimate errors") {
    auto kq = fx::q();
    try {
        growth_estimate(seed(kq, {1}, {1}, {1}), 20);
        FAIL("expected ZeroTerm");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ZeroTerm);
    }
    const AbstractEds half = AbstractEds::from_seed(FieldElement(kq, std::vector<mpq_class>{mpq_class(1, 2)}), el(kq, {1}), el(kq, {3}));
    CHECK_THROWS_AS(growth_estimate(half, 16), Error);
}

TEST_CASE("non-integral intermediate terms") {
    // u_2 = 2 with odd u_3 forces denominators in even terms
    auto kq = fx::q();
    const AbstractEds s = eds_extend(seed(kq, {2}, {3}, {5}), 20);
    bool saw_fraction = false;
    for (const auto& t : s.terms) saw_fraction = saw_fraction || !t.is_integral();
    CHECK(saw_fraction);
    const HeightEstimate h = growth_estimate(s, 16);
    CHECK(std::isfinite(h.total));
    CHECK(!h.warnings.empty());
}

TEST_CASE("torsion filter") {
    auto kq = fx::q();
    CHECK(torsion_filter(seed(kq, {1}, {1}, {1}), 20));
    CHECK(!torsion_filter(seed(kq, {1}, {-1}, {1}), 100));
    CHECK(!torsion_filter(seed(fx::qphi(), {1, -1}, {-2, 1}, {5, -3}), 100));
}

TEST_CASE("degenerate sequences are recognised") {
    auto kq = fx::q();
    CHECK(degenerate_growth(seed(kq, {2}, {3}, {4}), 16));  // u_n = n
    CHECK(!degenerate_growth(seed(kq, {1}, {-1}, {1}), 16));
    CHECK(!degenerate_growth(seed(fx::qw(), {1, 1}, {1, 1}, {1, 1}), 16));
}

TEST_CASE("search over Q") {
    SearchConfig cfg;
    cfg.field = fx::q();
    cfg.coeff_bound = 1;
    cfg.extend_to = 128;
    const SearchResult r = search(cfg);
    auto kq = fx::q();
    double v = 0;
    CHECK(contains_seed(r, el(kq, {1}), el(kq, {-1}), el(kq, {1}), &v));
    CHECK(std::fabs(v - canonical_height(fx::curve37().curve, fx::curve37().point, 128).total) < 2e-3);
    for (const auto& c : r.candidates) {
        CHECK(!c.u2.is_zero());
        CHECK(c.normalized == c.estimate.d * c.estimate.total);
        CHECK(c.estimate.total >= 0.0);
        CHECK(c.caveat);
    }
    for (size_t i = 1; i < r.candidates.size(); ++i) CHECK(!candidate_less(r.candidates[i], r.candidates[i - 1]));
    CHECK(r.examined == 2 * 3 * 3);
    CHECK(r.examined == static_cast<long>(r.candidates.size() + r.skipped.size()) + r.pruned);
}

TEST_CASE("search over Q(w) finds the small-height seed") {
    SearchConfig cfg;
    cfg.field = fx::qw();
    cfg.coeff_bound = 1;
    cfg.extend_to = 512;
    cfg.max_candidates = 1000;
    const SearchResult r = search(cfg);
    auto kw = fx::qw();
    double v = 0;
    REQUIRE(contains_seed(r, el(kw, {1, 1}), el(kw, {1, 1}), el(kw, {1, 1}), &v));
    CHECK(std::fabs(v - 2 * 0.01032) < 1e-4);
    CHECK(r.candidates.front().normalized == doctest::Approx(v));
}

TEST_CASE("search is deterministic and serial equals parallel") {
    SearchConfig cfg;
    cfg.field = fx::qi();
    cfg.coeff_bound = 1;
    cfg.extend_to = 64;
    cfg.max_candidates = 50;
    const SearchResult a = search(cfg, Exec::Serial);
    const SearchResult b = search(cfg, Exec::Parallel);
    const SearchResult c = search(cfg, Exec::Parallel);
    REQUIRE(a.candidates.size() == b.candidates.size());
    REQUIRE(b.candidates.size() == c.candidates.size());
    for (size_t i = 0; i < a.candidates.size(); ++i) {
        CHECK(a.candidates[i].u2 == b.candidates[i].u2);
        CHECK(a.candidates[i].u3 == b.candidates[i].u3);
        CHECK(a.candidates[i].u4 == b.candidates[i].u4);
        CHECK(a.candidates[i].normalized == b.candidates[i].normalized);
        CHECK(b.candidates[i].normalized == c.candidates[i].normalized);
    }
    CHECK(a.pruned == b.pruned);
    CHECK(a.skipped.size() == b.skipped.size());
}

TEST_CASE("search config validation") {
    SearchConfig cfg;
    cfg.field = fx::q();
    cfg.coeff_bound = 0;
    CHECK_THROWS_AS(search(cfg), Error);
    cfg.coeff_bound = 1;
    cfg.extend_to = 4;
    CHECK_THROWS_AS(search(cfg), Error);
}

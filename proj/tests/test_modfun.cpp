#include "doctest.h"

#include "onan/arith.hpp"
#include "onan/bigfloat.hpp"
#include "onan/modfun.hpp"
#include "onan/qforms.hpp"

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <vector>

using namespace onan;

namespace {

// Self-contained series arithmetic, deliberately independent of the library
// internals: dense schoolbook products, no pentagonal shortcut, and the
// E6-based route to Delta that the library does not use.
using Series = std::vector<mpz_class>;

Series smul(const Series& a, const Series& b, std::size_t len) {
    Series r(len, mpz_class(0));
    for (std::size_t i = 0; i < a.size() && i < len; ++i)
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

Series sinv(const Series& a, std::size_t len) {
    REQUIRE(a[0] == 1);
    Series r(len, mpz_class(0));
    r[0] = 1;
    for (std::size_t n = 1; n < len; ++n) {
        mpz_class acc = 0;
        for (std::size_t k = 1; k <= n && k < a.size(); ++k)
            acc += a[k] * r[n - k];
        r[n] = -acc;
    }
    return r;
}

mpz_class sigma_pow(std::size_t n, int k) {
    mpz_class s = 0;
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        mpz_class dk;
        mpz_ui_pow_ui(dk.get_mpz_t(), d, static_cast<unsigned long>(k));
        s += dk;
    }
    return s;
}

Series eisenstein(int k, long scale, std::size_t len) {
    Series r(len, mpz_class(0));
    r[0] = 1;
    for (std::size_t n = 1; n < len; ++n) r[n] = scale * sigma_pow(n, k);
    return r;
}

// prod_{m>=1} (1 - q^m)^24 by literally multiplying out each binomial
// factor 24 times.
Series eta24_naive(std::size_t len) {
    Series r(len, mpz_class(0));
    r[0] = 1;
    for (std::size_t m = 1; m < len; ++m)
        for (int rep = 0; rep < 24; ++rep)
            for (std::size_t i = len; i-- > m;) r[i] -= r[i - m];
    return r;
}

} // namespace

TEST_CASE("hauptmodul coefficients: golden values") {
    CHECK(j_coefficient(-1) == 1);
    CHECK(j_coefficient(0) == 0);
    CHECK(j_coefficient(1) == 196884);
    CHECK(j_coefficient(2) == 21493760);
    CHECK(j_coefficient(3) == 864299970);
    CHECK(j_coefficient(4) == mpz_class("20245856256"));
    CHECK(j_coefficient(5) == mpz_class("333202640600"));
    CHECK_THROWS_AS(j_coefficient(-2), domain_error);
}

TEST_CASE("hauptmodul coefficients: independent E6 route") {
    const std::size_t len = 61;
    Series e4 = eisenstein(3, 240, len);
    Series e6 = eisenstein(5, -504, len);
    Series e4sq = smul(e4, e4, len);
    Series e4cu = smul(e4sq, e4, len);
    // own-arithmetic sanity: association order cannot matter
    CHECK(e4cu == smul(e4, e4sq, len));
    Series e6sq = smul(e6, e6, len);
    Series eta = eta24_naive(len);

    // E4^3 - E6^2 = 1728 Delta = 1728 q (Delta/q), coefficient by
    // coefficient: exponent n on the left pairs with eta[n - 1].
    CHECK(e4cu[0] == e6sq[0]);
    for (std::size_t n = 1; n < len; ++n)
        CHECK(e4cu[n] - e6sq[n] == 1728 * eta[n - 1]);

    // j q = E4^3 / (Delta/q); subtract the constant 744 to land on the
    // normalized expansion and compare with the library table.
    Series jq = smul(e4cu, sinv(eta, len), len);
    CHECK(jq[0] == 1);
    CHECK(jq[1] == 744);
    for (std::size_t n = 2; n < len; ++n)
        CHECK(jq[n] == j_coefficient(static_cast<int>(n) - 1));
}

TEST_CASE("hauptmodul coefficients: table snapshots are consistent") {
    auto small = j_coefficient_table(10);
    auto big = j_coefficient_table(300);
    REQUIRE(big->size() >= 302);
    for (std::size_t k = 0; k < small->size(); ++k)
        CHECK((*small)[k] == (*big)[k]);
}

TEST_CASE("hauptmodul coefficients: growth stays under the tail majorant") {
    // The truncation certificates lean on |c(n)| <= exp(4 pi sqrt(n)).
    auto t = j_coefficient_table(400);
    const double log2e = 1.4426950408889634;
    for (int n = 1; n <= 400; ++n) {
        mpz_class c = (*t)[static_cast<std::size_t>(n) + 1];
        REQUIRE(c > 0);
        double bound_bits = 4.0 * 3.141592653589793 * std::sqrt(n) * log2e;
        CHECK(mpz_sizeinbase(c.get_mpz_t(), 2) <=
              static_cast<std::size_t>(bound_bits) + 1);
    }
}

TEST_CASE("evaluation at the classical points") {
    // i: j = 1728; rho: j = 0; (-1+sqrt(-7))/2: j = -3375.
    struct Golden {
        QuadraticForm f;
        long value;
    };
    for (const Golden& g : {Golden{{1, 0, 1}, 984}, Golden{{1, 1, 1}, -744},
                            Golden{{1, 1, 2}, -4119}}) {
        Complex v = evaluate_J(cm_point(g.f), 40);
        CHECK(v.re.err().l2 < -100.0);
        CHECK(v.im.err().l2 < -100.0);
        Real delta = v.re - Real::from_si(g.value, v.re.prec());
        CHECK(std::fabs(delta.to_double()) < 1e-30);
        CHECK(std::fabs(v.im.to_double()) < 1e-30);
    }
}

TEST_CASE("faithful combination at exact inputs") {
    mpfr_prec_t prec = Real::bits_for_digits(30);
    auto at = [&](long x) {
        Complex c(Real::from_si(x, prec), Real::from_si(0, prec));
        return J_onan(c);
    };
    CHECK(at(-744).re.to_double() == 160512.0);
    CHECK(at(984).re.to_double() == 573504.0);
    CHECK(at(-4119).re.to_double() == 16576512.0);
    CHECK(at(-744).re.err().is_zero());
    CHECK(at(-744).im.to_double() == 0.0);
}

TEST_CASE("faithful combination composed with evaluation") {
    Complex v = J_onan(evaluate_J(cm_point({1, 1, 2}), 40));
    Real delta = v.re - Real::from_si(16576512, v.re.prec());
    CHECK(std::fabs(delta.to_double()) < 1e-25);
    CHECK(std::fabs(v.im.to_double()) < 1e-25);
}

TEST_CASE("class polynomials have integer coefficients") {
    const int digits = 80;
    mpfr_prec_t prec = Real::bits_for_digits(digits);
    for (std::int64_t d = -3; d >= -100; --d) {
        std::int64_t r = ((d % 4) + 4) % 4;
        if (r != 0 && r != 1) continue;
        Discriminant dd(d);
        auto reps = class_representatives(dd);
        // prod over classes of (X - J(z_Q)), built by convolution
        std::vector<Complex> poly;
        poly.emplace_back(Real::from_si(1, prec), Real::from_si(0, prec));
        for (const auto& f : reps) {
            Complex root = evaluate_J(cm_point(f), digits);
            std::vector<Complex> next;
            next.reserve(poly.size() + 1);
            Complex zero(Real::from_si(0, prec), Real::from_si(0, prec));
            for (std::size_t k = 0; k <= poly.size(); ++k) {
                Complex term = zero;
                if (k < poly.size()) term = term - poly[k] * root;
                if (k > 0) term = term + poly[k - 1];
                next.push_back(term);
            }
            poly = std::move(next);
        }
        REQUIRE(poly.size() == reps.size() + 1);
        for (const Complex& c : poly) {
            CAPTURE(d);
            CHECK(c.re.err().l2 < -66.0);
            CHECK(c.im.err().l2 < -66.0);
            mpz_class nearest;
            double dist = 0.0;
            c.re.round_nearest(nearest, dist);
            CHECK(dist < 1e-18);
            CHECK(std::fabs(c.im.to_double()) < 1e-18);
        }
    }
}

TEST_CASE("class polynomial constants for one-class discriminants") {
    // Singular moduli: j = 0, 1728, -3375, 8000, -32768 at
    // D = -3, -4, -7, -8, -11; the constant term of X - J(z) is -J.
    struct Golden {
        std::int64_t d;
        long constant;
    };
    for (const Golden& g :
         {Golden{-3, 744}, Golden{-4, -984}, Golden{-7, 4119},
          Golden{-8, -7256}, Golden{-11, 33512}}) {
        auto reps = class_representatives(Discriminant(g.d));
        REQUIRE(reps.size() == 1);
        Complex v = evaluate_J(cm_point(reps[0]), 40);
        mpz_class nearest;
        double dist = 0.0;
        v.re.neg().round_nearest(nearest, dist);
        CHECK(dist < 1e-25);
        CHECK(nearest == g.constant);
    }
}

TEST_CASE("two-class discriminant -12 splits over conductors") {
    // Reduced forms (1,0,3) and (2,2,2); the latter is imprimitive and its
    // root is J(rho). The polynomial is (X - 53256)(X + 744).
    auto reps = class_representatives(Discriminant(-12));
    REQUIRE(reps.size() == 2);
    Real sum = Real::from_si(0, Real::bits_for_digits(40));
    Real prod = Real::from_si(1, Real::bits_for_digits(40));
    for (const auto& f : reps) {
        Complex v = evaluate_J(cm_point(f), 40);
        sum = sum + v.re;
        prod = prod * v.re;
    }
    mpz_class n;
    double dist = 0.0;
    sum.round_nearest(n, dist);
    CHECK(dist < 1e-20);
    CHECK(n == 52512); // 53256 + (-744)
    prod.round_nearest(n, dist);
    CHECK(dist < 1e-18);
    CHECK(n == -39622464); // 53256 * (-744)
}

TEST_CASE("evaluation: forced longer truncation stays inside the bound") {
    CMPoint z = cm_point({2, 1, 3}); // slowest-converging small class
    Complex a = evaluate_J(z, 30);
    Complex b = evaluate_J(z, 30, 500);
    Complex ref = evaluate_J(z, 120);
    for (auto [x, y] : {std::pair{a.re, b.re}, std::pair{a.im, b.im},
                        std::pair{a.re, ref.re}, std::pair{a.im, ref.im}}) {
        Real diff = x - y;
        CHECK(std::fabs(diff.to_double()) <= diff.err().to_double());
        CHECK(diff.err().l2 < -60.0);
    }
}

TEST_CASE("theta at v = 1 matches the closed form") {
    // theta(1) = pi^(1/4) / Gamma(3/4)
    mpfr_prec_t prec = Real::bits_for_digits(50);
    Real v = Real::from_si(1, prec);
    Real t = theta(v, 45);

    mpfr_t ref, g;
    mpfr_init2(ref, 256);
    mpfr_init2(g, 256);
    mpfr_const_pi(ref, MPFR_RNDN);
    mpfr_rootn_ui(ref, ref, 4, MPFR_RNDN);
    mpfr_set_ui(g, 3, MPFR_RNDN);
    mpfr_div_ui(g, g, 4, MPFR_RNDN);
    mpfr_gamma(g, g, MPFR_RNDN);
    mpfr_div(ref, ref, g, MPFR_RNDN);
    mpfr_sub(ref, ref, t.raw(), MPFR_RNDN);
    double diff = std::fabs(mpfr_get_d(ref, MPFR_RNDN));
    mpfr_clear(ref);
    mpfr_clear(g);

    CHECK(diff < 1e-40);
    CHECK(t.to_double() == doctest::Approx(1.0864348112).epsilon(1e-9));
}

TEST_CASE("theta tends to one at large v") {
    mpfr_prec_t prec = Real::bits_for_digits(80);
    Real t = theta(Real::from_si(50, prec), 80);
    Real excess = t - Real::from_si(1, prec);
    // 2 exp(-50 pi) ~ 1.2e-68
    CHECK(excess.to_double() > 1e-69);
    CHECK(excess.to_double() < 1e-67);
}

TEST_CASE("theta functional equation at 40 digits") {
    mpfr_prec_t prec = Real::bits_for_digits(40);
    struct Ratio {
        long num, den;
    };
    for (const Ratio& r : {Ratio{1, 3}, Ratio{1, 2}, Ratio{1, 1}, Ratio{2, 1},
                           Ratio{3, 1}, Ratio{15, 2}}) {
        CAPTURE(r.num);
        CAPTURE(r.den);
        Real v = Real::from_ratio(r.num, r.den, prec);
        Real iv = Real::from_ratio(r.den, r.num, prec);
        Real lhs = Real::sqrt_of(iv) * theta(iv, 40);
        Real rhs = theta(v, 40);
        CHECK(std::fabs((lhs - rhs).to_double()) < 1e-30);
    }
}

TEST_CASE("theta error bounds are sound across precisions") {
    for (auto [num, den] : {std::pair{2L, 3L}, std::pair{15L, 2L}}) {
        Real lo = theta(Real::from_ratio(num, den, Real::bits_for_digits(40)), 40);
        Real hi = theta(Real::from_ratio(num, den, Real::bits_for_digits(100)), 100);
        Real diff = lo - hi;
        CHECK(std::fabs(diff.to_double()) <= diff.err().to_double());
        CHECK(diff.err().l2 < -100.0);
    }
}

TEST_CASE("theta domain checks") {
    mpfr_prec_t prec = Real::bits_for_digits(20);
    CHECK_THROWS_AS(theta(Real::from_double(1e-4, prec), 20), domain_error);
    CHECK_THROWS_AS(theta(Real::from_si(-1, prec), 20), domain_error);
    CHECK_THROWS_AS(theta(Real::from_si(0, prec), 20), domain_error);
}

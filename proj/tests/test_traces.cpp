#include "doctest.h"

#include "onan/arith.hpp"
#include "onan/traces.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

using namespace onan;

TEST_CASE("trace golden values") {
    CHECK(trace(Discriminant(-3)).a == 26752);
    CHECK(trace(Discriminant(-4)).a == 143376);
    CHECK(trace(Discriminant(-7)).a == 8288256);
}

TEST_CASE("trace result metadata") {
    TraceResult r = trace(Discriminant(-23));
    CHECK(r.d == -23);
    CHECK(r.class_count == 3);
    CHECK_FALSE(r.has_imprimitive);
    CHECK(r.attempts == 1);
    CHECK(r.residual < 0.25 / 12.0);
    CHECK(r.precision_digits >= default_trace_digits(-23));

    TraceResult imp = trace(Discriminant(-12));
    CHECK(imp.class_count == 2);
    CHECK(imp.has_imprimitive);
}

TEST_CASE("trace values pinned against a second derivation") {
    // Pinned from an independent arbitrary-precision implementation of the
    // same class-point sum; each value is also recomputed here at doubled
    // precision.
    struct Pin {
        std::int64_t d;
        const char* a;
    };
    const std::vector<Pin> pins = {
        {-8, "26124256"},
        {-11, "561346944"},
        {-12, "1417904008"},
        {-15, "18508941312"},
        {-16, "41113157868"},
        {-19, "392037661056"},
        {-20, "798588584512"},
        {-23, "6103910176768"},
        {-24, "11670072146880"},
    };
    for (const Pin& p : pins) {
        CAPTURE(p.d);
        TraceResult r = trace(Discriminant(p.d));
        CHECK(r.a == mpz_class(p.a));
        TraceResult hi =
            trace(Discriminant(p.d), 2 * default_trace_digits(p.d));
        CHECK(hi.a == r.a);
    }
}

TEST_CASE("trace at -163 matches the exact singular modulus") {
    // j = -640320^3 there, a one-class discriminant, so the trace is
    // (J^2 - J - 393768) / 2 with J = j - 744, all exact integers.
    mpz_class j;
    mpz_class base = -640320;
    mpz_pow_ui(j.get_mpz_t(), base.get_mpz_t(), 3);
    mpz_class J = j - 744;
    mpz_class expected = (J * J - J - 393768) / 2;
    TraceResult r = trace(Discriminant(-163));
    CHECK(r.class_count == 1);
    CHECK(r.a == expected);
}

TEST_CASE("trace defaults scale with the discriminant") {
    CHECK(default_trace_digits(-3) == 43);
    CHECK(default_trace_digits(-100) == 54);
    CHECK(default_trace_digits(-2000) > default_trace_digits(-1000));
}

TEST_CASE("starving the precision fails certification loudly") {
    try {
        trace(Discriminant(-500), 5);
        FAIL("expected certification_error");
    } catch (const certification_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("-500") != std::string::npos);
        CHECK(msg.find("5") != std::string::npos);
    }
    // the default precision handles the same discriminant
    CHECK(trace(Discriminant(-500)).residual < 0.25 / 12.0);
}

TEST_CASE("weighted class terms") {
    CHECK(weighted_class_term(Discriminant(-3)) == -8);
    CHECK(weighted_class_term(Discriminant(-4)) == -12);
    CHECK(weighted_class_term(Discriminant(-7)) == -24);
    CHECK(weighted_class_term(Discriminant(-20)) == -48);
    CHECK(weighted_class_term(Discriminant(-23)) == -72);
}

TEST_CASE("trace table enumerates fundamental discriminants in order") {
    auto table = trace_table(-8, -3, 2, false);
    REQUIRE(table.size() == 4);
    CHECK(table[0].d == -3);
    CHECK(table[1].d == -4);
    CHECK(table[2].d == -7);
    CHECK(table[3].d == -8);
    CHECK(table[0].a == 26752);
    CHECK(table[3].a == mpz_class("26124256"));

    auto all = trace_table(-16, -3, 1, true);
    // adds -11, -12, -15, -16 plus the non-fundamental entries
    bool saw_minus12 = false;
    for (const auto& r : all)
        if (r.d == -12) saw_minus12 = true;
    CHECK(saw_minus12);
    CHECK(all.size() == 8); // -3 -4 -7 -8 -11 -12 -15 -16

    CHECK_THROWS_AS(trace_table(-3, -8, 1, false), domain_error);
}

TEST_CASE("trace residuals stay well inside the certification band") {
    for (auto& r : trace_table(-60, -3, 4, true)) {
        CAPTURE(r.d);
        CHECK(r.residual < 0.25 / 12.0);
        CHECK(r.attempts == 1);
    }
}

TEST_CASE("congruences of the corrected trace at small discriminants") {
    // mod 16 for even fundamental D < -8; mod 9, 5, 7 when D is not a
    // square modulo 3, 5, 7 respectively.
    for (std::int64_t d = -3; d >= -100; --d) {
        std::int64_t rr = ((d % 4) + 4) % 4;
        if (rr != 0 && rr != 1) continue;
        if (!is_fundamental(d)) continue;
        Discriminant dd(d);
        mpz_class corrected = trace(dd).a - weighted_class_term(dd);
        CAPTURE(d);
        if (d % 2 == 0 && d < -8)
            CHECK(mpz_divisible_ui_p(corrected.get_mpz_t(), 16));
        if (!is_square_mod(d, 3))
            CHECK(mpz_divisible_ui_p(corrected.get_mpz_t(), 9));
        if (!is_square_mod(d, 5))
            CHECK(mpz_divisible_ui_p(corrected.get_mpz_t(), 5));
        if (!is_square_mod(d, 7))
            CHECK(mpz_divisible_ui_p(corrected.get_mpz_t(), 7));
    }
}

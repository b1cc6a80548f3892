#include "onan/arith.hpp"

#include <doctest.h>

#include <cstdint>

using namespace onan;

TEST_CASE("fundamental discriminant classification") {
    CHECK(is_fundamental(-7));
    CHECK(is_fundamental(-4));
    CHECK(is_fundamental(-3));
    CHECK(is_fundamental(-8));
    CHECK(is_fundamental(-20));
    CHECK(is_fundamental(-15));
    CHECK_FALSE(is_fundamental(-12)); // -12 = 4*(-3), -3 ≡ 1 mod 4
    CHECK_FALSE(is_fundamental(-16));
    CHECK_FALSE(is_fundamental(-9));  // ≡ 3 mod 4
    CHECK_FALSE(is_fundamental(-5));
    CHECK_FALSE(is_fundamental(-27));
    CHECK_FALSE(is_fundamental(0));
    CHECK(is_fundamental(1)); // squarefree, 1 mod 4
}

TEST_CASE("Discriminant type invariant") {
    CHECK_THROWS_AS(Discriminant(-5), domain_error);  // 3 mod 4
    CHECK_THROWS_AS(Discriminant(-6), domain_error);  // 2 mod 4
    CHECK_THROWS_AS(Discriminant(0), domain_error);
    CHECK(Discriminant(-7).fundamental());
    CHECK_FALSE(Discriminant(-12).fundamental());
    CHECK(Discriminant(-12).value() == -12);
}

TEST_CASE("kronecker character values") {
    CHECK(kronecker_chi(Discriminant(-7), 7) == 0);
    CHECK(kronecker_chi(Discriminant(-7), 2) == 1);
    CHECK(kronecker_chi(Discriminant(-3), 7) == 1);
    CHECK(kronecker_chi(Discriminant(-4), 3) == -1);
    CHECK(kronecker_chi(Discriminant(-8), 3) == 1); // -8 ≡ 1 mod 3
    CHECK_THROWS_AS(kronecker_chi(Discriminant(-7), 6), domain_error);
    CHECK_THROWS_AS(kronecker_chi(Discriminant(-7), 1), domain_error);
}

TEST_CASE("square residue gate") {
    CHECK_FALSE(is_square_mod(-7, 5));
    CHECK(is_square_mod(-7, 7)); // 0 counts as a square
    CHECK_FALSE(is_square_mod(-3, 5));
    CHECK(is_square_mod(-7, 11));        // -7 ≡ 4 = 2^2
    CHECK_FALSE(is_square_mod(-3, 11));  // -3 ≡ 8, not in {0,1,3,4,5,9}
    CHECK_FALSE(is_square_mod(-4, 19));  // -4 ≡ 15, a non-residue mod 19
    CHECK_THROWS_AS(is_square_mod(-7, 15), domain_error);
    SUBCASE("every residue is a square mod 2") {
        CHECK(is_square_mod(-7, 2));
        CHECK(is_square_mod(-4, 2));
    }
}

TEST_CASE("character agrees with euler criterion for odd p not dividing D") {
    for (std::int64_t d : {-3, -4, -7, -8, -11, -15, -20, -23, -163, -427}) {
        Discriminant dd(d);
        for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull, 97ull, 997ull}) {
            if ((-d) % static_cast<std::int64_t>(p) == 0) continue;
            int chi = kronecker_chi(dd, p);
            bool sq = is_square_mod(d, p);
            CAPTURE(d);
            CAPTURE(p);
            CHECK(chi == (sq ? 1 : -1));
        }
    }
}

TEST_CASE("character periodicity: chi_D has period dividing 4|D|") {
    for (std::int64_t d : {-3, -7, -12, -16, -20, -48}) {
        std::int64_t period = 4 * (-d);
        for (std::int64_t n = 1; n <= 2 * period; ++n) {
            CAPTURE(d);
            CAPTURE(n);
            CHECK(kronecker(d, n) == kronecker(d, n + period));
        }
    }
}

TEST_CASE("primality and squarefree helpers") {
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK(is_prime(999999937)); // known 9-digit prime
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(561));               // Carmichael
    CHECK_FALSE(is_prime(3215031751ull));     // strong pseudoprime to 2,3,5,7
    CHECK(is_prime(18446744073709551557ull)); // largest 64-bit prime
    CHECK(is_squarefree(-15));
    CHECK_FALSE(is_squarefree(-12));
    CHECK_FALSE(is_squarefree(49));
    CHECK_THROWS_AS(is_squarefree(0), domain_error);
}

TEST_CASE("mod_floor stays in range") {
    CHECK(mod_floor(-7, 4) == 1);
    CHECK(mod_floor(-8, 4) == 0);
    CHECK(mod_floor(-1, 8) == 7);
    CHECK(mod_floor(5, 8) == 5);
}

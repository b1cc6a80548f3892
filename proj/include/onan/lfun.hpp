#pragma once

#include "onan/arith.hpp"
#include "onan/bigfloat.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace onan {

// L(1, chi_D) for fundamental D < -4, with a certified error bound of
// about 10^-digits carried on the result. Abel summation over whole
// character periods; throws if the term cap cannot meet the target.
Real dirichlet_L1(const Discriminant& d, int digits,
                  std::int64_t max_terms = 20'000'000);

struct ClassNumberEstimate {
    std::int64_t h = 0;
    double error_bound = 0.0; // certified distance bound from the integer
};

// h(D) via the class number formula, fundamental D < -4.
ClassNumberEstimate class_number_from_L(const Discriminant& d);

struct CurveSpec {
    int family = 0;     // 11, 14, 15, 19; 0 when supplied directly
    std::int64_t d = 0; // twist discriminant, family curves only
    mpz_class a, b;     // y^2 = x^3 + a x + b
    mpz_class conductor;
    bool conductor_heuristic = false; // gcd(D, 6*family) != 1
};

// The four twist families, coefficients quadratic/cubic in D.
CurveSpec curve(int family, const Discriminant& d);

// A directly supplied curve; the conductor is trusted as given.
CurveSpec make_curve(const mpz_class& a, const mpz_class& b,
                     const mpz_class& conductor);

// a_p of y^2 = x^3 + ax + b for prime 5 <= p <= 100000. Good reduction:
// p + 1 - #E(F_p). Singular reduction: +1 split node, -1 nonsplit, 0 cusp.
long count_points(const mpz_class& a, const mpz_class& b, std::uint64_t p);

struct LSeriesData {
    std::vector<std::pair<std::uint64_t, long>> ap;
    long cutoff = 0;
    double l1 = 0.0;
    double l1_error = 0.0;    // smoothing-tail estimate (model error excluded)
    double root_number = 0.0; // two-point estimate, ~ +-1 when data is exact
    bool local23_exact = false;
};

// L(1) by the two-point smoothed approximate functional equation. Family
// curves coprime to 6 get exact a_2, a_3 (so the root number estimate is
// sharp); other curves run with a_2 = a_3 = 0 and local23_exact = false.
// Throws on an ill-conditioned two-point system.
LSeriesData l_value_at_1(const CurveSpec& e, double target = 1e-6);

struct SelmerIndicator {
    int p = 0;
    std::int64_t d = 0;
    bool applicable = false; // D must be a non-square mod p
    mpz_class a;
    std::int64_t class_count = 0;
    std::int64_t weighted_term = 0;
    long a_mod_p = 0;
    long term_mod_p = 0;
    bool congruent = false;
    bool predicted_nontrivial = false; // conditional on BSD
    bool curve_heuristic = false;
    LSeriesData l;
};

// The mod-p Selmer prediction, p in {11, 19}.
SelmerIndicator selmer_indicator(int p, const Discriminant& d);

} // namespace onan

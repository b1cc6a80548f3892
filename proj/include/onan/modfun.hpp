#pragma once

#include "onan/bigfloat.hpp"
#include "onan/qforms.hpp"

#include <gmpxx.h>

#include <memory>
#include <vector>

namespace onan {

// Exact integer coefficients of the normalized hauptmodul
// J = q^-1 + 0 + 196884 q + 21493760 q^2 + ...
// Entry k of the returned vector is c(k-1), so the table runs c(-1)..c(n_max).
// The table is cached globally and grown on demand; the returned snapshot is
// immutable and safe to hold across threads.
std::shared_ptr<const std::vector<mpz_class>> j_coefficient_table(int n_max);

mpz_class j_coefficient(int n);

// Certified evaluation of J at a CM point, as a complex number with error
// bounds on both components (series tail folded in, times a safety factor).
// min_terms forces a longer truncation than the certified choice (used by
// tail-soundness tests).
Complex evaluate_J(const CMPoint& z, int digits, int min_terms = 0);

// x^2 - x - 393768, the faithful-action combination of J.
Complex J_onan(const Complex& x);

// Jacobi theta value 1 + 2 sum exp(-pi v n^2), v >= 1e-3, with certified
// error below ~10^-digits.
Real theta(const Real& v, int digits);

} // namespace onan

#pragma once

#include "onan/arith.hpp"
#include "onan/qforms.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace onan {

// Raised when the 12-fold sum fails to certify within the retry budget.
struct certification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TraceResult {
    std::int64_t d = 0;
    mpz_class a;              // the certified integer trace
    double residual = 0.0;    // |12*raw - nearest integer| / 12
    int precision_digits = 0; // working precision of the certifying attempt
    int attempts = 0;         // 1 = no retry needed
    int class_count = 0;      // reduced forms summed (conjugates included)
    bool has_imprimitive = false;
};

// Default working precision in digits for the first attempt.
int default_trace_digits(std::int64_t d);

// Certified trace at discriminant D < 0: sum of J_onan over the CM points
// of the reduced forms, weighted 1/w. The sum times 12 must land within
// 0.25 of an integer divisible by 12; on failure precision doubles, at
// most 3 retries, then certification_error.
TraceResult trace(const Discriminant& d, std::optional<int> digits_hint = {});

// -8 at D=-3, -12 at D=-4, -24 h(D) for fundamental D < -4.
std::int64_t weighted_class_term(const Discriminant& d);

// Traces for every valid discriminant in [dmin, dmax], dmax <= -3,
// descending D, fundamental only unless all_discriminants. Parallel across
// discriminants; output independent of thread count.
std::vector<TraceResult> trace_table(std::int64_t dmin, std::int64_t dmax,
                                     int threads = 1,
                                     bool all_discriminants = false);

} // namespace onan

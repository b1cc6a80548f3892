#include "onan/traces.hpp"

#include "onan/bigfloat.hpp"
#include "onan/modfun.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace onan {

int default_trace_digits(std::int64_t d) {
    double absd = static_cast<double>(d < 0 ? -d : d);
    return static_cast<int>(
               std::ceil(3.141592653589793 * std::sqrt(absd) /
                         2.302585092994046)) +
           40;
}

TraceResult trace(const Discriminant& d, std::optional<int> digits_hint) {
    if (d.value() >= 0)
        throw domain_error("trace: discriminant must be negative");
    auto forms = class_representatives(d);
    bool has_imp = false;
    for (const auto& f : forms)
        if (f.content() > 1) has_imp = true;

    int digits0 = digits_hint.value_or(default_trace_digits(d.value()));
    if (digits0 < 1) digits0 = 1;

    for (int attempt = 1; attempt <= 4; ++attempt) {
        int digits = digits0 << (attempt - 1);
        mpfr_prec_t prec = Real::bits_for_digits(digits);
        Real t(prec);
        for (const auto& f : forms) {
            // A reduced form and its mirror (A,-B,C) give conjugate CM
            // points, hence equal real parts: evaluate B >= 0 only and
            // double the interior ones.
            if (f.b < 0) continue;
            long mult = (f.b > 0 && f.b < f.a && f.a < f.c) ? 2 : 1;
            Complex j = evaluate_J(cm_point(f), digits);
            Complex jo = J_onan(j);
            t = t + jo.re.mul_si(mult * (12 / weight(f)));
        }
        mpz_class nearest;
        double dist;
        t.round_nearest(nearest, dist);
        Mag total = Mag::from_double(dist * 1.0000001) + t.err();
        if (total.l2 < -2.0 && mpz_divisible_ui_p(nearest.get_mpz_t(), 12)) {
            TraceResult r;
            r.d = d.value();
            r.a = nearest / 12;
            r.residual = dist / 12.0;
            r.precision_digits = digits;
            r.attempts = attempt;
            r.class_count = static_cast<int>(forms.size());
            r.has_imprimitive = has_imp;
            return r;
        }
    }
    std::ostringstream msg;
    msg << "trace: certification failed for D = " << d.value()
        << " after 3 retries (initial precision " << digits0 << " digits)";
    throw certification_error(msg.str());
}

std::int64_t weighted_class_term(const Discriminant& d) {
    if (d.value() >= 0)
        throw domain_error("weighted_class_term: discriminant must be negative");
    if (d.value() == -3) return -8;
    if (d.value() == -4) return -12;
    std::int64_t h = static_cast<std::int64_t>(class_representatives(d).size());
    return -24 * h;
}

std::vector<TraceResult> trace_table(std::int64_t dmin, std::int64_t dmax,
                                     int threads, bool all_discriminants) {
    if (dmax > -3 || dmin > dmax)
        throw domain_error("trace_table: need dmin <= dmax <= -3");
    std::vector<std::int64_t> ds;
    for (std::int64_t v = dmax; v >= dmin; --v) {
        std::int64_t r = mod_floor(v, 4);
        if (r != 0 && r != 1) continue;
        if (!all_discriminants && !is_fundamental(v)) continue;
        ds.push_back(v);
    }

    std::vector<TraceResult> out(ds.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= ds.size()) return;
            try {
                out[i] = trace(Discriminant(ds[i]));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    if (threads < 1) threads = 1;
    std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(threads), ds.size());
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < nthreads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace onan

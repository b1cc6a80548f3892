#pragma once

#include "onan/traces.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace onan {

struct cache_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Congruence check outcome: -1 not applicable, 0 fail, 1 pass.
struct CongruenceChecks {
    int mod16 = -1;
    int mod9 = -1;
    int mod5 = -1;
    int mod7 = -1;
};

struct ScanRecord {
    TraceResult tr;
    bool fundamental = false;
    std::int64_t weighted_term = 0;
    CongruenceChecks checks;
};

struct ScanSummary {
    std::int64_t scanned = 0;
    std::int64_t applicable = 0; // individual applicable congruences
    std::int64_t failures = 0;
};

struct ScanOptions {
    std::int64_t dmin = -100;
    std::int64_t dmax = -3;
    bool check_thm2 = true;
    bool all_discriminants = false;
    int threads = 1;
    std::string cache_dir; // empty disables caching
};

struct ScanReport {
    std::int64_t dmin = 0;
    std::int64_t dmax = 0;
    bool check_thm2 = false;
    bool all_discriminants = false;
    std::vector<ScanRecord> records; // descending D
    ScanSummary summary;

    // Deterministic serializations: identical options and results give
    // identical bytes, regardless of thread count or cache state.
    std::string to_json() const;
    std::string to_csv() const;
};

ScanReport run_scan(const ScanOptions& opts);

// 0 when every applicable congruence passed, 3 otherwise.
int exit_code_for(const ScanSummary& s);

// Trace cache primitives (exposed for tests). The cache file carries a
// format version and an FNV-1a checksum; loading verifies the checksum and
// spot-recomputes up to two records. Corruption throws cache_error.
std::vector<TraceResult> load_trace_cache(const std::string& dir);
void save_trace_cache(const std::string& dir,
                      const std::vector<TraceResult>& records);

} // namespace onan

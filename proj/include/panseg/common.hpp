#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>
#include <functional>
#include <cstdlib>
#include <algorithm>

namespace panseg {

// ── Error types ─────────────────────────────────────────────────────────────
// Every recoverable failure surfaces as a typed exception. The CLI maps
// UsageError -> exit 1, DataError family -> exit 2, NonFiniteLoss -> exit 3.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : Error { using Error::Error; };
struct DataError : Error { using Error::Error; };

struct EmptyMask : DataError { using DataError::DataError; };
struct ShapeMismatch : DataError { using DataError::DataError; };
struct InvalidSpacing : DataError { using DataError::DataError; };
struct ZeroVariance : DataError { using DataError::DataError; };
struct DimsTooSmall : DataError { using DataError::DataError; };
struct InvalidRange : DataError { using DataError::DataError; };
struct MissingChannel : DataError { using DataError::DataError; };
struct MissingDilationFlag : DataError { using DataError::DataError; };
struct InvalidConfig : DataError { using DataError::DataError; };
struct TooFewCases : DataError { using DataError::DataError; };
struct DataMissing : DataError { using DataError::DataError; };
struct IoError : DataError { using DataError::DataError; };
struct NonFiniteLoss : Error { using Error::Error; };

// ── Threading ───────────────────────────────────────────────────────────────
// Worker count is fixed per process (PANSEG_THREADS overrides hardware
// concurrency). Chunk boundaries depend only on (n, thread count), so a rerun
// with the same thread count partitions work identically.

inline int thread_count() {
    static int n = [] {
        if (const char* env = std::getenv("PANSEG_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1) return v;
        }
        unsigned hc = std::thread::hardware_concurrency();
        return hc > 0 ? static_cast<int>(hc) : 1;
    }();
    return n;
}

// Runs fn(chunk_index, begin, end) on disjoint [begin,end) ranges of [0,n).
// fn must write only to chunk-owned output (or per-chunk buffers reduced by
// the caller in chunk order).
inline void parallel_chunks(std::int64_t n,
                            const std::function<void(int, std::int64_t, std::int64_t)>& fn) {
    const int nt = std::min<std::int64_t>(thread_count(), std::max<std::int64_t>(n, 1));
    if (nt <= 1 || n < 1024) {
        fn(0, 0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::int64_t step = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::int64_t b = t * step;
        const std::int64_t e = std::min(n, b + step);
        if (b >= e) break;
        pool.emplace_back([&fn, t, b, e] { fn(t, b, e); });
    }
    for (auto& th : pool) th.join();
}

} // namespace panseg

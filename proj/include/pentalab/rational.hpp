#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "errors.hpp"

namespace pentalab {

/// Exact rational scalar.  mpq_class keeps every value canonical
/// (reduced, positive denominator), so == is structural equality.
using Rat = mpq_class;

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw Error("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

/// Deterministic 64-bit generator (splitmix64).  We roll our own
/// bounded draw because std::uniform_int_distribution is not
/// reproducible across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        // rejection sampling keeps the draw unbiased
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do { v = next(); } while (v >= limit);
        return v % bound;
    }

    long range(long lo, long hi) { // inclusive
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

/// Small random rational with numerator in [-maxNum, maxNum] and
/// denominator in [1, maxDen]; bounded entries keep bit growth tame
/// over long exact iterations.
inline Rat random_rat(Rng& rng, long maxNum = 9, long maxDen = 9) {
    long num = rng.range(-maxNum, maxNum);
    long den = rng.range(1, maxDen);
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat random_nonzero_rat(Rng& rng, long maxNum = 9, long maxDen = 9) {
    for (;;) {
        Rat r = random_rat(rng, maxNum, maxDen);
        if (!is_zero(r)) return r;
    }
}

} // namespace pentalab

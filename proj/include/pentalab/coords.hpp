#pragma once

#include <vector>

#include "rational.hpp"

namespace pentalab {

/// Cyclic reduction of j into 1..m (1-based residue).
inline long cyc(long j, long m) {
    long r = j % m;
    if (r <= 0) r += m;
    return r;
}

/// The 2n coordinates x_1..x_2n, indexed cyclically.  Odd slots carry
/// the p's and even slots the q's under the forgetful identification,
/// so one container serves both labellings.
struct CoordVector {
    long n = 0;
    std::vector<Rat> xs; // xs[i] holds x_{i+1}

    CoordVector() = default;
    explicit CoordVector(long n_) : n(n_), xs(static_cast<size_t>(2 * n_)) {}
    CoordVector(long n_, std::vector<Rat> v) : n(n_), xs(std::move(v)) {}

    long size() const { return 2 * n; }

    const Rat& operator()(long j) const { return xs[static_cast<size_t>(cyc(j, 2 * n) - 1)]; }
    Rat& operator()(long j) { return xs[static_cast<size_t>(cyc(j, 2 * n) - 1)]; }

    bool operator==(const CoordVector& o) const { return n == o.n && xs == o.xs; }
};

inline CoordVector random_coords(long n, Rng& rng, long maxNum = 9, long maxDen = 9) {
    CoordVector v(n);
    for (auto& x : v.xs) x = random_nonzero_rat(rng, maxNum, maxDen);
    return v;
}

/// The scaling action t on odd slots by 1/t and even slots by t.
inline CoordVector scale_action(const CoordVector& v, const Rat& t) {
    CoordVector w(v.n);
    for (long j = 1; j <= 2 * v.n; ++j)
        w(j) = (j % 2 == 1) ? Rat(v(j) / t) : Rat(v(j) * t);
    return w;
}

} // namespace pentalab

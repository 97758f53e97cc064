#pragma once

#include <string>
#include <vector>

#include "coords.hpp"
#include "invariants.hpp"
#include "projective.hpp"

namespace pentalab {

/// One period of a twisted point (or line) sequence.  Labels run over
/// the integers congruent to `parity` mod 4; rep(parity + 4t) for
/// t = 0..n-1 is stored and the rest of the sequence is generated by
/// the monodromy, rep(j + 4n) = T(rep(j)).
struct TwistedPolygon {
    enum class Kind { Points, Lines };

    Kind kind = Kind::Points;
    int parity = 1; // 1 or 3
    long n = 0;
    std::vector<Homog3> reps;
    ProjMap monodromy = ProjMap::identity();

    bool closed() const { return proj_equal(monodromy, ProjMap::identity()); }

    Homog3 rep(long j) const {
        long t = j - parity;
        if (t % 4 != 0)
            throw Error("label " + std::to_string(j) + " not congruent to " +
                        std::to_string(parity) + " mod 4");
        t /= 4;
        long r = ((t % n) + n) % n;
        long e = (t - r) / n;
        Homog3 p = reps[static_cast<size_t>(r)];
        if (e != 0) {
            ProjMap m = (e > 0) ? monodromy : monodromy.inverse();
            for (long i = 0; i < (e > 0 ? e : -e); ++i) p = m.apply(p);
            p = p.primitive();
        }
        return p;
    }
};

inline TwistedPolygon random_twisted(long n, Rng& rng,
                                     TwistedPolygon::Kind kind = TwistedPolygon::Kind::Points,
                                     int parity = 1) {
    TwistedPolygon p;
    p.kind = kind;
    p.parity = parity;
    p.n = n;
    for (long t = 0; t < n; ++t) {
        for (;;) {
            Homog3 h{random_rat(rng), random_rat(rng), random_rat(rng)};
            if (!h.is_zero()) {
                p.reps.push_back(h);
                break;
            }
        }
    }
    for (;;) {
        ProjMap m;
        for (auto& x : m.m) x = random_rat(rng);
        if (!is_zero(m.det())) {
            p.monodromy = m;
            break;
        }
    }
    return p;
}

/// Closed polygon: identity monodromy, random vertices.
inline TwistedPolygon random_closed(long n, Rng& rng) {
    TwistedPolygon p = random_twisted(n, rng);
    p.monodromy = ProjMap::identity();
    return p;
}

/// Twisted polygon inscribed in the conic y^2 = xz, via its rational
/// parametrization t -> [t^2, t, 1].  The monodromy is the symmetric
/// square of a Moebius map, so the whole bi-infinite sequence stays on
/// the conic.
inline TwistedPolygon conic_polygon(long n, Rng& rng) {
    TwistedPolygon p;
    p.n = n;
    std::vector<Rat> params;
    while (static_cast<long>(params.size()) < n) {
        Rat t = random_rat(rng, 30, 7);
        bool fresh = true;
        for (const Rat& u : params) fresh = fresh && u != t;
        if (fresh) params.push_back(t);
    }
    for (const Rat& t : params) p.reps.push_back(Homog3{t * t, t, 1});
    for (;;) {
        Rat a = random_rat(rng), b = random_rat(rng);
        Rat c = random_rat(rng), d = random_rat(rng);
        if (is_zero(a * d - b * c)) continue;
        ProjMap m;
        m.at(0, 0) = a * a; m.at(0, 1) = 2 * a * b; m.at(0, 2) = b * b;
        m.at(1, 0) = a * c; m.at(1, 1) = a * d + b * c; m.at(1, 2) = b * d;
        m.at(2, 0) = c * c; m.at(2, 1) = 2 * c * d; m.at(2, 2) = d * d;
        p.monodromy = m;
        return p;
    }
}

/// Coordinate form of the first pentagram involution.
inline CoordVector alpha1(const CoordVector& v) {
    long n = v.n;
    CoordVector w(n);
    for (long k = 1; k <= n; ++k) {
        Rat hi = 1 - v(2 * k + 1) * v(2 * k + 2);
        Rat lo = 1 - v(2 * k - 3) * v(2 * k - 2);
        if (is_zero(lo))
            throw MapSingularity("alpha1: 1 - x_" + std::to_string(cyc(2 * k - 3, 2 * n)) +
                                 " x_" + std::to_string(cyc(2 * k - 2, 2 * n)) + " = 0");
        if (is_zero(hi))
            throw MapSingularity("alpha1: 1 - x_" + std::to_string(cyc(2 * k + 1, 2 * n)) +
                                 " x_" + std::to_string(cyc(2 * k + 2, 2 * n)) + " = 0");
        w(2 * k - 1) = v(2 * k) * hi / lo;
        w(2 * k) = v(2 * k - 1) * lo / hi;
    }
    return w;
}

/// Coordinate form of the second pentagram involution.
inline CoordVector alpha2(const CoordVector& v) {
    long n = v.n;
    CoordVector w(n);
    for (long k = 1; k <= n; ++k) {
        Rat lo = 1 - v(2 * k - 2) * v(2 * k - 1);
        Rat hi = 1 - v(2 * k + 2) * v(2 * k + 3);
        if (is_zero(hi))
            throw MapSingularity("alpha2: 1 - x_" + std::to_string(cyc(2 * k + 2, 2 * n)) +
                                 " x_" + std::to_string(cyc(2 * k + 3, 2 * n)) + " = 0");
        if (is_zero(lo))
            throw MapSingularity("alpha2: 1 - x_" + std::to_string(cyc(2 * k - 2, 2 * n)) +
                                 " x_" + std::to_string(cyc(2 * k - 1, 2 * n)) + " = 0");
        w(2 * k + 1) = v(2 * k) * lo / hi;
        w(2 * k) = v(2 * k + 1) * hi / lo;
    }
    return w;
}

namespace detail {
inline TwistedPolygon delta(const TwistedPolygon& p, long offset) {
    TwistedPolygon q;
    q.kind = (p.kind == TwistedPolygon::Kind::Points) ? TwistedPolygon::Kind::Lines
                                                      : TwistedPolygon::Kind::Points;
    q.parity = (offset == 2) ? (p.parity == 1 ? 3 : 1) : p.parity;
    q.n = p.n;
    for (long t = 0; t < p.n; ++t) {
        long j = q.parity + 4 * t;
        Homog3 b = cross(p.rep(j - offset), p.rep(j + offset));
        if (b.is_zero())
            throw DegenerateConstruction("coincident neighbours at label " + std::to_string(j));
        q.reps.push_back(b.primitive());
    }
    // cross(Mu, Mv) = cof(M) cross(u, v): the new sequence transforms by
    // the cofactor (dual) matrix
    q.monodromy = p.monodromy.cofactor().primitive();
    return q;
}
} // namespace detail

/// The associate map B_j = (A_{j-2} A_{j+2}); swaps kind and parity class.
inline TwistedPolygon delta1(const TwistedPolygon& p) { return detail::delta(p, 2); }

/// B_j = (A_{j-4} A_{j+4}); swaps kind, keeps the parity class.
inline TwistedPolygon delta2(const TwistedPolygon& p) { return detail::delta(p, 4); }

/// The cross-ratio coordinates of a twisted polygon, flattened through
/// the forgetful map: the invariant anchored at label j lands in slot
/// (j+1)/2 or (j-1)/2 mod 2n.  Points and lines use the same formulas
/// since join and meet are both the cross product.
inline CoordVector extract_invariants(const TwistedPolygon& p) {
    long n = p.n;
    CoordVector v(n);
    auto assoc = [&](long i) {
        Homog3 b = cross(p.rep(i - 2), p.rep(i + 2));
        if (b.is_zero())
            throw DegenerateConstruction("coincident neighbours at label " + std::to_string(i));
        return b.primitive();
    };
    for (long t = 0; t < n; ++t) {
        long j = p.parity + 4 * t;
        try {
            Homog3 m1 = cross(assoc(j + 6), assoc(j - 2));
            Homog3 m2 = cross(assoc(j + 6), assoc(j - 6));
            v(cyc((j + 1) / 2, 2 * n)) =
                cross_ratio_quotient(p.rep(j + 8), p.rep(j + 4), m1, m2);
            Homog3 m3 = cross(assoc(j - 6), assoc(j + 2));
            Homog3 m4 = cross(assoc(j - 6), assoc(j + 6));
            v(cyc((j - 1) / 2, 2 * n)) =
                cross_ratio_quotient(p.rep(j - 8), p.rep(j - 4), m3, m4);
        } catch (const Error& e) {
            throw DegenerateConstruction("invariant at label " + std::to_string(j) + ": " +
                                         e.what());
        }
    }
    return v;
}

/// Coordinate degeneracy test: for point sequences the even products
/// x_j x_{j+1} (j even) are all 1; for line sequences the odd ones.
inline bool degeneracy_coords(const CoordVector& v, TwistedPolygon::Kind kind) {
    long start = (kind == TwistedPolygon::Kind::Points) ? 2 : 1;
    for (long j = start; j <= 2 * v.n; j += 2)
        if (v(j) * v(j + 1) != 1) return false;
    return true;
}

/// Geometric degeneracy of a closed polygon: each of the two
/// alternating label classes (step 8) lies on one line (is concurrent,
/// for line sequences).
inline bool is_degenerate(const TwistedPolygon& p) {
    for (long t = 0; t < p.n; ++t) {
        long j = p.parity + 4 * t;
        if (!is_zero(det3(p.rep(j), p.rep(j + 8), p.rep(j + 16)))) return false;
    }
    return true;
}

/// Exact agreement between the geometric involutions and the
/// coordinate formulas: on the parity-1 spaces alpha2 = delta2 and
/// alpha1 = delta1 delta2 delta1; on parity-3 the two coordinate maps
/// trade places.
inline bool coordinate_geometric_agreement(const TwistedPolygon& p) {
    CoordVector x = extract_invariants(p);
    CoordVector viaA2 = extract_invariants(delta2(p));
    CoordVector viaA1 = extract_invariants(delta1(delta2(delta1(p))));
    if (p.parity == 1)
        return viaA2 == alpha2(x) && viaA1 == alpha1(x);
    return viaA2 == alpha1(x) && viaA1 == alpha2(x);
}

} // namespace pentalab

#pragma once

#include <array>
#include <ostream>

#include "rational.hpp"

namespace pentalab {

/// Homogeneous coordinate triple over the rationals, identified up to
/// scale.  Points and lines share the representation; join/meet and
/// incidence are both the cross/dot product, so the same type serves
/// for both and `HPoint`/`HLine` are role-naming aliases.
struct Homog3 {
    std::array<Rat, 3> v{};

    Homog3() = default;
    Homog3(Rat a, Rat b, Rat c) : v{std::move(a), std::move(b), std::move(c)} {}

    const Rat& operator[](int i) const { return v[static_cast<size_t>(i)]; }
    Rat& operator[](int i) { return v[static_cast<size_t>(i)]; }

    bool is_zero() const { return sgn(v[0]) == 0 && sgn(v[1]) == 0 && sgn(v[2]) == 0; }

    /// Clear denominators and divide out the integer content; fixes the
    /// sign so the first nonzero coordinate is positive.  Projectively a
    /// no-op, but it keeps coordinate bit-length bounded during long
    /// exact iterations.
    Homog3 primitive() const {
        mpz_class l = 1;
        for (const auto& c : v) l = lcm(l, c.get_den());
        mpz_class g = 0;
        std::array<mpz_class, 3> num;
        for (int i = 0; i < 3; ++i) {
            num[static_cast<size_t>(i)] = v[static_cast<size_t>(i)].get_num() * (l / v[static_cast<size_t>(i)].get_den());
            g = gcd(g, num[static_cast<size_t>(i)]);
        }
        if (g == 0) return *this;
        int lead = 0;
        while (lead < 3 && num[static_cast<size_t>(lead)] == 0) ++lead;
        if (lead < 3 && num[static_cast<size_t>(lead)] < 0) g = -g;
        Homog3 out;
        for (int i = 0; i < 3; ++i) out[i] = Rat(num[static_cast<size_t>(i)] / g);
        return out;
    }
};

using HPoint = Homog3;
using HLine = Homog3;

inline Rat dot(const Homog3& a, const Homog3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Homog3 cross(const Homog3& a, const Homog3& b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

inline Rat det3(const Homog3& a, const Homog3& b, const Homog3& c) {
    return dot(cross(a, b), c);
}

/// Projective equality: u ~ v iff cross(u,v) = 0.
inline bool proj_equal(const Homog3& a, const Homog3& b) {
    return cross(a, b).is_zero();
}

inline std::ostream& operator<<(std::ostream& os, const Homog3& h) {
    return os << '[' << h[0] << ',' << h[1] << ',' << h[2] << ']';
}

inline HLine join(const HPoint& p, const HPoint& q) {
    Homog3 l = cross(p, q);
    if (l.is_zero()) throw CoincidentArguments("join of coincident points");
    return l;
}

inline HPoint meet(const HLine& l, const HLine& m) {
    Homog3 p = cross(l, m);
    if (p.is_zero()) throw CoincidentArguments("meet of coincident lines");
    return p;
}

/// Cross ratio x(a,b,c,d) = (a-c)(b-d) / ((a-b)(c-d)) of four field values.
inline Rat cross_ratio(const Rat& a, const Rat& b, const Rat& c, const Rat& d) {
    Rat den = (a - b) * (c - d);
    if (is_zero(den)) throw DegenerateQuadruple("cross_ratio: (a-b)(c-d) = 0");
    return (a - c) * (b - d) / den;
}

/// Cross ratio of four collinear points, computed coordinate-wise:
/// X = (w1 x w3)*(w2 x w4) / ((w1 x w2)*(w3 x w4)) with * the
/// componentwise product; the quotient is the constant vector (x,x,x)
/// and x agrees with the scalar cross ratio under any affine
/// parametrization of the line.
inline Rat cross_ratio_collinear(const HPoint& w1, const HPoint& w2,
                                 const HPoint& w3, const HPoint& w4) {
    if (!is_zero(det3(w1, w2, w3)) || !is_zero(det3(w1, w2, w4)) ||
        !is_zero(det3(w1, w3, w4)))
        throw NotCollinear("cross_ratio_collinear: points not on a common line");
    const Homog3* ws[4] = {&w1, &w2, &w3, &w4};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (proj_equal(*ws[i], *ws[j]))
                throw DegenerateQuadruple("cross_ratio_collinear: repeated point");
    Homog3 num = cross(w1, w3), num2 = cross(w2, w4);
    Homog3 den = cross(w1, w2), den2 = cross(w3, w4);
    Rat x;
    bool found = false;
    for (int i = 0; i < 3; ++i) {
        Rat d = den[i] * den2[i];
        Rat n = num[i] * num2[i];
        if (!is_zero(d)) {
            Rat xi = n / d;
            if (found && xi != x)
                throw DegenerateQuadruple("cross_ratio_collinear: inconsistent components");
            x = xi;
            found = true;
        } else if (!is_zero(n)) {
            throw DegenerateQuadruple("cross_ratio_collinear: zero denominator component");
        }
    }
    if (!found) throw DegenerateQuadruple("cross_ratio_collinear: denominator vanishes");
    return x;
}

/// The componentwise-quotient cross ratio
/// X = (w1 x w2)*(w3 x w4) / ((w1 x w3)*(w2 x w4)), which is the
/// reciprocal of the classical value; this is the normalization the
/// p/q invariant extraction is written in.
inline Rat cross_ratio_quotient(const HPoint& w1, const HPoint& w2,
                                const HPoint& w3, const HPoint& w4) {
    Rat x = cross_ratio_collinear(w1, w2, w3, w4);
    if (is_zero(x)) throw DegenerateQuadruple("cross_ratio_quotient: zero cross ratio");
    return 1 / x;
}

/// 3x3 rational matrix acting on homogeneous triples.
struct ProjMap {
    std::array<Rat, 9> m{}; // row major

    static ProjMap identity() {
        ProjMap t;
        t.at(0, 0) = 1; t.at(1, 1) = 1; t.at(2, 2) = 1;
        return t;
    }

    static ProjMap from_columns(const Homog3& c0, const Homog3& c1, const Homog3& c2) {
        ProjMap t;
        for (int r = 0; r < 3; ++r) {
            t.at(r, 0) = c0[r];
            t.at(r, 1) = c1[r];
            t.at(r, 2) = c2[r];
        }
        return t;
    }

    const Rat& at(int r, int c) const { return m[static_cast<size_t>(3 * r + c)]; }
    Rat& at(int r, int c) { return m[static_cast<size_t>(3 * r + c)]; }

    Homog3 apply(const Homog3& p) const {
        Homog3 q;
        for (int r = 0; r < 3; ++r)
            q[r] = at(r, 0) * p[0] + at(r, 1) * p[1] + at(r, 2) * p[2];
        return q;
    }

    Rat trace() const { return at(0, 0) + at(1, 1) + at(2, 2); }

    Rat det() const {
        return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1))
             - at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0))
             + at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    }

    ProjMap transpose() const {
        ProjMap t;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) t.at(r, c) = at(c, r);
        return t;
    }

    /// Cofactor matrix: equals det(T) * inverse-transpose, hence a lift
    /// of the dual map T* (the action induced on line coordinates).
    ProjMap cofactor() const {
        ProjMap t;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                int r1 = (r + 1) % 3, r2 = (r + 2) % 3;
                int c1 = (c + 1) % 3, c2 = (c + 2) % 3;
                t.at(r, c) = at(r1, c1) * at(r2, c2) - at(r1, c2) * at(r2, c1);
            }
        return t;
    }

    ProjMap inverse() const {
        Rat d = det();
        if (is_zero(d)) throw SingularMap("inverse of singular map");
        ProjMap adj = cofactor().transpose();
        for (auto& x : adj.m) x /= d;
        return adj;
    }

    ProjMap compose(const ProjMap& o) const { // (*this) after o
        ProjMap t;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                for (int k = 0; k < 3; ++k)
                    t.at(r, c) += at(r, k) * o.at(k, c);
        return t;
    }

    /// Divide out the common content of the entries (projectively a no-op).
    ProjMap primitive() const {
        mpz_class l = 1;
        for (const auto& x : m) l = lcm(l, x.get_den());
        mpz_class g = 0;
        std::array<mpz_class, 9> num;
        for (size_t i = 0; i < 9; ++i) {
            num[i] = m[i].get_num() * (l / m[i].get_den());
            g = gcd(g, num[i]);
        }
        if (g == 0) return *this;
        size_t lead = 0;
        while (lead < 9 && num[lead] == 0) ++lead;
        if (lead < 9 && num[lead] < 0) g = -g;
        ProjMap t;
        for (size_t i = 0; i < 9; ++i) t.m[i] = Rat(num[i] / g);
        return t;
    }
};

/// Projective equality of maps: proportional matrices.
inline bool proj_equal(const ProjMap& a, const ProjMap& b) {
    for (int i = 0; i < 9; ++i)
        for (int j = i + 1; j < 9; ++j)
            if (a.m[static_cast<size_t>(i)] * b.m[static_cast<size_t>(j)] !=
                a.m[static_cast<size_t>(j)] * b.m[static_cast<size_t>(i)])
                return false;
    return true;
}

namespace detail {
/// Map taking the standard frame e1,e2,e3,(1,1,1) to the given quadruple.
inline ProjMap frame_to(const std::array<HPoint, 4>& q) {
    // Solve [q0 q1 q2] * lambda = q3; the columns lambda_i * q_i then
    // send the frame to the quadruple.
    ProjMap cols = ProjMap::from_columns(q[0], q[1], q[2]);
    Rat d = cols.det();
    if (is_zero(d)) throw DegeneratePosition("three of the four points are collinear");
    Homog3 lambda = cols.cofactor().transpose().apply(q[3]); // det * cols^{-1} * q3
    for (int i = 0; i < 3; ++i)
        if (is_zero(lambda[i]))
            throw DegeneratePosition("fourth point collinear with two of the others");
    Homog3 c0 = q[0], c1 = q[1], c2 = q[2];
    for (int r = 0; r < 3; ++r) {
        c0[r] *= lambda[0];
        c1[r] *= lambda[1];
        c2[r] *= lambda[2];
    }
    return ProjMap::from_columns(c0, c1, c2);
}
} // namespace detail

/// The projective map sending src_i to dst_i (quadruples in general position).
inline ProjMap map_from_correspondence(const std::array<HPoint, 4>& src,
                                       const std::array<HPoint, 4>& dst) {
    ProjMap a = detail::frame_to(src);
    ProjMap b = detail::frame_to(dst);
    return b.compose(a.inverse()).primitive();
}

/// Monodromy invariants Omega_1 = tr^3/det of a lift, Omega_2 = Omega_1
/// of the dual map.  Both are independent of the chosen lift.
inline std::pair<Rat, Rat> omega_invariants(const ProjMap& t) {
    Rat d = t.det();
    if (is_zero(d)) throw SingularMap("omega_invariants of singular map");
    Rat tr = t.trace();
    Rat o1 = tr * tr * tr / d;
    ProjMap dual = t.cofactor(); // lift of T*
    Rat trd = dual.trace();
    Rat o2 = trd * trd * trd / dual.det();
    return {o1, o2};
}

} // namespace pentalab

#pragma once

#include <functional>
#include <map>
#include <utility>

#include "dynamics.hpp"

namespace pentalab {

/// Truncated sums O_r^s (r, s odd) and E_r^s (r, s even) over a
/// variable assignment j -> p_j / q_j.  O_r^s sums the admissible
/// monomials, on the integer line, whose odd indices lie strictly
/// between r and s; base rows O_r^s = 0 for r > s and
/// O_{s-2}^s = O_s^s = 1.  Values are memoized and produced by the
/// right recurrence
///   O_r^s = O_{r+2}^s - p_{r+2} O_{r+4}^s + P_{r+3} O_{r+6}^s,
/// with P_j = p_{j-1} q_j p_{j+1} (Q_j mirrors it for the E's).
class TruncatedTable {
public:
    TruncatedTable(std::function<Rat(long)> vars, long window)
        : var_(std::move(vars)), window_(window) {}

    /// Periodic assignment from x coordinates, p_{j+2n} = p_j.
    explicit TruncatedTable(const CoordVector& x)
        : var_([x](long j) { return x(j); }), window_(4 * x.n + 40) {}

    Rat var(long j) const { return var_(j); }

    Rat triple(long j) const { return var_(j - 1) * var_(j) * var_(j + 1); }

    /// O_r^s for odd arguments, E_r^s for even; both arguments must
    /// share the parity.
    Rat value(long r, long s) const {
        if ((r & 1L) != (s & 1L)) throw Error("truncated: mixed parity arguments");
        if (r < -window_ || r > window_ || s < -window_ || s > window_)
            throw WindowExceeded("truncated index outside the window");
        if (r > s) return 0;
        if (r == s || r == s - 2) return 1;
        auto key = std::make_pair(r, s);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Rat v = value(r + 2, s) - var_(r + 2) * value(r + 4, s) +
                triple(r + 3) * value(r + 6, s);
        memo_.emplace(key, v);
        return v;
    }

    /// The left recurrence of the same table, used as a cross-check.
    Rat value_left(long r, long s) const {
        if (r > s) return 0;
        if (r == s || r == s - 2) return 1;
        return value(r, s - 2) - var_(s - 2) * value(r, s - 4) +
               triple(s - 3) * value(r, s - 6);
    }

private:
    std::function<Rat(long)> var_;
    long window_;
    mutable std::map<std::pair<long, long>, Rat> memo_;
};

/// The point A_{4j+1} of the sequence reconstructed from a variable
/// assignment: three seeds and then the closed form over the truncated
/// table.
inline Homog3 reconstructed_point(const TruncatedTable& t, long j) {
    if (j == -1) return {0, 1, 0};
    if (j == 0) return {0, 1, 1};
    if (j == 1) return {1, 1, 1};
    if (j < -1) throw WindowExceeded("reconstructed_point: label below the seeds");
    Rat o1 = t.value(1, 2 * j - 1);
    Rat om1 = t.value(-1, 2 * j - 1);
    Rat o3 = t.value(3, 2 * j - 1);
    return {o1, om1 + t.var(1) * o3, om1};
}

/// The line B_{4j+3} of the associate sequence.
inline Homog3 reconstructed_line(const TruncatedTable& t, long j) {
    if (j == -2) return {0, 0, 1};
    if (j == -1) return {1, 0, 0};
    if (j == 0) return {0, 1, -1};
    if (j == 1) return {1, -1, 0};
    if (j < -2) throw WindowExceeded("reconstructed_line: label below the seeds");
    Rat e0 = t.value(0, 2 * j);
    Rat e2 = t.value(2, 2 * j);
    Rat e4 = t.value(4, 2 * j);
    return {-e2 + t.var(1) * t.var(2) * e4, e0, -e0 + e2};
}

/// Lift of the monodromy, as the column triple (V_1, V_2, V_3); uses
/// p_{2n+1} = p_1 through the periodic assignment.
inline ProjMap monodromy_lift(const CoordVector& x) {
    long n = x.n;
    TruncatedTable t(x);
    Homog3 a4n1 = reconstructed_point(t, n);      // A_{4n+1}
    Homog3 a4n5 = reconstructed_point(t, n + 1);  // A_{4n+5}
    Homog3 a4nm3 = reconstructed_point(t, n - 1); // A_{4n-3}
    Rat p1 = x(1), p2n1 = x(2 * n + 1);
    Rat c2 = x(2 * n - 1) * x(2 * n) * x(2 * n + 1);
    Homog3 v1, v2, v3;
    for (int r = 0; r < 3; ++r) {
        v1[r] = p1 * a4n5[r] - p2n1 * a4n1[r];
        v2[r] = c2 * a4nm3[r];
        v3[r] = p2n1 * a4n1[r] - c2 * a4nm3[r];
    }
    ProjMap lift = ProjMap::from_columns(v1, v2, v3);
    if (is_zero(lift.det())) throw SingularMap("monodromy lift is singular");
    return lift;
}

/// PolyPoint in the parity-1 space whose invariants are the given
/// 2n-periodic values.
inline TwistedPolygon build_polypoint(const CoordVector& x) {
    TwistedPolygon p;
    p.kind = TwistedPolygon::Kind::Points;
    p.parity = 1;
    p.n = x.n;
    TruncatedTable t(x);
    for (long j = 0; j < x.n; ++j) {
        Homog3 a = reconstructed_point(t, j).primitive();
        if (a.is_zero()) throw DegenerateConstruction("zero reconstructed point");
        p.reps.push_back(a);
    }
    p.monodromy = monodromy_lift(x).primitive();
    return p;
}

/// The associate PolyLine, in the parity-3 space; its representatives
/// transform by the dual (cofactor) matrix.
inline TwistedPolygon build_polyline(const CoordVector& x) {
    TwistedPolygon p;
    p.kind = TwistedPolygon::Kind::Lines;
    p.parity = 3;
    p.n = x.n;
    TruncatedTable t(x);
    for (long j = 0; j < x.n; ++j) {
        Homog3 b = reconstructed_line(t, j).primitive();
        if (b.is_zero()) throw DegenerateConstruction("zero reconstructed line");
        p.reps.push_back(b);
    }
    p.monodromy = monodromy_lift(x).cofactor().primitive();
    return p;
}

struct IncidenceReport {
    long checks = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// All six cross/dot identities relating the reconstructed A and B
/// sequences, plus the two underlying dot-product identities with the
/// truncated tables, for k up to kMax and d up to dMax.
inline IncidenceReport verify_incidence_identities(const TruncatedTable& t, long kMax,
                                                   long dMax) {
    IncidenceReport rep;
    auto fail = [&](const std::string& s) { rep.failures.push_back(s); };
    auto scaled = [](const Homog3& h, const Rat& c) {
        return Homog3{c * h[0], c * h[1], c * h[2]};
    };
    for (long k = 2; k <= kMax; ++k) {
        Homog3 a1 = reconstructed_point(t, k);     // A_{4k+1}
        Homog3 a2 = reconstructed_point(t, k + 1); // A_{4k+5}
        Homog3 b1 = reconstructed_line(t, k);      // B_{4k+3}
        Homog3 b2 = reconstructed_line(t, k + 1);  // B_{4k+7}
        Rat podd = 1, qeven = 1;
        for (long i = 1; i <= 2 * k - 1; i += 2) podd *= t.var(i);
        for (long i = 2; i <= 2 * k; i += 2) qeven *= t.var(i);
        Rat pq = podd * qeven; // p_1 q_2 ... p_{2k-1} q_{2k}

        ++rep.checks;
        if (cross(a1, a2).v != scaled(b1, podd).v)
            fail("A x A = p-product B at k=" + std::to_string(k));
        ++rep.checks;
        if (cross(b1, b2).v != scaled(a2, qeven).v)
            fail("B x B = q-product A at k=" + std::to_string(k));
        ++rep.checks;
        if (dot(a1, reconstructed_line(t, k + 1)) != pq)
            fail("A.B_{+4} at k=" + std::to_string(k));
        ++rep.checks;
        if (dot(b1, reconstructed_point(t, k + 2)) != pq * t.var(2 * k + 1))
            fail("B.A_{+6} at k=" + std::to_string(k));
        ++rep.checks;
        if (dot(a1, reconstructed_line(t, k + 2)) != pq)
            fail("A.B_{+8} at k=" + std::to_string(k));
        ++rep.checks;
        if (dot(b1, reconstructed_point(t, k + 3)) != pq * t.var(2 * k + 1))
            fail("B.A_{+10} at k=" + std::to_string(k));

        for (long d = 0; d <= dMax; ++d) {
            const Rat& head = pq; // p_1 q_2 ... p_{2k-1} q_{2k}
            ++rep.checks;
            if (dot(a1, reconstructed_line(t, k + d)) !=
                head * t.value(2 * k + 2, 2 * k + 2 * d))
                fail("A.B dot identity at k=" + std::to_string(k) + " d=" + std::to_string(d));
            ++rep.checks;
            if (dot(b1, reconstructed_point(t, k + 1 + d)) !=
                head * t.var(2 * k + 1) * t.value(2 * k + 3, 2 * k + 1 + 2 * d))
                fail("B.A dot identity at k=" + std::to_string(k) + " d=" + std::to_string(d));
        }
    }
    return rep;
}

/// Closed-form monodromy invariants from the coordinates.
inline std::pair<Rat, Rat> omega_from_invariants(const CoordVector& v) {
    long n = v.n;
    Rat on = eval_O(v, n), en = eval_E(v, n);
    if (is_zero(on) || is_zero(en))
        throw ZeroLeadingInvariant("omega_from_invariants: O_n or E_n vanishes");
    Rat so = 0, se = 0;
    for (long k = 0; k <= n / 2; ++k) {
        so += eval_O(v, k);
        se += eval_E(v, k);
    }
    return {so * so * so / (on * on * en), se * se * se / (en * en * on)};
}

} // namespace pentalab

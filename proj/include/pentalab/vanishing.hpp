#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include "invariants.hpp"

namespace pentalab {

using Cx = std::complex<double>;

inline Cx root_of_unity(long n, long e) {
    double a = 2.0 * std::numbers::pi * static_cast<double>(((e % n) + n) % n) /
               static_cast<double>(n);
    return {std::cos(a), std::sin(a)};
}

/// The printed membership condition for the index sequences is
/// "s_j <= s_{j+1} + 2", which is vacuous for increasing sequences;
/// the intended condition is the gap s_{j+1} >= s_j + 2 (the spreading
/// map below sends exactly these to nondecreasing sequences).  Both
/// readings are available and the tests assert which one is coherent.
enum class GapReading { AtLeastTwo, AsPrinted };

inline std::vector<std::vector<long>> lambda_sequences(long n, long v,
                                                       GapReading reading = GapReading::AtLeastTwo) {
    if (n < 5 || n % 2 == 0) throw OutOfRange("lambda needs odd n >= 5");
    if (v < 1 || v > (n - 3) / 2) throw OutOfRange("v outside [1,(n-3)/2]");
    std::vector<std::vector<long>> out;
    std::vector<long> cur;
    long step = (reading == GapReading::AtLeastTwo) ? 2 : 1;
    auto rec = [&](auto&& self, long lo, long left) -> void {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (long s = lo; s <= n - 2; ++s) {
            cur.push_back(s);
            self(self, s + step, left - 1);
            cur.pop_back();
        }
    };
    rec(rec, 2, v);
    return out;
}

inline Cx lambda_direct(long n, long v, GapReading reading = GapReading::AtLeastTwo) {
    Cx total = 0;
    for (const auto& seq : lambda_sequences(n, v, reading)) {
        long s = 0;
        for (long e : seq) s += e;
        total += root_of_unity(n, s);
    }
    return total;
}

/// A positive measure with integer atoms on the n-th roots of unity,
/// stored as sorted (exponent, multiplicity) pairs.
struct AdaptedMeasure {
    long n = 1;
    std::vector<std::pair<long, int>> atoms;

    AdaptedMeasure() = default;
    AdaptedMeasure(long nn, const std::vector<long>& exponents) : n(nn) {
        std::map<long, int> m;
        for (long e : exponents) ++m[((e % n) + n) % n];
        atoms.assign(m.begin(), m.end());
    }

    long mass() const {
        long total = 0;
        for (const auto& [e, m] : atoms) total += m;
        return total;
    }
    bool sparse() const {
        for (const auto& [e, m] : atoms)
            if (m > 1) return false;
        return true;
    }
    Cx eval() const {
        long s = 0;
        for (const auto& [e, m] : atoms) s += e * m;
        return root_of_unity(n, s);
    }
};

/// Product of measures is the sum of the measures.
inline AdaptedMeasure operator*(const AdaptedMeasure& a, const AdaptedMeasure& b) {
    std::map<long, int> m(a.atoms.begin(), a.atoms.end());
    for (const auto& [e, mult] : b.atoms) m[e] += mult;
    AdaptedMeasure out;
    out.n = a.n;
    out.atoms.assign(m.begin(), m.end());
    return out;
}

/// Element of the group ring generated by the adapted measures.  The
/// evaluation map sends a formal sum to the weighted sum of the
/// evaluations; this is the reading under which evaluation is additive
/// and a ring homomorphism.
struct MeasureSum {
    long n = 1;
    std::map<std::vector<std::pair<long, int>>, long> terms;

    explicit MeasureSum(long nn = 1) : n(nn) {}

    MeasureSum& add(const AdaptedMeasure& t, long coeff = 1) {
        long& c = terms[t.atoms];
        c += coeff;
        if (c == 0) terms.erase(t.atoms);
        return *this;
    }
    Cx eval() const {
        Cx total = 0;
        for (const auto& [atoms, coeff] : terms) {
            AdaptedMeasure t;
            t.n = n;
            t.atoms = atoms;
            total += static_cast<double>(coeff) * t.eval();
        }
        return total;
    }
};

inline MeasureSum operator+(const MeasureSum& a, const MeasureSum& b) {
    MeasureSum out = a;
    for (const auto& [atoms, coeff] : b.terms) {
        AdaptedMeasure t;
        t.n = a.n;
        t.atoms = atoms;
        out.add(t, coeff);
    }
    return out;
}

inline MeasureSum operator*(const MeasureSum& a, const MeasureSum& b) {
    MeasureSum out(a.n);
    for (const auto& [aa, ca] : a.terms)
        for (const auto& [ba, cb] : b.terms) {
            AdaptedMeasure ta, tb;
            ta.n = a.n;
            ta.atoms = aa;
            tb.n = a.n;
            tb.atoms = ba;
            out.add(ta * tb, ca * cb);
        }
    return out;
}

/// All mass-m measures supported on the given exponents (sparse = at
/// most one atom per point).
inline MeasureSum measures_on(long n, const std::vector<long>& exponents, long m,
                              bool sparseOnly = false) {
    MeasureSum out(n);
    std::vector<long> cur;
    auto rec = [&](auto&& self, size_t from, long left) -> void {
        if (left == 0) {
            out.add(AdaptedMeasure(n, cur));
            return;
        }
        for (size_t i = from; i < exponents.size(); ++i) {
            cur.push_back(exponents[i]);
            self(self, i + (sparseOnly ? 1 : 0), left - 1);
            cur.pop_back();
        }
    };
    rec(rec, 0, m);
    return out;
}

/// The full mass-j sum over all n-th roots.
inline MeasureSum theta(long n, long j) {
    std::vector<long> all;
    for (long e = 0; e < n; ++e) all.push_back(e);
    return measures_on(n, all, j);
}

/// Exponents of the roots inside the open arc A_v around -1 (strictly
/// between omega^v and omega^{-v}), and of its closed complement.
inline std::vector<long> arc_exponents(long n, long v) {
    std::vector<long> out;
    for (long e = v + 1; e <= n - 1 - v; ++e) out.push_back(e);
    return out;
}
inline std::vector<long> arc_complement_exponents(long n, long v) {
    std::vector<long> out;
    for (long e = -v; e <= v; ++e) out.push_back(((e % n) + n) % n);
    return out;
}

/// The spreading bijection: an index sequence with gaps >= 2 becomes a
/// nondecreasing support sequence inside A_v with the same total.
inline AdaptedMeasure compress(long n, const std::vector<long>& seq) {
    long v = static_cast<long>(seq.size());
    std::vector<long> exps;
    for (long j = 0; j < v; ++j) exps.push_back(seq[static_cast<size_t>(j)] + v - 1 - 2 * j);
    return AdaptedMeasure(n, exps);
}

/// Case v < n/4: evaluate through the sparse-complement route,
/// peeling the conjugate pair omega^{+-a} one arc at a time.  Every
/// value with a >= 1, w >= 1 is positive since 2cos(2 pi a / n) > 0 on
/// the range involved.
inline double sparse_complement_value(long n, long a, long w) {
    if (w < 0) return 0.0;
    if (a == 0) return (w <= 1) ? 1.0 : 0.0; // only the point 1 remains
    double c = 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(a) /
                              static_cast<double>(n));
    return sparse_complement_value(n, a - 1, w) + c * sparse_complement_value(n, a - 1, w - 1) +
           sparse_complement_value(n, a - 1, w - 2);
}

/// Case v >= n/4: the nested conjugation-symmetric arcs B_w hold the w
/// roots closest to -1 (w even; odd arcs cannot be symmetric for odd n).
/// Splitting a measure by its mass j on the outermost pair gives
///   <Psi(w,k',k)> = sum_j h_j(alpha) <Psi(w-2, k-j, k-j)>,
/// with h_j the complete homogeneous sum alpha^a conj(alpha)^(j-a).
inline double psi_arc_value(long n, long w, long kp, long k) {
    if (w % 2 != 0 || w < 0) throw OutOfRange("psi_arc_value needs even w >= 0");
    if (k == 0) return 1.0;
    if (w == 0) return 0.0;
    long outer = (n + 1) / 2 - w / 2; // exponent of the outermost pair
    double th = 2.0 * std::numbers::pi * static_cast<double>(outer) / static_cast<double>(n);
    double total = 0.0;
    for (long j = 0; j <= std::min(k, kp); ++j) {
        double h = 0.0;
        for (long a = 0; a <= j; ++a) h += std::cos(static_cast<double>(2 * a - j) * th);
        total += h * psi_arc_value(n, w - 2, k - j, k - j);
    }
    return total;
}

/// The measure-ring route to the same number as lambda_direct.
inline Cx lambda_via_measures(long n, long v) {
    if (n < 5 || n % 2 == 0) throw OutOfRange("lambda needs odd n >= 5");
    if (v < 1 || v > (n - 3) / 2) throw OutOfRange("v outside [1,(n-3)/2]");
    // the inclusion-exclusion against the full sums Theta picks up the
    // factor (-1)^v relating the two arcs
    if (4 * v < n)
        return {(v % 2 == 0 ? 1.0 : -1.0) * sparse_complement_value(n, v, v), 0.0};
    return {psi_arc_value(n, n - 1 - 2 * v, v, v), 0.0};
}

struct VanishingEntry {
    long v = 0;
    Cx lambda;
    double margin = 0.0;          // |lambda - v|
    double path_disagreement = 0; // |direct - measure route|
};

struct VanishingReport {
    long n = 0;
    std::vector<VanishingEntry> entries;
    bool ok = true;
};

inline VanishingReport vanishing_check(long n) {
    VanishingReport rep;
    rep.n = n;
    for (long v = 1; v <= (n - 3) / 2; ++v) {
        VanishingEntry e;
        e.v = v;
        e.lambda = lambda_direct(n, v);
        e.margin = std::abs(e.lambda - Cx(static_cast<double>(v), 0.0));
        e.path_disagreement = std::abs(e.lambda - lambda_via_measures(n, v));
        rep.ok = rep.ok && e.margin > 1e-9 && e.path_disagreement < 1e-9;
        rep.entries.push_back(e);
    }
    return rep;
}

/// Exact rank of a rational matrix by Gaussian elimination.
inline long matrix_rank(std::vector<std::vector<Rat>> m) {
    long rows = static_cast<long>(m.size());
    if (rows == 0) return 0;
    long cols = static_cast<long>(m[0].size());
    long rank = 0;
    for (long c = 0; c < cols && rank < rows; ++c) {
        long pivot = -1;
        for (long r = rank; r < rows; ++r)
            if (!is_zero(m[static_cast<size_t>(r)][static_cast<size_t>(c)])) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[static_cast<size_t>(pivot)], m[static_cast<size_t>(rank)]);
        for (long r = rank + 1; r < rows; ++r) {
            Rat f = m[static_cast<size_t>(r)][static_cast<size_t>(c)] /
                    m[static_cast<size_t>(rank)][static_cast<size_t>(c)];
            for (long cc = c; cc < cols; ++cc)
                m[static_cast<size_t>(r)][static_cast<size_t>(cc)] -=
                    f * m[static_cast<size_t>(rank)][static_cast<size_t>(cc)];
        }
        ++rank;
    }
    return rank;
}

/// Jacobian of the invariant tuple at x: one row per invariant, one
/// column per coordinate, all partials exact.
inline std::vector<std::vector<Rat>> invariant_jacobian(const CoordVector& x) {
    long n = x.n;
    std::vector<std::pair<long, Parity>> funcs;
    for (long k = 1; k <= n / 2; ++k) funcs.emplace_back(k, Parity::Odd);
    for (long k = 1; k <= n / 2; ++k) funcs.emplace_back(k, Parity::Even);
    funcs.emplace_back(n, Parity::Odd);
    funcs.emplace_back(n, Parity::Even);
    std::vector<std::vector<Rat>> jac;
    for (const auto& [k, par] : funcs) {
        std::vector<Rat> row;
        for (long j = 1; j <= 2 * n; ++j) row.push_back(partial_derivative(x, k, par, j));
        jac.push_back(std::move(row));
    }
    return jac;
}

struct RankReport {
    long n = 0;
    long rank = 0;
    long expected = 0;
    bool pass = false;
};

/// Full rank of the Jacobian at one generic rational point certifies
/// algebraic independence; a deficient random point is resampled since
/// a single good point suffices.
inline RankReport independence_check(long n, Rng& rng, int retries = 3) {
    RankReport rep;
    rep.n = n;
    rep.expected = 2 * (n / 2) + 2;
    for (int t = 0; t < retries; ++t) {
        CoordVector x = random_coords(n, rng);
        rep.rank = matrix_rank(invariant_jacobian(x));
        rep.pass = rep.rank == rep.expected;
        if (rep.pass) break;
    }
    return rep;
}

/// H_k = O_k restricted to the odd embedding: signed sum over the
/// k-element cyclically non-adjacent subsets of Z_n, and the full
/// product for k = n.  Multilinear, so partials are unit differences.
inline Cx eval_H(long n, long k, const std::vector<Cx>& z) {
    if (static_cast<long>(z.size()) != n) throw OutOfRange("eval_H: wrong dimension");
    if (k == n) {
        Cx p = 1;
        for (const Cx& v : z) p *= v;
        return p;
    }
    if (!weight_supported(n, k)) throw UnsupportedWeight("eval_H: weight out of range");
    Cx total = 0;
    std::vector<long> chosen;
    auto rec = [&](auto&& self, long from, long left) -> void {
        if (left == 0) {
            // cyclic adjacency: first and last cannot both be chosen
            if (chosen.size() >= 2 && chosen.front() == 0 &&
                chosen.back() == n - 1)
                return;
            Cx term = (k % 2 == 1) ? Cx(-1, 0) : Cx(1, 0);
            for (long i : chosen) term *= z[static_cast<size_t>(i)];
            total += term;
            return;
        }
        for (long i = from; i <= n - left; ++i) {
            chosen.push_back(i);
            self(self, i + 2, left - 1);
            chosen.pop_back();
        }
    };
    rec(rec, 0, k);
    return total;
}

inline std::vector<Cx> grad_H(long n, long k, const std::vector<Cx>& z) {
    std::vector<Cx> g;
    for (long j = 0; j < n; ++j) {
        std::vector<Cx> z1 = z, z0 = z;
        z1[static_cast<size_t>(j)] = 1;
        z0[static_cast<size_t>(j)] = 0;
        g.push_back(eval_H(n, k, z1) - eval_H(n, k, z0));
    }
    return g;
}

} // namespace pentalab

#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "dynamics.hpp"

namespace pentalab {

/// One doubly periodic horizontal layer of the octahedral tiling.  The
/// cell (i, j) at height z holds the label of the vertex
/// (2i + z%2, 2j + z%2, z); indices wrap mod the period in both
/// directions.
struct LayerGrid {
    long period = 1;
    long height = 0;
    std::vector<Rat> cells;

    LayerGrid() = default;
    LayerGrid(long n, long z, Rat fill = Rat(0))
        : period(n), height(z),
          cells(static_cast<size_t>(n * n), std::move(fill)) {}

    Rat& at(long i, long j) {
        long ii = ((i % period) + period) % period;
        long jj = ((j % period) + period) % period;
        return cells[static_cast<size_t>(ii * period + jj)];
    }
    const Rat& at(long i, long j) const {
        return const_cast<LayerGrid*>(this)->at(i, j);
    }
};

/// The octahedron rule V_t V_b = V_nw V_se - V_sw V_ne, developed one
/// layer upward.  The model octahedron has bottom (0,0,0), equatorial
/// ring (+-1,+-1,1) and top (0,0,2); in matrix terms the northwest ring
/// vertex sits at (-1,-1,1), matching Dodgson's identity
/// det(M) det(M_C) = det(M_NW) det(M_SE) - det(M_SW) det(M_NE).
inline LayerGrid octahedron_step(const LayerGrid& lower, const LayerGrid& current) {
    if (lower.period != current.period || lower.height != current.height - 1)
        throw Error("octahedron_step: layers are not adjacent");
    long n = current.period;
    LayerGrid top(n, current.height + 1);
    bool odd = (current.height & 1L) != 0;
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            const Rat& b = lower.at(i, j);
            if (is_zero(b))
                throw SingularInterior("zero bottom label at (" + std::to_string(i) +
                                       "," + std::to_string(j) + "," +
                                       std::to_string(lower.height) + ")");
            Rat v = odd ? current.at(i - 1, j - 1) * current.at(i, j) -
                              current.at(i, j - 1) * current.at(i - 1, j)
                        : current.at(i, j) * current.at(i + 1, j + 1) -
                              current.at(i + 1, j) * current.at(i, j + 1);
            top.at(i, j) = v / b;
        }
    return top;
}

/// Determinant by condensation on the pyramid of connected minors.
/// Layer k holds the determinants of all (k+1)x(k+1) connected minors;
/// the octahedron rule divides by the layer two below, so every
/// interior connected minor must be nonzero.  No perturbation is done
/// here; see dodgson_det_robust.
inline Rat dodgson_det(const std::vector<std::vector<Rat>>& m) {
    long sz = static_cast<long>(m.size());
    if (sz == 0) throw Error("dodgson_det: empty matrix");
    for (const auto& row : m)
        if (static_cast<long>(row.size()) != sz) throw Error("dodgson_det: not square");
    if (sz == 1) return m[0][0];
    std::vector<Rat> prev2(static_cast<size_t>((sz + 1) * (sz + 1)), Rat(1));
    std::vector<Rat> prev(static_cast<size_t>(sz * sz));
    for (long i = 0; i < sz; ++i)
        for (long j = 0; j < sz; ++j)
            prev[static_cast<size_t>(i * sz + j)] = m[static_cast<size_t>(i)][static_cast<size_t>(j)];
    for (long k = 1; k < sz; ++k) {
        long t = sz - k; // t x t cells in the new layer
        long tp = t + 1;
        std::vector<Rat> next(static_cast<size_t>(t * t));
        for (long i = 0; i < t; ++i)
            for (long j = 0; j < t; ++j) {
                const Rat& div = prev2[static_cast<size_t>((i + 1) * (tp + 1) + (j + 1))];
                if (is_zero(div))
                    throw SingularInterior("zero interior minor of size " +
                                           std::to_string(k - 1) + " at (" +
                                           std::to_string(i + 1) + "," +
                                           std::to_string(j + 1) + ")");
                next[static_cast<size_t>(i * t + j)] =
                    (prev[static_cast<size_t>(i * tp + j)] *
                         prev[static_cast<size_t>((i + 1) * tp + (j + 1))] -
                     prev[static_cast<size_t>((i + 1) * tp + j)] *
                         prev[static_cast<size_t>(i * tp + (j + 1))]) /
                    div;
            }
        prev2.swap(prev);
        prev.swap(next);
    }
    return prev[0];
}

/// Fraction-free Bareiss determinant over the integers after clearing
/// row denominators; the independent oracle for condensation.
inline Rat det_bareiss(const std::vector<std::vector<Rat>>& m) {
    long sz = static_cast<long>(m.size());
    if (sz == 0) throw Error("det_bareiss: empty matrix");
    std::vector<std::vector<mpz_class>> a(static_cast<size_t>(sz));
    mpz_class scale = 1;
    for (long i = 0; i < sz; ++i) {
        if (static_cast<long>(m[static_cast<size_t>(i)].size()) != sz)
            throw Error("det_bareiss: not square");
        mpz_class l = 1;
        for (const Rat& x : m[static_cast<size_t>(i)]) l = lcm(l, x.get_den());
        scale *= l;
        for (const Rat& x : m[static_cast<size_t>(i)])
            a[static_cast<size_t>(i)].push_back(x.get_num() * (l / x.get_den()));
    }
    mpz_class sign = 1, denom = 1;
    for (long k = 0; k < sz - 1; ++k) {
        if (a[static_cast<size_t>(k)][static_cast<size_t>(k)] == 0) {
            long p = k + 1;
            while (p < sz && a[static_cast<size_t>(p)][static_cast<size_t>(k)] == 0) ++p;
            if (p == sz) return 0;
            std::swap(a[static_cast<size_t>(k)], a[static_cast<size_t>(p)]);
            sign = -sign;
        }
        for (long i = k + 1; i < sz; ++i)
            for (long j = k + 1; j < sz; ++j) {
                mpz_class t = a[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                                  a[static_cast<size_t>(k)][static_cast<size_t>(k)] -
                              a[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                                  a[static_cast<size_t>(k)][static_cast<size_t>(j)];
                a[static_cast<size_t>(i)][static_cast<size_t>(j)] = t / denom;
            }
        denom = a[static_cast<size_t>(k)][static_cast<size_t>(k)];
    }
    Rat d(sign * a[static_cast<size_t>(sz - 1)][static_cast<size_t>(sz - 1)], scale);
    d.canonicalize();
    return d;
}

/// Condensation with shuffle retries: on SingularInterior the rows and
/// columns are randomly permuted (sign-tracked) and the result is
/// certified against the Bareiss oracle before being returned.
inline Rat dodgson_det_robust(const std::vector<std::vector<Rat>>& m, Rng& rng,
                              int attempts = 24) {
    Rat oracle = det_bareiss(m);
    long sz = static_cast<long>(m.size());
    std::vector<long> rows(static_cast<size_t>(sz)), cols(static_cast<size_t>(sz));
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    for (int t = 0; t < attempts; ++t) {
        try {
            std::vector<std::vector<Rat>> p(static_cast<size_t>(sz));
            for (long i = 0; i < sz; ++i)
                for (long j = 0; j < sz; ++j)
                    p[static_cast<size_t>(i)].push_back(
                        m[static_cast<size_t>(rows[static_cast<size_t>(i)])]
                         [static_cast<size_t>(cols[static_cast<size_t>(j)])]);
            Rat d = dodgson_det(p);
            int inv = 0;
            for (long i = 0; i < sz; ++i)
                for (long j = i + 1; j < sz; ++j) {
                    inv += rows[static_cast<size_t>(i)] > rows[static_cast<size_t>(j)];
                    inv += cols[static_cast<size_t>(i)] > cols[static_cast<size_t>(j)];
                }
            if (inv % 2 != 0) d = -d;
            if (d != oracle)
                throw Error("dodgson_det_robust: condensation disagrees with the oracle");
            return d;
        } catch (const SingularInterior&) {
            for (long i = sz - 1; i > 0; --i) {
                std::swap(rows[static_cast<size_t>(i)], rows[static_cast<size_t>(rng.below(static_cast<uint64_t>(i + 1)))]);
                std::swap(cols[static_cast<size_t>(i)], cols[static_cast<size_t>(rng.below(static_cast<uint64_t>(i + 1)))]);
            }
        }
    }
    throw SingularInterior("dodgson_det_robust: all shuffles hit singular interiors");
}

/// Projection pi(x,y,z) = (2x - y, z) carrying the octahedral tiling
/// onto the planar triangulation; defined on tiling vertices only
/// (coordinates all even or all odd).
inline std::pair<long, long> project_pi(long x, long y, long z) {
    bool even = (x % 2 == 0) && (y % 2 == 0) && (z % 2 == 0);
    bool oddv = (x % 2 != 0) && (y % 2 != 0) && (z % 2 != 0);
    if (!even && !oddv)
        throw NotATilingVertex("(" + std::to_string(x) + "," + std::to_string(y) +
                               "," + std::to_string(z) + ") has mixed parity");
    return {2 * x - y, z};
}

/// One horizontal row of a circulent condensation pushed into the
/// plane: labels C(u, z) on u = 2i + z%2, `period` cells per period
/// (u-period 2*period).
struct PlanarRow {
    long period = 1;
    long height = 0;
    std::vector<Rat> cells;

    PlanarRow() = default;
    PlanarRow(long m, long z, Rat fill = Rat(0))
        : period(m), height(z), cells(static_cast<size_t>(m), std::move(fill)) {}

    Rat& at(long i) {
        return cells[static_cast<size_t>(((i % period) + period) % period)];
    }
    const Rat& at(long i) const { return const_cast<PlanarRow*>(this)->at(i); }

    bool constant() const {
        for (const Rat& c : cells)
            if (c != cells[0]) return false;
        return true;
    }
};

/// The planar image of the octahedron rule under pi:
/// C(u,z+1) C(u,z-1) = C(u-1,z) C(u+1,z) - C(u+3,z) C(u-3,z).
inline PlanarRow planar_step(const PlanarRow& below, const PlanarRow& cur) {
    if (below.period != cur.period || below.height != cur.height - 1)
        throw Error("planar_step: rows are not adjacent");
    PlanarRow top(cur.period, cur.height + 1);
    bool curOdd = (cur.height & 1L) != 0;
    for (long i = 0; i < cur.period; ++i) {
        const Rat& b = below.at(i);
        if (is_zero(b))
            throw SingularInterior("zero label below position " + std::to_string(i));
        Rat v = curOdd ? cur.at(i - 1) * cur.at(i) - cur.at(i + 1) * cur.at(i - 2)
                       : cur.at(i) * cur.at(i + 1) - cur.at(i + 2) * cur.at(i - 1);
        top.at(i) = v / b;
    }
    return top;
}

/// The same rule developed downward; the ring expression around a
/// vertical edge does not depend on the direction of development.
inline PlanarRow planar_step_down(const PlanarRow& cur, const PlanarRow& above) {
    if (above.period != cur.period || above.height != cur.height + 1)
        throw Error("planar_step_down: rows are not adjacent");
    PlanarRow bottom(cur.period, cur.height - 1);
    bool curOdd = (cur.height & 1L) != 0;
    for (long i = 0; i < cur.period; ++i) {
        const Rat& a = above.at(i);
        if (is_zero(a))
            throw SingularInterior("zero label above position " + std::to_string(i));
        Rat v = curOdd ? cur.at(i - 1) * cur.at(i) - cur.at(i + 1) * cur.at(i - 2)
                       : cur.at(i) * cur.at(i + 1) - cur.at(i + 2) * cur.at(i - 1);
        bottom.at(i) = v / a;
    }
    return bottom;
}

/// Vertex labels c_k along one zigzag strip of the triangulation (the
/// vertices of two adjacent rows, read left to right), k half-integer
/// with period 2n; cell i holds c_{i + 1/2}, the label at u = i.
struct CirculentLabelling {
    long n = 1;
    std::vector<Rat> c;

    CirculentLabelling() = default;
    explicit CirculentLabelling(long nn) : n(nn), c(static_cast<size_t>(2 * nn), Rat(1)) {}

    /// Access by the doubled index 2k (odd).
    Rat& at2(long twok) {
        if ((twok & 1L) == 0) throw Error("circulent label index must be a half-integer");
        long m = 2 * n;
        long i = (twok - 1) / 2;
        return c[static_cast<size_t>(((i % m) + m) % m)];
    }
    const Rat& at2(long twok) const { return const_cast<CirculentLabelling*>(this)->at2(twok); }
};

/// The zigzag strip over two adjacent rows: the label at u = i comes
/// from whichever row owns that column, alternating bottom and top.
inline CirculentLabelling strip_labelling(const PlanarRow& below, const PlanarRow& cur) {
    if (below.period != cur.period || below.height != cur.height - 1)
        throw Error("strip_labelling: rows are not adjacent");
    long m = below.period;
    CirculentLabelling cl(m);
    long pz = below.height & 1L;
    for (long i = 0; i < 2 * m; ++i)
        cl.c[static_cast<size_t>(i)] =
            (i % 2 == pz) ? below.at((i - pz) / 2) : cur.at((i - (1 - pz)) / 2);
    return cl;
}

using PentagramLabelling = CoordVector;

/// The edge labels read off a circulent strip:
/// x_j = c_{j-5/2} c_{j+5/2} / (c_{j-3/2} c_{j+3/2}).
inline PentagramLabelling circulent_to_pentagram(const CirculentLabelling& cl) {
    for (const Rat& v : cl.c)
        if (is_zero(v)) throw ZeroVertexLabel("zero circulent label");
    CoordVector x(cl.n);
    for (long j = 1; j <= 2 * cl.n; ++j)
        x(j) = cl.at2(2 * j - 5) * cl.at2(2 * j + 5) /
               (cl.at2(2 * j - 3) * cl.at2(2 * j + 3));
    return x;
}

namespace detail {
/// Exact k-th root of a rational, or failure.
inline bool exact_root(const Rat& q, unsigned long k, Rat& out) {
    mpz_class num = q.get_num(), den = q.get_den();
    if (num < 0 && k % 2 == 0) return false;
    mpz_class rn, rd;
    if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k) == 0) return false;
    if (mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k) == 0) return false;
    out = Rat(rn, rd);
    out.canonicalize();
    return true;
}
} // namespace detail

/// Lift a pentagram labelling to a circulent strip.  Needs
/// n = 4m and all four mod-4 products equal to 1; builds the
/// intermediate r sequence with x_j = r_{j-2} / r_{j+2}, closes it up
/// over the rationals, then telescopes c_{k+1} = c_k / r_{k+1/2}.
/// The rho_j products are normalized to 1 when the required exact
/// roots exist (they always do on the gauge orbit of a rational
/// circulent row); otherwise the lift is returned in an arbitrary
/// gauge.
inline CirculentLabelling lift_pentagram(const PentagramLabelling& x) {
    long n = x.n;
    if (n % 4 != 0) throw UnsupportedPeriod("lift needs n = 4m, got n = " + std::to_string(n));
    auto f = mod4_products(x);
    for (int j = 0; j < 4; ++j)
        if (f[static_cast<size_t>(j)] != 1)
            throw NotLiftable("f_" + std::to_string(j + 1) + " = " +
                              rat_to_string(f[static_cast<size_t>(j)]) + ", not 1");
    std::vector<Rat> r(static_cast<size_t>(2 * n + 1), Rat(1)); // 1-based
    for (long cls = 1; cls <= 4; ++cls)
        for (long j = cls; j + 4 <= 2 * n; j += 4)
            r[static_cast<size_t>(j + 4)] = r[static_cast<size_t>(j)] / x(j + 2);
    // close the telescoping c chain: the total product of the r's must be 1
    Rat total = 1;
    for (long j = 1; j <= 2 * n; ++j) total *= r[static_cast<size_t>(j)];
    Rat s;
    if (!detail::exact_root(1 / total, static_cast<unsigned long>(n / 2), s))
        throw NotLiftable("r-chain product " + rat_to_string(total) +
                          " has no exact rational root of degree " + std::to_string(n / 2));
    for (long j = 1; j <= 2 * n; j += 4) r[static_cast<size_t>(j)] *= s;
    // best-effort normalization of the per-class rho products
    std::array<Rat, 4> t;
    bool allRoots = true;
    for (long cls = 1; cls <= 4 && allRoots; ++cls) {
        Rat rho = 1;
        for (long j = cls; j <= 2 * n; j += 4) rho *= r[static_cast<size_t>(j)];
        allRoots = detail::exact_root(1 / rho, static_cast<unsigned long>(n / 2),
                                      t[static_cast<size_t>(cls - 1)]);
    }
    if (allRoots)
        for (long j = 1; j <= 2 * n; ++j)
            r[static_cast<size_t>(j)] *= t[static_cast<size_t>((j - 1) % 4)];
    CirculentLabelling cl(n);
    Rat cur = 1;
    cl.at2(1) = cur; // c_{1/2}
    for (long i = 1; i < 2 * n; ++i) {
        cur /= r[static_cast<size_t>(i)];
        cl.at2(2 * i + 1) = cur;
    }
    return cl;
}

/// Axis-parallel closed polygon: 4N vertices from 2N distinct xis and
/// 2N distinct etas, v_{2i-1} = (xi_i, eta_i), v_{2i} = (xi_{i+1}, eta_i).
struct RectilinearPolygon {
    long N = 0;
    std::vector<Homog3> vertices; // 4N of them, consecutive
    TwistedPolygon edge_lines;    // the degenerate PolyLine of the sides
};

inline RectilinearPolygon rectilinear_polygon(long N, Rng& rng) {
    if (N < 3) throw OutOfRange("rectilinear_polygon needs N >= 3");
    RectilinearPolygon p;
    p.N = N;
    auto distinct = [&](long count) {
        std::vector<Rat> out;
        while (static_cast<long>(out.size()) < count) {
            Rat v = random_rat(rng, 60, 7);
            bool fresh = true;
            for (const Rat& u : out) fresh = fresh && u != v;
            if (fresh) out.push_back(v);
        }
        return out;
    };
    std::vector<Rat> xi = distinct(2 * N), eta = distinct(2 * N);
    for (long i = 0; i < 2 * N; ++i) {
        p.vertices.push_back(Homog3{xi[static_cast<size_t>(i)], eta[static_cast<size_t>(i)], 1});
        p.vertices.push_back(
            Homog3{xi[static_cast<size_t>((i + 1) % (2 * N))], eta[static_cast<size_t>(i)], 1});
    }
    p.edge_lines.kind = TwistedPolygon::Kind::Lines;
    p.edge_lines.parity = 1;
    p.edge_lines.n = 4 * N;
    for (long i = 0; i < 2 * N; ++i) {
        // horizontal side at eta_i, then the vertical side at xi_{i+1}
        p.edge_lines.reps.push_back(Homog3{0, 1, -eta[static_cast<size_t>(i)]});
        p.edge_lines.reps.push_back(
            Homog3{1, 0, -xi[static_cast<size_t>((i + 1) % (2 * N))]});
    }
    return p;
}

namespace detail {
inline bool all_collinear(const std::vector<Homog3>& pts) {
    for (size_t i = 2; i < pts.size(); ++i)
        if (!is_zero(det3(pts[0], pts[1], pts[i]))) return false;
    return true;
}
} // namespace detail

/// Both alternating vertex classes of a consecutive vertex list lie on
/// lines.
inline bool collapsed(const std::vector<Homog3>& verts) {
    std::vector<Homog3> odd, even;
    for (size_t i = 0; i < verts.size(); ++i)
        (i % 2 ? odd : even).push_back(verts[i]);
    return detail::all_collinear(odd) && detail::all_collinear(even);
}

/// One pentagram step on a closed polygon given by consecutive
/// vertices: short diagonals D_i = (P_{i-1} P_{i+1}), new vertices
/// Q_i = D_i cap D_{i+1}.
inline std::vector<Homog3> pentagram_step(const std::vector<Homog3>& verts) {
    size_t m = verts.size();
    std::vector<Homog3> diag(m), out(m);
    try {
        for (size_t i = 0; i < m; ++i)
            diag[i] = join(verts[(i + m - 1) % m], verts[(i + 1) % m]);
        for (size_t i = 0; i < m; ++i)
            out[i] = meet(diag[i], diag[(i + 1) % m]).primitive();
    } catch (const CoincidentArguments& e) {
        throw MapSingularity(std::string("pentagram_step: ") + e.what());
    }
    return out;
}

struct CollapseReport {
    long collapse_step = -1;        // pentagram iterations until both classes collinear
    std::vector<bool> trace;        // degeneracy after each step
    long fitted_parameter = -1;     // x with collapse_step = 2x - 2, if integral
    std::string convention;         // which documented counting convention fits
    long constant_layer = -1;       // condensation-side: first constant or zero row upward
    long bottom_layer = 100;        // first constant or zero row downward
    long sandwich_width = -1;       // live rows strictly between the two boundaries
};

/// The full collapse experiment of a rectilinear 4N-gon: exact
/// pentagram iteration until both alternating vertex classes are
/// collinear, plus the condensation-side prediction (lift the edge
/// invariants to a circulent row over an all-ones row and develop
/// upward until a constant row appears).
inline CollapseReport collapse_experiment(const RectilinearPolygon& p, long maxSteps = -1) {
    CollapseReport rep;
    long N = p.N;
    if (maxSteps < 0) maxSteps = 4 * N + 4;
    std::vector<Homog3> verts = p.vertices;
    for (long s = 1; s <= maxSteps; ++s) {
        verts = pentagram_step(verts);
        bool deg = collapsed(verts);
        rep.trace.push_back(deg);
        if (deg) {
            rep.collapse_step = s;
            break;
        }
    }
    if (rep.collapse_step > 0 && rep.collapse_step % 2 == 0) {
        rep.fitted_parameter = (rep.collapse_step + 2) / 2;
        if (rep.fitted_parameter == N)
            rep.convention = "full pentagram iterations, parameter N";
        else if (rep.fitted_parameter == 2 * N)
            rep.convention = "half-step count, parameter 2N";
        else
            rep.convention = "no documented convention fits";
    }
    // condensation side: lift the edge labels to a zigzag strip and
    // develop the circulent condensation in both directions, reporting
    // the boundary rows of the finite sandwich
    try {
        CoordVector x = extract_invariants(p.edge_lines);
        CirculentLabelling cl = lift_pentagram(x);
        auto terminal = [](const PlanarRow& r) {
            bool zero = true;
            for (const Rat& v : r.cells) zero = zero && is_zero(v);
            return zero || r.constant();
        };
        PlanarRow r0(x.n, 0), r1(x.n, 1);
        for (long i = 0; i < x.n; ++i) {
            r0.at(i) = cl.c[static_cast<size_t>(2 * i)];
            r1.at(i) = cl.c[static_cast<size_t>(2 * i + 1)];
        }
        PlanarRow below = r0, cur = r1;
        for (long z = 2; z <= 2 * x.n + 2; ++z) {
            PlanarRow next = planar_step(below, cur);
            below = cur;
            cur = next;
            if (terminal(cur)) {
                rep.constant_layer = z;
                break;
            }
        }
        cur = r1;
        PlanarRow lower = r0;
        for (long z = -1; z >= -2 * x.n - 2; --z) {
            PlanarRow next = planar_step_down(lower, cur);
            cur = lower;
            lower = next;
            if (terminal(lower)) {
                rep.bottom_layer = z;
                break;
            }
        }
        if (rep.constant_layer > 0 && rep.bottom_layer < 0)
            rep.sandwich_width = rep.constant_layer - rep.bottom_layer - 1;
    } catch (const Error&) {
        rep.constant_layer = -1;
    }
    return rep;
}

} // namespace pentalab

#include <catch2/catch_amalgamated.hpp>

#include <pentalab/vanishing.hpp>

using namespace pentalab;

namespace {

constexpr double kTol = 1e-9;

AdaptedMeasure random_measure(long n, long mass, Rng& rng) {
    std::vector<long> exps;
    for (long i = 0; i < mass; ++i) exps.push_back(rng.range(0, n - 1));
    return AdaptedMeasure(n, exps);
}

/// Restriction of a formal sum to the terms putting mass at most kp on
/// the given exponents.
Cx eval_restricted(const MeasureSum& s, const std::vector<long>& outer, long kp) {
    Cx total = 0;
    for (const auto& [atoms, coeff] : s.terms) {
        long outerMass = 0;
        for (const auto& [e, m] : atoms)
            for (long o : outer)
                if (e == o) outerMass += m;
        if (outerMass > kp) continue;
        AdaptedMeasure t;
        t.n = s.n;
        t.atoms = atoms;
        total += static_cast<double>(coeff) * t.eval();
    }
    return total;
}

} // namespace

TEST_CASE("direct lambda values at small n") {
    CHECK(std::abs(lambda_direct(5, 1) - Cx(2 * std::cos(4 * std::numbers::pi / 5), 0)) < kTol);
    CHECK(std::abs(lambda_direct(7, 1) - Cx(-1 - 2 * std::cos(2 * std::numbers::pi / 7), 0)) <
          kTol);
    // under the gap reading the three pairs (2,4), (2,5), (3,5) survive
    CHECK(lambda_sequences(7, 2).size() == 3);
    CHECK(std::abs(lambda_direct(7, 2) - Cx(1 + 2 * std::cos(2 * std::numbers::pi / 7), 0)) <
          kTol);
    CHECK_THROWS_AS(lambda_direct(6, 1), OutOfRange);
    CHECK_THROWS_AS(lambda_direct(9, 4), OutOfRange);
}

TEST_CASE("evaluation is a ring homomorphism") {
    Rng rng(501);
    long n = 7;
    for (int trial = 0; trial < 5; ++trial) {
        MeasureSum a(n), b(n);
        for (int i = 0; i < 4; ++i) {
            a.add(random_measure(n, rng.range(0, 3), rng), rng.range(-3, 3));
            b.add(random_measure(n, rng.range(0, 3), rng), rng.range(-3, 3));
        }
        CHECK(std::abs((a * b).eval() - a.eval() * b.eval()) < kTol);
        CHECK(std::abs((a + b).eval() - (a.eval() + b.eval())) < kTol);
    }
}

TEST_CASE("full mass sums evaluate to zero") {
    for (long n : {5L, 7L})
        for (long j = 1; j <= 3; ++j) CHECK(std::abs(theta(n, j).eval()) < kTol);
    CHECK(std::abs(theta(5, 0).eval() - Cx(1, 0)) < kTol);
}

TEST_CASE("the spreading map compresses the index sequences onto the arc") {
    for (long n : {9L, 11L})
        for (long v = 1; v <= 3; ++v) {
            MeasureSum psi = measures_on(n, arc_exponents(n, v), v);
            CHECK(psi.terms.size() == lambda_sequences(n, v).size());
            Cx viaSeq = 0;
            for (const auto& I : lambda_sequences(n, v)) {
                AdaptedMeasure m = compress(n, I);
                long s = 0;
                for (long e : I) s += e;
                CHECK(std::abs(m.eval() - root_of_unity(n, s)) < kTol); // sum preserved
                for (const auto& [e, mult] : m.atoms) {
                    CHECK(e > v);
                    CHECK(e < n - v);
                }
                viaSeq += m.eval();
            }
            CHECK(std::abs(psi.eval() - viaSeq) < kTol);
            CHECK(std::abs(psi.eval() - lambda_direct(n, v)) < kTol);
        }
    // the literal reading of the membership condition admits every
    // increasing sequence and breaks the equality from v = 2 on
    MeasureSum psi = measures_on(9, arc_exponents(9, 2), 2);
    CHECK(std::abs(psi.eval() - lambda_direct(9, 2, GapReading::AsPrinted)) > 0.5);
}

TEST_CASE("sparse complement route with its alternating sign") {
    for (long n : {11L, 13L})
        for (long v = 1; 4 * v < n; ++v) {
            MeasureSum sparse(n);
            std::vector<long> comp = arc_complement_exponents(n, v);
            sparse = measures_on(n, comp, v, true);
            double direct = lambda_direct(n, v).real();
            double viaSparse = (v % 2 == 0 ? 1.0 : -1.0) * sparse.eval().real();
            CHECK(std::abs(direct - viaSparse) < kTol);
            // the recursion reproduces the enumeration, and is positive
            CHECK(std::abs(sparse.eval().real() - sparse_complement_value(n, v, v)) < kTol);
            CHECK(sparse_complement_value(n, v, v) > 0);
        }
}

TEST_CASE("nested arc recursion matches enumeration and carries the sign of k") {
    long n = 11;
    for (long w : {2L, 4L})
        for (long k = 1; k <= 3; ++k)
            for (long kp = 1; kp <= k; ++kp) {
                // roots of B_w: the w/2 conjugate pairs nearest -1
                std::vector<long> exps, outer;
                for (long t = 1; t <= w / 2; ++t) {
                    long lo = (n + 1) / 2 - t;
                    exps.push_back(lo);
                    exps.push_back(n - lo);
                    if (t == w / 2) {
                        outer.push_back(lo);
                        outer.push_back(n - lo);
                    }
                }
                MeasureSum all = measures_on(n, exps, k);
                double byEnum = eval_restricted(all, outer, kp).real();
                double byRec = psi_arc_value(n, w, kp, k);
                CHECK(std::abs(byEnum - byRec) < kTol);
                if (std::abs(byRec) > kTol) CHECK((k % 2 == 0) == (byRec > 0));
            }
}

TEST_CASE("the two lambda routes agree and stay away from v") {
    for (long n = 5; n <= 25; n += 2) {
        VanishingReport rep = vanishing_check(n);
        CHECK(rep.ok);
        CHECK(static_cast<long>(rep.entries.size()) == (n - 3) / 2);
        for (const auto& e : rep.entries) {
            CHECK(e.margin > kTol);
            CHECK(e.path_disagreement < kTol);
            CHECK(std::abs(e.lambda.imag()) < kTol);
            // the sign alternates with v
            CHECK((e.v % 2 == 0) == (e.lambda.real() > 0));
        }
    }
    // the n=5 margin in closed form: |(-golden ratio) - 1| = golden ratio squared
    VanishingReport five = vanishing_check(5);
    CHECK(std::abs(five.entries[0].margin - (1 - 2 * std::cos(4 * std::numbers::pi / 5))) <
          1e-6);
}

TEST_CASE("jacobian of the invariants has full rank") {
    Rng rng(502);
    for (long n : {5L, 6L, 7L, 8L}) {
        RankReport rep = independence_check(n, rng);
        CHECK(rep.pass);
        CHECK(rep.rank == 2 * (n / 2) + 2);
    }
}

TEST_CASE("homogeneity of the partial derivatives under the scaling") {
    Rng rng(503);
    for (long n : {5L, 6L}) {
        CoordVector x = random_coords(n, rng);
        Rat t(3);
        CoordVector sx = scale_action(x, t);
        for (long k = 1; k <= n / 2; ++k)
            for (long j = 1; j <= 2 * n; ++j) {
                long kj = k + ((j % 2 == 0) ? 1 : -1);
                Rat scale = 1;
                for (long i = 0; i < (kj >= 0 ? kj : -kj); ++i) scale *= t;
                Rat lhs = partial_derivative(sx, k, Parity::Odd, j);
                Rat rhs = partial_derivative(x, k, Parity::Odd, j);
                if (kj >= 0)
                    CHECK(lhs * scale == rhs);
                else
                    CHECK(lhs == rhs * scale);
            }
    }
}

TEST_CASE("restricted invariants have power-vector gradients") {
    for (long n : {5L, 7L}) {
        std::vector<Cx> p;
        for (long j = 1; j <= n; ++j) p.push_back(root_of_unity(n, j));
        std::vector<long> ks;
        for (long k = 1; k <= (n - 1) / 2; ++k) ks.push_back(k);
        ks.push_back(n);
        for (long k : ks) {
            std::vector<Cx> g = grad_H(n, k, p);
            // gradient of the k-th function lies along the (k-1)-st
            // power vector
            for (long j = 0; j < n; ++j)
                CHECK(std::abs(g[static_cast<size_t>(j)] * root_of_unity(n, k - 1) -
                               g[0] * root_of_unity(n, (j + 1) * (k - 1))) < kTol);
            CHECK(std::abs(g[0]) > kTol); // the scalar mu is nonzero
        }
        // sanity: H agrees with the full invariant through the odd
        // embedding at a rational point
        CoordVector x(n);
        for (long j = 1; j <= 2 * n; ++j) x(j) = (j % 2 == 1) ? Rat(j, 2) : Rat(0);
        std::vector<Cx> z;
        for (long j = 1; j <= 2 * n; j += 2) z.push_back(Cx(x(j).get_d(), 0.0));
        for (long k = 1; k <= n / 2; ++k)
            CHECK(std::abs(eval_H(n, k, z) - Cx(eval_O(x, k).get_d(), 0)) < kTol);
    }
}

#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "coords.hpp"

namespace pentalab {

enum class Parity { Odd, Even };

/// One unit of an admissible subset.  `start` is the smallest covered
/// index of the unit's own parity; a singleton covers {start}, a triple
/// covers {start, start+1, start+2} (center of the opposite parity).
struct Unit {
    long start = 0;
    bool triple = false;

    std::vector<long> indices(long twoN) const {
        if (!triple) return {cyc(start, twoN)};
        return {cyc(start, twoN), cyc(start + 1, twoN), cyc(start + 2, twoN)};
    }
    /// Covered indices of the unit's own parity.
    std::vector<long> parity_indices(long twoN) const {
        if (!triple) return {cyc(start, twoN)};
        return {cyc(start, twoN), cyc(start + 2, twoN)};
    }
};

/// Union of pairwise non-consecutive units (plus the exceptional full
/// set of weight n).  sign is -1 exactly when the number of singleton
/// units is odd; the full set counts as sign +1.
struct AdmissibleSubset {
    std::vector<Unit> units;
    int sign = 1;
    std::vector<long> indices; // flattened, each in 1..2n

    long weight() const { return static_cast<long>(units.size()); }
};

/// Two units are consecutive when their same-parity covered indices
/// come within cyclic distance 2 of each other (or collide).
inline bool units_nonconsecutive(const std::vector<Unit>& units, long twoN) {
    for (size_t i = 0; i < units.size(); ++i)
        for (size_t j = i + 1; j < units.size(); ++j)
            for (long a : units[i].parity_indices(twoN))
                for (long b : units[j].parity_indices(twoN)) {
                    long d = cyc(a - b, twoN);
                    d = std::min(d, twoN - d);
                    if (d <= 2) return false;
                }
    return true;
}

namespace detail {

inline AdmissibleSubset make_subset(std::vector<Unit> units, long twoN, bool full) {
    AdmissibleSubset s;
    s.units = std::move(units);
    int singles = 0;
    for (const auto& u : s.units) {
        if (!u.triple) ++singles;
        for (long i : u.indices(twoN)) s.indices.push_back(i);
    }
    s.sign = (!full && (singles % 2 == 1)) ? -1 : 1;
    std::sort(s.indices.begin(), s.indices.end());
    return s;
}

/// Blocks of 1 or 2 positions on the cycle Z_n, pairwise separated by
/// at least one empty position; position t corresponds to the t-th
/// index of the requested parity.  Each subset is produced once, with
/// s = the smallest block start.
inline std::vector<AdmissibleSubset> enumerate_uncached(long n, long k, Parity parity) {
    long twoN = 2 * n;
    auto unit_at = [&](long pos, bool triple) {
        long start = (parity == Parity::Odd) ? 2 * pos - 1 : 2 * pos;
        return Unit{cyc(start, twoN), triple};
    };
    std::vector<AdmissibleSubset> out;
    if (k == 0) {
        out.push_back(make_subset({}, twoN, false));
        return out;
    }
    if (k == n) {
        std::vector<Unit> full;
        for (long t = 1; t <= n; ++t) full.push_back(unit_at(t, false));
        out.push_back(make_subset(std::move(full), twoN, true));
        return out;
    }
    std::vector<std::pair<long, long>> blocks; // (start position, length)
    for (long s = 1; s <= n; ++s) {
        auto rec = [&](auto&& self, long minStart, long remaining) -> void {
            if (remaining == 0) {
                if (blocks.back().first + blocks.back().second - 1 > s + n - 2) return;
                std::vector<Unit> units;
                for (auto [p, len] : blocks) units.push_back(unit_at(cyc(p, n), len == 2));
                out.push_back(make_subset(std::move(units), twoN, false));
                return;
            }
            for (long p = minStart; p <= n; ++p)
                for (long len = 1; len <= 2; ++len) {
                    blocks.emplace_back(p, len);
                    self(self, p + len + 1, remaining - 1);
                    blocks.pop_back();
                }
        };
        blocks.emplace_back(s, 1);
        rec(rec, s + 2, k - 1);
        blocks.pop_back();
        blocks.emplace_back(s, 2);
        rec(rec, s + 3, k - 1);
        blocks.pop_back();
    }
    return out;
}

} // namespace detail

inline bool weight_supported(long n, long k) {
    return (k >= 0 && k <= n / 2) || k == n;
}

/// Cached enumeration of the weight-k admissible subsets.
inline std::shared_ptr<const std::vector<AdmissibleSubset>>
enumerate_admissible(long n, long k, Parity parity) {
    if (n < 3) throw UnsupportedWeight("n must be at least 3");
    if (!weight_supported(n, k))
        throw UnsupportedWeight("weight " + std::to_string(k) + " out of range for n = " +
                                std::to_string(n));
    using Key = std::tuple<long, long, int>;
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const std::vector<AdmissibleSubset>>> cache;
    Key key{n, k, parity == Parity::Odd ? 0 : 1};
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto val = std::make_shared<const std::vector<AdmissibleSubset>>(
        detail::enumerate_uncached(n, k, parity));
    cache.emplace(key, val);
    return val;
}

inline Rat eval_invariant(const CoordVector& v, long k, Parity parity) {
    auto subsets = enumerate_admissible(v.n, k, parity);
    Rat total = 0;
    for (const auto& s : *subsets) {
        Rat term = s.sign;
        for (long j : s.indices) term *= v(j);
        total += term;
    }
    return total;
}

inline Rat eval_O(const CoordVector& v, long k) { return eval_invariant(v, k, Parity::Odd); }
inline Rat eval_E(const CoordVector& v, long k) { return eval_invariant(v, k, Parity::Even); }

/// (O_1..O_[n/2], E_1..E_[n/2], O_n, E_n), length 2[n/2]+2.
inline std::vector<Rat> invariant_tuple(const CoordVector& v) {
    std::vector<Rat> t;
    for (long k = 1; k <= v.n / 2; ++k) t.push_back(eval_O(v, k));
    for (long k = 1; k <= v.n / 2; ++k) t.push_back(eval_E(v, k));
    t.push_back(eval_O(v, v.n));
    t.push_back(eval_E(v, v.n));
    return t;
}

namespace detail {

/// Sum over block placements on the positions lo..hi (blocks of one or
/// two positions, one empty position between blocks), weighted z per
/// block; coefficient vectors are truncated at kMax.
inline std::vector<Rat> block_poly(long lo, long hi, long kMax,
                                   const std::function<Rat(long)>& single,
                                   const std::function<Rat(long)>& dbl) {
    size_t len = static_cast<size_t>(kMax) + 1;
    if (hi < lo) {
        std::vector<Rat> empty(len, Rat(0));
        empty[0] = 1;
        return empty;
    }
    std::vector<std::vector<Rat>> g(static_cast<size_t>(std::max(hi - lo + 4, 3L)),
                                    std::vector<Rat>(len, Rat(0)));
    auto at = [&](long t) -> std::vector<Rat>& { return g[static_cast<size_t>(t - lo)]; };
    for (long t = hi + 1; t <= hi + 3; ++t) at(t)[0] = 1;
    for (long t = hi; t >= lo; --t) {
        std::vector<Rat>& cur = at(t);
        cur = at(t + 1);
        Rat s = single(t);
        const std::vector<Rat>& skip2 = at(t + 2);
        for (long k = kMax; k >= 1; --k)
            cur[static_cast<size_t>(k)] += s * skip2[static_cast<size_t>(k - 1)];
        if (t + 1 <= hi) {
            Rat d = dbl(t);
            const std::vector<Rat>& skip3 = at(t + 3);
            for (long k = kMax; k >= 1; --k)
                cur[static_cast<size_t>(k)] += d * skip3[static_cast<size_t>(k - 1)];
        }
    }
    return at(lo);
}

} // namespace detail

/// All weights at once: entry [k] equals O_k (resp. E_k) for
/// k = 0..n/2.  A transfer recursion over the block structure of the
/// admissible subsets (runs of one or two positions, separated), so the
/// cost is polynomial in n where the enumeration is exponential.
inline std::vector<Rat> invariant_profile(const CoordVector& v, Parity parity) {
    long n = v.n;
    long off = (parity == Parity::Odd) ? -1 : 0;
    auto single = [&](long t) { return Rat(-v(2 * t + off)); };
    auto dbl = [&](long t) {
        return Rat(v(2 * t + off) * v(2 * t + 1 + off) * v(2 * t + 2 + off));
    };
    long kMax = n / 2;
    // split the cycle by what covers position 1 (and a wrapping block)
    std::vector<Rat> total = detail::block_poly(2, n, kMax, single, dbl);
    auto acc = [&](const Rat& factor, const std::vector<Rat>& tail) {
        for (long k = kMax; k >= 1; --k)
            total[static_cast<size_t>(k)] += factor * tail[static_cast<size_t>(k - 1)];
    };
    acc(single(1), detail::block_poly(3, n - 1, kMax - 1, single, dbl));
    acc(dbl(1), detail::block_poly(4, n - 1, kMax - 1, single, dbl));
    acc(dbl(n), detail::block_poly(3, n - 2, kMax - 1, single, dbl));
    return total;
}

/// f_j = prod of x_i over i = j mod 4, for j = 1..4.
inline std::array<Rat, 4> mod4_products(const CoordVector& v) {
    std::array<Rat, 4> f{Rat(1), Rat(1), Rat(1), Rat(1)};
    for (long i = 1; i <= 2 * v.n; ++i) f[static_cast<size_t>((i - 1) % 4)] *= v(i);
    return f;
}

/// Exact partial of O_k/E_k at v.  Each monomial is squarefree, so the
/// polynomial is multilinear in every variable and the unit finite
/// difference is the derivative.
inline Rat partial_derivative(const CoordVector& v, long k, Parity parity, long j) {
    CoordVector w = v;
    w(j) += 1;
    return eval_invariant(w, k, parity) - eval_invariant(v, k, parity);
}

/// Maximal tight blocks {j, j+4, ..., j+4a} of a singleton-only
/// admissible subset, cyclically.
inline std::vector<std::vector<long>> tight_factorization(long n,
                                                          const std::vector<long>& singles) {
    long twoN = 2 * n;
    if (singles.empty()) return {};
    if (2 * static_cast<long>(singles.size()) >= n)
        throw NotSingletonOnly("tight factorization needs weight below n/2");
    std::vector<long> idx;
    for (long j : singles) idx.push_back(cyc(j, twoN));
    std::sort(idx.begin(), idx.end());
    for (size_t i = 0; i < idx.size(); ++i) {
        if (cyc(idx[i], 2) != cyc(idx[0], 2))
            throw NotSingletonOnly("mixed parities in singleton set");
        if (i > 0 && idx[i] == idx[i - 1]) throw NotSingletonOnly("repeated index");
    }
    auto present = [&](long j) {
        return std::binary_search(idx.begin(), idx.end(), cyc(j, twoN));
    };
    std::vector<std::vector<long>> blocks;
    for (long j : idx) {
        if (present(j - 4)) continue; // not a block head
        std::vector<long> block;
        for (long t = j; present(t); t += 4) block.push_back(cyc(t, twoN));
        blocks.push_back(std::move(block));
    }
    return blocks;
}

/// Closed form of the right-partner sum over one tight odd block
/// {j, j+4, ..., j+4a}: only the head singleton can be swapped for its
/// triple {j-2, j-1, j}, giving (-1)^(a+1) (1 - x_{j-2}x_{j-1}) x_j ... x_{j+4a}.
inline Rat ro_block(const CoordVector& v, const std::vector<long>& block) {
    long j = block.front();
    Rat prod = 1;
    for (long i : block) prod *= v(i);
    Rat val = (1 - v(j - 2) * v(j - 1)) * prod;
    return (block.size() % 2 == 0) ? val : -val;
}

/// Even-side mirror: in a tight even block {i, ..., e} only the tail
/// singleton can become the triple {e, e+1, e+2}.
inline Rat le_block(const CoordVector& v, const std::vector<long>& block) {
    long e = block.back();
    Rat prod = 1;
    for (long i : block) prod *= v(i);
    Rat val = (1 - v(e + 1) * v(e + 2)) * prod;
    return (block.size() % 2 == 0) ? val : -val;
}

namespace detail {
/// Direct partner sum: every subset obtained from the singleton set by
/// swapping some members for their partner triples, kept when still
/// admissible, summed with signs.
inline Rat partner_sum(const CoordVector& v, const std::vector<long>& singles, Parity parity) {
    long twoN = 2 * v.n;
    size_t m = singles.size();
    Rat total = 0;
    for (size_t mask = 0; mask < (size_t{1} << m); ++mask) {
        std::vector<Unit> units;
        for (size_t i = 0; i < m; ++i) {
            long j = cyc(singles[i], twoN);
            if (mask & (size_t{1} << i))
                units.push_back(parity == Parity::Odd ? Unit{cyc(j - 2, twoN), true}
                                                      : Unit{j, true});
            else
                units.push_back(Unit{j, false});
        }
        if (!units_nonconsecutive(units, twoN)) continue;
        int singlesCount = 0;
        Rat term = 1;
        for (const auto& u : units) {
            if (!u.triple) ++singlesCount;
            for (long i : u.indices(twoN)) term *= v(i);
        }
        if (singlesCount % 2 == 1) term = -term;
        total += term;
    }
    return total;
}
} // namespace detail

inline Rat ro_sum(const CoordVector& v, const std::vector<long>& singles) {
    return detail::partner_sum(v, singles, Parity::Odd);
}
inline Rat le_sum(const CoordVector& v, const std::vector<long>& singles) {
    return detail::partner_sum(v, singles, Parity::Even);
}

} // namespace pentalab

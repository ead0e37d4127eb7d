#pragma once

// Test-side oracles, kept independent of the library's computation paths:
// schoolbook polynomial arithmetic on raw integer vectors, minor-gcd
// elementary divisors, cofactor-expansion characteristic polynomials, and a
// pivoting fraction-free rank over Q_p.

#include <vector>

#include <gmpxx.h>

#include "slopelab/matrix.hpp"

namespace slopelab::oracle {

// product of two coordinate vectors mod (modulus, p^N), schoolbook
inline std::vector<mpz_class> poly_mulmod(const std::vector<mpz_class>& a,
                                          const std::vector<mpz_class>& b,
                                          const std::vector<mpz_class>& modulus,
                                          const mpz_class& pN) {
    size_t s = a.size();
    std::vector<mpz_class> prod(2 * s - 1, mpz_class(0));
    for (size_t i = 0; i < s; ++i)
        for (size_t j = 0; j < s; ++j) prod[i + j] += a[i] * b[j];
    for (size_t d = 2 * s - 2; d + 1 > s; --d) {
        mpz_class t = prod[d] % pN;
        prod[d] = 0;
        for (size_t j = 0; j < s; ++j) prod[d - s + j] -= t * modulus[j];
    }
    prod.resize(s);
    for (auto& c : prod) {
        c %= pN;
        if (c < 0) c += pN;
    }
    return prod;
}

// valuation of a Zq element's representative (N for zero), recomputed from raw coords
inline long raw_val(const Zq& x) {
    long best = x.ctx()->N;
    for (const auto& c : x.coords()) {
        if (c == 0) continue;
        mpz_class t = c;
        long v = static_cast<long>(mpz_remove(
            t.get_mpz_t(), t.get_mpz_t(), mpz_class(static_cast<unsigned long>(x.ctx()->p)).get_mpz_t()));
        best = std::min(best, v);
    }
    return best;
}

// naive determinant by cofactor expansion (small matrices only)
inline Zq naive_det(const ZqMatrix& A) {
    int n = A.rows();
    if (n == 0) return Zq::one(A.ctx());
    if (n == 1) return A.at(0, 0);
    Zq acc = Zq::zero(A.ctx());
    for (int j = 0; j < n; ++j) {
        ZqMatrix minor(A.ctx(), n - 1, n - 1);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = A.at(r, c);
            }
        }
        Zq term = A.at(0, j) * naive_det(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// elementary divisor valuations via gcd-of-k-minors: d_k = v(gcd k-minors) - v(gcd (k-1)-minors)
inline std::vector<long> minor_divisor_valuations(const ZqMatrix& A) {
    int n = std::min(A.rows(), A.cols());
    std::vector<long> minval(static_cast<size_t>(n) + 1, 0);
    for (int k = 1; k <= n; ++k) {
        long best = A.ctx()->N;
        // enumerate k-subsets of rows and columns
        std::vector<int> rsel(static_cast<size_t>(k)), csel(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) rsel[static_cast<size_t>(i)] = i;
        for (;;) {
            for (int i = 0; i < k; ++i) csel[static_cast<size_t>(i)] = i;
            for (;;) {
                ZqMatrix M(A.ctx(), k, k);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j)
                        M.at(i, j) = A.at(rsel[static_cast<size_t>(i)], csel[static_cast<size_t>(j)]);
                best = std::min(best, raw_val(naive_det(M)));
                int t = k - 1;
                while (t >= 0 && csel[static_cast<size_t>(t)] == A.cols() - k + t) --t;
                if (t < 0) break;
                ++csel[static_cast<size_t>(t)];
                for (int u = t + 1; u < k; ++u) csel[static_cast<size_t>(u)] = csel[static_cast<size_t>(u - 1)] + 1;
            }
            int t = k - 1;
            while (t >= 0 && rsel[static_cast<size_t>(t)] == A.rows() - k + t) --t;
            if (t < 0) break;
            ++rsel[static_cast<size_t>(t)];
            for (int u = t + 1; u < k; ++u) rsel[static_cast<size_t>(u)] = rsel[static_cast<size_t>(u - 1)] + 1;
        }
        minval[static_cast<size_t>(k)] = best;
    }
    std::vector<long> out;
    for (int k = 1; k <= n; ++k) out.push_back(minval[static_cast<size_t>(k)] - minval[static_cast<size_t>(k - 1)]);
    return out;
}

// characteristic polynomial of a Zq matrix by cofactor expansion over
// polynomials in lambda with Zq coefficients (degree-indexed vectors)
using ZqPoly = std::vector<Zq>; // ascending, may carry zero padding

inline ZqPoly zqp_mul(const ZqPoly& a, const ZqPoly& b, const CtxPtr& ctx) {
    ZqPoly c(a.size() + b.size() - 1, Zq::zero(ctx));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

inline ZqPoly zqp_add(const ZqPoly& a, const ZqPoly& b, const CtxPtr& ctx) {
    ZqPoly c(std::max(a.size(), b.size()), Zq::zero(ctx));
    for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    return c;
}

inline ZqPoly naive_charpoly(const ZqMatrix& A) {
    // det(lambda I - A) by cofactor expansion on the first row
    const CtxPtr& ctx = A.ctx();
    int n = A.rows();
    std::vector<std::vector<ZqPoly>> M(static_cast<size_t>(n), std::vector<ZqPoly>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ZqPoly e = {-A.at(i, j)};
            if (i == j) e.push_back(Zq::one(ctx));
            M[static_cast<size_t>(i)][static_cast<size_t>(j)] = e;
        }
    struct Rec {
        static ZqPoly det(const std::vector<std::vector<ZqPoly>>& m, std::vector<int> cols, int row,
                          const CtxPtr& ctx) {
            if (cols.empty()) return {Zq::one(ctx)};
            ZqPoly acc = {Zq::zero(ctx)};
            for (size_t j = 0; j < cols.size(); ++j) {
                std::vector<int> rest;
                for (size_t t = 0; t < cols.size(); ++t)
                    if (t != j) rest.push_back(cols[t]);
                ZqPoly term = zqp_mul(m[static_cast<size_t>(row)][static_cast<size_t>(cols[j])],
                                      det(m, rest, row + 1, ctx), ctx);
                if (j % 2 == 1)
                    for (auto& c : term) c = -c;
                acc = zqp_add(acc, term, ctx);
            }
            return acc;
        }
    };
    std::vector<int> cols;
    for (int j = 0; j < n; ++j) cols.push_back(j);
    ZqPoly out = Rec::det(M, cols, 0, ctx);
    out.resize(static_cast<size_t>(n) + 1, Zq::zero(ctx));
    return out;
}

// lower hull of exact points, simple O(n^2) scan
inline std::vector<std::pair<long, long>> naive_lower_hull(std::vector<std::pair<long, long>> pts) {
    std::vector<std::pair<long, long>> hull;
    long x = pts.front().first;
    hull.push_back(pts.front());
    while (hull.back() != pts.back()) {
        // pick the point minimizing slope from the current hull point
        std::pair<long, long> best = pts.back();
        for (const auto& q : pts) {
            if (q.first <= x) continue;
            __int128 lhs = static_cast<__int128>(q.second - hull.back().second) * (best.first - x);
            __int128 rhs = static_cast<__int128>(best.second - hull.back().second) * (q.first - x);
            if (lhs < rhs) best = q;
        }
        hull.push_back(best);
        x = best.first;
    }
    return hull;
}

// rank over Q_p of an integer matrix at working precision: fraction-free
// elimination pivoting on minimal-valuation entries; pivots certified up to
// the precision floor count as rank
inline int rank_over_qp(const ZqMatrix& A0, long guard = 4) {
    ZqMatrix A = A0;
    const long N = A.ctx()->N;
    int rank = 0;
    int rows = A.rows(), cols = A.cols();
    std::vector<bool> used(static_cast<size_t>(rows), false);
    for (int c = 0; c < cols; ++c) {
        int best = -1;
        long bestv = N;
        for (int r = 0; r < rows; ++r) {
            if (used[static_cast<size_t>(r)]) continue;
            long v = raw_val(A.at(r, c));
            if (v < bestv) {
                bestv = v;
                best = r;
            }
        }
        if (best < 0 || bestv > N - guard) continue;
        used[static_cast<size_t>(best)] = true;
        ++rank;
        for (int r = 0; r < rows; ++r) {
            if (r == best || used[static_cast<size_t>(r)]) continue;
            long v = raw_val(A.at(r, c));
            if (v >= N) continue;
            // row_r <- p^(v - bestv)^{-1}-free elimination: row_r * pivotrep - row_best * entry
            Zq piv = A.at(best, c), ent = A.at(r, c);
            for (int cc = 0; cc < cols; ++cc) A.at(r, cc) = A.at(r, cc) * piv - A.at(best, cc) * ent;
        }
    }
    return rank;
}

} // namespace slopelab::oracle

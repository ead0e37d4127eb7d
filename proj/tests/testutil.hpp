#pragma once

#include <random>

#include "slopelab/manin.hpp"

namespace slopelab::testutil {

inline Zq random_zq(std::mt19937_64& rng, const CtxPtr& ctx) {
    std::vector<mpz_class> c(static_cast<size_t>(ctx->s));
    for (auto& x : c) {
        mpz_class acc = 0;
        for (int chunks = 0; chunks <= ctx->N / 18; ++chunks)
            acc = acc * 1000000000000000000L + static_cast<unsigned long>(rng() % 1000000000000000000ULL);
        x = acc;
    }
    return Zq(ctx, std::move(c));
}

inline Zq random_unit(std::mt19937_64& rng, const CtxPtr& ctx) {
    for (;;) {
        Zq x = random_zq(rng, ctx);
        if (x.is_unit()) return x;
    }
}

// unit matrix = (lower unitriangular) * (upper unitriangular) * permutation
inline ZqMatrix random_unit_matrix(std::mt19937_64& rng, const CtxPtr& ctx, int n) {
    ZqMatrix L = ZqMatrix::identity(ctx, n), U = ZqMatrix::identity(ctx, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i > j) L.at(i, j) = random_zq(rng, ctx);
            if (i < j) U.at(i, j) = random_zq(rng, ctx);
            if (i == j) {
                L.at(i, j) = random_unit(rng, ctx);
            }
        }
    ZqMatrix P(ctx, n, n);
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < n; ++i) P.at(i, perm[static_cast<size_t>(i)]) = Zq::one(ctx);
    return L * U * P;
}

// E -> U A sigma(U)^{-1}: basis change of the semilinear matrix
inline FCrystal conjugate(const FCrystal& E, const ZqMatrix& U) {
    ZqMatrix Uinv = solve_exact(U, ZqMatrix::identity(E.ctx, E.rank));
    return make_fcrystal(E.ctx, U * E.A * Uinv.sigma());
}

// random direct sum of standard modules with slopes drawn from `pool`
inline FCrystal random_standard_sum(std::mt19937_64& rng, const CtxPtr& ctx,
                                    const std::vector<std::pair<long, long>>& pool, int max_rank,
                                    std::vector<std::pair<long, long>>* chosen = nullptr) {
    FCrystal E = make_fcrystal(ctx, ZqMatrix(ctx, 0, 0));
    int rank = 0;
    for (int guard = 0; guard < 64; ++guard) {
        auto [m, n] = pool[rng() % pool.size()];
        if (rank + n > max_rank) {
            if (rank > 0) break;
            continue;
        }
        E = direct_sum(E, standard_module(ctx, m, n));
        if (chosen) chosen->push_back({m, n});
        rank += static_cast<int>(n);
        if (rank == max_rank || rng() % 3 == 0) break;
    }
    return E;
}

} // namespace slopelab::testutil

#include "slopelab/isogeny.hpp"

#include <algorithm>

#include "slopelab/manin.hpp"

namespace slopelab {

bool operator==(const ModuleType& a, const ModuleType& b) {
    return a.torsion == b.torsion && a.free_rank == b.free_rank;
}

ModuleType module_type(const FinZpModule& M) {
    ModuleType T;
    if (M.gens() == 0) return T;
    if (M.presentation.rows() == 0) {
        T.free_rank = M.gens();
        return T;
    }
    SmithForm S = smith(M.presentation);
    long finite = 0;
    for (const auto& d : S.divisors) {
        if (!d.finite) continue;
        ++finite;
        if (d.v > 0) T.torsion.push_back(d.v);
    }
    std::sort(T.torsion.begin(), T.torsion.end());
    T.free_rank = M.gens() - finite;
    return T;
}

std::optional<long> coker_exponent(const ZqMatrix& H) {
    if (H.cols() == 0) return H.rows() == 0 ? std::optional<long>(0) : std::nullopt;
    SmithForm S = smith(H);
    long k = 0;
    long finite = 0;
    for (const auto& d : S.divisors) {
        if (!d.finite) {
            if (d.v >= H.ctx()->N)
                return std::nullopt; // divisor vanished at full precision: free part
            throw PrecisionExhausted("coker_exponent: divisor valuation at or above certified precision",
                                     2 * H.ctx()->N);
        }
        ++finite;
        k = std::max(k, d.v);
    }
    if (finite < H.rows()) return std::nullopt; // target rank exceeds matrix rank
    return k;
}

std::optional<long> coker_exponent(const CrystalHom& h) {
    if (h.denom != 0)
        throw PreconditionError("BadInput", "coker_exponent: hom must have denom 0");
    return coker_exponent(h.H);
}

ZqMatrix quasi_inverse_matrix(const ZqMatrix& H, long k) {
    if (H.rows() != H.cols())
        throw PreconditionError("HypothesisViolation", "quasi_inverse: rectangular map rejected");
    SmithForm S = smith(H);
    for (const auto& d : S.divisors) {
        if (!d.finite || d.v > k)
            throw PreconditionError("HypothesisViolation",
                                    "quasi_inverse: an elementary divisor exceeds p^k");
    }
    const CtxPtr& ctx = H.ctx();
    ZqMatrix mid(ctx, H.rows(), H.rows());
    for (int i = 0; i < H.rows(); ++i)
        mid.at(i, i) = Zq::one(ctx).times_pk(2 * k - S.divisors[static_cast<size_t>(i)].v);
    ZqMatrix G = S.R * mid * S.L;
    // both composites are p^(2k) exactly at working precision
    ZqMatrix P = ZqMatrix::identity(ctx, H.rows()).times_pk(2 * k);
    if (!(G * H - P).is_zero_mod(ctx->N) || !(H * G - P).is_zero_mod(ctx->N))
        throw PreconditionError("HypothesisViolation", "quasi_inverse: composite check failed");
    return G;
}

CrystalHom quasi_inverse(const CrystalHom& h, long k) {
    ZqMatrix G = quasi_inverse_matrix(h.H, k);
    return make_hom(h.tgt, h.src, std::move(G), h.denom, h.slack);
}

std::vector<CrystalHom> quasi_inverse_tower(const IsogenyTower& T, long k) {
    const size_t L = T.f.size();
    if (L == 0) return {};
    if (T.src_trans.size() + 1 != L || T.tgt_trans.size() + 1 != L)
        throw PreconditionError("BadInput", "quasi_inverse_tower: need one transition per consecutive level");
    const CtxPtr& ctx = T.f[0].H.ctx();
    long tol = ctx->N;
    for (size_t n = 0; n + 1 < L; ++n) {
        ZqMatrix defect = T.tgt_trans[n] * T.f[n].H - T.f[n + 1].H * T.src_trans[n];
        if (!defect.is_zero_mod(tol))
            throw PreconditionError("HypothesisViolation",
                                    "quasi_inverse_tower: input compatibility square fails at level " +
                                        std::to_string(n));
    }
    std::vector<CrystalHom> g;
    g.reserve(L);
    for (const auto& fn : T.f) g.push_back(quasi_inverse(fn, k));
    for (size_t n = 0; n + 1 < L; ++n) {
        ZqMatrix defect = g[n + 1].H * T.tgt_trans[n] - T.src_trans[n] * g[n].H;
        if (!defect.is_zero_mod(std::max<long>(0, tol - 2 * k)))
            throw PreconditionError("HypothesisViolation",
                                    "quasi_inverse_tower: output compatibility square fails at level " +
                                        std::to_string(n));
    }
    return g;
}

FinZpModule div_part(const FinZpModule& M) {
    ModuleType T = module_type(M);
    long n = T.torsion.empty() ? 0 : T.torsion.back();
    if (n >= M.ctx->N)
        throw PrecisionExhausted("div_part: torsion exponent at working precision", 2 * M.ctx->N);
    // stabilization: the Smith type of im(p^n) equals that of im(p^(n+1))
    auto image_type = [&](long e) {
        ModuleType R;
        R.free_rank = T.free_rank;
        for (long d : T.torsion)
            if (d > e) R.torsion.push_back(d - e);
        return R;
    };
    if (!(image_type(n) == image_type(n + 1)))
        throw PreconditionError("HypothesisViolation", "div_part: image of p^n did not stabilize");
    FinZpModule out;
    out.ctx = M.ctx;
    out.presentation = ZqMatrix(M.ctx, 0, static_cast<int>(T.free_rank));
    return out;
}

bool is_geometric_isogeny(const FCrystal& E1, const FCrystal& E2) {
    auto t1 = isogeny_type(E1);
    auto t2 = isogeny_type(E2);
    return t1.size() == t2.size() && std::equal(t1.begin(), t1.end(), t2.begin());
}

} // namespace slopelab

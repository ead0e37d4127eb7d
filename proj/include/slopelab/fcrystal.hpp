#pragma once

#include "slopelab/matrix.hpp"
#include "slopelab/polygon.hpp"

namespace slopelab {

// Free W(F_{p^s})-module of finite rank with sigma-semilinear Frobenius
// v -> A * sigma(v). Values are immutable; all operations are pure.
struct FCrystal {
    CtxPtr ctx;
    int rank = 0;
    ZqMatrix A;
};

FCrystal make_fcrystal(CtxPtr ctx, ZqMatrix A);

// Matrix of F^n = A sigma(A) ... sigma^(n-1)(A). For n = s the result is a
// Z_q-linear map.
ZqMatrix semilinear_power(const FCrystal& E, long n);

// Newton polygon: valuations of the eigenvalues of the linearization
// F^s, divided by s. Throws PrecisionExhausted when a hull vertex is not
// determined at certified precision.
Polygon newton_polygon(const FCrystal& E);

// Valuations of the elementary divisors of A.
Polygon hodge_polygon(const FCrystal& E);

FCrystal direct_sum(const FCrystal& a, const FCrystal& b);
FCrystal tensor(const FCrystal& a, const FCrystal& b);
// p^n * transpose(A^{-1}); defined only when p^n A^{-1} is integral.
FCrystal dual_twist(const FCrystal& E, long n);
// p^n * A; negative n requires entrywise divisibility.
FCrystal tate_twist(const FCrystal& E, long n);

// Morphism in the isogeny category: p^(-denom) * H, with `slack` the
// recorded worst-case certified-precision loss of the construction that
// produced it.
struct CrystalHom {
    FCrystal src, tgt;
    ZqMatrix H; // tgt.rank x src.rank
    int denom = 0;
    int slack = 0;
};

CrystalHom identity_hom(const FCrystal& E);
CrystalHom make_hom(FCrystal src, FCrystal tgt, ZqMatrix H, int denom = 0, int slack = 0);
CrystalHom compose(const CrystalHom& g, const CrystalHom& f); // g after f

// Equivariance H A_src ≡ A_tgt sigma(H) mod p^(N - denom - slack).
bool is_morphism(const CrystalHom& h);

// Ring embedding W(F_{p^s}) -> W(F_{p^(s t)}): the image of g is the
// Hensel-lifted least root of the source modulus in the target ring.
struct ContextEmbedding {
    CtxPtr src, tgt;
    std::vector<Zq> gen_powers; // alpha^0 .. alpha^(s-1) over tgt
    Zq apply(const Zq& x) const;
};

ContextEmbedding make_embedding(const CtxPtr& src, const CtxPtr& tgt);

// Same matrix viewed over W(F_{p^(s t)}) through a Hensel-lifted embedding
// of the residue fields. target_ctx may pin the codomain context; by
// default the degree-(s t) context with the default modulus is used.
FCrystal base_extend(const FCrystal& E, int t, CtxPtr target_ctx = nullptr);

} // namespace slopelab

#include "slopelab/fcrystal.hpp"

#include <algorithm>

namespace slopelab {

FCrystal make_fcrystal(CtxPtr ctx, ZqMatrix A) {
    if (A.rows() != A.cols()) throw PreconditionError("BadInput", "fcrystal: matrix not square");
    if (A.rows() > 0) require_same_ctx(ctx, A.ctx(), "fcrystal");
    FCrystal E;
    E.ctx = std::move(ctx);
    E.rank = A.rows();
    E.A = std::move(A);
    return E;
}

ZqMatrix semilinear_power(const FCrystal& E, long n) {
    if (n < 1) throw PreconditionError("BadInput", "semilinear_power: n >= 1");
    ZqMatrix M = E.A;
    for (long k = 1; k < n; ++k) M = M * E.A.sigma(k);
    return M;
}

namespace {

struct HullPoint {
    long x;
    long y;
};

// lower convex hull of certified points, x strictly increasing on input
std::vector<HullPoint> lower_hull(const std::vector<HullPoint>& pts) {
    std::vector<HullPoint> h;
    for (const auto& q : pts) {
        while (h.size() >= 2) {
            const auto& a = h[h.size() - 2];
            const auto& b = h[h.size() - 1];
            // pop b when it is on or above segment a-q
            __int128 cross = static_cast<__int128>(b.x - a.x) * (q.y - a.y) -
                             static_cast<__int128>(b.y - a.y) * (q.x - a.x);
            if (cross <= 0)
                h.pop_back();
            else
                break;
        }
        h.push_back(q);
    }
    return h;
}

Rational hull_value_at(const std::vector<HullPoint>& h, long x) {
    for (size_t i = 0; i + 1 < h.size(); ++i) {
        if (x >= h[i].x && x <= h[i + 1].x) {
            long dx = h[i + 1].x - h[i].x;
            long dy = h[i + 1].y - h[i].y;
            return rat(h[i].y * dx + dy * (x - h[i].x), dx);
        }
    }
    throw PreconditionError("BadInput", "hull_value_at: abscissa outside hull");
}

long estimate_precision_from_hodge(const FCrystal& E) {
    try {
        Polygon h = hodge_polygon(E);
        long sum = 0;
        for (const auto& part : h) sum += part.slope.num * part.mult; // integer slopes
        return E.ctx->s * sum + 2;
    } catch (const std::exception&) {
        return 2 * E.ctx->N + 2;
    }
}

} // namespace

Polygon newton_polygon(const FCrystal& E) {
    if (E.rank == 0) return {};
    const int s = E.ctx->s;
    ZqMatrix B = semilinear_power(E, s);
    std::vector<Zq> c = charpoly(B);
    const long r = E.rank;

    std::vector<HullPoint> certified;
    struct Open {
        long x;
        long prec;
    };
    std::vector<Open> uncertified;
    for (long i = 0; i <= r; ++i) {
        auto v = c[static_cast<size_t>(i)].val();
        if (v.certified)
            certified.push_back({i, v.v});
        else
            uncertified.push_back({i, v.v});
    }
    if (!certified.empty() && certified.front().x != 0) {
        // constant coefficient vanished at certified precision: the left
        // endpoint of the polygon is unknown
        throw PrecisionExhausted("newton_polygon: det(F^s) not certified at working precision",
                                 estimate_precision_from_hodge(E));
    }
    std::vector<HullPoint> hull = lower_hull(certified);
    for (const auto& u : uncertified) {
        Rational bound = hull_value_at(hull, u.x);
        if (rat(u.prec) < bound)
            throw PrecisionExhausted("newton_polygon: hull vertex not determined at certified precision",
                                     E.ctx->N + (bound.num / bound.den - u.prec) + 2);
    }
    Polygon out;
    for (size_t i = 0; i + 1 < hull.size(); ++i) {
        long dx = hull[i + 1].x - hull[i].x;
        long dy = hull[i].y - hull[i + 1].y; // root valuation * dx
        out.push_back({rat(dy, dx * s), dx});
    }
    std::reverse(out.begin(), out.end());
    return normalize_polygon(out);
}

Polygon hodge_polygon(const FCrystal& E) {
    if (E.rank == 0) return {};
    SmithForm S = smith(E.A);
    std::vector<SlopePart> parts;
    for (const auto& d : S.divisors) {
        if (!d.finite)
            throw PrecisionExhausted("hodge_polygon: elementary divisor vanished at certified precision",
                                     2 * E.ctx->N);
        parts.push_back({rat(d.v), 1});
    }
    return normalize_polygon(std::move(parts));
}

FCrystal direct_sum(const FCrystal& a, const FCrystal& b) {
    require_same_ctx(a.ctx, b.ctx, "direct_sum");
    ZqMatrix M(a.ctx, a.rank + b.rank, a.rank + b.rank);
    for (int i = 0; i < a.rank; ++i)
        for (int j = 0; j < a.rank; ++j) M.at(i, j) = a.A.at(i, j);
    for (int i = 0; i < b.rank; ++i)
        for (int j = 0; j < b.rank; ++j) M.at(a.rank + i, a.rank + j) = b.A.at(i, j);
    return make_fcrystal(a.ctx, std::move(M));
}

FCrystal tensor(const FCrystal& a, const FCrystal& b) {
    require_same_ctx(a.ctx, b.ctx, "tensor");
    ZqMatrix M(a.ctx, a.rank * b.rank, a.rank * b.rank);
    for (int i1 = 0; i1 < a.rank; ++i1)
        for (int j1 = 0; j1 < a.rank; ++j1) {
            if (a.A.at(i1, j1).is_zero_rep()) continue;
            for (int i2 = 0; i2 < b.rank; ++i2)
                for (int j2 = 0; j2 < b.rank; ++j2)
                    M.at(i1 * b.rank + i2, j1 * b.rank + j2) = a.A.at(i1, j1) * b.A.at(i2, j2);
        }
    return make_fcrystal(a.ctx, std::move(M));
}

FCrystal dual_twist(const FCrystal& E, long n) {
    SmithForm S = smith(E.A);
    for (const auto& d : S.divisors) {
        if (!d.finite)
            throw PrecisionExhausted("dual_twist: matrix degenerate at certified precision", 2 * E.ctx->N);
        if (d.v > n)
            throw PreconditionError("IntegralityFailure",
                                    "dual_twist: p^n A^{-1} is not integral (divisor valuation exceeds n)");
    }
    // p^n A^{-1} = R (p^n D^{-1}) L, exactly
    ZqMatrix mid(E.ctx, E.rank, E.rank);
    for (int i = 0; i < E.rank; ++i)
        mid.at(i, i) = Zq::one(E.ctx).times_pk(n - S.divisors[static_cast<size_t>(i)].v);
    ZqMatrix inv_scaled = S.R * mid * S.L;
    return make_fcrystal(E.ctx, inv_scaled.transpose());
}

FCrystal tate_twist(const FCrystal& E, long n) {
    if (n >= 0) return make_fcrystal(E.ctx, E.A.times_pk(n));
    if (!E.A.is_zero_mod(-n))
        throw PreconditionError("IntegralityFailure", "tate_twist: matrix not divisible by p^(-n)");
    return make_fcrystal(E.ctx, E.A.div_pk_exact(-n));
}

CrystalHom identity_hom(const FCrystal& E) {
    return {E, E, ZqMatrix::identity(E.ctx, E.rank), 0, 0};
}

CrystalHom make_hom(FCrystal src, FCrystal tgt, ZqMatrix H, int denom, int slack) {
    if (H.rows() != tgt.rank || H.cols() != src.rank)
        throw PreconditionError("BadInput", "hom: matrix shape must be tgt.rank x src.rank");
    return {std::move(src), std::move(tgt), std::move(H), denom, slack};
}

CrystalHom compose(const CrystalHom& g, const CrystalHom& f) {
    if (g.src.rank != f.tgt.rank) throw PreconditionError("BadInput", "compose: rank mismatch");
    return {f.src, g.tgt, g.H * f.H, g.denom + f.denom, g.slack + f.slack};
}

bool is_morphism(const CrystalHom& h) {
    ZqMatrix defect = h.H * h.src.A - h.tgt.A * h.H.sigma();
    long tol = h.src.ctx->N - h.denom - h.slack;
    return defect.is_zero_mod(std::max<long>(tol, 0));
}

Zq ContextEmbedding::apply(const Zq& x) const {
    Zq acc = Zq::zero(tgt);
    const auto& coords = x.coords();
    for (int k = 0; k < src->s; ++k)
        acc += Zq::from_integer(tgt, coords[static_cast<size_t>(k)]) * gen_powers[static_cast<size_t>(k)];
    return acc.with_prec(x.prec());
}

ContextEmbedding make_embedding(const CtxPtr& c1, const CtxPtr& c2) {
    if (c2->p != c1->p || c2->s % c1->s != 0 || c2->N != c1->N)
        throw PreconditionError("BadInput", "embedding: target context has incompatible parameters");
    ContextEmbedding em;
    em.src = c1;
    em.tgt = c2;
    if (c1->s == 1) {
        // g = -modulus[0] maps to the same integer constant
        em.gen_powers = {Zq::one(c2)};
        return em;
    }

    // residue embedding: the least root of the old modulus in the large field
    const auto& F2 = c2->residue_field();
    ffp::PolyFq f;
    f.reserve(c1->modulus.size());
    mpz_class pz(static_cast<unsigned long>(c1->p));
    for (const auto& coef : c1->modulus)
        f.push_back(ffp::fq_from_int(F2, mpz_class(coef % pz).get_ui()));
    auto roots = ffp::poly_roots(F2, ffp::pfq_trim(f),
                                 0x9e3779b97f4a7c15ULL ^ c1->p ^ (static_cast<uint64_t>(c2->s) << 32));
    if (roots.empty())
        throw PreconditionError("BadInput", "embedding: no residue root (degree mismatch)");

    Zq alpha = [&]() {
        std::vector<mpz_class> coords(static_cast<size_t>(c2->s));
        for (int i = 0; i < c2->s; ++i)
            coords[static_cast<size_t>(i)] = static_cast<unsigned long>(roots[0][static_cast<size_t>(i)]);
        return Zq(c2, std::move(coords));
    }();
    auto eval = [&](const Zq& x, bool deriv) {
        Zq acc = Zq::zero(c2);
        if (!deriv) {
            for (size_t i = c1->modulus.size(); i-- > 0;)
                acc = acc * x + Zq::from_integer(c2, c1->modulus[i]);
        } else {
            for (size_t i = c1->modulus.size(); i-- > 1;)
                acc = acc * x + Zq::from_integer(c2, mpz_class(static_cast<unsigned long>(i)) * c1->modulus[i]);
        }
        return acc;
    };
    for (int iter = 0; iter < 8 * (c2->N + 2); ++iter) {
        Zq fx = eval(alpha, false);
        if (fx.is_zero_rep()) break;
        alpha = alpha - fx * eval(alpha, true).inv();
    }
    if (!eval(alpha, false).is_zero_rep())
        throw PreconditionError("BadInput", "embedding: Hensel lift failed");

    em.gen_powers.assign(static_cast<size_t>(c1->s), Zq::one(c2));
    for (int i = 1; i < c1->s; ++i)
        em.gen_powers[static_cast<size_t>(i)] = em.gen_powers[static_cast<size_t>(i - 1)] * alpha;
    return em;
}

FCrystal base_extend(const FCrystal& E, int t, CtxPtr target_ctx) {
    if (t < 1) throw PreconditionError("BadInput", "base_extend: t >= 1");
    if (t == 1 && !target_ctx) return E;
    const CtxPtr& c1 = E.ctx;
    CtxPtr c2 = target_ctx ? target_ctx : PrecisionContext::create(c1->p, c1->s * t, c1->N);
    if (c2->s != c1->s * t)
        throw PreconditionError("BadInput", "base_extend: target context has wrong degree");
    ContextEmbedding em = make_embedding(c1, c2);
    ZqMatrix M(c2, E.rank, E.rank);
    for (int i = 0; i < E.rank; ++i)
        for (int j = 0; j < E.rank; ++j) M.at(i, j) = em.apply(E.A.at(i, j));
    return make_fcrystal(c2, std::move(M));
}

} // namespace slopelab

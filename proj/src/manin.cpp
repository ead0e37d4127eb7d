#include "slopelab/manin.hpp"

#include <algorithm>
#include <numeric>

namespace slopelab {

FCrystal standard_module(const CtxPtr& ctx, long m, long n) {
    if (n < 1 || m < 0) throw PreconditionError("BadInput", "standard_module: need n >= 1, m >= 0");
    if (std::gcd(m, n) != 1) throw PreconditionError("NonCoprime", "standard_module: gcd(m,n) must be 1");
    ZqMatrix A(ctx, static_cast<int>(n), static_cast<int>(n));
    for (long i = 0; i + 1 < n; ++i) A.at(static_cast<int>(i) + 1, static_cast<int>(i)) = Zq::one(ctx);
    A.at(0, static_cast<int>(n) - 1) = Zq::one(ctx).times_pk(m);
    return make_fcrystal(ctx, std::move(A));
}

std::vector<IsoFactor> isogeny_type(const FCrystal& E) {
    Polygon P = newton_polygon(E);
    std::vector<IsoFactor> out;
    for (const auto& part : P) {
        long den = part.slope.den;
        if (part.mult % den != 0)
            throw PreconditionError("HypothesisViolation",
                                    "isogeny_type: slope multiplicity not divisible by its denominator "
                                    "(precision corruption)");
        out.push_back({part.slope.num, den, part.mult / den});
    }
    return out;
}

bool is_isoclinic(const FCrystal& E, Rational lambda) {
    Polygon P = newton_polygon(E);
    if (E.rank == 0) return true;
    return P.size() == 1 && P[0].slope == lambda;
}

bool is_divisible_by(const FCrystal& E, Rational ab) {
    long a = ab.num, b = ab.den;
    if (a < 0) throw PreconditionError("BadInput", "is_divisible_by: negative slope");
    if (E.rank == 0) return true;
    ZqMatrix M = semilinear_power(E, b);
    auto v = M.min_val();
    if (v.certified) return v.v >= a;
    if (v.v > a) return true; // everything vanished beyond a at certified precision
    throw PrecisionExhausted("is_divisible_by: entry valuations not certified past a", E.ctx->N + a + 2);
}

namespace {

SlopeWindowResult trivial_window_all(const FCrystal& E) {
    SlopeWindowResult W;
    W.sub = E;
    W.quotient = make_fcrystal(E.ctx, ZqMatrix(E.ctx, 0, 0));
    W.inclusion = identity_hom(E);
    return W;
}

SlopeWindowResult trivial_window_none(const FCrystal& E) {
    SlopeWindowResult W;
    W.sub = make_fcrystal(E.ctx, ZqMatrix(E.ctx, 0, 0));
    W.quotient = E;
    W.inclusion = make_hom(W.sub, E, ZqMatrix(E.ctx, E.rank, 0));
    return W;
}

} // namespace

SlopeWindowResult slope_window(const FCrystal& E, Rational lo, Rational hi) {
    if (hi < lo) throw PreconditionError("BadInput", "slope_window: lo > hi");
    if (E.rank == 0) return trivial_window_all(E);

    const CtxPtr& ctx = E.ctx;
    const int s = ctx->s;
    const long N = ctx->N;
    Polygon P = newton_polygon(E);

    if (!P.empty() && P.front().slope < lo)
        throw PreconditionError("WindowNotSeparating",
                                "slope_window: polygon has slopes below lo; the two-block split cannot "
                                "represent the requested window");

    long r_lo = 0, r_hi = 0;
    Rational w_lo = rat(0), w_hi = rat(0); // linearized valuations s*slope around the cut
    for (const auto& part : P) {
        if (part.slope <= hi) {
            r_lo += part.mult;
            w_lo = part.slope * rat(s);
        } else {
            if (r_hi == 0) w_hi = part.slope * rat(s);
            r_hi += part.mult;
        }
    }
    if (r_hi == 0) return trivial_window_all(E);
    if (r_lo == 0) return trivial_window_none(E);

    // scale so both cut valuations are integers and their gap is at least 2
    long t = std::lcm(w_lo.den, w_hi.den);
    Rational gap = w_hi - w_lo;
    while (rat(t) * gap < rat(2)) t *= 2;
    if ((rat(t) * (w_lo + w_hi)).num % 2 != 0) t *= 2;
    long u = ((rat(t) * (w_lo + w_hi)) / rat(2)).num;
    long delta = ((rat(t) * gap) / rat(2)).num;

    const long guard = 6;
    long K = (N + guard + delta - 1) / delta;

    for (int attempt = 0; attempt < 3; ++attempt, K *= 2) {
        long N_work = K * u + N + guard;
        if (N_work > 60000)
            throw PrecisionExhausted("slope_window: working precision blow-up", N_work);
        CtxPtr work = PrecisionContext::create(ctx->p, s, static_cast<int>(N_work), ctx->modulus);
        FCrystal Ew = make_fcrystal(work, E.A.rebase_exact(work));
        ZqMatrix C = semilinear_power(Ew, s).pow(static_cast<unsigned long>(t));
        ZqMatrix CK = C.pow(static_cast<unsigned long>(K));
        SmithForm S = smith(CK);

        // divisors ascending; the low-slope block must separate from the
        // high-slope block by a clear digit gap around K*u
        auto dval = [&](long i) {
            const auto& d = S.divisors[static_cast<size_t>(i)];
            return d.finite ? d.v : N_work;
        };
        bool ok = dval(r_lo - 1) <= K * u - (N + 2) && dval(r_lo) >= K * u + (N + 2);
        if (!ok) continue;

        // The saturated image of C^K approximates the low-slope lattice
        // (first columns of L^{-1}); the deep kernel approximates the
        // high-slope lattice (last columns of R).
        ZqMatrix Ulo = S.Linv.submatrix(0, 0, E.rank, static_cast<int>(r_lo)).rebase(ctx);
        ZqMatrix Uhi = S.R.submatrix(0, static_cast<int>(r_lo), E.rank, static_cast<int>(r_hi)).rebase(ctx);
        ZqMatrix U = Ulo.hstack(Uhi);
        ZqMatrix Uinv;
        try {
            Uinv = solve_exact(U, ZqMatrix::identity(ctx, E.rank));
        } catch (const PreconditionError&) {
            continue; // mixed basis not unimodular at this K; refine
        }
        ZqMatrix At = Uinv * E.A * U.sigma();

        ZqMatrix lower_left =
            At.submatrix(static_cast<int>(r_lo), 0, static_cast<int>(r_hi), static_cast<int>(r_lo));
        long defect = lower_left.min_val().v; // valuation floor either way
        if (defect < N - 2) continue;

        SlopeWindowResult W;
        W.sub = make_fcrystal(ctx, At.submatrix(0, 0, static_cast<int>(r_lo), static_cast<int>(r_lo)));
        W.quotient =
            make_fcrystal(ctx, At.submatrix(static_cast<int>(r_lo), static_cast<int>(r_lo),
                                            static_cast<int>(r_hi), static_cast<int>(r_hi)));
        W.inclusion = make_hom(W.sub, E, U.submatrix(0, 0, E.rank, static_cast<int>(r_lo)), 0,
                               static_cast<int>(std::max<long>(0, N - defect)));

        // certify the split: polygons confined to the stated ranges
        Polygon Ps = newton_polygon(W.sub);
        Polygon Pq = newton_polygon(W.quotient);
        bool sub_ok = std::all_of(Ps.begin(), Ps.end(),
                                  [&](const SlopePart& q) { return q.slope >= lo && q.slope <= hi; });
        bool quot_ok = std::all_of(Pq.begin(), Pq.end(), [&](const SlopePart& q) { return q.slope > hi; });
        if (!sub_ok || !quot_ok) continue;
        return W;
    }

    long estimate = N + s * (hi.num / hi.den + 1) * (r_hi + 1) + 8;
    throw PrecisionExhausted("slope_window: split not certified at working precision (estimated N attached)",
                             estimate);
}

} // namespace slopelab

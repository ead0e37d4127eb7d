#include "slopelab/solver.hpp"

#include <algorithm>

#include "slopelab/manin.hpp"

namespace slopelab {

long dmn_required_divisibility(long m, long n) {
    if (m == n) return 1;
    if (m > n) return 2 * (m + n) + 1;
    return n * n + 2 * (m + n) + 1;
}

namespace {

// x with sigma^M(x) - p^nu x = rhs, by the series sum p^(nu i) sigma^(-M(i+1))(rhs)
Zq series_solve(const CtxPtr& ctx, long M, long nu, const Zq& rhs) {
    return solve_sigma_m_pn(ctx, M, nu, rhs);
}

// x with p^e sigma^M(x) - x = rhs (e >= 1): x = -(1 + sum (sigma^M p^e)^j)(rhs)
Zq contracting_solve(const CtxPtr& ctx, long M, long e, const Zq& rhs) {
    long terms = static_cast<long>(rhs.prec()) / e + 2;
    Zq acc = Zq::zero(ctx).with_prec(rhs.prec());
    Zq term = rhs;
    for (long j = 0; j < terms; ++j) {
        acc += term;
        term = term.frobenius(M).times_pk(e);
    }
    return -acc;
}

// digit-by-digit Artin-Schreier-Witt solve of sigma^M(x) - x = c, extending
// the residue field when a digit equation has no solution
struct AswResult {
    CtxPtr ctx;
    Zq x;
    int extension = 1;
};

AswResult solve_asw(CtxPtr ctx, long M, Zq c, bool allow_extension) {
    const long max_total_degree = 64;
    CtxPtr cur = ctx;
    Zq x = Zq::zero(cur);
    Zq rhs = c;
    int ext = 1;
    const long digits = rhs.prec();
    for (long j = 0; j < digits; ++j) {
        Zq resid = rhs - (x.frobenius(M) - x);
        if (resid.is_zero_mod(digits)) break;
        auto dig = resid.div_pk_exact(j).residue();
        auto u = ffp::artin_schreier(cur->residue_field(),
                                     static_cast<int>(((M % cur->s) + cur->s) % cur->s), dig);
        if (!u) {
            if (!allow_extension)
                throw PreconditionError("ExtensionRequired",
                                        "solve_Dmn_system: digit equation insoluble over the residue field");
            long newdeg = static_cast<long>(cur->s) * static_cast<long>(cur->p);
            if (newdeg > max_total_degree)
                throw PreconditionError(
                    "ExtensionBudget",
                    "solve_Dmn_system: extension degree budget exhausted (the s=1, m=n=1 equation is "
                    "degenerate over W(F_q); the inductive-limit argument needs unbounded residue extensions)");
            CtxPtr big = PrecisionContext::create(cur->p, static_cast<int>(newdeg), cur->N);
            ContextEmbedding em = make_embedding(cur, big);
            x = em.apply(x);
            rhs = em.apply(rhs);
            ext *= static_cast<int>(cur->p);
            cur = big;
            --j; // retry this digit over the bigger field
            continue;
        }
        Zq lift = teichmuller(cur, *u).with_prec(rhs.prec());
        x = x + lift.times_pk(j);
    }
    return {cur, x, ext};
}

} // namespace

DmnSolution solve_Dmn_system(const CtxPtr& ctx, long m, long n, const std::vector<Zq>& b,
                             bool allow_extension) {
    if (n < 1 || m < 0) throw PreconditionError("BadInput", "solve_Dmn_system: need n >= 1, m >= 0");
    if (static_cast<long>(b.size()) != n)
        throw PreconditionError("BadInput", "solve_Dmn_system: need exactly n right-hand sides");
    for (const auto& bi : b) require_same_ctx(ctx, bi.ctx(), "solve_Dmn_system");
    const long N = ctx->N;

    if (m == n) {
        if (m != 1)
            throw PreconditionError("NonCoprime", "solve_Dmn_system: m = n requires m = n = 1");
        const Zq& b0 = b[0];
        if (!b0.is_zero_mod(1))
            throw PreconditionError("InsufficientDivisibility", "solve_Dmn_system: m = n = 1 needs b in p W");
        Zq c = b0.div_pk_exact(1);
        if (c.is_zero_rep()) return {ctx, {Zq::zero(ctx)}, 1, N - 2};
        AswResult r = solve_asw(ctx, 1, c, allow_extension);
        return {r.ctx, {r.x}, r.extension, r.x.prec() - 1};
    }

    long need = dmn_required_divisibility(m, n);
    for (const auto& bi : b) {
        if (bi.prec() < std::min<long>(need, N))
            throw PrecisionExhausted("solve_Dmn_system: right-hand side not certified to the required divisibility",
                                     need + n + m);
        if (!bi.is_zero_mod(std::min<long>(need, N)))
            throw PreconditionError("InsufficientDivisibility",
                                    "solve_Dmn_system: b_i must lie in p^(2(m+n)+1) W (m>n) or "
                                    "p^(n^2+2(m+n)+1) W (m<n)");
    }

    // c = p^{-1} b_0 + sum_{k=1}^{n-1} p^(k+m-n-1) sigma^(n-k)(b_k)
    Zq c = b[0].div_pk_exact(1);
    for (long k = 1; k < n; ++k) {
        Zq t = b[static_cast<size_t>(k)].frobenius(n - k);
        long e = k + m - n - 1;
        c = c + (e >= 0 ? t.times_pk(e) : t.div_pk_exact(-e));
    }

    // x_0 from p^(m-n) sigma^n(x_0) - x_0 = c
    Zq x0 = (m > n) ? contracting_solve(ctx, n, m - n, c)
                    : series_solve(ctx, n, n - m, c.times_pk(n - m));

    std::vector<Zq> x(static_cast<size_t>(n), Zq::zero(ctx));
    x[0] = x0;
    for (long i = 1; i < n; ++i) {
        // x_i = p^{-i} sigma^i(x_0) - sum_{k=1}^{i} p^(k-i-1) sigma^(i-k)(b_k)
        Zq xi = x0.frobenius(i).div_pk_exact(i);
        for (long k = 1; k <= i; ++k)
            xi = xi - b[static_cast<size_t>(k)].frobenius(i - k).div_pk_exact(i + 1 - k);
        x[static_cast<size_t>(i)] = xi;
    }
    long cert = N - n - m;
    return {ctx, std::move(x), 1, cert};
}

ZqMatrix phi_minus_pk_linearization(const FCrystal& E, long k) {
    const CtxPtr& ctx = E.ctx;
    const int s = ctx->s;
    const int r = E.rank;
    CtxPtr zp = PrecisionContext::create(ctx->p, 1, ctx->N);
    ZqMatrix M(zp, r * s, r * s);
    const auto& S = ctx->sigma_matrix(1);
    // block (i,j) = Mul(A_ij) * S
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            const Zq& a = E.A.at(i, j);
            if (a.is_zero_rep()) continue;
            // columns of Mul(a): coordinates of a * g^c
            Zq pw = a;
            std::vector<std::vector<mpz_class>> mul(static_cast<size_t>(s));
            Zq g = Zq::gen(ctx);
            for (int c = 0; c < s; ++c) {
                mul[static_cast<size_t>(c)] = pw.coords();
                if (c + 1 < s) pw = pw * g;
            }
            for (int row = 0; row < s; ++row)
                for (int col = 0; col < s; ++col) {
                    mpz_class acc = 0;
                    for (int t = 0; t < s; ++t)
                        acc += mul[static_cast<size_t>(t)][static_cast<size_t>(row)] *
                               S[static_cast<size_t>(t * s + col)];
                    M.at(i * s + row, j * s + col) = Zq::from_integer(zp, acc);
                }
        }
    for (int d = 0; d < r * s; ++d)
        M.at(d, d) = M.at(d, d) - Zq::one(zp).times_pk(k);
    return M;
}

FixedPoints fixed_points_phi_pk(const FCrystal& E, long k) {
    const CtxPtr& ctx = E.ctx;
    const int s = ctx->s;
    if (E.rank == 0) return {};
    ZqMatrix M = phi_minus_pk_linearization(E, k);
    SmithForm S = smith(M);
    long max_finite = 0;
    int dim = 0;
    for (const auto& d : S.divisors) {
        if (d.finite)
            max_finite = std::max(max_finite, d.v);
        else
            ++dim;
    }
    long cert = S.zero_cert;
    if (dim > 0 && max_finite > cert - 4)
        throw PrecisionExhausted("fixed_points: kernel dimension is precision-ambiguous",
                                 ctx->N + max_finite + 4);
    FixedPoints out;
    out.dimension = dim;
    const int rs = E.rank * s;
    for (int j = 0; j < rs; ++j) {
        if (S.divisors[static_cast<size_t>(j)].finite) continue;
        std::vector<Zq> vec;
        vec.reserve(static_cast<size_t>(E.rank));
        for (int i = 0; i < E.rank; ++i) {
            std::vector<mpz_class> coords(static_cast<size_t>(s));
            for (int c = 0; c < s; ++c)
                coords[static_cast<size_t>(c)] = S.R.at(i * s + c, j).coords()[0];
            vec.emplace_back(ctx, std::move(coords));
        }
        out.basis.push_back(std::move(vec));
    }
    return out;
}

PhiMinusPResult invert_phi_minus_p(const FCrystal& E, const std::vector<Zq>& b) {
    const CtxPtr& ctx = E.ctx;
    const long N = ctx->N;
    const int r = E.rank;
    if (static_cast<int>(b.size()) != r)
        throw PreconditionError("BadInput", "invert_phi_minus_p: rhs has wrong length");
    Polygon P = newton_polygon(E);
    if (!P.empty() && !(rat(1) < P.front().slope))
        throw PreconditionError("DivisibilityWitnessNotFound",
                                "invert_phi_minus_p: crystal has a slope <= 1");

    // witness search: smallest a with val(F^a) >= a + 1
    long a = 0, bw = 0;
    ZqMatrix Ma = E.A;
    const long a_max = static_cast<long>(ctx->s) * r * r + ctx->s * r + 4;
    for (long cand = 1; cand <= a_max; ++cand) {
        if (cand > 1) Ma = Ma * E.A.sigma(cand - 1);
        auto v = Ma.min_val();
        long vv = v.certified ? v.v : v.v; // floor either way
        if (vv >= cand + 1) {
            a = cand;
            bw = vv - cand;
            break;
        }
    }
    if (a == 0)
        throw PreconditionError("DivisibilityWitnessNotFound",
                                "invert_phi_minus_p: no divisibility witness below the search bound");

    ZqMatrix Fp = Ma.div_pk_exact(a + bw); // F' with F^a = p^(a+b) F'

    auto apply_Fprime = [&](const std::vector<Zq>& v) {
        std::vector<Zq> sv(v.size());
        for (size_t i = 0; i < v.size(); ++i) sv[i] = v[i].frobenius(a);
        std::vector<Zq> out(static_cast<size_t>(r), Zq::zero(ctx));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) out[static_cast<size_t>(i)] += Fp.at(i, j) * sv[static_cast<size_t>(j)];
        return out;
    };
    auto apply_F = [&](const std::vector<Zq>& v) {
        std::vector<Zq> sv(v.size());
        for (size_t i = 0; i < v.size(); ++i) sv[i] = v[i].frobenius(1);
        std::vector<Zq> out(static_cast<size_t>(r), Zq::zero(ctx));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) out[static_cast<size_t>(i)] += E.A.at(i, j) * sv[static_cast<size_t>(j)];
        return out;
    };

    // z = sum_{i<=T} (p^b F')^i b ; then (F^a - p^a)(-z) = p^a b - p^a (p^b F')^(T+1) b
    long T = N / std::max<long>(bw, 1) + 2;
    std::vector<Zq> z(static_cast<size_t>(r), Zq::zero(ctx));
    std::vector<Zq> term = b;
    for (long i = 0; i <= T; ++i) {
        for (int j = 0; j < r; ++j) z[static_cast<size_t>(j)] += term[static_cast<size_t>(j)];
        if (i < T) {
            term = apply_Fprime(term);
            for (auto& t : term) t = t.times_pk(bw);
        }
    }
    // x = Q(F)(-z) with Q(F) = sum_{i<a} p^i F^(a-1-i)
    std::vector<Zq> x(static_cast<size_t>(r), Zq::zero(ctx));
    std::vector<Zq> w(static_cast<size_t>(r), Zq::zero(ctx));
    for (size_t i = 0; i < w.size(); ++i) w[i] = -z[i];
    std::vector<std::vector<Zq>> Fpow; // F^j(-z) for j = 0..a-1
    Fpow.push_back(w);
    for (long j = 1; j < a; ++j) Fpow.push_back(apply_F(Fpow.back()));
    for (long i = 0; i < a; ++i)
        for (int j = 0; j < r; ++j)
            x[static_cast<size_t>(j)] += Fpow[static_cast<size_t>(a - 1 - i)][static_cast<size_t>(j)].times_pk(i);

    // verify against the returned representatives: (F - p) x = p^a b + O(p^N)
    std::vector<Zq> lhs = apply_F(x);
    for (int j = 0; j < r; ++j) lhs[static_cast<size_t>(j)] -= x[static_cast<size_t>(j)].times_pk(1);
    long resid_floor = N;
    for (int j = 0; j < r; ++j) {
        Zq d = lhs[static_cast<size_t>(j)] - b[static_cast<size_t>(j)].times_pk(a);
        resid_floor = std::min(resid_floor, d.rep_val());
    }

    PhiMinusPResult out;
    out.x = std::move(x);
    out.denom = a;
    out.residual_valuation = resid_floor - a;
    out.witness_a = a;
    out.witness_b = bw;
    return out;
}

} // namespace slopelab

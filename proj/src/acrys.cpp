#include "slopelab/acrys.hpp"

#include <algorithm>
#include <random>

namespace slopelab::acrys {

long Params::exp_denominator() const {
    long v = 1;
    for (int i = 0; i < e; ++i) {
        if (v > (1L << 61) / static_cast<long>(p))
            throw PreconditionError("BadInput", "acrys: root depth overflows exponent storage");
        v *= static_cast<long>(p);
    }
    return v;
}

long Params::degree_cap_num() const {
    long den = exp_denominator();
    if (D > (1L << 61) / den)
        throw PreconditionError("BadInput", "acrys: degree cap overflows exponent storage");
    return D * den;
}

Params make_params(uint64_t p, int s, int d, int e, long D, int r, long K, int L) {
    Params par{p, s, d, e, D, r, K, L};
    if (!ffp::is_prime(p)) throw PreconditionError("BadInput", "acrys: p not prime");
    if (s < 1 || d < 1 || e < 0 || D < 1 || r < 1 || K < 1 || L < 1)
        throw PreconditionError("BadInput", "acrys: nonpositive parameter");
    (void)par.degree_cap_num();
    return par;
}

AcrysPtr AcrysContext::create(const Params& par) {
    auto C = std::make_shared<AcrysContext>();
    C->par = par;
    C->lift = PrecisionContext::create(par.p, par.s, par.L + 2);
    C->F = C->lift->residue_field();
    return C;
}

// ---------------------------------------------------------------- PElem

PElem p_zero() { return {}; }

bool p_is_zero(const PElem& x) { return x.terms.empty(); }

PElem p_monomial(const AcrysPtr& C, const std::vector<long>& exp_num, const ffp::FqEl& coeff) {
    if (static_cast<int>(exp_num.size()) != C->par.d)
        throw PreconditionError("BadInput", "acrys: monomial exponent arity mismatch");
    long total = 0;
    for (long v : exp_num) {
        if (v < 0) throw PreconditionError("BadInput", "acrys: negative exponent");
        total += v;
    }
    PElem x;
    if (!ffp::fq_is_zero(coeff) && total <= C->par.degree_cap_num()) x.terms[exp_num] = coeff;
    return x;
}

PElem p_add(const AcrysPtr& C, const PElem& x, const PElem& y) {
    PElem z = x;
    for (const auto& [mono, c] : y.terms) {
        auto it = z.terms.find(mono);
        if (it == z.terms.end()) {
            z.terms[mono] = c;
        } else {
            it->second = ffp::fq_add(C->F, it->second, c);
            if (ffp::fq_is_zero(it->second)) z.terms.erase(it);
        }
    }
    return z;
}

PElem p_mul(const AcrysPtr& C, const PElem& x, const PElem& y, bool& taint) {
    PElem z;
    const long cap = C->par.degree_cap_num();
    for (const auto& [ma, ca] : x.terms)
        for (const auto& [mb, cb] : y.terms) {
            ffp::FqEl c = ffp::fq_mul(C->F, ca, cb);
            if (ffp::fq_is_zero(c)) continue;
            std::vector<long> m(ma.size());
            long total = 0;
            for (size_t i = 0; i < m.size(); ++i) {
                m[i] = ma[i] + mb[i];
                total += m[i];
            }
            if (total > cap) {
                taint = true;
                continue;
            }
            auto it = z.terms.find(m);
            if (it == z.terms.end()) {
                z.terms[m] = c;
            } else {
                it->second = ffp::fq_add(C->F, it->second, c);
                if (ffp::fq_is_zero(it->second)) z.terms.erase(it);
            }
        }
    return z;
}

PElem p_frob(const AcrysPtr& C, const PElem& x, bool& taint) {
    PElem z;
    const long cap = C->par.degree_cap_num();
    for (const auto& [mono, c] : x.terms) {
        std::vector<long> m(mono.size());
        long total = 0;
        bool overflow = false;
        for (size_t i = 0; i < m.size(); ++i) {
            if (mono[i] > cap / static_cast<long>(C->par.p)) { overflow = true; break; }
            m[i] = mono[i] * static_cast<long>(C->par.p);
            total += m[i];
        }
        if (overflow || total > cap) {
            taint = true;
            continue;
        }
        z.terms[m] = ffp::fq_frob(C->F, c);
    }
    return z;
}

PElem p_root(const AcrysPtr& C, const PElem& x) {
    PElem z;
    for (const auto& [mono, c] : x.terms) {
        std::vector<long> m(mono.size());
        for (size_t i = 0; i < m.size(); ++i) {
            if (mono[i] % static_cast<long>(C->par.p) != 0)
                throw PrecisionExhausted("acrys: p-th root exceeds the root depth e (TruncationTooSmall)",
                                         0);
            m[i] = mono[i] / static_cast<long>(C->par.p);
        }
        z.terms[m] = ffp::fq_frob_inv(C->F, c);
    }
    return z;
}

// ------------------------------------------------- ghost-lift machinery

namespace {

// canonical characteristic-zero lift of P: same monomials, digit-lifted
// coefficients in Z_q at precision L+2
using PLift = std::map<std::vector<long>, Zq>;

PLift lift_pelem(const AcrysPtr& C, const PElem& x) {
    PLift z;
    for (const auto& [mono, c] : x.terms) {
        std::vector<mpz_class> coords(c.size());
        for (size_t i = 0; i < c.size(); ++i) coords[i] = static_cast<unsigned long>(c[i]);
        z[mono] = Zq(C->lift, std::move(coords));
    }
    return z;
}

PElem reduce_pelem(const PLift& x) {
    PElem z;
    for (const auto& [mono, c] : x) {
        ffp::FqEl r = c.residue();
        if (!ffp::fq_is_zero(r)) z.terms[mono] = r;
    }
    return z;
}

void pl_add_into(PLift& z, const std::vector<long>& mono, const Zq& c) {
    auto it = z.find(mono);
    if (it == z.end()) {
        if (!c.is_zero_rep()) z[mono] = c;
    } else {
        it->second = it->second + c;
        if (it->second.is_zero_rep()) z.erase(it);
    }
}

PLift pl_add(const PLift& x, const PLift& y) {
    PLift z = x;
    for (const auto& [mono, c] : y) pl_add_into(z, mono, c);
    return z;
}

PLift pl_neg(const PLift& x) {
    PLift z;
    for (const auto& [mono, c] : x) z[mono] = -c;
    return z;
}

PLift pl_mul(const AcrysPtr& C, const PLift& x, const PLift& y, bool& taint) {
    PLift z;
    const long cap = C->par.degree_cap_num();
    for (const auto& [ma, ca] : x)
        for (const auto& [mb, cb] : y) {
            Zq c = ca * cb;
            if (c.is_zero_rep()) continue;
            std::vector<long> m(ma.size());
            long total = 0;
            for (size_t i = 0; i < m.size(); ++i) {
                m[i] = ma[i] + mb[i];
                total += m[i];
            }
            if (total > cap) {
                // the degree cut is an ideal of the lift as well; flag only
                // when a unit digit is lost
                if (!ffp::fq_is_zero(c.residue())) taint = true;
                continue;
            }
            pl_add_into(z, m, c);
        }
    return z;
}

PLift pl_pow(const AcrysPtr& C, PLift base, mpz_class e, bool& taint) {
    PLift r;
    r[std::vector<long>(static_cast<size_t>(C->par.d), 0)] = Zq::one(C->lift);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = pl_mul(C, r, base, taint);
        e >>= 1;
        if (e > 0) base = pl_mul(C, base, base, taint);
    }
    return r;
}

PLift pl_scale(const PLift& x, const Zq& c) {
    PLift z;
    for (const auto& [mono, v] : x) {
        Zq t = v * c;
        if (!t.is_zero_rep()) z[mono] = t;
    }
    return z;
}

PLift pl_div_pk(const PLift& x, long k) {
    PLift z;
    for (const auto& [mono, v] : x) {
        Zq t = v.div_pk_exact(k);
        if (!t.is_zero_rep()) z[mono] = t;
    }
    return z;
}

std::vector<PLift> ghost(const AcrysPtr& C, const WittVec& x, bool& taint) {
    const int L = C->par.L;
    mpz_class pz(static_cast<unsigned long>(C->par.p));
    std::vector<PLift> lifts(static_cast<size_t>(L));
    for (int i = 0; i < L; ++i) lifts[static_cast<size_t>(i)] = lift_pelem(C, x.a[static_cast<size_t>(i)]);
    std::vector<PLift> g(static_cast<size_t>(L));
    for (int n = 0; n < L; ++n) {
        PLift acc;
        for (int i = 0; i <= n; ++i) {
            mpz_class e;
            mpz_pow_ui(e.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(n - i));
            PLift t = pl_pow(C, lifts[static_cast<size_t>(i)], e, taint);
            acc = pl_add(acc, pl_scale(t, Zq::one(C->lift).times_pk(i)));
        }
        g[static_cast<size_t>(n)] = std::move(acc);
    }
    return g;
}

WittVec unghost(const AcrysPtr& C, const std::vector<PLift>& g, bool taint) {
    const int L = C->par.L;
    mpz_class pz(static_cast<unsigned long>(C->par.p));
    std::vector<PLift> c(static_cast<size_t>(L));
    WittVec out;
    out.taint = taint;
    out.a.resize(static_cast<size_t>(L));
    for (int n = 0; n < L; ++n) {
        PLift acc = g[static_cast<size_t>(n)];
        for (int i = 0; i < n; ++i) {
            mpz_class e;
            mpz_pow_ui(e.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(n - i));
            PLift t = pl_pow(C, c[static_cast<size_t>(i)], e, out.taint);
            acc = pl_add(acc, pl_neg(pl_scale(t, Zq::one(C->lift).times_pk(i))));
        }
        c[static_cast<size_t>(n)] = pl_div_pk(acc, n);
        out.a[static_cast<size_t>(n)] = reduce_pelem(c[static_cast<size_t>(n)]);
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------- Witt

WittVec w_zero(const AcrysPtr& C) {
    WittVec x;
    x.a.resize(static_cast<size_t>(C->par.L));
    return x;
}

WittVec w_teichmuller(const AcrysPtr& C, const PElem& v) {
    WittVec x = w_zero(C);
    x.a[0] = v;
    return x;
}

WittVec w_from_integer(const AcrysPtr& C, const mpz_class& n) {
    const int L = C->par.L;
    std::vector<PLift> g(static_cast<size_t>(L));
    std::vector<long> unit(static_cast<size_t>(C->par.d), 0);
    for (int i = 0; i < L; ++i) {
        Zq c = Zq::from_integer(C->lift, n);
        if (!c.is_zero_rep()) g[static_cast<size_t>(i)][unit] = c;
    }
    return unghost(C, g, false);
}

bool w_is_zero(const WittVec& x) {
    return std::all_of(x.a.begin(), x.a.end(), [](const PElem& c) { return p_is_zero(c); });
}

long w_val(const WittVec& x) {
    for (size_t i = 0; i < x.a.size(); ++i)
        if (!p_is_zero(x.a[i])) return static_cast<long>(i);
    return static_cast<long>(x.a.size());
}

bool w_eq(const WittVec& x, const WittVec& y) {
    if (x.a.size() != y.a.size()) return false;
    for (size_t i = 0; i < x.a.size(); ++i)
        if (x.a[i].terms != y.a[i].terms) return false;
    return true;
}

WittVec w_add(const AcrysPtr& C, const WittVec& x, const WittVec& y) {
    bool taint = x.taint || y.taint;
    auto gx = ghost(C, x, taint);
    auto gy = ghost(C, y, taint);
    for (size_t n = 0; n < gx.size(); ++n) gx[n] = pl_add(gx[n], gy[n]);
    return unghost(C, gx, taint);
}

WittVec w_neg(const AcrysPtr& C, const WittVec& x) {
    bool taint = x.taint;
    auto gx = ghost(C, x, taint);
    for (auto& g : gx) g = pl_neg(g);
    return unghost(C, gx, taint);
}

WittVec w_sub(const AcrysPtr& C, const WittVec& x, const WittVec& y) { return w_add(C, x, w_neg(C, y)); }

WittVec w_mul(const AcrysPtr& C, const WittVec& x, const WittVec& y) {
    bool taint = x.taint || y.taint;
    auto gx = ghost(C, x, taint);
    auto gy = ghost(C, y, taint);
    for (size_t n = 0; n < gx.size(); ++n) gx[n] = pl_mul(C, gx[n], gy[n], taint);
    return unghost(C, gx, taint);
}

WittVec w_scale_int(const AcrysPtr& C, const mpz_class& n, const WittVec& x) {
    bool taint = x.taint;
    auto gx = ghost(C, x, taint);
    Zq c = Zq::from_integer(C->lift, n);
    for (auto& g : gx) g = pl_scale(g, c);
    return unghost(C, gx, taint);
}

WittVec w_times_p(const AcrysPtr& C, const WittVec& x) {
    WittVec z = w_zero(C);
    z.taint = x.taint;
    bool t = z.taint;
    for (size_t i = 0; i + 1 < x.a.size(); ++i) z.a[i + 1] = p_frob(C, x.a[i], t);
    z.taint = t;
    return z;
}

WittVec w_div_p(const AcrysPtr& C, const WittVec& x) {
    if (!p_is_zero(x.a[0]))
        throw PreconditionError("NotDivisible", "acrys: Witt vector not divisible by p");
    WittVec z = w_zero(C);
    z.taint = x.taint;
    for (size_t i = 1; i < x.a.size(); ++i) z.a[i - 1] = p_root(C, x.a[i]);
    return z;
}

WittVec w_frobenius(const AcrysPtr& C, const WittVec& x) {
    WittVec z = w_zero(C);
    bool t = x.taint;
    for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = p_frob(C, x.a[i], t);
    z.taint = t;
    return z;
}

WittVec w_frobenius_inv(const AcrysPtr& C, const WittVec& x) {
    WittVec z = w_zero(C);
    z.taint = x.taint;
    for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = p_root(C, x.a[i]);
    return z;
}

// ------------------------------------------------------------ DP layer

AcrysElem dp_zero() { return {}; }

bool dp_is_zero(const AcrysElem& u) {
    return std::all_of(u.terms.begin(), u.terms.end(),
                       [](const auto& kv) { return w_is_zero(kv.second); });
}

AcrysElem dp_gamma(const AcrysPtr& C, const std::vector<long>& k, const WittVec& coeff) {
    if (static_cast<int>(k.size()) != C->par.r)
        throw PreconditionError("BadInput", "acrys: DP index arity mismatch");
    long total = 0;
    for (long v : k) {
        if (v < 0) throw PreconditionError("BadInput", "acrys: negative DP index");
        total += v;
    }
    AcrysElem u;
    u.taint = coeff.taint;
    if (total > C->par.K) {
        if (!w_is_zero(coeff)) u.taint = true;
        return u;
    }
    if (!w_is_zero(coeff)) u.terms[k] = coeff;
    return u;
}

AcrysElem dp_add(const AcrysPtr& C, const AcrysElem& u, const AcrysElem& v) {
    AcrysElem z = u;
    z.taint = u.taint || v.taint;
    for (const auto& [k, w] : v.terms) {
        auto it = z.terms.find(k);
        if (it == z.terms.end()) {
            z.terms[k] = w;
        } else {
            it->second = w_add(C, it->second, w);
            z.taint = z.taint || it->second.taint;
            if (w_is_zero(it->second)) z.terms.erase(it);
        }
    }
    return z;
}

AcrysElem dp_sub(const AcrysPtr& C, const AcrysElem& u, const AcrysElem& v) {
    AcrysElem nv;
    nv.taint = v.taint;
    for (const auto& [k, w] : v.terms) nv.terms[k] = w_neg(C, w);
    return dp_add(C, u, nv);
}

AcrysElem dp_mul(const AcrysPtr& C, const AcrysElem& u, const AcrysElem& v) {
    AcrysElem z;
    z.taint = u.taint || v.taint;
    for (const auto& [ka, wa] : u.terms)
        for (const auto& [kb, wb] : v.terms) {
            std::vector<long> k(ka.size());
            long total = 0;
            mpz_class binom = 1;
            for (size_t i = 0; i < k.size(); ++i) {
                k[i] = ka[i] + kb[i];
                total += k[i];
                mpz_class b;
                mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(k[i]),
                             static_cast<unsigned long>(ka[i]));
                binom *= b;
            }
            WittVec w = w_scale_int(C, binom, w_mul(C, wa, wb));
            z.taint = z.taint || w.taint;
            if (w_is_zero(w)) continue;
            if (total > C->par.K) {
                z.taint = true;
                continue;
            }
            auto it = z.terms.find(k);
            if (it == z.terms.end()) {
                z.terms[k] = w;
            } else {
                it->second = w_add(C, it->second, w);
                if (w_is_zero(it->second)) z.terms.erase(it);
            }
        }
    return z;
}

mpz_class dp_frobenius_unit(uint64_t p, long k) {
    // (kp)! / (k! p^k); Legendre gives v_p((kp)!/k!) = k, so this is a unit
    mpz_class num, den;
    mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(k * static_cast<long>(p)));
    mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(k));
    mpz_class pk;
    mpz_class pz(static_cast<unsigned long>(p));
    mpz_pow_ui(pk.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(k));
    den *= pk;
    mpz_class q = num / den;
    return q;
}

AcrysElem frobenius_acrys(const AcrysPtr& C, const AcrysElem& u) {
    AcrysElem z;
    z.taint = u.taint;
    const long p = static_cast<long>(C->par.p);
    for (const auto& [k, w] : u.terms) {
        std::vector<long> kp(k.size());
        long total = 0, absk = 0;
        mpz_class unit = 1;
        for (size_t i = 0; i < k.size(); ++i) {
            kp[i] = k[i] * p;
            total += kp[i];
            absk += k[i];
            if (k[i] > 0) unit *= dp_frobenius_unit(C->par.p, k[i]);
        }
        WittVec c = w_scale_int(C, unit, w_frobenius(C, w));
        for (long j = 0; j < absk; ++j) c = w_times_p(C, c);
        z.taint = z.taint || c.taint;
        if (w_is_zero(c)) continue;
        if (total > C->par.K) {
            z.taint = true;
            continue;
        }
        auto it = z.terms.find(kp);
        if (it == z.terms.end())
            z.terms[kp] = c;
        else
            it->second = w_add(C, it->second, c);
    }
    return z;
}

AcrysElem dp_scale_witt(const AcrysPtr& C, const WittVec& w, const AcrysElem& u) {
    AcrysElem z;
    z.taint = u.taint || w.taint;
    for (const auto& [k, c] : u.terms) {
        WittVec t = w_mul(C, w, c);
        z.taint = z.taint || t.taint;
        if (!w_is_zero(t)) z.terms[k] = t;
    }
    return z;
}

AcrysElem dp_times_pk(const AcrysPtr& C, long k, const AcrysElem& u) {
    AcrysElem z = u;
    for (long j = 0; j < k; ++j) {
        AcrysElem next;
        next.taint = z.taint;
        for (const auto& [idx, w] : z.terms) {
            WittVec t = w_times_p(C, w);
            next.taint = next.taint || t.taint;
            if (!w_is_zero(t)) next.terms[idx] = t;
        }
        z = std::move(next);
    }
    return z;
}

bool dp_eq(const AcrysElem& u, const AcrysElem& v) {
    auto norm = [](const AcrysElem& x) {
        std::map<std::vector<long>, WittVec> t;
        for (const auto& [k, w] : x.terms)
            if (!w_is_zero(w)) t[k] = w;
        return t;
    };
    auto a = norm(u), b = norm(v);
    if (a.size() != b.size()) return false;
    for (const auto& [k, w] : a) {
        auto it = b.find(k);
        if (it == b.end() || !w_eq(w, it->second)) return false;
    }
    return true;
}

// ------------------------------------------------------------- solvers

namespace {

long sigma_m_val_gain(const AcrysPtr& C, long m, const std::vector<long>& k) {
    // sigma^m(gamma_k) = p^(|k|(1+p+...+p^(m-1))) * unit * gamma_(k p^m)
    long absk = 0;
    for (long v : k) absk += v;
    long geom = 0, pw = 1;
    for (long i = 0; i < m; ++i) {
        geom += pw;
        pw *= static_cast<long>(C->par.p);
    }
    return absk * geom;
}

bool index_is_zero(const std::vector<long>& k) {
    return std::all_of(k.begin(), k.end(), [](long v) { return v == 0; });
}

long needed_multiplier(const AcrysPtr& C, long m, long n, const std::vector<long>& k0,
                       const WittVec& coeff) {
    if (index_is_zero(k0)) return 0;
    const long L = C->par.L;
    long off = w_val(coeff);
    std::vector<long> k = k0;
    long need = 0;
    long pm = 1;
    for (long i = 0; i < m; ++i) pm *= static_cast<long>(C->par.p);
    for (int guard = 0; guard < 512; ++guard) {
        need = std::max(need, n - off);
        off += sigma_m_val_gain(C, m, k) - n;
        long total = 0;
        bool overflow = false;
        for (auto& v : k) {
            if (v > C->par.K) { overflow = true; break; }
            v *= pm;
            total += v;
        }
        if (overflow || total > C->par.K) break; // annihilated by the index cap
        if (off >= L) break;                     // coefficient dead in W_L
    }
    return std::max<long>(need, 0);
}

// solve sigma^m(y) - p^n y = a0 over W_L(P) by the root series
WittVec constant_series_solve(const AcrysPtr& C, long m, long n, const WittVec& a0) {
    const long L = C->par.L;
    long terms = L / n + 2;
    WittVec acc = w_zero(C);
    for (long i = terms - 1; i >= 0; --i) {
        WittVec t = a0;
        for (long j = 0; j < m * (i + 1); ++j) t = w_frobenius_inv(C, t);
        for (long j = 0; j < n * i; ++j) t = w_times_p(C, t);
        acc = w_add(C, acc, t);
    }
    return acc;
}

} // namespace

AcrysSolveResult solve_sigma_m_pn_acrys(const AcrysPtr& C, long m, long n, const AcrysElem& b) {
    if (m < 1 || n < 1) throw PreconditionError("BadInput", "acrys solve: need m, n >= 1");
    long c = 0;
    for (const auto& [k, w] : b.terms)
        if (!w_is_zero(w)) c = std::max(c, needed_multiplier(C, m, n, k, w));
    if (c > n * n)
        throw PreconditionError("HypothesisViolation",
                                "acrys solve: multiplier exceeded the n^2 guarantee");

    AcrysElem resid = dp_times_pk(C, c, b);
    AcrysElem x = dp_zero();
    bool taint = b.taint;

    for (int guard = 0; guard < 4096; ++guard) {
        // take the nonconstant term with the smallest total index
        auto pick = resid.terms.end();
        long best = -1;
        for (auto it = resid.terms.begin(); it != resid.terms.end(); ++it) {
            if (index_is_zero(it->first) || w_is_zero(it->second)) continue;
            long total = 0;
            for (long v : it->first) total += v;
            if (best < 0 || total < best) {
                best = total;
                pick = it;
            }
        }
        if (pick == resid.terms.end()) break;
        std::vector<long> k = pick->first;
        WittVec w = pick->second;
        if (w_val(w) < n)
            throw PreconditionError("HypothesisViolation",
                                    "acrys solve: elimination hit an underdivisible coefficient");
        WittVec q = w;
        for (long j = 0; j < n; ++j) q = w_div_p(C, q);
        AcrysElem piece = dp_gamma(C, k, q);
        x = dp_sub(C, x, piece);
        resid.terms.erase(pick);
        AcrysElem img = frobenius_acrys(C, piece);
        taint = taint || img.taint;
        resid = dp_add(C, resid, img);
    }

    // constant part via the root series
    std::vector<long> zero_idx(static_cast<size_t>(C->par.r), 0);
    auto it = resid.terms.find(zero_idx);
    if (it != resid.terms.end() && !w_is_zero(it->second)) {
        WittVec y = constant_series_solve(C, m, n, it->second);
        AcrysElem piece = dp_gamma(C, zero_idx, y);
        x = dp_add(C, x, piece);
        // resid -= (sigma^m - p^n)(piece)
        AcrysElem img = dp_sub(C, frobenius_acrys(C, piece), dp_times_pk(C, n, piece));
        resid = dp_sub(C, resid, img);
    }

    taint = taint || resid.taint || x.taint;
    if (!dp_is_zero(resid))
        throw PreconditionError("HypothesisViolation", "acrys solve: nonzero final residual");

    AcrysSolveResult out;
    out.x = std::move(x);
    out.x.taint = taint;
    out.multiplier = c;
    out.taint = taint;
    return out;
}

MeasureReport measure_coker_exponent(const AcrysPtr& C, long m, long n, int sample_budget) {
    MeasureReport rep;
    rep.m = m;
    rep.n = n;
    rep.caps = C->par;
    rep.paper_bound = (m > n) ? 2 * (m + n) + 1 : n * n;

    std::vector<AcrysElem> probes;
    long lowmax = std::max<long>(1, n / m);
    for (long k = 1; k <= std::min<long>(lowmax + 1, C->par.K); ++k) {
        std::vector<long> idx(static_cast<size_t>(C->par.r), 0);
        idx[0] = k;
        probes.push_back(dp_gamma(C, idx, w_from_integer(C, 1)));
    }
    std::mt19937_64 rng(0xac125ULL ^ (static_cast<uint64_t>(m) << 8) ^ static_cast<uint64_t>(n));
    long root_budget = C->par.exp_denominator();
    for (int t = 0; t < sample_budget; ++t) {
        AcrysElem b = dp_zero();
        int nterms = 1 + static_cast<int>(rng() % 2);
        for (int j = 0; j < nterms; ++j) {
            std::vector<long> idx(static_cast<size_t>(C->par.r), 0);
            idx[0] = 1 + static_cast<long>(rng() % static_cast<unsigned long>(std::max<long>(2, lowmax + 1)));
            // monomial coefficient with enough root depth left for the solve
            std::vector<long> mono(static_cast<size_t>(C->par.d), 0);
            mono[0] = (static_cast<long>(rng() % 3)) * std::max<long>(root_budget / 8, 1);
            ffp::FqEl coef(static_cast<size_t>(C->par.s), 0);
            coef[0] = 1 + rng() % (C->par.p - 1 ? C->par.p - 1 : 1);
            WittVec w = w_teichmuller(C, p_monomial(C, mono, coef));
            b = dp_add(C, b, dp_gamma(C, idx, w));
        }
        if (!dp_is_zero(b)) probes.push_back(b);
    }

    for (const auto& b : probes) {
        auto sol = solve_sigma_m_pn_acrys(C, m, n, b);
        // substitution check, exact in the truncated ring
        AcrysElem lhs = dp_sub(C, frobenius_acrys(C, sol.x), dp_times_pk(C, n, sol.x));
        AcrysElem rhs = dp_times_pk(C, sol.multiplier, b);
        if (!dp_eq(lhs, rhs))
            throw PreconditionError("HypothesisViolation", "measure: substitution check failed");
        rep.measured_exponent = std::max(rep.measured_exponent, sol.multiplier);
        rep.taint = rep.taint || sol.taint;
    }
    return rep;
}

} // namespace slopelab::acrys

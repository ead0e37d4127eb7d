#include "slopelab/ffpoly.hpp"

#include <algorithm>
#include <cassert>
#include <random>

#include "slopelab/errors.hpp"

namespace slopelab::ffp {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

uint64_t invmod(uint64_t a, uint64_t p) {
    // p prime
    int64_t t = 0, newt = 1;
    int64_t r = static_cast<int64_t>(p), newr = static_cast<int64_t>(a % p);
    while (newr != 0) {
        int64_t q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (r != 1) throw PreconditionError("NonUnit", "invmod: not invertible");
    return static_cast<uint64_t>(t < 0 ? t + static_cast<int64_t>(p) : t);
}

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

Poly trim(Poly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly add(const Poly& a, const Poly& b, uint64_t p) {
    Poly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) {
        uint64_t x = i < a.size() ? a[i] : 0;
        uint64_t y = i < b.size() ? b[i] : 0;
        c[i] = (x + y) % p;
    }
    return trim(std::move(c));
}

Poly sub(const Poly& a, const Poly& b, uint64_t p) {
    Poly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) {
        uint64_t x = i < a.size() ? a[i] : 0;
        uint64_t y = i < b.size() ? b[i] : 0;
        c[i] = (x + p - y) % p;
    }
    return trim(std::move(c));
}

Poly mul(const Poly& a, const Poly& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + static_cast<__uint128_t>(a[i]) * b[j]) % p;
    }
    return trim(std::move(c));
}

Poly rem(Poly f, const Poly& g, uint64_t p) {
    assert(!g.empty());
    uint64_t lead_inv = invmod(g.back(), p);
    while (f.size() >= g.size()) {
        uint64_t q = mulmod(f.back(), lead_inv, p);
        size_t off = f.size() - g.size();
        if (q != 0)
            for (size_t i = 0; i < g.size(); ++i)
                f[off + i] = (f[off + i] + p - mulmod(q, g[i], p)) % p;
        f.pop_back();
        f = trim(std::move(f));
        if (f.size() < g.size()) break;
    }
    return trim(std::move(f));
}

Poly gcd(Poly a, Poly b, uint64_t p) {
    a = trim(std::move(a));
    b = trim(std::move(b));
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        uint64_t li = invmod(a.back(), p);
        for (auto& c : a) c = mulmod(c, li, p);
    }
    return a;
}

Poly powmod_poly(Poly base, mpz_class e, const Poly& mod, uint64_t p) {
    Poly r = {1};
    base = rem(std::move(base), mod, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = rem(mul(r, base, p), mod, p);
        base = rem(mul(base, base, p), mod, p);
        e >>= 1;
    }
    return r;
}

bool is_irreducible(const Poly& f, uint64_t p) {
    int s = degree(f);
    if (s < 1) return false;
    if (s == 1) return true;
    mpz_class pz(static_cast<unsigned long>(p));
    Poly x = {0, 1};
    // x^(p^s) == x mod f
    mpz_class ps;
    mpz_pow_ui(ps.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(s));
    Poly xps = powmod_poly(x, ps, f, p);
    if (trim(sub(xps, x, p)) != Poly{}) return false;
    // gcd(x^(p^(s/l)) - x, f) == 1 for prime l | s
    int m = s;
    for (int l = 2; l * l <= m; ++l) {
        if (m % l) continue;
        while (m % l == 0) m /= l;
        mpz_class e;
        mpz_pow_ui(e.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(s / l));
        Poly g = gcd(sub(powmod_poly(x, e, f, p), x, p), f, p);
        if (degree(g) != 0) return false;
    }
    if (m > 1) {
        mpz_class e;
        mpz_pow_ui(e.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(s / m));
        Poly g = gcd(sub(powmod_poly(x, e, f, p), x, p), f, p);
        if (degree(g) != 0) return false;
    }
    return true;
}

FqCtx make_fq(uint64_t p, Poly h) {
    FqCtx F;
    F.p = p;
    F.h = trim(std::move(h));
    F.s = degree(F.h);
    mpz_class pz(static_cast<unsigned long>(p));
    mpz_pow_ui(F.q.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(F.s));
    return F;
}

FqEl fq_zero(const FqCtx& F) { return FqEl(F.s, 0); }

FqEl fq_one(const FqCtx& F) {
    FqEl a(F.s, 0);
    a[0] = 1 % F.p;
    return a;
}

FqEl fq_from_int(const FqCtx& F, uint64_t v) {
    FqEl a(F.s, 0);
    a[0] = v % F.p;
    return a;
}

bool fq_is_zero(const FqEl& a) {
    return std::all_of(a.begin(), a.end(), [](uint64_t c) { return c == 0; });
}

bool fq_eq(const FqEl& a, const FqEl& b) { return a == b; }

FqEl fq_add(const FqCtx& F, const FqEl& a, const FqEl& b) {
    FqEl c(F.s);
    for (int i = 0; i < F.s; ++i) c[i] = (a[i] + b[i]) % F.p;
    return c;
}

FqEl fq_sub(const FqCtx& F, const FqEl& a, const FqEl& b) {
    FqEl c(F.s);
    for (int i = 0; i < F.s; ++i) c[i] = (a[i] + F.p - b[i]) % F.p;
    return c;
}

FqEl fq_neg(const FqCtx& F, const FqEl& a) { return fq_sub(F, fq_zero(F), a); }

FqEl fq_mul(const FqCtx& F, const FqEl& a, const FqEl& b) {
    Poly pa(a.begin(), a.end()), pb(b.begin(), b.end());
    Poly c = rem(mul(trim(std::move(pa)), trim(std::move(pb)), F.p), F.h, F.p);
    c.resize(F.s, 0);
    return c;
}

FqEl fq_inv(const FqCtx& F, const FqEl& a) {
    // extended euclid in F_p[y] against the modulus
    Poly r0 = F.h, r1 = trim(Poly(a.begin(), a.end()));
    if (r1.empty()) throw PreconditionError("NonUnit", "fq_inv: zero element");
    Poly t0 = {}, t1 = {1};
    while (degree(r1) > 0) {
        // divide r0 by r1
        Poly q;
        Poly r = r0;
        uint64_t li = invmod(r1.back(), F.p);
        q.assign(r.size() >= r1.size() ? r.size() - r1.size() + 1 : 0, 0);
        while (r.size() >= r1.size() && !r.empty()) {
            uint64_t qc = mulmod(r.back(), li, F.p);
            size_t off = r.size() - r1.size();
            q[off] = qc;
            for (size_t i = 0; i < r1.size(); ++i)
                r[off + i] = (r[off + i] + F.p - mulmod(qc, r1[i], F.p)) % F.p;
            r = trim(std::move(r));
        }
        Poly t2 = sub(t0, mul(trim(std::move(q)), t1, F.p), F.p);
        r0 = r1; r1 = trim(std::move(r));
        t0 = t1; t1 = std::move(t2);
        if (r1.empty()) throw PreconditionError("NonUnit", "fq_inv: zero element");
    }
    uint64_t c = invmod(r1[0], F.p);
    Poly res = t1;
    for (auto& x : res) x = mulmod(x, c, F.p);
    res = rem(std::move(res), F.h, F.p);
    res.resize(F.s, 0);
    return res;
}

FqEl fq_pow(const FqCtx& F, FqEl a, mpz_class e) {
    FqEl r = fq_one(F);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = fq_mul(F, r, a);
        a = fq_mul(F, a, a);
        e >>= 1;
    }
    return r;
}

FqEl fq_frob(const FqCtx& F, const FqEl& a) {
    return fq_pow(F, a, mpz_class(static_cast<unsigned long>(F.p)));
}

FqEl fq_frob_inv(const FqCtx& F, const FqEl& a) {
    if (F.s == 1) return a;
    mpz_class e;
    mpz_class pz(static_cast<unsigned long>(F.p));
    mpz_pow_ui(e.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(F.s - 1));
    return fq_pow(F, a, e);
}

std::optional<FqEl> artin_schreier(const FqCtx& F, int n, const FqEl& c) {
    // columns of T = Frob^n - id on the coordinate basis
    int s = F.s;
    std::vector<std::vector<uint64_t>> M(s, std::vector<uint64_t>(s + 1, 0));
    for (int j = 0; j < s; ++j) {
        FqEl e = fq_zero(F);
        e[j] = 1;
        FqEl t = e;
        for (int k = 0; k < n; ++k) t = fq_frob(F, t);
        t = fq_sub(F, t, e);
        for (int i = 0; i < s; ++i) M[i][j] = t[i];
    }
    for (int i = 0; i < s; ++i) M[i][s] = c[i];
    // gaussian elimination mod p
    int row = 0;
    std::vector<int> pivot_col;
    for (int col = 0; col < s && row < s; ++col) {
        int pr = -1;
        for (int i = row; i < s; ++i)
            if (M[i][col] != 0) { pr = i; break; }
        if (pr < 0) continue;
        std::swap(M[row], M[pr]);
        uint64_t inv = invmod(M[row][col], F.p);
        for (int j = col; j <= s; ++j) M[row][j] = mulmod(M[row][j], inv, F.p);
        for (int i = 0; i < s; ++i) {
            if (i == row || M[i][col] == 0) continue;
            uint64_t f = M[i][col];
            for (int j = col; j <= s; ++j)
                M[i][j] = (M[i][j] + F.p - mulmod(f, M[row][j], F.p)) % F.p;
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (int i = row; i < s; ++i)
        if (M[i][s] != 0) return std::nullopt;
    FqEl x = fq_zero(F);
    for (int i = 0; i < row; ++i) x[pivot_col[i]] = M[i][s];
    return x;
}

PolyFq pfq_trim(PolyFq f) {
    while (!f.empty() && fq_is_zero(f.back())) f.pop_back();
    return f;
}

PolyFq pfq_mul(const FqCtx& F, const PolyFq& a, const PolyFq& b) {
    if (a.empty() || b.empty()) return {};
    PolyFq c(a.size() + b.size() - 1, fq_zero(F));
    for (size_t i = 0; i < a.size(); ++i) {
        if (fq_is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = fq_add(F, c[i + j], fq_mul(F, a[i], b[j]));
    }
    return pfq_trim(std::move(c));
}

PolyFq pfq_rem(PolyFq f, const PolyFq& g, const FqCtx& F) {
    f = pfq_trim(std::move(f));
    FqEl li = fq_inv(F, g.back());
    while (f.size() >= g.size() && !f.empty()) {
        FqEl q = fq_mul(F, f.back(), li);
        size_t off = f.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i)
            f[off + i] = fq_sub(F, f[off + i], fq_mul(F, q, g[i]));
        f = pfq_trim(std::move(f));
    }
    return f;
}

PolyFq pfq_gcd(PolyFq a, PolyFq b, const FqCtx& F) {
    a = pfq_trim(std::move(a));
    b = pfq_trim(std::move(b));
    while (!b.empty()) {
        PolyFq r = pfq_rem(a, b, F);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        FqEl li = fq_inv(F, a.back());
        for (auto& c : a) c = fq_mul(F, c, li);
    }
    return a;
}

PolyFq pfq_divexact(const PolyFq& f, const PolyFq& g, const FqCtx& F) {
    PolyFq r = pfq_trim(f);
    PolyFq q(r.size() >= g.size() ? r.size() - g.size() + 1 : 0, fq_zero(F));
    FqEl li = fq_inv(F, g.back());
    while (r.size() >= g.size() && !r.empty()) {
        FqEl qc = fq_mul(F, r.back(), li);
        size_t off = r.size() - g.size();
        q[off] = qc;
        for (size_t i = 0; i < g.size(); ++i)
            r[off + i] = fq_sub(F, r[off + i], fq_mul(F, qc, g[i]));
        r = pfq_trim(std::move(r));
    }
    return q;
}

static PolyFq pfq_powmod(const FqCtx& F, PolyFq base, mpz_class e, const PolyFq& mod) {
    PolyFq r = {fq_one(F)};
    base = pfq_rem(std::move(base), mod, F);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = pfq_rem(pfq_mul(F, r, base), mod, F);
        base = pfq_rem(pfq_mul(F, base, base), mod, F);
        e >>= 1;
    }
    return r;
}

static void split_equal_degree(const FqCtx& F, const PolyFq& f, std::vector<FqEl>& out,
                               std::mt19937_64& rng) {
    PolyFq g = pfq_trim(f);
    if (g.empty() || g.size() == 1) return;
    if (g.size() == 2) {
        // monic linear: root = -c0/c1
        FqEl root = fq_neg(F, fq_mul(F, g[0], fq_inv(F, g[1])));
        out.push_back(root);
        return;
    }
    for (int attempt = 0; attempt < 256; ++attempt) {
        FqEl a(F.s);
        for (int i = 0; i < F.s; ++i) a[i] = rng() % F.p;
        PolyFq h;
        if (F.p % 2 == 1) {
            PolyFq xa = {a, fq_one(F)};
            mpz_class e = (F.q - 1) / 2;
            PolyFq t = pfq_powmod(F, xa, e, g);
            if (t.empty()) continue;
            t[0] = fq_sub(F, t[0], fq_one(F));
            h = pfq_gcd(t, g, F);
        } else {
            // trace map sum_{i<log2(q)} (a*x)^(2^i)
            PolyFq ax = {fq_zero(F), a};
            PolyFq t = pfq_rem(ax, g, F);
            PolyFq acc = t;
            size_t bits = mpz_sizeinbase(F.q.get_mpz_t(), 2) - 1;
            for (size_t i = 1; i < bits; ++i) {
                t = pfq_rem(pfq_mul(F, t, t), g, F);
                acc.resize(std::max(acc.size(), t.size()), fq_zero(F));
                for (size_t j = 0; j < t.size(); ++j) acc[j] = fq_add(F, acc[j], t[j]);
                acc = pfq_trim(std::move(acc));
            }
            h = pfq_gcd(acc, g, F);
        }
        if (!h.empty() && h.size() > 1 && h.size() < g.size()) {
            split_equal_degree(F, h, out, rng);
            split_equal_degree(F, pfq_divexact(g, h, F), out, rng);
            return;
        }
    }
    throw PreconditionError("RootSplitFailure", "poly_roots: equal-degree split did not converge");
}

std::vector<FqEl> poly_roots(const FqCtx& F, PolyFq f, uint64_t seed) {
    f = pfq_trim(std::move(f));
    std::vector<FqEl> out;
    if (f.size() <= 1) return out;
    // keep only the part splitting over F_q
    PolyFq x = {fq_zero(F), fq_one(F)};
    PolyFq xq = pfq_powmod(F, x, F.q, f);
    PolyFq d = xq;
    d.resize(std::max<size_t>(d.size(), 2), fq_zero(F));
    d[1] = fq_sub(F, d[1], fq_one(F));
    PolyFq g = pfq_gcd(pfq_trim(std::move(d)), f, F);
    std::mt19937_64 rng(seed ^ 0x5eed5eedULL);
    split_equal_degree(F, g, out, rng);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace slopelab::ffp

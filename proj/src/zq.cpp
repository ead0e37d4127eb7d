#include "slopelab/zq.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace slopelab {

namespace {

mpz_class mod_reduce(const mpz_class& v, const mpz_class& m) {
    mpz_class r = v % m;
    if (r < 0) r += m;
    return r;
}

} // namespace

std::vector<mpz_class> PrecisionContext::default_modulus(uint64_t p, int s) {
    if (s == 1) return {mpz_class(0), mpz_class(1)}; // x
    // enumerate lower coefficients in base-p counter order, least first
    mpz_class bound;
    mpz_class pz(static_cast<unsigned long>(p));
    mpz_pow_ui(bound.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(s));
    for (mpz_class v = 0; v < bound; ++v) {
        ffp::Poly cand(static_cast<size_t>(s) + 1, 0);
        mpz_class t = v;
        for (int i = 0; i < s; ++i) {
            mpz_class digit = t % pz;
            cand[static_cast<size_t>(i)] = digit.get_ui();
            t /= pz;
        }
        cand[static_cast<size_t>(s)] = 1;
        if (ffp::is_irreducible(cand, p)) {
            std::vector<mpz_class> out;
            out.reserve(cand.size());
            for (uint64_t c : cand) out.emplace_back(static_cast<unsigned long>(c));
            return out;
        }
    }
    throw PreconditionError("BadInput", "default_modulus: no irreducible found (unreachable)");
}

CtxPtr PrecisionContext::create(uint64_t p, int s, int N, std::vector<mpz_class> modulus) {
    if (!ffp::is_prime(p))
        throw PreconditionError("BadInput", "context: p is not prime");
    if (s < 1) throw PreconditionError("BadInput", "context: s must be >= 1");
    if (N < 1) throw PreconditionError("BadInput", "context: N must be >= 1");
    auto ctx = std::shared_ptr<PrecisionContext>(new PrecisionContext());
    ctx->p = p;
    ctx->s = s;
    ctx->N = N;
    ctx->pk_.resize(static_cast<size_t>(N) + 1);
    ctx->pk_[0] = 1;
    mpz_class pz(static_cast<unsigned long>(p));
    for (int k = 1; k <= N; ++k) ctx->pk_[static_cast<size_t>(k)] = ctx->pk_[static_cast<size_t>(k - 1)] * pz;

    if (modulus.empty()) modulus = default_modulus(p, s);
    if (static_cast<int>(modulus.size()) != s + 1 || modulus.back() != 1)
        throw PreconditionError("BadInput", "context: modulus must be monic of degree s");
    for (auto& c : modulus) c = mod_reduce(c, ctx->pN());
    ctx->modulus = std::move(modulus);

    ffp::Poly hbar(static_cast<size_t>(s) + 1);
    for (int i = 0; i <= s; ++i)
        hbar[static_cast<size_t>(i)] = mpz_class(ctx->modulus[static_cast<size_t>(i)] % pz).get_ui();
    if (!ffp::is_irreducible(ffp::trim(hbar), p))
        throw PreconditionError("BadInput", "context: modulus is reducible mod p");
    hbar.resize(static_cast<size_t>(s) + 1, 0);
    ctx->fq_ = ffp::make_fq(p, hbar);

    ctx->build_tables();
    return ctx;
}

const std::vector<mpz_class>& PrecisionContext::sigma_matrix(int k) const {
    k %= s;
    if (k < 0) k += s;
    return sigma_pow_[static_cast<size_t>(k)];
}

bool PrecisionContext::same(const PrecisionContext& o) const {
    return this == &o || (p == o.p && s == o.s && N == o.N && modulus == o.modulus);
}

void require_same_ctx(const CtxPtr& a, const CtxPtr& b, const char* op) {
    if (!a || !b || !a->same(*b)) throw context_mismatch(op);
}

void PrecisionContext::build_tables() {
    // sigma_pow_[k] = matrix of sigma^k in the basis 1, g, ..., g^(s-1)
    sigma_pow_.assign(static_cast<size_t>(s), {});
    std::vector<mpz_class> id(static_cast<size_t>(s) * static_cast<size_t>(s), mpz_class(0));
    for (int i = 0; i < s; ++i) id[static_cast<size_t>(i * s + i)] = 1;
    sigma_pow_[0] = id;
    if (s == 1) return;

    // find sigma(g): the root of the modulus congruent to g^p mod p, by
    // Newton iteration (the derivative is a unit since the residue modulus
    // is separable)
    CtxPtr self(this, [](const PrecisionContext*) {}); // non-owning alias for Zq ops
    Zq g = Zq::gen(self);
    mpz_class pz(static_cast<unsigned long>(p));
    Zq r = g.pow_mpz(pz);
    std::vector<Zq> mcoef;
    mcoef.reserve(modulus.size());
    for (const auto& c : modulus) mcoef.push_back(Zq::from_integer(self, c));
    auto eval = [&](const Zq& x, bool deriv) {
        Zq acc = Zq::zero(self);
        if (!deriv) {
            for (size_t i = modulus.size(); i-- > 0;) acc = acc * x + mcoef[i];
        } else {
            for (size_t i = modulus.size(); i-- > 1;)
                acc = acc * x + Zq::from_integer(self, mpz_class(static_cast<unsigned long>(i)) * modulus[i]);
        }
        return acc;
    };
    for (int iter = 0; iter < 8 * (N + 2); ++iter) {
        Zq fx = eval(r, false);
        if (fx.is_zero_rep()) break;
        r = r - fx * eval(r, true).inv();
    }
    if (!eval(r, false).is_zero_rep())
        throw PreconditionError("BadInput", "context: Frobenius root lift failed");

    // columns of S = coordinates of sigma(g)^j
    std::vector<mpz_class> S(static_cast<size_t>(s) * static_cast<size_t>(s), mpz_class(0));
    Zq rp = Zq::one(self);
    for (int j = 0; j < s; ++j) {
        for (int i = 0; i < s; ++i) S[static_cast<size_t>(i * s + j)] = rp.coords()[static_cast<size_t>(i)];
        if (j + 1 < s) rp = rp * r;
    }
    sigma_pow_[1] = S;
    auto matmul = [&](const std::vector<mpz_class>& A, const std::vector<mpz_class>& B) {
        std::vector<mpz_class> C(static_cast<size_t>(s) * static_cast<size_t>(s), mpz_class(0));
        for (int i = 0; i < s; ++i)
            for (int k = 0; k < s; ++k) {
                const mpz_class& a = A[static_cast<size_t>(i * s + k)];
                if (a == 0) continue;
                for (int j = 0; j < s; ++j)
                    C[static_cast<size_t>(i * s + j)] =
                        mod_reduce(C[static_cast<size_t>(i * s + j)] + a * B[static_cast<size_t>(k * s + j)], pN());
            }
        return C;
    };
    for (int k = 2; k < s; ++k) sigma_pow_[static_cast<size_t>(k)] = matmul(S, sigma_pow_[static_cast<size_t>(k - 1)]);
    // sigma^s must be the identity
    if (matmul(S, sigma_pow_[static_cast<size_t>(s - 1)]) != id)
        throw PreconditionError("BadInput", "context: sigma^s != id (modulus not unramified-compatible)");
}

Zq::Zq(CtxPtr ctx, std::vector<mpz_class> coords, int prec) : ctx_(std::move(ctx)), c_(std::move(coords)) {
    if (static_cast<int>(c_.size()) != ctx_->s)
        throw PreconditionError("BadInput", "Zq: wrong coordinate count");
    prec_ = prec < 0 ? ctx_->N : std::min(prec, ctx_->N);
    reduce();
}

void Zq::reduce() {
    for (auto& x : c_) x = mod_reduce(x, ctx_->pN());
}

Zq Zq::zero(const CtxPtr& ctx) { return Zq(ctx, std::vector<mpz_class>(static_cast<size_t>(ctx->s), mpz_class(0))); }

Zq Zq::one(const CtxPtr& ctx) {
    std::vector<mpz_class> c(static_cast<size_t>(ctx->s), mpz_class(0));
    c[0] = 1;
    return Zq(ctx, std::move(c));
}

Zq Zq::gen(const CtxPtr& ctx) {
    std::vector<mpz_class> c(static_cast<size_t>(ctx->s), mpz_class(0));
    if (ctx->s == 1) {
        // g is the class of x = 0 under the degree-1 default modulus
        c[0] = mod_reduce(-ctx->modulus[0], ctx->pN());
    } else {
        c[1] = 1;
    }
    return Zq(ctx, std::move(c));
}

Zq Zq::from_integer(const CtxPtr& ctx, const mpz_class& v) {
    std::vector<mpz_class> c(static_cast<size_t>(ctx->s), mpz_class(0));
    c[0] = v;
    return Zq(ctx, std::move(c));
}

Zq Zq::operator+(const Zq& o) const {
    require_same_ctx(ctx_, o.ctx_, "zq_add");
    std::vector<mpz_class> c(c_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = c_[i] + o.c_[i];
    return Zq(ctx_, std::move(c), std::min(prec_, o.prec_));
}

Zq Zq::operator-(const Zq& o) const {
    require_same_ctx(ctx_, o.ctx_, "zq_sub");
    std::vector<mpz_class> c(c_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = c_[i] - o.c_[i];
    return Zq(ctx_, std::move(c), std::min(prec_, o.prec_));
}

Zq Zq::operator-() const {
    std::vector<mpz_class> c(c_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = -c_[i];
    return Zq(ctx_, std::move(c), prec_);
}

Zq Zq::operator*(const Zq& o) const {
    require_same_ctx(ctx_, o.ctx_, "zq_mul");
    const int s = ctx_->s;
    std::vector<mpz_class> prod(static_cast<size_t>(2 * s - 1), mpz_class(0));
    for (int i = 0; i < s; ++i) {
        if (c_[static_cast<size_t>(i)] == 0) continue;
        for (int j = 0; j < s; ++j)
            prod[static_cast<size_t>(i + j)] += c_[static_cast<size_t>(i)] * o.c_[static_cast<size_t>(j)];
    }
    // reduce by the monic modulus
    for (int d = 2 * s - 2; d >= s; --d) {
        mpz_class t = mod_reduce(prod[static_cast<size_t>(d)], ctx_->pN());
        prod[static_cast<size_t>(d)] = 0;
        if (t == 0) continue;
        for (int j = 0; j < s; ++j)
            prod[static_cast<size_t>(d - s + j)] -= t * ctx_->modulus[static_cast<size_t>(j)];
    }
    prod.resize(static_cast<size_t>(s));
    return Zq(ctx_, std::move(prod), std::min(prec_, o.prec_));
}

Zq Zq::inv() const {
    if (!is_unit()) throw PreconditionError("NonUnit", "zq_inv: input has positive valuation");
    ffp::FqEl r = residue();
    ffp::FqEl rinv = ffp::fq_inv(ctx_->residue_field(), r);
    std::vector<mpz_class> c(static_cast<size_t>(ctx_->s), mpz_class(0));
    for (int i = 0; i < ctx_->s; ++i) c[static_cast<size_t>(i)] = static_cast<unsigned long>(rinv[static_cast<size_t>(i)]);
    Zq y(ctx_, std::move(c), prec_);
    Zq two = Zq::from_integer(ctx_, 2).with_prec(prec_);
    int steps = 1;
    while ((1 << steps) < ctx_->N + 1 && steps < 30) ++steps;
    for (int i = 0; i <= steps; ++i) y = y * (two - *this * y);
    return y;
}

Zq::Val Zq::val() const {
    long best = rep_val();
    if (best >= prec_) return {static_cast<long>(prec_), false};
    return {best, true};
}

long Zq::rep_val() const {
    long best = ctx_->N;
    for (const auto& x : c_) {
        if (x == 0) continue;
        mpz_class t = x;
        long v = static_cast<long>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(),
                                              mpz_class(static_cast<unsigned long>(ctx_->p)).get_mpz_t()));
        best = std::min(best, v);
    }
    return best;
}

bool Zq::is_unit() const {
    if (prec_ < 1) return false;
    auto v = val();
    return v.certified && v.v == 0;
}

Zq Zq::frobenius(long power) const {
    const int s = ctx_->s;
    if (s == 1) return *this;
    const auto& M = ctx_->sigma_matrix(static_cast<int>(((power % s) + s) % s));
    std::vector<mpz_class> c(static_cast<size_t>(s), mpz_class(0));
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            if (c_[static_cast<size_t>(j)] != 0)
                c[static_cast<size_t>(i)] += M[static_cast<size_t>(i * s + j)] * c_[static_cast<size_t>(j)];
    return Zq(ctx_, std::move(c), prec_);
}

Zq Zq::times_pk(long k) const {
    if (k < 0) throw PreconditionError("BadInput", "times_pk: negative exponent");
    if (k == 0) return *this;
    mpz_class f = ctx_->pk(static_cast<int>(std::min<long>(k, ctx_->N)));
    std::vector<mpz_class> c(c_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = c_[i] * f;
    return Zq(ctx_, std::move(c), static_cast<int>(std::min<long>(ctx_->N, prec_ + k)));
}

Zq Zq::div_pk_exact(long k) const {
    if (k < 0) throw PreconditionError("BadInput", "div_pk_exact: negative exponent");
    if (k == 0) return *this;
    const mpz_class& f = ctx_->pk(static_cast<int>(std::min<long>(k, ctx_->N)));
    std::vector<mpz_class> c(c_.size());
    for (size_t i = 0; i < c.size(); ++i) {
        if (!mpz_divisible_p(c_[i].get_mpz_t(), f.get_mpz_t()))
            throw PreconditionError("NotDivisible", "div_pk_exact: representative not divisible by p^k");
        c[i] = c_[i] / f;
    }
    return Zq(ctx_, std::move(c), static_cast<int>(std::max<long>(0, prec_ - k)));
}

Zq Zq::pow_ui(unsigned long e) const { return pow_mpz(mpz_class(e)); }

Zq Zq::pow_mpz(const mpz_class& e) const {
    Zq r = Zq::one(ctx_).with_prec(prec_);
    Zq b = *this;
    mpz_class t = e;
    while (t > 0) {
        if (mpz_odd_p(t.get_mpz_t())) r = r * b;
        b = b * b;
        t >>= 1;
    }
    return r;
}

bool Zq::is_zero_rep() const {
    return std::all_of(c_.begin(), c_.end(), [](const mpz_class& x) { return x == 0; });
}

bool Zq::is_zero_mod(long k) const {
    if (k <= 0) return true;
    const mpz_class& f = ctx_->pk(static_cast<int>(std::min<long>(k, ctx_->N)));
    return std::all_of(c_.begin(), c_.end(),
                       [&](const mpz_class& x) { return mpz_divisible_p(x.get_mpz_t(), f.get_mpz_t()); });
}

bool Zq::rep_equal(const Zq& o) const { return c_ == o.c_; }

Zq Zq::with_prec(int newprec) const {
    Zq r = *this;
    r.prec_ = std::min(newprec, ctx_->N);
    return r;
}

ffp::FqEl Zq::residue() const {
    ffp::FqEl r(static_cast<size_t>(ctx_->s));
    mpz_class pz(static_cast<unsigned long>(ctx_->p));
    for (int i = 0; i < ctx_->s; ++i) r[static_cast<size_t>(i)] = mpz_class(c_[static_cast<size_t>(i)] % pz).get_ui();
    return r;
}

std::string Zq::to_string() const {
    std::ostringstream os;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ',';
        os << c_[i].get_str();
    }
    return os.str();
}

Zq teichmuller(const CtxPtr& ctx, const ffp::FqEl& residue) {
    if (static_cast<int>(residue.size()) != ctx->s)
        throw PreconditionError("BadInput", "teichmuller: residue has wrong length");
    std::vector<mpz_class> c(static_cast<size_t>(ctx->s));
    for (int i = 0; i < ctx->s; ++i)
        c[static_cast<size_t>(i)] = static_cast<unsigned long>(residue[static_cast<size_t>(i)] % ctx->p);
    Zq t(ctx, std::move(c));
    mpz_class q;
    mpz_class pz(static_cast<unsigned long>(ctx->p));
    mpz_pow_ui(q.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(ctx->s));
    for (int i = 0; i < ctx->N + 1; ++i) {
        Zq next = t.pow_mpz(q);
        if (next.rep_equal(t)) break;
        t = next;
    }
    return t;
}

Zq solve_sigma_m_pn(const CtxPtr& ctx, long m, long n, const Zq& b) {
    if (m < 1 || n < 1) throw PreconditionError("BadInput", "solve_sigma_m_pn: need m,n >= 1");
    require_same_ctx(ctx, b.ctx(), "solve_sigma_m_pn");
    long terms = static_cast<long>(b.prec()) / n + 2;
    Zq x = Zq::zero(ctx).with_prec(b.prec());
    for (long i = terms - 1; i >= 0; --i) {
        // accumulate p^(n i) sigma^(-m(i+1))(b) from the tail in
        x = x + b.frobenius(-m * (i + 1)).times_pk(n * i);
    }
    return x.with_prec(b.prec());
}

} // namespace slopelab

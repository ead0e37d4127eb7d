#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "slopelab/errors.hpp"
#include "slopelab/ffpoly.hpp"

namespace slopelab {

class PrecisionContext;
using CtxPtr = std::shared_ptr<const PrecisionContext>;

// The ambient ring Z_q = W(F_{p^s}) at absolute precision p^N, presented as
// (Z/p^N)[g]/(modulus(g)) for a monic degree-s lift of a polynomial
// irreducible over F_p. sigma is the unique Frobenius lift, cached as its
// coordinate matrices (sigma is Z_p-linear).
//
// Contexts are immutable after creation and safe to share between threads.
class PrecisionContext {
public:
    // Empty modulus selects the default: the lexicographically least monic
    // irreducible of degree s over F_p, lifted with coefficients in [0, p).
    static CtxPtr create(uint64_t p, int s, int N, std::vector<mpz_class> modulus = {});
    static std::vector<mpz_class> default_modulus(uint64_t p, int s);

    uint64_t p = 0;
    int s = 0;
    int N = 0;
    std::vector<mpz_class> modulus; // s+1 coefficients, monic, reduced mod p^N

    const mpz_class& pk(int k) const { return pk_.at(static_cast<size_t>(k)); }
    const mpz_class& pN() const { return pk_.back(); }
    const ffp::FqCtx& residue_field() const { return fq_; }

    // Row-major s x s coordinate matrix of sigma^k over Z/p^N, 0 <= k < s.
    const std::vector<mpz_class>& sigma_matrix(int k) const;

    bool same(const PrecisionContext& other) const;

private:
    PrecisionContext() = default;
    void build_tables();
    std::vector<mpz_class> pk_;
    ffp::FqCtx fq_;
    std::vector<std::vector<mpz_class>> sigma_pow_;
};

void require_same_ctx(const CtxPtr& a, const CtxPtr& b, const char* op);

// Element of Z_q certified to absolute precision p^prec (prec <= N).
// Coordinates are a representative mod p^N; digits at and above prec are
// carried but not certified. add/mul take the minimum of the operands'
// certified precisions; division by p lowers it by one.
class Zq {
public:
    Zq() = default;
    Zq(CtxPtr ctx, std::vector<mpz_class> coords, int prec = -1); // -1 = full N

    static Zq zero(const CtxPtr& ctx);
    static Zq one(const CtxPtr& ctx);
    static Zq gen(const CtxPtr& ctx); // the class of g
    static Zq from_integer(const CtxPtr& ctx, const mpz_class& v);

    const CtxPtr& ctx() const { return ctx_; }
    int prec() const { return prec_; }
    const std::vector<mpz_class>& coords() const { return c_; }

    Zq operator+(const Zq& o) const;
    Zq operator-(const Zq& o) const;
    Zq operator-() const;
    Zq operator*(const Zq& o) const;
    Zq& operator+=(const Zq& o) { return *this = *this + o; }
    Zq& operator-=(const Zq& o) { return *this = *this - o; }
    Zq& operator*=(const Zq& o) { return *this = *this * o; }

    // Multiplicative inverse of a unit (Hensel lift of the residue inverse).
    Zq inv() const;

    struct Val {
        long v = 0;
        bool certified = false; // false: value ≡ 0 at certified precision, v = prec
    };
    Val val() const;

    // valuation of the stored representative, ignoring certification
    // (N for the zero representative)
    long rep_val() const;

    bool is_unit() const;

    // sigma^power; power may be negative (sigma has order s).
    Zq frobenius(long power = 1) const;

    Zq times_pk(long k) const;     // multiply by p^k, k >= 0
    Zq div_pk_exact(long k) const; // exact division; representative must be divisible
    Zq pow_ui(unsigned long e) const;
    Zq pow_mpz(const mpz_class& e) const;

    bool is_zero_rep() const;          // representative equals 0 mod p^N
    bool is_zero_mod(long k) const;    // representative ≡ 0 mod p^k
    bool rep_equal(const Zq& o) const; // representatives agree mod p^N

    Zq with_prec(int newprec) const;

    // Residue in F_q = F_{p^s}.
    ffp::FqEl residue() const;

    std::string to_string() const; // comma-separated decimal coordinates

private:
    void reduce();
    CtxPtr ctx_;
    std::vector<mpz_class> c_;
    int prec_ = 0;
};

// The unique (q-1)-st root of unity (or 0) lifting the given residue,
// computed by iterating x -> x^(p^s) to stabilization.
Zq teichmuller(const CtxPtr& ctx, const ffp::FqEl& residue);

// x with sigma^m(x) - p^n * x = b, m >= 1, n >= 1, by the convergent series
// x = sum_{i>=0} p^(n i) sigma^(-m(i+1))(b). Exact mod p^prec(b), and
// val(x) >= val(b).
Zq solve_sigma_m_pn(const CtxPtr& ctx, long m, long n, const Zq& b);

} // namespace slopelab

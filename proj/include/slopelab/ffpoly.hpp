#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace slopelab::ffp {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);
uint64_t invmod(uint64_t a, uint64_t p);

// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime(uint64_t n);

// Dense univariate polynomials over F_p, little-endian coefficients,
// normalized (no trailing zeros; empty vector = 0).
using Poly = std::vector<uint64_t>;

Poly trim(Poly f);
int degree(const Poly& f); // -1 for the zero polynomial
Poly add(const Poly& a, const Poly& b, uint64_t p);
Poly sub(const Poly& a, const Poly& b, uint64_t p);
Poly mul(const Poly& a, const Poly& b, uint64_t p);
Poly rem(Poly f, const Poly& g, uint64_t p);
Poly gcd(Poly a, Poly b, uint64_t p);
Poly powmod_poly(Poly base, mpz_class e, const Poly& mod, uint64_t p);
bool is_irreducible(const Poly& f, uint64_t p);

// F_q = F_p[y]/(h) for h monic irreducible of degree s.
struct FqCtx {
    uint64_t p = 0;
    int s = 0;
    Poly h;       // monic, degree s
    mpz_class q;  // p^s
};

FqCtx make_fq(uint64_t p, Poly h);

using FqEl = std::vector<uint64_t>; // always length s

FqEl fq_zero(const FqCtx& F);
FqEl fq_one(const FqCtx& F);
FqEl fq_from_int(const FqCtx& F, uint64_t v);
bool fq_is_zero(const FqEl& a);
bool fq_eq(const FqEl& a, const FqEl& b);
FqEl fq_add(const FqCtx& F, const FqEl& a, const FqEl& b);
FqEl fq_sub(const FqCtx& F, const FqEl& a, const FqEl& b);
FqEl fq_neg(const FqCtx& F, const FqEl& a);
FqEl fq_mul(const FqCtx& F, const FqEl& a, const FqEl& b);
FqEl fq_inv(const FqCtx& F, const FqEl& a);
FqEl fq_pow(const FqCtx& F, FqEl a, mpz_class e);
FqEl fq_frob(const FqCtx& F, const FqEl& a);       // a^p
FqEl fq_frob_inv(const FqCtx& F, const FqEl& a);   // a^(p^(s-1))

// Solve x^(p^n) - x = c over F_q; the map is F_p-linear so this is a
// linear solve in the coordinate basis. Empty result = no solution in F_q.
std::optional<FqEl> artin_schreier(const FqCtx& F, int n, const FqEl& c);

// Polynomials over F_q, little-endian, normalized.
using PolyFq = std::vector<FqEl>;

PolyFq pfq_trim(PolyFq f);
PolyFq pfq_mul(const FqCtx& F, const PolyFq& a, const PolyFq& b);
PolyFq pfq_rem(PolyFq f, const PolyFq& g, const FqCtx& F);
PolyFq pfq_gcd(PolyFq a, PolyFq b, const FqCtx& F);
PolyFq pfq_divexact(const PolyFq& f, const PolyFq& g, const FqCtx& F);

// All roots of f lying in F_q (Cantor-Zassenhaus split, deterministic seed).
// Roots are returned sorted by coordinate vector.
std::vector<FqEl> poly_roots(const FqCtx& F, PolyFq f, uint64_t seed);

} // namespace slopelab::ffp

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "slopelab/zq.hpp"

namespace slopelab::acrys {

// Parameters of the truncated model T = W_L(P)<x_1..x_r> where
// P = F_q[X_1^(p^-e) .. X_d^(p^-e)] truncated at total degree <= D.
// Monomial exponents are stored as integer numerators over the fixed
// denominator p^e; divided-power indices are capped at |k| <= K.
struct Params {
    uint64_t p = 2;
    int s = 1;    // residue field F_{p^s}
    int d = 1;    // perfection variables
    int e = 8;    // root depth
    long D = 4;   // total-degree cap (in original units)
    int r = 1;    // divided-power variables
    long K = 16;  // DP index cap
    int L = 6;    // Witt length

    long exp_denominator() const; // p^e as int64, overflow-checked
    long degree_cap_num() const;  // D * p^e
};

Params make_params(uint64_t p, int s, int d, int e, long D, int r, long K, int L);

// Element of the truncated perfection P (characteristic p): a finite
// F_q-combination of monomials. Multiplication kills monomials beyond the
// degree cap; such a kill on a nonzero term sets the taint flag of the
// enclosing computation.
struct PElem {
    std::map<std::vector<long>, ffp::FqEl> terms;
};

// Length-L Witt vector over P. Ring operations evaluate the universal Witt
// polynomials through ghost coordinates of the canonical monomial lift of
// the coordinates (exact; Dwork divisibility holds by construction).
struct WittVec {
    std::vector<PElem> a;
    bool taint = false;
};

struct AcrysContext;
using AcrysPtr = std::shared_ptr<const AcrysContext>;

struct AcrysContext {
    Params par;
    ffp::FqCtx F;   // residue field
    CtxPtr lift;    // Z_q context at Witt precision L+2 for ghost arithmetic
    static AcrysPtr create(const Params& par);
};

PElem p_zero();
PElem p_monomial(const AcrysPtr& C, const std::vector<long>& exp_num, const ffp::FqEl& coeff);
bool p_is_zero(const PElem& x);
PElem p_add(const AcrysPtr& C, const PElem& x, const PElem& y);
PElem p_mul(const AcrysPtr& C, const PElem& x, const PElem& y, bool& taint);
PElem p_frob(const AcrysPtr& C, const PElem& x, bool& taint);     // coeff^p, exponents * p
PElem p_root(const AcrysPtr& C, const PElem& x);                  // p-th root; throws TruncationTooSmall

WittVec w_zero(const AcrysPtr& C);
WittVec w_teichmuller(const AcrysPtr& C, const PElem& x);
WittVec w_from_integer(const AcrysPtr& C, const mpz_class& n);
bool w_is_zero(const WittVec& x);
long w_val(const WittVec& x); // index of first nonzero coordinate (= L if zero)
WittVec w_add(const AcrysPtr& C, const WittVec& x, const WittVec& y);
WittVec w_neg(const AcrysPtr& C, const WittVec& x);
WittVec w_sub(const AcrysPtr& C, const WittVec& x, const WittVec& y);
WittVec w_mul(const AcrysPtr& C, const WittVec& x, const WittVec& y);
WittVec w_scale_int(const AcrysPtr& C, const mpz_class& n, const WittVec& x);
WittVec w_times_p(const AcrysPtr& C, const WittVec& x);      // (0, a_0^p, ...)
WittVec w_div_p(const AcrysPtr& C, const WittVec& x);        // requires a_0 = 0
WittVec w_frobenius(const AcrysPtr& C, const WittVec& x);    // coordinatewise ^p
WittVec w_frobenius_inv(const AcrysPtr& C, const WittVec& x);
bool w_eq(const WittVec& x, const WittVec& y);

// Element sum a_k gamma_k(x) of the truncated divided-power model.
struct AcrysElem {
    std::map<std::vector<long>, WittVec> terms; // key: DP multi-index, length r
    bool taint = false;
};

AcrysElem dp_zero();
AcrysElem dp_gamma(const AcrysPtr& C, const std::vector<long>& k, const WittVec& coeff);
bool dp_is_zero(const AcrysElem& u);
AcrysElem dp_add(const AcrysPtr& C, const AcrysElem& u, const AcrysElem& v);
AcrysElem dp_sub(const AcrysPtr& C, const AcrysElem& u, const AcrysElem& v);

// gamma_i gamma_j = binom(i+j, i) gamma_(i+j) per variable; indices beyond
// the cap K are annihilated (flagged via taint).
AcrysElem dp_mul(const AcrysPtr& C, const AcrysElem& u, const AcrysElem& v);

// sigma: coefficientwise Witt Frobenius and gamma_k -> p^|k| g_k gamma_(kp),
// with g_k = (kp)!/(k! p^k) a p-adic unit.
AcrysElem frobenius_acrys(const AcrysPtr& C, const AcrysElem& u);

AcrysElem dp_scale_witt(const AcrysPtr& C, const WittVec& w, const AcrysElem& u);
AcrysElem dp_times_pk(const AcrysPtr& C, long k, const AcrysElem& u);
bool dp_eq(const AcrysElem& u, const AcrysElem& v);

// v_p((kp)!/k!) = k, so this is an exact integer with p-adic valuation 0.
mpz_class dp_frobenius_unit(uint64_t p, long k);

// Solve sigma^m(x) - p^n x = p^c b exactly in the truncated model, taking
// the smallest multiplier exponent c the elimination certifies (0 for
// constant support, <= n for support in |k| > n/m, <= n^2 in general).
struct AcrysSolveResult {
    AcrysElem x;
    long multiplier = 0;
    bool taint = false;
};

AcrysSolveResult solve_sigma_m_pn_acrys(const AcrysPtr& C, long m, long n, const AcrysElem& b);

// Max multiplier exponent over the gamma_k basis in the low range plus
// random elements: an experimental lower bound for the cokernel exponent
// of sigma^m - p^n on the model, reported against the proof's guarantee.
struct MeasureReport {
    long m = 0, n = 0;
    Params caps;
    long measured_exponent = 0;
    long paper_bound = 0; // n^2 (m <= n) or 2(m+n)+1 (m > n)
    bool taint = false;
};

MeasureReport measure_coker_exponent(const AcrysPtr& C, long m, long n, int sample_budget);

} // namespace slopelab::acrys

#pragma once

#include "slopelab/fcrystal.hpp"

namespace slopelab {

// Standard module D_{m,n}: rank n, F(e_i) = e_{i+1} for i < n-1 and
// F(e_{n-1}) = p^m e_0; isoclinic of slope m/n.
FCrystal standard_module(const CtxPtr& ctx, long m, long n);

struct IsoFactor {
    long m = 0;
    long n = 1;
    long mult = 0;
};

inline bool operator==(const IsoFactor& a, const IsoFactor& b) {
    return a.m == b.m && a.n == b.n && a.mult == b.mult;
}

// The Newton polygon regrouped: slope m/n in lowest terms with total
// multiplicity k*n contributes (m, n, k). Determines the isogeny class
// after base change to the algebraic closure.
std::vector<IsoFactor> isogeny_type(const FCrystal& E);

struct SlopeWindowResult {
    FCrystal sub;       // slopes in [lo, hi]
    FCrystal quotient;  // slopes > hi
    CrystalHom inclusion;
};

// Two-block valuation split at the cut hi (closed on the left: slope == hi
// goes into sub). The saturated sub-lattice is computed from the divisor
// split of a high power of the linearized Frobenius and verified F-stable;
// the verified defect valuation is recorded as the inclusion's slack.
SlopeWindowResult slope_window(const FCrystal& E, Rational lo, Rational hi);

bool is_isoclinic(const FCrystal& E, Rational lambda);

// Every entry of F^b has valuation >= a (then p^(-a) F^b is the witness).
bool is_divisible_by(const FCrystal& E, Rational ab);

} // namespace slopelab

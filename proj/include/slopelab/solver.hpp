#pragma once

#include "slopelab/fcrystal.hpp"

namespace slopelab {

// Solution of the D_{m,n} recursion (phi - p)x = b on the standard module:
//   p^m sigma(x_{n-1}) - p x_0 = b_0,   sigma(x_{i-1}) - p x_i = b_i (1 <= i < n).
// For m = n = 1 the reduced equation sigma(x) - x = b_0/p is solved digit by
// digit through Artin-Schreier equations over the residue field, extending
// it when a digit equation is insoluble and allow_extension is set.
struct DmnSolution {
    CtxPtr ctx; // possibly an extension of the input context
    std::vector<Zq> x;
    int extension_degree = 1;  // total residue degree / input residue degree
    long certified_prec = 0;   // solution verified to this absolute precision
};

DmnSolution solve_Dmn_system(const CtxPtr& ctx, long m, long n, const std::vector<Zq>& b,
                             bool allow_extension);

// Divisibility precondition on the right-hand side of the D_{m,n} solve:
// 2(m+n)+1 for m > n (the proof's constant) and n^2 + 2(m+n) + 1 for m < n
// (measured bound, safe over-approximation); p-divisibility for m = n = 1.
long dmn_required_divisibility(long m, long n);

// Solve (F - p) x = b on a crystal all of whose Newton slopes exceed 1,
// through the factorization phi^a - p^a = (phi - p) Q(phi) and the geometric
// series in p^b F' with F^a = p^(a+b) F'. The solution is p^(-denom) * x
// with x integral; re-substitution reproduces b mod p^(residual_valuation).
struct PhiMinusPResult {
    std::vector<Zq> x;
    long denom = 0;
    long residual_valuation = 0;
    long witness_a = 0; // F^a = p^(a+b) F'
    long witness_b = 0;
};

PhiMinusPResult invert_phi_minus_p(const FCrystal& E, const std::vector<Zq>& b);

// Q_p-basis of { x : A sigma(x) = p^k x } by restriction of scalars to a
// Z_p-linear system of size rank * s.
struct FixedPoints {
    int dimension = 0;
    std::vector<std::vector<Zq>> basis; // each entry a rank-long vector
};

FixedPoints fixed_points_phi_pk(const FCrystal& E, long k);
inline FixedPoints fixed_points_phi_p(const FCrystal& E) { return fixed_points_phi_pk(E, 1); }

// The rank*s x rank*s matrix of v -> A sigma(v) - p^k v over Z/p^N
// (restriction of scalars; sigma is Z_p-linear).
ZqMatrix phi_minus_pk_linearization(const FCrystal& E, long k);

} // namespace slopelab

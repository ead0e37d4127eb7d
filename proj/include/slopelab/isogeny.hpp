#pragma once

#include <optional>

#include "slopelab/fcrystal.hpp"

namespace slopelab {

// Finitely generated module over Z_q/p^N presented by a relations matrix:
// each row is a relation on the generators; the value is coker(rows).
struct FinZpModule {
    CtxPtr ctx;
    ZqMatrix presentation; // rows x gens
    int gens() const { return presentation.cols(); }
};

// Smith type: torsion exponents (ascending, each > 0) plus free rank.
struct ModuleType {
    std::vector<long> torsion;
    long free_rank = 0;
};

bool operator==(const ModuleType& a, const ModuleType& b);
ModuleType module_type(const FinZpModule& M);

// Smallest k with p^k coker(H) = 0, from the elementary divisors; nullopt
// when the cokernel has a free part ("infinite").
std::optional<long> coker_exponent(const ZqMatrix& H);
std::optional<long> coker_exponent(const CrystalHom& h);

// Lemma-style quasi-inverse: for square H whose kernel and cokernel are
// killed by p^k (all elementary divisors have valuation <= k), the integral
// G = p^(2k) H^{-1} with G H = H G = p^(2k) Id exactly at working precision.
CrystalHom quasi_inverse(const CrystalHom& h, long k);
ZqMatrix quasi_inverse_matrix(const ZqMatrix& H, long k);

// Inductive-system version: levelwise quasi-inverses plus verification of
// the compatibility squares g_{n+1} b_n = a_n g_n (mod p^(N-2k); the 2k
// digits are the cost of inverting through p^(2k)).
struct IsogenyTower {
    std::vector<CrystalHom> f;          // f_n : A_n -> B_n
    std::vector<ZqMatrix> src_trans;    // a_n : A_n -> A_{n+1}
    std::vector<ZqMatrix> tgt_trans;    // b_n : B_n -> B_{n+1}
};
std::vector<CrystalHom> quasi_inverse_tower(const IsogenyTower& T, long k);

// The p-divisible part: image of multiplication by p^n for the minimal
// stabilizing n (the free part at working precision).
FinZpModule div_part(const FinZpModule& M);

// Equal isogeny types (valid after base change to the algebraic closure).
bool is_geometric_isogeny(const FCrystal& E1, const FCrystal& E2);

} // namespace slopelab

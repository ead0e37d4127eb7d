#pragma once

#include <string>

#include "slopelab/isogeny.hpp"
#include "slopelab/manin.hpp"
#include "slopelab/solver.hpp"

namespace slopelab {

// Covariant convention: mu_p_inf has slope 1, Q_p/Z_p slope 0, so the
// slope-[0,1] window is the p-divisible range.
struct NamedCrystal {
    std::string name;
    FCrystal crystal;
    Polygon expected;
};

// names: mu_p_inf, qp_over_zp, supersingular_ell, ordinary_ell
NamedCrystal named(const std::string& name, const CtxPtr& ctx);

// Rank-22 crystal with slopes {1-1/h, 1, 1+1/h} of multiplicities
// (h, 22-2h, h): D_{h-1,h} + D_{1,1}^(22-2h) + D_{h+1,h}.
NamedCrystal k3_like(int h, const CtxPtr& ctx);

struct TheoremDemoReport {
    Polygon polygon;
    long sub_rank = 0;
    long quotient_rank = 0;
    std::vector<IsoFactor> sub_type;
    bool sub_slopes_in_01 = false;
    int fixed_dim_total = 0;
    int fixed_dim_sub = 0;
    bool fixed_dims_equal = false;
    // (F - p) inversion on the quotient: certified residual valuation and
    // the solver's own bound N - witness_a
    long quot_residual_valuation = 0;
    long quot_residual_required = 0;
    bool quot_invertible = false;
    bool pass = false;
};

TheoremDemoReport theorem_demo(const FCrystal& E);

} // namespace slopelab

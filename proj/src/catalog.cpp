#include "slopelab/catalog.hpp"

#include <algorithm>

namespace slopelab {

NamedCrystal named(const std::string& name, const CtxPtr& ctx) {
    if (name == "mu_p_inf") return {name, standard_module(ctx, 1, 1), {{rat(1), 1}}};
    if (name == "qp_over_zp") return {name, standard_module(ctx, 0, 1), {{rat(0), 1}}};
    if (name == "supersingular_ell") return {name, standard_module(ctx, 1, 2), {{rat(1, 2), 2}}};
    if (name == "ordinary_ell")
        return {name, direct_sum(standard_module(ctx, 0, 1), standard_module(ctx, 1, 1)),
                {{rat(0), 1}, {rat(1), 1}}};
    throw PreconditionError("UnknownName", "named: unknown crystal '" + name + "'");
}

NamedCrystal k3_like(int h, const CtxPtr& ctx) {
    if (h < 1 || h > 10) throw PreconditionError("BadInput", "k3_like: need 1 <= h <= 10");
    FCrystal E = standard_module(ctx, h - 1, h);
    for (int i = 0; i < 22 - 2 * h; ++i) E = direct_sum(E, standard_module(ctx, 1, 1));
    E = direct_sum(E, standard_module(ctx, h + 1, h));
    Polygon expected;
    if (h == 1) {
        expected = {{rat(0), 1}, {rat(1), 20}, {rat(2), 1}};
    } else {
        expected = {{rat(h - 1, h), h}, {rat(1), 22 - 2 * h}, {rat(h + 1, h), h}};
    }
    return {"k3_like(" + std::to_string(h) + ")", E, expected};
}

TheoremDemoReport theorem_demo(const FCrystal& E) {
    TheoremDemoReport rep;
    rep.polygon = newton_polygon(E);
    SlopeWindowResult W = slope_window(E, rat(0), rat(1));
    rep.sub_rank = W.sub.rank;
    rep.quotient_rank = W.quotient.rank;
    rep.sub_type = isogeny_type(W.sub);
    Polygon Ps = newton_polygon(W.sub);
    rep.sub_slopes_in_01 =
        std::all_of(Ps.begin(), Ps.end(),
                    [](const SlopePart& q) { return rat(0) <= q.slope && q.slope <= rat(1); });
    rep.fixed_dim_total = fixed_points_phi_p(E).dimension;
    rep.fixed_dim_sub = fixed_points_phi_p(W.sub).dimension;
    rep.fixed_dims_equal = rep.fixed_dim_total == rep.fixed_dim_sub;

    if (W.quotient.rank == 0) {
        rep.quot_invertible = true;
        rep.quot_residual_valuation = E.ctx->N;
        rep.quot_residual_required = 0;
    } else {
        // deterministic nonzero right-hand side on the quotient
        std::vector<Zq> b(static_cast<size_t>(W.quotient.rank), Zq::zero(E.ctx));
        for (int i = 0; i < W.quotient.rank; ++i)
            b[static_cast<size_t>(i)] = Zq::from_integer(E.ctx, 1 + i);
        PhiMinusPResult r = invert_phi_minus_p(W.quotient, b);
        rep.quot_residual_valuation = r.residual_valuation;
        rep.quot_residual_required = E.ctx->N - r.witness_a;
        rep.quot_invertible = r.residual_valuation >= rep.quot_residual_required;
    }
    rep.pass = rep.sub_slopes_in_01 && rep.fixed_dims_equal && rep.quot_invertible;
    return rep;
}

} // namespace slopelab

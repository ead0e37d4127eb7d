#include "slopelab/json_io.hpp"

namespace slopelab {

namespace {

long get_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw SchemaError(std::string("missing or non-integer field '") + key + "'");
    return j[key].get<long>();
}

std::vector<mpz_class> coords_from_json(const json& j, int s) {
    if (!j.is_array() || static_cast<int>(j.size()) != s)
        throw SchemaError("coordinate vector must be an array of s decimal strings");
    std::vector<mpz_class> c;
    c.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_string()) throw SchemaError("coordinates must be decimal strings");
        try {
            c.emplace_back(v.get<std::string>());
        } catch (const std::invalid_argument&) {
            throw SchemaError("coordinate is not a decimal integer: " + v.get<std::string>());
        }
    }
    return c;
}

json coords_to_json(const Zq& x) {
    json a = json::array();
    for (const auto& c : x.coords()) a.push_back(c.get_str());
    return a;
}

} // namespace

json crystal_to_json(const FCrystal& E) {
    json j;
    j["schema"] = "fcrystal/v1";
    j["p"] = static_cast<long>(E.ctx->p);
    j["s"] = E.ctx->s;
    j["N"] = E.ctx->N;
    json mod = json::array();
    for (const auto& c : E.ctx->modulus) {
        if (!c.fits_slong_p())
            throw SchemaError("modulus coefficient exceeds the JSON integer range");
        mod.push_back(c.get_si());
    }
    j["modulus"] = mod;
    j["rank"] = E.rank;
    json m = json::array();
    for (int i = 0; i < E.rank; ++i) {
        json row = json::array();
        for (int k = 0; k < E.rank; ++k) row.push_back(coords_to_json(E.A.at(i, k)));
        m.push_back(row);
    }
    j["matrix"] = m;
    return j;
}

CtxPtr context_from_json(const json& j) {
    long p = get_int(j, "p");
    long s = get_int(j, "s");
    long N = get_int(j, "N");
    if (p < 2 || s < 1 || N < 1) throw SchemaError("invalid (p, s, N)");
    if (const char* cap = std::getenv("SLOPE_LAB_MAX_N")) {
        long capv = std::atol(cap);
        if (capv > 0 && N > capv)
            throw SchemaError("N exceeds SLOPE_LAB_MAX_N=" + std::to_string(capv));
    }
    std::vector<mpz_class> modulus;
    if (j.contains("modulus")) {
        if (!j["modulus"].is_array()) throw SchemaError("modulus must be an array of integers");
        for (const auto& v : j["modulus"]) {
            if (!v.is_number_integer()) throw SchemaError("modulus coefficients must be integers");
            modulus.emplace_back(v.get<long>());
        }
    }
    try {
        return PrecisionContext::create(static_cast<uint64_t>(p), static_cast<int>(s),
                                        static_cast<int>(N), std::move(modulus));
    } catch (const PreconditionError& e) {
        throw SchemaError(std::string("invalid context: ") + e.what());
    }
}

FCrystal crystal_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("input must be a JSON object");
    if (j.value("schema", "") != std::string("fcrystal/v1"))
        throw SchemaError("expected schema fcrystal/v1");
    CtxPtr ctx = context_from_json(j);
    long rank = get_int(j, "rank");
    if (rank < 0) throw SchemaError("rank must be >= 0");
    if (!j.contains("matrix") || !j["matrix"].is_array() ||
        static_cast<long>(j["matrix"].size()) != rank)
        throw SchemaError("matrix must be a rank x rank array");
    ZqMatrix A(ctx, static_cast<int>(rank), static_cast<int>(rank));
    for (long i = 0; i < rank; ++i) {
        const auto& row = j["matrix"][static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<long>(row.size()) != rank)
            throw SchemaError("matrix must be a rank x rank array");
        for (long k = 0; k < rank; ++k)
            A.at(static_cast<int>(i), static_cast<int>(k)) =
                Zq(ctx, coords_from_json(row[static_cast<size_t>(k)], ctx->s));
    }
    return make_fcrystal(ctx, std::move(A));
}

json polygon_to_json(const Polygon& P) {
    json slopes = json::array();
    for (const auto& part : P) {
        json e;
        e["num"] = part.slope.num;
        e["den"] = part.slope.den;
        e["mult"] = part.mult;
        slopes.push_back(e);
    }
    json j;
    j["slopes"] = slopes;
    return j;
}

json isotype_to_json(const std::vector<IsoFactor>& t) {
    json factors = json::array();
    for (const auto& f : t) {
        json e;
        e["m"] = f.m;
        e["n"] = f.n;
        e["mult"] = f.mult;
        factors.push_back(e);
    }
    json j;
    j["factors"] = factors;
    return j;
}

json matrix_to_json(const ZqMatrix& M) {
    json m = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < M.cols(); ++k) row.push_back(coords_to_json(M.at(i, k)));
        m.push_back(row);
    }
    return m;
}

ZqMatrix matrix_from_json(const CtxPtr& ctx, const json& j, int rows, int cols) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw SchemaError("matrix row count mismatch");
    ZqMatrix M(ctx, rows, cols);
    for (int i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw SchemaError("matrix column count mismatch");
        for (int k = 0; k < cols; ++k)
            M.at(i, k) = Zq(ctx, coords_from_json(row[static_cast<size_t>(k)], ctx->s));
    }
    return M;
}

json window_to_json(const SlopeWindowResult& W) {
    json j;
    j["sub"] = crystal_to_json(W.sub);
    j["quotient"] = crystal_to_json(W.quotient);
    j["inclusion"] = matrix_to_json(W.inclusion.H);
    j["slack"] = W.inclusion.slack;
    return j;
}

std::vector<Zq> vector_from_json(const CtxPtr& ctx, const json& j, int len) {
    if (!j.is_array() || static_cast<int>(j.size()) != len)
        throw SchemaError("b-vector length mismatch");
    std::vector<Zq> v;
    v.reserve(j.size());
    for (const auto& e : j) v.emplace_back(ctx, coords_from_json(e, ctx->s));
    return v;
}

json vector_to_json(const std::vector<Zq>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(coords_to_json(x));
    return a;
}

json fixed_points_to_json(const FCrystal& E, const FixedPoints& fp) {
    (void)E;
    json j;
    j["dimension"] = fp.dimension;
    json basis = json::array();
    for (const auto& vec : fp.basis) basis.push_back(vector_to_json(vec));
    j["basis"] = basis;
    return j;
}

json phi_result_to_json(const PhiMinusPResult& r) {
    json j;
    j["solution"] = vector_to_json(r.x);
    j["denom"] = r.denom;
    j["residual_valuation"] = r.residual_valuation;
    j["witness_a"] = r.witness_a;
    j["witness_b"] = r.witness_b;
    return j;
}

json demo_to_json(const TheoremDemoReport& rep) {
    json j;
    j["polygon"] = polygon_to_json(rep.polygon);
    j["sub_rank"] = rep.sub_rank;
    j["quotient_rank"] = rep.quotient_rank;
    j["sub_type"] = isotype_to_json(rep.sub_type);
    j["sub_slopes_in_01"] = rep.sub_slopes_in_01;
    j["fixed_dim_total"] = rep.fixed_dim_total;
    j["fixed_dim_sub"] = rep.fixed_dim_sub;
    j["fixed_dims_equal"] = rep.fixed_dims_equal;
    j["quotient_residual_valuation"] = rep.quot_residual_valuation;
    j["quotient_residual_required"] = rep.quot_residual_required;
    j["quotient_invertible"] = rep.quot_invertible;
    j["pass"] = rep.pass;
    return j;
}

json measure_to_json(const acrys::MeasureReport& rep) {
    json caps;
    caps["K"] = rep.caps.K;
    caps["N_witt"] = rep.caps.L;
    caps["d"] = rep.caps.d;
    caps["r"] = rep.caps.r;
    caps["e"] = rep.caps.e;
    caps["D"] = rep.caps.D;
    json j;
    j["m"] = rep.m;
    j["n"] = rep.n;
    j["p"] = static_cast<long>(rep.caps.p);
    j["caps"] = caps;
    j["measured_exponent"] = rep.measured_exponent;
    j["paper_bound"] = rep.paper_bound;
    j["taint"] = rep.taint;
    return j;
}

std::string canonical_dump(const json& j) { return j.dump() + "\n"; }

} // namespace slopelab

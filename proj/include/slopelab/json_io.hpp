#pragma once

#include <string>

#include <json.hpp>

#include "slopelab/acrys.hpp"
#include "slopelab/catalog.hpp"
#include "slopelab/isogeny.hpp"
#include "slopelab/manin.hpp"
#include "slopelab/solver.hpp"

namespace slopelab {

using json = nlohmann::json;

// fcrystal/v1: {"schema","p","s","N","modulus":[ints],"rank",
//               "matrix":[[[coordinate decimal strings]]]}
json crystal_to_json(const FCrystal& E);
FCrystal crystal_from_json(const json& j);

// {"slopes":[{"num","den","mult"}]}
json polygon_to_json(const Polygon& P);

json isotype_to_json(const std::vector<IsoFactor>& t);
json window_to_json(const SlopeWindowResult& W);
json fixed_points_to_json(const FCrystal& E, const FixedPoints& fp);
json phi_result_to_json(const PhiMinusPResult& r);
json demo_to_json(const TheoremDemoReport& rep);
json measure_to_json(const acrys::MeasureReport& rep);
json matrix_to_json(const ZqMatrix& M);
ZqMatrix matrix_from_json(const CtxPtr& ctx, const json& j, int rows, int cols);

CtxPtr context_from_json(const json& j);
std::vector<Zq> vector_from_json(const CtxPtr& ctx, const json& j, int len);
json vector_to_json(const std::vector<Zq>& v);

// canonical form: compact dump of the (key-sorted) object plus newline
std::string canonical_dump(const json& j);

} // namespace slopelab

#pragma once

#include <json.hpp>
#include <string>

#include "eql/approx.hpp"
#include "eql/infinitesimal.hpp"

namespace eql {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "eql-1";

// Non-finite doubles become null.
Json number(double x);

Json to_json(const BoundaryPoint& p);
Json to_json(const Geodesic& g);
Json to_json(const Mobius& m);
Json to_json(const GeodesicBox& q);
Json to_json(const Polynomial& p);
Json to_json(const DiscreteLamination& l);
Json to_json(const BandLamination& l);
Json to_json(const PiecewiseMobius& h);
Json to_json(const FiniteEarthquake& e);
Json to_json(const Segment& s);
Json to_json(const BoxSupResult& r);
Json to_json(const ThurstonResult& r);
Json to_json(const BoxSearchResult& r);
Json to_json(const FrechetResult& r);
Json to_json(const DotEResult& r);
Json to_json(const TailBoundReport& r);
Json to_json(const FdReport& r);
Json to_json(const DiscretizationReport& r);

// Parsers throw InputParseError with the offending field.
BoundaryPoint boundary_point_from_json(const Json& j);
Geodesic geodesic_from_json(const Json& j);
Mobius mobius_from_json(const Json& j);
GeodesicBox box_from_json(const Json& j);
Polynomial polynomial_from_json(const Json& j);
DiscreteLamination discrete_from_json(const Json& j);
PiecewiseMobius piecewise_from_json(const Json& j);
// {"type":"discrete",...} or {"type":"band",...}
OraclePtr lamination_from_json(const Json& j);

Json read_json_file(const std::string& path);
OraclePtr load_lamination(const std::string& path);
// Two-space indent, sorted keys, trailing newline.
std::string dump(const Json& j);

}  // namespace eql

#include "eql/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace eql {

namespace {

Json complex_json(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

[[noreturn]] void bad(const std::string& what) { throw InputParseError(what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

double real_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) bad(std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

}  // namespace

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json to_json(const BoundaryPoint& p) {
  Json j;
  j["chart"] = p.chart() == Chart::Disk ? "D" : "H";
  j["v"] = p.is_infinity() ? Json("inf") : number(p.value());
  return j;
}

Json to_json(const Geodesic& g) { return Json{{"a", to_json(g.a())}, {"b", to_json(g.b())}}; }

Json to_json(const Mobius& m) { return Json::array({m.a(), m.b(), m.c(), m.d()}); }

Json to_json(const GeodesicBox& q) {
  return Json{{"a", to_json(q.a())}, {"b", to_json(q.b())}, {"c", to_json(q.c())}, {"d", to_json(q.d())},
              {"flags", q.flags().names()}};
}

Json to_json(const Polynomial& p) { return Json{{"family", p.family}, {"coeffs", p.coeffs}}; }

Json to_json(const DiscreteLamination& l) {
  Json leaves = Json::array();
  for (const auto& [g, w] : l.leaves()) leaves.push_back(Json{{"g", to_json(g)}, {"w", w}});
  return Json{{"type", "discrete"}, {"leaves", leaves}};
}

Json to_json(const BandLamination& l) {
  return Json{{"type", "band"},
              {"alpha", to_json(l.alpha())},
              {"beta", to_json(l.beta())},
              {"rho", to_json(l.rho())},
              {"tol_q", l.tol_q()}};
}

Json to_json(const PiecewiseMobius& h) {
  Json pieces = Json::array();
  for (const auto& p : h.pieces())
    pieces.push_back(Json{{"from", to_json(p.from)}, {"to", to_json(p.to)}, {"map", to_json(p.map)}});
  return Json{{"type", "piecewise_mobius"}, {"pieces", pieces}};
}

Json to_json(const FiniteEarthquake& e) {
  return Json{{"type", "earthquake"},
              {"lamination", to_json(e.lamination())},
              {"base_point", complex_json(e.base_point())},
              {"boundary_map", to_json(e.boundary_table())}};
}

Json to_json(const Segment& s) {
  Json j{{"start", complex_json(s.start)}};
  if (const auto* z = std::get_if<Complex>(&s.end)) j["end"] = complex_json(*z);
  else j["end"] = to_json(std::get<BoundaryPoint>(s.end));
  return j;
}

Json to_json(const BoxSupResult& r) {
  Json j{{"value", number(r.value)},
         {"witness_mass", number(r.witness_mass)},
         {"exact", r.exact},
         {"budget_exhausted", r.budget_exhausted},
         {"evaluations", r.evaluations},
         {"provenance", r.exact ? "combinatorial" : "searched"}};
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  return j;
}

Json to_json(const ThurstonResult& r) {
  Json j{{"lower", number(r.lower)},
         {"upper", number(r.upper)},
         {"exact", r.exact},
         {"budget_exhausted", r.budget_exhausted},
         {"constants",
          {{"L0", r.constants.L0},
           {"box_distance", r.constants.box_distance},
           {"L_prime", r.constants.L_prime},
           {"C0", r.constants.C0},
           {"reverse", r.constants.reverse}}}};
  j["certified_upper"] = r.certified_upper ? number(*r.certified_upper) : Json(nullptr);
  j["witness_arc"] = r.witness_arc ? to_json(*r.witness_arc) : Json(nullptr);
  return j;
}

Json to_json(const BoxSearchResult& r) {
  Json j{{"value", number(r.value)},
         {"evaluations", r.evaluations},
         {"budget_exhausted", r.budget_exhausted},
         {"provenance", "searched"}};
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  return j;
}

Json to_json(const FrechetResult& r) {
  Json j{{"lower", number(r.lower)},
         {"upper", number(r.upper)},
         {"upper_certified", r.upper_certified},
         {"evaluations", r.evaluations},
         {"budget_exhausted", r.budget_exhausted},
         {"lower_provenance", "searched"},
         {"upper_provenance", r.upper_certified ? "combinatorial" : "searched"}};
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  return j;
}

Json to_json(const DotEResult& r) {
  Json j{{"angular", number(r.value.angular)},
         {"tol", r.tol},
         {"exact", r.exact},
         {"truncation_depth", number(r.truncation_depth)},
         {"tail_bound", number(r.tail_bound)}};
  j["half_plane"] = r.value.half_plane ? number(*r.value.half_plane) : Json(nullptr);
  return j;
}

Json to_json(const TailBoundReport& r) {
  return Json{{"d", r.d},
              {"measured_tail", number(r.measured_tail)},
              {"analytic_bound", number(r.analytic_bound)},
              {"thurston", number(r.thurston)},
              {"D0", number(r.constants.d0)},
              {"C1", number(r.constants.c1)},
              {"C2", number(r.constants.c2)},
              {"ray_start", number(r.constants.start)},
              {"crossing", r.constants.crossing},
              {"holds", r.holds()},
              {"provenance", "analytic bound vs quadrature"}};
}

Json to_json(const FdReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"t", row.t},
                        {"fd", number(row.fd)},
                        {"dot", number(row.dot)},
                        {"discrepancy", number(row.discrepancy)}});
  return Json{{"rows", rows}, {"slope", number(r.slope)}, {"exact", r.exact}};
}

Json to_json(const DiscretizationReport& r) {
  Json ledger = Json::array();
  for (const auto& e : r.ledger) {
    Json j{{"cell", to_json(e.cell)}, {"continuous_mass", number(e.continuous_mass)}, {"atom_tail", e.atom_tail}};
    j["shrunk"] = e.shrunk ? to_json(*e.shrunk) : Json(nullptr);
    j["leaf"] = e.leaf ? to_json(*e.leaf) : Json(nullptr);
    ledger.push_back(j);
  }
  Json atoms = Json::array();
  for (const auto& [g, w] : r.atoms) atoms.push_back(Json{{"g", to_json(g)}, {"w", w}});
  Json j{{"n", r.n},
         {"lambda_n", to_json(r.lambda_n)},
         {"atoms", atoms},
         {"ledger", ledger},
         {"atom_tail", r.atom_tail},
         {"dropped_mass", r.dropped_mass}};
  if (r.thurston) {
    j["thurston"] = Json{{"input_box_sup", number(r.thurston->input_box_sup)},
                         {"input_exact", r.thurston->input_exact},
                         {"output_box_sup", number(r.thurston->output_box_sup)},
                         {"bound", number(r.thurston->bound)},
                         {"holds", r.thurston->holds()}};
  } else {
    j["thurston"] = nullptr;
  }
  return j;
}

BoundaryPoint boundary_point_from_json(const Json& j) {
  const Json& chart = field(j, "chart");
  const Json& v = field(j, "v");
  if (chart == "D") {
    if (!v.is_number()) bad("disk boundary point needs a numeric angle");
    return BoundaryPoint::disk(v.get<double>());
  }
  if (chart == "H") {
    if (v == "inf") return BoundaryPoint::infinity();
    if (!v.is_number()) bad("half-plane boundary point needs a number or \"inf\"");
    return BoundaryPoint::real(v.get<double>());
  }
  bad("chart must be \"D\" or \"H\"");
}

Geodesic geodesic_from_json(const Json& j) {
  try {
    return Geodesic(boundary_point_from_json(field(j, "a")), boundary_point_from_json(field(j, "b")));
  } catch (const DegenerateGeodesic& e) {
    bad(std::string("geodesic: ") + e.what());
  }
}

Mobius mobius_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) bad("Mobius map must be a 4-array");
  for (const auto& x : j)
    if (!x.is_number()) bad("Mobius entries must be numbers");
  try {
    return Mobius(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
  } catch (const Error& e) {
    bad(std::string("Mobius map: ") + e.what());
  }
}

GeodesicBox box_from_json(const Json& j) {
  std::vector<std::string> names;
  if (j.contains("flags")) {
    if (!j["flags"].is_array()) bad("box flags must be an array");
    for (const auto& f : j["flags"]) names.push_back(f.get<std::string>());
  }
  try {
    return GeodesicBox(boundary_point_from_json(field(j, "a")), boundary_point_from_json(field(j, "b")),
                       boundary_point_from_json(field(j, "c")), boundary_point_from_json(field(j, "d")),
                       BoxFlags::from_names(names));
  } catch (const InputParseError&) {
    throw;
  } catch (const Error& e) {
    bad(std::string("box: ") + e.what());
  }
}

Polynomial polynomial_from_json(const Json& j) {
  Polynomial p;
  const Json& fam = field(j, "family");
  if (fam != "affine" && fam != "polynomial") bad("function family must be \"affine\" or \"polynomial\"");
  p.family = fam.get<std::string>();
  const Json& c = field(j, "coeffs");
  if (!c.is_array() || c.empty()) bad("coeffs must be a non-empty array");
  for (const auto& x : c) {
    if (!x.is_number()) bad("coeffs must be numbers");
    p.coeffs.push_back(x.get<double>());
  }
  if (p.family == "affine" && p.coeffs.size() > 2) bad("affine family takes at most two coefficients");
  return p;
}

DiscreteLamination discrete_from_json(const Json& j) {
  const Json& leaves = field(j, "leaves");
  if (!leaves.is_array()) bad("leaves must be an array");
  std::vector<WeightedLeaf> out;
  for (const auto& l : leaves) out.push_back({geodesic_from_json(field(l, "g")), real_field(l, "w")});
  try {
    return DiscreteLamination(out);
  } catch (const Error& e) {
    bad(std::string("lamination: ") + e.what());
  }
}

PiecewiseMobius piecewise_from_json(const Json& j) {
  const Json& pieces = field(j, "pieces");
  if (!pieces.is_array()) bad("pieces must be an array");
  std::vector<MobiusPiece> out;
  for (const auto& p : pieces)
    out.push_back({boundary_point_from_json(field(p, "from")), boundary_point_from_json(field(p, "to")),
                   mobius_from_json(field(p, "map"))});
  try {
    return PiecewiseMobius(out);
  } catch (const Error& e) {
    bad(std::string("piecewise map: ") + e.what());
  }
}

OraclePtr lamination_from_json(const Json& j) {
  const Json& type = field(j, "type");
  if (type == "discrete") return std::make_shared<DiscreteLamination>(discrete_from_json(j));
  if (type == "band") {
    double tol = j.contains("tol_q") ? real_field(j, "tol_q") : 1e-10;
    try {
      return std::make_shared<BandLamination>(polynomial_from_json(field(j, "alpha")),
                                              polynomial_from_json(field(j, "beta")),
                                              polynomial_from_json(field(j, "rho")), tol);
    } catch (const InputParseError&) {
      throw;
    } catch (const Error& e) {
      bad(std::string("band: ") + e.what());
    }
  }
  bad("lamination type must be \"discrete\" or \"band\"");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputParseError(path + ": " + e.what());
  }
}

OraclePtr load_lamination(const std::string& path) {
  try {
    return lamination_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    throw InputParseError(path + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace eql

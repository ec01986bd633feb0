#include "eql/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace eql {

namespace {

BoundaryPoint r(double x) { return BoundaryPoint::real(x); }
const BoundaryPoint inf = BoundaryPoint::infinity();

const std::vector<int> kExampleN{2, 8, 32, 128};
const std::vector<int> kElementaryN{1, 10, 100, 1000};
const std::vector<int> kDiscretizeN{4, 16, 64, 256};

class Checks {
 public:
  void add(const std::string& name, const std::string& relation, bool ok) {
    list_.push_back(Json{{"name", name}, {"relation", relation}, {"pass", ok}});
    all_ = all_ && ok;
  }
  bool all() const { return all_; }
  const Json& json() const { return list_; }

 private:
  Json list_ = Json::array();
  bool all_ = true;
};

ExperimentResult finish(const ExperimentConfig& cfg, Json table, Json extra, const Checks& checks, bool exhausted) {
  ExperimentResult res;
  res.pass = checks.all();
  res.budget_exhausted = exhausted;
  Json echo = config_to_json(cfg);
  echo.erase("out");
  echo.erase("format");
  res.data = Json{{"schema", kSchema},   {"experiment", cfg.id}, {"config", echo},
                  {"table", table},      {"checks", checks.json()}, {"pass", res.pass},
                  {"budget_exhausted", exhausted}};
  for (auto it = extra.begin(); it != extra.end(); ++it) res.data[it.key()] = it.value();
  return res;
}

Mobius random_mobius(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  for (;;) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a * d - b * c > 0.3) return Mobius(a, b, c, d);
  }
}

PiecewiseMobius inverse(const PiecewiseMobius& h) {
  std::vector<MobiusPiece> out;
  for (const auto& p : h.pieces()) out.push_back({p.map.apply(p.from), p.map.apply(p.to), p.map.inverse()});
  return PiecewiseMobius(out);
}

std::vector<OraclePtr> load_inputs(const ExperimentConfig& cfg) {
  std::vector<OraclePtr> out;
  for (const auto& path : cfg.inputs) out.push_back(load_lamination(path));
  return out;
}

// ---------------------------------------------------------------------------

ExperimentResult example_one(const ExperimentConfig& cfg, bool midpoint) {
  DiscreteLamination limit({{Geodesic(r(0), inf), 1.0}});
  const double threshold = (2 / kPi) / kPhi0Norm1;
  const auto tents = example_tents();
  std::vector<std::vector<double>> pairings(tents.size());
  Json table = Json::array(), witnesses = Json::array();
  bool frechet_ok = true, exhausted = false;
  for (int n : kExampleN) {
    double a = 1.0 / n;
    DiscreteLamination ln = midpoint ? DiscreteLamination({{Geodesic(r(a), inf), 0.5}, {Geodesic(r(-a), inf), 0.5}})
                                     : DiscreteLamination({{Geodesic(r(a), inf), 1.0}});
    // endpoints of every leaf approach those of the limit leaf
    double endpoint = 0.0;
    for (const auto& l : ln.leaves()) endpoint = std::max(endpoint, metric_geodesics(l.g, limit.leaves()[0].g));
    std::vector<double> pv;
    for (std::size_t k = 0; k < tents.size(); ++k) {
      double v = ln.integrate_where(tents[k], {}) - limit.integrate_where(tents[k], {});
      pairings[k].push_back(v);
      pv.push_back(v);
    }
    for (double nu : cfg.nu_grid) {
      FrechetResult f = frechet_norm(ln, limit, nu, cfg.budget);
      frechet_ok = frechet_ok && f.lower >= threshold;
      exhausted = exhausted || f.budget_exhausted;
      table.push_back(Json{{"n", n},
                           {"nu", nu},
                           {"frechet_lower", number(f.lower)},
                           {"frechet_upper", number(f.upper)},
                           {"upper_certified", f.upper_certified},
                           {"threshold", threshold},
                           {"pairing_0", pv[0]},
                           {"pairing_1", pv[1]},
                           {"pairing_2", pv[2]},
                           {"endpoint_distance", endpoint}});
      witnesses.push_back(Json{{"n", n}, {"nu", nu}, {"frechet", to_json(f)}});
    }
  }
  Checks checks;
  checks.add("frechet_uniform", "frechet_lower >= (2/pi) phi0(center)/||phi0||_1 for every n and nu", frechet_ok);
  for (std::size_t k = 0; k < tents.size(); ++k) {
    bool mono = true;
    for (std::size_t i = 1; i < pairings[k].size(); ++i)
      mono = mono && std::abs(pairings[k][i]) <= std::abs(pairings[k][i - 1]) + 1e-12;
    checks.add("pairing_" + std::to_string(k) + "_monotone", "|pairing| non-increasing in n", mono);
    checks.add("pairing_" + std::to_string(k) + "_small", "|pairing| < 1e-2 at the last n",
               std::abs(pairings[k].back()) < 1e-2);
  }
  Json profiles = Json::array();
  for (const Tent& t : tents)
    profiles.push_back(Json{{"center", to_json(t.center)}, {"radius", t.radius}, {"height", t.height}});
  return finish(cfg, table, Json{{"profiles", profiles}, {"witnesses", witnesses}}, checks, exhausted);
}

ExperimentResult elementary(const ExperimentConfig& cfg) {
  const double e = std::exp(1.0);
  const double expected = std::log(e + 1) - 1;
  const double distortion = std::abs(expected - log_two());
  const Complex base(-1, 1);
  FiniteEarthquake h_inf = build_earthquake(DiscreteLamination({{Geodesic(r(0), inf), 1.0}}), base);
  PiecewiseMobius inv = inverse(h_inf.boundary_table());
  Json table = Json::array();
  bool value_ok = true, constant_ok = true;
  for (int n : kElementaryN) {
    FiniteEarthquake h_n = build_earthquake(DiscreteLamination({{Geodesic(r(1.0 / n), inf), 1.0}}), base);
    std::array<BoundaryPoint, 4> corners{inf, r(-e / n), r(0), r(e / n)};
    std::array<BoundaryPoint, 4> image;
    for (int k = 0; k < 4; ++k) image[k] = h_n.eval_boundary(inv(corners[k]));
    double lq = liouville(GeodesicBox(corners[0], corners[1], corners[2], corners[3]));
    double li = liouville(GeodesicBox(image[0], image[1], image[2], image[3]));
    double dist = std::abs(li - lq);
    value_ok = value_ok && std::abs(li - expected) <= 1e-9;
    constant_ok = constant_ok && std::abs(dist - distortion) <= 1e-9;
    Json corners_json = Json::array();
    for (const auto& p : image) corners_json.push_back(to_json(p));
    table.push_back(Json{{"n", n},
                         {"L_Q", lq},
                         {"L_image", li},
                         {"expected", expected},
                         {"distortion", dist},
                         {"error", std::abs(li - expected)}});
  }
  Checks checks;
  checks.add("image_liouville", "|L(h_n o h_inf^-1 (Q_n)) - (log(e+1) - 1)| <= 1e-9", value_ok);
  checks.add("distortion_constant", "distortion = |log(e+1) - 1 - log 2| within 1e-9 for every n", constant_ok);
  return finish(cfg, table, Json{{"expected_distortion", distortion}}, checks, false);
}

ExperimentResult discretize_band(const ExperimentConfig& cfg) {
  auto inputs = load_inputs(cfg);
  OraclePtr lam = inputs.empty() ? std::make_shared<BandLamination>(BandLamination::fixture()) : inputs.front();
  auto window = lam->support_window();
  if (!window) throw WindowRequired("discretize-band: input has no support window");
  GeodesicBox w = window->in_chart(Chart::Disk);

  // log 2 boxes centered on a 10 x 10 grid of window geodesics, 10 shapes each
  std::vector<GeodesicBox> sweep;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      Geodesic c = Geodesic::disk(w.a().angle() + (i + 0.5) / 10 * w.first_arc_length(),
                                  w.c().angle() + (j + 0.5) / 10 * w.second_arc_length());
      for (int k = 0; k < 10; ++k) sweep.push_back(log2_box_tau(c, -2.7 + 0.6 * k));
    }

  DiscretizeOptions opt;
  opt.thurston_record = false;
  opt.budget = cfg.budget;
  BoxSupResult in = box_sup(*lam, cfg.budget);
  bool exhausted = in.budget_exhausted;
  Json table = Json::array(), witnesses = Json::array();
  std::vector<double> uweak;
  bool ledger_ok = true, thurston_ok = true, census_ok = true;
  for (int n : kDiscretizeN) {
    DiscretizationReport rep = discretize(*lam, n, opt);
    double cap = 1.0 / n, max_mass = 0.0;
    for (const auto& e : rep.ledger) max_mass = std::max(max_mass, e.continuous_mass);
    bool ledger = max_mass < cap && rep.atom_tail < cap;
    BoxSupResult out = box_sup(rep.lambda_n, cfg.budget);
    ThurstonRecord rec{in.value, in.exact, out.value, 2.0 * in.value + 2.0};
    auto boxes = ledger_boxes(rep);
    int census = 0;
    for (const auto& q : sweep) census = std::max(census, overlap_census(boxes, q));
    BoxSearchResult uw = uweak_distance(rep.lambda_n, *lam, phi0, cfg.budget);
    exhausted = exhausted || out.budget_exhausted || uw.budget_exhausted;
    uweak.push_back(uw.value);
    ledger_ok = ledger_ok && ledger;
    thurston_ok = thurston_ok && rec.holds();
    census_ok = census_ok && census <= 2;
    table.push_back(Json{{"n", n},
                         {"cells", rep.ledger.size()},
                         {"leaves", rep.lambda_n.size()},
                         {"max_cell_mass", max_mass},
                         {"cap", cap},
                         {"atom_tail", rep.atom_tail},
                         {"dropped_mass", rep.dropped_mass},
                         {"mass_in", lam->total_mass()},
                         {"mass_out", rep.lambda_n.total_mass()},
                         {"box_sup_in", number(rec.input_box_sup)},
                         {"box_sup_out", number(rec.output_box_sup)},
                         {"box_sup_bound", number(rec.bound)},
                         {"census_max", census},
                         {"uweak", number(uw.value)}});
    Json wj{{"n", n}, {"box_sup_out", to_json(out)}, {"uweak", to_json(uw)}};
    witnesses.push_back(wj);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < uweak.size(); ++i) decreasing = decreasing && uweak[i] < uweak[i - 1];
  Checks checks;
  checks.add("ledger", "per-cell continuous mass < 1/n and atom tail < 1/n", ledger_ok);
  checks.add("box_sup_bound", "box_sup(lambda_n) <= 2 box_sup(lambda) + 2", thurston_ok);
  checks.add("overlap_census", "overlap_census <= 2 over the 1000-box sweep", census_ok);
  checks.add("uweak_decreasing", "uweak(lambda_n, lambda) strictly decreasing in n", decreasing);
  checks.add("uweak_small", "uweak at the last n < 0.05 * uweak at the first n",
             uweak.back() < 0.05 * uweak.front());
  return finish(cfg, table,
                Json{{"input", in.exact ? Json(nullptr) : Json("searched")},
                     {"box_sup_in", to_json(in)},
                     {"sweep_boxes", sweep.size()},
                     {"witnesses", witnesses}},
                checks, exhausted);
}

ExperimentResult infinitesimal_fd(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> ang(0, kTwoPi);
  std::vector<DiscreteLamination> corpus;
  for (int k = 0; k < 50; ++k) corpus.push_back(random_lamination(rng, 1 + static_cast<int>(rng() % 10)));
  for (const auto& in : load_inputs(cfg)) {
    const DiscreteLamination* d = in->as_discrete();
    if (!d) throw ConfigError("infinitesimal-fd: inputs must be discrete laminations");
    corpus.push_back(*d);
  }
  const double t_min = *std::min_element(cfg.t_grid.begin(), cfg.t_grid.end());
  Json table = Json::array();
  bool slope_ok = true, size_ok = true;
  int exact = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    Complex base = default_base_point(corpus[k]);
    for (int j = 0; j < 20; ++j) {
      double theta = ang(rng);
      FdReport rep = fd_check(corpus[k], BoundaryPoint::disk(theta), base, cfg.t_grid);
      const FdRow* last = &rep.rows.front();
      for (const auto& row : rep.rows)
        if (row.t == t_min) last = &row;
      if (rep.exact) ++exact;
      else slope_ok = slope_ok && std::abs(rep.slope - 1.0) <= 0.2;
      size_ok = size_ok && last->discrepancy < 1e-3;
      Json rows = Json::array();
      for (const auto& row : rep.rows) rows.push_back(row.discrepancy);
      table.push_back(Json{{"lamination", k},
                           {"leaves", corpus[k].size()},
                           {"theta", theta},
                           {"dot", last->dot},
                           {"fd_at_t_min", last->fd},
                           {"discrepancy_at_t_min", last->discrepancy},
                           {"slope", number(rep.slope)},
                           {"exact", rep.exact},
                           {"discrepancies", rows}});
    }
  }
  Checks checks;
  checks.add("slope", "log-log slope of the discrepancy within 1 +- 0.2 (rows with nonzero discrepancy)", slope_ok);
  checks.add("size", "discrepancy < 1e-3 at the smallest t", size_ok);
  return finish(cfg, table, Json{{"t_grid", cfg.t_grid}, {"exact_points", exact}}, checks, false);
}

ExperimentResult decay_profile(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  struct Case {
    std::string name;
    OraclePtr lam;
    Complex base;
    std::vector<double> thetas;
  };
  std::vector<Case> cases;
  cases.push_back({"band", std::make_shared<BandLamination>(BandLamination::fixture()), disk_to_half_plane(0),
                   {2.2, 2.6, 3.0, 3.4, 3.8}});
  std::uniform_real_distribution<double> ang(0, kTwoPi), unit(0, 1);
  for (int k = 0; k < 10; ++k) {
    DiscreteLamination chain = random_chain(rng, 2 + static_cast<int>(rng() % 10));
    double lo = 0, hi = kTwoPi;
    for (const auto& l : chain.leaves()) {
      double a = std::min(l.g.a().angle(), l.g.b().angle()), b = std::max(l.g.a().angle(), l.g.b().angle());
      lo = std::max(lo, a);
      hi = std::min(hi, b);
    }
    std::vector<double> thetas;
    for (int j = 0; j < 3; ++j) thetas.push_back(lo + (0.1 + 0.8 * unit(rng)) * (hi - lo));  // inside every leaf
    for (int j = 0; j < 2; ++j) thetas.push_back(ang(rng));
    Complex base = default_base_point(chain);
    cases.push_back({"chain_" + std::to_string(k), std::make_shared<DiscreteLamination>(chain), base, thetas});
  }
  for (const auto& in : load_inputs(cfg)) {
    const DiscreteLamination* d = in->as_discrete();
    Complex base = d ? default_base_point(*d) : disk_to_half_plane(0);
    cases.push_back({"input_" + std::to_string(cases.size()), in, base, {0.5, 1.5, 2.5, 3.5, 4.5, 5.5}});
  }

  Json table = Json::array(), norms = Json::array();
  int violations = 0, nonzero = 0;
  bool exhausted = false;
  for (const Case& c : cases) {
    ThurstonResult th = thurston_norm(*c.lam, cfg.budget);
    exhausted = exhausted || th.budget_exhausted;
    norms.push_back(Json{{"case", c.name}, {"thurston", to_json(th)}});
    for (double theta : c.thetas) {
      for (int d = 0; d <= 10; ++d) {
        TailBoundReport rep = tail_report(*c.lam, BoundaryPoint::disk(theta), c.base, d, th.lower);
        if (!rep.holds()) ++violations;
        if (rep.measured_tail > 0) ++nonzero;
        table.push_back(Json{{"case", c.name},
                             {"theta", theta},
                             {"d", d},
                             {"measured_tail", number(rep.measured_tail)},
                             {"bound", number(rep.analytic_bound)},
                             {"thurston", number(rep.thurston)},
                             {"D0", number(rep.constants.d0)},
                             {"C1", number(rep.constants.c1)},
                             {"C2", number(rep.constants.c2)},
                             {"crossing", rep.constants.crossing},
                             {"holds", rep.holds()}});
      }
    }
  }
  Checks checks;
  checks.add("tail_bound", "measured_tail(d) <= C2 ||lambda||_Th e^-d for every case, point and d", violations == 0);
  checks.add("non_vacuous", "some measured tail is positive", nonzero > 0);
  return finish(cfg, table,
                Json{{"violations", violations}, {"nonzero_tails", nonzero}, {"thurston", norms},
                     {"bound_provenance", "analytic bound vs quadrature"}},
                checks, exhausted);
}

ExperimentResult norm_sandwiches(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<OraclePtr> corpus;
  for (int k = 0; k < 40; ++k) corpus.push_back(std::make_shared<DiscreteLamination>(random_lamination(rng, 1 + k % 12)));
  for (const auto& in : load_inputs(cfg)) corpus.push_back(in);
  corpus.push_back(std::make_shared<BandLamination>(BandLamination::fixture()));

  const DiscreteLamination zero;
  Json table = Json::array();
  bool thurston_ok = true, frechet_ok = true, intervals = true, exhausted = false;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const LaminationOracle& lam = *corpus[k];
    BoxSupResult bs = box_sup(lam, cfg.budget);
    ThurstonResult th = thurston_norm(lam, cfg.budget);
    exhausted = exhausted || bs.budget_exhausted || th.budget_exhausted;
    ComparisonConstants cc = th.constants;
    bool exact = bs.exact && th.exact;
    bool ok_th = exact ? (th.lower <= cc.C0 * bs.value + 1e-12 && bs.value <= cc.reverse * th.lower + 1e-12)
                      : bs.value <= cc.reverse * th.upper + 1e-9;
    thurston_ok = thurston_ok && ok_th;
    intervals = intervals && th.lower <= th.upper + 1e-12;
    Json row{{"case", k},
             {"discrete", lam.as_discrete() != nullptr},
             {"box_sup", number(bs.value)},
             {"box_sup_provenance", bs.exact ? "combinatorial" : "searched"},
             {"thurston_lower", number(th.lower)},
             {"thurston_upper", number(th.upper)},
             {"thurston_vs_box", ok_th}};
    if (lam.as_discrete() && bs.witness) {
      for (double nu : cfg.nu_grid) {
        FrechetResult f = frechet_norm(lam, zero, nu, cfg.budget, cover_seeds(*bs.witness));
        exhausted = exhausted || f.budget_exhausted;
        bool ok_fr = f.lower <= bs.value + 1e-12 && bs.value <= box_frechet_constant(nu) * f.lower + 1e-12 &&
                    f.lower <= f.upper + 1e-12;
        frechet_ok = frechet_ok && ok_fr;
        Json r = row;
        r["nu"] = nu;
        r["frechet_lower"] = number(f.lower);
        r["frechet_upper"] = number(f.upper);
        r["c1"] = box_frechet_constant(nu);
        r["box_vs_frechet"] = ok_fr;
        table.push_back(r);
      }
    } else {
      table.push_back(row);
    }
  }

  // kernels: half-plane quadratics and Mobius maps
  std::vector<CircleVectorField> quads{CircleVectorField::half_plane([](double) { return 1.0; }, 0.0),
                                       CircleVectorField::half_plane([](double x) { return x; }, 0.0),
                                       CircleVectorField::half_plane([](double x) { return x * x; }, 2.0)};
  Json kernels = Json::array();
  bool kernel_ok = true;
  const char* names[] = {"1", "x", "x^2"};
  for (std::size_t k = 0; k < quads.size(); ++k) {
    BoxSearchResult cr = crossratio_norm(quads[k], cfg.budget);
    double zy = zygmund_norm(quads[k]);
    kernel_ok = kernel_ok && cr.value < 1e-9 && zy < 1e-9;
    kernels.push_back(Json{{"field", names[k]}, {"crossratio", number(cr.value)}, {"zygmund", number(zy)}});
  }
  double worst_qs = 0.0;
  for (int k = 0; k < 50; ++k) {
    Mobius g = random_mobius(rng);
    BoxSearchResult q = qs_distortion([g](const BoundaryPoint& p) { return g.apply(p); }, cfg.budget);
    worst_qs = std::max(worst_qs, q.value);
  }
  kernel_ok = kernel_ok && worst_qs < 1e-9;
  FiniteEarthquake empty = build_earthquake(DiscreteLamination(), Complex(0, 1));
  double empty_qs = qs_distortion(empty.as_function(), cfg.budget).value;
  double empty_bs = box_sup(DiscreteLamination()).value;
  double empty_th = thurston_norm(DiscreteLamination()).lower;

  Checks checks;
  checks.add("thurston_vs_box", "Th <= C0 box_sup and box_sup <= 2 Th (exact cases); box_sup <= 2 Th_upper otherwise", thurston_ok);
  checks.add("box_vs_frechet", "frechet_lower <= box_sup <= C1(nu) frechet_lower", frechet_ok);
  checks.add("intervals", "thurston lower <= upper", intervals);
  checks.add("kernels", "crossratio and zygmund of 1, x, x^2 and qs_distortion of Mobius maps below 1e-9", kernel_ok);
  checks.add("empty", "empty lamination: identity earthquake, all norms 0",
             empty_qs == 0.0 && empty_bs == 0.0 && empty_th == 0.0);
  return finish(cfg, table,
                Json{{"kernels", kernels},
                     {"mobius_qs_worst", worst_qs},
                     {"empty", {{"qs_distortion", empty_qs}, {"box_sup", empty_bs}, {"thurston", empty_th}}}},
                checks, exhausted);
}

using Runner = std::function<ExperimentResult(const ExperimentConfig&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> m{
      {"example1-frechet", [](const ExperimentConfig& c) { return example_one(c, false); }},
      {"example1-midpoint", [](const ExperimentConfig& c) { return example_one(c, true); }},
      {"elementary-teichmuller", elementary},
      {"discretize-band", discretize_band},
      {"infinitesimal-fd", infinitesimal_fd},
      {"decay-profile", decay_profile},
      {"norm-sandwiches", norm_sandwiches},
  };
  return m;
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>(), out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  }
  if (v.is_null()) return "";
  if (v.is_structured()) return csv_cell(Json(v.dump()));
  return v.dump();
}

}  // namespace

double Tent::operator()(const Geodesic& g) const {
  return height * std::max(0.0, 1.0 - metric_geodesics(g, center) / radius);
}

std::vector<Tent> example_tents() {
  return {{Geodesic::disk(kPi, 0.0), kPi / 2, 0.5},
          {Geodesic::disk(kPi + 0.3, 0.0), 2.0, 1.0},
          {Geodesic::disk(kPi - 0.2, 0.1), 2.5, 1.0}};
}

DiscreteLamination random_lamination(std::mt19937_64& rng, int leaves, double wlo, double whi, double gap) {
  std::uniform_real_distribution<double> ang(0, kTwoPi), wt(wlo, whi);
  std::vector<WeightedLeaf> out;
  std::vector<double> ends;
  for (int attempt = 0; static_cast<int>(out.size()) < leaves && attempt < 1000 * leaves; ++attempt) {
    double p = ang(rng), q = ang(rng);
    bool ok = angle_distance(p, q) >= gap;
    for (double e : ends) ok = ok && angle_distance(p, e) >= gap && angle_distance(q, e) >= gap;
    if (!ok) continue;
    Geodesic g = Geodesic::disk(p, q);
    for (const auto& l : out) ok = ok && !geodesics_cross(l.g, g);
    if (!ok) continue;
    out.push_back({g, wt(rng)});
    ends.push_back(p);
    ends.push_back(q);
  }
  return DiscreteLamination(out);
}

DiscreteLamination random_chain(std::mt19937_64& rng, int leaves, double lo1, double hi1, double lo2, double hi2) {
  std::uniform_real_distribution<double> u1(lo1, hi1), u2(lo2, hi2), wt(0.1, 1.0);
  std::vector<double> a(leaves), b(leaves);
  for (int k = 0; k < leaves; ++k) {
    a[k] = u1(rng);
    b[k] = u2(rng);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end(), std::greater<>());
  std::vector<WeightedLeaf> out;
  for (int k = 0; k < leaves; ++k) out.push_back({Geodesic::disk(a[k], b[k]), wt(rng)});
  return DiscreteLamination(out);
}

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : runners()) v.push_back(k);
    return v;
  }();
  return ids;
}

void validate(const ExperimentConfig& c) {
  if (!runners().count(c.id)) throw ConfigError("unknown experiment '" + c.id + "'");
  if (c.nu_grid.empty()) throw ConfigError("nu grid is empty");
  for (double nu : c.nu_grid)
    if (!(nu > 0.0 && nu <= 1.0)) throw ConfigError("nu values must lie in (0, 1]");
  if (c.t_grid.empty()) throw ConfigError("t grid is empty");
  for (double t : c.t_grid)
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("t values must lie in (0, 1)");
  if (c.budget.max_evaluations == 0) throw ConfigError("budget must be positive");
  if (c.budget.tau_steps < 1 || c.budget.refine_iters < 0 || c.budget.refine_starts < 0)
    throw ConfigError("bad search budget");
  if (c.format != "json" && c.format != "csv") throw ConfigError("format must be json or csv");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  return runners().at(config.id)(config);
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      static const std::vector<std::string> known{"experiment", "inputs", "nu", "budget", "t_grid",
                                                  "seed",       "out",    "format"};
      if (std::find(known.begin(), known.end(), it.key()) == known.end())
        throw ConfigError("unknown config key '" + it.key() + "'");
    }
    if (j.contains("experiment")) c.id = j["experiment"].get<std::string>();
    if (j.contains("inputs")) c.inputs = j["inputs"].get<std::vector<std::string>>();
    if (j.contains("nu")) c.nu_grid = j["nu"].get<std::vector<double>>();
    if (j.contains("t_grid")) c.t_grid = j["t_grid"].get<std::vector<double>>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("budget")) {
      const Json& b = j["budget"];
      if (b.is_number_integer()) {
        c.budget.max_evaluations = b.get<std::size_t>();
      } else if (b.is_object()) {
        if (b.contains("sample_leaves")) c.budget.sample_leaves = b["sample_leaves"].get<std::size_t>();
        if (b.contains("tau_steps")) c.budget.tau_steps = b["tau_steps"].get<int>();
        if (b.contains("tau_max")) c.budget.tau_max = b["tau_max"].get<double>();
        if (b.contains("refine_starts")) c.budget.refine_starts = b["refine_starts"].get<int>();
        if (b.contains("refine_iters")) c.budget.refine_iters = b["refine_iters"].get<int>();
        if (b.contains("max_evaluations")) c.budget.max_evaluations = b["max_evaluations"].get<std::size_t>();
      } else {
        throw ConfigError("budget must be an integer or an object");
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  return Json{{"experiment", c.id},
              {"inputs", c.inputs},
              {"nu", c.nu_grid},
              {"t_grid", c.t_grid},
              {"seed", c.seed},
              {"out", c.out_dir},
              {"format", c.format},
              {"budget",
               {{"sample_leaves", c.budget.sample_leaves},
                {"tau_steps", c.budget.tau_steps},
                {"tau_max", c.budget.tau_max},
                {"refine_starts", c.budget.refine_starts},
                {"refine_iters", c.budget.refine_iters},
                {"max_evaluations", c.budget.max_evaluations}}}};
}

std::string to_csv(const ExperimentResult& result) {
  std::ostringstream out;
  const Json& table = result.data.at("table");
  if (table.empty()) return "";
  std::vector<std::string> cols;
  for (auto it = table[0].begin(); it != table[0].end(); ++it) cols.push_back(it.key());
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << "\n";
  for (const Json& row : table) {
    for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << (row.contains(cols[k]) ? csv_cell(row[cols[k]]) : "");
    out << "\n";
  }
  return out.str();
}

}  // namespace eql

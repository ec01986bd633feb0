#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eql/experiments.hpp"
#include "eql/svg.hpp"

using namespace eql;
namespace fs = std::filesystem;

namespace {

BoundaryPoint r(double x) { return BoundaryPoint::real(x); }
const BoundaryPoint inf = BoundaryPoint::infinity();

std::string bin() {
  const char* b = std::getenv("EQLAB_BIN");
  return b ? b : "./eqlab";
}

struct Output {
  int code;
  std::string out;
};

Output sh(const std::string& args) {
  std::string cmd = bin() + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("eqlab_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& s) const { return path_ / s; }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Json, RoundTrips) {
  DiscreteLamination lam({{Geodesic(r(0), inf), 1.5}, {Geodesic::disk(1.0, 2.0), 0.25}});
  auto back = lamination_from_json(Json::parse(to_json(lam).dump()));
  const DiscreteLamination* d = back->as_discrete();
  ASSERT_TRUE(d);
  ASSERT_EQ(d->size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_TRUE(same_geodesic(d->leaves()[k].g, lam.leaves()[k].g));
    EXPECT_EQ(d->leaves()[k].w, lam.leaves()[k].w);
  }
  Json p = to_json(inf);
  EXPECT_EQ(p["v"], "inf");
  EXPECT_TRUE(boundary_point_from_json(p).is_infinity());
  Mobius m(2, 1, 1, 1);
  EXPECT_TRUE(approx_equal(mobius_from_json(to_json(m)), m, 1e-15));
  BoxFlags f;
  f.open_b = true;
  GeodesicBox q = GeodesicBox::disk(0.1, 0.5, 2.0, 3.0, f);
  EXPECT_EQ(box_from_json(to_json(q)).flags(), f);
  auto band = lamination_from_json(to_json(BandLamination::fixture()));
  EXPECT_NEAR(band->total_mass(), 1.0, 1e-9);
}

TEST(Json, ParseErrors) {
  EXPECT_THROW(boundary_point_from_json(Json{{"chart", "X"}, {"v", 1}}), InputParseError);
  EXPECT_THROW(boundary_point_from_json(Json{{"chart", "H"}}), InputParseError);
  EXPECT_THROW(mobius_from_json(Json::array({1, 2, 3})), InputParseError);
  EXPECT_THROW(lamination_from_json(Json{{"type", "weird"}}), InputParseError);
  Json crossing = Json::parse(R"({"type":"discrete","leaves":[
      {"g":{"a":{"chart":"D","v":0},"b":{"chart":"D","v":2}},"w":1},
      {"g":{"a":{"chart":"D","v":1},"b":{"chart":"D","v":3}},"w":1}]})");
  EXPECT_THROW(lamination_from_json(crossing), InputParseError);
  EXPECT_THROW(config_from_json(Json{{"colour", 1}}), ConfigError);
  ExperimentConfig c;
  c.id = "nope";
  EXPECT_THROW(validate(c), ConfigError);
  c.id = "example1-frechet";
  c.nu_grid = {1.5};
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Svg, ArcsAreOrthogonalAndInside) {
  std::mt19937_64 rng(6);
  DiscreteLamination lam = random_lamination(rng, 50);
  ASSERT_EQ(lam.size(), 50u);
  for (const auto& l : lam.leaves()) {
    EXPECT_TRUE(arc_inside_disk(l.g));
    GeodesicArc a = geodesic_arc(l.g);
    if (a.straight) continue;
    // orthogonal to the unit circle: |c|^2 = 1 + r^2
    EXPECT_NEAR(std::norm(a.center), 1 + a.radius * a.radius, 1e-9 * std::norm(a.center));
    EXPECT_NEAR(std::abs(a.p - a.center), a.radius, 1e-9 * a.radius);
  }
  EXPECT_TRUE(arc_inside_disk(Geodesic::disk(0.0, kPi)));
  EXPECT_TRUE(arc_inside_disk(Geodesic::disk(6.0, 0.2)));
}

TEST(Svg, EmptyAndDeterministic) {
  std::string empty = plot_lamination(DiscreteLamination());
  EXPECT_NE(empty.find("<circle"), std::string::npos);
  EXPECT_EQ(empty.find("<path"), std::string::npos);
  // limit leaf, one approximant and the box Q_n around the limit
  const double e = std::exp(1.0);
  DiscreteLamination lam({{Geodesic(r(0), inf), 1.0}, {Geodesic(r(0.25), inf), 1.0}});
  GeodesicBox qn(inf, r(-e / 4), r(0), r(e / 4));
  std::string a = plot_lamination(lam, {qn}), b = plot_lamination(lam, {qn});
  EXPECT_EQ(a, b);
  std::size_t paths = 0;
  for (std::size_t pos = a.find("<path"); pos != std::string::npos; pos = a.find("<path", pos + 1)) ++paths;
  EXPECT_EQ(paths, 4u);  // two leaves, two box arcs
  FiniteEarthquake E = build_earthquake(lam, Complex(-1, 1));
  EXPECT_EQ(plot_earthquake_image(E.as_function(), &lam), plot_earthquake_image(E.as_function(), &lam));
  std::string field = plot_vector_field(dot_E_field(lam, Complex(-1, 1)));
  EXPECT_NE(field.find("<line"), std::string::npos);
}

TEST(Cli, ListAndExitCodes) {
  Output l = sh("list");
  EXPECT_EQ(l.code, 0);
  for (const auto& id : experiment_ids()) EXPECT_NE(l.out.find(id), std::string::npos) << id;
  EXPECT_EQ(sh("run no-such-experiment").code, 2);
  EXPECT_EQ(sh("run example1-frechet --nu 0,1").code, 2);
  EXPECT_EQ(sh("run example1-frechet --format xml").code, 2);
  EXPECT_EQ(sh("run example1-frechet --config /nonexistent.json").code, 2);
  EXPECT_EQ(sh("frobnicate").code, 2);
}

TEST(Cli, RunWritesVersionedJsonAndIsDeterministic) {
  TempDir dir;
  Output first = sh("run elementary-teichmuller --out " + (dir / "a").string());
  EXPECT_EQ(first.code, 0);
  Json j = Json::parse(slurp(dir / "a" / "elementary-teichmuller.json"));
  EXPECT_EQ(j["schema"], "eql-1");
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["table"].size(), 4u);
  Output second = sh("run elementary-teichmuller --seed 1");
  EXPECT_EQ(second.out, slurp(dir / "a" / "elementary-teichmuller.json"));
  Output a = sh("run example1-midpoint --nu 0.5,1");
  Output b = sh("run example1-midpoint --nu 0.5,1");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ConfigFileAndCsv) {
  TempDir dir;
  write(dir / "cfg.json", R"({"experiment":"example1-frechet","nu":[1.0],"seed":7,"format":"csv"})");
  Output o = sh("run --config " + (dir / "cfg.json").string());
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out.rfind("endpoint_distance,", 0), 0u);
  std::size_t lines = 0;
  for (char c : o.out) lines += c == '\n';
  EXPECT_EQ(lines, 5u);  // header and four n
  write(dir / "bad.json", R"({"experiment":"example1-frechet","budget":"lots"})");
  EXPECT_EQ(sh("run --config " + (dir / "bad.json").string()).code, 2);
}

TEST(Cli, Plot) {
  TempDir dir;
  write(dir / "empty.json", R"({"type":"discrete","leaves":[]})");
  Output o = sh("plot lamination --input " + (dir / "empty.json").string());
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("<svg"), std::string::npos);
  EXPECT_EQ(o.out.find("<path"), std::string::npos);
  write(dir / "one.json", to_json(DiscreteLamination({{Geodesic::disk(1.0, 4.0), 0.5}})).dump());
  for (const char* kind : {"lamination", "earthquake", "field"}) {
    fs::path out = dir / (std::string(kind) + ".svg");
    EXPECT_EQ(sh(std::string("plot ") + kind + " --input " + (dir / "one.json").string() + " --out " + out.string()).code, 0);
    EXPECT_NE(slurp(out).find("</svg>"), std::string::npos) << kind;
  }
  write(dir / "broken.json", "{not json");
  EXPECT_EQ(sh("plot lamination --input " + (dir / "broken.json").string()).code, 2);
  EXPECT_EQ(sh("plot field --input " + (dir / "missing.json").string()).code, 2);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "curvatura/cli.hpp"
#include "curvatura/json_writer.hpp"
#include "curvatura/surface_file.hpp"
#include "curvatura/verify.hpp"

using namespace curvatura;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string temp_path(const std::string& name) {
  return std::string("io_cli_") + name;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

const char* kEllipticToml = R"toml(# worked elliptic point
[surface]
name = "elliptic-demo"
ambient_dim = 4
components = ["s", "t", "0.5*(2*s^2+4*s*t+0.5*t^2)", "0.5*(2*s^2-0.5*t^2)"]

[analysis]
at = [0.0, 0.0]
)toml";

}  // namespace

TEST_CASE("fmt_double pins 12 significant digits") {
  CHECK(fmt_double(3.0) == "3");
  CHECK(fmt_double(-4.0) == "-4");
  CHECK(fmt_double(-13.0 / 12.0) == "-1.08333333333");
  CHECK(fmt_double(0.0) == "0");
  CHECK(fmt_double(1.25) == "1.25");
}

TEST_CASE("json writer emits ordered, stable objects") {
  JsonWriter w;
  w.begin_object();
  w.key("a").value(1);
  w.key("b").begin_array().value(1.5).value(true).null().end_array();
  w.key("c").value("x\"y");
  w.end_object();
  CHECK(w.str() == "{\"a\":1,\"b\":[1.5,true,null],\"c\":\"x\\\"y\"}");
}

TEST_CASE("surface file parsing") {
  const SurfaceFile file = parse_surface_file(kEllipticToml);
  CHECK(file.spec.name == "elliptic-demo");
  CHECK(file.spec.ambient_dim == 4);
  CHECK(file.spec.components.size() == 4);
  REQUIRE(file.analysis.at_s.has_value());
  CHECK(*file.analysis.at_s == 0.0);

  CHECK_THROWS_AS(parse_surface_file("[surface]\nname = \"x\"\n"), ParseError);
  CHECK_THROWS_AS(
      parse_surface_file("[surface]\nambient_dim = 4\ncomponents = [\"s\"]\n"),
      std::invalid_argument);
  CHECK_THROWS_AS(parse_surface_file("[surface]\nbogus = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_surface_file("key_outside_section = 1\n"), ParseError);
}

TEST_CASE("point command emits the documented report") {
  const std::string surface = temp_path("elliptic.toml");
  const std::string out = temp_path("point.json");
  write_file(surface, kEllipticToml);

  RunConfig config;
  config.command = "point";
  config.surface_path = surface;
  config.out_path = out;
  CHECK(run_command(config) == kExitOk);

  const std::string payload = slurp(out);
  CHECK(payload.find("\"Delta\":3") != std::string::npos);
  CHECK(payload.find("\"K\":-4") != std::string::npos);
  CHECK(payload.find("\"N\":-5") != std::string::npos);
  CHECK(payload.find("\"RH_inner\":-1.08333333333") != std::string::npos);

  const json doc = json::parse(payload);
  CHECK(doc["schema"] == "curvatura.point.v1");
  CHECK(doc["codim"] == 2);
  CHECK(doc["class"] == "Elliptic");
  CHECK(doc["caustic"]["class"] == "Ellipse");
  CHECK(doc["H"][0] == doctest::Approx(1.25));
  CHECK(doc["focal"][0] == doctest::Approx(-3.0));
  CHECK(doc["R"]["at_infinity"] == false);
  CHECK(doc["R"]["v"][0] == doctest::Approx(-5.0 / 12.0));
  CHECK(doc["paired"]["Delta"] == doctest::Approx(1.0 / 3.0));
  CHECK(doc["inequalities"].is_array());
  for (const auto& e : doc["inequalities"]) CHECK(e["holds"] == true);

  // determinism: a second run produces identical bytes
  const std::string out2 = temp_path("point2.json");
  RunConfig again = config;
  again.out_path = out2;
  CHECK(run_command(again) == kExitOk);
  CHECK(slurp(out) == slurp(out2));

  std::remove(surface.c_str());
  std::remove(out.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("point command maps failures to exit codes") {
  const std::string bad = temp_path("bad.toml");
  write_file(bad, "[surface]\nambient_dim = 4\ncomponents = [\"s\", \"t\", "
                  "\"qq\", \"t\"]\n");
  RunConfig config;
  config.command = "point";
  config.surface_path = bad;
  config.out_path = temp_path("unused.json");
  CHECK(run_command(config) == kExitParse);
  std::remove(bad.c_str());

  const std::string degenerate = temp_path("degenerate.toml");
  write_file(degenerate,
             "[surface]\nambient_dim = 4\ncomponents = [\"s\", \"2*s\", "
             "\"0*s\", \"0*s\"]\n");
  config.surface_path = degenerate;
  CHECK(run_command(config) == kExitImmersion);
  std::remove(degenerate.c_str());

  // paired quantities explicitly requested at a flat umbilic: exit 4
  const std::string flat = temp_path("flat.toml");
  write_file(flat, "[surface]\nambient_dim = 4\ncomponents = [\"s\", \"t\", "
                   "\"0*s\", \"0*s\"]\n");
  config.surface_path = flat;
  config.require_paired = true;
  CHECK(run_command(config) == kExitUndefined);
  config.require_paired = false;
  const std::string out = temp_path("flat.json");
  config.out_path = out;
  CHECK(run_command(config) == kExitOk);
  const json doc = json::parse(slurp(out));
  CHECK(doc["paired"].is_null());
  CHECK(doc["class"] == "FlatUmbilic");
  std::remove(flat.c_str());
  std::remove(out.c_str());
}

TEST_CASE("curves command") {
  const std::string surface = temp_path("curves_surface.toml");
  write_file(surface, kEllipticToml);
  const std::string out = temp_path("curves.csv");

  RunConfig config;
  config.command = "curves";
  config.surface_path = surface;
  config.format = "csv";
  config.out_path = out;
  config.samples = 32;
  config.samples_overridden = true;
  CHECK(run_command(config) == kExitOk);
  const std::string payload = slurp(out);
  CHECK(payload.rfind("curve_id,param,q1,q2\n", 0) == 0);
  CHECK(payload.find("\nEp,") != std::string::npos);
  CHECK(payload.find("\nCp,") != std::string::npos);
  CHECK(payload.find("\nEp_star,") != std::string::npos);
  CHECK(payload.find("\nCp_star,") != std::string::npos);
  CHECK(payload.find("\nH_locus,") != std::string::npos);
  CHECK(payload.find("\nR_locus,") != std::string::npos);
  CHECK(payload.find("\np,") != std::string::npos);
  CHECK(payload.find("\nH,") != std::string::npos);
  CHECK(payload.find("\nR,") != std::string::npos);
  CHECK(payload.find("\nbitangency1,") != std::string::npos);

  // byte determinism
  const std::string out2 = temp_path("curves2.csv");
  RunConfig again = config;
  again.out_path = out2;
  CHECK(run_command(again) == kExitOk);
  CHECK(slurp(out) == slurp(out2));

  // svg view
  RunConfig svg = config;
  svg.format = "svg";
  svg.out_path = temp_path("curves.svg");
  CHECK(run_command(svg) == kExitOk);
  CHECK(slurp(svg.out_path).rfind("<svg", 0) == 0);

  std::remove(surface.c_str());
  std::remove(out.c_str());
  std::remove(out2.c_str());
  std::remove(svg.out_path.c_str());
}

TEST_CASE("grid command with failure budget") {
  const std::string plane = temp_path("plane.toml");
  write_file(plane, "[surface]\nambient_dim = 4\ncomponents = [\"s\", \"t\", "
                    "\"0*s\", \"0*s\"]\n");
  RunConfig config;
  config.command = "grid";
  config.surface_path = plane;
  config.format = "csv";
  config.have_range = true;
  config.s_min = -1;
  config.s_max = 1;
  config.t_min = -1;
  config.t_max = 1;
  config.resolution = 10;
  const std::string out = temp_path("grid.csv");
  config.out_path = out;
  CHECK(run_command(config) == kExitOk);
  const std::string payload = slurp(out);
  int flat_rows = 0;
  std::istringstream lines(payload);
  std::string line;
  std::getline(lines, line);  // header
  CHECK(line == "s,t,K,N,Delta,Hnorm,class,boundary_warning,error");
  while (std::getline(lines, line))
    if (line.find("FlatUmbilic") != std::string::npos) ++flat_rows;
  CHECK(flat_rows == 100);
  std::remove(plane.c_str());
  std::remove(out.c_str());

  // a sphere sampled far outside its chart: most cells fail -> exit 5
  const std::string sphere = temp_path("sphere.toml");
  write_file(sphere, "[surface]\nambient_dim = 3\ncomponents = [\"s\", \"t\", "
                     "\"sqrt(1-s^2-t^2)\"]\n");
  RunConfig wide = config;
  wide.surface_path = sphere;
  wide.s_min = wide.t_min = -4;
  wide.s_max = wide.t_max = 4;
  wide.out_path = temp_path("grid_sphere.csv");
  CHECK(run_command(wide) == kExitGridBudget);
  std::remove(sphere.c_str());
  std::remove(wide.out_path.c_str());
}

namespace {

// lightweight structural validation against the documented schema: every
// required key must be present with a matching basic type
void check_required(const json& schema, const json& doc) {
  if (schema.contains("required"))
    for (const auto& key : schema["required"]) {
      INFO("required key ", key.get<std::string>());
      REQUIRE(doc.contains(key.get<std::string>()));
    }
  if (!schema.contains("properties")) return;
  for (const auto& item : schema["properties"].items()) {
    const std::string& key = item.key();
    const json& sub = item.value();
    if (!doc.contains(key)) continue;
    const json& value = doc[key];
    if (sub.contains("type") && sub["type"].is_string()) {
      const std::string type = sub["type"];
      INFO("key ", key, " expected ", type);
      if (type == "number") CHECK(value.is_number());
      if (type == "integer") CHECK(value.is_number_integer());
      if (type == "string") CHECK(value.is_string());
      if (type == "boolean") CHECK(value.is_boolean());
      if (type == "array") CHECK(value.is_array());
      if (type == "object") {
        CHECK(value.is_object());
        check_required(sub, value);
      }
    }
  }
}

}  // namespace

TEST_CASE("point output validates against the documented schema") {
  const std::string surface = temp_path("schema_surface.toml");
  write_file(surface, kEllipticToml);
  const std::string out = temp_path("schema_point.json");
  RunConfig config;
  config.command = "point";
  config.surface_path = surface;
  config.out_path = out;
  REQUIRE(run_command(config) == kExitOk);
  const json doc = json::parse(slurp(out));
  const json schema = json::parse(
      slurp(std::string(CURVATURA_SOURCE_DIR) + "/docs/schema/point.schema.json"));
  check_required(schema, doc);
  std::remove(surface.c_str());
  std::remove(out.c_str());
}

TEST_CASE("codim 1 and codim 3 surfaces through the CLI") {
  // sphere in R^3: invariants only, no class label
  RunConfig config;
  config.command = "point";
  config.surface_path =
      std::string(CURVATURA_SOURCE_DIR) + "/surfaces/sphere_r3.toml";
  config.out_path = temp_path("sphere_point.json");
  REQUIRE(run_command(config) == kExitOk);
  {
    const json doc = json::parse(slurp(config.out_path));
    CHECK(doc["codim"] == 1);
    CHECK(doc["class"].is_null());
    CHECK(doc["K"] == doctest::Approx(1.0));
    CHECK(doc["focal"][0] == doctest::Approx(1.0));
  }
  std::remove(config.out_path.c_str());

  // R^5 diagonal example: tau and the pseudo-elliptic label
  config.surface_path =
      std::string(CURVATURA_SOURCE_DIR) + "/surfaces/r5_diag_demo.toml";
  config.out_path = temp_path("r5_point.json");
  REQUIRE(run_command(config) == kExitOk);
  {
    const std::string payload = slurp(config.out_path);
    CHECK(payload.find("\"tau\":1") != std::string::npos);
    CHECK(payload.find("\"class\":\"PseudoElliptic\"") != std::string::npos);
    const json doc = json::parse(payload);
    CHECK(doc["Acal"] == doctest::Approx(-1.0));
    CHECK(doc["class_flags"]["m_stratum"] == 3);
  }
  std::remove(config.out_path.c_str());

  // curves on the R^5 cone emit q3 rows
  RunConfig curves;
  curves.command = "curves";
  curves.surface_path =
      std::string(CURVATURA_SOURCE_DIR) + "/surfaces/r5_diag_demo.toml";
  curves.format = "csv";
  curves.out_path = temp_path("r5_curves.csv");
  REQUIRE(run_command(curves) == kExitOk);
  const std::string payload = slurp(curves.out_path);
  CHECK(payload.rfind("curve_id,param,q1,q2,q3\n", 0) == 0);
  CHECK(payload.find("\nCp,") != std::string::npos);
  std::remove(curves.out_path.c_str());

  // grid over the generic R^5 demo carries Acal and tau columns
  RunConfig grid;
  grid.command = "grid";
  grid.surface_path =
      std::string(CURVATURA_SOURCE_DIR) + "/surfaces/r5_generic_demo.toml";
  grid.format = "csv";
  grid.resolution = 7;
  grid.out_path = temp_path("r5_grid.csv");
  REQUIRE(run_command(grid) == kExitOk);
  const std::string gpayload = slurp(grid.out_path);
  CHECK(gpayload.rfind("s,t,K,N,Delta,Acal,tau,Hnorm,class,boundary_warning,"
                       "error\n", 0) == 0);
  std::remove(grid.out_path.c_str());
}

TEST_CASE("verify command and the mutation smoke hook") {
  // library-level: seeded determinism and bug injection ordering
  verify::Options opts;
  opts.seed = 42;
  opts.count_scale = 0.01;
  const auto results = verify::run_battery(opts);
  REQUIRE(!results.empty());
  CHECK(results.front().name == "sl2.bracket_pseudo_orthogonality");
  for (const auto& p : results) {
    INFO(p.name);
    CHECK(p.passed);
  }
  const auto rerun = verify::run_battery(opts);
  REQUIRE(rerun.size() == results.size());
  for (std::size_t i = 0; i < results.size(); ++i)
    CHECK(rerun[i].max_residual == results[i].max_residual);

  verify::Options buggy = opts;
  buggy.inject_psi_sign_flip = true;
  const auto broken = verify::run_battery(buggy);
  const verify::PropertyResult* first_failure = nullptr;
  for (const auto& p : broken)
    if (!p.passed) {
      first_failure = &p;
      break;
    }
  REQUIRE(first_failure != nullptr);
  CHECK(first_failure->name == "sl2.bracket_pseudo_orthogonality");

  // CLI-level exit codes
  RunConfig config;
  config.command = "verify";
  config.count_scale = 0.01;
  config.seed = 42;
  config.out_path = temp_path("verify.txt");
  config.format = "csv";
  CHECK(run_command(config) == kExitOk);
  CHECK(slurp(config.out_path).find("PASS sl2.bracket_pseudo_orthogonality") !=
        std::string::npos);
  config.inject_bug = "psi-sign-flip";
  CHECK(run_command(config) == kExitPropertyFailure);
  std::remove(config.out_path.c_str());
}

TEST_CASE("curves at an umbilic point: double-line caustic, point ellipse") {
  // A = C = (1, 2), B = 0: the indicatrix is the single point H = (1,2) and
  // the caustic is the polar line <H,q> = 1 counted twice
  const std::string surface = temp_path("umbilic.toml");
  write_file(surface,
             "[surface]\nambient_dim = 4\ncomponents = [\"s\", \"t\", "
             "\"0.5*(s^2+t^2)\", \"s^2+t^2\"]\n");
  RunConfig config;
  config.command = "curves";
  config.surface_path = surface;
  config.format = "csv";
  config.out_path = temp_path("umbilic_curves.csv");
  REQUIRE(run_command(config) == kExitOk);
  const std::string payload = slurp(config.out_path);
  CHECK(payload.find("\nCp_line1,") != std::string::npos);
  CHECK(payload.find("\nCp_line2,") == std::string::npos);  // counted twice

  // every emitted caustic row satisfies <H,q> = 1
  std::istringstream lines(payload);
  std::string line;
  int checked = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("Cp_line1,", 0) != 0) continue;
    double param, q1, q2;
    REQUIRE(std::sscanf(line.c_str() + 9, "%lf,%lf,%lf", &param, &q1, &q2) ==
            3);
    CHECK(1.0 * q1 + 2.0 * q2 == doctest::Approx(1.0).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked > 10);

  // the ellipse degenerates to the single point H
  std::istringstream again(payload);
  while (std::getline(again, line)) {
    if (line.rfind("Ep,", 0) != 0) continue;
    double param, q1, q2;
    REQUIRE(std::sscanf(line.c_str() + 3, "%lf,%lf,%lf", &param, &q1, &q2) ==
            3);
    CHECK(q1 == doctest::Approx(1.0));
    CHECK(q2 == doctest::Approx(2.0));
  }
  std::remove(surface.c_str());
  std::remove(config.out_path.c_str());
}

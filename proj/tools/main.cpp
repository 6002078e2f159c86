#include <CLI11.hpp>

#include "curvatura/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "curvatura: second-order local geometry of surfaces in R^3/R^4/R^5 "
      "(invariants, indicatrix ellipse, local caustic, duality, paired maps)"};
  app.require_subcommand(1);

  curvatura::RunConfig config;
  std::vector<double> at;
  std::vector<double> range;

  auto add_common = [&](CLI::App* cmd, bool needs_surface) {
    auto* s = cmd->add_option("--surface", config.surface_path,
                              "surface description file (TOML)");
    if (needs_surface) s->required();
    cmd->add_option("--tol", config.tol, "classification tolerance")
        ->each([&](const std::string&) { config.tol_overridden = true; });
    cmd->add_option("--seed", config.seed, "RNG seed")
        ->each([&](const std::string&) { config.seed_overridden = true; });
    cmd->add_option("--samples", config.samples, "sample count for curves")
        ->each([&](const std::string&) { config.samples_overridden = true; });
    cmd->add_option("--format", config.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "svg"}));
    cmd->add_option("--out", config.out_path, "output path ('-' = stdout)");
  };

  auto* point = app.add_subcommand("point", "analyse the surface at a point");
  add_common(point, true);
  point->add_option("--at", at, "parameter point s t")->expected(2);
  point->add_flag("--paired", config.require_paired,
                  "fail (exit 4) when the paired map is undefined");

  auto* curves =
      app.add_subcommand("curves", "emit the characteristic curves at a point");
  add_common(curves, true);
  curves->add_option("--at", at, "parameter point s t")->expected(2);

  auto* grid = app.add_subcommand("grid", "classify over a parameter grid");
  add_common(grid, true);
  grid->add_option("--range", range, "s_min s_max t_min t_max")->expected(4);
  grid->add_option("--res", config.resolution, "grid resolution per axis");

  auto* verify =
      app.add_subcommand("verify", "run the randomized property battery");
  add_common(verify, false);
  verify
      ->add_option("--inject-bug", config.inject_bug,
                   "mutation smoke hook (psi-sign-flip)")
      ->check(CLI::IsMember({"psi-sign-flip"}));
  verify
      ->add_option("--count-scale", config.count_scale,
                   "scale randomized sample counts (testing)")
      ->group("");

  CLI11_PARSE(app, argc, argv);

  if (point->parsed()) config.command = "point";
  if (curves->parsed()) config.command = "curves";
  if (grid->parsed()) config.command = "grid";
  if (verify->parsed()) config.command = "verify";
  if (at.size() == 2) {
    config.have_at = true;
    config.s0 = at[0];
    config.t0 = at[1];
  }
  if (range.size() == 4) {
    config.have_range = true;
    config.s_min = range[0];
    config.s_max = range[1];
    config.t_min = range[2];
    config.t_max = range[3];
  }

  return curvatura::run_command(config);
}

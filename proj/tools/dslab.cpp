// Scenario runner for the de Sitter Dirac laboratory.
//
// Exit codes: 0 success (a detected blow-up is success with a flagged
// outcome), 1 configuration / schema error, 2 physical precondition
// failure, 3 runtime or solver error.

#include "dsdirac/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const dsdirac::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const dsdirac::PreconditionError& e) {
    std::cerr << "precondition failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dslab - numerical laboratory for the semilinear Dirac equation in de "
      "Sitter spacetime"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  int n_points = 10;
  std::string selftest_out;

  auto* run = app.add_subcommand("run", "evolve a scenario and run checks");
  run->add_option("scenario", scenario_path, "scenario JSON file")
      ->required();
  run->add_option("--out", out_dir, "output directory override");

  auto* blowup = app.add_subcommand(
      "predict-blowup", "lifespan prediction plus detection for a scenario");
  blowup->add_option("scenario", scenario_path, "scenario JSON file")
      ->required();
  blowup->add_option("--out", out_dir, "output directory override");

  auto* scat = app.add_subcommand(
      "scattering", "compute scattering data and the residual series");
  scat->add_option("scenario", scenario_path, "scenario JSON file")
      ->required();
  scat->add_option("--out", out_dir, "output directory override");

  auto* cmp = app.add_subcommand(
      "compare-oracles",
      "kernel representation vs finite-difference evolution");
  cmp->add_option("scenario", scenario_path, "scenario JSON file")
      ->required();
  cmp->add_option("--points", n_points, "number of sample points");
  cmp->add_option("--out", out_dir, "output directory override");

  auto* self = app.add_subcommand("selftest", "run the invariant suite");
  self->add_option("--out", selftest_out, "write the CSV to this file");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    return guarded([&] {
      const auto sc = dsdirac::load_scenario(scenario_path);
      const auto art = dsdirac::run_scenario(sc, true, out_dir);
      std::cout << art.summary_json << "\n";
      return 0;
    });
  }
  if (blowup->parsed()) {
    return guarded([&] {
      const auto sc = dsdirac::load_scenario(scenario_path);
      const auto art = dsdirac::run_predict_blowup(sc, true, out_dir);
      std::cout << art.summary_json << "\n";
      return 0;
    });
  }
  if (scat->parsed()) {
    return guarded([&] {
      const auto sc = dsdirac::load_scenario(scenario_path);
      const auto art = dsdirac::run_scattering(sc, true, out_dir);
      std::cout << art.summary_json << "\n";
      return 0;
    });
  }
  if (cmp->parsed()) {
    return guarded([&] {
      const auto sc = dsdirac::load_scenario(scenario_path);
      const auto art =
          dsdirac::compare_oracles(sc, n_points, 7u, true, out_dir);
      std::cout << art.summary_json << "\n";
      return 0;
    });
  }
  if (self->parsed()) {
    return guarded([&] {
      if (!selftest_out.empty()) {
        std::ofstream out(selftest_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + selftest_out);
        return dsdirac::selftest(out) ? 0 : 3;
      }
      return dsdirac::selftest(std::cout) ? 0 : 3;
    });
  }
  return 1;
}

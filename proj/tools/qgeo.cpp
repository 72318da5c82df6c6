#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <iostream>
#include <sstream>

#include "qgeo/cli/commands.hpp"

using namespace qgeo;

namespace {

struct Output {
  std::string json, csv;
  std::optional<double> tol;
};

void add_output_flags(CLI::App* app, Output& o) {
  app->add_option("--json", o.json, "write the JSON report to FILE ('-' for stdout)");
  app->add_option("--csv", o.csv, "write the residual table to FILE ('-' for stdout)");
  app->add_option("--tol", o.tol, "override every upper tolerance")->check(CLI::PositiveNumber);
}

void write(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

int emit(Report r, const Output& o) {
  if (o.tol) r.override_tolerance(*o.tol);
  if (!o.json.empty()) write(o.json, to_json(r).dump(2) + "\n");
  if (!o.csv.empty()) write(o.csv, to_csv(r));
  if (o.json != "-" && o.csv != "-") std::cout << to_text(r);
  return r.ok() ? 0 : 1;
}

std::vector<double> parse_point(const std::string& s) {
  std::vector<double> y;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      y.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--point: cannot parse '" + item + "'");
    }
  }
  return y;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extrinsic conformal invariants, Q-curvature and Gauss-Bonnet checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kEngineVersion);

  Output out;
  std::string scene, point;
  auto* eval = app.add_subcommand("eval", "evaluate every invariant defined on a scene");
  eval->add_option("--scene", scene, "scene file or builtin scene name")->required();
  eval->add_option("--point", point, "comma separated patch coordinates replacing the scene points");
  add_output_flags(eval, out);

  SuiteOptions so;
  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run a verification battery");
  verify->add_option("suite,--suite", suite, "suite name")->check(CLI::IsMember(suites::suite_names()));
  verify->add_option("--seed", so.seed, "seed for the random scenes");
  verify->add_option("--upsilon-degree", so.upsilon_degree, "degree of the random conformal factors")
      ->check(CLI::Range(1, 6));
  add_output_flags(verify, out);

  RenormArgs ra;
  auto* renorm = app.add_subcommand("renorm", "renormalized area of a totally geodesic hyperbolic ball");
  renorm->add_option("--k", ra.k, "dimension, 2 or 4");
  renorm->add_option("--n", ra.n, "ambient dimension");
  renorm->add_option("--R", ra.R, "radius of the hemisphere");
  renorm->add_option("--eps-min", ra.eps_min, "smallest cutoff height");
  renorm->add_option("--eps-max", ra.eps_max, "largest cutoff height");
  renorm->add_option("--samples", ra.samples, "number of cutoff heights");
  add_output_flags(renorm, out);

  auto* list = app.add_subcommand("scenes", "list the builtin scenes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*eval) {
      SceneFile s = load_scene(scene);
      if (!point.empty()) {
        const auto y = parse_point(point);
        if (static_cast<int>(y.size()) != s.k)
          throw ConfigError("--point: expected " + std::to_string(s.k) + " coordinates");
        s.points = {y};
      }
      return emit(eval_scene(s), out);
    }
    if (*verify) return emit(suites::run_suite(suite, so), out);
    if (*renorm) {
      if (renorm->count("--n") == 0) ra.n = ra.k + 1;
      return emit(renorm_report(ra), out);
    }
    if (*list) {
      for (const auto& n : builtin_scene_names()) std::cout << n << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

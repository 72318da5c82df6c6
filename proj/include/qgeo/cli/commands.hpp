#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qgeo/cli/report.hpp"
#include "qgeo/cli/scene_file.hpp"
#include "qgeo/cli/suites.hpp"

namespace qgeo {

// Scenes available by name; scenes/<name>.json holds the same documents.
inline const std::vector<std::pair<std::string, ojson>>& builtin_scenes() {
  static const std::vector<std::pair<std::string, ojson>> s = [] {
    auto scene = [](const char* text) { return ojson::parse(text); };
    std::vector<std::pair<std::string, ojson>> v;
    v.emplace_back("flat", scene(R"({
      "name": "flat",
      "ambient": {"catalog": "flat", "n": 6},
      "submanifold": {"catalog": "affine", "k": 4},
      "points": [[0.1, 0.2, 0.3, 0.4]],
      "tolerance": 1e-12,
      "expect": {"*": 0.0}
    })"));
    v.emplace_back("clifford-torus", scene(R"({
      "name": "clifford-torus",
      "ambient": {"catalog": "sphere", "n": 3},
      "submanifold": {"catalog": "clifford-torus"},
      "points": [[0.4, 1.0], [1.3, -0.6]],
      "tolerance": 1e-9,
      "expect": {"Q": 1.0, "W_Q": 1.0, "Pf": 0.0, "Lo_sq": 2.0}
    })"));
    v.emplace_back("equatorial-s2-in-s3", scene(R"({
      "name": "equatorial-s2-in-s3",
      "ambient": {"catalog": "sphere", "n": 3},
      "submanifold": {"catalog": "equatorial-sphere", "k": 2},
      "points": [[0.4, 1.0]],
      "tolerance": 1e-9,
      "expect": {"Q": 1.0, "W_Q": 0.0, "Pf": 1.0, "Lo_sq": 0.0}
    })"));
    v.emplace_back("equatorial-s2-in-s5", scene(R"({
      "name": "equatorial-s2-in-s5",
      "ambient": {"catalog": "sphere", "n": 5},
      "submanifold": {"catalog": "equatorial-sphere", "k": 2},
      "points": [[0.2, 0.7]],
      "tolerance": 1e-9,
      "expect": {"Q": 1.0, "Pf": 1.0, "Lo_sq": 0.0}
    })"));
    v.emplace_back("equatorial-s4-in-s5", scene(R"({
      "name": "equatorial-s4-in-s5",
      "ambient": {"catalog": "sphere", "n": 5},
      "submanifold": {"catalog": "equatorial-sphere", "k": 4},
      "points": [[0.1, 0.4, 0.3, 0.05]],
      "tolerance": 1e-8,
      "expect": {"Q": 6.0, "W_Q": 0.0, "Pf": 3.0, "Lo_sq": 0.0}
    })"));
    v.emplace_back("equatorial-s4-in-s7", scene(R"({
      "name": "equatorial-s4-in-s7",
      "ambient": {"catalog": "sphere", "n": 7},
      "submanifold": {"catalog": "equatorial-sphere", "k": 4},
      "points": [[-0.2, 0.6, 1.1, 0.3]],
      "tolerance": 1e-8,
      "expect": {"Q": 6.0, "W_Q": 0.0, "Pf": 3.0}
    })"));
    v.emplace_back("s2xs2-in-s5", scene(R"({
      "name": "s2xs2-in-s5",
      "ambient": {"catalog": "sphere", "n": 5},
      "submanifold": {"catalog": "s2xs2"},
      "points": [[0.3, 0.7, -0.2, 2.1]],
      "tolerance": 1e-7,
      "expect": {"Q": 6.0, "Q4": 6.0, "Pf": 4.0, "W_Q": -2.0}
    })"));
    v.emplace_back("t4-in-s7", scene(R"({
      "name": "t4-in-s7",
      "ambient": {"catalog": "sphere", "n": 7},
      "submanifold": {"catalog": "t4"},
      "points": [[0.3, 1.2, -0.7, 2.5]],
      "tolerance": 1e-7,
      "expect": {"Q": 6.0, "Pf": 0.0}
    })"));
    v.emplace_back("hemisphere-in-h3", scene(R"({
      "name": "hemisphere-in-h3",
      "ambient": {"catalog": "hyperbolic", "n": 3},
      "submanifold": {"catalog": "hemisphere", "k": 2, "R": 1.0},
      "points": [[0.2, 0.1], [-0.5, 0.3]],
      "tolerance": 1e-9,
      "expect": {"Q": -1.0, "W_Q": 0.0, "Lo_sq": 0.0}
    })"));
    v.emplace_back("hemisphere-in-h5", scene(R"({
      "name": "hemisphere-in-h5",
      "ambient": {"catalog": "hyperbolic", "n": 5},
      "submanifold": {"catalog": "hemisphere", "k": 4, "R": 1.0},
      "points": [[0.1, -0.2, 0.3, 0.1]],
      "tolerance": 1e-8,
      "expect": {"Q": 6.0, "W_Q": 0.0, "Lo_sq": 0.0}
    })"));
    v.emplace_back("random-k4-n6", scene(R"({
      "name": "random-k4-n6",
      "ambient": {"catalog": "random-polynomial", "n": 6, "seed": 101},
      "submanifold": {"catalog": "random-graph", "k": 4, "seed": 102},
      "points": [[0.05, -0.1, 0.15, 0.02]]
    })"));
    v.emplace_back("independence-family-n6", scene(R"({
      "name": "independence-family-n6",
      "ambient": {"catalog": "independence-family", "n": 6, "params": [0.7, -0.4, 0.3, 1.1]},
      "submanifold": {"catalog": "affine", "k": 4},
      "points": [[0.0, 0.0, 0.0, 0.0]],
      "quantities": ["K1", "K2", "I", "J", "2I+J", "N1", "N2"]
    })"));
    return v;
  }();
  return s;
}

inline std::vector<std::string> builtin_scene_names() {
  std::vector<std::string> n;
  for (const auto& [name, j] : builtin_scenes()) n.push_back(name);
  return n;
}

// A path to a scene file, or the name of a builtin scene.
inline SceneFile load_scene(const std::string& path_or_name) {
  if (std::filesystem::exists(path_or_name)) return load_scene_file(path_or_name);
  for (const auto& [name, j] : builtin_scenes())
    if (name == path_or_name) return parse_scene(j.dump(2));
  std::string known;
  for (const auto& n : builtin_scene_names()) known += (known.empty() ? "" : ", ") + n;
  throw SceneError("no scene file or builtin scene named '" + path_or_name + "' (builtin: " + known + ")");
}

// Every registered invariant defined at (k, n), or the requested subset, at every point.
inline Report eval_scene(const SceneFile& s) {
  Report r;
  r.command = "eval " + s.name;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    PackOptions opt;
    opt.ddweyl = s.ddweyl;
    const Scene sc{s.name, s.metric, s.patch, s.points[i], opt};
    const auto p = sc.pack<double>();
    const InvariantEvaluator<double> e(p);
    for (const auto& info : invariant_registry()) {
      if (!info.defined_at(s.k, s.n)) continue;
      if (!s.quantities.empty() && std::find(s.quantities.begin(), s.quantities.end(), info.name) == s.quantities.end())
        continue;
      CheckRecord c;
      c.name = info.name + "[" + std::to_string(i) + "]";
      c.anchor = info.description;
      c.values["weight"] = info.weight_for(s.k);
      try {
        const double v = info.eval(e);
        c.values["value"] = v;
        auto it = s.expect.find(info.name);
        if (it == s.expect.end()) it = s.expect.find("*");
        if (it != s.expect.end()) {
          c.values["expected"] = it->second;
          c.residual = std::abs(v - it->second);
          c.tolerance = s.tolerance;
        }
        c.judge();
        if (!std::isfinite(v)) {
          c.pass = false;
          c.note = "non-finite value";
        }
      } catch (const DomainError& ex) {
        // ddweyl disabled for a quantity that needs it, for instance.
        c.pass = false;
        c.note = ex.what();
      } catch (const NumericError& ex) {
        c.pass = false;
        c.note = ex.what();
      }
      r.add(c);
    }
  }
  return r;
}

struct RenormArgs {
  int k = 2, n = 3;
  double R = 1.0, eps_min = 1e-3, eps_max = 1e-1;
  int samples = 12;
};

inline Report renorm_report(const RenormArgs& a) {
  if (a.k != 2 && a.k != 4) throw ConfigError("renorm: k must be 2 or 4");
  if (a.n <= a.k || a.n > 8) throw ConfigError("renorm: need k < n <= 8");
  if (!(a.R > 0)) throw ConfigError("renorm: R must be positive");
  if (!(a.eps_min > 0) || !(a.eps_max > a.eps_min)) throw ConfigError("renorm: need 0 < eps-min < eps-max");
  if (!(a.eps_max < a.R)) throw ConfigError("renorm: eps-max must be below R");
  if (a.samples < a.k / 2 + 1) throw ConfigError("renorm: need at least " + std::to_string(a.k / 2 + 1) + " samples");
  const auto m = hemisphere_model(a.k, a.n, a.R);
  const auto fit = fit_renormalized_area(m, geometric_samples(a.eps_min, a.eps_max, a.samples));
  const auto gb = renorm_gb_check(m, fit);
  Report r;
  r.command = "renorm k=" + std::to_string(a.k) + " n=" + std::to_string(a.n);
  std::map<std::string, double> v{{"area", fit.renormalized_area},
                                  {"expected", gb.expected},
                                  {"chi", gb.chi},
                                  {"condition", fit.condition},
                                  {"fit_residual", fit.residual}};
  for (std::size_t i = 0; i < fit.powers.size(); ++i)
    v["coefficient eps^" + std::to_string(fit.powers[i])] = fit.coefficients[i];
  r.add(make_check("renorm/gauss-bonnet", "renormalized area = c_k chi for a totally geodesic ball", gb.residual, 1e-5,
                   v));
  r.add(make_check("renorm/integrand", "Weyl-type integrand vanishes on the model", gb.max_integrand, 1e-8,
                   {{"max_H", gb.max_mean_curvature}, {"max_Lo", gb.max_traceless}, {"max_W", gb.max_weyl}}));
  r.warnings = fit.warnings;
  return r;
}

}  // namespace qgeo

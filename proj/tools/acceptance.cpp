// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include "qgeo/cli/suites.hpp"

using namespace qgeo;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::function<Report(const SuiteOptions&)> run;
  double time_limit;  // seconds, 0 for none
};

}  // namespace

int main(int argc, char** argv) {
  const SuiteOptions opt;
  const std::vector<Criterion> criteria{
      {1, "Q factorization on minimal Einstein examples", suites::criterion_factorization, 10.0},
      {2, "constant in Q = c Pf + W_Q + divergence", suites::criterion_constant, 0.0},
      {3, "closed minimal Gauss-Bonnet", suites::criterion_closed_gb, 60.0},
      {4, "renormalized area of totally geodesic balls", suites::criterion_renormalized_area, 0.0},
      {5, "Gauss-Codazzi, divergence, Simons and Bianchi identities",
       [](const SuiteOptions& o) { return suites::criterion_identities(o); }, 300.0},
      {6, "conformal invariance and linearizations", suites::criterion_conformal_invariance, 0.0},
      {7, "Q transformation law and Paneitz calibration", suites::criterion_q_law, 0.0},
      {8, "variational strata and linear independence", suites::criterion_strata, 0.0},
      {9, "route agreement", suites::criterion_routes, 0.0},
  };
  Report all;
  all.command = "acceptance";
  all.seed = opt.seed;
  bool ok = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Report r;
    std::string error;
    try {
      r = c.run(opt);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit <= 0 || secs < c.time_limit;
    const bool pass = error.empty() && r.ok() && !r.checks.empty() && in_time;
    ok = ok && pass;
    std::printf("criterion %d: %s  %s  (%zu/%zu checks, %.1f s%s)\n", c.id, pass ? "PASS" : "FAIL", c.title,
                r.passed(), r.checks.size(), secs,
                c.time_limit > 0 ? (", limit " + std::to_string(static_cast<int>(c.time_limit)) + " s").c_str() : "");
    for (const auto& chk : r.checks)
      if (!chk.pass)
        std::printf("    failed %s residual=%.3e tolerance=%.1e %s\n", chk.name.c_str(), chk.residual.value_or(NAN),
                    chk.tolerance.value_or(NAN), chk.note.c_str());
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    if (!in_time) std::printf("    over the time limit\n");
    std::fflush(stdout);
    all.append(r);
  }
  if (argc > 1) {
    std::ofstream f(argv[1]);
    f << to_json(all).dump(2) << "\n";
  }
  return ok ? 0 : 1;
}

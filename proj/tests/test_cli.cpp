#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgeo/cli/commands.hpp"

using namespace qgeo;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = QGEO_SOURCE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("qgeo-test-" + name); }

struct Run {
  int status;
  std::string out, err;
};

Run run(const std::string& args, const std::string& env = "") {
  const auto o = temp_path("stdout"), e = temp_path("stderr");
  const std::string cmd = env + " " + QGEO_BIN + " " + args + " > " + o.string() + " 2> " + e.string();
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(o), slurp(e)};
}

// Structural equality with numeric tolerance.
void expect_json_near(const ojson& a, const ojson& b, const std::string& where = "") {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    EXPECT_LE(std::abs(x - y), 1e-9 + 1e-8 * std::max(std::abs(x), std::abs(y))) << where;
    return;
  }
  ASSERT_EQ(a.type(), b.type()) << where;
  if (a.is_object()) {
    ASSERT_EQ(a.size(), b.size()) << where;
    for (auto it = a.begin(); it != a.end(); ++it) {
      ASSERT_TRUE(b.contains(it.key())) << where << "/" << it.key();
      expect_json_near(it.value(), b.at(it.key()), where + "/" + it.key());
    }
  } else if (a.is_array()) {
    ASSERT_EQ(a.size(), b.size()) << where;
    for (std::size_t i = 0; i < a.size(); ++i) expect_json_near(a[i], b[i], where + "/" + std::to_string(i));
  } else {
    EXPECT_EQ(a, b) << where;
  }
}

void expect_scene_error(const std::string& text, int line, const std::string& fragment) {
  try {
    parse_scene(text);
    ADD_FAILURE() << "no error for: " << text;
  } catch (const SceneError& e) {
    EXPECT_EQ(e.line, line) << e.what();
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(SceneFiles, BuiltinsMatchFiles) {
  for (const auto& [name, j] : builtin_scenes()) {
    const auto path = kSource / "scenes" / (name + ".json");
    ASSERT_TRUE(fs::exists(path)) << path;
    EXPECT_EQ(ojson::parse(slurp(path)), j) << name;
  }
}

TEST(SceneFiles, RoundTripIsStable) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(kSource / "scenes")) {
    const SceneFile a = load_scene_file(entry.path().string());
    const ojson ja = to_json(a);
    const SceneFile b = parse_scene(ja.dump(2));
    EXPECT_EQ(to_json(b), ja) << entry.path();
    EXPECT_EQ(b.k, a.k);
    EXPECT_EQ(b.n, a.n);
    EXPECT_EQ(b.points, a.points);
    // Same geometry: the metric and the patch agree at the first point.
    const auto x = a.patch.point(a.points[0]);
    EXPECT_EQ(x, b.patch.point(b.points[0]));
    const auto ga = a.metric.jet(x, 0), gb = b.metric.jet(x, 0);
    for (int i = 0; i < a.n; ++i)
      for (int j = 0; j < a.n; ++j) EXPECT_EQ(ga(i, j).value(), gb(i, j).value());
    ++count;
  }
  EXPECT_GE(count, 14);
}

TEST(SceneFiles, SyntaxErrorsReportLines) {
  expect_scene_error("{\n  \"ambient\": {\"catalog\": \"flat\", \"n\": 4},\n  \"points\": [[0.1, 0.2]\n}\n", 4, "parse error");
  expect_scene_error("{\n  \"ambient\": {\"catalog\": \"flat\" \"n\": 4}\n}", 2, "parse error");
  expect_scene_error("", 1, "parse error");
}

TEST(SceneFiles, SemanticErrorsReportLines) {
  const std::string head = "{\n  \"ambient\": {\"catalog\": \"sphere\", \"n\": 5},\n";
  expect_scene_error(head + "  \"submanifold\": {\"catalog\": \"equatorial-sphere\", \"k\": 3},\n  \"points\": [[0, 0, 0]]\n}",
                     3, "k = 2 or 4");
  expect_scene_error(head + "  \"submanifold\": {\"catalog\": \"s2xs2\"},\n  \"points\": [\n    [0, 0, 0, 0],\n"
                            "    [0, 0, 0]\n  ]\n}",
                     6, "k = 4 coordinates");
  expect_scene_error(head + "  \"submanifold\": {\"catalog\": \"s2xs2\"},\n  \"points\": [[0, 0, 0, 0]],\n"
                            "  \"quantities\": [\"Q\", \"Zeta\"]\n}",
                     5, "unknown quantity 'Zeta'");
  expect_scene_error(head + "  \"submanifold\": {\"catalog\": \"clifford-torus\"},\n  \"points\": [[0, 0]]\n}", 3,
                     "dimension 3");
  expect_scene_error(head + "  \"submanifold\": {\"catalog\": \"s2xs2\"},\n  \"points\": [[0, 0, 0, 0]],\n"
                            "  \"colour\": \"red\"\n}",
                     5, "unknown field");
  expect_scene_error("{\n  \"ambient\": {\"catalog\": \"flat\", \"n\": 4},\n  \"submanifold\": {\"graph\": [\n"
                     "    [[1.0, [2, 0]]],\n    [[1.0, [1]]]\n  ], \"k\": 2},\n  \"points\": [[0, 0]]\n}",
                     5, "expected 2");
  expect_scene_error("{\n  \"submanifold\": {\"catalog\": \"affine\", \"k\": 2},\n  \"points\": [[0, 0]]\n}", 0,
                     "missing field 'ambient'");
}

TEST(SceneFiles, DimensionsAreValidated) {
  auto scene = [](int n, int k) {
    return "{\"ambient\": {\"catalog\": \"flat\", \"n\": " + std::to_string(n) +
           "}, \"submanifold\": {\"catalog\": \"affine\", \"k\": " + std::to_string(k) + "}, \"points\": [[" +
           std::string(k > 0 ? "0" : "") + [&] {
             std::string s;
             for (int i = 1; i < k; ++i) s += ", 0";
             return s;
           }() + "]]}";
  };
  EXPECT_NO_THROW(parse_scene(scene(8, 7)));
  EXPECT_NO_THROW(parse_scene(scene(2, 1)));
  EXPECT_THROW(parse_scene(scene(9, 4)), SceneError);
  EXPECT_THROW(parse_scene(scene(1, 0)), SceneError);
  EXPECT_THROW(parse_scene(scene(4, 4)), SceneError);
  EXPECT_THROW(parse_scene(scene(4, 0)), SceneError);
}

TEST(SceneFiles, QuantitiesMustBeDefined) {
  // I and J need n != 4.
  const std::string text =
      "{\"ambient\": {\"catalog\": \"flat\", \"n\": 4}, \"submanifold\": {\"catalog\": \"affine\", \"k\": 2},"
      " \"points\": [[0, 0]], \"quantities\": [\"I\"]}";
  try {
    parse_scene(text);
    FAIL();
  } catch (const SceneError& e) {
    EXPECT_NE(std::string(e.what()).find("not defined at k = 2, n = 4"), std::string::npos);
  }
}

TEST(Report, SerializationAndTolerances) {
  Report r;
  r.command = "t";
  r.seed = 3;
  r.add(make_check("a", "x", 1e-9, 1e-8));
  r.add(make_check("b", "y, with comma", NAN, 1e-8));
  r.add(make_check("c", "z", 2.0, 1.0, {{"v", INFINITY}}, ">"));
  EXPECT_EQ(r.passed(), 2u);
  const auto j = to_json(r);
  EXPECT_EQ(j["schema"], kReportSchema);
  EXPECT_EQ(j["summary"]["failed"], 1);
  EXPECT_EQ(j["checks"][1]["residual"], "nan");
  EXPECT_EQ(j["checks"][2]["values"]["v"], "inf");
  EXPECT_NO_THROW(ojson::parse(j.dump()));
  r.override_tolerance(1e-10);
  EXPECT_FALSE(r.checks[0].pass);
  EXPECT_TRUE(r.checks[2].pass);  // lower bounds keep their threshold
  const std::string csv = to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "name,anchor,residual,relation,tolerance,pass");
  EXPECT_NE(csv.find("\"y, with comma\""), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Commands, EvalChecksExpectations) {
  const auto r = eval_scene(load_scene("equatorial-s4-in-s5"));
  EXPECT_TRUE(r.ok());
  bool seen = false;
  for (const auto& c : r.checks)
    if (c.name == "Q[0]") {
      seen = true;
      EXPECT_NEAR(c.values.at("value"), 6.0, 1e-9);
      EXPECT_EQ(c.values.at("weight"), -4.0);
    }
  EXPECT_TRUE(seen);
  SceneFile s = load_scene("clifford-torus");
  s.expect["Q"] = 1.5;
  EXPECT_EQ(eval_scene(s).failed(), 2u);
}

TEST(Commands, EvalListsExactlyTheDefinedInvariants) {
  const SceneFile s = load_scene("random-k4-n6");
  const auto r = eval_scene(s);
  std::size_t defined = 0;
  for (const auto& info : invariant_registry()) defined += info.defined_at(4, 6);
  EXPECT_EQ(r.checks.size(), defined);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("eval --scene clifford-torus").status, 0);
  EXPECT_EQ(run("eval --scene " + (kSource / "scenes" / "flat.json").string()).status, 0);
  EXPECT_EQ(run("eval --scene clifford-torus --tol 1e-30").status, 1);
  const auto bad = temp_path("bad.json");
  std::ofstream(bad) << "{\n  \"ambient\": {\"catalog\": \"flat\", \"n\": 4},\n  \"submanifold\": 3\n}\n";
  const auto r = run("eval --scene " + bad.string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  EXPECT_EQ(run("eval --scene no-such-scene").status, 2);
  EXPECT_EQ(run("eval --scene clifford-torus --point 0.1").status, 2);
  EXPECT_EQ(run("verify no-such-suite").status, 2);
  EXPECT_EQ(run("--bogus").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("renorm --k 3").status, 2);
  EXPECT_EQ(run("renorm --k 2 --eps-min 0.2 --eps-max 0.1").status, 2);
  EXPECT_EQ(run("renorm --k 2").status, 0);
  EXPECT_EQ(run("verify renorm-area").status, 0);
  EXPECT_EQ(run("eval --scene flat", "QGEO_JET_ORDER_MAX=3").status, 2);
}

TEST(Cli, RenormNarrowRangeWarns) {
  const auto r = run("renorm --k 4 --eps-min 1e-3 --eps-max 1.00001e-3 --samples 4 --json -");
  EXPECT_EQ(r.status, 1);
  const auto j = ojson::parse(r.out);
  ASSERT_EQ(j["warnings"].size(), 1u);
  EXPECT_NE(j["warnings"][0].get<std::string>().find("ill-conditioned"), std::string::npos);
}

TEST(Cli, RenormValues) {
  const auto j = ojson::parse(run("renorm --k 4 --R 2 --json -").out);
  const auto& v = j["checks"][0]["values"];
  EXPECT_NEAR(v["area"].get<double>(), 4 * std::numbers::pi * std::numbers::pi / 3, 1e-5);
  EXPECT_TRUE(j["checks"][0]["pass"].get<bool>());
}

TEST(Cli, CsvExport) {
  const auto csv = temp_path("out.csv");
  ASSERT_EQ(run("eval --scene s2xs2-in-s5 --csv " + csv.string()).status, 0);
  const std::string text = slurp(csv);
  EXPECT_EQ(text.substr(0, text.find('\n')), "name,anchor,residual,relation,tolerance,pass");
  EXPECT_NE(text.find("Q[0],"), std::string::npos);
}

TEST(Cli, OutputIsDeterministic) {
  const auto a = run("verify ambient --seed 11 --json -").out;
  const auto b = run("verify ambient --seed 11 --json -").out;
  EXPECT_EQ(a, b);
  EXPECT_NE(a, run("verify ambient --seed 12 --json -").out);
}

TEST(Cli, GoldenCatalogEval) {
  for (const auto& name : builtin_scene_names()) {
    const auto r = run("eval --scene " + name + " --json -");
    ASSERT_EQ(r.status, 0) << name << r.err;
    const auto golden = ojson::parse(slurp(kSource / "tests" / "golden" / ("eval-" + name + ".json")));
    expect_json_near(ojson::parse(r.out), golden, name);
  }
}

TEST(Cli, GoldenVerifyAmbient) {
  const auto r = run("verify ambient --seed 7 --json -");
  ASSERT_EQ(r.status, 0) << r.err;
  expect_json_near(ojson::parse(r.out), ojson::parse(slurp(kSource / "tests" / "golden" / "verify-ambient-seed7.json")));
}

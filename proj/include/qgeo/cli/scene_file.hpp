#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgeo/ambient/catalog.hpp"
#include "qgeo/errors.hpp"
#include "qgeo/invariants/registry.hpp"
#include "qgeo/submanifold/scene.hpp"

namespace qgeo {

using ojson = nlohmann::ordered_json;

// Configuration error with a position in the scene text (line 0 when unknown).
struct SceneError : ConfigError {
  std::string message, file;
  int line = 0, column = 0;
  SceneError(const std::string& msg, int l = 0, int c = 0, const std::string& f = "")
      : ConfigError(format(msg, l, c, f)), message(msg), file(f), line(l), column(c) {}

  static std::string format(const std::string& msg, int l, int c, const std::string& f) {
    std::string o = f.empty() ? "" : f + ": ";
    if (l > 0) o += "line " + std::to_string(l) + ", column " + std::to_string(c) + ": ";
    return o + msg;
  }
};

namespace detail {

// Input iterator that publishes how many bytes the parser has consumed.
struct CountingIterator {
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;
  const char* p = nullptr;
  const char* base = nullptr;
  std::size_t* consumed = nullptr;

  reference operator*() const { return *p; }
  CountingIterator& operator++() {
    ++p;
    if (consumed) *consumed = static_cast<std::size_t>(p - base);
    return *this;
  }
  CountingIterator operator++(int) {
    auto t = *this;
    ++*this;
    return t;
  }
  bool operator==(const CountingIterator& o) const { return p == o.p; }
  bool operator!=(const CountingIterator& o) const { return p != o.p; }
};

// Records the byte offset of every key and array element by JSON pointer.
struct PositionSax : nlohmann::json_sax<nlohmann::json> {
  const std::size_t* consumed;
  std::map<std::string, std::size_t> where;
  struct Frame {
    std::string path;
    bool array = false;
    int index = -1;
  };
  std::vector<Frame> stack;
  std::string pending;

  explicit PositionSax(const std::size_t* c) : consumed(c) {}

  static std::string escape(const std::string& k) {
    std::string o;
    for (char ch : k) o += ch == '~' ? "~0" : ch == '/' ? "~1" : std::string(1, ch);
    return o;
  }
  // Path of the value about to be read.
  std::string value_path() {
    if (stack.empty()) return "";
    auto& f = stack.back();
    if (f.array) {
      ++f.index;
      const std::string p = f.path + "/" + std::to_string(f.index);
      where.emplace(p, *consumed);
      return p;
    }
    return pending;
  }
  bool scalar() {
    value_path();
    return true;
  }
  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t&) override { return scalar(); }
  bool binary(binary_t&) override { return scalar(); }
  bool start_object(std::size_t) override {
    stack.push_back({value_path(), false, -1});
    return true;
  }
  bool key(string_t& k) override {
    pending = stack.back().path + "/" + escape(k);
    where[pending] = *consumed;
    return true;
  }
  bool end_object() override {
    stack.pop_back();
    return true;
  }
  bool start_array(std::size_t) override {
    stack.push_back({value_path(), true, -1});
    return true;
  }
  bool end_array() override {
    stack.pop_back();
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }
};

inline std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

// Parsed JSON plus a map from JSON pointer to (line, column).
struct SceneDocument {
  ojson json;
  std::map<std::string, std::pair<int, int>> positions;

  [[noreturn]] void fail(const std::string& pointer, const std::string& msg) const {
    // Walk up to the nearest recorded ancestor.
    std::string p = pointer;
    while (true) {
      auto it = positions.find(p);
      if (it != positions.end()) throw SceneError(msg + " (at " + pointer + ")", it->second.first, it->second.second);
      const auto cut = p.rfind('/');
      if (cut == std::string::npos || p.empty()) break;
      p = p.substr(0, cut);
    }
    throw SceneError(msg + " (at " + (pointer.empty() ? "/" : pointer) + ")");
  }
};

inline SceneDocument parse_scene_text(const std::string& text) {
  SceneDocument d;
  try {
    d.json = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [l, c] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    const auto colon = what.find(": ");
    throw SceneError("JSON parse error: " + (colon == std::string::npos ? what : what.substr(colon + 2)), l, c);
  }
  std::size_t consumed = 0;
  detail::PositionSax sax(&consumed);
  detail::CountingIterator first{text.data(), text.data(), &consumed}, last{text.data() + text.size(), text.data(), nullptr};
  nlohmann::json::sax_parse(first, last, &sax);
  for (const auto& [p, off] : sax.where) d.positions[p] = detail::line_column(text, off > 0 ? off - 1 : 0);
  return d;
}

// A scene description: ambient metric, submanifold, evaluation points,
// requested quantities and expectations. The JSON form is canonical.
struct SceneFile {
  std::string name;
  ojson ambient, submanifold;
  std::vector<std::vector<double>> points;
  std::vector<std::string> quantities;  // empty: every invariant defined at (k, n)
  double tolerance = 1e-8;
  std::map<std::string, double> expect;  // "*" applies to every quantity
  bool ddweyl = true;

  int n = 0, k = 0;
  MetricField metric;
  Immersion patch;

  std::vector<Scene> scenes() const {
    PackOptions opt;
    opt.ddweyl = ddweyl;
    std::vector<Scene> s;
    for (const auto& y : points) s.push_back({name, metric, patch, y, opt});
    return s;
  }
};

namespace detail {

inline double get_number(const SceneDocument& d, const ojson& j, const std::string& ptr) {
  if (!j.is_number()) d.fail(ptr, "expected a number");
  return j.get<double>();
}

inline int get_int(const SceneDocument& d, const ojson& j, const std::string& ptr) {
  if (!j.is_number_integer()) d.fail(ptr, "expected an integer");
  return j.get<int>();
}

inline const ojson& require(const SceneDocument& d, const ojson& obj, const std::string& ptr, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) d.fail(ptr, std::string("missing field '") + key + "'");
  return obj.at(key);
}

// [[coef, [p_1, ..., p_m]], ...]
inline Polynomial parse_polynomial(const SceneDocument& d, const ojson& j, const std::string& ptr, int nvars) {
  if (!j.is_array()) d.fail(ptr, "polynomial must be a list of [coefficient, [powers]] terms");
  Polynomial p{nvars, {}};
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string tp = ptr + "/" + std::to_string(i);
    const auto& t = j[i];
    if (!t.is_array() || t.size() != 2 || !t[1].is_array()) d.fail(tp, "term must be [coefficient, [powers]]");
    Monomial m{get_number(d, t[0], tp + "/0"), {}};
    if (static_cast<int>(t[1].size()) != nvars)
      d.fail(tp + "/1", "term has " + std::to_string(t[1].size()) + " powers, expected " + std::to_string(nvars));
    for (std::size_t v = 0; v < t[1].size(); ++v) {
      const int e = get_int(d, t[1][v], tp + "/1/" + std::to_string(v));
      if (e < 0) d.fail(tp + "/1/" + std::to_string(v), "negative power");
      m.pow.push_back(e);
    }
    p.terms.push_back(m);
  }
  return p;
}

inline MetricField parse_ambient(const SceneDocument& d, const ojson& a, int& n) {
  const std::string ptr = "/ambient";
  if (!a.is_object()) d.fail(ptr, "ambient must be an object");
  n = get_int(d, require(d, a, ptr, "n"), ptr + "/n");
  if (n < 2 || n > 8) d.fail(ptr + "/n", "ambient dimension must satisfy 2 <= n <= 8");
  if (a.contains("catalog")) {
    const std::string c = a.at("catalog").is_string() ? a.at("catalog").get<std::string>() : "";
    if (c == "flat") return metrics::flat(n);
    if (c == "sphere") return metrics::sphere(n);
    if (c == "hyperbolic") return metrics::hyperbolic(n);
    if (c == "random-polynomial") {
      const int seed = get_int(d, require(d, a, ptr, "seed"), ptr + "/seed");
      const double amp = a.contains("amplitude") ? get_number(d, a.at("amplitude"), ptr + "/amplitude") : 0.05;
      return metrics::random_polynomial(n, static_cast<std::uint64_t>(seed), amp);
    }
    if (c == "independence-family") {
      const auto& pr = require(d, a, ptr, "params");
      if (!pr.is_array() || pr.size() != 4) d.fail(ptr + "/params", "expected [s, t, u, v]");
      if (n < 5) d.fail(ptr + "/n", "the independence family needs n >= 5");
      std::vector<double> v;
      for (std::size_t i = 0; i < 4; ++i) v.push_back(get_number(d, pr[i], ptr + "/params/" + std::to_string(i)));
      return metrics::independence_family(n, v[0], v[1], v[2], v[3]);
    }
    d.fail(ptr + "/catalog", "unknown ambient catalog entry '" + c + "'");
  }
  if (a.contains("diagonal_exponential")) {
    const auto& f = a.at("diagonal_exponential");
    if (!f.is_array() || static_cast<int>(f.size()) != n)
      d.fail(ptr + "/diagonal_exponential", "expected n polynomials f_a");
    std::vector<Polynomial> fs;
    for (int i = 0; i < n; ++i)
      fs.push_back(parse_polynomial(d, f[i], ptr + "/diagonal_exponential/" + std::to_string(i), n));
    return metrics::diagonal_exponential(n, fs);
  }
  if (a.contains("polynomial")) {
    const auto& q = a.at("polynomial");
    if (!q.is_array()) d.fail(ptr + "/polynomial", "expected a list of [a, b, polynomial] entries");
    std::vector<std::vector<Polynomial>> Q(n, std::vector<Polynomial>(n, Polynomial{n, {}}));
    for (std::size_t i = 0; i < q.size(); ++i) {
      const std::string ep = ptr + "/polynomial/" + std::to_string(i);
      if (!q[i].is_array() || q[i].size() != 3) d.fail(ep, "entry must be [a, b, polynomial]");
      const int r = get_int(d, q[i][0], ep + "/0"), s = get_int(d, q[i][1], ep + "/1");
      if (r < 0 || s < 0 || r >= n || s >= n) d.fail(ep, "index out of range");
      auto p = parse_polynomial(d, q[i][2], ep + "/2", n);
      auto& slot = Q[std::min(r, s)][std::max(r, s)];
      slot.terms.insert(slot.terms.end(), p.terms.begin(), p.terms.end());
    }
    return metrics::polynomial(n, Q);
  }
  d.fail(ptr, "ambient needs one of 'catalog', 'diagonal_exponential', 'polynomial'");
}

inline Immersion parse_submanifold(const SceneDocument& d, const ojson& s, int n, int& k) {
  const std::string ptr = "/submanifold";
  if (!s.is_object()) d.fail(ptr, "submanifold must be an object");
  auto need_n = [&](int want, const char* what) {
    if (n != want) d.fail(ptr, std::string(what) + " lives in an ambient of dimension " + std::to_string(want));
  };
  if (s.contains("catalog")) {
    const std::string c = s.at("catalog").is_string() ? s.at("catalog").get<std::string>() : "";
    auto get_k = [&] {
      k = get_int(d, require(d, s, ptr, "k"), ptr + "/k");
      if (k < 1 || k >= n) d.fail(ptr + "/k", "need 1 <= k < n");
    };
    if (c == "affine") {
      get_k();
      return patches::affine(k, n);
    }
    if (c == "equatorial-sphere") {
      get_k();
      if (k != 2 && k != 4) d.fail(ptr + "/k", "equatorial sphere needs k = 2 or 4");
      return patches::equatorial_sphere(k, n);
    }
    if (c == "random-graph") {
      get_k();
      const int seed = get_int(d, require(d, s, ptr, "seed"), ptr + "/seed");
      return patches::random_graph(k, n, static_cast<std::uint64_t>(seed));
    }
    if (c == "hemisphere") {
      get_k();
      const double R = s.contains("R") ? get_number(d, s.at("R"), ptr + "/R") : 1.0;
      if (!(R > 0)) d.fail(ptr + "/R", "radius must be positive");
      return patches::hemisphere_graph(k, n, R);
    }
    if (c == "clifford-torus") {
      need_n(3, "the Clifford torus");
      k = 2;
      return patches::clifford_torus();
    }
    if (c == "s2xs2") {
      need_n(5, "S^2 x S^2");
      k = 4;
      return patches::s2xs2();
    }
    if (c == "t4") {
      need_n(7, "the torus T^4");
      k = 4;
      return patches::t4();
    }
    if (c == "cylinder") {
      if (n < 5) d.fail(ptr, "the cylinder needs n >= 5");
      k = 4;
      return patches::cylinder(n);
    }
    d.fail(ptr + "/catalog", "unknown submanifold catalog entry '" + c + "'");
  }
  if (s.contains("graph")) {
    k = get_int(d, require(d, s, ptr, "k"), ptr + "/k");
    if (k < 1 || k >= n) d.fail(ptr + "/k", "need 1 <= k < n");
    const auto& h = s.at("graph");
    if (!h.is_array() || static_cast<int>(h.size()) != n - k) d.fail(ptr + "/graph", "expected n - k height polynomials");
    std::vector<Polynomial> u;
    for (int i = 0; i < n - k; ++i) u.push_back(parse_polynomial(d, h[i], ptr + "/graph/" + std::to_string(i), k));
    return patches::graph(k, n, u);
  }
  d.fail(ptr, "submanifold needs 'catalog' or 'graph'");
}

inline void check_quantity(const SceneDocument& d, const std::string& ptr, const std::string& name, int k, int n) {
  for (const auto& info : invariant_registry())
    if (info.name == name) {
      if (!info.defined_at(k, n))
        d.fail(ptr, "quantity '" + name + "' is not defined at k = " + std::to_string(k) + ", n = " + std::to_string(n));
      return;
    }
  d.fail(ptr, "unknown quantity '" + name + "'");
}

}  // namespace detail

inline SceneFile scene_from_document(const SceneDocument& d) {
  using namespace detail;
  const auto& j = d.json;
  if (!j.is_object()) d.fail("", "scene must be a JSON object");
  static const std::vector<std::string> allowed{"name",      "ambient",   "submanifold", "points",
                                                "quantities", "tolerance", "expect",      "ddweyl"};
  for (const auto& [key, v] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) d.fail("/" + key, "unknown field '" + key + "'");
  SceneFile s;
  s.name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "scene";
  s.ambient = require(d, j, "", "ambient");
  s.submanifold = require(d, j, "", "submanifold");
  s.metric = parse_ambient(d, s.ambient, s.n);
  s.patch = parse_submanifold(d, s.submanifold, s.n, s.k);
  const auto& pts = require(d, j, "", "points");
  if (!pts.is_array() || pts.empty()) d.fail("/points", "expected a non-empty list of points");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string pp = "/points/" + std::to_string(i);
    if (!pts[i].is_array() || static_cast<int>(pts[i].size()) != s.k)
      d.fail(pp, "point must have k = " + std::to_string(s.k) + " coordinates");
    std::vector<double> y;
    for (std::size_t a = 0; a < pts[i].size(); ++a) y.push_back(get_number(d, pts[i][a], pp + "/" + std::to_string(a)));
    s.points.push_back(y);
  }
  if (j.contains("quantities")) {
    const auto& q = j.at("quantities");
    if (!q.is_array()) d.fail("/quantities", "expected a list of names");
    for (std::size_t i = 0; i < q.size(); ++i) {
      const std::string qp = "/quantities/" + std::to_string(i);
      if (!q[i].is_string()) d.fail(qp, "expected a name");
      const auto name = q[i].get<std::string>();
      check_quantity(d, qp, name, s.k, s.n);
      s.quantities.push_back(name);
    }
  }
  if (j.contains("tolerance")) {
    s.tolerance = get_number(d, j.at("tolerance"), "/tolerance");
    if (!(s.tolerance > 0)) d.fail("/tolerance", "tolerance must be positive");
  }
  if (j.contains("expect")) {
    const auto& e = j.at("expect");
    if (!e.is_object()) d.fail("/expect", "expected an object of name: value");
    for (const auto& [key, v] : e.items()) {
      if (key != "*") check_quantity(d, "/expect/" + key, key, s.k, s.n);
      s.expect[key] = get_number(d, v, "/expect/" + key);
    }
  }
  if (j.contains("ddweyl")) {
    if (!j.at("ddweyl").is_boolean()) d.fail("/ddweyl", "expected true or false");
    s.ddweyl = j.at("ddweyl").get<bool>();
  }
  return s;
}

inline ojson to_json(const SceneFile& s) {
  ojson j;
  j["name"] = s.name;
  j["ambient"] = s.ambient;
  j["submanifold"] = s.submanifold;
  j["points"] = s.points;
  if (!s.quantities.empty()) j["quantities"] = s.quantities;
  j["tolerance"] = s.tolerance;
  if (!s.expect.empty()) {
    ojson e = ojson::object();
    for (const auto& [k, v] : s.expect) e[k] = v;
    j["expect"] = e;
  }
  j["ddweyl"] = s.ddweyl;
  return j;
}

inline SceneFile parse_scene(const std::string& text) { return scene_from_document(parse_scene_text(text)); }

inline SceneFile load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("cannot open scene file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scene(ss.str());
  } catch (const SceneError& e) {
    throw SceneError(e.message, e.line, e.column, path);
  }
}

}  // namespace qgeo

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qgeo/invariants/invariants.hpp"

namespace qgeo {

// A named scalar with its weight and the (k, n) range where it is defined.
struct InvariantInfo {
  std::string name;
  std::string description;
  int weight = -4;
  bool critical = false;   // weight is -k instead of `weight`
  bool conformal = false;  // pointwise conformal invariant
  std::function<bool(int, int)> valid;
  std::function<double(const InvariantEvaluator<double>&)> eval;
  std::function<Dual(const InvariantEvaluator<Dual>&)> eval_dual;

  int weight_for(int k) const { return critical ? -k : weight; }
  bool defined_at(int k, int n) const { return k >= 1 && k < n && n >= 3 && valid(k, n); }
};

namespace detail {

template <class F>
InvariantInfo make_info(std::string name, std::string desc, int weight, bool critical, bool conformal,
                        std::function<bool(int, int)> valid, F f) {
  return {std::move(name), std::move(desc), weight, critical, conformal, std::move(valid), f, f};
}

}  // namespace detail

inline const std::vector<InvariantInfo>& invariant_registry() {
  using detail::make_info;
  static const std::vector<InvariantInfo> reg = [] {
    auto any = [](int, int) { return true; };
    auto no_n4 = [](int, int n) { return n != 4; };
    auto k24 = [](int k, int) { return k == 2 || k == 4; };
    std::vector<InvariantInfo> r;
    r.push_back(make_info("K1", "divergence of Lo contracted with W, plus (k-4) Lo.C", -4, false, true, any,
                          [](const auto& e) { return e.K1(); }));
    r.push_back(make_info("K2", "divergence of Lo contracted with the W trace, plus (k-4) D.W", -4, false, true, any,
                          [](const auto& e) { return e.K2(); }));
    r.push_back(make_info("I", "weight -4 invariant built on the Fialkow trace", -4, false, true, no_n4,
                          [](const auto& e) { return e.I(); }));
    r.push_back(make_info("J", "weight -4 invariant built on the Weyl trace", -4, false, true, no_n4,
                          [](const auto& e) { return e.Jinv(); }));
    r.push_back(make_info("2I+J", "pole-free combination 2I + J", -4, false, true, any,
                          [](const auto& e) { return e.two_I_plus_J(); }));
    r.push_back(make_info("W_Q", "conformally invariant part of Q", 0, true, true, k24,
                          [](const auto& e) { return e.W_Q(); }));
    r.push_back(make_info("Wm", "comparison invariant Wm", -4, false, true,
                          [](int k, int) { return k >= 3 && k != 6; }, [](const auto& e) { return e.Wm(); }));
    r.push_back(make_info("Juhl1", "first Juhl comparison invariant", -4, false, true,
                          [](int k, int) { return k >= 4 && k != 6; }, [](const auto& e) { return e.Juhl1(); }));
    r.push_back(make_info("Juhl2", "second Juhl comparison invariant", -4, false, true,
                          [](int k, int) { return k >= 4 && k != 6; }, [](const auto& e) { return e.Juhl2(); }));
    r.push_back(make_info("N1", "first comparison invariant N", -4, false, true, [](int k, int) { return k >= 2; },
                          [](const auto& e) { return e.N1(); }));
    r.push_back(make_info("N2", "second comparison invariant N", -4, false, true,
                          [](int k, int) { return k >= 2 && k != 3 && k != 6; }, [](const auto& e) { return e.N2(); }));
    r.push_back(make_info("G", "trace of the Fialkow tensor", -2, false, true, [](int k, int) { return k >= 2; },
                          [](const auto& e) { return e.Gv(); }));
    r.push_back(make_info("Lo_sq", "squared length of the trace-free second fundamental form", -2, false, true, any,
                          [](const auto& e) { return e.tensors().Lo_sq.value(); }));
    r.push_back(make_info("Q", "extrinsic Q-curvature", 0, true, false, k24, [](const auto& e) { return e.Q(); }));
    r.push_back(make_info("Pf", "Pfaffian of the induced metric", 0, true, false, k24,
                          [](const auto& e) { return e.Pf(); }));
    r.push_back(make_info("Q4", "fourth-order extrinsic Q-curvature", -4, false, false,
                          [](int k, int n) { return k >= 3 && n != 4; }, [](const auto& e) { return e.Q4(); }));
    r.push_back(make_info("Qbar4", "fourth-order Q-curvature of the induced metric", -4, false, false,
                          [](int k, int) { return k >= 2; }, [](const auto& e) { return e.Qbar4(); }));
    return r;
  }();
  return reg;
}

inline const InvariantInfo& find_invariant(const std::string& name) {
  for (const auto& i : invariant_registry())
    if (i.name == name) return i;
  throw UsageError("unknown invariant '" + name + "'");
}

}  // namespace qgeo

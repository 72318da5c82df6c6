#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <string>
#include <type_traits>
#include <vector>

#include "qgeo/errors.hpp"
#include "qgeo/tensor/jet.hpp"

namespace qgeo {

enum class Kind { ambient, tangent, normal };
enum class Var { down, up };

struct Slot {
  Kind kind = Kind::ambient;
  Var var = Var::down;
  int dim = 0;
  bool operator==(const Slot&) const = default;
};

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::ambient: return "ambient";
    case Kind::tangent: return "tangent";
    case Kind::normal: return "normal";
  }
  return "?";
}

namespace detail {
template <class V> inline void fma(V& acc, const V& a, const V& b) { acc += a * b; }
template <class S> inline void fma(Jet<S>& acc, const Jet<S>& a, const Jet<S>& b) { acc.add_product(a, b); }
}  // namespace detail

// Dense multi-index array with labeled slots. V is a scalar (double, Dual)
// or a jet of scalars.
template <class V>
class LabeledTensor {
 public:
  LabeledTensor() : data_(1) {}
  explicit LabeledTensor(std::vector<Slot> slots) : slots_(std::move(slots)) {
    std::size_t n = 1;
    for (const auto& s : slots_) {
      if (s.dim < 0) throw UsageError("tensor: negative slot dimension");
      n *= static_cast<std::size_t>(s.dim);
    }
    data_.assign(n, V());
    strides_.assign(slots_.size(), 1);
    for (int i = static_cast<int>(slots_.size()) - 2; i >= 0; --i)
      strides_[i] = strides_[i + 1] * slots_[i + 1].dim;
  }

  int rank() const { return static_cast<int>(slots_.size()); }
  const std::vector<Slot>& slots() const { return slots_; }
  const Slot& slot(int i) const { return slots_[i]; }
  int dim(int i) const { return slots_[i].dim; }
  std::size_t size() const { return data_.size(); }
  const std::vector<std::size_t>& strides() const { return strides_; }
  std::vector<V>& data() { return data_; }
  const std::vector<V>& data() const { return data_; }
  V& operator[](std::size_t i) { return data_[i]; }
  const V& operator[](std::size_t i) const { return data_[i]; }

  template <class... I>
  V& operator()(I... idx) { return data_[offset({static_cast<int>(idx)...})]; }
  template <class... I>
  const V& operator()(I... idx) const { return data_[offset({static_cast<int>(idx)...})]; }
  V& at(const std::vector<int>& idx) { return data_[offset(idx)]; }
  const V& at(const std::vector<int>& idx) const { return data_[offset(idx)]; }

  std::size_t offset(const std::vector<int>& idx) const {
    std::size_t o = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) o += strides_[i] * idx[i];
    return o;
  }
  std::vector<int> unravel(std::size_t o) const {
    std::vector<int> idx(slots_.size());
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      idx[i] = static_cast<int>(o / strides_[i]);
      o %= strides_[i];
    }
    return idx;
  }

  LabeledTensor& operator+=(const LabeledTensor& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  LabeledTensor& operator-=(const LabeledTensor& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  LabeledTensor& operator*=(double s) {
    for (auto& x : data_) x = x * s;
    return *this;
  }

  // Same data with relabeled slots (dims must agree).
  LabeledTensor relabeled(std::vector<Slot> slots) const {
    LabeledTensor r(std::move(slots));
    if (r.size() != size()) throw UsageError("tensor: relabel changes extent");
    r.data_ = data_;
    return r;
  }

 private:
  void check_same(const LabeledTensor& o) const {
    if (o.slots_.size() != slots_.size()) throw UsageError("tensor: rank mismatch in sum");
    for (std::size_t i = 0; i < slots_.size(); ++i)
      if (o.slots_[i].dim != slots_[i].dim || o.slots_[i].kind != slots_[i].kind)
        throw UsageError("tensor: slot mismatch in sum");
  }

  std::vector<Slot> slots_;
  std::vector<std::size_t> strides_;
  std::vector<V> data_;
};

template <class V> LabeledTensor<V> operator+(LabeledTensor<V> a, const LabeledTensor<V>& b) { return a += b; }
template <class V> LabeledTensor<V> operator-(LabeledTensor<V> a, const LabeledTensor<V>& b) { return a -= b; }
template <class V> LabeledTensor<V> operator*(LabeledTensor<V> a, double s) { return a *= s; }
template <class V> LabeledTensor<V> operator*(double s, LabeledTensor<V> a) { return a *= s; }

template <class V> LabeledTensor<V> scalar_tensor(const V& v) {
  LabeledTensor<V> t;
  t[0] = v;
  return t;
}

// Elementwise map, possibly changing the element type.
template <class V, class F>
auto map_elements(const LabeledTensor<V>& t, F&& f) {
  using R = std::decay_t<decltype(f(t[0]))>;
  LabeledTensor<R> r(t.slots());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = f(t[i]);
  return r;
}

template <class V> LabeledTensor<V> scaled(LabeledTensor<V> t, const V& s) {
  for (auto& x : t.data()) x = x * s;
  return t;
}

// Element-wise product by a scalar-valued element (e.g. a jet times a tensor of jets).
template <class V> LabeledTensor<V> times(const LabeledTensor<V>& t, const V& s) {
  LabeledTensor<V> r(t.slots());
  for (std::size_t i = 0; i < t.size(); ++i) detail::fma(r[i], t[i], s);
  return r;
}

namespace detail {

struct EinsumPlan {
  std::vector<char> letters;         // all distinct letters
  std::vector<int> dims;             // per letter
  std::vector<std::vector<int>> in;  // per operand: letter id per slot
  std::vector<int> out;              // letter id per output slot
};

inline EinsumPlan plan_einsum(const std::string& spec, const std::vector<const std::vector<Slot>*>& ops,
                              std::vector<Slot>& out_slots) {
  EinsumPlan p;
  const auto arrow = spec.find("->");
  if (arrow == std::string::npos) throw UsageError("einsum: missing '->' in " + spec);
  std::vector<std::string> terms;
  std::string cur;
  for (char c : spec.substr(0, arrow)) {
    if (c == ',') {
      terms.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  terms.push_back(cur);
  if (terms.size() != ops.size()) throw UsageError("einsum: operand count mismatch in " + spec);
  std::vector<Slot> letter_slot;
  auto letter_id = [&](char c, const Slot* s) {
    for (std::size_t i = 0; i < p.letters.size(); ++i)
      if (p.letters[i] == c) {
        if (s) {
          if (s->dim != p.dims[i]) throw UsageError(std::string("einsum: dimension clash on '") + c + "' in " + spec);
          if (s->kind != letter_slot[i].kind)
            throw UsageError(std::string("einsum: kind clash on '") + c + "' in " + spec);
        }
        return static_cast<int>(i);
      }
    if (!s) throw UsageError(std::string("einsum: output letter '") + c + "' not in inputs: " + spec);
    p.letters.push_back(c);
    p.dims.push_back(s->dim);
    letter_slot.push_back(*s);
    return static_cast<int>(p.letters.size() - 1);
  };
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& sl = *ops[t];
    if (terms[t].size() != sl.size()) throw UsageError("einsum: rank mismatch in " + spec);
    std::vector<int> ids;
    for (std::size_t i = 0; i < sl.size(); ++i) ids.push_back(letter_id(terms[t][i], &sl[i]));
    p.in.push_back(ids);
  }
  out_slots.clear();
  for (char c : spec.substr(arrow + 2)) {
    if (c == ' ') continue;
    const int id = letter_id(c, nullptr);
    p.out.push_back(id);
    out_slots.push_back(letter_slot[id]);
  }
  return p;
}

// Strides of each letter into a tensor (summing repeated letters = diagonal).
template <class V>
std::vector<std::size_t> letter_strides(const EinsumPlan& p, const std::vector<int>& ids, const LabeledTensor<V>& t) {
  std::vector<std::size_t> s(p.letters.size(), 0);
  for (std::size_t i = 0; i < ids.size(); ++i) s[ids[i]] += t.strides()[i];
  return s;
}

}  // namespace detail

// Index-notation contraction in the ON-frame sense: repeated letters are summed
// with no metric factors. Kinds must agree on every repeated letter.
template <class V>
LabeledTensor<V> einsum(const std::string& spec, const LabeledTensor<V>& a, const LabeledTensor<V>& b) {
  std::vector<Slot> out_slots;
  const auto p = detail::plan_einsum(spec, {&a.slots(), &b.slots()}, out_slots);
  LabeledTensor<V> r(out_slots);
  const auto sa = detail::letter_strides(p, p.in[0], a);
  const auto sb = detail::letter_strides(p, p.in[1], b);
  const auto so = detail::letter_strides(p, p.out, r);
  const int nl = static_cast<int>(p.letters.size());
  std::vector<int> idx(nl, 0);
  for (int d : p.dims)
    if (d == 0) return r;
  std::size_t oa = 0, ob = 0, oo = 0;
  while (true) {
    detail::fma(r[oo], a[oa], b[ob]);
    int l = nl - 1;
    for (; l >= 0; --l) {
      if (++idx[l] < p.dims[l]) {
        oa += sa[l];
        ob += sb[l];
        oo += so[l];
        break;
      }
      oa -= sa[l] * (p.dims[l] - 1);
      ob -= sb[l] * (p.dims[l] - 1);
      oo -= so[l] * (p.dims[l] - 1);
      idx[l] = 0;
    }
    if (l < 0) break;
  }
  return r;
}

template <class V>
LabeledTensor<V> einsum(const std::string& spec, const LabeledTensor<V>& a) {
  std::vector<Slot> out_slots;
  const auto p = detail::plan_einsum(spec, {&a.slots()}, out_slots);
  LabeledTensor<V> r(out_slots);
  const auto sa = detail::letter_strides(p, p.in[0], a);
  const auto so = detail::letter_strides(p, p.out, r);
  const int nl = static_cast<int>(p.letters.size());
  std::vector<int> idx(nl, 0);
  for (int d : p.dims)
    if (d == 0) return r;
  std::size_t oa = 0, oo = 0;
  while (true) {
    r[oo] += a[oa];
    int l = nl - 1;
    for (; l >= 0; --l) {
      if (++idx[l] < p.dims[l]) {
        oa += sa[l];
        oo += so[l];
        break;
      }
      oa -= sa[l] * (p.dims[l] - 1);
      oo -= so[l] * (p.dims[l] - 1);
      idx[l] = 0;
    }
    if (l < 0) break;
  }
  return r;
}

template <class V>
LabeledTensor<V> einsum(const std::string& spec, const LabeledTensor<V>& a, const LabeledTensor<V>& b,
                        const LabeledTensor<V>& c) {
  // Contract a with b first on letters shared with neither c nor the output.
  const auto arrow = spec.find("->");
  const auto c1 = spec.find(',');
  const auto c2 = spec.find(',', c1 + 1);
  const std::string ta = spec.substr(0, c1), tb = spec.substr(c1 + 1, c2 - c1 - 1),
                    tc = spec.substr(c2 + 1, arrow - c2 - 1), to = spec.substr(arrow + 2);
  std::string mid;
  for (char ch : ta + tb)
    if ((tc.find(ch) != std::string::npos || to.find(ch) != std::string::npos) && mid.find(ch) == std::string::npos)
      mid += ch;
  return einsum(mid + "," + tc + "->" + to, einsum(ta + "," + tb + "->" + mid, a, b), c);
}

// Generalized trace over slot pairs with explicit inverse-metric blocks:
// each pair (i, j) is contracted through ginv, which must be a 2-slot tensor of
// the same kind. Pass an empty ginv for orthonormal frames.
template <class V>
LabeledTensor<V> contract(const LabeledTensor<V>& t, const std::vector<std::pair<int, int>>& pairs,
                          const std::vector<const LabeledTensor<V>*>& ginv = {}) {
  LabeledTensor<V> cur = t;
  std::vector<int> alive(t.rank());
  std::iota(alive.begin(), alive.end(), 0);
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    auto [i, j] = pairs[q];
    auto pi = std::find(alive.begin(), alive.end(), i), pj = std::find(alive.begin(), alive.end(), j);
    if (pi == alive.end() || pj == alive.end() || i == j) throw UsageError("contract: invalid slot pair");
    const int si = static_cast<int>(pi - alive.begin()), sj = static_cast<int>(pj - alive.begin());
    if (cur.slot(si).kind != cur.slot(sj).kind) throw UsageError("contract: kind mismatch");
    if (cur.slot(si).dim != cur.slot(sj).dim) throw UsageError("contract: dimension mismatch");
    const LabeledTensor<V>* g = q < ginv.size() ? ginv[q] : nullptr;
    std::string in(cur.rank(), ' '), out;
    for (int s = 0; s < cur.rank(); ++s) in[s] = static_cast<char>('a' + s);
    for (int s = 0; s < cur.rank(); ++s)
      if (s != si && s != sj) out += in[s];
    if (g) {
      if (g->rank() != 2 || g->slot(0).kind != cur.slot(si).kind) throw UsageError("contract: metric block kind mismatch");
      if (cur.slot(si).var == cur.slot(sj).var) {
        // Same variance: the metric block bridges them.
        std::string gs = {in[si], in[sj]};
        cur = einsum(in + "," + gs + "->" + out, cur, *g);
      } else {
        in[sj] = in[si];
        cur = einsum(in + "->" + out, cur);
      }
    } else {
      if (cur.slot(si).var == cur.slot(sj).var)
        throw UsageError("contract: equal variances need a metric block");
      in[sj] = in[si];
      cur = einsum(in + "->" + out, cur);
    }
    alive.erase(alive.begin() + std::max(si, sj));
    alive.erase(alive.begin() + std::min(si, sj));
  }
  return cur;
}

// Raise or lower slot s with a 2-slot metric block (g_ab to lower, g^ab to raise).
template <class V>
LabeledTensor<V> move_index(const LabeledTensor<V>& t, int s, const LabeledTensor<V>& metric, Var target) {
  if (metric.rank() != 2 || metric.slot(0).kind != t.slot(s).kind || metric.dim(0) != t.dim(s))
    throw UsageError("move_index: metric block mismatch");
  std::string in(t.rank(), ' ');
  for (int i = 0; i < t.rank(); ++i) in[i] = static_cast<char>('a' + i);
  std::string out = in;
  out[s] = 'z';
  auto r = einsum(in + "," + std::string{in[s], 'z'} + "->" + out, t, metric);
  auto sl = r.slots();
  sl[s].var = target;
  return r.relabeled(sl);
}

// Permute slots: result slot i is input slot perm[i].
template <class V>
LabeledTensor<V> permute(const LabeledTensor<V>& t, const std::vector<int>& perm) {
  std::string in(t.rank(), ' '), out;
  for (int i = 0; i < t.rank(); ++i) in[i] = static_cast<char>('a' + i);
  for (int p : perm) out += in[p];
  return einsum(in + "->" + out, t);
}

enum class Symmetry { sym, antisym };

// Average over (signed) permutations of the chosen slots: T_{(abc)} or T_{[abc]}.
template <class V>
LabeledTensor<V> symmetrize(const LabeledTensor<V>& t, std::vector<int> slots, Symmetry kind) {
  for (int s : slots)
    if (t.slot(s).kind != t.slot(slots[0]).kind || t.slot(s).var != t.slot(slots[0]).var ||
        t.dim(s) != t.dim(slots[0]))
      throw UsageError("symmetrize: slots differ in kind, variance or dimension");
  std::vector<int> p(slots.size());
  std::iota(p.begin(), p.end(), 0);
  LabeledTensor<V> r(t.slots());
  int count = 0;
  do {
    int inv = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j)
        if (p[i] > p[j]) ++inv;
    std::vector<int> perm(t.rank());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = 0; i < slots.size(); ++i) perm[slots[i]] = slots[p[i]];
    auto term = permute(t, perm);
    if (kind == Symmetry::antisym && inv % 2) r -= term;
    else r += term;
    ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  r *= 1.0 / count;
  return r;
}

// Sub-block of an ambient slot in an adapted frame: tangent = first k indices,
// normal = the rest.
template <class V>
LabeledTensor<V> block(const LabeledTensor<V>& t, const std::vector<Kind>& kinds, int k) {
  if (static_cast<int>(kinds.size()) != t.rank()) throw UsageError("block: kind list length");
  std::vector<Slot> sl = t.slots();
  std::vector<int> off(t.rank(), 0);
  for (int i = 0; i < t.rank(); ++i) {
    if (kinds[i] == t.slot(i).kind) continue;
    if (t.slot(i).kind != Kind::ambient) throw UsageError("block: only ambient slots can be split");
    sl[i].kind = kinds[i];
    if (kinds[i] == Kind::tangent) sl[i].dim = k;
    else {
      sl[i].dim = t.dim(i) - k;
      off[i] = k;
    }
  }
  LabeledTensor<V> r(sl);
  for (std::size_t o = 0; o < r.size(); ++o) {
    auto idx = r.unravel(o);
    for (int i = 0; i < t.rank(); ++i) idx[i] += off[i];
    r[o] = t.at(idx);
  }
  return r;
}

inline double abs_value(double x) { return std::abs(x); }
inline double abs_value(const Dual& x) { return std::abs(x.v); }

template <class V>
double max_abs(const LabeledTensor<V>& t) {
  double m = 0.0;
  for (const auto& x : t.data()) m = std::max(m, abs_value(x));
  return m;
}

// Values of a tensor of jets.
template <class S>
LabeledTensor<S> values(const LabeledTensor<Jet<S>>& t) {
  return map_elements(t, [](const Jet<S>& j) { return j.value(); });
}

}  // namespace qgeo

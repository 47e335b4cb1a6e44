#pragma once

// Second cohomology with Z/p^e coefficients from normalised bar 2-cocycles, and the reduced Schur
// multiplier obtained from it.
//
// A normalised cocycle is determined by its values f(u, s) on generators s: the identity
//   f(x, y s) = f(x, y) + f(x y, s) - f(y, s)
// rebuilds f(x, z) along a spanning tree of the Cayley graph. Coboundaries of functions that are
// additive along the tree let us set f(u, s) = 0 on tree edges, so the unknowns are the non-tree
// edges. The identity must then hold on the remaining (x, y, s) rows; associativity on triples
// whose last entry is a generator already gives associativity everywhere, so those rows suffice.
// They are added lazily: a row enters the system only when a current kernel generator breaks it.

#include <span>
#include <vector>

#include "nacl/group.hpp"
#include "nacl/modular.hpp"

namespace nacl {

inline constexpr std::size_t kDefaultCocycleCap = 200;

/// Normalised bar cochains of low degree with values in Z/m, stored densely (f(x, y) at x*n + y).
struct BarComplex {
  const FiniteGroup* group;
  std::uint64_t modulus;

  std::size_t n() const { return group->order(); }

  std::vector<std::uint64_t> d1(const std::vector<std::uint64_t>& h) const {
    const auto& g = *group;
    std::vector<std::uint64_t> f(n() * n());
    for (Elem x = 0; x < n(); ++x)
      for (Elem y = 0; y < n(); ++y) f[x * n() + y] = (h[y] + modulus - h[g.mul(x, y)] + h[x]) % modulus;
    return f;
  }

  /// (d2 f)(x, y, z) = f(y, z) - f(xy, z) + f(x, yz) - f(x, y).
  std::uint64_t d2(const std::vector<std::uint64_t>& f, Elem x, Elem y, Elem z) const {
    const auto& g = *group;
    const std::size_t m = n();
    std::uint64_t v = f[y * m + z] + f[x * m + g.mul(y, z)] + 2 * modulus - f[g.mul(x, y) * m + z] - f[x * m + y];
    return v % modulus;
  }

  bool is_cocycle(const std::vector<std::uint64_t>& f) const {
    for (Elem x = 0; x < n(); ++x)
      for (Elem y = 0; y < n(); ++y)
        for (Elem z = 0; z < n(); ++z)
          if (d2(f, x, y, z)) return false;
    return true;
  }

  bool is_normalized(const std::vector<std::uint64_t>& f) const {
    for (Elem x = 0; x < n(); ++x)
      if (f[x] || f[x * n()]) return false;
    return true;
  }
};

/// f(x, y) - f(y, x) for commuting x, y: the commutator of lifts in the extension defined by f.
inline std::uint64_t commutator_pairing(const FiniteGroup& g, const std::vector<std::uint64_t>& f, std::uint64_t modulus,
                                        Elem x, Elem y) {
  if (g.mul(x, y) != g.mul(y, x)) fail(Errc::NotCommuting, "pairing needs commuting elements");
  const std::size_t n = g.order();
  return (f[x * n + y] + modulus - f[y * n + x]) % modulus;
}

struct CohomologyClasses {
  AbelianInvariants invariants;
  std::vector<std::vector<std::uint64_t>> representatives;  // one normalised cocycle per factor
  std::size_t unknowns = 0;
  std::size_t rows_used = 0;
};

namespace detail {

class TreeGaugedCocycles {
 public:
  TreeGaugedCocycles(const FiniteGroup& g, const LocalRing& r) : g_(g), r_(r), n_(g.order()) {
    gens_ = minimal_generating_set(g);
    const std::size_t k = gens_.size();
    var_.assign(n_ * k, -1);
    tree_parent_.assign(n_, -1);
    tree_gen_.assign(n_, -1);
    order_.push_back(0);
    std::vector<bool> seen(n_, false);
    seen[0] = true;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      Elem y = order_[i];
      for (std::size_t s = 0; s < k; ++s) {
        Elem z = g.mul(y, gens_[s]);
        if (!seen[z]) {
          seen[z] = true;
          tree_parent_[z] = static_cast<std::int64_t>(y);
          tree_gen_[z] = static_cast<std::int64_t>(s);
          order_.push_back(z);
        } else {
          var_[y * k + s] = static_cast<std::int64_t>(vars_++);
        }
      }
    }
    ensure(order_.size() == n_, "generating set does not generate");
  }

  std::size_t vars() const { return vars_; }

  /// f(x, z) for all x, z as vectors over the unknowns; n^2 * vars entries.
  void build_table() {
    if (!table_.empty()) return;
    const std::size_t k = gens_.size(), v = vars_;
    table_.assign(n_ * n_ * v, 0);
    for (std::size_t i = 1; i < n_; ++i) {
      Elem z = order_[i];
      auto y = static_cast<Elem>(tree_parent_[z]);
      auto s = static_cast<std::size_t>(tree_gen_[z]);
      for (Elem x = 0; x < n_; ++x) {
        std::uint32_t* dst = cell(x, z);
        const std::uint32_t* src = cell(x, y);
        std::copy(src, src + v, dst);
        auto a = var_[g_.mul(x, y) * k + s];
        auto b = var_[y * k + s];
        if (a >= 0) dst[a] = static_cast<std::uint32_t>((dst[a] + 1) % r_.modulus());
        if (b >= 0) dst[b] = static_cast<std::uint32_t>((dst[b] + r_.modulus() - 1) % r_.modulus());
      }
    }
  }

  /// Scalar table f(x, z) for an assignment of the unknowns.
  std::vector<std::uint64_t> evaluate(const std::vector<std::uint64_t>& values) const {
    const std::size_t k = gens_.size();
    const std::uint64_t q = r_.modulus();
    std::vector<std::uint64_t> f(n_ * n_, 0);
    auto edge = [&](Elem u, std::size_t s) -> std::uint64_t {
      auto id = var_[u * k + s];
      return id < 0 ? 0 : values[static_cast<std::size_t>(id)];
    };
    for (std::size_t i = 1; i < n_; ++i) {
      Elem z = order_[i];
      auto y = static_cast<Elem>(tree_parent_[z]);
      auto s = static_cast<std::size_t>(tree_gen_[z]);
      for (Elem x = 0; x < n_; ++x) f[x * n_ + z] = (f[x * n_ + y] + edge(g_.mul(x, y), s) + q - edge(y, s)) % q;
    }
    return f;
  }

  /// First few (x, y, s) rows violated by `values`, as rows over the unknowns.
  std::vector<std::vector<std::uint64_t>> violated_rows(const std::vector<std::uint64_t>& values, std::size_t limit) {
    const std::size_t k = gens_.size();
    const std::uint64_t q = r_.modulus();
    auto f = evaluate(values);
    auto edge = [&](Elem u, std::size_t s) -> std::uint64_t {
      auto id = var_[u * k + s];
      return id < 0 ? 0 : values[static_cast<std::size_t>(id)];
    };
    std::vector<std::vector<std::uint64_t>> out;
    for (Elem y = 0; y < n_ && out.size() < limit; ++y)
      for (std::size_t s = 0; s < k && out.size() < limit; ++s) {
        if (var_[y * k + s] < 0) continue;
        Elem ys = g_.mul(y, gens_[s]);
        for (Elem x = 0; x < n_ && out.size() < limit; ++x) {
          std::uint64_t lhs = f[x * n_ + ys], rhs = (f[x * n_ + y] + edge(g_.mul(x, y), s) + q - edge(y, s)) % q;
          if (lhs != rhs) out.push_back(row(x, y, s));
        }
      }
    return out;
  }

  std::vector<std::uint64_t> row(Elem x, Elem y, std::size_t s) {
    build_table();
    const std::size_t k = gens_.size();
    const std::uint64_t q = r_.modulus();
    std::vector<std::uint64_t> out(vars_);
    const auto* lhs = cell(x, g_.mul(y, gens_[s]));
    const auto* rhs = cell(x, y);
    for (std::size_t i = 0; i < vars_; ++i) out[i] = (lhs[i] + q - rhs[i]) % q;
    auto a = var_[g_.mul(x, y) * k + s];
    auto b = var_[y * k + s];
    if (a >= 0) out[a] = (out[a] + q - 1) % q;
    if (b >= 0) out[b] = (out[b] + 1) % q;
    return out;
  }

  std::vector<std::uint64_t> pairing_row(Elem x, Elem y) {
    build_table();
    const std::uint64_t q = r_.modulus();
    std::vector<std::uint64_t> out(vars_);
    const auto* a = cell(x, y);
    const auto* b = cell(y, x);
    for (std::size_t i = 0; i < vars_; ++i) out[i] = (a[i] + q - b[i]) % q;
    return out;
  }

  /// Coboundaries of functions additive along the tree, one per generator.
  std::vector<std::vector<std::uint64_t>> tree_coboundaries() const {
    const std::size_t k = gens_.size();
    const std::uint64_t q = r_.modulus();
    std::vector<std::vector<std::uint64_t>> out;
    for (std::size_t t = 0; t < k; ++t) {
      std::vector<std::uint64_t> h(n_, 0);
      for (std::size_t i = 1; i < n_; ++i) {
        Elem z = order_[i];
        h[z] = (h[static_cast<Elem>(tree_parent_[z])] + (static_cast<std::size_t>(tree_gen_[z]) == t ? 1 : 0)) % q;
      }
      std::vector<std::uint64_t> v(vars_, 0);
      for (Elem u = 0; u < n_; ++u)
        for (std::size_t s = 0; s < k; ++s) {
          auto id = var_[u * k + s];
          if (id >= 0) v[id] = (h[u] + h[gens_[s]] + q - h[g_.mul(u, gens_[s])]) % q;
        }
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  std::uint32_t* cell(Elem x, Elem z) { return table_.data() + (static_cast<std::size_t>(x) * n_ + z) * vars_; }

  const FiniteGroup& g_;
  LocalRing r_;
  std::size_t n_;
  std::vector<Elem> gens_;
  std::vector<std::int64_t> var_;  // edge (u, s) -> unknown index, -1 on tree edges
  std::vector<std::int64_t> tree_parent_, tree_gen_;
  std::vector<Elem> order_;
  std::size_t vars_ = 0;
  std::vector<std::uint32_t> table_;
};

/// Kernel of the cocycle rows plus `extra` rows, grown until every generator is a cocycle.
inline KernelBasis cocycle_kernel(TreeGaugedCocycles& tg, const LocalRing& r, const std::vector<std::vector<std::uint64_t>>& extra,
                                  std::size_t& rows_used) {
  const std::size_t v = tg.vars();
  ModMatrix rows(0, v);
  for (const auto& e : extra) rows.append_row(e);
  rows_used = extra.size();
  while (true) {
    if (rows.rows > v) rows = compress_rows(rows, r);
    auto k = kernel_of(rows, r);
    bool clean = true;
    for (const auto& gen : k.generators) {
      auto bad = tg.violated_rows(gen, 4);
      for (auto& b : bad) {
        rows.append_row(b);
        ++rows_used;
      }
      clean = clean && bad.empty();
    }
    if (clean) return k;
  }
}

inline CohomologyClasses cohomology(const FiniteGroup& g, std::span<const Elem> c, std::uint64_t p, int e, std::size_t cap) {
  if (g.order() > cap) fail(Errc::CapExceeded, "cocycle computation limited to order " + std::to_string(cap));
  LocalRing r(p, e);
  TreeGaugedCocycles tg(g, r);
  std::vector<std::vector<std::uint64_t>> extra;
  for (Elem x : c) {
    for (Elem y = 0; y < g.order(); ++y)
      if (g.mul(x, y) == g.mul(y, x)) extra.push_back(tg.pairing_row(x, y));
  }
  CohomologyClasses out;
  out.unknowns = tg.vars();
  auto k = cocycle_kernel(tg, r, extra, out.rows_used);
  auto q = quotient_module(k, tg.tree_coboundaries(), r);
  out.invariants = q.invariants;
  for (const auto& gen : q.generators) out.representatives.push_back(tg.evaluate(gen));
  return out;
}

}  // namespace detail

/// H^2(G, Z/p^e) with one explicit normalised cocycle per cyclic factor.
inline CohomologyClasses h2_classes(const FiniteGroup& g, std::uint64_t p, int e, std::size_t cap = kDefaultCocycleCap) {
  return detail::cohomology(g, {}, p, e, cap);
}

/// Classes whose commutator pairing vanishes on every commuting pair (x, y) with x in c.
inline CohomologyClasses c_symmetric_classes(const FiniteGroup& g, std::span<const Elem> c, std::uint64_t p, int e,
                                             std::size_t cap = kDefaultCocycleCap) {
  return detail::cohomology(g, c, p, e, cap);
}

inline AbelianInvariants c_symmetric_subgroup(const FiniteGroup& g, std::span<const Elem> c, std::uint64_t p, int e,
                                              std::size_t cap = kDefaultCocycleCap) {
  return c_symmetric_classes(g, c, p, e, cap).invariants;
}

/// H_2(G, c): per prime p | |G|, the c-symmetric part of H^2(G, Z/p^{v_p(|G|) + extra}) with the
/// Ext(G^ab, -) factors removed. `extra` > 0 over-saturates the coefficients as a consistency check.
inline AbelianInvariants reduced_schur(const FiniteGroup& g, std::span<const Elem> c, std::size_t cap = kDefaultCocycleCap,
                                       int extra = 0) {
  if (g.order() > cap) fail(Errc::CapExceeded, "cocycle computation limited to order " + std::to_string(cap));
  auto ab = abelianization(g).invariants;
  AbelianInvariants out;
  for (auto [p, v] : factorize(g.order())) {
    int e = v + extra;
    auto s = c_symmetric_subgroup(g, c, p, e, cap);
    out = out.direct_sum(s.minus(ext_with_prime_power(ab, p, e)));
  }
  return out;
}

inline AbelianInvariants schur_multiplier(const FiniteGroup& g, std::size_t cap = kDefaultCocycleCap, int extra = 0) {
  return reduced_schur(g, {}, cap, extra);
}

}  // namespace nacl

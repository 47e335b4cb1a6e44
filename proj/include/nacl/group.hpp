#pragma once

// Finite-group substrate: Cayley-table groups, element sets, subgroup closure,
// conjugacy machinery, quotients, homomorphism search.

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nacl/abelian.hpp"
#include "nacl/error.hpp"

namespace nacl {

using Elem = std::uint32_t;

inline constexpr std::size_t kDefaultOrderCap = 20000;
inline constexpr std::size_t kDefaultAutCap = 200;

/// Anything with dense element indices 0..order-1, identity 0, and O(1)-ish products.
template <class G>
concept GroupLike = requires(const G& g, Elem x, Elem y) {
  { g.order() } -> std::convertible_to<std::size_t>;
  { g.mul(x, y) } -> std::convertible_to<Elem>;
  { g.inv(x) } -> std::convertible_to<Elem>;
};

/// Bitset over element indices of some parent group.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

  std::size_t universe() const { return universe_; }
  bool contains(Elem x) const { return (words_[x >> 6] >> (x & 63)) & 1u; }
  void insert(Elem x) { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }
  void erase(Elem x) { words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }

  std::size_t size() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  std::vector<Elem> members() const {
    std::vector<Elem> out;
    out.reserve(size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        int b = std::countr_zero(w);
        out.push_back(static_cast<Elem>(i * 64 + b));
        w &= w - 1;
      }
    }
    return out;
  }

  bool is_subset_of(const ElementSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto w : words_) {
      h ^= w;
      h *= 1099511628211ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }

  friend bool operator==(const ElementSet& a, const ElementSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const { return s.hash(); }
};

/// A subgroup stored as an element set; produced only by closure routines.
using SubgroupSet = ElementSet;

/// Homomorphism given by its per-element image table.
struct GroupHom {
  std::vector<Elem> image;
  Elem operator()(Elem x) const { return image[x]; }
  friend bool operator==(const GroupHom&, const GroupHom&) = default;
};

/// Concrete finite group as a flat Cayley table over indices 0..n-1, identity 0.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  /// Takes ownership of a row-major n*n table. Verifies identity, Latin-square property and
  /// associativity (x*y)*s = x*(y*s) for all x, y and every generator s, which implies full
  /// associativity once the generators are known to generate.
  static FiniteGroup from_table(std::size_t n, std::vector<std::uint16_t> table, std::vector<Elem> gens = {}) {
    if (n == 0 || n > 65535) fail(Errc::CapExceeded, "table groups limited to order <= 65535");
    ensure(table.size() == n * n, "table size mismatch");
    FiniteGroup g;
    g.n_ = n;
    g.table_ = std::move(table);
    g.inv_.assign(n, 0);
    std::vector<std::uint8_t> seen(n);
    for (std::size_t x = 0; x < n; ++x) {
      ensure(g.table_[x] == x && g.table_[x * n] == x, "element 0 is not the identity");
      std::fill(seen.begin(), seen.end(), 0);
      bool found_inv = false;
      for (std::size_t y = 0; y < n; ++y) {
        auto z = g.table_[x * n + y];
        ensure(z < n && !seen[z], "Cayley table row is not a permutation");
        seen[z] = 1;
        if (z == 0) {
          g.inv_[x] = static_cast<Elem>(y);
          found_inv = true;
        }
      }
      ensure(found_inv, "missing inverse");
    }
    for (std::size_t y = 0; y < n; ++y) {
      std::fill(seen.begin(), seen.end(), 0);
      for (std::size_t x = 0; x < n; ++x) {
        auto z = g.table_[x * n + y];
        ensure(!seen[z], "Cayley table column is not a permutation");
        seen[z] = 1;
      }
    }
    g.gens_ = gens.empty() ? g.greedy_generators() : std::move(gens);
    ensure(g.generated_by(g.gens_), "generator list does not generate");
    for (Elem s : g.gens_)
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          ensure(g.mul(g.mul(Elem(x), Elem(y)), s) == g.mul(Elem(x), g.mul(Elem(y), s)),
                 "Cayley table is not associative");
    g.orders_.assign(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t k = 1;
      Elem y = static_cast<Elem>(x);
      while (y != 0) {
        y = g.mul(y, static_cast<Elem>(x));
        ++k;
      }
      g.orders_[x] = static_cast<std::uint32_t>(k);
    }
    return g;
  }

  /// Materialises any GroupLike of moderate order.
  template <GroupLike G>
  static FiniteGroup from_group_like(const G& src) {
    std::size_t n = src.order();
    std::vector<std::uint16_t> table(n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) table[x * n + y] = static_cast<std::uint16_t>(src.mul(Elem(x), Elem(y)));
    return from_table(n, std::move(table));
  }

  std::size_t order() const { return n_; }
  Elem identity() const { return 0; }
  Elem mul(Elem x, Elem y) const { return table_[std::size_t(x) * n_ + y]; }
  Elem inv(Elem x) const { return inv_[x]; }
  Elem conj(Elem g, Elem x) const { return mul(mul(g, x), inv_[g]); }  // g x g^-1
  std::uint32_t element_order(Elem x) const { return orders_[x]; }
  const std::vector<Elem>& generators() const { return gens_; }

  Elem pow(Elem x, long long k) const {
    long long m = orders_[x];
    k %= m;
    if (k < 0) k += m;
    Elem r = 0, b = x;
    while (k) {
      if (k & 1) r = mul(r, b);
      b = mul(b, b);
      k >>= 1;
    }
    return r;
  }

  bool is_abelian() const {
    for (Elem a : gens_)
      for (Elem b : gens_)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  /// Permutation images used to build the group, when it came from permutations.
  const std::vector<std::vector<std::uint16_t>>& labels() const { return labels_; }
  void set_labels(std::vector<std::vector<std::uint16_t>> labels) { labels_ = std::move(labels); }

  bool generated_by(std::span<const Elem> gens) const;

 private:
  std::vector<Elem> greedy_generators() const;

  std::size_t n_ = 0;
  std::vector<std::uint16_t> table_;
  std::vector<Elem> inv_;
  std::vector<Elem> gens_;
  std::vector<std::uint32_t> orders_;
  std::vector<std::vector<std::uint16_t>> labels_;
};

// ---------------------------------------------------------------------------
// Closure

/// Incremental subgroup builder (Dimino): the element list is a union of right cosets of the
/// previous subgroup, so adding a generator costs O(|new subgroup| * #gens).
template <GroupLike G>
class SubgroupBuilder {
 public:
  explicit SubgroupBuilder(const G& g) : g_(&g), set_(g.order()) {
    elems_.push_back(0);
    set_.insert(0);
  }

  bool contains(Elem x) const { return set_.contains(x); }
  const std::vector<Elem>& elements() const { return elems_; }
  const std::vector<Elem>& generators() const { return gens_; }
  const ElementSet& set() const { return set_; }
  std::size_t size() const { return elems_.size(); }

  /// Adds a generator; returns false if it was already a member.
  bool add(Elem x, std::size_t cap = SIZE_MAX) {
    if (set_.contains(x)) return false;
    gens_.push_back(x);
    const std::size_t block = elems_.size();
    const std::vector<Elem> base(elems_.begin(), elems_.end());
    add_coset(base, x);
    for (std::size_t pos = block; pos < elems_.size(); pos += block) {
      Elem rep = elems_[pos];
      for (Elem s : gens_) {
        Elem y = g_->mul(rep, s);
        if (!set_.contains(y)) {
          add_coset(base, y);
          if (elems_.size() > cap) fail(Errc::CapExceeded, "subgroup closure exceeds cap");
        }
      }
    }
    return true;
  }

 private:
  void add_coset(const std::vector<Elem>& base, Elem r) {
    for (Elem h : base) {
      Elem y = g_->mul(h, r);
      elems_.push_back(y);
      set_.insert(y);
    }
  }

  const G* g_;
  ElementSet set_;
  std::vector<Elem> elems_;
  std::vector<Elem> gens_;
};

template <GroupLike G>
SubgroupSet subgroup_closure(const G& g, std::span<const Elem> gens) {
  SubgroupBuilder<G> b(g);
  for (Elem x : gens) b.add(x);
  return b.set();
}

template <GroupLike G>
SubgroupSet subgroup_closure(const G& g, const ElementSet& s) {
  auto m = s.members();
  return subgroup_closure(g, std::span<const Elem>(m));
}

inline bool FiniteGroup::generated_by(std::span<const Elem> gens) const {
  return subgroup_closure(*this, gens).size() == n_;
}

inline std::vector<Elem> FiniteGroup::greedy_generators() const {
  std::vector<Elem> gens;
  SubgroupBuilder<FiniteGroup> b(*this);
  for (Elem x = 1; x < n_ && b.size() < n_; ++x)
    if (b.add(x)) gens.push_back(x);
  return gens;
}

/// Element order for any GroupLike.
template <GroupLike G>
std::size_t element_order(const G& g, Elem x) {
  std::size_t k = 1;
  Elem y = x;
  while (y != 0) {
    y = g.mul(y, x);
    ++k;
  }
  return k;
}

template <GroupLike G>
Elem power(const G& g, Elem x, std::uint64_t k) {
  Elem r = 0, b = x;
  while (k) {
    if (k & 1) r = g.mul(r, b);
    b = g.mul(b, b);
    k >>= 1;
  }
  return r;
}

/// Smallest normal subgroup containing `s`, given generators of the ambient group.
template <GroupLike G>
SubgroupSet normal_closure(const G& g, std::span<const Elem> ambient_gens, std::span<const Elem> s) {
  SubgroupBuilder<G> b(g);
  std::vector<Elem> pending(s.begin(), s.end());
  while (!pending.empty()) {
    Elem x = pending.back();
    pending.pop_back();
    if (!b.add(x)) continue;
    for (Elem a : ambient_gens) pending.push_back(g.mul(g.mul(a, x), g.inv(a)));
  }
  // Conjugates of every current generator must already lie inside.
  bool changed = true;
  while (changed) {
    changed = false;
    auto gens = b.generators();
    for (Elem h : gens)
      for (Elem a : ambient_gens) {
        Elem c = g.mul(g.mul(a, h), g.inv(a));
        if (b.add(c)) changed = true;
      }
  }
  return b.set();
}

// ---------------------------------------------------------------------------
// Conjugacy

struct ConjugacyClasses {
  std::vector<std::vector<Elem>> classes;  // each sorted, minimal representative first
  std::vector<std::uint32_t> class_of;
};

template <GroupLike G>
ConjugacyClasses conjugacy_classes_under(const G& g, std::span<const Elem> gens, std::span<const Elem> domain) {
  ConjugacyClasses cc;
  std::unordered_map<Elem, std::uint32_t> idx;
  const std::uint32_t unset = UINT32_MAX;
  std::vector<Elem> dom(domain.begin(), domain.end());
  std::sort(dom.begin(), dom.end());
  for (Elem x : dom) idx[x] = unset;
  for (Elem x : dom) {
    if (idx[x] != unset) continue;
    std::uint32_t id = static_cast<std::uint32_t>(cc.classes.size());
    std::vector<Elem> cls{x};
    idx[x] = id;
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (Elem a : gens) {
        Elem y = g.mul(g.mul(a, cls[i]), g.inv(a));
        auto it = idx.find(y);
        ensure(it != idx.end(), "domain not closed under conjugation");
        if (it->second == unset) {
          it->second = id;
          cls.push_back(y);
        }
      }
    std::sort(cls.begin(), cls.end());
    cc.classes.push_back(std::move(cls));
  }
  cc.class_of.clear();
  return cc;
}

inline ConjugacyClasses conjugacy_classes(const FiniteGroup& g) {
  std::vector<Elem> all(g.order());
  std::iota(all.begin(), all.end(), 0);
  auto cc = conjugacy_classes_under(g, std::span<const Elem>(g.generators()), std::span<const Elem>(all));
  cc.class_of.assign(g.order(), 0);
  for (std::uint32_t i = 0; i < cc.classes.size(); ++i)
    for (Elem x : cc.classes[i]) cc.class_of[x] = i;
  return cc;
}

inline SubgroupSet centralizer(const FiniteGroup& g, Elem x) {
  SubgroupSet s(g.order());
  for (Elem y = 0; y < g.order(); ++y)
    if (g.mul(x, y) == g.mul(y, x)) s.insert(y);
  return s;
}

inline SubgroupSet center(const FiniteGroup& g) {
  SubgroupSet s(g.order());
  for (Elem y = 0; y < g.order(); ++y) {
    bool central = true;
    for (Elem a : g.generators())
      if (g.mul(a, y) != g.mul(y, a)) {
        central = false;
        break;
      }
    if (central) s.insert(y);
  }
  return s;
}

inline SubgroupSet derived_subgroup(const FiniteGroup& g) {
  std::vector<Elem> comms;
  for (Elem a : g.generators())
    for (Elem b : g.generators()) comms.push_back(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
  return normal_closure(g, std::span<const Elem>(g.generators()), std::span<const Elem>(comms));
}

/// Quotient by a normal subgroup; returns the quotient and the projection.
inline std::pair<FiniteGroup, GroupHom> quotient(const FiniteGroup& g, const SubgroupSet& normal) {
  const std::size_t n = g.order();
  auto nmembers = normal.members();
  ensure(n % nmembers.size() == 0, "subgroup order does not divide group order");
  std::vector<Elem> coset(n, UINT32_MAX);
  std::vector<Elem> reps;
  for (Elem x = 0; x < n; ++x) {
    if (coset[x] != UINT32_MAX) continue;
    Elem id = static_cast<Elem>(reps.size());
    reps.push_back(x);
    for (Elem h : nmembers) coset[g.mul(x, h)] = id;
  }
  const std::size_t m = reps.size();
  std::vector<std::uint16_t> table(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) table[a * m + b] = static_cast<std::uint16_t>(coset[g.mul(reps[a], reps[b])]);
  std::vector<Elem> qgens;
  for (Elem s : g.generators())
    if (coset[s] != 0) qgens.push_back(coset[s]);
  if (qgens.empty() && m > 1) qgens.push_back(1);
  FiniteGroup q = m == 1 ? FiniteGroup::from_table(1, {0}) : FiniteGroup::from_table(m, std::move(table));
  return {std::move(q), GroupHom{std::move(coset)}};
}

/// Abelian invariants of an abelian group from its element orders.
inline AbelianInvariants abelian_invariants_of_abelian(const FiniteGroup& a) {
  std::vector<std::uint64_t> ords(a.order());
  for (Elem x = 0; x < a.order(); ++x) ords[x] = a.element_order(x);
  return AbelianInvariants::from_torsion_counts(a.order(), [&](std::uint64_t m) {
    std::uint64_t c = 0;
    for (auto o : ords)
      if (m % o == 0) ++c;
    return c;
  });
}

struct Abelianization {
  AbelianInvariants invariants;
  FiniteGroup quotient_group;
  GroupHom projection;
};

inline Abelianization abelianization(const FiniteGroup& g) {
  auto d = derived_subgroup(g);
  auto [q, proj] = quotient(g, d);
  auto inv = abelian_invariants_of_abelian(q);
  return {std::move(inv), std::move(q), std::move(proj)};
}

// ---------------------------------------------------------------------------
// Homomorphisms

inline bool is_homomorphism(const FiniteGroup& dom, const FiniteGroup& cod, const GroupHom& h) {
  if (h.image.size() != dom.order() || h.image[0] != 0) return false;
  for (Elem x = 0; x < dom.order(); ++x)
    for (Elem y = 0; y < dom.order(); ++y)
      if (h.image[dom.mul(x, y)] != cod.mul(h.image[x], h.image[y])) return false;
  return true;
}

inline GroupHom compose(const GroupHom& outer, const GroupHom& inner) {
  GroupHom r;
  r.image.resize(inner.image.size());
  for (std::size_t i = 0; i < inner.image.size(); ++i) r.image[i] = outer.image[inner.image[i]];
  return r;
}

inline GroupHom inverse_map(const GroupHom& h) {
  GroupHom r;
  r.image.assign(h.image.size(), 0);
  for (std::size_t i = 0; i < h.image.size(); ++i) r.image[h.image[i]] = static_cast<Elem>(i);
  return r;
}

/// Smallest generating set made of small indices: exhaustive for one or two generators, greedy
/// (largest closure, then smallest index) beyond that.
inline std::vector<Elem> minimal_generating_set(const FiniteGroup& g) {
  const std::size_t n = g.order();
  if (n == 1) return {};
  for (Elem x = 1; x < n; ++x)
    if (g.element_order(x) == n) return {x};
  for (Elem x = 1; x < n; ++x) {
    SubgroupBuilder<FiniteGroup> bx(g);
    bx.add(x);
    for (Elem y = x + 1; y < n; ++y) {
      if (bx.contains(y)) continue;
      SubgroupBuilder<FiniteGroup> b = bx;
      b.add(y);
      if (b.size() == n) return {x, y};
    }
  }
  std::vector<Elem> gens;
  SubgroupBuilder<FiniteGroup> b(g);
  while (b.size() < n) {
    Elem best = 0;
    std::size_t best_size = 0;
    for (Elem x = 1; x < n; ++x) {
      if (b.contains(x)) continue;
      SubgroupBuilder<FiniteGroup> t = b;
      t.add(x);
      if (t.size() > best_size) {
        best_size = t.size();
        best = x;
      }
    }
    b.add(best);
    gens.push_back(best);
  }
  return gens;
}

namespace detail {

/// Backtracking over images of `gens`; each partial assignment is checked for consistency on the
/// subgroup generated so far. `visit` receives complete homomorphisms and returns false to stop.
class HomSearch {
 public:
  HomSearch(const FiniteGroup& dom, const FiniteGroup& cod, std::vector<Elem> gens,
            std::vector<std::vector<Elem>> candidates, bool injective)
      : dom_(dom), cod_(cod), gens_(std::move(gens)), cand_(std::move(candidates)), injective_(injective) {}

  void run(const std::function<bool(const GroupHom&)>& visit) {
    map_.assign(dom_.order(), UINT32_MAX);
    used_.assign(cod_.order(), 0);
    map_[0] = 0;
    used_[0] = 1;
    mapped_ = {0};
    images_.clear();
    visit_ = &visit;
    stop_ = false;
    recurse(0);
  }

 private:
  void recurse(std::size_t level) {
    if (stop_) return;
    if (level == gens_.size()) {
      if (mapped_.size() != dom_.order()) return;
      GroupHom h{map_};
      if (!(*visit_)(h)) stop_ = true;
      return;
    }
    for (Elem y : cand_[level]) {
      images_.push_back(y);
      std::size_t mark = mapped_.size();
      if (extend(level)) recurse(level + 1);
      for (std::size_t i = mark; i < mapped_.size(); ++i) {
        used_[map_[mapped_[i]]] = 0;
        map_[mapped_[i]] = UINT32_MAX;
      }
      mapped_.resize(mark);
      images_.pop_back();
      if (stop_) return;
    }
  }

  // Extends the map to <gens_[0..level]>; false on inconsistency.
  bool extend(std::size_t level) {
    const std::size_t first_new = mapped_.size();
    // Old elements need the new generator; new elements need all generators.
    for (std::size_t i = 0; i < mapped_.size(); ++i) {
      Elem u = mapped_[i];
      std::size_t jstart = i < first_new ? level : 0;
      for (std::size_t j = jstart; j <= level; ++j) {
        Elem v = dom_.mul(u, gens_[j]);
        Elem target = cod_.mul(map_[u], images_[j]);
        if (map_[v] == UINT32_MAX) {
          if (injective_ && used_[target]) return false;
          map_[v] = target;
          used_[target] = 1;
          mapped_.push_back(v);
        } else if (map_[v] != target) {
          return false;
        }
      }
    }
    return true;
  }

  const FiniteGroup& dom_;
  const FiniteGroup& cod_;
  std::vector<Elem> gens_;
  std::vector<std::vector<Elem>> cand_;
  bool injective_;
  std::vector<Elem> map_;
  std::vector<std::uint8_t> used_;
  std::vector<Elem> mapped_;
  std::vector<Elem> images_;
  const std::function<bool(const GroupHom&)>* visit_ = nullptr;
  bool stop_ = false;
};

inline std::vector<std::uint32_t> class_sizes(const FiniteGroup& g) {
  auto cc = conjugacy_classes(g);
  std::vector<std::uint32_t> out(g.order());
  for (auto& c : cc.classes)
    for (Elem x : c) out[x] = static_cast<std::uint32_t>(c.size());
  return out;
}

inline std::vector<std::vector<Elem>> iso_candidates(const FiniteGroup& dom, const FiniteGroup& cod,
                                                     const std::vector<Elem>& gens) {
  auto cs_dom = class_sizes(dom);
  auto cs_cod = class_sizes(cod);
  std::vector<std::vector<Elem>> cand(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (Elem y = 0; y < cod.order(); ++y)
      if (cod.element_order(y) == dom.element_order(gens[i]) && cs_cod[y] == cs_dom[gens[i]]) cand[i].push_back(y);
  return cand;
}

}  // namespace detail

/// All automorphisms, identity first.
inline std::vector<GroupHom> automorphism_group(const FiniteGroup& g, std::size_t cap = kDefaultAutCap) {
  if (g.order() > cap) fail(Errc::CapExceeded, "automorphism search limited to order " + std::to_string(cap));
  auto gens = minimal_generating_set(g);
  std::vector<GroupHom> out;
  if (gens.empty()) {
    out.push_back(GroupHom{{0}});
    return out;
  }
  detail::HomSearch search(g, g, gens, detail::iso_candidates(g, g, gens), true);
  search.run([&](const GroupHom& h) {
    out.push_back(h);
    return true;
  });
  std::sort(out.begin(), out.end(), [](const GroupHom& a, const GroupHom& b) { return a.image < b.image; });
  return out;
}

/// Cheap isomorphism invariant: sorted multiset of (element order, class size).
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> order_class_signature(const FiniteGroup& g) {
  auto cs = detail::class_sizes(g);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> sig(g.order());
  for (Elem x = 0; x < g.order(); ++x) sig[x] = {g.element_order(x), cs[x]};
  std::sort(sig.begin(), sig.end());
  return sig;
}

/// Returns an isomorphism G -> H when one exists.
inline std::optional<GroupHom> find_isomorphism(const FiniteGroup& g, const FiniteGroup& h,
                                                std::size_t cap = kDefaultAutCap) {
  if (g.order() > cap || h.order() > cap) fail(Errc::CapExceeded, "isomorphism test limited to order " + std::to_string(cap));
  if (g.order() != h.order()) return std::nullopt;
  if (g.order() == 1) return GroupHom{{0}};
  if (order_class_signature(g) != order_class_signature(h)) return std::nullopt;
  auto gens = minimal_generating_set(g);
  std::optional<GroupHom> found;
  detail::HomSearch search(g, h, gens, detail::iso_candidates(g, h, gens), true);
  search.run([&](const GroupHom& m) {
    found = m;
    return false;
  });
  return found;
}

inline bool is_isomorphic(const FiniteGroup& g, const FiniteGroup& h, std::size_t cap = kDefaultAutCap) {
  return find_isomorphism(g, h, cap).has_value();
}

// ---------------------------------------------------------------------------
// Constructions

using Permutation = std::vector<std::uint16_t>;  // 0-based images

/// Parses one permutation in cycle notation, e.g. "(1,2)(3,4,5)"; points are 1-based.
inline Permutation parse_cycles(const std::string& text, std::size_t degree = 0) {
  std::vector<std::vector<std::size_t>> cycles;
  std::size_t maxpt = 0;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i == text.size()) fail(Errc::InvalidPermutation, "empty permutation");
  while (i < text.size()) {
    skip_ws();
    if (i == text.size()) break;
    if (text[i] != '(') fail(Errc::InvalidPermutation, "expected '(' in '" + text + "'");
    ++i;
    std::vector<std::size_t> cyc;
    while (true) {
      skip_ws();
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (start == i) {
        if (i < text.size() && text[i] == ')' && cyc.empty()) break;  // "()" is the identity
        fail(Errc::InvalidPermutation, "expected a point in '" + text + "'");
      }
      std::size_t pt = std::stoul(text.substr(start, i - start));
      if (pt == 0) fail(Errc::InvalidPermutation, "points are 1-based");
      if (std::find(cyc.begin(), cyc.end(), pt) != cyc.end()) fail(Errc::InvalidPermutation, "repeated point in cycle");
      cyc.push_back(pt);
      maxpt = std::max(maxpt, pt);
      skip_ws();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == ')') break;
      fail(Errc::InvalidPermutation, "unterminated cycle in '" + text + "'");
    }
    ++i;
    cycles.push_back(std::move(cyc));
  }
  std::size_t d = std::max(degree, maxpt);
  Permutation p(d);
  std::iota(p.begin(), p.end(), 0);
  // Cycles compose right to left as functions; disjoint cycles commute anyway.
  for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
    Permutation c(d);
    std::iota(c.begin(), c.end(), 0);
    const auto& cyc = *it;
    for (std::size_t k = 0; k < cyc.size(); ++k) c[cyc[k] - 1] = static_cast<std::uint16_t>(cyc[(k + 1) % cyc.size()] - 1);
    Permutation r(d);
    for (std::size_t x = 0; x < d; ++x) r[x] = c[p[x]];
    p = r;
  }
  return p;
}

/// Group generated by permutations, elements indexed in BFS order from the identity with
/// generators in input order. Products follow "apply left factor first": (xy)(pt) = y(x(pt)).
inline FiniteGroup from_permutations(std::vector<Permutation> gens, std::size_t cap = kDefaultOrderCap) {
  if (gens.empty()) fail(Errc::InvalidPermutation, "no generators");
  std::size_t d = 0;
  for (auto& g : gens) d = std::max(d, g.size());
  for (auto& g : gens) {
    std::vector<std::uint8_t> seen(d, 0);
    std::size_t old = g.size();
    g.resize(d);
    for (std::size_t x = old; x < d; ++x) g[x] = static_cast<std::uint16_t>(x);
    for (auto v : g) {
      if (v >= d || seen[v]) fail(Errc::InvalidPermutation, "not a permutation");
      seen[v] = 1;
    }
  }
  struct VecHash {
    std::size_t operator()(const Permutation& p) const {
      std::size_t h = 0;
      for (auto v : p) h = h * 1000003u + v;
      return h;
    }
  };
  Permutation id(d);
  std::iota(id.begin(), id.end(), 0);
  std::vector<Permutation> elems{id};
  std::unordered_map<Permutation, Elem, VecHash> index{{id, 0}};
  auto compose_perm = [&](const Permutation& a, const Permutation& b) {
    Permutation r(d);
    for (std::size_t x = 0; x < d; ++x) r[x] = b[a[x]];
    return r;
  };
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (auto& g : gens) {
      auto p = compose_perm(elems[i], g);
      if (!index.count(p)) {
        if (elems.size() >= cap) fail(Errc::CapExceeded, "permutation group order exceeds cap");
        index.emplace(p, static_cast<Elem>(elems.size()));
        elems.push_back(std::move(p));
      }
    }
  }
  const std::size_t n = elems.size();
  if (n > 65535) fail(Errc::CapExceeded, "permutation group too large for a Cayley table");
  std::vector<std::uint16_t> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = static_cast<std::uint16_t>(index.at(compose_perm(elems[a], elems[b])));
  std::vector<Elem> gidx;
  for (auto& g : gens) {
    Elem e = index.at(g);
    if (e != 0 && std::find(gidx.begin(), gidx.end(), e) == gidx.end()) gidx.push_back(e);
  }
  FiniteGroup out = n == 1 ? FiniteGroup::from_table(1, {0}) : FiniteGroup::from_table(n, std::move(table), gidx);
  out.set_labels(std::move(elems));
  return out;
}

inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t na = a.order(), nb = b.order(), n = na * nb;
  if (n > 65535) fail(Errc::CapExceeded, "direct product too large");
  std::vector<std::uint16_t> table(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Elem p = a.mul(Elem(x / nb), Elem(y / nb));
      Elem q = b.mul(Elem(x % nb), Elem(y % nb));
      table[x * n + y] = static_cast<std::uint16_t>(p * nb + q);
    }
  std::vector<Elem> gens;
  for (Elem s : a.generators()) gens.push_back(static_cast<Elem>(s * nb));
  for (Elem s : b.generators()) gens.push_back(s);
  if (gens.empty()) return FiniteGroup::from_table(1, {0});
  return FiniteGroup::from_table(n, std::move(table), gens);
}

/// Relabels a subgroup of a GroupLike as a standalone FiniteGroup. `elements` must be closed; its
/// first entry must be the identity. Returns the group and the embedding (new index -> old).
template <GroupLike G>
std::pair<FiniteGroup, std::vector<Elem>> subgroup_as_group(const G& g, std::vector<Elem> elements) {
  ensure(!elements.empty() && elements[0] == 0, "subgroup element list must start at identity");
  std::sort(elements.begin() + 1, elements.end());
  const std::size_t n = elements.size();
  if (n > 65535) fail(Errc::CapExceeded, "subgroup too large for a Cayley table");
  std::unordered_map<Elem, Elem> pos;
  for (std::size_t i = 0; i < n; ++i) pos[elements[i]] = static_cast<Elem>(i);
  std::vector<std::uint16_t> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto it = pos.find(g.mul(elements[a], elements[b]));
      ensure(it != pos.end(), "element list is not closed under multiplication");
      table[a * n + b] = static_cast<std::uint16_t>(it->second);
    }
  if (n == 1) return {FiniteGroup::from_table(1, {0}), elements};
  return {FiniteGroup::from_table(n, std::move(table)), elements};
}

}  // namespace nacl

#pragma once

// G wr S2, admissible subgroups G', and the constants entering the conjectured averages.

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "nacl/group.hpp"

namespace nacl {

/// (G x G) x| S2 with arithmetic element encoding s*n^2 + a*n + b for (a, b) sigma^s.
/// Products never touch a stored table, so the group stays cheap even when 2|G|^2 is large.
class WreathSquare {
 public:
  struct Parts {
    Elem a, b, s;
  };

  explicit WreathSquare(FiniteGroup g, std::size_t cap = kDefaultOrderCap) : g_(std::move(g)), n_(g_.order()) {
    if (2 * n_ * n_ > cap) fail(Errc::CapExceeded, "|G wr S2| = " + std::to_string(2 * n_ * n_) + " exceeds cap");
    nn_ = n_ * n_;
  }

  const FiniteGroup& base() const { return g_; }
  std::size_t order() const { return 2 * nn_; }

  Elem encode(Elem a, Elem b, Elem s) const { return static_cast<Elem>(s * nn_ + a * n_ + b); }
  Parts decode(Elem x) const {
    return {static_cast<Elem>((x % nn_) / n_), static_cast<Elem>(x % n_), static_cast<Elem>(x / nn_)};
  }

  Elem mul(Elem x, Elem y) const {
    auto [a, b, s] = decode(x);
    auto [c, d, t] = decode(y);
    if (s == 0) return encode(g_.mul(a, c), g_.mul(b, d), t);
    return encode(g_.mul(a, d), g_.mul(b, c), 1 - t);
  }

  Elem inv(Elem x) const {
    auto [a, b, s] = decode(x);
    if (s == 0) return encode(g_.inv(a), g_.inv(b), 0);
    return encode(g_.inv(b), g_.inv(a), 1);
  }

  Elem sigma() const { return encode(0, 0, 1); }
  Elem pi(Elem x) const { return static_cast<Elem>(x / nn_); }
  Elem proj1(Elem x) const { return decode(x).a; }
  Elem proj2(Elem x) const { return decode(x).b; }

  /// The order-2 element (g, g^-1) sigma.
  Elem involution(Elem g) const { return encode(g, g_.inv(g), 1); }

  /// Coordinatewise action of an automorphism of G (sigma is fixed).
  Elem apply(const GroupHom& alpha, Elem x) const {
    auto [a, b, s] = decode(x);
    return encode(alpha(a), alpha(b), s);
  }

  /// Full Cayley table; only sensible for small G.
  FiniteGroup materialize() const { return FiniteGroup::from_group_like(*this); }

 private:
  FiniteGroup g_;
  std::size_t n_, nn_;
};

inline std::shared_ptr<const WreathSquare> wreath_square(const FiniteGroup& g, std::size_t cap = kDefaultOrderCap) {
  auto w = std::make_shared<const WreathSquare>(g, cap);
  // Structural checks: sigma swaps the coordinates, and there are exactly |G| involutions off the kernel.
  std::size_t n = g.order();
  for (Elem a = 0; a < n; ++a) {
    Elem x = w->encode(a, 0, 0);
    Elem y = w->mul(w->mul(w->sigma(), x), w->sigma());
    ensure(w->proj2(y) == a && w->proj1(y) == 0, "sigma does not swap coordinates");
  }
  if (n <= 64) {
    std::size_t inv_count = 0;
    for (Elem x = static_cast<Elem>(n * n); x < w->order(); ++x)
      if (w->mul(x, x) == 0) ++inv_count;
    ensure(inv_count == n, "unexpected number of involutions outside the kernel");
  }
  return w;
}

/// A group with a marked union of conjugacy classes c.
struct MarkedPair {
  FiniteGroup group;
  std::vector<Elem> c;                     // sorted
  std::vector<std::vector<Elem>> classes;  // c / G, each sorted, ordered by minimal member
  std::vector<std::int32_t> class_of;      // element -> class number or -1
};

/// Splits `c` into conjugacy classes; throws InvalidSpec unless c is a union of classes.
inline MarkedPair make_marked_pair(FiniteGroup g, std::vector<Elem> c) {
  MarkedPair m;
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  ElementSet in(g.order());
  for (Elem x : c) in.insert(x);
  for (Elem x : c)
    for (Elem s : g.generators())
      if (!in.contains(g.conj(s, x))) fail(Errc::InvalidSpec, "c is not closed under conjugation");
  auto cc = conjugacy_classes_under(g, std::span<const Elem>(g.generators()), std::span<const Elem>(c));
  m.classes = std::move(cc.classes);
  std::sort(m.classes.begin(), m.classes.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
  m.class_of.assign(g.order(), -1);
  for (std::size_t i = 0; i < m.classes.size(); ++i)
    for (Elem x : m.classes[i]) m.class_of[x] = static_cast<std::int32_t>(i);
  m.group = std::move(g);
  m.c = std::move(c);
  return m;
}

/// A materialised G' with its marked class set, in G'-local indices (sorted W order).
struct GprimeModel : MarkedPair {
  std::vector<Elem> to_w;    // local index -> W index (sorted, identity first)
  std::vector<Elem> kernel;  // local indices of G' cap ker(pi)
  std::vector<Elem> rho;     // local index -> first coordinate in G
};

struct AdmissibleType {
  std::shared_ptr<const WreathSquare> wreath;
  ElementSet members;
  std::vector<Elem> elements;                // W indices, sorted
  std::vector<Elem> c;                       // W indices, sorted
  std::vector<std::vector<Elem>> c_classes;  // W indices, minimal member first, ordered by it
  std::vector<Elem> class_reps;
  std::size_t classes = 0;                   // N
  bool good = false;
  std::size_t aut_fixing_order = 0;
  std::size_t aut_orbit_size = 0;
  std::optional<AbelianInvariants> abelianization_of_gprime;
  std::optional<std::size_t> center_order;
  std::string name;                          // abstract-class label when a namer was supplied
  std::size_t embeddings_of_class = 1;       // Aut(G)-inequivalent embeddings sharing this label

  std::size_t order() const { return elements.size(); }
};

enum class AdmissibleStrategy { Auto, LatticeSearch, DirectConstruction };

struct AdmissibleOptions {
  std::size_t order_cap = kDefaultOrderCap;
  std::size_t materialize_cap = 4096;
  std::size_t aut_cap = kDefaultAutCap;
  AdmissibleStrategy strategy = AdmissibleStrategy::Auto;
  std::function<std::string(const FiniteGroup&)> namer;
};

inline GprimeModel materialize(const AdmissibleType& t) {
  GprimeModel m;
  auto [grp, emb] = subgroup_as_group(*t.wreath, t.elements);
  m.group = std::move(grp);
  m.to_w = std::move(emb);
  std::unordered_map<Elem, Elem> local;
  for (Elem i = 0; i < m.to_w.size(); ++i) local[m.to_w[i]] = i;
  m.class_of.assign(m.to_w.size(), -1);
  for (const auto& cls : t.c_classes) {
    std::vector<Elem> lc;
    for (Elem x : cls) lc.push_back(local.at(x));
    std::sort(lc.begin(), lc.end());
    for (Elem x : lc) m.class_of[x] = static_cast<std::int32_t>(m.classes.size());
    m.classes.push_back(lc);
  }
  for (Elem x : t.c) m.c.push_back(local.at(x));
  std::sort(m.c.begin(), m.c.end());
  m.rho.resize(m.to_w.size());
  for (Elem i = 0; i < m.to_w.size(); ++i) {
    m.rho[i] = t.wreath->proj1(m.to_w[i]);
    if (t.wreath->pi(m.to_w[i]) == 0) m.kernel.push_back(i);
  }
  return m;
}

namespace detail {

inline bool is_nonabelian_simple(const FiniteGroup& g) {
  if (g.is_abelian()) return false;
  auto cc = conjugacy_classes(g);
  for (std::size_t i = 1; i < cc.classes.size(); ++i) {
    Elem x = cc.classes[i][0];
    if (normal_closure(g, std::span<const Elem>(g.generators()), std::span<const Elem>(&x, 1)).size() != g.order())
      return false;
  }
  return true;
}

struct Candidate {
  ElementSet set;
  std::vector<Elem> gens;
};

// Every subgroup generated by sigma and a subset of the involutions (g, g^-1) sigma.
inline std::vector<Candidate> lattice_candidates(const WreathSquare& w) {
  const std::size_t n = w.base().order();
  std::vector<Candidate> out;
  std::unordered_set<ElementSet, ElementSetHash> seen;
  std::deque<SubgroupBuilder<WreathSquare>> queue;
  SubgroupBuilder<WreathSquare> start(w);
  start.add(w.sigma());
  seen.insert(start.set());
  out.push_back({start.set(), start.generators()});
  queue.push_back(std::move(start));
  while (!queue.empty()) {
    auto h = std::move(queue.front());
    queue.pop_front();
    for (Elem g = 0; g < n; ++g) {
      Elem p = w.involution(g);
      if (h.contains(p)) continue;
      auto next = h;
      next.add(p);
      if (!seen.insert(next.set()).second) continue;
      out.push_back({next.set(), next.generators()});
      queue.push_back(std::move(next));
    }
  }
  return out;
}

// Goursat: for simple G the kernel part is G x G or the graph of an involutive automorphism.
inline std::vector<Candidate> direct_candidates(const WreathSquare& w, const std::vector<GroupHom>& auts) {
  const auto& g = w.base();
  std::vector<Candidate> out;
  for (const auto& theta : auts) {
    bool involutive = true;
    for (Elem x = 0; x < g.order() && involutive; ++x) involutive = theta(theta(x)) == x;
    if (!involutive) continue;
    SubgroupBuilder<WreathSquare> b(w);
    b.add(w.sigma());
    for (Elem s : g.generators()) b.add(w.encode(s, theta(s), 0));
    out.push_back({b.set(), b.generators()});
  }
  SubgroupBuilder<WreathSquare> full(w);
  full.add(w.sigma());
  for (Elem s : g.generators()) full.add(w.encode(s, 0, 0));
  out.push_back({full.set(), full.generators()});
  return out;
}

inline bool is_admissible(const WreathSquare& w, const ElementSet& members) {
  if (!members.contains(w.sigma())) return false;
  const std::size_t n = w.base().order();
  std::vector<std::uint8_t> hit(n, 0);
  std::size_t hits = 0;
  std::vector<Elem> c;
  for (Elem x : members.members()) {
    if (w.pi(x) == 0) {
      Elem a = w.proj1(x);
      if (!hit[a]) {
        hit[a] = 1;
        ++hits;
      }
    } else if (w.mul(x, x) == 0) {
      c.push_back(x);
    }
  }
  if (hits != n) return false;
  return subgroup_closure(w, std::span<const Elem>(c)).size() == members.size();
}

}  // namespace detail

/// Builds the type record for one admissible subgroup (orbit data filled by the caller).
inline AdmissibleType make_admissible_type(std::shared_ptr<const WreathSquare> w, const ElementSet& members,
                                           const AdmissibleOptions& opt = {}) {
  AdmissibleType t;
  t.wreath = w;
  t.members = members;
  t.elements = members.members();
  for (Elem x : t.elements)
    if (w->pi(x) == 1 && w->mul(x, x) == 0) t.c.push_back(x);
  auto gens = SubgroupBuilder<WreathSquare>(*w);
  for (Elem x : t.c) gens.add(x);
  ensure(gens.size() == t.elements.size(), "c does not generate G'");
  auto cc = conjugacy_classes_under(*w, std::span<const Elem>(gens.generators()), std::span<const Elem>(t.c));
  t.c_classes = std::move(cc.classes);
  std::sort(t.c_classes.begin(), t.c_classes.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
  for (const auto& cls : t.c_classes) t.class_reps.push_back(cls[0]);
  t.classes = t.c_classes.size();
  t.good = t.classes == 1;
  if (t.order() <= opt.materialize_cap) {
    auto m = materialize(t);
    t.abelianization_of_gprime = abelianization(m.group).invariants;
    t.center_order = center(m.group).size();
    if (t.good) ensure(*t.abelianization_of_gprime == AbelianInvariants::from_cyclic({2}), "good G' must have abelianization C2");
    if (opt.namer) t.name = opt.namer(m.group);
  }
  return t;
}

/// All admissible G' up to the coordinatewise Aut(G) action, one record per orbit, sorted by
/// (|G'|, name, number of classes).
inline std::vector<AdmissibleType> enumerate_admissible(const FiniteGroup& g, const AdmissibleOptions& opt = {}) {
  bool simple = detail::is_nonabelian_simple(g);
  bool direct = opt.strategy == AdmissibleStrategy::DirectConstruction ||
                (opt.strategy == AdmissibleStrategy::Auto && simple);
  if (direct && !simple) fail(Errc::InvalidSpec, "direct construction needs a non-abelian simple group");
  // Direct construction never walks W, so it is exempt from the order cap.
  std::size_t wcap = direct ? std::max(opt.order_cap, 2 * g.order() * g.order()) : opt.order_cap;
  auto w = wreath_square(g, wcap);
  auto auts = automorphism_group(g, std::max(opt.aut_cap, direct ? g.order() : opt.aut_cap));
  auto candidates = direct ? detail::direct_candidates(*w, auts) : detail::lattice_candidates(*w);

  std::vector<ElementSet> admissible;
  std::unordered_map<ElementSet, std::size_t, ElementSetHash> index;
  for (auto& cand : candidates) {
    if (!detail::is_admissible(*w, cand.set)) continue;
    if (index.count(cand.set)) continue;
    index.emplace(cand.set, admissible.size());
    admissible.push_back(cand.set);
  }

  std::vector<std::int64_t> orbit_of(admissible.size(), -1);
  std::vector<AdmissibleType> out;
  for (std::size_t i = 0; i < admissible.size(); ++i) {
    if (orbit_of[i] >= 0) continue;
    std::size_t stab = 0, orbit = 0;
    auto members = admissible[i].members();
    for (const auto& alpha : auts) {
      ElementSet img(w->order());
      for (Elem x : members) img.insert(w->apply(alpha, x));
      auto it = index.find(img);
      ensure(it != index.end(), "Aut(G)-image of an admissible subgroup was not enumerated");
      if (it->second == i) ++stab;
      if (orbit_of[it->second] < 0) {
        orbit_of[it->second] = static_cast<std::int64_t>(out.size());
        ++orbit;
      }
    }
    ensure(stab * orbit == auts.size(), "orbit-stabilizer failed for the Aut(G) action");
    auto t = make_admissible_type(w, admissible[i], opt);
    t.aut_fixing_order = stab;
    t.aut_orbit_size = orbit;
    out.push_back(std::move(t));
  }
  std::map<std::string, std::size_t> per_name;
  for (auto& t : out)
    if (!t.name.empty()) ++per_name[t.name + "#" + std::to_string(t.order())];
  for (auto& t : out)
    if (!t.name.empty()) t.embeddings_of_class = per_name[t.name + "#" + std::to_string(t.order())];
  std::stable_sort(out.begin(), out.end(), [](const AdmissibleType& a, const AdmissibleType& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    if (a.name != b.name) return a.name < b.name;
    return a.classes < b.classes;
  });
  return out;
}

/// |Aut_{G'}(G)| by brute force over all automorphisms.
inline std::size_t aut_fixing(const AdmissibleType& t, std::size_t cap = kDefaultAutCap) {
  const auto& w = *t.wreath;
  auto auts = automorphism_group(w.base(), std::max(cap, w.base().order()));
  std::size_t count = 0;
  for (const auto& alpha : auts) {
    bool fixes = true;
    for (Elem x : t.elements)
      if (!t.members.contains(w.apply(alpha, x))) {
        fixes = false;
        break;
      }
    if (fixes) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Conjectured averages

/// Exact nonnegative rational or infinity.
struct Extended {
  bool infinite = false;
  std::uint64_t num = 0, den = 1;

  static Extended finite(std::uint64_t n, std::uint64_t d) {
    ensure(d != 0, "zero denominator");
    auto g = std::gcd(n, d);
    return {false, n / g, d / g};
  }
  static Extended inf() { return {true, 0, 1}; }

  std::string to_string() const {
    if (infinite) return "inf";
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }
  friend bool operator==(const Extended&, const Extended&) = default;
};

struct ConjecturePrediction {
  Extended e_minus, e_plus, e_tilde_minus, e_tilde_plus;
  std::uint64_t h2_two_torsion = 1;
  std::size_t c_size = 0;
  std::size_t growth_exponent = 0;
};

inline ConjecturePrediction conjectured_averages(const AdmissibleType& t, const AbelianInvariants& h2) {
  ConjecturePrediction p;
  p.h2_two_torsion = h2.torsion(2);
  p.c_size = t.c.size();
  p.growth_exponent = t.classes - 1;
  if (!t.good) {
    p.e_minus = p.e_plus = p.e_tilde_minus = p.e_tilde_plus = Extended::inf();
    return p;
  }
  p.e_minus = Extended::finite(p.h2_two_torsion, t.aut_fixing_order);
  p.e_plus = Extended::finite(p.h2_two_torsion, t.c.size() * t.aut_fixing_order);
  p.e_tilde_minus = Extended::finite(p.h2_two_torsion, 1);
  p.e_tilde_plus = Extended::finite(p.h2_two_torsion, 1);
  return p;
}

struct GrowthRate {
  bool finite = true;
  std::size_t log_exponent = 0;  // partial sums grow like (log X)^log_exponent when infinite
};

inline GrowthRate mb_growth(const AdmissibleType& t) {
  if (t.classes == 1) return {true, 0};
  return {false, t.classes - 1};
}

// ---------------------------------------------------------------------------
// Embeddings from index-two data

struct WreathEmbedding {
  std::vector<Elem> image;  // Gamma index -> W index
  bool injective = false;
};

/// x in Delta -> (rho(x), rho(y x y^-1)) and y -> sigma. `rho` is indexed by Gamma elements; entries
/// outside Delta are ignored.
inline WreathEmbedding embed_wreath(const FiniteGroup& gamma, const ElementSet& delta, const std::vector<Elem>& rho,
                                    Elem y, const WreathSquare& w) {
  const std::size_t n = gamma.order();
  if (delta.size() * 2 != n || !delta.contains(0)) fail(Errc::NotIndexTwo, "Delta must have index two");
  for (Elem a : delta.members())
    for (Elem b : delta.members())
      if (!delta.contains(gamma.mul(a, b))) fail(Errc::NotIndexTwo, "Delta is not a subgroup");
  if (y == 0 || gamma.mul(y, y) != 0) fail(Errc::NotOrderTwo, "y must have order two");
  if (delta.contains(y)) fail(Errc::NotIndexTwo, "y must lie outside Delta");
  std::vector<std::uint8_t> hit(w.base().order(), 0);
  std::size_t hits = 0;
  for (Elem x : delta.members()) {
    if (rho[x] >= w.base().order()) fail(Errc::NotSurjective, "rho value out of range");
    if (!hit[rho[x]]) {
      hit[rho[x]] = 1;
      ++hits;
    }
  }
  if (hits != w.base().order()) fail(Errc::NotSurjective, "rho is not surjective");
  WreathEmbedding e;
  e.image.assign(n, 0);
  for (Elem x : delta.members()) e.image[x] = w.encode(rho[x], rho[gamma.conj(y, x)], 0);
  for (Elem z = 0; z < n; ++z)
    if (!delta.contains(z)) e.image[z] = w.mul(e.image[gamma.mul(z, gamma.inv(y))], w.sigma());
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      ensure(e.image[gamma.mul(a, b)] == w.mul(e.image[a], e.image[b]), "embedding is not multiplicative");
  std::unordered_set<Elem> distinct(e.image.begin(), e.image.end());
  e.injective = distinct.size() == n;
  return e;
}

/// Pairs (alpha, y), alpha in Aut(G) and y in c, whose re-embedding of G' lands exactly on G'.
inline std::size_t count_twist_pairs(const AdmissibleType& t, std::size_t aut_cap = kDefaultAutCap) {
  if (!t.good) fail(Errc::NotGood, "twist count needs a good type");
  const auto& w = *t.wreath;
  auto m = materialize(t);
  const auto& gp = m.group;
  auto auts = automorphism_group(w.base(), std::max(aut_cap, w.base().order()));
  ElementSet delta(gp.order());
  for (Elem x : m.kernel) delta.insert(x);
  std::size_t count = 0;
  for (const auto& alpha : auts) {
    std::vector<Elem> rho(gp.order());
    for (Elem x = 0; x < gp.order(); ++x) rho[x] = alpha(m.rho[x]);
    for (Elem y : m.c) {
      auto e = embed_wreath(gp, delta, rho, y, w);
      bool same = e.injective;
      for (Elem x = 0; x < gp.order() && same; ++x) same = t.members.contains(e.image[x]);
      if (same) ++count;
    }
  }
  return count;
}

}  // namespace nacl

#pragma once

// Finite model of the universal marked central extension of (G', c), built by coset enumeration.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "nacl/todd_coxeter.hpp"
#include "nacl/wreath.hpp"

namespace nacl {

struct MarkedPresentation {
  std::vector<Elem> symbols;        // generator i stands for [symbols[i]]
  std::vector<std::int32_t> gen_of;  // group element -> generator index or -1
  std::vector<std::size_t> gen_class;
  std::size_t classes = 0;
  std::size_t M = 0;
  Presentation full;     // |c|^2 conjugation relators then |c| power relators
  Presentation reduced;  // equivalent subset actually enumerated
};

/// Relators [x][y][x]^-1 [xyx^-1]^-1 for x, y in c, and [g]^{2M}. The reduced relator set keeps
/// conjugation relators only for x in a generating subset S of c that meets every class, and one
/// power relator per class; every dropped relator is a conjugate of a kept one by a word in S.
inline MarkedPresentation build_presentation(const MarkedPair& mp, std::size_t M = 0) {
  const auto& g = mp.group;
  MarkedPresentation p;
  p.M = M ? M : g.order();
  p.symbols = mp.c;
  p.classes = mp.classes.size();
  p.gen_of.assign(g.order(), -1);
  for (std::size_t i = 0; i < p.symbols.size(); ++i) {
    p.gen_of[p.symbols[i]] = static_cast<std::int32_t>(i);
    p.gen_class.push_back(static_cast<std::size_t>(mp.class_of[p.symbols[i]]));
  }
  const std::size_t n = p.symbols.size();
  p.full.generators = p.reduced.generators = n;
  auto conj_relator = [&](std::size_t i, std::size_t j) {
    Elem x = p.symbols[i], y = p.symbols[j];
    auto k = static_cast<std::size_t>(p.gen_of[g.conj(x, y)]);
    return Word{int(2 * i), int(2 * j), int(2 * i + 1), int(2 * k + 1)};
  };
  auto power_relator = [&](std::size_t i) { return Word(2 * p.M, int(2 * i)); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p.full.relators.push_back(conj_relator(i, j));
  for (std::size_t i = 0; i < n; ++i) p.full.relators.push_back(power_relator(i));

  std::vector<std::size_t> s;
  SubgroupBuilder<FiniteGroup> b(g);
  for (const auto& cls : mp.classes) {
    s.push_back(static_cast<std::size_t>(p.gen_of[cls[0]]));
    b.add(cls[0]);
  }
  for (std::size_t i = 0; i < n; ++i)
    if (b.add(p.symbols[i])) s.push_back(i);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (std::size_t i : s)
    for (std::size_t j = 0; j < n; ++j) p.reduced.relators.push_back(conj_relator(i, j));
  for (const auto& cls : mp.classes) p.reduced.relators.push_back(power_relator(static_cast<std::size_t>(p.gen_of[cls[0]])));
  return p;
}

/// Group given by a complete coset table over the trivial subgroup. Element k is the coset 0*w_k
/// for the BFS-tree word w_k; products replay that word, so cost grows with the tree depth.
class CosetGroup {
 public:
  CosetGroup() = default;
  explicit CosetGroup(CosetTable t) : t_(std::move(t)) {
    parent_.assign(t_.size, -1);
    letter_.assign(t_.size, -1);
    depth_.assign(t_.size, 0);
    for (std::size_t k = 0; k < t_.size; ++k)
      for (std::size_t x = 0; x < t_.columns; ++x) {
        auto v = static_cast<std::size_t>(t_.act(k, static_cast<int>(x)));
        if (v != 0 && parent_[v] < 0 && v > k) {
          parent_[v] = static_cast<std::int32_t>(k);
          letter_[v] = static_cast<std::int16_t>(x);
          depth_[v] = depth_[k] + 1;
        }
      }
    for (std::size_t k = 1; k < t_.size; ++k) ensure(parent_[k] >= 0, "coset table is not in BFS order");
  }

  std::size_t order() const { return t_.size; }
  const CosetTable& table() const { return t_; }
  Elem act(Elem u, int letter) const { return static_cast<Elem>(t_.act(u, letter)); }
  std::int32_t parent(Elem u) const { return parent_[u]; }
  int parent_letter(Elem u) const { return letter_[u]; }
  std::size_t max_depth() const { return t_.size ? *std::max_element(depth_.begin(), depth_.end()) : 0; }

  Word word(Elem u) const {
    Word w(depth_[u]);
    for (std::size_t i = depth_[u]; i-- > 0;) {
      w[i] = letter_[u];
      u = static_cast<Elem>(parent_[u]);
    }
    return w;
  }

  Elem mul(Elem u, Elem v) const {
    thread_local std::vector<int> buf;
    buf.clear();
    while (v != 0) {
      buf.push_back(letter_[v]);
      v = static_cast<Elem>(parent_[v]);
    }
    for (std::size_t i = buf.size(); i-- > 0;) u = static_cast<Elem>(t_.act(u, buf[i]));
    return u;
  }

  Elem inv(Elem u) const {
    Elem r = 0;
    while (u != 0) {
      r = static_cast<Elem>(t_.act(r, inverse_letter(letter_[u])));
      u = static_cast<Elem>(parent_[u]);
    }
    return r;
  }

  Elem pow(Elem u, std::uint64_t k) const { return power(*this, u, k); }

 private:
  CosetTable t_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int16_t> letter_;
  std::vector<std::uint32_t> depth_;
};

struct MarkedOptions {
  std::size_t M = 0;  // 0 selects |G'|
  std::size_t coset_cap = 1'000'000;
  bool use_cache = true;
};

struct MarkedUniversalGroup {
  MarkedPair pair;
  MarkedPresentation pres;
  CosetGroup ubar;
  std::size_t r = 0;
  std::uint64_t modulus = 0;          // 2M
  std::vector<Elem> to_gprime;         // per element of U
  std::vector<std::uint32_t> lattice;  // per element, r coordinates mod 2M
  std::vector<Elem> lifts;             // per generator
  std::vector<Elem> kernel;
  AbelianInvariants kernel_invariants;
  AbelianInvariants gprime_abelianization;
  std::vector<Elem> some_preimage;     // G' element -> first element of U above it
  std::size_t cosets_defined = 0;
  bool from_cache = false;

  Elem lift(Elem g) const {
    auto i = pres.gen_of[g];
    if (i < 0) fail(Errc::NotOverC, "element is not in c");
    return lifts[static_cast<std::size_t>(i)];
  }
  const std::uint32_t* lattice_of(Elem u) const { return lattice.data() + static_cast<std::size_t>(u) * r; }
  std::uint64_t fiber_order() const {
    std::uint64_t f = pair.group.order();
    for (std::size_t i = 0; i < r; ++i) f *= modulus;
    return f / gprime_abelianization.order();
  }
};

namespace detail {

inline std::uint64_t presentation_hash(const Presentation& p) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(p.generators);
  mix(p.relators.size());
  for (const auto& r : p.relators) {
    mix(r.size());
    for (int x : r) mix(static_cast<std::uint64_t>(x));
  }
  return h;
}

inline std::string cache_path(const Presentation& p) {
  const char* dir = std::getenv("NACL_CACHE_DIR");
  if (!dir || !*dir) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(presentation_hash(p)));
  return std::string(dir) + "/ubar-" + buf + ".bin";
}

inline std::optional<CosetTable> load_cached(const Presentation& p) {
  auto path = cache_path(p);
  if (path.empty()) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8] = {};
  in.read(magic, 8);
  if (std::string(magic, 8) != "NACLUB01") return std::nullopt;
  std::uint64_t cols = 0, size = 0;
  in.read(reinterpret_cast<char*>(&cols), 8);
  in.read(reinterpret_cast<char*>(&size), 8);
  if (!in || cols != 2 * p.generators || size == 0 || size > (1ull << 32)) return std::nullopt;
  CosetTable t;
  t.columns = cols;
  t.size = size;
  t.table.resize(cols * size);
  in.read(reinterpret_cast<char*>(t.table.data()), static_cast<std::streamsize>(t.table.size() * 4));
  if (!in) return std::nullopt;
  for (auto v : t.table)
    if (v < 0 || static_cast<std::uint64_t>(v) >= size) return std::nullopt;
  if (!verify_coset_table(t, p)) return std::nullopt;
  return t;
}

inline void store_cached(const Presentation& p, const CosetTable& t) {
  auto path = cache_path(p);
  if (path.empty()) return;
  auto tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) return;
    out.write("NACLUB01", 8);
    std::uint64_t cols = t.columns, size = t.size;
    out.write(reinterpret_cast<const char*>(&cols), 8);
    out.write(reinterpret_cast<const char*>(&size), 8);
    out.write(reinterpret_cast<const char*>(t.table.data()), static_cast<std::streamsize>(t.table.size() * 4));
  }
  std::rename(tmp.c_str(), path.c_str());
}

}  // namespace detail

inline MarkedUniversalGroup todd_coxeter(const MarkedPair& mp, const MarkedOptions& opt = {}) {
  MarkedUniversalGroup e;
  e.pair = mp;
  e.pres = build_presentation(mp, opt.M);
  e.r = e.pres.classes;
  e.modulus = 2 * e.pres.M;
  e.gprime_abelianization = abelianization(mp.group).invariants;
  const auto& g = mp.group;

  std::optional<CosetTable> table;
  if (opt.use_cache) table = detail::load_cached(e.pres.reduced);
  e.from_cache = table.has_value();
  if (!table) {
    // The coset count is known in advance whenever an H2 estimate is not: it is at least the
    // fiber order, so refuse early when even that exceeds the cap.
    std::uint64_t lower = g.order();
    for (std::size_t i = 0; i < e.r; ++i) lower *= e.modulus;
    lower /= e.gprime_abelianization.order();
    if (lower > opt.coset_cap) fail(Errc::CapExceeded, "|U| >= " + std::to_string(lower) + " exceeds coset cap");
    EnumerationOptions eo;
    eo.coset_cap = opt.coset_cap;
    table = enumerate_cosets(e.pres.reduced, eo);
    if (opt.use_cache) detail::store_cached(e.pres.reduced, *table);
  }
  e.cosets_defined = table->total_defined;
  // The table is the regular action of the group presented by the reduced relators, so a word is
  // trivial there exactly when it fixes coset 0; this certifies that the dropped relators hold.
  for (const auto& rel : e.pres.full.relators)
    ensure(table->apply(0, rel) == 0, "reduced presentation misses a relator");
  e.ubar = CosetGroup(std::move(*table));
  const auto& u = e.ubar;
  const std::size_t n = u.order(), gens = e.pres.symbols.size();

  // Images in G' and in the lattice, assigned along the BFS tree and verified on every edge.
  e.to_gprime.assign(n, 0);
  e.lattice.assign(n * e.r, 0);
  for (Elem k = 1; k < n; ++k) {
    Elem par = static_cast<Elem>(u.parent(k));
    int x = u.parent_letter(k);
    std::size_t gi = static_cast<std::size_t>(x / 2);
    Elem s = e.pres.symbols[gi];
    bool inverse = x & 1;
    e.to_gprime[k] = g.mul(e.to_gprime[par], inverse ? g.inv(s) : s);
    for (std::size_t i = 0; i < e.r; ++i) e.lattice[k * e.r + i] = e.lattice[par * e.r + i];
    auto& coord = e.lattice[k * e.r + e.pres.gen_class[gi]];
    coord = static_cast<std::uint32_t>((coord + (inverse ? e.modulus - 1 : 1)) % e.modulus);
  }
  for (Elem k = 0; k < n; ++k)
    for (std::size_t gi = 0; gi < gens; ++gi) {
      Elem v = u.act(k, int(2 * gi));
      ensure(e.to_gprime[v] == g.mul(e.to_gprime[k], e.pres.symbols[gi]), "map to G' is not well defined");
      for (std::size_t i = 0; i < e.r; ++i) {
        std::uint32_t expect = e.lattice[k * e.r + i];
        if (i == e.pres.gen_class[gi]) expect = static_cast<std::uint32_t>((expect + 1) % e.modulus);
        ensure(e.lattice[v * e.r + i] == expect, "map to the lattice is not well defined");
      }
    }
  for (std::size_t gi = 0; gi < gens; ++gi) e.lifts.push_back(u.act(0, int(2 * gi)));
  e.some_preimage.assign(g.order(), UINT32_MAX);
  for (Elem k = 0; k < n; ++k) {
    if (e.some_preimage[e.to_gprime[k]] == UINT32_MAX) e.some_preimage[e.to_gprime[k]] = k;
    bool zero = e.to_gprime[k] == 0;
    for (std::size_t i = 0; i < e.r && zero; ++i) zero = e.lattice[k * e.r + i] == 0;
    if (zero) e.kernel.push_back(k);
  }
  ensure(static_cast<std::uint64_t>(n) == e.fiber_order() * e.kernel.size(), "|U| differs from the fiber-product order");
  for (Elem z : e.kernel)
    for (Elem l : e.lifts) ensure(u.mul(z, l) == u.mul(l, z), "kernel is not central");
  std::vector<std::uint64_t> orders;
  for (Elem z : e.kernel) orders.push_back(element_order(u, z));
  e.kernel_invariants = AbelianInvariants::from_torsion_counts(e.kernel.size(), [&](std::uint64_t m) {
    return static_cast<std::uint64_t>(std::count_if(orders.begin(), orders.end(), [m](auto o) { return m % o == 0; }));
  });
  return e;
}

inline MarkedUniversalGroup todd_coxeter(const AdmissibleType& t, const MarkedOptions& opt = {}) {
  // Refuse before materialising G' when the fiber order alone already passes the cap.
  if (t.good || t.abelianization_of_gprime) {
    double lower = static_cast<double>(t.order()) / (t.abelianization_of_gprime ? t.abelianization_of_gprime->order() : 2);
    for (std::size_t i = 0; i < t.classes; ++i) lower *= 2.0 * static_cast<double>(opt.M ? opt.M : t.order());
    if (lower > static_cast<double>(opt.coset_cap))
      fail(Errc::CapExceeded, "|U| >= " + std::to_string(static_cast<std::uint64_t>(lower)) + " exceeds coset cap");
  }
  return todd_coxeter(static_cast<const MarkedPair&>(materialize(t)), opt);
}

// ---------------------------------------------------------------------------
// Marked elements and the discrete action

struct MarkedElement {
  Elem u = 0;
  std::vector<std::int64_t> nbar;
  friend bool operator==(const MarkedElement&, const MarkedElement&) = default;
};

inline std::uint64_t mod_nonneg(std::int64_t a, std::uint64_t m) {
  auto r = a % static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

inline bool is_consistent(const MarkedUniversalGroup& e, const MarkedElement& x) {
  if (x.nbar.size() != e.r) return false;
  for (std::size_t i = 0; i < e.r; ++i)
    if (e.lattice_of(x.u)[i] != mod_nonneg(x.nbar[i], e.modulus)) return false;
  return true;
}

/// a^-1 mod m; throws NotCoprime when it does not exist.
inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t0 = 0, t1 = 1, r0 = static_cast<std::int64_t>(m), r1 = static_cast<std::int64_t>(a % m);
  while (r1 != 0) {
    std::int64_t k = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - k * r1);
    std::tie(t0, t1) = std::make_pair(t1, t0 - k * t1);
  }
  if (r0 != 1) fail(Errc::NotCoprime, "no inverse modulo " + std::to_string(m));
  return mod_nonneg(t0, m);
}

/// Multiple of every element order in U, used to reduce exponents.
inline std::uint64_t exponent_bound(const MarkedUniversalGroup& e) {
  return e.pair.group.order() * e.modulus * e.kernel.size();
}

/// Conjugate of u lying over the minimal representative of its class (or u itself over 1).
inline Elem z_map(const MarkedUniversalGroup& e, Elem u, bool verify = false) {
  const auto& g = e.pair.group;
  Elem x = e.to_gprime[u];
  if (x == 0) return u;
  auto cls = e.pair.class_of[x];
  if (cls < 0) fail(Errc::NotOverC, "element does not lie over c or the identity");
  Elem rep = e.pair.classes[static_cast<std::size_t>(cls)][0];
  std::optional<Elem> result;
  for (Elem y = 0; y < g.order(); ++y) {
    if (g.conj(y, x) != rep) continue;
    Elem yt = e.some_preimage[y];
    Elem z = e.ubar.mul(e.ubar.mul(yt, u), e.ubar.inv(yt));
    if (!result) {
      result = z;
      if (!verify) break;
    } else {
      ensure(*result == z, "z-map depends on the conjugating element");
    }
  }
  ensure(result.has_value(), "no conjugator found");
  return *result;
}

inline MarkedElement discrete_action(const MarkedUniversalGroup& e, std::int64_t alpha, const MarkedElement& x) {
  const std::uint64_t order = e.pair.group.order();
  if (std::gcd(mod_nonneg(alpha, order), order) != 1) fail(Errc::NotCoprime, "alpha must be coprime to |G'|");
  ensure(is_consistent(e, x), "marked element violates the lattice congruence");
  const auto& u = e.ubar;
  std::uint64_t a = mod_nonneg(alpha, exponent_bound(e));
  Elem res = u.pow(x.u, a);
  std::uint64_t one_minus = mod_nonneg(1 - static_cast<std::int64_t>(a % e.modulus), e.modulus);
  for (std::size_t i = 0; i < e.r; ++i) {
    Elem l = e.lift(e.pair.classes[i][0]);
    std::uint64_t k = one_minus * mod_nonneg(x.nbar[i], e.modulus) % e.modulus;
    res = u.mul(res, u.pow(l, k));
  }
  return {res, x.nbar};
}

struct PbCount {
  std::size_t brute = 0;
  std::uint64_t formula = 0;
};

/// Fixed points of the q^-1 action among the |H2| marked elements over (y, nbar), against |H2[q-1]|.
inline PbCount prop_pb_count(const MarkedUniversalGroup& e, std::uint64_t q, Elem y, const std::vector<std::int64_t>& nbar) {
  const auto& g = e.pair.group;
  if (std::gcd(q, static_cast<std::uint64_t>(g.order())) != 1) fail(Errc::NotCoprime, "q must be coprime to |G'|");
  if (nbar.size() != e.r) fail(Errc::ParityViolation, "nbar has the wrong length");
  std::int64_t k = -1;
  if (y != 0) {
    if (e.pair.class_of[y] < 0) fail(Errc::NotOverC, "y must lie in c or be the identity");
    k = e.pair.class_of[y];
  }
  for (std::size_t i = 0; i < e.r; ++i) {
    bool odd = mod_nonneg(nbar[i], 2) == 1;
    if (odd != (static_cast<std::int64_t>(i) == k)) fail(Errc::ParityViolation, "nbar parity does not match y");
  }
  const auto& u = e.ubar;
  Elem x0 = y == 0 ? 0 : e.lift(y);
  for (std::size_t i = 0; i < e.r; ++i) {
    std::int64_t ex = nbar[i] - (static_cast<std::int64_t>(i) == k ? 1 : 0);
    x0 = u.mul(x0, u.pow(e.lift(e.pair.classes[i][0]), mod_nonneg(ex, e.modulus)));
  }
  MarkedElement base{x0, nbar};
  ensure(is_consistent(e, base) && e.to_gprime[x0] == y, "base marked element is not over (y, nbar)");
  std::int64_t inv = static_cast<std::int64_t>(inverse_mod(q, exponent_bound(e)));
  PbCount out;
  for (Elem z : e.kernel) {
    MarkedElement x{u.mul(x0, z), nbar};
    if (discrete_action(e, inv, x) == x) ++out.brute;
  }
  out.formula = e.kernel_invariants.torsion(q - 1);
  return out;
}

}  // namespace nacl

#pragma once

// Nielsen tuples over c, their braid orbits, and the lifting invariant in the marked group.

#include <map>
#include <optional>
#include <vector>

#include "nacl/marked.hpp"

namespace nacl {

inline constexpr std::uint64_t kDefaultTupleCap = 100'000'000;

struct NielsenTuple {
  std::vector<Elem> entries;
  Elem boundary = 0;
  std::vector<std::int64_t> nbar;
};

/// Multidiscriminant: entries per class of c.
inline std::vector<std::int64_t> multidiscriminant(const MarkedPair& mp, std::span<const Elem> entries) {
  std::vector<std::int64_t> nb(mp.classes.size(), 0);
  for (Elem x : entries) {
    auto k = mp.class_of[x];
    if (k < 0) fail(Errc::NotOverC, "tuple entry outside c");
    ++nb[static_cast<std::size_t>(k)];
  }
  return nb;
}

inline bool satisfies_product(const MarkedPair& mp, const NielsenTuple& t) {
  Elem acc = 0;
  for (Elem x : t.entries) acc = mp.group.mul(acc, x);
  return mp.group.mul(acc, t.boundary) == 0;
}

inline bool generates(const MarkedPair& mp, std::span<const Elem> entries) {
  SubgroupBuilder<FiniteGroup> b(mp.group);
  for (Elem x : entries) {
    b.add(x);
    if (b.size() == mp.group.order()) return true;
  }
  return b.size() == mp.group.order();
}

/// Tuples of length n packed as base-|c| integers, most significant entry first, so the output
/// is sorted.
class TupleCodec {
 public:
  TupleCodec(const MarkedPair& mp, std::size_t n) : mp_(&mp), n_(n) {
    index_.assign(mp.group.order(), -1);
    for (std::size_t i = 0; i < mp.c.size(); ++i) index_[mp.c[i]] = static_cast<std::int64_t>(i);
    long double span = 1;
    for (std::size_t i = 0; i < n; ++i) span *= static_cast<long double>(mp.c.size());
    if (span >= 18446744073709551615.0L) fail(Errc::CapExceeded, "tuples do not fit in 64 bits");
  }

  std::size_t length() const { return n_; }

  std::uint64_t pack(std::span<const Elem> t) const {
    std::uint64_t key = 0;
    for (Elem x : t) key = key * mp_->c.size() + static_cast<std::uint64_t>(index_[x]);
    return key;
  }

  void unpack(std::uint64_t key, std::vector<Elem>& out) const {
    out.resize(n_);
    for (std::size_t i = n_; i-- > 0;) {
      out[i] = mp_->c[key % mp_->c.size()];
      key /= mp_->c.size();
    }
  }

 private:
  const MarkedPair* mp_;
  std::size_t n_;
  std::vector<std::int64_t> index_;
};

/// All (g_1..g_n) in c^n with g_1...g_n * boundary = 1, optionally with a fixed multidiscriminant.
inline std::vector<std::uint64_t> enumerate_tuples(const MarkedPair& mp, std::size_t n, Elem boundary,
                                                   const std::optional<std::vector<std::int64_t>>& nbar = std::nullopt,
                                                   std::uint64_t cap = kDefaultTupleCap) {
  const auto& g = mp.group;
  if (boundary != 0 && mp.class_of[boundary] < 0) fail(Errc::NotOverC, "boundary must be in c or the identity");
  if (nbar && nbar->size() != mp.classes.size()) fail(Errc::InvalidSpec, "nbar has the wrong length");
  TupleCodec codec(mp, n);
  std::vector<std::uint64_t> out;
  if (n == 0) {
    if (boundary == 0 && (!nbar || std::all_of(nbar->begin(), nbar->end(), [](auto v) { return v == 0; }))) out.push_back(0);
    return out;
  }
  std::vector<Elem> cur(n);
  std::vector<Elem> prefix(n + 1, 0);
  std::vector<std::int64_t> remaining = nbar.value_or(std::vector<std::int64_t>{});
  const Elem target = g.inv(boundary);
  std::uint64_t visited = 0;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (++visited > cap) fail(Errc::CapExceeded, "tuple enumeration passed the cap");
    if (i + 1 == n) {
      Elem last = g.mul(g.inv(prefix[i]), target);
      auto k = mp.class_of[last];
      if (k < 0) return;
      if (nbar && remaining[static_cast<std::size_t>(k)] != 1) return;
      cur[i] = last;
      out.push_back(codec.pack(cur));
      return;
    }
    for (Elem x : mp.c) {
      auto k = static_cast<std::size_t>(mp.class_of[x]);
      if (nbar) {
        if (remaining[k] <= 0) continue;
        --remaining[k];
      }
      cur[i] = x;
      prefix[i + 1] = g.mul(prefix[i], x);
      self(self, i + 1);
      if (nbar) ++remaining[k];
    }
  };
  if (nbar) {
    std::int64_t total = 0;
    for (auto v : *nbar) total += v;
    if (total != static_cast<std::int64_t>(n)) return out;
  }
  rec(rec, 0);
  return out;
}

/// sigma_i: (.., a, b, ..) -> (.., a b a^-1, a, ..), positions i, i+1 (0-based).
inline void braid_move(const FiniteGroup& g, std::vector<Elem>& t, std::size_t i, bool inverse = false) {
  Elem a = t[i], b = t[i + 1];
  if (!inverse) {
    t[i] = g.conj(a, b);
    t[i + 1] = a;
  } else {
    t[i] = b;
    t[i + 1] = g.conj(g.inv(b), a);
  }
}

struct OrbitPartition {
  std::vector<std::uint64_t> tuples;        // sorted packed keys
  std::vector<std::uint32_t> orbit_of;      // per tuple
  std::vector<std::uint64_t> representative;  // per orbit, its smallest key
  std::vector<std::size_t> sizes;           // per orbit
};

/// Connected components under all sigma_i^{+-1}; `tuples` must be closed under the moves.
inline OrbitPartition braid_orbits(const MarkedPair& mp, std::size_t n, std::vector<std::uint64_t> tuples) {
  std::sort(tuples.begin(), tuples.end());
  TupleCodec codec(mp, n);
  OrbitPartition out;
  out.orbit_of.assign(tuples.size(), UINT32_MAX);
  std::vector<std::size_t> queue;
  std::vector<Elem> t, moved;
  for (std::size_t start = 0; start < tuples.size(); ++start) {
    if (out.orbit_of[start] != UINT32_MAX) continue;
    auto id = static_cast<std::uint32_t>(out.sizes.size());
    out.orbit_of[start] = id;
    out.representative.push_back(tuples[start]);
    queue.assign(1, start);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      codec.unpack(tuples[queue[h]], t);
      for (std::size_t i = 0; i + 1 < n; ++i)
        for (bool inv : {false, true}) {
          moved = t;
          braid_move(mp.group, moved, i, inv);
          auto key = codec.pack(moved);
          auto it = std::lower_bound(tuples.begin(), tuples.end(), key);
          ensure(it != tuples.end() && *it == key, "tuple set not closed under braid moves");
          auto j = static_cast<std::size_t>(it - tuples.begin());
          if (out.orbit_of[j] == UINT32_MAX) {
            out.orbit_of[j] = id;
            queue.push_back(j);
          }
        }
    }
    out.sizes.push_back(queue.size());
  }
  out.tuples = std::move(tuples);
  return out;
}

/// ([g_1] ... [g_n], nbar).
inline MarkedElement component_invariant(const MarkedUniversalGroup& e, const NielsenTuple& t) {
  Elem u = 0;
  for (Elem x : t.entries) u = e.ubar.mul(u, e.lift(x));
  return {u, multidiscriminant(e.pair, t.entries)};
}

struct StratumReport {
  std::size_t n = 0;
  Elem boundary = 0;
  std::vector<std::int64_t> nbar;
  std::size_t tuple_count = 0;             // all tuples in the stratum
  std::size_t surjective_tuples = 0;
  std::size_t all_orbit_count = 0;         // orbits of all tuples, generating or not
  std::size_t orbit_count = 0;             // orbits of generating tuples
  std::vector<std::size_t> orbit_sizes;
  std::size_t invariant_count = 0;         // distinct invariants over generating tuples
  std::map<Elem, std::size_t> orbits_per_invariant;
  bool invariant_constant_on_orbits = true;  // checked on every tuple, generating or not
  bool stable = false;                     // orbits == invariants
};

inline StratumReport stratum_report(const MarkedUniversalGroup& e, std::size_t n, Elem boundary, const std::vector<std::int64_t>& nbar,
                                    std::uint64_t cap = kDefaultTupleCap) {
  const auto& mp = e.pair;
  StratumReport rep;
  rep.n = n;
  rep.boundary = boundary;
  rep.nbar = nbar;
  auto tuples = enumerate_tuples(mp, n, boundary, nbar, cap);
  rep.tuple_count = tuples.size();
  auto orbits = braid_orbits(mp, n, std::move(tuples));
  TupleCodec codec(mp, n);
  std::vector<Elem> inv_of_orbit(orbits.sizes.size(), UINT32_MAX);
  std::vector<bool> surjective(orbits.sizes.size());
  std::vector<Elem> t;
  for (std::size_t o = 0; o < orbits.sizes.size(); ++o) {
    codec.unpack(orbits.representative[o], t);
    surjective[o] = generates(mp, t);
  }
  for (std::size_t i = 0; i < orbits.tuples.size(); ++i) {
    codec.unpack(orbits.tuples[i], t);
    Elem u = component_invariant(e, {t, boundary, nbar}).u;
    auto o = orbits.orbit_of[i];
    if (inv_of_orbit[o] == UINT32_MAX)
      inv_of_orbit[o] = u;
    else if (inv_of_orbit[o] != u)
      rep.invariant_constant_on_orbits = false;
  }
  for (std::size_t o = 0; o < orbits.sizes.size(); ++o) {
    if (!surjective[o]) continue;
    ++rep.orbit_count;
    rep.surjective_tuples += orbits.sizes[o];
    rep.orbit_sizes.push_back(orbits.sizes[o]);
    ++rep.orbits_per_invariant[inv_of_orbit[o]];
  }
  rep.all_orbit_count = orbits.sizes.size();
  rep.invariant_count = rep.orbits_per_invariant.size();
  rep.stable = rep.orbit_count == rep.invariant_count && rep.orbit_count > 0;
  return rep;
}

struct FrobeniusCount {
  PbCount pb;
  std::size_t realized = 0;        // distinct invariants over generating tuples in the stratum
  std::size_t realized_fixed = 0;  // of those, fixed by the q^-1 action
  bool enumerated = false;
};

/// Fixed components via the discrete action; with a tuple length, also counts fixed invariants
/// actually realised by generating tuples of that stratum.
inline FrobeniusCount frobenius_fixed_components(const MarkedUniversalGroup& e, std::uint64_t q, Elem boundary,
                                                 const std::vector<std::int64_t>& nbar, bool enumerate = false,
                                                 std::uint64_t cap = kDefaultTupleCap) {
  FrobeniusCount out;
  out.pb = prop_pb_count(e, q, boundary, nbar);
  if (!enumerate) return out;
  std::int64_t n = 0;
  for (auto v : nbar) n += v;
  auto rep = stratum_report(e, static_cast<std::size_t>(n), boundary, nbar, cap);
  out.enumerated = true;
  out.realized = rep.invariant_count;
  auto qinv = static_cast<std::int64_t>(inverse_mod(q, exponent_bound(e)));
  for (const auto& [u, cnt] : rep.orbits_per_invariant) {
    MarkedElement x{u, nbar};
    if (discrete_action(e, qinv, x) == x) ++out.realized_fixed;
  }
  return out;
}

}  // namespace nacl

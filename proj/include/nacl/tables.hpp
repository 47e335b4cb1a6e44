#pragma once

// Row-level drivers shared by the command-line tool and the acceptance suite: the type chart, the
// reduced Schur multiplier chart, conjectured averages and P:B checks for one group G.

#include <atomic>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nacl/catalog.hpp"
#include "nacl/cocycle.hpp"
#include "nacl/hurwitz.hpp"
#include "nacl/marked.hpp"
#include "nacl/reference.hpp"

namespace nacl {

struct RunCaps {
  std::size_t order = kDefaultOrderCap;
  std::size_t cosets = 1'000'000;
  std::uint64_t tuples = kDefaultTupleCap;
  std::size_t cocycle = kDefaultCocycleCap;
  unsigned parallel = 1;
};

/// Runs fn(i) for i < n on up to `threads` workers; results keep index order and the first
/// exception by index is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned threads, Fn fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

/// Inverse of AbelianInvariants::to_string for the forms "1", "C2", "C3^2", "C2 x C4".
inline AbelianInvariants parse_invariants(const std::string& s) {
  if (s == "1") return {};
  std::vector<std::uint64_t> orders;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto end = s.find(" x ", pos);
    std::string part = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    if (part.size() < 2 || part[0] != 'C') fail(Errc::InvalidSpec, "bad invariant '" + part + "'");
    auto caret = part.find('^');
    std::uint64_t n = std::stoull(part.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
    std::size_t reps = caret == std::string::npos ? 1 : std::stoull(part.substr(caret + 1));
    for (std::size_t i = 0; i < reps; ++i) orders.push_back(n);
    if (end == std::string::npos) break;
    pos = end + 3;
  }
  return AbelianInvariants::from_cyclic(orders);
}

struct TypeEntry {
  std::string g_spec;
  std::string g_name;
  std::size_t g_order = 0;
  std::string label;
  AdmissibleType type;
};

/// Admissible types of G, one per (isomorphism class, |c/G'|), sorted by (|G'|, label).
inline std::vector<TypeEntry> type_entries(const std::string& spec, const RunCaps& caps = {}) {
  auto g = parse_group(spec, caps.order);
  auto opt = reference::naming_options();
  opt.order_cap = caps.order;
  auto types = enumerate_admissible(g, opt);
  std::vector<TypeEntry> out;
  for (auto& t : types) {
    auto label = reference::type_label(t, spec);
    bool dup = false;
    for (const auto& o : out) dup = dup || (o.label == label && o.type.classes == t.classes);
    if (dup) continue;
    out.push_back({spec, reference::group_display_name(spec), g.order(), std::move(label), std::move(t)});
  }
  std::stable_sort(out.begin(), out.end(), [](const TypeEntry& a, const TypeEntry& b) {
    if (a.type.order() != b.type.order()) return a.type.order() < b.type.order();
    return a.label < b.label;
  });
  return out;
}

struct H2Entry {
  std::string label;
  std::size_t order = 0;
  AbelianInvariants h2;
  std::size_t center = 0;
  std::string method;  // coset, cocycle or recorded
  std::optional<AbelianInvariants> coset, cocycle;
  std::optional<std::size_t> ubar_order;
  bool routes_agree = true;
};

/// H2(G', c) for a good type: the coset route, the cocycle route when |G'| is within the cocycle
/// cap, and the recorded chart value when both routes are out of reach.
inline H2Entry h2_entry(const TypeEntry& te, const RunCaps& caps = {}, bool with_cocycle = true) {
  if (!te.type.good) fail(Errc::NotGood, "H2(G', c) charted for good types only");
  H2Entry h;
  h.label = te.label;
  h.order = te.type.order();
  try {
    MarkedOptions mo;
    mo.coset_cap = caps.cosets;
    auto e = todd_coxeter(te.type, mo);
    h.coset = e.kernel_invariants;
    h.ubar_order = e.ubar.order();
    h.center = center(e.pair.group).size();
    h.h2 = *h.coset;
    h.method = "coset";
  } catch (const Error& err) {
    if (err.code() != Errc::CapExceeded) throw;
  }
  if (with_cocycle && h.order <= caps.cocycle) {
    auto m = materialize(te.type);
    h.cocycle = reduced_schur(m.group, m.c, caps.cocycle);
    if (!h.coset) {
      h.h2 = *h.cocycle;
      h.center = center(m.group).size();
      h.method = "cocycle";
    }
  }
  if (h.coset && h.cocycle) h.routes_agree = *h.coset == *h.cocycle;
  if (h.method.empty()) {
    for (const auto& r : reference::h2_chart())
      if (te.g_spec == r.g_spec && te.label == r.gprime) {
        h.h2 = parse_invariants(r.h2);
        h.center = r.center;
        h.method = "recorded";
      }
    if (h.method.empty()) fail(Errc::CapExceeded, "type " + te.label + " is beyond the caps and has no recorded value");
  }
  return h;
}

struct PredictEntry {
  std::string label;
  std::size_t order = 0;
  std::size_t classes = 0;
  bool good = false;
  ConjecturePrediction prediction;
  GrowthRate growth;
  std::size_t aut_fixing_orbit = 0;  // from the orbit-stabilizer count
  std::size_t aut_fixing_brute = 0;  // direct check over Aut(G)
  std::optional<H2Entry> h2;
};

inline PredictEntry predict_entry(const TypeEntry& te, const RunCaps& caps = {}) {
  PredictEntry p;
  p.label = te.label;
  p.order = te.type.order();
  p.classes = te.type.classes;
  p.good = te.type.good;
  p.growth = mb_growth(te.type);
  p.aut_fixing_orbit = te.type.aut_fixing_order;
  p.aut_fixing_brute = aut_fixing(te.type);
  if (p.good) {
    p.h2 = h2_entry(te, caps, false);
    p.prediction = conjectured_averages(te.type, p.h2->h2);
  } else {
    p.prediction = conjectured_averages(te.type, {});
  }
  return p;
}

struct PbEntry {
  std::string label;
  std::uint64_t q = 0;
  Elem boundary = 0;
  std::string regime;  // "even": trivial boundary, "odd": boundary in class k
  std::vector<std::int64_t> nbar;
  PbCount count;
  bool ok() const { return count.brute == count.formula; }
};

/// Every q coprime to |G'|, the trivial boundary and each class of c as boundary.
inline std::vector<PbEntry> pb_entries(const MarkedUniversalGroup& e, const std::string& label, const std::vector<std::uint64_t>& qs) {
  std::vector<PbEntry> out;
  const auto order = static_cast<std::uint64_t>(e.pair.group.order());
  for (auto q : qs) {
    if (std::gcd(q, order) != 1) continue;
    for (std::int64_t k = -1; k < static_cast<std::int64_t>(e.r); ++k) {
      PbEntry pe;
      pe.label = label;
      pe.q = q;
      pe.nbar.assign(e.r, 2);
      if (k >= 0) {
        pe.boundary = e.pair.classes[static_cast<std::size_t>(k)][0];
        pe.nbar[static_cast<std::size_t>(k)] = 3;
        pe.regime = "odd";
      } else {
        pe.regime = "even";
      }
      pe.count = prop_pb_count(e, q, pe.boundary, pe.nbar);
      out.push_back(std::move(pe));
    }
  }
  return out;
}

}  // namespace nacl

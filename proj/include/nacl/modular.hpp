#pragma once

// Dense linear algebra over the local ring Z/p^e.

#include <cstdint>
#include <utility>
#include <vector>

#include "nacl/abelian.hpp"

namespace nacl {

class LocalRing {
 public:
  LocalRing(std::uint64_t p, int e) : p_(p), e_(e), q_(ipow(p, e)) {
    ensure(e >= 1 && q_ < (1ull << 31), "modulus out of range");
  }

  std::uint64_t p() const { return p_; }
  int e() const { return e_; }
  std::uint64_t modulus() const { return q_; }

  std::uint64_t reduce(std::int64_t a) const {
    auto r = a % static_cast<std::int64_t>(q_);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(q_) : r);
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % q_; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + q_ - b) % q_; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % q_; }
  std::uint64_t neg(std::uint64_t a) const { return a ? q_ - a : 0; }

  /// p-adic valuation, e for zero.
  int val(std::uint64_t a) const {
    if (a == 0) return e_;
    int v = 0;
    while (a % p_ == 0) {
      a /= p_;
      ++v;
    }
    return v;
  }

  std::uint64_t unit_inverse(std::uint64_t u) const {
    std::int64_t t0 = 0, t1 = 1, r0 = static_cast<std::int64_t>(q_), r1 = static_cast<std::int64_t>(u % q_);
    while (r1) {
      std::int64_t k = r0 / r1;
      std::tie(r0, r1) = std::make_pair(r1, r0 - k * r1);
      std::tie(t0, t1) = std::make_pair(t1, t0 - k * t1);
    }
    ensure(r0 == 1, "not a unit");
    return reduce(t0);
  }

  /// a / b for val(a) >= val(b): any x with b x = a.
  std::uint64_t divide(std::uint64_t a, std::uint64_t b) const {
    int vb = val(b);
    ensure(vb < e_ && val(a) >= vb, "inexact division");
    std::uint64_t pk = ipow(p_, vb);
    return mul(a / pk, unit_inverse(b / pk));
  }

 private:
  std::uint64_t p_;
  int e_;
  std::uint64_t q_;
};

struct ModMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint64_t> a;

  ModMatrix() = default;
  ModMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  static ModMatrix identity(std::size_t n) {
    ModMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::uint64_t& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  std::uint64_t operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  std::uint64_t* row(std::size_t i) { return a.data() + i * cols; }
  const std::uint64_t* row(std::size_t i) const { return a.data() + i * cols; }

  void append_row(const std::vector<std::uint64_t>& r) {
    ensure(r.size() == cols, "row length mismatch");
    a.insert(a.end(), r.begin(), r.end());
    ++rows;
  }
};

/// Smith form D = U A W with the column transform W and its inverse. U is not kept.
struct SmithForm {
  std::vector<int> valuations;  // per column of A; e where the diagonal is zero or absent
  ModMatrix w, w_inv;
};

inline SmithForm smith_form(ModMatrix m, const LocalRing& r) {
  const std::size_t nr = m.rows, nc = m.cols;
  const std::uint64_t q = r.modulus();
  SmithForm out;
  out.w = ModMatrix::identity(nc);
  out.w_inv = ModMatrix::identity(nc);
  out.valuations.assign(nc, r.e());
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < nr; ++k) std::swap(m(k, i), m(k, j));
    for (std::size_t k = 0; k < nc; ++k) std::swap(out.w(k, i), out.w(k, j));
    for (std::size_t k = 0; k < nc; ++k) std::swap(out.w_inv(i, k), out.w_inv(j, k));
  };
  for (std::size_t t = 0; t < std::min(nr, nc); ++t) {
    // Pivot of least valuation; a unit ends the search at once.
    int best = r.e();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < nr && best > 0; ++i) {
      const auto* ri = m.row(i);
      for (std::size_t j = t; j < nc; ++j) {
        if (!ri[j]) continue;
        int v = r.val(ri[j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    }
    if (best == r.e()) break;
    if (bi != t)
      for (std::size_t j = 0; j < nc; ++j) std::swap(m(bi, j), m(t, j));
    swap_cols(bj, t);
    const std::uint64_t pk = ipow(r.p(), best);
    std::uint64_t uinv = r.unit_inverse(m(t, t) / pk);
    auto* rt = m.row(t);
    for (std::size_t j = t; j < nc; ++j) rt[j] = r.mul(rt[j], uinv);
    for (std::size_t i = t + 1; i < nr; ++i) {
      auto* ri = m.row(i);
      if (!ri[t]) continue;
      std::uint64_t f = q - (ri[t] / pk) % q;
      for (std::size_t j = t; j < nc; ++j)
        if (rt[j]) ri[j] = (ri[j] + f * rt[j]) % q;
    }
    // Column clearing: col_j -= g col_t, so W picks up the same and W^-1 the inverse row step.
    for (std::size_t j = t + 1; j < nc; ++j) {
      if (!rt[j]) continue;
      std::uint64_t g = (rt[j] / pk) % q;
      rt[j] = 0;
      for (std::size_t k = 0; k < nc; ++k) {
        out.w(k, j) = (out.w(k, j) + (q - g) * out.w(k, t)) % q;
      }
      auto* it = out.w_inv.row(t);
      const auto* ij = out.w_inv.row(j);
      for (std::size_t k = 0; k < nc; ++k) it[k] = (it[k] + g * ij[k]) % q;
    }
    out.valuations[t] = best;
  }
  return out;
}

/// Module generated by vectors in (Z/p^e)^n, in the form {p^{v_i} w_i}: ordered generators and
/// their orders, from the Smith form of the matrix whose rows are the vectors.
struct KernelBasis {
  std::vector<std::vector<std::uint64_t>> generators;
  std::vector<int> log_orders;  // generator i has order p^{log_orders[i]}
  std::vector<std::size_t> column;  // Smith column each generator came from
  ModMatrix coords;                 // W^-1: ambient vector -> Smith coordinates
};

/// Kernel of x -> A x for A given by rows.
inline KernelBasis kernel_of(const ModMatrix& a, const LocalRing& r) {
  auto sf = smith_form(a, r);
  KernelBasis k;
  for (std::size_t i = 0; i < a.cols; ++i) {
    int v = sf.valuations[i];
    if (v == 0) continue;
    std::uint64_t scale = ipow(r.p(), r.e() - v);
    std::vector<std::uint64_t> g(a.cols);
    for (std::size_t j = 0; j < a.cols; ++j) g[j] = r.mul(sf.w(j, i), scale);
    k.generators.push_back(std::move(g));
    k.log_orders.push_back(v);
    k.column.push_back(i);
  }
  k.coords = std::move(sf.w_inv);
  return k;
}

/// Rows spanning the same module as the rows of `a`, at most `a.cols` of them.
inline ModMatrix compress_rows(const ModMatrix& a, const LocalRing& r) {
  auto sf = smith_form(a, r);
  ModMatrix out(0, a.cols);
  for (std::size_t i = 0; i < a.cols; ++i) {
    int v = sf.valuations[i];
    if (v == r.e()) continue;
    std::uint64_t pk = ipow(r.p(), v);
    std::vector<std::uint64_t> row(a.cols);
    for (std::size_t j = 0; j < a.cols; ++j) row[j] = r.mul(sf.w_inv(i, j), pk);
    out.append_row(row);
  }
  return out;
}

/// Quotient of the module spanned by `gens` (orders p^{log_orders}) by the submodule spanned by
/// `relations`, each given in the ambient (Z/p^e)^n and lying in the span of `gens`.
struct QuotientModule {
  AbelianInvariants invariants;
  std::vector<std::vector<std::uint64_t>> generators;  // ambient vectors, one per cyclic factor
};

inline QuotientModule quotient_module(const KernelBasis& k, const std::vector<std::vector<std::uint64_t>>& relations,
                                      const LocalRing& r) {
  // With v = W y, generator i is p^{e - log_orders[i]} times column i of W, so its coefficient
  // in v is y_i / p^{e - log_orders[i]}.
  const std::size_t m = k.generators.size();
  const std::size_t n = k.coords.cols;
  ModMatrix rel(0, m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::uint64_t> row(m, 0);
    row[i] = ipow(r.p(), k.log_orders[i]) % r.modulus();
    rel.append_row(row);
  }
  for (const auto& v : relations) {
    std::vector<std::uint64_t> row(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t y = 0;
      const auto* ci = k.coords.row(k.column[i]);
      for (std::size_t j = 0; j < n; ++j) y = (y + ci[j] * v[j]) % r.modulus();
      std::uint64_t scale = ipow(r.p(), r.e() - k.log_orders[i]);
      ensure(y % scale == 0, "relation outside the generated module");
      row[i] = y / scale;
    }
    rel.append_row(row);
  }
  auto sf = smith_form(rel, r);
  QuotientModule out;
  std::vector<std::uint64_t> orders;
  for (std::size_t j = 0; j < m; ++j) {
    int v = sf.valuations[j];
    if (v == 0) continue;
    orders.push_back(ipow(r.p(), v));
    // New generator j is sum_i (W^-1)_{j i} g_i.
    std::vector<std::uint64_t> g(n, 0);
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t c = sf.w_inv(j, i);
      if (!c) continue;
      for (std::size_t t = 0; t < n; ++t) g[t] = (g[t] + c * k.generators[i][t]) % r.modulus();
    }
    out.generators.push_back(std::move(g));
  }
  out.invariants = AbelianInvariants::from_cyclic(orders);
  return out;
}

}  // namespace nacl

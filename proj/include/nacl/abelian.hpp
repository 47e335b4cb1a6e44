#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "nacl/error.hpp"

namespace nacl {

/// Prime factorisation by trial division, as (prime, exponent) pairs in increasing order.
inline std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline int valuation(std::uint64_t n, std::uint64_t p) {
  if (n == 0) return 64;
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

/// A finite abelian group in primary form: a sorted multiset of prime powers.
class AbelianInvariants {
 public:
  AbelianInvariants() = default;

  /// Builds from arbitrary cyclic orders (e.g. {6, 4}); factors of 1 are dropped.
  static AbelianInvariants from_cyclic(const std::vector<std::uint64_t>& orders) {
    AbelianInvariants a;
    for (auto n : orders) {
      for (auto [p, e] : factorize(n)) a.factors_.push_back(ipow(p, e));
    }
    a.normalize();
    return a;
  }

  /// Recovers the group from torsion counts: `torsion(m)` must return |A[m]| for prime powers m
  /// dividing `order`.
  static AbelianInvariants from_torsion_counts(std::uint64_t order,
                                               const std::function<std::uint64_t(std::uint64_t)>& torsion) {
    AbelianInvariants a;
    for (auto [p, e] : factorize(order)) {
      // |A[p^k]| / |A[p^{k-1}]| = p^{#factors of order >= p^k}
      std::vector<int> at_least(e + 2, 0);
      std::uint64_t prev = 1;
      for (int k = 1; k <= e; ++k) {
        std::uint64_t cur = torsion(ipow(p, k));
        ensure(cur % prev == 0, "torsion counts not nested");
        std::uint64_t ratio = cur / prev;
        int cnt = 0;
        while (ratio > 1) {
          ensure(ratio % p == 0, "torsion ratio not a prime power");
          ratio /= p;
          ++cnt;
        }
        at_least[k] = cnt;
        prev = cur;
      }
      for (int k = 1; k <= e; ++k) {
        int exactly = at_least[k] - at_least[k + 1];
        for (int i = 0; i < exactly; ++i) a.factors_.push_back(ipow(p, k));
      }
    }
    a.normalize();
    ensure(a.order() == order, "torsion counts inconsistent with order");
    return a;
  }

  const std::vector<std::uint64_t>& prime_power_factors() const { return factors_; }

  std::uint64_t order() const {
    std::uint64_t r = 1;
    for (auto f : factors_) r *= f;
    return r;
  }

  bool trivial() const { return factors_.empty(); }

  /// |A[m]|, the number of elements killed by m.
  std::uint64_t torsion(std::uint64_t m) const {
    std::uint64_t r = 1;
    for (auto f : factors_) r *= std::gcd(f, m);
    return r;
  }

  std::uint64_t exponent() const {
    std::uint64_t r = 1;
    for (auto f : factors_) r = std::lcm(r, f);
    return r;
  }

  /// The p-primary part.
  AbelianInvariants primary(std::uint64_t p) const {
    AbelianInvariants a;
    for (auto f : factors_)
      if (f % p == 0) a.factors_.push_back(f);
    return a;
  }

  AbelianInvariants direct_sum(const AbelianInvariants& other) const {
    AbelianInvariants a = *this;
    a.factors_.insert(a.factors_.end(), other.factors_.begin(), other.factors_.end());
    a.normalize();
    return a;
  }

  /// Multiset difference; throws SubtractionMismatch unless `sub` is a sub-multiset.
  AbelianInvariants minus(const AbelianInvariants& sub) const {
    std::vector<std::uint64_t> rest = factors_;
    for (auto f : sub.factors_) {
      auto it = std::find(rest.begin(), rest.end(), f);
      if (it == rest.end())
        fail(Errc::SubtractionMismatch, "factor " + std::to_string(f) + " missing from " + to_string());
      rest.erase(it);
    }
    AbelianInvariants a;
    a.factors_ = std::move(rest);
    return a;
  }

  /// Invariant factors d_1 | d_2 | ... (largest last).
  std::vector<std::uint64_t> invariant_factors() const {
    std::map<std::uint64_t, std::vector<std::uint64_t>> by_prime;
    for (auto f : factors_) by_prime[factorize(f).front().first].push_back(f);
    std::size_t len = 0;
    for (auto& [p, v] : by_prime) {
      std::sort(v.rbegin(), v.rend());
      len = std::max(len, v.size());
    }
    std::vector<std::uint64_t> out(len, 1);
    for (auto& [p, v] : by_prime)
      for (std::size_t i = 0; i < v.size(); ++i) out[len - 1 - i] *= v[i];
    return out;
  }

  /// "1", "C2", "C3^2", "C2 x C4".
  std::string to_string() const {
    if (factors_.empty()) return "1";
    std::string s;
    std::size_t i = 0;
    while (i < factors_.size()) {
      std::size_t j = i;
      while (j < factors_.size() && factors_[j] == factors_[i]) ++j;
      if (!s.empty()) s += " x ";
      s += "C" + std::to_string(factors_[i]);
      if (j - i > 1) s += "^" + std::to_string(j - i);
      i = j;
    }
    return s;
  }

  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;

 private:
  void normalize() {
    factors_.erase(std::remove(factors_.begin(), factors_.end(), 1u), factors_.end());
    std::sort(factors_.begin(), factors_.end());
  }

  std::vector<std::uint64_t> factors_;
};

/// Exterior square of a finite abelian group: sum over pairs i<j of Z/gcd(n_i, n_j).
inline AbelianInvariants exterior_square(const AbelianInvariants& a) {
  const auto& f = a.prime_power_factors();
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) out.push_back(std::gcd(f[i], f[j]));
  return AbelianInvariants::from_cyclic(out);
}

/// Ext(A, Z/p^e) = sum over cyclic factors Z/a of Z/p^{min(v_p(a), e)}.
inline AbelianInvariants ext_with_prime_power(const AbelianInvariants& a, std::uint64_t p, int e) {
  std::vector<std::uint64_t> out;
  for (auto f : a.prime_power_factors()) {
    int v = valuation(f, p);
    if (v > 0) out.push_back(ipow(p, std::min(v, e)));
  }
  return AbelianInvariants::from_cyclic(out);
}

}  // namespace nacl

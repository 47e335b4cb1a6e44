#pragma once

// Exact Dirichlet coefficients of Euler products and of the character-averaged series counting
// C2^{k+1} extensions, plus the log-power growth fit.

#include <cmath>
#include <functional>
#include <vector>

#include "nacl/abelian.hpp"
#include "nacl/error.hpp"

namespace nacl {

inline constexpr std::uint64_t kMaxDirichletX = 100'000'000;

/// Local factor 1 + sum_j coeffs[j-1] p^{-js} at the prime p.
using LocalFactorRule = std::function<std::vector<std::int64_t>(std::uint64_t p)>;

struct DirichletCoeffs {
  std::uint64_t X = 0;
  std::vector<std::int64_t> a;  // a[0] unused, a[n] for 1 <= n <= X

  std::int64_t operator[](std::uint64_t n) const { return a[n]; }

  /// Running sums S(n) = a_1 + ... + a_n.
  std::vector<double> partial_sums() const {
    std::vector<double> s(a.size(), 0.0);
    long double acc = 0;
    for (std::size_t n = 1; n < a.size(); ++n) {
      acc += static_cast<long double>(a[n]);
      s[n] = static_cast<double>(acc);
    }
    return s;
  }
};

inline std::vector<std::uint32_t> primes_up_to(std::uint64_t x) {
  std::vector<bool> composite(x + 1, false);
  std::vector<std::uint32_t> ps;
  for (std::uint64_t i = 2; i <= x; ++i) {
    if (composite[i]) continue;
    ps.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= x; j += i) composite[j] = true;
  }
  return ps;
}

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(Errc::InvariantViolation, "coefficient overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(Errc::InvariantViolation, "coefficient overflow");
  return r;
}

}  // namespace detail

/// Multiplies the local factors into the coefficient array one prime at a time. Indices are
/// walked downwards so each update reads coefficients not yet touched by this prime.
inline DirichletCoeffs euler_coeffs(const LocalFactorRule& rule, std::uint64_t X) {
  if (X > kMaxDirichletX) fail(Errc::CapExceeded, "X exceeds " + std::to_string(kMaxDirichletX));
  DirichletCoeffs d;
  d.X = X;
  d.a.assign(X + 1, 0);
  if (X >= 1) d.a[1] = 1;
  for (std::uint64_t p : primes_up_to(X)) {
    auto c = rule(p);
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) continue;
    for (std::uint64_t n = X / p; n >= 1; --n) {
      std::int64_t base = d.a[n];
      if (base == 0) continue;
      std::uint64_t m = n;
      for (std::int64_t cj : c) {
        if (m > X / p) break;
        m *= p;
        if (cj) d.a[m] = detail::checked_add(d.a[m], detail::checked_mul(cj, base));
      }
    }
  }
  return d;
}

/// Malle-Bhargava model: 1 + N p^{-s} at primes not dividing |G'|.
inline DirichletCoeffs mb_series(std::uint64_t classes, std::uint64_t gprime_order, std::uint64_t X) {
  return euler_coeffs(
      [&](std::uint64_t p) -> std::vector<std::int64_t> {
        if (gprime_order % p == 0) return {};
        return {static_cast<std::int64_t>(classes)};
      },
      X);
}

enum class InfinityRegime {
  Real,       // -1 maps to the identity: all places real
  Imaginary,  // -1 maps to an element nontrivial in the last factor
};

/// Coefficients counting homomorphisms to C2^{k+1} whose inertia at odd primes meets C2^k x 1
/// trivially, indexed by the odd part of the discriminant of the last quadratic factor. The
/// infinity condition is imposed by averaging over characters chi of C2^{k+1} evaluated on the
/// image of -1; per odd prime the twisted local factor is 1 + 2^k p^{-s} when chi = 1 or
/// p = 1 mod 4, 1 - 2^k p^{-s} when ker chi = C2^k x 1, and 1 otherwise.
inline DirichletCoeffs f_k_coeffs(int k, std::uint64_t X, InfinityRegime regime = InfinityRegime::Real) {
  if (k < 1 || k > 4) fail(Errc::InvalidSpec, "k must be between 1 and 4");
  const std::int64_t two_k = std::int64_t{1} << k;
  const std::int64_t characters = two_k * 2;
  auto trivial = [&](std::uint64_t p) -> std::vector<std::int64_t> {
    if (p == 2) return {};
    return {two_k};
  };
  auto last = [&](std::uint64_t p) -> std::vector<std::int64_t> {
    if (p == 2) return {};
    return {p % 4 == 1 ? two_k : -two_k};
  };
  auto other = [&](std::uint64_t p) -> std::vector<std::int64_t> {
    if (p == 2 || p % 4 == 3) return {};
    return {two_k};
  };
  DirichletCoeffs out = euler_coeffs(trivial, X);
  {
    auto b = euler_coeffs(last, X);
    for (std::uint64_t n = 1; n <= X; ++n)
      out.a[n] = regime == InfinityRegime::Real ? out.a[n] + b.a[n] : out.a[n] - b.a[n];
  }
  std::int64_t divisor = 2;
  if (regime == InfinityRegime::Real) {
    auto c = euler_coeffs(other, X);
    for (std::uint64_t n = 1; n <= X; ++n) out.a[n] = detail::checked_add(out.a[n], detail::checked_mul(characters - 2, c.a[n]));
    divisor = characters;
  }
  for (std::uint64_t n = 1; n <= X; ++n) {
    if (out.a[n] % divisor != 0) fail(Errc::NonIntegralAverage, "character average not integral at n = " + std::to_string(n));
    out.a[n] /= divisor;
    if (out.a[n] < 0) fail(Errc::NonIntegralAverage, "negative count at n = " + std::to_string(n));
  }
  return out;
}

struct CheckpointRow {
  std::uint64_t x = 0;
  double partial_sum = 0;
};

struct LogPowerFit {
  double beta = 0;
  double intercept = 0;
  double residual = 0;  // root mean square of the regression residuals
  std::vector<CheckpointRow> checkpoints;  // the points used
};

/// Least-squares slope of log(S(x)/x) against log log x over the dyadic checkpoints 2^j lying in
/// the top half, on a log scale, of [10^3, X].
inline LogPowerFit logpow_fit(const DirichletCoeffs& d) {
  if (d.X < 10'000) fail(Errc::InsufficientRange, "fit needs X >= 10^4");
  auto s = d.partial_sums();
  const double lo = std::log(1000.0), hi = std::log(static_cast<double>(d.X));
  const double mid = (lo + hi) / 2;
  LogPowerFit fit;
  std::vector<double> xs, ys;
  for (std::uint64_t x = 2; x <= d.X; x *= 2) {
    if (std::log(static_cast<double>(x)) < mid) continue;
    if (s[x] <= 0) continue;
    fit.checkpoints.push_back({x, s[x]});
    xs.push_back(std::log(std::log(static_cast<double>(x))));
    ys.push_back(std::log(s[x] / static_cast<double>(x)));
  }
  if (xs.size() < 3) fail(Errc::InsufficientRange, "fewer than three checkpoints");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  fit.beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.beta * sx) / n;
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - fit.intercept - fit.beta * xs[i];
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

/// Fundamental discriminant test for D != 0, 1.
inline bool is_fundamental_discriminant(std::int64_t D) {
  auto squarefree = [](std::uint64_t m) {
    for (std::uint64_t p = 2; p * p <= m; ++p)
      if (m % (p * p) == 0) return false;
    return true;
  };
  if (D == 0 || D == 1) return false;
  std::int64_t r = ((D % 4) + 4) % 4;
  if (r == 1) return squarefree(static_cast<std::uint64_t>(D < 0 ? -D : D));
  if (r != 0) return false;
  std::int64_t m = D / 4;
  std::int64_t rm = ((m % 4) + 4) % 4;
  return (rm == 2 || rm == 3) && squarefree(static_cast<std::uint64_t>(m < 0 ? -m : m));
}

/// g[n] for -n a fundamental discriminant: unordered factorisations -n = D1 D2 into coprime
/// fundamental discriminants other than 1, which number 2^{t-1} - 1 for t prime discriminant
/// factors. Entries for other n are 0; `fundamental[n]` marks the valid ones.
struct GenusCounts {
  std::vector<std::int64_t> g;
  std::vector<bool> fundamental;
};

inline GenusCounts genus_oracle_k1(std::uint64_t X) {
  if (X > 10'000'000) fail(Errc::CapExceeded, "genus oracle limited to X <= 10^7");
  std::vector<std::uint8_t> omega(X + 1, 0);
  std::vector<bool> square_free(X + 1, true);
  for (std::uint64_t p : primes_up_to(X)) {
    for (std::uint64_t m = p; m <= X; m += p) ++omega[m];
    if (p * p <= X)
      for (std::uint64_t m = p * p; m <= X; m += p * p) square_free[m] = false;
  }
  GenusCounts out;
  out.g.assign(X + 1, 0);
  out.fundamental.assign(X + 1, false);
  for (std::uint64_t n = 3; n <= X; ++n) {
    bool fund = false;
    if (n % 4 == 3)
      fund = square_free[n];
    else if (n % 4 == 0) {
      std::uint64_t m = n / 4;
      fund = (m % 4 == 1 || m % 4 == 2) && square_free[m];
    }
    if (!fund) continue;
    out.fundamental[n] = true;
    out.g[n] = (std::int64_t{1} << (omega[n] - 1)) - 1;
  }
  return out;
}

}  // namespace nacl

#pragma once

// Named group constructors and the textual group-literal parser.

#include <cctype>
#include <string>
#include <vector>

#include "nacl/group.hpp"

namespace nacl {

/// Builds a table group from a multiplication rule on 0..n-1 (0 must be the identity).
template <class Mul>
FiniteGroup group_from_function(std::size_t n, Mul&& mul) {
  if (n > 65535) fail(Errc::CapExceeded, "group too large for a Cayley table");
  std::vector<std::uint16_t> table(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) table[x * n + y] = static_cast<std::uint16_t>(mul(Elem(x), Elem(y)));
  return FiniteGroup::from_table(n, std::move(table));
}

inline FiniteGroup trivial_group() { return FiniteGroup::from_table(1, {0}); }

inline FiniteGroup cyclic_group(std::size_t n) {
  if (n == 0) fail(Errc::InvalidSpec, "cyclic group needs n >= 1");
  if (n == 1) return trivial_group();
  return group_from_function(n, [n](Elem a, Elem b) { return static_cast<Elem>((a + b) % n); });
}

/// Dihedral group of order `order` (so dihedral_group(8) = D8).
inline FiniteGroup dihedral_group(std::size_t order) {
  if (order < 2 || order % 2) fail(Errc::InvalidSpec, "dihedral order must be even and >= 2");
  const std::size_t m = order / 2;
  // r^i s^j encoded as j*m + i; s r s = r^-1.
  return group_from_function(order, [m](Elem x, Elem y) {
    std::size_t i = x % m, j = x / m, k = y % m, l = y / m;
    std::size_t rot = j == 0 ? (i + k) % m : (i + m - k) % m;
    return static_cast<Elem>(((j + l) % 2) * m + rot);
  });
}

/// Dicyclic group of order 4m: a^{2m} = 1, x^2 = a^m, x a x^-1 = a^-1. Q8 is dicyclic_group(8).
inline FiniteGroup dicyclic_group(std::size_t order) {
  if (order < 4 || order % 4) fail(Errc::InvalidSpec, "dicyclic order must be a multiple of 4");
  const std::size_t n = order / 2, m = order / 4;
  return group_from_function(order, [n, m](Elem x, Elem y) {
    std::size_t i = x % n, j = x / n, k = y % n, l = y / n;
    if (j == 0) return static_cast<Elem>(l * n + (i + k) % n);
    if (l == 0) return static_cast<Elem>(n + (i + n - k) % n);
    return static_cast<Elem>((i + n - k + m) % n);
  });
}

inline FiniteGroup symmetric_group(std::size_t d) {
  if (d == 0) fail(Errc::InvalidSpec, "sym needs degree >= 1");
  if (d == 1) return trivial_group();
  Permutation t(d), c(d);
  std::iota(t.begin(), t.end(), 0);
  std::swap(t[0], t[1]);
  for (std::size_t i = 0; i < d; ++i) c[i] = static_cast<std::uint16_t>((i + 1) % d);
  return from_permutations({t, c});
}

inline FiniteGroup alternating_group(std::size_t d) {
  if (d == 0) fail(Errc::InvalidSpec, "alt needs degree >= 1");
  if (d < 3) return trivial_group();
  std::vector<Permutation> gens;
  for (std::size_t k = 2; k < d; ++k) {
    Permutation p(d);
    std::iota(p.begin(), p.end(), 0);
    p[0] = 1;
    p[1] = static_cast<std::uint16_t>(k);
    p[k] = 0;
    gens.push_back(p);
  }
  return from_permutations(gens);
}

inline FiniteGroup elementary_abelian(std::size_t p, int k) {
  FiniteGroup g = trivial_group();
  for (int i = 0; i < k; ++i) g = direct_product(g, cyclic_group(p));
  return g;
}

/// Semidirect product N x| H with H acting through `act(h)` (an automorphism of N); element
/// (n, h) is encoded as n*|H| + h.
inline FiniteGroup semidirect_product(const FiniteGroup& n, const FiniteGroup& h,
                                      const std::function<GroupHom(Elem)>& act) {
  std::vector<GroupHom> phi(h.order());
  for (Elem x = 0; x < h.order(); ++x) phi[x] = act(x);
  const std::size_t nh = h.order();
  return group_from_function(n.order() * nh, [&](Elem a, Elem b) {
    Elem n1 = a / nh, h1 = a % nh, n2 = b / nh, h2 = b % nh;
    return static_cast<Elem>(n.mul(n1, phi[h1](n2)) * nh + h.mul(h1, h2));
  });
}

/// A x| C2 with the generator acting by inversion (A abelian): generalised dihedral group.
inline FiniteGroup generalized_dihedral(const FiniteGroup& a) {
  ensure(a.is_abelian(), "generalised dihedral needs an abelian group");
  GroupHom inv{std::vector<Elem>(a.order())};
  for (Elem x = 0; x < a.order(); ++x) inv.image[x] = a.inv(x);
  GroupHom id{std::vector<Elem>(a.order())};
  std::iota(id.image.begin(), id.image.end(), 0);
  return semidirect_product(a, cyclic_group(2), [&](Elem h) { return h ? inv : id; });
}

/// (A x B) / <(za, zb)> for central elements za, zb of order 2.
inline FiniteGroup central_product(const FiniteGroup& a, Elem za, const FiniteGroup& b, Elem zb) {
  FiniteGroup ab = direct_product(a, b);
  Elem z = static_cast<Elem>(za * b.order() + zb);
  ensure(ab.element_order(z) == 2, "central product needs order-2 elements");
  auto n = subgroup_closure(ab, std::vector<Elem>{z});
  ensure(n.is_subset_of(center(ab)), "central product needs central elements");
  return quotient(ab, n).first;
}

/// Unique central involution of a group whose centre has order 2.
inline Elem central_involution(const FiniteGroup& g) {
  auto z = center(g).members();
  ensure(z.size() == 2, "expected a centre of order 2");
  return z[1];
}

namespace detail {

inline std::size_t primitive_root(std::size_t p) {
  for (std::size_t g = 1; g < p; ++g) {
    std::size_t x = 1, k = 0;
    do {
      x = x * g % p;
      ++k;
    } while (x != 1);
    if (k == p - 1) return g;
  }
  return 1;
}

inline bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

using Matrix = std::vector<std::vector<std::size_t>>;

/// Permutation representation of matrices over F_p on nonzero vectors, or on projective points.
inline FiniteGroup matrix_group(std::size_t n, std::size_t p, const std::vector<Matrix>& mats, bool projective) {
  std::size_t total = ipow(p, static_cast<int>(n));
  auto decode = [&](std::size_t code) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = code % p;
      code /= p;
    }
    return v;
  };
  auto encode = [&](const std::vector<std::size_t>& v) {
    std::size_t code = 0;
    for (std::size_t i = n; i-- > 0;) code = code * p + v[i];
    return code;
  };
  auto normalize = [&](std::vector<std::size_t> v) {
    if (!projective) return v;
    std::size_t lead = 0;
    for (auto x : v)
      if (x) {
        lead = x;
        break;
      }
    std::size_t inv = 1;
    while (inv * lead % p != 1) ++inv;
    for (auto& x : v) x = x * inv % p;
    return v;
  };
  std::vector<std::size_t> points;
  std::vector<std::int64_t> index(total, -1);
  for (std::size_t code = 1; code < total; ++code) {
    auto v = decode(code);
    if (normalize(v) != v) continue;
    index[code] = static_cast<std::int64_t>(points.size());
    points.push_back(code);
  }
  std::vector<Permutation> gens;
  for (const auto& m : mats) {
    Permutation perm(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto v = decode(points[i]);
      std::vector<std::size_t> w(n, 0);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) w[r] = (w[r] + m[r][c] * v[c]) % p;
      perm[i] = static_cast<std::uint16_t>(index[encode(normalize(w))]);
    }
    gens.push_back(perm);
  }
  return from_permutations(gens);
}

inline std::vector<Matrix> transvections(std::size_t n) {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      Matrix m(n, std::vector<std::size_t>(n, 0));
      for (std::size_t k = 0; k < n; ++k) m[k][k] = 1;
      m[i][j] = 1;
      out.push_back(m);
    }
  return out;
}

inline FiniteGroup linear_group(std::size_t n, std::size_t p, bool special, bool projective) {
  if (!is_prime(p) || n < 1) fail(Errc::InvalidSpec, "linear groups need a prime field and n >= 1");
  auto mats = transvections(n);
  if (!special && p > 2) {
    Matrix d(n, std::vector<std::size_t>(n, 0));
    for (std::size_t k = 0; k < n; ++k) d[k][k] = 1;
    d[0][0] = primitive_root(p);
    mats.push_back(d);
  }
  if (mats.empty()) return trivial_group();
  return matrix_group(n, p, mats, projective);
}

inline std::size_t parse_size(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
    fail(Errc::InvalidSpec, "expected a positive integer, got '" + s + "'");
  return std::stoul(s);
}

inline std::pair<std::size_t, std::size_t> parse_pair(const std::string& s, char sep) {
  auto pos = s.find(sep);
  if (pos == std::string::npos) fail(Errc::InvalidSpec, std::string("expected two integers separated by '") + sep + "'");
  return {parse_size(s.substr(0, pos)), parse_size(s.substr(pos + 1))};
}

}  // namespace detail

inline FiniteGroup special_linear_group(std::size_t n, std::size_t p) { return detail::linear_group(n, p, true, false); }
inline FiniteGroup general_linear_group(std::size_t n, std::size_t p) { return detail::linear_group(n, p, false, false); }
inline FiniteGroup projective_special_linear_group(std::size_t n, std::size_t p) {
  return detail::linear_group(n, p, true, true);
}
inline FiniteGroup projective_general_linear_group(std::size_t n, std::size_t p) {
  return detail::linear_group(n, p, false, true);
}

/// Upper unitriangular 3x3 matrices over F_p (order p^3).
inline FiniteGroup heisenberg_group(std::size_t p) {
  if (!detail::is_prime(p)) fail(Errc::InvalidSpec, "heisenberg needs a prime");
  detail::Matrix a{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}, b{{1, 0, 0}, {0, 1, 1}, {0, 0, 1}};
  return detail::matrix_group(3, p, {a, b}, false);
}

/// C_m x| C_k with the generator of C_k acting as x -> r x, r the smallest unit of order exactly k.
inline FiniteGroup semicyclic_group(std::size_t m, std::size_t k) {
  if (m < 2 || k < 1) fail(Errc::InvalidSpec, "semicyclic needs m >= 2, k >= 1");
  std::size_t r = 0;
  for (std::size_t cand = 1; cand < m && !r; ++cand) {
    if (std::gcd(cand, m) != 1) continue;
    std::size_t x = cand, ord = 1;
    while (x != 1) {
      x = x * cand % m;
      ++ord;
    }
    if (ord == k) r = cand;
  }
  if (!r) fail(Errc::InvalidSpec, "no unit of order " + std::to_string(k) + " modulo " + std::to_string(m));
  Permutation a(m), b(m);
  for (std::size_t x = 0; x < m; ++x) {
    a[x] = static_cast<std::uint16_t>((x + 1) % m);
    b[x] = static_cast<std::uint16_t>(x * r % m);
  }
  return from_permutations({a, b});
}

/// Parses a group literal. Forms:
///   "(1,2)(3,4);(1,3)"  permutation generators in cycle notation separated by ';'
///   cyclic:n  dihedral:2n  quaternion:8  dicyclic:4m  elementary:p^k  sym:n  alt:n
///   gl:n,p  sl:n,p  psl:n,p  pgl:n,p  heisenberg:p  semicyclic:m,k  direct:A*B
inline FiniteGroup parse_group(const std::string& spec, std::size_t cap = kDefaultOrderCap) {
  using detail::parse_size;
  std::string s = spec;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  if (s.empty()) fail(Errc::InvalidSpec, "empty group spec");
  if (s.front() == '(') {
    std::vector<Permutation> gens;
    std::size_t start = 0;
    while (start <= s.size()) {
      auto end = s.find(';', start);
      if (end == std::string::npos) end = s.size();
      gens.push_back(parse_cycles(s.substr(start, end - start)));
      start = end + 1;
    }
    return from_permutations(gens, cap);
  }
  auto colon = s.find(':');
  if (colon == std::string::npos) fail(Errc::InvalidSpec, "unknown group spec '" + s + "'");
  std::string name = s.substr(0, colon), arg = s.substr(colon + 1);
  FiniteGroup g;
  if (name == "cyclic") {
    g = cyclic_group(parse_size(arg));
  } else if (name == "dihedral") {
    g = dihedral_group(parse_size(arg));
  } else if (name == "quaternion") {
    std::size_t n = parse_size(arg);
    if (n < 8 || (n & (n - 1))) fail(Errc::InvalidSpec, "quaternion order must be a power of two >= 8");
    g = dicyclic_group(n);
  } else if (name == "dicyclic") {
    g = dicyclic_group(parse_size(arg));
  } else if (name == "elementary") {
    auto [p, k] = detail::parse_pair(arg, '^');
    if (!detail::is_prime(p)) fail(Errc::InvalidSpec, "elementary:p^k needs a prime p");
    g = elementary_abelian(p, static_cast<int>(k));
  } else if (name == "sym") {
    g = symmetric_group(parse_size(arg));
  } else if (name == "alt") {
    g = alternating_group(parse_size(arg));
  } else if (name == "gl" || name == "sl" || name == "psl" || name == "pgl") {
    auto [n, p] = detail::parse_pair(arg, ',');
    g = detail::linear_group(n, p, name == "sl" || name == "psl", name == "psl" || name == "pgl");
  } else if (name == "heisenberg") {
    g = heisenberg_group(parse_size(arg));
  } else if (name == "semicyclic") {
    auto [m, k] = detail::parse_pair(arg, ',');
    g = semicyclic_group(m, k);
  } else if (name == "direct") {
    // Split at the first top-level '*': "direct:A*B" with B possibly another direct product.
    int depth = 0;
    std::size_t star = std::string::npos;
    for (std::size_t i = 0; i < arg.size() && star == std::string::npos; ++i) {
      if (arg[i] == '(') ++depth;
      if (arg[i] == ')') --depth;
      if (arg[i] == '*' && depth == 0) star = i;
    }
    if (star == std::string::npos) fail(Errc::InvalidSpec, "direct:A*B needs two factors");
    auto a = parse_group(arg.substr(0, star), cap);
    auto b = parse_group(arg.substr(star + 1), cap);
    if (a.order() * b.order() > cap) fail(Errc::CapExceeded, "direct product exceeds order cap");
    g = direct_product(a, b);
  } else {
    fail(Errc::InvalidSpec, "unknown group constructor '" + name + "'");
  }
  if (g.order() > cap) fail(Errc::CapExceeded, "group order exceeds cap");
  return g;
}

}  // namespace nacl

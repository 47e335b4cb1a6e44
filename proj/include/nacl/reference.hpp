#pragma once

// Reference constructions used to name G' abstractly, and the expected type / H2 charts.

#include <mutex>
#include <string>
#include <vector>

#include "nacl/catalog.hpp"
#include "nacl/wreath.hpp"

namespace nacl::reference {

struct NamedGroup {
  std::string name;
  FiniteGroup group;
};

namespace detail {

inline FiniteGroup dihedral_by_sign_of_rotation() {
  // C3 x| D8, rotations of D8 invert C3 and reflections centralise it.
  auto c3 = cyclic_group(3), d8 = dihedral_group(8);
  GroupHom id{{0, 1, 2}}, inv{{0, 2, 1}};
  return semidirect_product(c3, d8, [&](Elem h) { return (h % 4) % 2 ? inv : id; });
}

/// {(x, y, s) in G wr S2 : f(x) f(y) = 1} for a homomorphism f from G to an abelian quotient.
inline FiniteGroup wreath_balanced_subgroup(const FiniteGroup& g) {
  auto ab = abelianization(g);
  WreathSquare w(g, SIZE_MAX);
  std::vector<Elem> elems;
  for (Elem x = 0; x < w.order(); ++x) {
    auto [a, b, s] = w.decode(x);
    (void)s;
    if (ab.quotient_group.mul(ab.projection(a), ab.projection(b)) == 0) elems.push_back(x);
  }
  return subgroup_as_group(w, elems).first;
}

inline std::vector<NamedGroup> build_library() {
  std::vector<NamedGroup> lib;
  auto add = [&](std::string name, FiniteGroup g) { lib.push_back({std::move(name), std::move(g)}); };
  auto c2 = cyclic_group(2);
  auto s3 = symmetric_group(3);
  auto d8 = dihedral_group(8);
  add("C2^2", elementary_abelian(2, 2));
  add("C2^3", elementary_abelian(2, 3));
  add("C2^4", elementary_abelian(2, 4));
  add("S3", s3);
  for (std::size_t n : {8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30, 34, 38, 42, 46, 50, 54, 58, 62})
    add("D" + std::to_string(n), dihedral_group(n));
  add("S3xS3", direct_product(s3, s3));
  add("C2xD8", direct_product(c2, d8));
  add("D10^2", direct_product(dihedral_group(10), dihedral_group(10)));
  add("D14^2", direct_product(dihedral_group(14), dihedral_group(14)));
  add("C2^2xS3", direct_product(elementary_abelian(2, 2), s3));
  add("C2xS3^2", direct_product(c2, direct_product(s3, s3)));
  add("(C2xD8):C2 [49]", central_product(d8, central_involution(d8), d8, central_involution(d8)));
  auto q8 = dicyclic_group(8);
  add("(C2xQ8):C2 [50]", central_product(d8, central_involution(d8), q8, central_involution(q8)));
  auto c4 = cyclic_group(4);
  add("(C4xC2):C2 [13]", central_product(c4, 2, d8, central_involution(d8)));
  add("(C3^2):C2 [4]", generalized_dihedral(elementary_abelian(3, 2)));
  add("(C5^2):C2 [4]", generalized_dihedral(elementary_abelian(5, 2)));
  add("(C9xC3):C2 [7]", generalized_dihedral(direct_product(cyclic_group(9), cyclic_group(3))));
  add("(C3^3):C2 [14]", generalized_dihedral(elementary_abelian(3, 3)));
  add("(C6xC2):C2 [8]", dihedral_by_sign_of_rotation());
  add("(C6xS3):C2 [22]", wreath_balanced_subgroup(dicyclic_group(12)));
  add("S4", symmetric_group(4));
  add("((C2^4):C3):C2 [227]", wreath_balanced_subgroup(alternating_group(4)));
  add("GL(2,3)", general_linear_group(2, 3));
  add("S5", symmetric_group(5));
  add("A5xC2", direct_product(alternating_group(5), c2));
  add("PSL(3,2):C2 [208]", projective_general_linear_group(2, 7));
  add("PSL(3,2)xC2", direct_product(projective_special_linear_group(3, 2), c2));
  return lib;
}

}  // namespace detail

inline const std::vector<NamedGroup>& library() {
  static const std::vector<NamedGroup> lib = detail::build_library();
  return lib;
}

/// Name of the first library group isomorphic to `g`, or "" when none matches.
inline std::string identify(const FiniteGroup& g, std::size_t cap = 512) {
  if (g.order() > cap) return "";
  for (const auto& ng : library())
    if (ng.group.order() == g.order() && is_isomorphic(g, ng.group, cap)) return ng.name;
  return "";
}

// ---------------------------------------------------------------------------
// Expected charts

struct TypeRow {
  const char* g_spec;
  const char* g_name;
  const char* gprime;
  std::size_t gprime_order;
  std::size_t classes;
};

inline const std::vector<TypeRow>& type_chart() {
  static const std::vector<TypeRow> rows = {
      {"cyclic:2", "C2", "C2^2", 4, 2},
      {"cyclic:3", "C3", "S3", 6, 1},
      {"cyclic:4", "C4", "D8", 8, 2},
      {"elementary:2^2", "C2^2", "C2^3", 8, 4},
      {"cyclic:5", "C5", "D10", 10, 1},
      {"sym:3", "S3", "D12", 12, 2},
      {"sym:3", "S3", "S3xS3", 36, 2},
      {"cyclic:6", "C6", "D12", 12, 2},
      {"cyclic:7", "C7", "D14", 14, 1},
      {"cyclic:8", "C8", "D16", 16, 2},
      {"direct:cyclic:4*cyclic:2", "C4xC2", "C2xD8", 16, 4},
      {"dihedral:8", "D8", "C2xD8", 16, 4},
      {"dihedral:8", "D8", "(C2xD8):C2 [49]", 32, 4},
      {"quaternion:8", "Q8", "(C4xC2):C2 [13]", 16, 3},
      {"quaternion:8", "Q8", "(C2xQ8):C2 [50]", 32, 4},
      {"elementary:2^3", "C2^3", "C2^4", 16, 8},
      {"cyclic:9", "C9", "D18", 18, 1},
      {"elementary:3^2", "C3^2", "(C3^2):C2 [4]", 18, 1},
      {"dihedral:10", "D10", "D20", 20, 2},
      {"dihedral:10", "D10", "D10^2", 200, 2},
      {"cyclic:10", "C10", "D20", 20, 2},
      {"cyclic:11", "C11", "D22", 22, 1},
      {"dicyclic:12", "C3:C4 [1]", "(C6xC2):C2 [8]", 24, 2},
      {"dicyclic:12", "C3:C4 [1]", "(C6xS3):C2 [22]", 72, 2},
      {"cyclic:12", "C12", "D24", 24, 2},
      {"alt:4", "A4", "S4", 24, 1},
      {"alt:4", "A4", "((C2^4):C3):C2 [227]", 96, 1},
      {"dihedral:12", "D12", "C2^2xS3", 24, 4},
      {"dihedral:12", "D12", "C2xS3^2", 72, 4},
      {"direct:cyclic:6*cyclic:2", "C6xC2", "C2^2xS3", 24, 4},
      {"cyclic:13", "C13", "D26", 26, 1},
      {"dihedral:14", "D14", "D28", 28, 2},
      {"dihedral:14", "D14", "D14^2", 392, 2},
      {"cyclic:14", "C14", "D28", 28, 2},
      {"cyclic:15", "C15", "D30", 30, 1},
      {"alt:5", "A5", "S5", 120, 1},
      {"alt:5", "A5", "A5xC2", 120, 2},
      {"alt:5", "A5", "A5wrC2", 7200, 1},
      {"psl:3,2", "PSL(3,2)", "PSL(3,2):C2 [208]", 336, 1},
      {"psl:3,2", "PSL(3,2)", "PSL(3,2)xC2", 336, 2},
      {"psl:3,2", "PSL(3,2)", "PSL(3,2)wrC2", 56448, 1},
  };
  return rows;
}

struct H2Row {
  const char* g_spec;
  const char* g_name;
  const char* gprime;
  std::size_t gprime_order;
  const char* h2;  // AbelianInvariants::to_string() form
  std::size_t center;
};

inline const std::vector<H2Row>& h2_chart() {
  static const std::vector<H2Row> rows = {
      {"cyclic:3", "C3", "S3", 6, "1", 1},
      {"cyclic:5", "C5", "D10", 10, "1", 1},
      {"cyclic:7", "C7", "D14", 14, "1", 1},
      {"cyclic:9", "C9", "D18", 18, "1", 1},
      {"elementary:3^2", "C3^2", "(C3^2):C2 [4]", 18, "C3", 1},
      {"cyclic:11", "C11", "D22", 22, "1", 1},
      {"alt:4", "A4", "S4", 24, "1", 1},
      {"alt:4", "A4", "((C2^4):C3):C2 [227]", 96, "C2", 1},
      {"cyclic:13", "C13", "D26", 26, "1", 1},
      {"cyclic:15", "C15", "D30", 30, "1", 1},
      {"cyclic:17", "C17", "D34", 34, "1", 1},
      {"cyclic:19", "C19", "D38", 38, "1", 1},
      {"semicyclic:7,3", "C7:C3 [1]", "((C7^2):C3):C2 [7]", 294, "1", 1},
      {"cyclic:21", "C21", "D42", 42, "1", 1},
      {"cyclic:23", "C23", "D46", 46, "1", 1},
      {"sl:2,3", "SL(2,3)", "GL(2,3)", 48, "1", 2},
      {"sl:2,3", "SL(2,3)", "((Q8^2):C3):C2 [18130]", 384, "1", 2},
      {"cyclic:25", "C25", "D50", 50, "1", 1},
      {"elementary:5^2", "C5^2", "(C5^2):C2 [4]", 50, "C5", 1},
      {"cyclic:27", "C27", "D54", 54, "1", 1},
      {"direct:cyclic:9*cyclic:3", "C9xC3", "(C9xC3):C2 [7]", 54, "C3", 1},
      {"heisenberg:3", "(C3^2):C3 [3]", "((C3^2):C3):C2 [8]", 54, "1", 3},
      {"heisenberg:3", "(C3^2):C3 [3]", "(C3x((C3^2):C3)):C2 [46]", 162, "C3^2", 3},
      {"semicyclic:9,3", "C9:C3 [4]", "((C9xC3):C3):C2 [17]", 162, "1", 3},
      {"elementary:3^3", "C3^3", "(C3^3):C2 [14]", 54, "C3^3", 1},
      {"cyclic:29", "C29", "D58", 58, "1", 1},
      {"cyclic:31", "C31", "D62", 62, "1", 1},
      {"alt:5", "A5", "S5", 120, "1", 1},
      {"alt:5", "A5", "A5wrC2", 7200, "C2", 1},
      {"psl:3,2", "PSL(3,2)", "PSL(3,2):C2 [208]", 336, "1", 1},
      {"psl:3,2", "PSL(3,2)", "PSL(3,2)wrC2", 56448, "C2", 1},
  };
  return rows;
}

/// Display name for G when it appears in either chart, else the spec itself.
inline std::string group_display_name(const std::string& spec) {
  for (const auto& r : type_chart())
    if (spec == r.g_spec) return r.g_name;
  for (const auto& r : h2_chart())
    if (spec == r.g_spec) return r.g_name;
  return spec;
}

/// Label for a type: library match, then "<G>wrC2" for the whole wreath square, then the chart row
/// with matching (G, |G'|) when that row is unique, else "order-n".
inline std::string type_label(const AdmissibleType& t, const std::string& g_spec) {
  if (!t.name.empty()) return t.name;
  const std::size_t n = t.wreath->base().order();
  if (t.order() == 2 * n * n) return group_display_name(g_spec) + "wrC2";
  const char* match = nullptr;
  std::size_t hits = 0;
  for (const auto& r : h2_chart())
    if (g_spec == r.g_spec && r.gprime_order == t.order()) {
      match = r.gprime;
      ++hits;
    }
  if (hits == 1) return match;
  return "order-" + std::to_string(t.order());
}

inline AdmissibleOptions naming_options() {
  AdmissibleOptions opt;
  opt.namer = [](const FiniteGroup& g) { return identify(g); };
  return opt;
}

}  // namespace nacl::reference

#pragma once

// HLT coset enumeration with lookahead, over a subgroup given by words.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nacl/error.hpp"

namespace nacl {

/// Letters: 2i is generator i, 2i+1 its inverse.
using Word = std::vector<int>;

inline int inverse_letter(int x) { return x ^ 1; }

inline Word inverse_word(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& x : r) x = inverse_letter(x);
  return r;
}

struct Presentation {
  std::size_t generators = 0;
  std::vector<Word> relators;
  std::vector<Word> subgroup;  // generators of the subgroup whose cosets are enumerated
};

struct EnumerationOptions {
  std::size_t coset_cap = 1'000'000;
  // Total definitions allowed, as a multiple of the cap, before giving up.
  std::size_t definition_budget_factor = 64;
};

/// Complete coset table with cosets numbered in BFS order from coset 0.
struct CosetTable {
  std::size_t columns = 0;
  std::size_t size = 0;
  std::vector<std::int32_t> table;  // size * columns, all defined
  std::size_t total_defined = 0;    // cosets defined during enumeration (redundancy measure)

  std::int32_t act(std::size_t coset, int letter) const { return table[coset * columns + letter]; }

  std::size_t apply(std::size_t coset, const Word& w) const {
    for (int x : w) coset = static_cast<std::size_t>(act(coset, x));
    return coset;
  }
};

namespace detail {

class CosetEnumerator {
 public:
  CosetEnumerator(const Presentation& p, const EnumerationOptions& opt)
      : cols_(2 * p.generators), rels_(p.relators), sub_(p.subgroup), opt_(opt) {
    if (cols_ == 0) fail(Errc::InvalidSpec, "presentation without generators");
    for (auto& r : rels_)
      for (int x : r)
        if (x < 0 || static_cast<std::size_t>(x) >= cols_) fail(Errc::InvalidSpec, "relator letter out of range");
    // Free reduction and removal of trivial relators keep scans tight.
    std::vector<Word> cleaned;
    for (auto& r : rels_) {
      Word w;
      for (int x : r) {
        if (!w.empty() && w.back() == inverse_letter(x))
          w.pop_back();
        else
          w.push_back(x);
      }
      while (w.size() >= 2 && w.front() == inverse_letter(w.back())) {
        w.pop_back();
        w.erase(w.begin());
      }
      if (!w.empty()) cleaned.push_back(w);
    }
    rels_ = std::move(cleaned);
  }

  CosetTable run() {
    new_coset();  // coset 0
    for (const auto& w : sub_) {
      while (scan_and_fill(0, w) == Status::Full) make_room();
    }
    std::size_t alpha = 0;
    while (alpha < rows_) {
      if (!live(alpha)) {
        ++alpha;
        continue;
      }
      bool restart = false;
      for (const auto& w : rels_) {
        auto st = scan_and_fill(static_cast<std::int32_t>(alpha), w);
        if (st == Status::Full) {
          alpha = make_room(alpha);
          restart = true;
          break;
        }
        if (!live(alpha)) break;
      }
      if (restart) continue;
      if (!live(alpha)) {
        ++alpha;
        continue;
      }
      for (std::size_t x = 0; x < cols_; ++x) {
        if (entry(alpha, x) < 0) {
          if (!define(static_cast<std::int32_t>(alpha), static_cast<int>(x))) {
            alpha = make_room(alpha);
            restart = true;
            break;
          }
        }
      }
      if (restart) continue;
      ++alpha;
    }
    return standardize();
  }

 private:
  enum class Status { Done, Full };

  std::int32_t& entry(std::size_t k, std::size_t x) { return tab_[k * cols_ + x]; }
  bool live(std::size_t k) const { return fwd_[k] == static_cast<std::int32_t>(k); }

  std::int32_t new_coset() {
    std::int32_t k = static_cast<std::int32_t>(rows_++);
    if (tab_.size() < rows_ * cols_) tab_.resize(std::max(rows_ * cols_, tab_.size() * 2), -1);
    std::fill(tab_.begin() + static_cast<std::ptrdiff_t>(k * cols_), tab_.begin() + static_cast<std::ptrdiff_t>((k + 1) * cols_), -1);
    if (fwd_.size() < rows_) fwd_.resize(rows_);
    fwd_[k] = k;
    ++live_;
    ++defined_;
    if (defined_ > opt_.coset_cap * opt_.definition_budget_factor)
      fail(Errc::IncompleteEnumeration, "definition budget exhausted");
    return k;
  }

  bool define(std::int32_t a, int x) {
    if (rows_ >= opt_.coset_cap) return false;
    std::int32_t b = new_coset();
    entry(a, x) = b;
    entry(b, inverse_letter(x)) = a;
    return true;
  }

  Status scan_and_fill(std::int32_t a, const Word& w) {
    std::int32_t f = a, b = a;
    std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(w.size()) - 1;
    while (true) {
      while (i <= j && entry(f, w[i]) >= 0) f = entry(f, w[i++]);
      if (i > j) {
        if (f != a) coincidence(f, a);
        return Status::Done;
      }
      while (j >= i && entry(b, inverse_letter(w[j])) >= 0) b = entry(b, inverse_letter(w[j--]));
      if (j < i) {
        coincidence(f, b);
        return Status::Done;
      }
      if (i == j) {
        entry(f, w[i]) = b;
        entry(b, inverse_letter(w[i])) = f;
        return Status::Done;
      }
      if (!define(f, w[i])) return Status::Full;
    }
  }

  // Scan without definitions (lookahead).
  void scan(std::int32_t a, const Word& w) {
    std::int32_t f = a, b = a;
    std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(w.size()) - 1;
    while (i <= j && entry(f, w[i]) >= 0) f = entry(f, w[i++]);
    if (i > j) {
      if (f != a) coincidence(f, a);
      return;
    }
    while (j >= i && entry(b, inverse_letter(w[j])) >= 0) b = entry(b, inverse_letter(w[j--]));
    if (j < i) {
      coincidence(f, b);
    } else if (i == j) {
      entry(f, w[i]) = b;
      entry(b, inverse_letter(w[i])) = f;
    }
  }

  std::int32_t rep(std::int32_t k) {
    std::int32_t r = k;
    while (fwd_[r] != r) r = fwd_[r];
    while (fwd_[k] != r) {
      std::int32_t next = fwd_[k];
      fwd_[k] = r;
      k = next;
    }
    return r;
  }

  void merge(std::int32_t k, std::int32_t l) {
    std::int32_t a = rep(k), b = rep(l);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    fwd_[b] = a;
    --live_;
    queue_.push_back(b);
  }

  void coincidence(std::int32_t a, std::int32_t b) {
    merge(a, b);
    std::size_t head = 0;
    while (head < queue_.size()) {
      std::int32_t g = queue_[head++];
      for (std::size_t x = 0; x < cols_; ++x) {
        std::int32_t d = entry(g, x);
        if (d < 0) continue;
        int xi = inverse_letter(static_cast<int>(x));
        if (entry(d, xi) == g) entry(d, xi) = -1;
        std::int32_t mu = rep(g), nu = rep(d);
        if (entry(mu, x) >= 0) {
          merge(nu, entry(mu, x));
        } else if (entry(nu, xi) >= 0) {
          merge(mu, entry(nu, xi));
        } else {
          entry(mu, x) = nu;
          entry(nu, xi) = mu;
        }
      }
    }
    queue_.clear();
  }

  // Lookahead then compaction; returns the new index of the first live coset >= alpha.
  std::size_t make_room(std::size_t alpha = 0) {
    for (std::size_t k = 0; k < rows_; ++k) {
      if (!live(k)) continue;
      for (const auto& w : rels_) {
        scan(static_cast<std::int32_t>(k), w);
        if (!live(k)) break;
      }
    }
    if (live_ >= opt_.coset_cap) fail(Errc::CapExceeded, "coset enumeration exceeds cap of " + std::to_string(opt_.coset_cap));
    std::vector<std::int32_t> remap(rows_, -1);
    std::size_t n = 0, new_alpha = SIZE_MAX;
    for (std::size_t k = 0; k < rows_; ++k)
      if (live(k)) {
        if (k >= alpha && new_alpha == SIZE_MAX) new_alpha = n;
        remap[k] = static_cast<std::int32_t>(n++);
      }
    for (std::size_t k = 0; k < rows_; ++k) {
      if (remap[k] < 0) continue;
      std::size_t dst = static_cast<std::size_t>(remap[k]);
      for (std::size_t x = 0; x < cols_; ++x) {
        std::int32_t v = entry(k, x);
        tab_[dst * cols_ + x] = v < 0 ? -1 : remap[v];
      }
    }
    rows_ = n;
    for (std::size_t k = 0; k < rows_; ++k) fwd_[k] = static_cast<std::int32_t>(k);
    return new_alpha == SIZE_MAX ? rows_ : new_alpha;
  }

  CosetTable standardize() {
    std::vector<std::int32_t> order{0}, label(rows_, -1);
    ensure(live(0), "coset 0 died");
    label[0] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      std::int32_t k = order[i];
      for (std::size_t x = 0; x < cols_; ++x) {
        std::int32_t v = entry(k, x);
        ensure(v >= 0 && live(v), "incomplete coset table after enumeration");
        if (label[v] < 0) {
          label[v] = static_cast<std::int32_t>(order.size());
          order.push_back(v);
        }
      }
    }
    ensure(order.size() == live_, "live coset count mismatch");
    CosetTable t;
    t.columns = cols_;
    t.size = order.size();
    t.total_defined = defined_;
    t.table.resize(t.size * cols_);
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t x = 0; x < cols_; ++x) t.table[i * cols_ + x] = label[entry(order[i], x)];
    return t;
  }

  std::size_t cols_;
  std::vector<Word> rels_;
  std::vector<Word> sub_;
  EnumerationOptions opt_;
  std::vector<std::int32_t> tab_;
  std::vector<std::int32_t> fwd_;
  std::vector<std::int32_t> queue_;
  std::size_t rows_ = 0, live_ = 0, defined_ = 0;
};

}  // namespace detail

inline CosetTable enumerate_cosets(const Presentation& p, const EnumerationOptions& opt = {}) {
  return detail::CosetEnumerator(p, opt).run();
}

/// True when every relator closes at every coset and every subgroup word fixes coset 0.
inline bool verify_coset_table(const CosetTable& t, const Presentation& p) {
  for (std::size_t k = 0; k < t.size; ++k)
    for (std::size_t x = 0; x < t.columns; ++x) {
      auto v = static_cast<std::size_t>(t.act(k, static_cast<int>(x)));
      if (static_cast<std::size_t>(t.act(v, inverse_letter(static_cast<int>(x)))) != k) return false;
    }
  for (const auto& r : p.relators)
    for (std::size_t k = 0; k < t.size; ++k)
      if (t.apply(k, r) != k) return false;
  for (const auto& w : p.subgroup)
    if (t.apply(0, w) != 0) return false;
  return true;
}

}  // namespace nacl

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <json.hpp>

#include "closurium/errors.hpp"
#include "closurium/rational.hpp"
#include "closurium/rng.hpp"

namespace closurium {

using bitset = boost::dynamic_bitset<std::uint64_t>;
using json = nlohmann::json;

// Algebras are identified by a structural token (a hash of their descriptor),
// so value-semantic copies of the same algebra stay compatible while elements
// of genuinely different algebras are rejected fast.
using algebra_token = std::uint64_t;

namespace detail {
inline void fnv_mix(algebra_token& h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
}
inline void fnv_mix(algebra_token& h, const std::string& s) {
  algebra_token x = 1469598103934665603ull;
  for (unsigned char c : s) x = (x ^ c) * 1099511628211ull;
  fnv_mix(h, x);
}
} // namespace detail

inline constexpr std::uint64_t default_enumeration_cap = 1ull << 20;

// ---------------------------------------------------------------------------
// carrier: a finite ordered set of named points
// ---------------------------------------------------------------------------

class carrier {
public:
  carrier() = default;
  explicit carrier(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!index_.emplace(names_[i], i).second)
        throw validation_error("duplicate point name: " + names_[i]);
    }
    tok_ = 1469598103934665603ull;
    detail::fnv_mix(tok_, names_.size());
    for (const auto& n : names_) detail::fnv_mix(tok_, n);
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  algebra_token token() const { return tok_; }

  bool has(const std::string& name) const { return index_.count(name) != 0; }
  std::size_t index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw validation_error("unknown point: " + name);
    return it->second;
  }

private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
  algebra_token tok_ = 0;
};

inline carrier numbered_carrier(std::size_t n, const std::string& prefix = "") {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return carrier(std::move(names));
}

// Row-major product: the pair (i, j) over carriers of sizes (m, n) has index
// i*n + j. All product layouts in the library agree with this.
inline carrier product_carrier(const carrier& a, const carrier& b) {
  std::vector<std::string> names;
  names.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      names.push_back("(" + a.name(i) + "," + b.name(j) + ")");
  return carrier(std::move(names));
}

// ---------------------------------------------------------------------------
// powerset algebra: Boolean algebra of subsets, elements are bitsets
// ---------------------------------------------------------------------------

class powerset_algebra {
public:
  struct element {
    algebra_token tok = 0;
    bitset bits;

    bool operator==(const element& o) const { return tok == o.tok && bits == o.bits; }
    bool operator!=(const element& o) const { return !(*this == o); }
  };

  powerset_algebra() = default;
  explicit powerset_algebra(carrier pts) : pts_(std::move(pts)) {
    tok_ = 0x706f77ull; // tag distinguishing algebra families over equal carriers
    detail::fnv_mix(tok_, pts_.token());
  }

  const carrier& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  algebra_token token() const { return tok_; }

  element wrap(bitset b) const {
    if (b.size() != pts_.size()) throw algebra_mismatch();
    return element{tok_, std::move(b)};
  }
  element bottom() const { return element{tok_, bitset(pts_.size())}; }
  element top() const {
    bitset b(pts_.size());
    b.set();
    return element{tok_, std::move(b)};
  }
  element singleton(std::size_t i) const {
    bitset b(pts_.size());
    b.set(i);
    return element{tok_, std::move(b)};
  }
  element from_names(const std::vector<std::string>& names) const {
    bitset b(pts_.size());
    for (const auto& n : names) b.set(pts_.index_of(n));
    return element{tok_, std::move(b)};
  }

  void check(const element& a) const {
    if (a.tok != tok_) throw algebra_mismatch();
  }
  void check2(const element& a, const element& b) const {
    if (a.tok != tok_ || b.tok != tok_) throw algebra_mismatch();
  }

  element meet(const element& a, const element& b) const {
    check2(a, b);
    return element{tok_, a.bits & b.bits};
  }
  element join(const element& a, const element& b) const {
    check2(a, b);
    return element{tok_, a.bits | b.bits};
  }
  // Boolean relative pseudo-complement: a => b  =  ~a | b
  element implication(const element& a, const element& b) const {
    check2(a, b);
    return element{tok_, ~a.bits | b.bits};
  }
  element negation(const element& a) const {
    check(a);
    return element{tok_, ~a.bits};
  }
  bool leq(const element& a, const element& b) const {
    check2(a, b);
    return a.bits.is_subset_of(b.bits);
  }
  bool equal(const element& a, const element& b) const {
    check2(a, b);
    return a.bits == b.bits;
  }
  bool is_bottom(const element& a) const {
    check(a);
    return a.bits.none();
  }

  std::uint64_t count_elements() const {
    if (pts_.size() >= 63) return ~0ull;
    return 1ull << pts_.size();
  }

  void for_each_element(const std::function<void(const element&)>& fn,
                        std::uint64_t cap = default_enumeration_cap) const {
    std::uint64_t n = count_elements();
    if (n > cap) throw too_large(n, cap);
    for (std::uint64_t mask = 0; mask < n; ++mask) {
      bitset b(pts_.size());
      for (std::size_t i = 0; i < pts_.size(); ++i)
        if (mask & (1ull << i)) b.set(i);
      fn(element{tok_, std::move(b)});
    }
  }

  std::vector<element> all_elements(std::uint64_t cap = default_enumeration_cap) const {
    std::vector<element> out;
    for_each_element([&](const element& e) { out.push_back(e); }, cap);
    return out;
  }

  element sample(rng& r) const {
    bitset b(pts_.size());
    for (std::size_t i = 0; i < pts_.size(); ++i)
      if (r.chance(1, 2)) b.set(i);
    return element{tok_, std::move(b)};
  }

  // covers of a: one point added (used by monotonicity / additivity sweeps)
  void for_each_cover(const element& a, const std::function<void(const element&)>& fn) const {
    check(a);
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (a.bits.test(i)) continue;
      element up = a;
      up.bits.set(i);
      fn(up);
    }
  }

  // join-irreducible decomposition: the singletons below a
  std::vector<element> atom_decomposition(const element& a) const {
    check(a);
    std::vector<element> out;
    for (auto i = a.bits.find_first(); i != bitset::npos; i = a.bits.find_next(i))
      out.push_back(singleton(i));
    return out;
  }

  json element_to_json(const element& a) const {
    check(a);
    json arr = json::array();
    for (auto i = a.bits.find_first(); i != bitset::npos; i = a.bits.find_next(i))
      arr.push_back(pts_.name(i));
    return arr;
  }
  element element_from_json(const json& j) const {
    if (!j.is_array()) throw validation_error("expected an array of point names");
    bitset b(pts_.size());
    for (const auto& v : j) b.set(pts_.index_of(v.get<std::string>()));
    return element{tok_, std::move(b)};
  }

private:
  carrier pts_;
  algebra_token tok_ = 0;
};

// ---------------------------------------------------------------------------
// heyting chain: truth values {0, 1/k, ..., 1} with Goedel implication
// ---------------------------------------------------------------------------

// Values are exact: a value is its numerator over the fixed resolution k.
struct chain_value {
  std::int32_t num = 0;
  std::int32_t k = 1;

  bool operator==(const chain_value& o) const { return num == o.num && k == o.k; }
  bool operator!=(const chain_value& o) const { return !(*this == o); }
};

class heyting_chain {
public:
  heyting_chain() = default;
  explicit heyting_chain(std::int32_t k) : k_(k) {
    if (k <= 0) throw validation_error("chain resolution must be positive");
  }

  std::int32_t resolution() const { return k_; }

  chain_value value(std::int32_t num) const {
    if (num < 0 || num > k_) throw validation_error("chain value out of range");
    return chain_value{num, k_};
  }
  chain_value from_rational(const rational& r) const {
    long long scaled = r.numerator() * k_;
    if (scaled % r.denominator() != 0)
      throw validation_error("value " + closurium::to_string(r) + " is not a multiple of 1/" +
                             std::to_string(k_));
    long long num = scaled / r.denominator();
    if (num < 0 || num > k_) throw validation_error("chain value out of range");
    return chain_value{static_cast<std::int32_t>(num), k_};
  }
  rational to_rational(const chain_value& v) const {
    check(v);
    return rational(v.num, k_);
  }

  chain_value top() const { return chain_value{k_, k_}; }
  chain_value bottom() const { return chain_value{0, k_}; }

  void check(const chain_value& v) const {
    if (v.k != k_) throw algebra_mismatch();
  }
  void check2(const chain_value& a, const chain_value& b) const {
    if (a.k != k_ || b.k != k_) throw algebra_mismatch();
  }

  chain_value meet(const chain_value& a, const chain_value& b) const {
    check2(a, b);
    return chain_value{std::min(a.num, b.num), k_};
  }
  chain_value join(const chain_value& a, const chain_value& b) const {
    check2(a, b);
    return chain_value{std::max(a.num, b.num), k_};
  }
  // t => s  =  1 if t <= s, else s
  chain_value implication(const chain_value& a, const chain_value& b) const {
    check2(a, b);
    return a.num <= b.num ? top() : b;
  }
  chain_value negation(const chain_value& a) const { return implication(a, bottom()); }
  bool leq(const chain_value& a, const chain_value& b) const {
    check2(a, b);
    return a.num <= b.num;
  }

  // capped addition used by the epsilon closure
  chain_value add_capped(const chain_value& a, const chain_value& b) const {
    check2(a, b);
    return chain_value{std::min(a.num + b.num, k_), k_};
  }

private:
  std::int32_t k_ = 1;
};

// ---------------------------------------------------------------------------
// fuzzy predicate algebra: maps carrier -> chain, bounded by a membership
// ---------------------------------------------------------------------------

// Elements are the fuzzy subsets xi <= alpha. With alpha == top this is the
// plain algebra of chain-valued predicates.
class fuzzy_algebra {
public:
  struct element {
    algebra_token tok = 0;
    std::vector<std::int32_t> val; // numerators over the chain resolution

    bool operator==(const element& o) const { return tok == o.tok && val == o.val; }
    bool operator!=(const element& o) const { return !(*this == o); }
  };

  fuzzy_algebra() = default;
  fuzzy_algebra(carrier pts, heyting_chain chain)
      : fuzzy_algebra(std::move(pts), chain,
                      std::vector<std::int32_t>(/*count*/ 0)) {}
  fuzzy_algebra(carrier pts, heyting_chain chain, std::vector<std::int32_t> alpha)
      : pts_(std::move(pts)), chain_(chain), alpha_(std::move(alpha)) {
    if (alpha_.empty()) alpha_.assign(pts_.size(), chain_.resolution());
    if (alpha_.size() != pts_.size())
      throw validation_error("membership size does not match carrier");
    for (auto v : alpha_)
      if (v < 0 || v > chain_.resolution())
        throw validation_error("membership value out of range");
    tok_ = 0x66757aull;
    detail::fnv_mix(tok_, pts_.token());
    detail::fnv_mix(tok_, static_cast<std::uint64_t>(chain_.resolution()));
    for (auto v : alpha_) detail::fnv_mix(tok_, static_cast<std::uint64_t>(v));
  }

  const carrier& points() const { return pts_; }
  const heyting_chain& chain() const { return chain_; }
  const std::vector<std::int32_t>& membership() const { return alpha_; }
  std::size_t size() const { return pts_.size(); }
  algebra_token token() const { return tok_; }

  void check(const element& a) const {
    if (a.tok != tok_) throw algebra_mismatch();
  }
  void check2(const element& a, const element& b) const {
    if (a.tok != tok_ || b.tok != tok_) throw algebra_mismatch();
  }

  element wrap(std::vector<std::int32_t> vals) const {
    if (vals.size() != pts_.size()) throw algebra_mismatch();
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (vals[i] < 0 || vals[i] > alpha_[i])
        throw validation_error("fuzzy value exceeds membership at " + pts_.name(i));
    return element{tok_, std::move(vals)};
  }
  element bottom() const { return element{tok_, std::vector<std::int32_t>(pts_.size(), 0)}; }
  element top() const { return element{tok_, alpha_}; }
  // single-point spike of height v (a join-irreducible)
  element spike(std::size_t i, std::int32_t v) const {
    std::vector<std::int32_t> vals(pts_.size(), 0);
    if (v < 0 || v > alpha_[i]) throw validation_error("spike exceeds membership");
    vals[i] = v;
    return element{tok_, std::move(vals)};
  }

  element meet(const element& a, const element& b) const {
    check2(a, b);
    std::vector<std::int32_t> out(pts_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(a.val[i], b.val[i]);
    return element{tok_, std::move(out)};
  }
  element join(const element& a, const element& b) const {
    check2(a, b);
    std::vector<std::int32_t> out(pts_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(a.val[i], b.val[i]);
    return element{tok_, std::move(out)};
  }
  // pointwise Goedel implication, cut down to the membership
  element implication(const element& a, const element& b) const {
    check2(a, b);
    std::vector<std::int32_t> out(pts_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::int32_t g = a.val[i] <= b.val[i] ? chain_.resolution() : b.val[i];
      out[i] = std::min(g, alpha_[i]);
    }
    return element{tok_, std::move(out)};
  }
  element negation(const element& a) const { return implication(a, bottom()); }
  bool leq(const element& a, const element& b) const {
    check2(a, b);
    for (std::size_t i = 0; i < pts_.size(); ++i)
      if (a.val[i] > b.val[i]) return false;
    return true;
  }
  bool equal(const element& a, const element& b) const {
    check2(a, b);
    return a.val == b.val;
  }
  bool is_bottom(const element& a) const {
    check(a);
    for (auto v : a.val)
      if (v != 0) return false;
    return true;
  }

  std::uint64_t count_elements() const {
    std::uint64_t n = 1;
    for (auto v : alpha_) {
      std::uint64_t m = static_cast<std::uint64_t>(v) + 1;
      if (n > (~0ull) / m) return ~0ull;
      n *= m;
    }
    return n;
  }

  void for_each_element(const std::function<void(const element&)>& fn,
                        std::uint64_t cap = default_enumeration_cap) const {
    std::uint64_t n = count_elements();
    if (n > cap) throw too_large(n, cap);
    std::vector<std::int32_t> vals(pts_.size(), 0);
    while (true) {
      fn(element{tok_, vals});
      std::size_t i = 0;
      for (; i < vals.size(); ++i) {
        if (vals[i] < alpha_[i]) {
          ++vals[i];
          std::fill(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(i), 0);
          break;
        }
      }
      if (i == vals.size()) break;
      if (vals.empty()) break;
    }
  }

  std::vector<element> all_elements(std::uint64_t cap = default_enumeration_cap) const {
    std::vector<element> out;
    for_each_element([&](const element& e) { out.push_back(e); }, cap);
    return out;
  }

  element sample(rng& r) const {
    std::vector<std::int32_t> vals(pts_.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
      vals[i] = static_cast<std::int32_t>(r.next(static_cast<std::uint64_t>(alpha_[i]) + 1));
    return element{tok_, std::move(vals)};
  }

  void for_each_cover(const element& a, const std::function<void(const element&)>& fn) const {
    check(a);
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (a.val[i] >= alpha_[i]) continue;
      element up = a;
      ++up.val[i];
      fn(up);
    }
  }

  std::vector<element> atom_decomposition(const element& a) const {
    check(a);
    std::vector<element> out;
    for (std::size_t i = 0; i < pts_.size(); ++i)
      if (a.val[i] > 0) out.push_back(spike(i, a.val[i]));
    return out;
  }

  json element_to_json(const element& a) const {
    check(a);
    json obj = json::object();
    for (std::size_t i = 0; i < pts_.size(); ++i)
      obj[pts_.name(i)] = closurium::to_string(rational(a.val[i], chain_.resolution()));
    return obj;
  }
  element element_from_json(const json& j) const {
    if (!j.is_object()) throw validation_error("expected a point -> value object");
    std::vector<std::int32_t> vals(pts_.size(), 0);
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::size_t i = pts_.index_of(it.key());
      vals[i] = chain_.from_rational(parse_rational(it.value().get<std::string>())).num;
    }
    return wrap(std::move(vals));
  }

private:
  carrier pts_;
  heyting_chain chain_;
  std::vector<std::int32_t> alpha_;
  algebra_token tok_ = 0;
};

} // namespace closurium

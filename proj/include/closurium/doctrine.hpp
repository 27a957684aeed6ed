#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "closurium/algebra.hpp"

namespace closurium {

// ---------------------------------------------------------------------------
// finite maps between carriers
// ---------------------------------------------------------------------------

struct finite_map {
  carrier dom;
  carrier cod;
  std::vector<std::uint32_t> map; // dom index -> cod index

  finite_map(carrier dom_, carrier cod_, std::vector<std::uint32_t> map_)
      : dom(std::move(dom_)), cod(std::move(cod_)), map(std::move(map_)) {
    if (map.size() != dom.size()) throw validation_error("map is not total on its domain");
    for (auto t : map)
      if (t >= cod.size()) throw validation_error("map target out of range");
  }

  static finite_map identity(const carrier& c) {
    std::vector<std::uint32_t> m(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) m[i] = static_cast<std::uint32_t>(i);
    return finite_map(c, c, std::move(m));
  }

  static finite_map from_names(const carrier& dom, const carrier& cod,
                               const std::map<std::string, std::string>& assoc) {
    std::vector<std::uint32_t> m(dom.size());
    for (std::size_t i = 0; i < dom.size(); ++i) {
      auto it = assoc.find(dom.name(i));
      if (it == assoc.end()) throw validation_error("map is not total: missing " + dom.name(i));
      m[i] = static_cast<std::uint32_t>(cod.index_of(it->second));
    }
    return finite_map(dom, cod, std::move(m));
  }
};

inline finite_map compose(const finite_map& g, const finite_map& f) {
  // g after f
  if (f.cod.token() != g.dom.token()) throw validation_error("maps are not composable");
  std::vector<std::uint32_t> m(f.dom.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = g.map[f.map[i]];
  return finite_map(f.dom, g.cod, std::move(m));
}

// projections out of a row-major product a x b
inline finite_map projection_first(const carrier& a, const carrier& b) {
  carrier prod = product_carrier(a, b);
  std::vector<std::uint32_t> m(prod.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      m[i * b.size() + j] = static_cast<std::uint32_t>(i);
  return finite_map(std::move(prod), a, std::move(m));
}
inline finite_map projection_second(const carrier& a, const carrier& b) {
  carrier prod = product_carrier(a, b);
  std::vector<std::uint32_t> m(prod.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      m[i * b.size() + j] = static_cast<std::uint32_t>(j);
  return finite_map(std::move(prod), b, std::move(m));
}

// 1_a x f : a x dom(f) -> a x cod(f)
inline finite_map product_map_second(const carrier& a, const finite_map& f) {
  carrier dom = product_carrier(a, f.dom);
  carrier cod = product_carrier(a, f.cod);
  std::vector<std::uint32_t> m(dom.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < f.dom.size(); ++j)
      m[i * f.dom.size() + j] = static_cast<std::uint32_t>(i * f.cod.size() + f.map[j]);
  return finite_map(std::move(dom), std::move(cod), std::move(m));
}

// ---------------------------------------------------------------------------
// predicate transformations (powerset)
// ---------------------------------------------------------------------------

inline powerset_algebra::element preimage(const finite_map& f, const powerset_algebra& dom_alg,
                                          const powerset_algebra& cod_alg,
                                          const powerset_algebra::element& b) {
  cod_alg.check(b);
  if (dom_alg.points().token() != f.dom.token() || cod_alg.points().token() != f.cod.token())
    throw algebra_mismatch("map endpoints do not match the given algebras");
  bitset out(f.dom.size());
  for (std::size_t x = 0; x < f.dom.size(); ++x)
    if (b.bits.test(f.map[x])) out.set(x);
  return dom_alg.wrap(std::move(out));
}

inline powerset_algebra::element direct_image(const finite_map& f, const powerset_algebra& dom_alg,
                                              const powerset_algebra& cod_alg,
                                              const powerset_algebra::element& a) {
  dom_alg.check(a);
  if (dom_alg.points().token() != f.dom.token() || cod_alg.points().token() != f.cod.token())
    throw algebra_mismatch("map endpoints do not match the given algebras");
  bitset out(f.cod.size());
  for (auto x = a.bits.find_first(); x != bitset::npos; x = a.bits.find_next(x))
    out.set(f.map[x]);
  return cod_alg.wrap(std::move(out));
}

inline powerset_algebra::element universal_image(const finite_map& f,
                                                 const powerset_algebra& dom_alg,
                                                 const powerset_algebra& cod_alg,
                                                 const powerset_algebra::element& a) {
  dom_alg.check(a);
  if (dom_alg.points().token() != f.dom.token() || cod_alg.points().token() != f.cod.token())
    throw algebra_mismatch("map endpoints do not match the given algebras");
  // y is kept iff the whole fiber over y lies in a; empty fibers count
  bitset out(f.cod.size());
  out.set();
  for (std::size_t x = 0; x < f.dom.size(); ++x)
    if (!a.bits.test(x)) out.reset(f.map[x]);
  return cod_alg.wrap(std::move(out));
}

// fibered equality over a product algebra built from `base` x `base`
inline powerset_algebra::element diagonal(const powerset_algebra& prod_alg, const carrier& base) {
  if (prod_alg.size() != base.size() * base.size())
    throw validation_error("product algebra does not match the base carrier");
  bitset out(prod_alg.size());
  for (std::size_t i = 0; i < base.size(); ++i) out.set(i * base.size() + i);
  return prod_alg.wrap(std::move(out));
}

// ---------------------------------------------------------------------------
// predicate transformations (fuzzy)
// ---------------------------------------------------------------------------

// Arrows between fuzzy carriers must not drop membership.
inline void validate_fuzzy_map(const finite_map& f, const fuzzy_algebra& dom_alg,
                               const fuzzy_algebra& cod_alg) {
  if (dom_alg.points().token() != f.dom.token() || cod_alg.points().token() != f.cod.token())
    throw algebra_mismatch("map endpoints do not match the given algebras");
  if (dom_alg.chain().resolution() != cod_alg.chain().resolution())
    throw algebra_mismatch("chain resolutions differ");
  for (std::size_t x = 0; x < f.dom.size(); ++x)
    if (dom_alg.membership()[x] > cod_alg.membership()[f.map[x]])
      throw validation_error("membership not preserved at " + f.dom.name(x));
}

// x |-> alpha(x) /\ xi(f(x))
inline fuzzy_algebra::element preimage(const finite_map& f, const fuzzy_algebra& dom_alg,
                                       const fuzzy_algebra& cod_alg,
                                       const fuzzy_algebra::element& xi) {
  cod_alg.check(xi);
  validate_fuzzy_map(f, dom_alg, cod_alg);
  std::vector<std::int32_t> out(f.dom.size());
  for (std::size_t x = 0; x < f.dom.size(); ++x)
    out[x] = std::min(dom_alg.membership()[x], xi.val[f.map[x]]);
  return fuzzy_algebra::element{dom_alg.token(), std::move(out)};
}

// y |-> join over the fiber (bottom on empty fibers)
inline fuzzy_algebra::element direct_image(const finite_map& f, const fuzzy_algebra& dom_alg,
                                           const fuzzy_algebra& cod_alg,
                                           const fuzzy_algebra::element& xi) {
  dom_alg.check(xi);
  validate_fuzzy_map(f, dom_alg, cod_alg);
  std::vector<std::int32_t> out(f.cod.size(), 0);
  for (std::size_t x = 0; x < f.dom.size(); ++x)
    out[f.map[x]] = std::max(out[f.map[x]], xi.val[x]);
  return fuzzy_algebra::element{cod_alg.token(), std::move(out)};
}

// y |-> beta(y) /\ meet over the fiber of (alpha(x) => xi(x)); beta(y) on empty fibers
inline fuzzy_algebra::element universal_image(const finite_map& f, const fuzzy_algebra& dom_alg,
                                              const fuzzy_algebra& cod_alg,
                                              const fuzzy_algebra::element& xi) {
  dom_alg.check(xi);
  validate_fuzzy_map(f, dom_alg, cod_alg);
  const auto& chain = dom_alg.chain();
  std::vector<std::int32_t> out(f.cod.size());
  for (std::size_t y = 0; y < f.cod.size(); ++y) out[y] = cod_alg.membership()[y];
  for (std::size_t x = 0; x < f.dom.size(); ++x) {
    std::int32_t g = dom_alg.membership()[x] <= xi.val[x] ? chain.resolution() : xi.val[x];
    out[f.map[x]] = std::min(out[f.map[x]], g);
  }
  return fuzzy_algebra::element{cod_alg.token(), std::move(out)};
}

inline fuzzy_algebra product_fuzzy_algebra(const fuzzy_algebra& a, const fuzzy_algebra& b) {
  if (a.chain().resolution() != b.chain().resolution())
    throw algebra_mismatch("chain resolutions differ");
  carrier prod = product_carrier(a.points(), b.points());
  std::vector<std::int32_t> alpha(prod.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      alpha[i * b.size() + j] = std::min(a.membership()[i], b.membership()[j]);
  return fuzzy_algebra(std::move(prod), a.chain(), std::move(alpha));
}

// delta(x, x) = alpha(x), zero off the diagonal
inline fuzzy_algebra::element diagonal(const fuzzy_algebra& prod_alg, const fuzzy_algebra& base) {
  if (prod_alg.size() != base.size() * base.size())
    throw validation_error("product algebra does not match the base carrier");
  std::vector<std::int32_t> out(prod_alg.size(), 0);
  for (std::size_t i = 0; i < base.size(); ++i)
    out[i * base.size() + i] = base.membership()[i];
  return prod_alg.wrap(std::move(out));
}

// ---------------------------------------------------------------------------
// closure operators and the law suite
// ---------------------------------------------------------------------------

template <class A>
struct closure_operator {
  const A* algebra = nullptr;
  std::function<typename A::element(const typename A::element&)> apply;
  std::string name;
};

struct check_mode {
  bool exhaustive = true;
  std::uint32_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t cap = default_enumeration_cap;

  static check_mode exhaustive_mode(std::uint64_t cap = default_enumeration_cap) {
    return check_mode{true, 0, 0, cap};
  }
  static check_mode sampled(std::uint32_t n, std::uint64_t seed) {
    return check_mode{false, n, seed, default_enumeration_cap};
  }
};

enum class law_status { holds, fails, not_checked };

inline const char* to_string(law_status s) {
  switch (s) {
    case law_status::holds: return "holds";
    case law_status::fails: return "fails";
    default: return "not_checked";
  }
}

struct law_entry {
  law_status status = law_status::not_checked;
  json witness;                  // serialized violating element(s)
  // re-runs the violation on the stored witness; valid while the checked
  // operator (and its algebra) are alive
  std::function<bool()> reverify;
};

struct law_report {
  std::string operator_name;
  bool exhaustive = true;
  std::uint64_t seed = 0;
  std::uint32_t samples = 0;
  std::map<std::string, law_entry> laws;

  law_status status(const std::string& name) const {
    auto it = laws.find(name);
    return it == laws.end() ? law_status::not_checked : it->second.status;
  }
  const json& witness(const std::string& name) const { return laws.at(name).witness; }

  json to_json() const {
    json out;
    out["operator"] = operator_name;
    out["mode"] = exhaustive ? "exhaustive" : "sampled";
    out["seed"] = seed;
    if (!exhaustive) out["samples"] = samples;
    json l = json::object();
    for (const auto& [name, entry] : laws) {
      json e;
      e["status"] = to_string(entry.status);
      if (entry.status == law_status::fails) e["witness"] = entry.witness;
      l[name] = e;
    }
    out["laws"] = l;
    return out;
  }
};

namespace detail {

template <class A>
std::vector<typename A::element> law_check_population(const A& alg, const check_mode& mode) {
  std::vector<typename A::element> pop;
  if (mode.exhaustive) {
    alg.for_each_element([&](const typename A::element& e) { pop.push_back(e); }, mode.cap);
  } else {
    rng r(mode.seed);
    pop.push_back(alg.bottom());
    pop.push_back(alg.top());
    for (std::uint32_t i = 0; i < mode.samples; ++i) pop.push_back(alg.sample(r));
  }
  return pop;
}

} // namespace detail

// Checks the closure-operator laws over all elements (exhaustive) or a seeded
// sample. Failing laws carry the first witness found, in enumeration order.
template <class A>
law_report check_closure_laws(const closure_operator<A>& op, const check_mode& mode) {
  const A& alg = *op.algebra;
  law_report report;
  report.operator_name = op.name;
  report.exhaustive = mode.exhaustive;
  report.seed = mode.seed;
  report.samples = mode.samples;

  using element = typename A::element;
  auto pop = detail::law_check_population(alg, mode);

  auto set_fail = [&](const std::string& law, json witness, std::function<bool()> reverify) {
    law_entry e;
    e.status = law_status::fails;
    e.witness = std::move(witness);
    e.reverify = std::move(reverify);
    report.laws[law] = std::move(e);
  };
  auto set_hold = [&](const std::string& law) {
    if (!report.laws.count(law)) report.laws[law].status = law_status::holds;
  };

  // inflationary / idempotent: per element
  for (const auto& a : pop) {
    element ca = op.apply(a);
    if (report.status("inflationary") != law_status::fails && !alg.leq(a, ca)) {
      set_fail("inflationary", alg.element_to_json(a),
               [&alg, op, a]() { return !alg.leq(a, op.apply(a)); });
    }
    if (report.status("idempotent") != law_status::fails && !alg.equal(op.apply(ca), ca)) {
      set_fail("idempotent", alg.element_to_json(a), [&alg, op, a]() {
        auto c = op.apply(a);
        return !alg.equal(op.apply(c), c);
      });
    }
    if (report.status("inflationary") == law_status::fails &&
        report.status("idempotent") == law_status::fails)
      break;
  }
  set_hold("inflationary");
  set_hold("idempotent");

  // grounded: single check
  {
    element bot = alg.bottom();
    if (alg.is_bottom(op.apply(bot))) {
      set_hold("grounded");
    } else {
      set_fail("grounded", alg.element_to_json(op.apply(bot)),
               [&alg, op]() { return !alg.is_bottom(op.apply(alg.bottom())); });
    }
  }

  // monotone: via covers (exhaustive) or sampled comparable pairs
  {
    bool failed = false;
    auto check_pair = [&](const element& lo, const element& hi) {
      if (failed) return;
      if (!alg.leq(op.apply(lo), op.apply(hi))) {
        failed = true;
        set_fail("monotone", json::array({alg.element_to_json(lo), alg.element_to_json(hi)}),
                 [&alg, op, lo, hi]() { return !alg.leq(op.apply(lo), op.apply(hi)); });
      }
    };
    if (mode.exhaustive) {
      for (const auto& a : pop) {
        alg.for_each_cover(a, [&](const element& up) { check_pair(a, up); });
        if (failed) break;
      }
    } else {
      rng r(mode.seed + 1);
      for (std::uint32_t i = 0; i < mode.samples && !failed; ++i) {
        element a = alg.sample(r);
        element b = alg.join(a, alg.sample(r)); // a <= b
        check_pair(a, b);
      }
    }
    if (!failed) set_hold("monotone");
  }

  // additive: binary joins. In exhaustive mode it suffices to join each
  // element with every join-irreducible (covers all binary joins by
  // induction); witnesses stay small this way.
  {
    bool failed = false;
    auto check_pair = [&](const element& a, const element& b) {
      if (failed) return;
      element lhs = op.apply(alg.join(a, b));
      element rhs = alg.join(op.apply(a), op.apply(b));
      if (!alg.equal(lhs, rhs)) {
        failed = true;
        set_fail("additive", json::array({alg.element_to_json(a), alg.element_to_json(b)}),
                 [&alg, op, a, b]() {
                   return !alg.equal(op.apply(alg.join(a, b)),
                                     alg.join(op.apply(a), op.apply(b)));
                 });
      }
    };
    if (mode.exhaustive) {
      for (const auto& a : pop) {
        for (const auto& s : alg.atom_decomposition(alg.top())) {
          check_pair(a, s);
          if (failed) break;
        }
        if (failed) break;
      }
    } else {
      rng r(mode.seed + 2);
      for (std::uint32_t i = 0; i < mode.samples && !failed; ++i)
        check_pair(alg.sample(r), alg.sample(r));
    }
    if (!failed) set_hold("additive");
  }

  // fully additive: arbitrary nonempty joins; checked through the
  // join-irreducible decomposition of each element (exhaustive) or random
  // families (sampled)
  {
    bool failed = false;
    auto check_family = [&](const std::vector<element>& fam) {
      if (failed || fam.empty()) return;
      element joined = fam[0];
      element rhs = op.apply(fam[0]);
      for (std::size_t i = 1; i < fam.size(); ++i) {
        joined = alg.join(joined, fam[i]);
        rhs = alg.join(rhs, op.apply(fam[i]));
      }
      if (!alg.equal(op.apply(joined), rhs)) {
        failed = true;
        json w = json::array();
        for (const auto& e : fam) w.push_back(alg.element_to_json(e));
        set_fail("fully_additive", std::move(w), [&alg, op, fam]() {
          auto joined = fam[0];
          auto rhs = op.apply(fam[0]);
          for (std::size_t i = 1; i < fam.size(); ++i) {
            joined = alg.join(joined, fam[i]);
            rhs = alg.join(rhs, op.apply(fam[i]));
          }
          return !alg.equal(op.apply(joined), rhs);
        });
      }
    };
    if (mode.exhaustive) {
      for (const auto& a : pop) {
        auto atoms = alg.atom_decomposition(a);
        check_family(atoms);
        if (failed) break;
      }
      // binary joins are nonempty families too; reuse the additive verdict
      if (!failed && report.status("additive") == law_status::fails) {
        const auto& w = report.witness("additive");
        std::vector<element> fam{alg.element_from_json(w[0]), alg.element_from_json(w[1])};
        check_family(fam);
      }
    } else {
      rng r(mode.seed + 3);
      for (std::uint32_t i = 0; i < mode.samples && !failed; ++i) {
        std::vector<element> fam;
        std::size_t sz = 1 + r.next(4);
        for (std::size_t j = 0; j < sz; ++j) fam.push_back(alg.sample(r));
        check_family(fam);
      }
    }
    if (!failed) set_hold("fully_additive");
  }

  // finitely additive = grounded and additive
  {
    auto g = report.status("grounded");
    auto a = report.status("additive");
    law_entry e;
    if (g == law_status::holds && a == law_status::holds) {
      e.status = law_status::holds;
    } else {
      e.status = law_status::fails;
      e.witness = report.laws[g == law_status::fails ? "grounded" : "additive"].witness;
      e.reverify = report.laws[g == law_status::fails ? "grounded" : "additive"].reverify;
    }
    report.laws["finitely_additive"] = std::move(e);
  }

  return report;
}

// ---------------------------------------------------------------------------
// continuity and doctrine coherence checks (powerset)
// ---------------------------------------------------------------------------

using pow_element = powerset_algebra::element;

template <class E>
struct check_result {
  bool holds = true;
  std::optional<E> witness;                 // first violating element
  std::optional<std::pair<E, E>> witness2;  // for two-sided checks
};

// closure(preimage(b)) <= preimage(closure(b)) for all b over the codomain
template <class A>
check_result<typename A::element> check_map_continuity(const finite_map& f,
                                                       const closure_operator<A>& c_dom,
                                                       const closure_operator<A>& c_cod,
                                                       const check_mode& mode) {
  const A& dom_alg = *c_dom.algebra;
  const A& cod_alg = *c_cod.algebra;
  check_result<typename A::element> res;
  auto pop = detail::law_check_population(cod_alg, mode);
  for (const auto& b : pop) {
    auto lhs = c_dom.apply(preimage(f, dom_alg, cod_alg, b));
    auto rhs = preimage(f, dom_alg, cod_alg, c_cod.apply(b));
    if (!dom_alg.leq(lhs, rhs)) {
      res.holds = false;
      res.witness = b;
      return res;
    }
  }
  return res;
}

// direct_image(closure(a)) <= closure(direct_image(a)) for all a over the domain
template <class A>
check_result<typename A::element> check_image_inequality(const finite_map& f,
                                                         const closure_operator<A>& c_dom,
                                                         const closure_operator<A>& c_cod,
                                                         const check_mode& mode) {
  const A& dom_alg = *c_dom.algebra;
  const A& cod_alg = *c_cod.algebra;
  check_result<typename A::element> res;
  auto pop = detail::law_check_population(dom_alg, mode);
  for (const auto& a : pop) {
    auto lhs = direct_image(f, dom_alg, cod_alg, c_dom.apply(a));
    auto rhs = c_cod.apply(direct_image(f, dom_alg, cod_alg, a));
    if (!cod_alg.leq(lhs, rhs)) {
      res.holds = false;
      res.witness = a;
      return res;
    }
  }
  return res;
}

// exists_pi(preimage_pi(alpha) /\ beta) = alpha /\ exists_pi(beta)
// over the projection pi : D x C -> C
inline check_result<pow_element> check_frobenius(const carrier& d, const carrier& c,
                                                 const check_mode& mode) {
  powerset_algebra alg_c(c);
  powerset_algebra alg_dc(product_carrier(d, c));
  finite_map pi = projection_second(d, c);
  check_result<pow_element> res;
  auto alphas = detail::law_check_population(alg_c, mode);
  auto betas = detail::law_check_population(alg_dc, mode);
  for (const auto& alpha : alphas) {
    for (const auto& beta : betas) {
      auto lhs = direct_image(pi, alg_dc, alg_c,
                              alg_dc.meet(preimage(pi, alg_dc, alg_c, alpha), beta));
      auto rhs = alg_c.meet(alpha, direct_image(pi, alg_dc, alg_c, beta));
      if (!alg_c.equal(lhs, rhs)) {
        res.holds = false;
        res.witness2 = {alpha, beta};
        return res;
      }
    }
  }
  return res;
}

enum class quantifier { exists, forall };

// For f : C' -> C and the pullback square over the projections out of
// D x C' and D x C:  Q_{pi_{C'}} ( (1_D x f)^* theta ) = f^* ( Q_{pi_C} theta )
inline check_result<pow_element> check_beck_chevalley(const finite_map& f, const carrier& d,
                                                      quantifier q, const check_mode& mode) {
  const carrier& cprime = f.dom;
  const carrier& c = f.cod;
  powerset_algebra alg_c(c);
  powerset_algebra alg_cp(cprime);
  powerset_algebra alg_dc(product_carrier(d, c));
  powerset_algebra alg_dcp(product_carrier(d, cprime));
  finite_map pi_c = projection_second(d, c);
  finite_map pi_cp = projection_second(d, cprime);
  finite_map idf = product_map_second(d, f);

  auto quant = [&](const finite_map& pi, const powerset_algebra& from,
                   const powerset_algebra& to, const pow_element& e) {
    return q == quantifier::exists ? direct_image(pi, from, to, e)
                                   : universal_image(pi, from, to, e);
  };

  check_result<pow_element> res;
  auto thetas = detail::law_check_population(alg_dc, mode);
  for (const auto& theta : thetas) {
    auto lhs = quant(pi_cp, alg_dcp, alg_cp, preimage(idf, alg_dcp, alg_dc, theta));
    auto rhs = preimage(f, alg_cp, alg_c, quant(pi_c, alg_dc, alg_c, theta));
    if (!alg_cp.equal(lhs, rhs)) {
      res.holds = false;
      res.witness = theta;
      return res;
    }
  }
  return res;
}

} // namespace closurium

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "closurium/formula.hpp"
#include "closurium/parser.hpp"
#include "closurium/spaces.hpp"

namespace closurium {

struct caps {
  std::uint64_t enumeration = default_enumeration_cap; // algebra enumeration
  std::uint64_t until = 1ull << 16;                    // until-oracle candidate sets
  std::uint64_t paths = 1000000;                       // surrounded-oracle walks
  std::size_t context_vars = 3;                        // quantifier nesting
};

// ---------------------------------------------------------------------------
// until
// ---------------------------------------------------------------------------

// Greatest fixpoint of W |-> {w in phi : c({w}) <= W u psi}, shrinking from
// phi with a worklist. For additive closures this union equals the supremum
// of {W <= phi : boundary(W) <= psi}.
inline bitset until_fixpoint(const point_space& s, const bitset& phi, const bitset& psi) {
  std::size_t n = s.size();
  bitset w = phi;
  std::deque<std::uint32_t> queue;
  std::vector<char> queued(n, 0);
  auto violates = [&](std::uint32_t x) {
    for (auto t : s.steps()[x])
      if (!w.test(t) && !psi.test(t)) return true;
    return false;
  };
  for (auto x = phi.find_first(); x != bitset::npos; x = phi.find_next(x))
    if (violates(static_cast<std::uint32_t>(x))) {
      queue.push_back(static_cast<std::uint32_t>(x));
      queued[x] = 1;
    }
  while (!queue.empty()) {
    std::uint32_t x = queue.front();
    queue.pop_front();
    queued[x] = 0;
    if (!w.test(x)) continue;
    if (!violates(x)) continue;
    w.reset(x);
    if (psi.test(x)) continue; // x stays covered for its predecessors
    for (auto u : s.reverse_steps()[x])
      if (w.test(u) && !queued[u]) {
        queue.push_back(u);
        queued[u] = 1;
      }
  }
  return w;
}

struct until_result {
  bitset value;
  bool attained = false; // whether the join itself satisfies the boundary bound
};

// Literal enumeration of {W <= phi : closure(W) /\ ~W <= psi}; returns the
// join and whether the join is itself a member.
inline until_result until_oracle(const point_space& s, const bitset& phi, const bitset& psi,
                                 std::uint64_t cap = (1ull << 16)) {
  std::vector<std::uint32_t> support;
  for (auto x = phi.find_first(); x != bitset::npos; x = phi.find_next(x))
    support.push_back(static_cast<std::uint32_t>(x));
  if (support.size() >= 63 || (1ull << support.size()) > cap)
    throw too_large(support.size() >= 63 ? ~0ull : (1ull << support.size()), cap);

  std::size_t n = s.size();
  auto qualifies = [&](const bitset& w) {
    bitset boundary = s.closure_bits(w);
    boundary -= w;
    return boundary.is_subset_of(psi);
  };

  bitset join(n);
  for (std::uint64_t mask = 0; mask < (1ull << support.size()); ++mask) {
    bitset w(n);
    for (std::size_t i = 0; i < support.size(); ++i)
      if (mask & (1ull << i)) w.set(support[i]);
    if (qualifies(w)) join |= w;
  }
  return until_result{join, qualifies(join)};
}

// Dispatch: additive backends take the fixpoint, the rest fall back to the
// enumeration. The supremum always exists in a finite powerset.
inline bitset eval_until(const point_space& s, const bitset& phi, const bitset& psi,
                         const caps& limits = {}) {
  if (s.additive()) return until_fixpoint(s, phi, psi);
  return until_oracle(s, phi, psi, limits.until).value;
}

struct fuzzy_until_result {
  fuzzy_algebra::element value;
  bool attained = false;
};

// Fuzzy until: enumerate every candidate below phi and join the ones whose
// external boundary stays below psi.
inline fuzzy_until_result until_oracle_fuzzy(const fuzzy_space& s,
                                             const fuzzy_algebra::element& phi,
                                             const fuzzy_algebra::element& psi,
                                             std::uint64_t cap = (1ull << 16)) {
  const auto& alg = s.algebra();
  alg.check2(phi, psi);
  std::uint64_t count = 1;
  for (auto v : phi.val) {
    std::uint64_t m = static_cast<std::uint64_t>(v) + 1;
    count *= m;
    if (count > cap) throw too_large(count, cap);
  }
  auto qualifies = [&](const fuzzy_algebra::element& w) {
    return alg.leq(alg.meet(s.closure(w), alg.negation(w)), psi);
  };

  fuzzy_algebra::element join = alg.bottom();
  std::vector<std::int32_t> vals(alg.size(), 0);
  while (true) {
    fuzzy_algebra::element w{alg.token(), vals};
    if (qualifies(w)) join = alg.join(join, w);
    std::size_t i = 0;
    for (; i < vals.size(); ++i) {
      if (vals[i] < phi.val[i]) {
        ++vals[i];
        std::fill(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(i), 0);
        break;
      }
    }
    if (i == vals.size()) break;
  }
  return fuzzy_until_result{join, qualifies(join)};
}

// ---------------------------------------------------------------------------
// reachability
// ---------------------------------------------------------------------------

// Points reachable from phi along continuous paths; a path of shape
// {0..n-1} makes at most n-1 proper steps, stuttering allowed.
inline bitset reach(const point_space& s, const bitset& phi,
                    std::optional<std::uint32_t> bound = std::nullopt) {
  bitset seen = phi;
  std::vector<std::uint32_t> frontier;
  for (auto x = phi.find_first(); x != bitset::npos; x = phi.find_next(x))
    frontier.push_back(static_cast<std::uint32_t>(x));
  std::uint32_t max_steps = bound ? *bound - 1 : ~0u;
  for (std::uint32_t depth = 0; depth < max_steps && !frontier.empty(); ++depth) {
    std::vector<std::uint32_t> next;
    for (auto x : frontier)
      for (auto t : s.steps()[x])
        if (!seen.test(t)) {
          seen.set(t);
          next.push_back(t);
        }
    frontier.swap(next);
  }
  return seen;
}

// ---------------------------------------------------------------------------
// surrounded
// ---------------------------------------------------------------------------

// phi-points from which no escape exists: a point escapes iff it avoids psi
// and can walk, never touching psi, to a point outside both phi and psi.
inline bitset surrounded(const point_space& s, const bitset& phi, const bitset& psi) {
  bitset mask = ~psi;
  bitset target = mask & ~phi;
  bitset escaping = target;
  std::deque<std::uint32_t> queue;
  for (auto x = target.find_first(); x != bitset::npos; x = target.find_next(x))
    queue.push_back(static_cast<std::uint32_t>(x));
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    for (auto u : s.reverse_steps()[v])
      if (mask.test(u) && !escaping.test(u)) {
        escaping.set(u);
        queue.push_back(u);
      }
  }
  return phi - escaping;
}

// Literal escape-route semantics: enumerate continuous walks p of every
// length up to maxlen and drop from phi the image of each route that
//   (1) meets phi,
//   (2) from every phi-point can still reach a non-phi point along p,
//   (3) carries no psi-point between a phi-point and a later non-phi point.
inline bitset surrounded_oracle(const point_space& s, const bitset& phi, const bitset& psi,
                                std::uint32_t maxlen, std::uint64_t path_cap = 1000000) {
  std::size_t n = s.size();
  if (n == 0) return bitset();
  if (maxlen == 0) maxlen = static_cast<std::uint32_t>(n);

  // count walks first (each vertex has the stutter step available)
  {
    std::vector<std::uint64_t> ways(n, 1);
    std::uint64_t total = 0;
    for (std::uint32_t len = 1; len <= maxlen; ++len) {
      for (auto w : ways) {
        total += w;
        if (total > path_cap) throw too_large(total, path_cap);
      }
      if (len == maxlen) break;
      std::vector<std::uint64_t> next(n, 0);
      for (std::size_t v = 0; v < n; ++v) {
        next[v] += ways[v]; // stutter
        for (auto u : s.reverse_steps()[v]) next[v] += ways[u];
        next[v] = std::min(next[v], path_cap + 1);
      }
      ways.swap(next);
    }
  }

  bitset covered(n);
  std::vector<std::uint32_t> path;
  auto check_route = [&](const std::vector<std::uint32_t>& p) {
    std::size_t len = p.size();
    bool any_phi = false;
    for (auto v : p) any_phi |= phi.test(v);
    if (!any_phi) return;                 // (1)
    if (phi.test(p[len - 1])) return;     // (2): the last point must leave phi
    // (3)
    bool prefix_phi = false;
    std::vector<char> suffix_nonphi(len, 0);
    {
      bool acc = false;
      for (std::size_t i = len; i-- > 0;) {
        acc |= !phi.test(p[i]);
        suffix_nonphi[i] = acc;
      }
    }
    for (std::size_t t = 0; t < len; ++t) {
      prefix_phi |= phi.test(p[t]);
      if (prefix_phi && suffix_nonphi[t] && psi.test(p[t])) return;
    }
    for (auto v : p) covered.set(v);
  };

  std::function<void(std::uint32_t)> dfs = [&](std::uint32_t v) {
    path.push_back(v);
    check_route(path);
    if (path.size() < maxlen) {
      dfs(v); // stutter
      for (auto t : s.steps()[v]) dfs(t);
    }
    path.pop_back();
  };
  for (std::uint32_t v = 0; v < n; ++v) dfs(v);

  return phi - covered;
}

// ---------------------------------------------------------------------------
// connectedness
// ---------------------------------------------------------------------------

enum class connectivity_variant { one_sided, symmetric };

// Definitional check over all decompositions a = phi v psi with psi nonempty
// and closure(phi) /\ psi = bottom; the symmetric variant adds the mirrored
// separation condition and lets either part be the empty one.
inline bool connected_brute(const point_space& s, const bitset& a, connectivity_variant variant,
                            std::uint64_t cap = default_enumeration_cap) {
  std::vector<std::uint32_t> support;
  for (auto x = a.find_first(); x != bitset::npos; x = a.find_next(x))
    support.push_back(static_cast<std::uint32_t>(x));
  if (support.size() >= 63 || (1ull << support.size()) > cap)
    throw too_large(support.size() >= 63 ? ~0ull : (1ull << support.size()), cap);

  std::size_t n = s.size();
  std::uint64_t full = (1ull << support.size()) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) { // nonempty proper parts only
    bitset part(n), rest(n);
    for (std::size_t i = 0; i < support.size(); ++i)
      (mask & (1ull << i) ? part : rest).set(support[i]);
    bitset cpart = s.closure_bits(part);
    if ((cpart & rest).any()) continue;
    if (variant == connectivity_variant::symmetric) {
      bitset crest = s.closure_bits(rest);
      if ((crest & part).any()) continue;
    }
    return false; // separated decomposition found
  }
  return true;
}

// For additive closures separation is the absence of step edges, so the
// one-sided variant is strong connectivity of the step digraph restricted to
// a, and the symmetric variant is its weak connectivity.
inline bool connected_fast(const point_space& s, const bitset& a, connectivity_variant variant) {
  auto first = a.find_first();
  if (first == bitset::npos) return true;
  std::size_t total = a.count();
  auto sweep = [&](bool forward, bool backward) {
    bitset seen(s.size());
    seen.set(first);
    std::deque<std::uint32_t> queue{static_cast<std::uint32_t>(first)};
    std::size_t cnt = 1;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      auto visit = [&](std::uint32_t t) {
        if (a.test(t) && !seen.test(t)) {
          seen.set(t);
          ++cnt;
          queue.push_back(t);
        }
      };
      if (forward)
        for (auto t : s.steps()[v]) visit(t);
      if (backward)
        for (auto t : s.reverse_steps()[v]) visit(t);
    }
    return cnt == total;
  };
  if (variant == connectivity_variant::symmetric) return sweep(true, true);
  return sweep(true, false) && sweep(false, true);
}

inline bool is_connected(const point_space& s, const bitset& a, connectivity_variant variant,
                         const caps& limits = {}) {
  if (s.additive()) return connected_fast(s, a, variant);
  return connected_brute(s, a, variant, limits.enumeration);
}

// ---------------------------------------------------------------------------
// formula evaluation over point models
// ---------------------------------------------------------------------------

using context = std::vector<std::pair<std::string, const point_model*>>;

class point_evaluator {
public:
  explicit point_evaluator(std::vector<const point_model*> models, caps limits = {})
      : models_(std::move(models)), caps_(limits) {}

  const point_model* sort(const std::string& name) const {
    for (auto* m : models_)
      if (m->name == name) return m;
    throw unknown_sort(name);
  }

  // propositional evaluation over the model's own carrier
  bitset eval(const point_model& m, const formula& f) {
    context ctx{{"x", &m}};
    return eval(ctx, f);
  }

  bitset eval(const context& ctx, const formula& f) {
    if (ctx.empty()) throw validation_error("evaluation needs at least one context variable");
    if (ctx.size() > caps_.context_vars)
      throw too_large(ctx.size(), caps_.context_vars);
    return eval_node(ctx, f);
  }

private:
  std::size_t ctx_size(const context& ctx) const {
    std::size_t n = 1;
    for (const auto& [_, m] : ctx) n *= m->space.size();
    return n;
  }

  const point_space& space_for(const context& ctx) {
    if (ctx.size() == 1) return ctx[0].second->space;
    std::vector<const point_space*> key;
    for (const auto& [_, m] : ctx) key.push_back(&m->space);
    auto it = products_.find(key);
    if (it != products_.end()) return *it->second;
    auto sp = std::make_unique<point_space>(ctx[0].second->space);
    for (std::size_t i = 1; i < ctx.size(); ++i)
      sp = std::make_unique<point_space>(product_space(*sp, ctx[i].second->space));
    const point_space& ref = *sp;
    products_.emplace(std::move(key), std::move(sp));
    return ref;
  }

  // pull a predicate over variable #vi up to the whole context product
  bitset lift(const context& ctx, std::size_t vi, const bitset& b) const {
    std::size_t n = ctx_size(ctx);
    std::size_t inner = 1; // product of sizes after vi
    for (std::size_t i = vi + 1; i < ctx.size(); ++i) inner *= ctx[i].second->space.size();
    std::size_t vsize = ctx[vi].second->space.size();
    bitset out(n);
    for (std::size_t idx = 0; idx < n; ++idx)
      if (b.test((idx / inner) % vsize)) out.set(idx);
    return out;
  }

  bitset eval_node(const context& ctx, const formula& f) {
    std::size_t n = ctx_size(ctx);
    switch (f->kind) {
      case fkind::top: {
        bitset b(n);
        b.set();
        return b;
      }
      case fkind::bot:
        return bitset(n);
      case fkind::atom: {
        for (std::size_t vi = 0; vi < ctx.size(); ++vi) {
          auto it = ctx[vi].second->atoms.find(f->name);
          if (it != ctx[vi].second->atoms.end()) return lift(ctx, vi, it->second.bits);
        }
        throw unknown_atom(f->name);
      }
      case fkind::eq: {
        auto var_index = [&](const std::string& v) -> std::size_t {
          for (std::size_t i = ctx.size(); i-- > 0;)
            if (ctx[i].first == v) return i;
          throw validation_error("unbound variable: " + v);
        };
        std::size_t i = var_index(f->name), j = var_index(f->name2);
        if (ctx[i].second != ctx[j].second)
          throw validation_error("equality requires both variables of the same sort");
        std::vector<std::size_t> inner(ctx.size(), 1), sizes(ctx.size());
        for (std::size_t k = 0; k < ctx.size(); ++k) sizes[k] = ctx[k].second->space.size();
        for (std::size_t k = ctx.size(); k-- > 1;) inner[k - 1] = inner[k] * sizes[k];
        bitset out(n);
        for (std::size_t idx = 0; idx < n; ++idx)
          if ((idx / inner[i]) % sizes[i] == (idx / inner[j]) % sizes[j]) out.set(idx);
        return out;
      }
      case fkind::lnot:
        return ~eval_node(ctx, f->lhs);
      case fkind::land:
        return eval_node(ctx, f->lhs) & eval_node(ctx, f->rhs);
      case fkind::lor:
        return eval_node(ctx, f->lhs) | eval_node(ctx, f->rhs);
      case fkind::impl:
        return ~eval_node(ctx, f->lhs) | eval_node(ctx, f->rhs);
      case fkind::closure:
        return space_for(ctx).closure_bits(eval_node(ctx, f->lhs));
      case fkind::boundary: {
        bitset a = eval_node(ctx, f->lhs);
        return space_for(ctx).closure_bits(a) & ~a;
      }
      case fkind::until:
        return closurium::eval_until(space_for(ctx), eval_node(ctx, f->lhs),
                                     eval_node(ctx, f->rhs), caps_);
      case fkind::reach:
        return closurium::reach(space_for(ctx), eval_node(ctx, f->lhs), f->bound);
      case fkind::surrounded:
        return closurium::surrounded(space_for(ctx), eval_node(ctx, f->lhs),
                                     eval_node(ctx, f->rhs));
      case fkind::exists:
      case fkind::forall: {
        context inner_ctx = ctx;
        inner_ctx.emplace_back(f->name, sort(f->name2));
        if (inner_ctx.size() > caps_.context_vars) throw too_large(inner_ctx.size(), caps_.context_vars);
        bitset body = eval_node(inner_ctx, f->lhs);
        std::size_t vsize = inner_ctx.back().second->space.size();
        bitset out(n);
        if (f->kind == fkind::forall) out.set();
        for (std::size_t idx = 0; idx < n; ++idx) {
          if (f->kind == fkind::exists) {
            for (std::size_t v = 0; v < vsize; ++v)
              if (body.test(idx * vsize + v)) {
                out.set(idx);
                break;
              }
          } else {
            for (std::size_t v = 0; v < vsize; ++v)
              if (!body.test(idx * vsize + v)) {
                out.reset(idx);
                break;
              }
          }
        }
        return out;
      }
    }
    throw error("unreachable");
  }

  std::vector<const point_model*> models_;
  caps caps_;
  std::map<std::vector<const point_space*>, std::unique_ptr<point_space>> products_;
};

// convenience wrapper for a single model
inline bitset eval(const point_model& m, const formula& f, const caps& limits = {}) {
  point_evaluator ev({&m}, limits);
  return ev.eval(m, f);
}

inline bitset eval(const point_model& m, const std::string& text, const caps& limits = {}) {
  return eval(m, parse_formula(text), limits);
}

// ---------------------------------------------------------------------------
// formula evaluation over fuzzy models (propositional fragment)
// ---------------------------------------------------------------------------

inline fuzzy_algebra::element eval(const fuzzy_model& m, const formula& f,
                                   const caps& limits = {});

namespace detail {
inline fuzzy_algebra::element eval_fuzzy_node(const fuzzy_model& m, const formula& f,
                                              const caps& limits) {
  const auto& alg = m.space.algebra();
  switch (f->kind) {
    case fkind::top:
      return alg.top();
    case fkind::bot:
      return alg.bottom();
    case fkind::atom: {
      auto it = m.atoms.find(f->name);
      if (it == m.atoms.end()) throw unknown_atom(f->name);
      return it->second;
    }
    case fkind::lnot:
      return alg.negation(eval_fuzzy_node(m, f->lhs, limits));
    case fkind::land:
      return alg.meet(eval_fuzzy_node(m, f->lhs, limits), eval_fuzzy_node(m, f->rhs, limits));
    case fkind::lor:
      return alg.join(eval_fuzzy_node(m, f->lhs, limits), eval_fuzzy_node(m, f->rhs, limits));
    case fkind::impl:
      return alg.implication(eval_fuzzy_node(m, f->lhs, limits),
                             eval_fuzzy_node(m, f->rhs, limits));
    case fkind::closure:
      return m.space.closure(eval_fuzzy_node(m, f->lhs, limits));
    case fkind::boundary: {
      auto a = eval_fuzzy_node(m, f->lhs, limits);
      return alg.meet(m.space.closure(a), alg.negation(a));
    }
    case fkind::until:
      return until_oracle_fuzzy(m.space, eval_fuzzy_node(m, f->lhs, limits),
                                eval_fuzzy_node(m, f->rhs, limits), limits.until)
          .value;
    default:
      throw unsupported(std::string("operator not defined on fuzzy models: ") + to_string(f));
  }
}
} // namespace detail

inline fuzzy_algebra::element eval(const fuzzy_model& m, const formula& f, const caps& limits) {
  return detail::eval_fuzzy_node(m, f, limits);
}

// ---------------------------------------------------------------------------
// cross-operator harness: eval_until <= surrounded on sampled pairs
// ---------------------------------------------------------------------------

struct until_surrounded_report {
  std::uint64_t seed = 0;
  std::uint32_t samples = 0;
  struct violation {
    bitset phi, psi, until_value, surrounded_value;
  };
  std::vector<violation> violations;
  bool ok() const { return violations.empty(); }
};

inline until_surrounded_report check_until_leq_surrounded(const point_model& m,
                                                          std::uint32_t samples,
                                                          std::uint64_t seed,
                                                          const caps& limits = {}) {
  until_surrounded_report rep;
  rep.seed = seed;
  rep.samples = samples;
  rng r(seed);
  const auto& alg = m.space.algebra();
  for (std::uint32_t i = 0; i < samples; ++i) {
    bitset phi = alg.sample(r).bits;
    bitset psi = alg.sample(r).bits;
    bitset u = eval_until(m.space, phi, psi, limits);
    bitset s = surrounded(m.space, phi, psi);
    if (!u.is_subset_of(s))
      rep.violations.push_back({phi, psi, u, s});
  }
  return rep;
}

} // namespace closurium

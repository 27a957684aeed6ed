#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "closurium/errors.hpp"

namespace closurium {

enum class fkind {
  top,
  bot,
  atom,
  lnot,
  land,
  lor,
  impl,
  closure,    // C
  boundary,   // B, the external boundary
  until,      // U
  reach,      // R / R[n]
  surrounded, // S
  exists,
  forall,
  eq
};

struct formula_node;
using formula = std::shared_ptr<const formula_node>;

struct formula_node {
  fkind kind;
  std::string name;                  // atom name, bound variable, or eq lhs
  std::string name2;                 // binder sort, or eq rhs
  std::optional<std::uint32_t> bound; // reach path length (nullopt = unbounded)
  formula lhs;
  formula rhs;
};

inline formula f_top() { return std::make_shared<formula_node>(formula_node{fkind::top, "", "", {}, nullptr, nullptr}); }
inline formula f_bot() { return std::make_shared<formula_node>(formula_node{fkind::bot, "", "", {}, nullptr, nullptr}); }
inline formula f_atom(std::string name) {
  return std::make_shared<formula_node>(formula_node{fkind::atom, std::move(name), "", {}, nullptr, nullptr});
}
inline formula f_not(formula a) {
  return std::make_shared<formula_node>(formula_node{fkind::lnot, "", "", {}, std::move(a), nullptr});
}
inline formula f_and(formula a, formula b) {
  return std::make_shared<formula_node>(formula_node{fkind::land, "", "", {}, std::move(a), std::move(b)});
}
inline formula f_or(formula a, formula b) {
  return std::make_shared<formula_node>(formula_node{fkind::lor, "", "", {}, std::move(a), std::move(b)});
}
inline formula f_implies(formula a, formula b) {
  return std::make_shared<formula_node>(formula_node{fkind::impl, "", "", {}, std::move(a), std::move(b)});
}
inline formula f_closure(formula a) {
  return std::make_shared<formula_node>(formula_node{fkind::closure, "", "", {}, std::move(a), nullptr});
}
inline formula f_boundary(formula a) {
  return std::make_shared<formula_node>(formula_node{fkind::boundary, "", "", {}, std::move(a), nullptr});
}
inline formula f_until(formula a, formula b) {
  return std::make_shared<formula_node>(formula_node{fkind::until, "", "", {}, std::move(a), std::move(b)});
}
inline formula f_reach(formula a, std::optional<std::uint32_t> bound = std::nullopt) {
  return std::make_shared<formula_node>(formula_node{fkind::reach, "", "", bound, std::move(a), nullptr});
}
inline formula f_surrounded(formula a, formula b) {
  return std::make_shared<formula_node>(formula_node{fkind::surrounded, "", "", {}, std::move(a), std::move(b)});
}
inline formula f_exists(std::string var, std::string sort, formula body) {
  return std::make_shared<formula_node>(
      formula_node{fkind::exists, std::move(var), std::move(sort), {}, std::move(body), nullptr});
}
inline formula f_forall(std::string var, std::string sort, formula body) {
  return std::make_shared<formula_node>(
      formula_node{fkind::forall, std::move(var), std::move(sort), {}, std::move(body), nullptr});
}
inline formula f_eq(std::string a, std::string b) {
  return std::make_shared<formula_node>(formula_node{fkind::eq, std::move(a), std::move(b), {}, nullptr, nullptr});
}

// structural comparison; total order used for antecedent sets
inline int compare(const formula& a, const formula& b) {
  if (a == b) return 0;
  if (!a) return -1;
  if (!b) return 1;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
  if (int c = a->name2.compare(b->name2)) return c < 0 ? -1 : 1;
  if (a->bound != b->bound) return a->bound < b->bound ? -1 : 1;
  if (int c = compare(a->lhs, b->lhs)) return c;
  return compare(a->rhs, b->rhs);
}
inline bool equal(const formula& a, const formula& b) { return compare(a, b) == 0; }

// Precedence levels. Higher binds tighter:
//   4 unary (!, C, B, R)   3 &   2 |   1 U, S   0 ->, binders
namespace detail {
inline int precedence(fkind k) {
  switch (k) {
    case fkind::impl:
    case fkind::exists:
    case fkind::forall:
      return 0;
    case fkind::until:
    case fkind::surrounded:
      return 1;
    case fkind::lor:
      return 2;
    case fkind::land:
      return 3;
    default:
      return 4;
  }
}
} // namespace detail

inline std::string to_string(const formula& f);

namespace detail {
inline std::string print_at(const formula& f, int parent_level, bool right_operand) {
  int level = precedence(f->kind);
  std::string body;
  switch (f->kind) {
    case fkind::top: body = "true"; break;
    case fkind::bot: body = "false"; break;
    case fkind::atom: body = f->name; break;
    case fkind::eq: body = f->name + " = " + f->name2; break;
    case fkind::lnot: body = "!" + print_at(f->lhs, 4, false); break;
    case fkind::closure: body = "C(" + to_string(f->lhs) + ")"; break;
    case fkind::boundary: body = "B(" + to_string(f->lhs) + ")"; break;
    case fkind::reach:
      body = f->bound ? "R[" + std::to_string(*f->bound) + "](" + to_string(f->lhs) + ")"
                      : "R(" + to_string(f->lhs) + ")";
      break;
    case fkind::land:
      body = print_at(f->lhs, 3, false) + " & " + print_at(f->rhs, 3, true);
      break;
    case fkind::lor:
      body = print_at(f->lhs, 2, false) + " | " + print_at(f->rhs, 2, true);
      break;
    case fkind::until:
      body = print_at(f->lhs, 1, false) + " U " + print_at(f->rhs, 1, true);
      break;
    case fkind::surrounded:
      body = print_at(f->lhs, 1, false) + " S " + print_at(f->rhs, 1, true);
      break;
    case fkind::impl:
      body = print_at(f->lhs, 0, false) + " -> " + print_at(f->rhs, 0, true);
      break;
    case fkind::exists:
      body = "E " + f->name + ":" + f->name2 + ". " + to_string(f->lhs);
      break;
    case fkind::forall:
      body = "A " + f->name + ":" + f->name2 + ". " + to_string(f->lhs);
      break;
  }
  bool parens = false;
  if (level < parent_level) {
    parens = true;
  } else if (level == parent_level && right_operand) {
    // left-associative binary levels need parens on the right; implication
    // is right-associative so the mirror rule applies
    if (level == 1 || level == 2 || level == 3) parens = true;
  } else if (level == parent_level && !right_operand && level == 0 &&
             (f->kind == fkind::impl || f->kind == fkind::exists || f->kind == fkind::forall)) {
    parens = true;
  }
  return parens ? "(" + body + ")" : body;
}
} // namespace detail

inline std::string to_string(const formula& f) { return detail::print_at(f, 0, false); }

// variables with a free occurrence in f
inline void free_variables(const formula& f, std::vector<std::string>& bound,
                           std::vector<std::string>& out) {
  if (!f) return;
  switch (f->kind) {
    case fkind::eq: {
      for (const auto& v : {f->name, f->name2})
        if (std::find(bound.begin(), bound.end(), v) == bound.end() &&
            std::find(out.begin(), out.end(), v) == out.end())
          out.push_back(v);
      return;
    }
    case fkind::exists:
    case fkind::forall: {
      bound.push_back(f->name);
      free_variables(f->lhs, bound, out);
      bound.pop_back();
      return;
    }
    default:
      free_variables(f->lhs, bound, out);
      free_variables(f->rhs, bound, out);
  }
}
inline std::vector<std::string> free_variables(const formula& f) {
  std::vector<std::string> bound, out;
  free_variables(f, bound, out);
  return out;
}

inline void collect_atoms(const formula& f, std::vector<std::string>& out) {
  if (!f) return;
  if (f->kind == fkind::atom) {
    if (std::find(out.begin(), out.end(), f->name) == out.end()) out.push_back(f->name);
    return;
  }
  collect_atoms(f->lhs, out);
  collect_atoms(f->rhs, out);
}

} // namespace closurium

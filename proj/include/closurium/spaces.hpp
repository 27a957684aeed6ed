#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "closurium/algebra.hpp"
#include "closurium/doctrine.hpp"
#include "closurium/pgm.hpp"
#include "closurium/rational.hpp"

namespace closurium {

enum class space_kind {
  graph,             // quasi-discrete: closure adds relational neighbours
  grid,              // graph induced by 4- or 8-adjacency, symmetric
  kripke_pre,        // adds points whose successors all lie inside
  kripke_suc,        // adds all successors of members
  markov,            // threshold closure over exact row distributions
  explicit_table,    // closure table over all subsets (<= 20 points)
  explicit_additive  // singleton closures extended by unions
};

inline const char* to_string(space_kind k) {
  switch (k) {
    case space_kind::graph: return "graph";
    case space_kind::grid: return "grid";
    case space_kind::kripke_pre: return "kripke-pre";
    case space_kind::kripke_suc: return "kripke-suc";
    case space_kind::markov: return "markov";
    case space_kind::explicit_table: return "explicit";
    case space_kind::explicit_additive: return "explicit-additive";
  }
  return "?";
}

enum class edge_direction { forward, backward, symmetric };

// Flat CSR adjacency; target lists stay sorted and duplicate-free.
class adjacency {
public:
  adjacency() = default;
  static adjacency from_lists(const std::vector<std::vector<std::uint32_t>>& lists) {
    adjacency a;
    a.offsets_.reserve(lists.size() + 1);
    a.offsets_.push_back(0);
    std::size_t total = 0;
    for (const auto& l : lists) total += l.size();
    a.targets_.reserve(total);
    for (const auto& l : lists) {
      a.targets_.insert(a.targets_.end(), l.begin(), l.end());
      a.offsets_.push_back(static_cast<std::uint32_t>(a.targets_.size()));
    }
    return a;
  }
  std::span<const std::uint32_t> operator[](std::size_t x) const {
    return {targets_.data() + offsets_[x], targets_.data() + offsets_[x + 1]};
  }
  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size(); }

  adjacency reversed() const {
    std::size_t n = size();
    std::vector<std::uint32_t> degree(n, 0);
    for (auto t : targets_) ++degree[t];
    adjacency r;
    r.offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) r.offsets_[v + 1] = r.offsets_[v] + degree[v];
    r.targets_.resize(targets_.size());
    std::vector<std::uint32_t> cursor(r.offsets_.begin(), r.offsets_.end() - 1);
    for (std::size_t x = 0; x < n; ++x)
      for (auto t : (*this)[x]) r.targets_[cursor[t]++] = static_cast<std::uint32_t>(x);
    return r;
  }

private:
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> targets_;
};

// ---------------------------------------------------------------------------
// point_space: a finite carrier with a closure operator on its powerset
// ---------------------------------------------------------------------------

class point_space {
public:
  point_space() = default;

  static point_space make_graph(carrier pts,
                                const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                edge_direction dir = edge_direction::forward) {
    point_space s;
    s.kind_ = space_kind::graph;
    s.init_carrier(std::move(pts));
    std::vector<std::vector<std::uint32_t>> adj(s.pts_.size());
    auto add = [&](std::uint32_t a, std::uint32_t b) {
      if (a >= s.pts_.size() || b >= s.pts_.size())
        throw validation_error("edge endpoint out of range");
      adj[a].push_back(b);
    };
    for (auto [a, b] : edges) {
      if (dir == edge_direction::forward || dir == edge_direction::symmetric) add(a, b);
      if (dir == edge_direction::backward || dir == edge_direction::symmetric) add(b, a);
    }
    s.succ_ = normalize_adjacency(adj, /*drop_self=*/true);
    s.finish();
    return s;
  }

  static point_space make_grid(std::size_t width, std::size_t height, bool moore8) {
    if (width == 0 || height == 0) throw validation_error("grid dimensions must be positive");
    std::vector<std::string> names;
    names.reserve(width * height);
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t x = 0; x < width; ++x)
        names.push_back(std::to_string(x) + "," + std::to_string(y));
    point_space s;
    s.kind_ = space_kind::grid;
    s.grid_w_ = width;
    s.grid_h_ = height;
    s.init_carrier(carrier(std::move(names)));
    s.succ_.assign(width * height, {});
    auto idx = [&](std::size_t x, std::size_t y) { return y * width + x; };
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        auto& out = s.succ_[idx(x, y)];
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (!moore8 && dx != 0 && dy != 0) continue;
            long nx = static_cast<long>(x) + dx, ny = static_cast<long>(y) + dy;
            if (nx < 0 || ny < 0 || nx >= static_cast<long>(width) ||
                ny >= static_cast<long>(height))
              continue;
            out.push_back(static_cast<std::uint32_t>(idx(nx, ny)));
          }
        }
      }
    }
    s.finish();
    return s;
  }

  static point_space make_kripke(carrier pts, std::vector<std::vector<std::uint32_t>> gamma,
                                 bool successor_closure) {
    point_space s;
    s.kind_ = successor_closure ? space_kind::kripke_suc : space_kind::kripke_pre;
    s.init_carrier(std::move(pts));
    if (gamma.size() != s.pts_.size()) throw validation_error("gamma is not total");
    for (auto& g : gamma)
      for (auto t : g)
        if (t >= s.pts_.size()) throw validation_error("gamma target out of range");
    s.gamma_ = normalize_adjacency(gamma, /*drop_self=*/false);
    if (successor_closure) s.succ_ = normalize_adjacency(s.gamma_, /*drop_self=*/true);
    s.finish();
    return s;
  }

  static point_space make_markov(carrier pts, std::vector<std::vector<rational>> rows,
                                 rational threshold) {
    point_space s;
    s.kind_ = space_kind::markov;
    s.init_carrier(std::move(pts));
    if (rows.size() != s.pts_.size()) throw validation_error("rows are not total");
    for (std::size_t x = 0; x < rows.size(); ++x) {
      if (rows[x].size() != s.pts_.size())
        throw validation_error("row length mismatch at " + s.pts_.name(x));
      rational sum(0);
      for (const auto& p : rows[x]) {
        if (p < rational(0)) throw validation_error("negative probability at " + s.pts_.name(x));
        sum += p;
      }
      if (sum != rational(1))
        throw validation_error("row of " + s.pts_.name(x) + " sums to " + to_string(sum) +
                               ", expected 1");
    }
    if (threshold < rational(0) || threshold > rational(1))
      throw validation_error("threshold must lie in [0,1]");
    s.rows_ = std::move(rows);
    s.threshold_ = threshold;
    s.finish();
    return s;
  }

  static point_space make_explicit_additive(carrier pts,
                                            std::vector<std::vector<std::uint32_t>> singletons) {
    point_space s;
    s.kind_ = space_kind::explicit_additive;
    s.init_carrier(std::move(pts));
    if (s.pts_.size() > 20) throw validation_error("explicit spaces are limited to 20 points");
    if (singletons.size() != s.pts_.size())
      throw validation_error("singleton closure table is not total");
    for (std::size_t x = 0; x < singletons.size(); ++x) {
      bool has_self = false;
      for (auto t : singletons[x]) {
        if (t >= s.pts_.size()) throw validation_error("closure target out of range");
        if (t == x) has_self = true;
      }
      if (!has_self)
        throw validation_error("not inflationary: closure of {" + s.pts_.name(x) +
                               "} misses the point itself");
    }
    s.succ_ = normalize_adjacency(singletons, /*drop_self=*/true);
    s.finish();
    return s;
  }

  // table[mask] = closure mask, for every subset mask of the carrier
  static point_space make_explicit_table(carrier pts, std::vector<std::uint32_t> table) {
    point_space s;
    s.kind_ = space_kind::explicit_table;
    s.init_carrier(std::move(pts));
    std::size_t n = s.pts_.size();
    if (n > 20) throw validation_error("explicit spaces are limited to 20 points");
    if (table.size() != (1ull << n))
      throw validation_error("closure table must cover all " + std::to_string(1ull << n) +
                             " subsets");
    std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1u);
    for (std::size_t m = 0; m < table.size(); ++m) {
      if ((table[m] & ~full) != 0) throw validation_error("closure table value out of range");
      if ((m & ~static_cast<std::size_t>(table[m])) != 0)
        throw validation_error("not inflationary: closure of subset " + std::to_string(m) +
                               " drops a member");
    }
    for (std::size_t m = 0; m < table.size(); ++m) {
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t up = m | (1ull << i);
        if (up == m) continue;
        if ((table[m] & ~table[up]) != 0)
          throw validation_error("not monotone: closure shrinks from subset " + std::to_string(m) +
                                 " to " + std::to_string(up));
      }
    }
    s.table_ = std::move(table);
    s.finish();
    return s;
  }

  const carrier& points() const { return pts_; }
  const powerset_algebra& algebra() const { return alg_; }
  std::size_t size() const { return pts_.size(); }
  space_kind kind() const { return kind_; }
  std::size_t grid_width() const { return grid_w_; }
  std::size_t grid_height() const { return grid_h_; }

  // additive by construction (union of singleton closures)
  bool additive() const {
    switch (kind_) {
      case space_kind::graph:
      case space_kind::grid:
      case space_kind::kripke_suc:
      case space_kind::explicit_additive:
        return true;
      default:
        return false;
    }
  }

  bitset closure_bits(const bitset& a) const {
    if (additive()) {
      // steps_ holds exactly the singleton closures minus the points
      bitset out = a;
      for (auto x = a.find_first(); x != bitset::npos; x = a.find_next(x))
        for (auto t : steps_[x]) out.set(t);
      return out;
    }
    return closure_bits_impl(a);
  }

private:
  bitset closure_bits_impl(const bitset& a) const {
    switch (kind_) {
      case space_kind::kripke_pre: {
        bitset out = a;
        for (std::size_t x = 0; x < pts_.size(); ++x) {
          bool all_in = true;
          for (auto t : gamma_[x])
            if (!a.test(t)) {
              all_in = false;
              break;
            }
          if (all_in) out.set(x);
        }
        return out;
      }
      case space_kind::markov: {
        bitset out = a;
        for (std::size_t x = 0; x < pts_.size(); ++x) {
          if (out.test(x)) continue;
          rational sum(0);
          for (auto t = a.find_first(); t != bitset::npos; t = a.find_next(t))
            sum += rows_[x][t];
          if (sum >= threshold_) out.set(x);
        }
        return out;
      }
      case space_kind::explicit_table: {
        std::uint32_t mask = 0;
        for (auto x = a.find_first(); x != bitset::npos; x = a.find_next(x))
          mask |= 1u << x;
        std::uint32_t cm = table_[mask];
        bitset out(pts_.size());
        for (std::size_t i = 0; i < pts_.size(); ++i)
          if (cm & (1u << i)) out.set(i);
        return out;
      }
      default:
        throw error("unreachable");
    }
  }

public:
  powerset_algebra::element closure(const powerset_algebra::element& a) const {
    alg_.check(a);
    return alg_.wrap(closure_bits(a.bits));
  }

  closure_operator<powerset_algebra> as_operator() const {
    return closure_operator<powerset_algebra>{
        &alg_, [this](const powerset_algebra::element& a) { return closure(a); },
        std::string(to_string(kind_))};
  }

  // step relation of the space: y in steps(x) iff y != x and y lies in the
  // closure of {x}; continuous paths move along exactly these (or stutter)
  const adjacency& steps() const { return steps_; }
  const adjacency& reverse_steps() const { return rsteps_; }

  const std::vector<std::vector<std::uint32_t>>& kripke_gamma() const { return gamma_; }
  const std::vector<std::vector<rational>>& markov_rows() const { return rows_; }
  const rational& markov_threshold() const { return threshold_; }

private:
  void init_carrier(carrier pts) {
    pts_ = std::move(pts);
    alg_ = powerset_algebra(pts_);
  }

  static std::vector<std::vector<std::uint32_t>> normalize_adjacency(
      std::vector<std::vector<std::uint32_t>> adj, bool drop_self) {
    for (std::size_t x = 0; x < adj.size(); ++x) {
      auto& v = adj[x];
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      if (drop_self)
        v.erase(std::remove(v.begin(), v.end(), static_cast<std::uint32_t>(x)), v.end());
    }
    return adj;
  }

  // precompute the step relation so spaces are immutable after build
  void finish() {
    std::size_t n = pts_.size();
    if (additive()) {
      steps_ = adjacency::from_lists(succ_);
      succ_.clear();
      succ_.shrink_to_fit();
    } else {
      std::vector<std::vector<std::uint32_t>> lists(n);
      for (std::size_t x = 0; x < n; ++x) {
        bitset sx(n);
        sx.set(x);
        bitset cx = closure_bits_impl(sx);
        for (auto t = cx.find_first(); t != bitset::npos; t = cx.find_next(t))
          if (t != x) lists[x].push_back(static_cast<std::uint32_t>(t));
      }
      steps_ = adjacency::from_lists(lists);
    }
    rsteps_ = steps_.reversed();
  }

  carrier pts_;
  powerset_algebra alg_;
  space_kind kind_ = space_kind::graph;
  std::vector<std::vector<std::uint32_t>> succ_; // cleared once steps_ is built
  adjacency steps_;
  adjacency rsteps_;
  std::vector<std::vector<std::uint32_t>> gamma_;
  std::vector<std::vector<rational>> rows_;
  rational threshold_ = rational(0);
  std::vector<std::uint32_t> table_;
  std::size_t grid_w_ = 0, grid_h_ = 0;
};

// Componentwise-induced product: the closure of a pair singleton is
// c1({x}) x {y}  union  {x} x c2({y}), extended additively.
inline point_space product_space(const point_space& s1, const point_space& s2) {
  if (s1.kind() == space_kind::markov || s2.kind() == space_kind::markov)
    throw unsupported("products of threshold (markov) spaces are not defined");
  if (s1.kind() == space_kind::explicit_table || s2.kind() == space_kind::explicit_table)
    throw unsupported("products of non-additive table spaces are not defined");
  std::size_t n1 = s1.size(), n2 = s2.size();
  carrier prod = product_carrier(s1.points(), s2.points());
  std::vector<std::vector<std::uint32_t>> singletons(n1 * n2);
  for (std::size_t x = 0; x < n1; ++x) {
    for (std::size_t y = 0; y < n2; ++y) {
      auto& out = singletons[x * n2 + y];
      out.push_back(static_cast<std::uint32_t>(x * n2 + y));
      for (auto t : s1.steps()[x]) out.push_back(static_cast<std::uint32_t>(t * n2 + y));
      for (auto t : s2.steps()[y]) out.push_back(static_cast<std::uint32_t>(x * n2 + t));
    }
  }
  // assemble through the graph constructor: edges = steps of the product
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::size_t i = 0; i < singletons.size(); ++i)
    for (auto t : singletons[i])
      if (t != i) edges.emplace_back(static_cast<std::uint32_t>(i), t);
  return point_space::make_graph(std::move(prod), edges, edge_direction::forward);
}

// ---------------------------------------------------------------------------
// fuzzy_space: chain-valued predicates with the capped epsilon closure
// ---------------------------------------------------------------------------

class fuzzy_space {
public:
  fuzzy_space() = default;
  fuzzy_space(carrier pts, heyting_chain chain, std::vector<std::int32_t> alpha,
              std::vector<std::int32_t> epsilon)
      : alg_(std::move(pts), chain, std::move(alpha)), eps_(std::move(epsilon)) {
    if (eps_.size() != alg_.size()) throw validation_error("epsilon is not total");
    for (auto v : eps_)
      if (v < 0 || v > chain.resolution()) throw validation_error("epsilon value out of range");
  }

  const fuzzy_algebra& algebra() const { return alg_; }
  const carrier& points() const { return alg_.points(); }
  std::size_t size() const { return alg_.size(); }
  const std::vector<std::int32_t>& epsilon() const { return eps_; }

  // c(xi) = (xi + eps) /\ alpha, addition capped at 1
  fuzzy_algebra::element closure(const fuzzy_algebra::element& xi) const {
    alg_.check(xi);
    std::int32_t k = alg_.chain().resolution();
    std::vector<std::int32_t> out(alg_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = std::min(std::min(xi.val[i] + eps_[i], k), alg_.membership()[i]);
    return fuzzy_algebra::element{alg_.token(), std::move(out)};
  }

  closure_operator<fuzzy_algebra> as_operator() const {
    return closure_operator<fuzzy_algebra>{
        &alg_, [this](const fuzzy_algebra::element& a) { return closure(a); }, "fuzzy-epsilon"};
  }

private:
  fuzzy_algebra alg_;
  std::vector<std::int32_t> eps_;
};

// ---------------------------------------------------------------------------
// models: a space plus an atomic-proposition valuation
// ---------------------------------------------------------------------------

struct point_model {
  std::string name;
  point_space space;
  std::map<std::string, powerset_algebra::element> atoms;
};

struct fuzzy_model {
  std::string name;
  fuzzy_space space;
  std::map<std::string, fuzzy_algebra::element> atoms;
};

using model = std::variant<point_model, fuzzy_model>;

inline const std::string& model_name(const model& m) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, m);
}

// ---------------------------------------------------------------------------
// model files
// ---------------------------------------------------------------------------

namespace detail {

inline carrier carrier_from_json(const json& j) {
  if (!j.is_array()) throw validation_error("'points' must be an array of names");
  std::vector<std::string> names;
  for (const auto& v : j) names.push_back(v.get<std::string>());
  return carrier(std::move(names));
}

inline powerset_algebra::element atom_from_json(const powerset_algebra& alg, const json& j,
                                                const point_space& space,
                                                const std::string& base_dir) {
  if (j.is_array()) return alg.element_from_json(j);
  if (j.is_object() && j.contains("pgm")) {
    if (space.kind() != space_kind::grid)
      throw validation_error("pgm atoms are only defined for grid models");
    std::string path = j.at("pgm").get<std::string>();
    if (!path.empty() && path[0] != '/' && !base_dir.empty()) path = base_dir + "/" + path;
    pgm_image img = read_pgm_file(path);
    if (img.width != space.grid_width() || img.height != space.grid_height())
      throw validation_error("pgm dimensions do not match the grid");
    long threshold = j.value("threshold", 128);
    bitset b(alg.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
      if (img.pixels[i] >= threshold) b.set(i);
    return alg.wrap(std::move(b));
  }
  throw validation_error("atom value must be a point list or a pgm reference");
}

} // namespace detail

inline model load_model(const json& j, const std::string& base_dir = "") {
  if (!j.is_object()) throw validation_error("model file must be a JSON object");
  if (j.contains("schema") && j.at("schema").get<int>() != 1)
    throw validation_error("unsupported schema version");
  std::string type = j.at("type").get<std::string>();
  std::string name = j.value("name", "");

  if (type == "fuzzy") {
    carrier pts = detail::carrier_from_json(j.at("points"));
    heyting_chain chain(j.at("k").get<std::int32_t>());
    std::vector<std::int32_t> alpha(pts.size(), chain.resolution());
    if (j.contains("alpha")) {
      for (auto it = j.at("alpha").begin(); it != j.at("alpha").end(); ++it)
        alpha[pts.index_of(it.key())] =
            chain.from_rational(parse_rational(it.value().get<std::string>())).num;
    }
    std::vector<std::int32_t> eps(pts.size(), 0);
    if (j.contains("epsilon")) {
      const auto& je = j.at("epsilon");
      if (je.is_string()) {
        auto v = chain.from_rational(parse_rational(je.get<std::string>())).num;
        eps.assign(pts.size(), v);
      } else {
        for (auto it = je.begin(); it != je.end(); ++it)
          eps[pts.index_of(it.key())] =
              chain.from_rational(parse_rational(it.value().get<std::string>())).num;
      }
    }
    fuzzy_model fm{name, fuzzy_space(pts, chain, std::move(alpha), std::move(eps)), {}};
    if (j.contains("atoms")) {
      for (auto it = j.at("atoms").begin(); it != j.at("atoms").end(); ++it)
        fm.atoms.emplace(it.key(), fm.space.algebra().element_from_json(it.value()));
    }
    return fm;
  }

  point_space space;
  if (type == "graph") {
    carrier pts = detail::carrier_from_json(j.at("points"));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const auto& e : j.value("edges", json::array())) {
      if (!e.is_array() || e.size() != 2) throw validation_error("edges must be [from,to] pairs");
      edges.emplace_back(static_cast<std::uint32_t>(pts.index_of(e[0].get<std::string>())),
                         static_cast<std::uint32_t>(pts.index_of(e[1].get<std::string>())));
    }
    edge_direction dir = edge_direction::forward;
    std::string d = j.value("direction", "forward");
    if (d == "backward") dir = edge_direction::backward;
    else if (d == "symmetric") dir = edge_direction::symmetric;
    else if (d != "forward") throw validation_error("unknown direction: " + d);
    space = point_space::make_graph(std::move(pts), edges, dir);
  } else if (type == "grid") {
    std::size_t w = j.at("width").get<std::size_t>();
    std::size_t h = j.at("height").get<std::size_t>();
    std::string adj = j.value("adjacency", "von-neumann-4");
    bool moore = adj == "moore-8";
    if (!moore && adj != "von-neumann-4") throw validation_error("unknown adjacency: " + adj);
    space = point_space::make_grid(w, h, moore);
  } else if (type == "kripke") {
    carrier pts = detail::carrier_from_json(j.at("points"));
    std::vector<std::vector<std::uint32_t>> gamma(pts.size());
    for (auto it = j.at("gamma").begin(); it != j.at("gamma").end(); ++it) {
      auto& g = gamma[pts.index_of(it.key())];
      for (const auto& t : it.value())
        g.push_back(static_cast<std::uint32_t>(pts.index_of(t.get<std::string>())));
    }
    std::string cl = j.value("closure", "pre");
    if (cl != "pre" && cl != "suc") throw validation_error("kripke closure must be pre or suc");
    space = point_space::make_kripke(std::move(pts), std::move(gamma), cl == "suc");
  } else if (type == "markov") {
    carrier pts = detail::carrier_from_json(j.at("points"));
    std::vector<std::vector<rational>> rows(pts.size(),
                                            std::vector<rational>(pts.size(), rational(0)));
    for (auto it = j.at("rows").begin(); it != j.at("rows").end(); ++it) {
      auto& row = rows[pts.index_of(it.key())];
      for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
        row[pts.index_of(jt.key())] = parse_rational(jt.value().get<std::string>());
    }
    rational p = parse_rational(j.at("threshold").get<std::string>());
    space = point_space::make_markov(std::move(pts), std::move(rows), p);
  } else if (type == "explicit") {
    carrier pts = detail::carrier_from_json(j.at("points"));
    if (j.value("additive", false)) {
      std::vector<std::vector<std::uint32_t>> singles(pts.size());
      for (auto it = j.at("singletons").begin(); it != j.at("singletons").end(); ++it) {
        auto& s = singles[pts.index_of(it.key())];
        for (const auto& t : it.value())
          s.push_back(static_cast<std::uint32_t>(pts.index_of(t.get<std::string>())));
      }
      space = point_space::make_explicit_additive(std::move(pts), std::move(singles));
    } else {
      std::size_t n = pts.size();
      if (n > 20) throw validation_error("explicit spaces are limited to 20 points");
      std::vector<std::uint32_t> table(1ull << n, ~0u);
      std::vector<bool> seen(1ull << n, false);
      auto mask_of = [&](const json& arr) {
        std::uint32_t m = 0;
        for (const auto& v : arr) m |= 1u << pts.index_of(v.get<std::string>());
        return m;
      };
      for (const auto& entry : j.at("table")) {
        std::uint32_t m = mask_of(entry.at("set"));
        if (seen[m]) throw validation_error("duplicate table entry");
        seen[m] = true;
        table[m] = mask_of(entry.at("closure"));
      }
      for (std::size_t m = 0; m < seen.size(); ++m)
        if (!seen[m]) throw validation_error("closure table is missing a subset");
      space = point_space::make_explicit_table(std::move(pts), std::move(table));
    }
  } else {
    throw validation_error("unknown model type: " + type);
  }

  point_model pm{name, std::move(space), {}};
  if (j.contains("atoms")) {
    for (auto it = j.at("atoms").begin(); it != j.at("atoms").end(); ++it)
      pm.atoms.emplace(it.key(), detail::atom_from_json(pm.space.algebra(), it.value(), pm.space,
                                                        base_dir));
  }
  return pm;
}

inline model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw validation_error("malformed JSON in " + path + ": " + e.what());
  }
  std::string dir = std::filesystem::path(path).parent_path().string();
  model m = load_model(j, dir);
  if (model_name(m).empty()) {
    std::string stem = std::filesystem::path(path).stem().string();
    std::visit([&](auto& x) { x.name = stem; }, m);
  }
  return m;
}

} // namespace closurium

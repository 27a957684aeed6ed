#include <catch2/catch_amalgamated.hpp>

#include "closurium/random_models.hpp"
#include "closurium/spaces.hpp"

using namespace closurium;

namespace {

// definition-literal closure recomputation, independent of the backends
bitset naive_closure(const point_space& s, const bitset& a) {
  std::size_t n = s.size();
  bitset out = a;
  switch (s.kind()) {
    case space_kind::graph:
    case space_kind::grid:
    case space_kind::explicit_additive: {
      // a point y joins when some member has an edge onto y; the step lists
      // of these kinds are exactly the edge lists
      for (std::size_t x = 0; x < n; ++x)
        if (a.test(x))
          for (auto t : s.steps()[x]) out.set(t);
      return out;
    }
    case space_kind::kripke_suc: {
      for (std::size_t x = 0; x < n; ++x)
        if (a.test(x))
          for (auto t : s.kripke_gamma()[x]) out.set(t);
      return out;
    }
    case space_kind::kripke_pre: {
      for (std::size_t x = 0; x < n; ++x) {
        bool all = true;
        for (auto t : s.kripke_gamma()[x]) all &= a.test(t);
        if (all) out.set(x);
      }
      return out;
    }
    case space_kind::markov: {
      for (std::size_t x = 0; x < n; ++x) {
        rational sum(0);
        for (std::size_t t = 0; t < n; ++t)
          if (a.test(t)) sum += s.markov_rows()[x][t];
        if (sum >= s.markov_threshold()) out.set(x);
      }
      return out;
    }
    default:
      return s.closure_bits(a);
  }
}

} // namespace

TEST_CASE("kripke pre closure reproduces the 4-point values", "[spaces]") {
  auto m = four_point_frame(false);
  const auto& alg = m.space.algebra();
  CHECK(alg.equal(m.space.closure(alg.from_names({"2", "3"})), alg.top()));
  CHECK(alg.equal(m.space.closure(alg.from_names({"2"})), alg.from_names({"2"})));
  CHECK(alg.equal(m.space.closure(alg.from_names({"3"})), alg.from_names({"0", "3"})));
}

TEST_CASE("kripke suc closure", "[spaces]") {
  auto m = four_point_frame(true);
  const auto& alg = m.space.algebra();
  CHECK(alg.equal(m.space.closure(alg.from_names({"0"})), alg.from_names({"0", "3"})));
}

TEST_CASE("markov threshold closure", "[spaces]") {
  // rows(x0) = (0, 1/2, 1/2), threshold 1/2: {x1} pulls in x0
  std::vector<std::vector<rational>> rows = {
      {rational(0), rational(1, 2), rational(1, 2)},
      {rational(0), rational(1), rational(0)},
      {rational(0), rational(0), rational(1)}};
  auto s = point_space::make_markov(carrier({"x0", "x1", "x2"}), rows, rational(1, 2));
  const auto& alg = s.algebra();
  CHECK(alg.equal(s.closure(alg.from_names({"x1"})), alg.from_names({"x0", "x1"})));
}

TEST_CASE("markov rows must sum to one", "[spaces]") {
  std::vector<std::vector<rational>> rows = {{rational(1, 2), rational(3, 5)},
                                             {rational(0), rational(1)}};
  CHECK_THROWS_AS(point_space::make_markov(numbered_carrier(2), rows, rational(1, 2)),
                  validation_error);
}

TEST_CASE("grid construction", "[spaces]") {
  auto g = point_space::make_grid(3, 3, false);
  CHECK(g.size() == 9);
  CHECK(g.steps().edge_count() == 24);

  auto g8 = point_space::make_grid(3, 3, true);
  CHECK(g8.steps().edge_count() == 40);

  // symmetric by construction
  for (std::size_t x = 0; x < g.size(); ++x)
    for (auto t : g.steps()[x]) {
      const auto& back = g.steps()[t];
      CHECK(std::find(back.begin(), back.end(), static_cast<std::uint32_t>(x)) != back.end());
    }
}

TEST_CASE("explicit tables are validated at load", "[spaces]") {
  // c({p}) = {} is not inflationary
  CHECK_THROWS_AS(point_space::make_explicit_table(carrier({"p"}), {0u, 0u}), validation_error);
  // shrinking closure is not monotone: c({}) = {p,q}, c({p}) = {p}
  CHECK_THROWS_AS(point_space::make_explicit_table(numbered_carrier(2), {3u, 1u, 3u, 3u}),
                  validation_error);
  // a valid non-additive table: c adds q only once both points are present
  auto s = point_space::make_explicit_table(numbered_carrier(3),
                                            {0u, 1u, 2u, 7u, 4u, 5u, 6u, 7u});
  CHECK_FALSE(s.additive());
  const auto& alg = s.algebra();
  CHECK(alg.equal(s.closure(alg.from_names({"0", "1"})), alg.top()));
  CHECK(alg.equal(s.closure(alg.from_names({"0"})), alg.from_names({"0"})));
}

TEST_CASE("explicit additive spaces extend singleton closures by unions", "[spaces]") {
  auto s = point_space::make_explicit_additive(numbered_carrier(3), {{0, 1}, {1}, {2, 0}});
  const auto& alg = s.algebra();
  CHECK(s.additive());
  rng r(3);
  for (int i = 0; i < 30; ++i) {
    auto a = alg.sample(r);
    bitset expect = a.bits;
    for (std::size_t x = 0; x < 3; ++x)
      if (a.bits.test(x)) expect |= s.closure_bits([&] {
        bitset sx(3);
        sx.set(x);
        return sx;
      }());
    CHECK(s.closure_bits(a.bits) == expect);
  }
  CHECK_THROWS_AS(point_space::make_explicit_additive(numbered_carrier(2), {{1}, {1}}),
                  validation_error);
}

TEST_CASE("closures agree with naive recomputation on all subsets", "[spaces]") {
  std::vector<point_space> spaces;
  spaces.push_back(random_graph_model(11, 7, 30).space);
  spaces.push_back(point_space::make_grid(3, 3, false));
  spaces.push_back(four_point_frame(false).space);
  spaces.push_back(four_point_frame(true).space);
  {
    std::vector<std::vector<rational>> rows(5, std::vector<rational>(5, rational(1, 5)));
    spaces.push_back(point_space::make_markov(numbered_carrier(5), rows, rational(2, 5)));
  }
  for (const auto& s : spaces) {
    REQUIRE(s.size() <= 10);
    s.algebra().for_each_element(
        [&](const powerset_algebra::element& e) { CHECK(s.closure_bits(e.bits) == naive_closure(s, e.bits)); });
  }
}

TEST_CASE("closures are inflationary and monotone on samples", "[spaces]") {
  rng r(19);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto m = random_graph_model(seed, 6, 40);
    const auto& alg = m.space.algebra();
    for (int i = 0; i < 20; ++i) {
      auto a = alg.sample(r);
      auto b = alg.join(a, alg.sample(r));
      CHECK(alg.leq(a, m.space.closure(a)));
      CHECK(alg.leq(m.space.closure(a), m.space.closure(b)));
    }
  }
}

TEST_CASE("direction option flips the step relation", "[spaces]") {
  auto fwd = point_space::make_graph(numbered_carrier(2), {{0, 1}}, edge_direction::forward);
  auto bwd = point_space::make_graph(numbered_carrier(2), {{0, 1}}, edge_direction::backward);
  auto sym = point_space::make_graph(numbered_carrier(2), {{0, 1}}, edge_direction::symmetric);
  const auto& alg = fwd.algebra();
  auto p0 = alg.from_names({"0"});
  CHECK(alg.equal(fwd.closure(p0), alg.top()));
  CHECK(alg.equal(bwd.closure(p0), p0));
  CHECK(alg.equal(sym.closure(p0), alg.top()));
}

TEST_CASE("product closure follows the componentwise rule", "[spaces]") {
  auto c2 = chain_model(2);
  auto prod = product_space(c2.space, c2.space);
  CHECK(prod.size() == 4);
  const auto& alg = prod.algebra();
  CHECK(alg.equal(prod.closure(alg.from_names({"(0,0)"})),
                  alg.from_names({"(0,0)", "(1,0)", "(0,1)"})));
}

TEST_CASE("product with a singleton is isomorphic", "[spaces]") {
  auto m = random_graph_model(5, 5, 40);
  point_space dot = point_space::make_graph(carrier({"*"}), {});
  auto prod = product_space(m.space, dot);
  REQUIRE(prod.size() == m.space.size());
  m.space.algebra().for_each_element([&](const powerset_algebra::element& e) {
    bitset lifted = e.bits; // indices match under (x, *) |-> x
    CHECK(prod.closure_bits(lifted) == m.space.closure_bits(e.bits));
  });
}

TEST_CASE("products of markov spaces are unsupported", "[spaces]") {
  std::vector<std::vector<rational>> rows(2, std::vector<rational>(2, rational(1, 2)));
  auto mk = point_space::make_markov(numbered_carrier(2), rows, rational(1, 2));
  CHECK_THROWS_AS(product_space(mk, mk), unsupported);
}

TEST_CASE("fuzzy closure caps at the membership", "[spaces]") {
  fuzzy_space fs(carrier({"x", "y"}), heyting_chain(10), {10, 6}, {2, 2});
  auto xi = fs.algebra().wrap({9, 5});
  auto c = fs.closure(xi);
  CHECK(c == fs.algebra().wrap({10, 6}));
  auto bot = fs.algebra().bottom();
  CHECK(fs.closure(bot) == fs.algebra().wrap({2, 2}));
}

TEST_CASE("model files load and validate", "[spaces]") {
  std::string dir = CLOSURIUM_MODELS_DIR;
  auto four = load_model_file(dir + "/four.json");
  REQUIRE(std::holds_alternative<point_model>(four));
  const auto& pm = std::get<point_model>(four);
  CHECK(pm.name == "four");
  CHECK(pm.space.kind() == space_kind::kripke_pre);
  CHECK(pm.atoms.count("a") == 1);

  CHECK_THROWS_AS(load_model_file(dir + "/bad_markov.json"), validation_error);
  CHECK_THROWS_AS(load_model_file(dir + "/bad_table.json"), validation_error);

  auto fz = load_model_file(dir + "/fuzzy2.json");
  REQUIRE(std::holds_alternative<fuzzy_model>(fz));
  const auto& fm = std::get<fuzzy_model>(fz);
  CHECK(fm.space.epsilon() == std::vector<std::int32_t>{2, 2});
  CHECK(fm.atoms.at("f").val == std::vector<std::int32_t>{0, 3});
}

TEST_CASE("grid atoms load from pgm", "[spaces]") {
  std::string dir = CLOSURIUM_MODELS_DIR;
  auto m = load_model_file(dir + "/grid_pgm.json");
  const auto& pm = std::get<point_model>(m);
  const auto& alg = pm.space.algebra();
  CHECK(alg.equal(pm.atoms.at("img"), alg.from_names({"1,0", "0,1", "2,1"})));
}

TEST_CASE("backend law profiles", "[spaces]") {
  // quasi-discrete and suc: grounded and fully additive
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto m = random_graph_model(seed, 6, 30);
    auto rep = check_closure_laws(m.space.as_operator(), check_mode::exhaustive_mode());
    CHECK(rep.status("grounded") == law_status::holds);
    CHECK(rep.status("fully_additive") == law_status::holds);
  }
  // markov: grounded exactly when the threshold is positive
  std::vector<std::vector<rational>> rows(3, std::vector<rational>(3, rational(1, 3)));
  auto positive = point_space::make_markov(numbered_carrier(3), rows, rational(1, 3));
  auto zero = point_space::make_markov(numbered_carrier(3), rows, rational(0));
  CHECK(check_closure_laws(positive.as_operator(), check_mode::exhaustive_mode())
            .status("grounded") == law_status::holds);
  auto zr = check_closure_laws(zero.as_operator(), check_mode::exhaustive_mode());
  CHECK(zr.status("grounded") == law_status::fails);
  // closure of bottom is the whole carrier
  CHECK(zr.witness("grounded").size() == 3);
}

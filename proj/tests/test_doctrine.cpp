#include <catch2/catch_amalgamated.hpp>

#include "closurium/doctrine.hpp"
#include "closurium/random_models.hpp"

using namespace closurium;

namespace {

// f: {0,1,2} -> {a,b} with 0,1 |-> a and 2 |-> b
struct collapse_fixture {
  carrier dom{std::vector<std::string>{"0", "1", "2"}};
  carrier cod{std::vector<std::string>{"a", "b"}};
  powerset_algebra dom_alg{dom};
  powerset_algebra cod_alg{cod};
  finite_map f = finite_map::from_names(dom, cod, {{"0", "a"}, {"1", "a"}, {"2", "b"}});
};

} // namespace

TEST_CASE("powerset preimage", "[doctrine]") {
  collapse_fixture fx;
  CHECK(fx.dom_alg.equal(preimage(fx.f, fx.dom_alg, fx.cod_alg, fx.cod_alg.from_names({"a"})),
                         fx.dom_alg.from_names({"0", "1"})));
  auto idm = finite_map::identity(fx.dom);
  rng r(5);
  for (int i = 0; i < 20; ++i) {
    auto b = fx.dom_alg.sample(r);
    CHECK(fx.dom_alg.equal(preimage(idm, fx.dom_alg, fx.dom_alg, b), b));
  }
}

TEST_CASE("powerset direct image", "[doctrine]") {
  collapse_fixture fx;
  CHECK(fx.cod_alg.equal(direct_image(fx.f, fx.dom_alg, fx.cod_alg,
                                      fx.dom_alg.from_names({"0", "2"})),
                         fx.cod_alg.top()));
  CHECK(fx.cod_alg.equal(direct_image(fx.f, fx.dom_alg, fx.cod_alg, fx.dom_alg.bottom()),
                         fx.cod_alg.bottom()));
}

TEST_CASE("powerset universal image", "[doctrine]") {
  collapse_fixture fx;
  // fiber(a) = {0,1} is inside {0,1}, fiber(b) = {2} is not
  CHECK(fx.cod_alg.equal(universal_image(fx.f, fx.dom_alg, fx.cod_alg,
                                         fx.dom_alg.from_names({"0", "1"})),
                         fx.cod_alg.from_names({"a"})));
  CHECK(fx.cod_alg.equal(universal_image(fx.f, fx.dom_alg, fx.cod_alg, fx.dom_alg.top()),
                         fx.cod_alg.top()));
  // points with an empty fiber are always kept
  carrier c1({"p"});
  carrier c2({"q", "r"});
  powerset_algebra a1(c1), a2(c2);
  finite_map g = finite_map::from_names(c1, c2, {{"p", "q"}});
  CHECK(a2.equal(universal_image(g, a1, a2, a1.bottom()), a2.from_names({"r"})));
}

TEST_CASE("adjunctions on sampled elements", "[doctrine]") {
  collapse_fixture fx;
  rng r(17);
  for (int i = 0; i < 100; ++i) {
    auto a = fx.dom_alg.sample(r);
    auto b = fx.cod_alg.sample(r);
    CHECK(fx.cod_alg.leq(direct_image(fx.f, fx.dom_alg, fx.cod_alg, a), b) ==
          fx.dom_alg.leq(a, preimage(fx.f, fx.dom_alg, fx.cod_alg, b)));
    CHECK(fx.dom_alg.leq(preimage(fx.f, fx.dom_alg, fx.cod_alg, b), a) ==
          fx.cod_alg.leq(b, universal_image(fx.f, fx.dom_alg, fx.cod_alg, a)));
  }
}

TEST_CASE("preimage functoriality on composable maps", "[doctrine]") {
  carrier c1({"0", "1", "2", "3"}), c2({"x", "y", "z"}), c3({"u", "v"});
  powerset_algebra a1(c1), a2(c2), a3(c3);
  rng r(23);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::uint32_t> m1(c1.size()), m2(c2.size());
    for (auto& v : m1) v = static_cast<std::uint32_t>(r.next(c2.size()));
    for (auto& v : m2) v = static_cast<std::uint32_t>(r.next(c3.size()));
    finite_map f(c1, c2, m1), g(c2, c3, m2);
    finite_map gf = compose(g, f);
    auto b = a3.sample(r);
    CHECK(a1.equal(preimage(gf, a1, a3, b),
                   preimage(f, a1, a2, preimage(g, a2, a3, b))));
  }
}

TEST_CASE("fuzzy preimage follows the membership formula", "[doctrine]") {
  // alpha = (1,1) on the domain, xi(a) = 0.5, both points sent to a
  heyting_chain ch(10);
  fuzzy_algebra dom(carrier({"0", "1"}), ch);
  fuzzy_algebra cod(carrier({"a", "b"}), ch);
  finite_map f = finite_map::from_names(dom.points(), cod.points(), {{"0", "a"}, {"1", "a"}});
  auto xi = cod.wrap({5, 0});
  CHECK(preimage(f, dom, cod, xi) == dom.wrap({5, 5}));
}

TEST_CASE("fuzzy direct image takes fiberwise joins", "[doctrine]") {
  heyting_chain ch(10);
  fuzzy_algebra dom(carrier({"0", "1"}), ch);
  fuzzy_algebra cod(carrier({"a", "b"}), ch);
  finite_map f = finite_map::from_names(dom.points(), cod.points(), {{"0", "a"}, {"1", "a"}});
  CHECK(direct_image(f, dom, cod, dom.wrap({3, 8})) == cod.wrap({8, 0}));
}

TEST_CASE("fuzzy universal image includes the codomain membership", "[doctrine]") {
  heyting_chain ch(10);
  fuzzy_algebra dom(carrier({"0"}), ch, {4});
  fuzzy_algebra cod(carrier({"a", "b"}), ch, {6, 7});
  finite_map f = finite_map::from_names(dom.points(), cod.points(), {{"0", "a"}});
  // fiber(a) = {0}: beta(a) /\ (alpha(0) => xi(0)); fiber(b) empty: beta(b)
  CHECK(universal_image(f, dom, cod, dom.wrap({2})) == cod.wrap({2, 7}));
  CHECK(universal_image(f, dom, cod, dom.wrap({4})) == cod.wrap({6, 7}));
}

TEST_CASE("fuzzy adjunctions", "[doctrine]") {
  heyting_chain ch(4);
  fuzzy_algebra dom(carrier({"0", "1", "2"}), ch, {4, 3, 4});
  fuzzy_algebra cod(carrier({"a", "b"}), ch, {4, 4});
  finite_map f =
      finite_map::from_names(dom.points(), cod.points(), {{"0", "a"}, {"1", "a"}, {"2", "b"}});
  rng r(29);
  for (int i = 0; i < 150; ++i) {
    auto xi = dom.sample(r);
    auto zeta = cod.sample(r);
    CHECK(cod.leq(direct_image(f, dom, cod, xi), zeta) ==
          dom.leq(xi, preimage(f, dom, cod, zeta)));
    CHECK(dom.leq(preimage(f, dom, cod, zeta), xi) ==
          cod.leq(zeta, universal_image(f, dom, cod, xi)));
  }
}

TEST_CASE("fuzzy preimage functoriality", "[doctrine]") {
  heyting_chain ch(6);
  fuzzy_algebra a1(carrier({"0", "1"}), ch, {4, 6});
  fuzzy_algebra a2(carrier({"x", "y"}), ch, {5, 6});
  fuzzy_algebra a3(carrier({"u"}), ch, {6});
  finite_map f = finite_map::from_names(a1.points(), a2.points(), {{"0", "x"}, {"1", "y"}});
  finite_map g = finite_map::from_names(a2.points(), a3.points(), {{"x", "u"}, {"y", "u"}});
  finite_map gf = compose(g, f);
  rng r(9);
  for (int i = 0; i < 50; ++i) {
    auto xi = a3.sample(r);
    CHECK(preimage(gf, a1, a3, xi) == preimage(f, a1, a2, preimage(g, a2, a3, xi)));
  }
  auto idm = finite_map::identity(a1.points());
  for (int i = 0; i < 20; ++i) {
    auto xi = a1.sample(r);
    CHECK(preimage(idm, a1, a1, xi) == xi);
  }
}

TEST_CASE("fuzzy maps must preserve membership", "[doctrine]") {
  heyting_chain ch(10);
  fuzzy_algebra dom(carrier({"0"}), ch, {8});
  fuzzy_algebra cod(carrier({"a"}), ch, {4});
  finite_map f = finite_map::from_names(dom.points(), cod.points(), {{"0", "a"}});
  CHECK_THROWS_AS(preimage(f, dom, cod, cod.top()), validation_error);
}

TEST_CASE("diagonal", "[doctrine]") {
  carrier base({"0", "1"});
  powerset_algebra prod(product_carrier(base, base));
  auto d = diagonal(prod, base);
  CHECK(prod.equal(d, prod.from_names({"(0,0)", "(1,1)"})));

  carrier single({"s"});
  powerset_algebra sprod(product_carrier(single, single));
  CHECK(sprod.equal(diagonal(sprod, single), sprod.top()));

  heyting_chain ch(10);
  fuzzy_algebra fb(carrier({"0", "1"}), ch, {4, 10});
  fuzzy_algebra fprod = product_fuzzy_algebra(fb, fb);
  auto fd = diagonal(fprod, fb);
  CHECK(fd.val[0] == 4);  // (0,0)
  CHECK(fd.val[1] == 0);  // (0,1)
  CHECK(fd.val[3] == 10); // (1,1)
}

TEST_CASE("law suite on the 4-point frame", "[doctrine]") {
  auto pre = four_point_frame(false);
  auto report = check_closure_laws(pre.space.as_operator(), check_mode::exhaustive_mode());
  CHECK(report.status("inflationary") == law_status::holds);
  CHECK(report.status("monotone") == law_status::holds);
  CHECK(report.status("grounded") == law_status::holds);
  CHECK(report.status("additive") == law_status::fails);
  CHECK(report.status("fully_additive") == law_status::fails);
  CHECK(report.status("finitely_additive") == law_status::fails);
  // the minimal witness pair
  CHECK(report.witness("additive") == json::array({json::array({"2"}), json::array({"3"})}));
  CHECK(report.laws.at("additive").reverify());

  auto suc = four_point_frame(true);
  auto sreport = check_closure_laws(suc.space.as_operator(), check_mode::exhaustive_mode());
  CHECK(sreport.status("grounded") == law_status::holds);
  CHECK(sreport.status("additive") == law_status::holds);
  CHECK(sreport.status("fully_additive") == law_status::holds);
}

TEST_CASE("epsilon closure is not grounded", "[doctrine]") {
  fuzzy_space fs(carrier({"x", "y"}), heyting_chain(10), {10, 10}, {2, 2});
  auto report = check_closure_laws(fs.as_operator(), check_mode::exhaustive_mode());
  CHECK(report.status("grounded") == law_status::fails);
  CHECK(report.status("additive") == law_status::holds);
  CHECK(report.status("inflationary") == law_status::holds);
  CHECK(report.laws.at("grounded").reverify());
  // witness records the closure of bottom: 0.2 everywhere
  CHECK(report.witness("grounded") == json({{"x", "1/5"}, {"y", "1/5"}}));

  fuzzy_space grounded_fs(carrier({"x", "y"}), heyting_chain(10), {10, 10}, {0, 0});
  auto r2 = check_closure_laws(grounded_fs.as_operator(), check_mode::exhaustive_mode());
  CHECK(r2.status("grounded") == law_status::holds);
}

TEST_CASE("sampled law checks record the seed and reverify", "[doctrine]") {
  auto pre = four_point_frame(false);
  auto report = check_closure_laws(pre.space.as_operator(), check_mode::sampled(300, 42));
  CHECK(report.seed == 42);
  CHECK_FALSE(report.exhaustive);
  if (report.status("additive") == law_status::fails)
    CHECK(report.laws.at("additive").reverify());
  json doc = report.to_json();
  CHECK(doc["seed"] == 42);
  CHECK(doc["mode"] == "sampled");
}

TEST_CASE("law suite rejects oversized exhaustive runs", "[doctrine]") {
  auto big = random_graph_model(1, 25, 10);
  CHECK_THROWS_AS(check_closure_laws(big.space.as_operator(), check_mode::exhaustive_mode()),
                  too_large);
}

TEST_CASE("map continuity examples", "[doctrine]") {
  // identity is always continuous
  auto frame = four_point_frame(false);
  auto op = frame.space.as_operator();
  auto idm = finite_map::identity(frame.space.points());
  CHECK(check_map_continuity(idm, op, op, check_mode::exhaustive_mode()).holds);

  // constant map onto a discrete point, domain a 2-chain
  auto chain = chain_model(2);
  point_space dot = point_space::make_graph(carrier({"*"}), {});
  finite_map to_dot(chain.space.points(), dot.points(), {0, 0});
  CHECK(check_map_continuity(to_dot, chain.space.as_operator(), dot.as_operator(),
                             check_mode::exhaustive_mode())
            .holds);

  // dropping the chain edge breaks continuity
  point_space two_dots = point_space::make_graph(numbered_carrier(2), {});
  finite_map idpts(chain.space.points(), two_dots.points(), {0, 1});
  auto res = check_map_continuity(idpts, chain.space.as_operator(), two_dots.as_operator(),
                                  check_mode::exhaustive_mode());
  CHECK_FALSE(res.holds);
  REQUIRE(res.witness);
  // forward closure: the witness is the source of the dropped edge
  CHECK(chain.space.algebra().element_to_json(*res.witness) == json::array({"0"}));

  // with the backward convention the witness is the edge target
  point_space back = point_space::make_graph(numbered_carrier(2), {{0, 1}},
                                             edge_direction::backward);
  finite_map idpts2(back.points(), two_dots.points(), {0, 1});
  auto res2 = check_map_continuity(idpts2, back.as_operator(), two_dots.as_operator(),
                                   check_mode::exhaustive_mode());
  CHECK_FALSE(res2.holds);
  REQUIRE(res2.witness);
  CHECK(back.algebra().element_to_json(*res2.witness) == json::array({"1"}));
}

TEST_CASE("fuzzy epsilon closures are continuous when epsilon is preserved", "[doctrine]") {
  heyting_chain ch(10);
  fuzzy_space dom(carrier({"0", "1"}), ch, {10, 10}, {1, 2});
  fuzzy_space cod_ok(carrier({"a"}), ch, {10}, {3});
  fuzzy_space cod_bad(carrier({"a"}), ch, {10}, {0});
  finite_map f =
      finite_map::from_names(dom.points(), cod_ok.points(), {{"0", "a"}, {"1", "a"}});

  // eps_dom(x) <= eps_cod(f(x)) everywhere: continuous
  auto ok = check_map_continuity(f, dom.as_operator(), cod_ok.as_operator(),
                                 check_mode::exhaustive_mode());
  CHECK(ok.holds);
  CHECK(check_image_inequality(f, dom.as_operator(), cod_ok.as_operator(),
                               check_mode::exhaustive_mode())
            .holds);

  // dropping epsilon on the codomain breaks continuity, with a witness
  auto bad = check_map_continuity(f, dom.as_operator(), cod_bad.as_operator(),
                                  check_mode::exhaustive_mode());
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.witness);
  CHECK_FALSE(check_image_inequality(f, dom.as_operator(), cod_bad.as_operator(),
                                     check_mode::exhaustive_mode())
                  .holds);
}

TEST_CASE("image inequality mirrors continuity", "[doctrine]") {
  auto chain = chain_model(2);
  point_space two_dots = point_space::make_graph(numbered_carrier(2), {});
  finite_map idpts(chain.space.points(), two_dots.points(), {0, 1});
  auto res = check_image_inequality(idpts, chain.space.as_operator(), two_dots.as_operator(),
                                    check_mode::exhaustive_mode());
  CHECK_FALSE(res.holds);
  REQUIRE(res.witness);
  CHECK(chain.space.algebra().element_to_json(*res.witness) == json::array({"0"}));

  auto idm = finite_map::identity(chain.space.points());
  CHECK(check_image_inequality(idm, chain.space.as_operator(), chain.space.as_operator(),
                               check_mode::exhaustive_mode())
            .holds);
}

TEST_CASE("continuity and the image inequality are equivalent", "[doctrine]") {
  rng r(31);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto m1 = random_graph_model(100 + trial, 3, 40);
    auto m2 = random_graph_model(200 + trial, 3, 40);
    std::vector<std::uint32_t> mp(3);
    for (auto& v : mp) v = static_cast<std::uint32_t>(r.next(3));
    finite_map f(m1.space.points(), m2.space.points(), mp);
    auto c1 = check_map_continuity(f, m1.space.as_operator(), m2.space.as_operator(),
                                   check_mode::exhaustive_mode());
    auto c2 = check_image_inequality(f, m1.space.as_operator(), m2.space.as_operator(),
                                     check_mode::exhaustive_mode());
    CHECK(c1.holds == c2.holds);
    ++checked;
  }
  CHECK(checked == 40);
}

TEST_CASE("frobenius reciprocity", "[doctrine]") {
  carrier d({"d0", "d1"}), c({"c0", "c1"});
  auto res = check_frobenius(d, c, check_mode::exhaustive_mode());
  CHECK(res.holds);
}

TEST_CASE("beck-chevalley for both quantifiers", "[doctrine]") {
  carrier d({"d0", "d1"}), c({"c0", "c1"}), cp({"e"});
  finite_map f(cp, c, {1}); // constant
  CHECK(check_beck_chevalley(f, d, quantifier::exists, check_mode::exhaustive_mode()).holds);
  CHECK(check_beck_chevalley(f, d, quantifier::forall, check_mode::exhaustive_mode()).holds);

  finite_map idc(c, c, {0, 1});
  CHECK(check_beck_chevalley(idc, d, quantifier::exists, check_mode::exhaustive_mode()).holds);
}

TEST_CASE("law report serializes", "[doctrine]") {
  auto pre = four_point_frame(false);
  auto report = check_closure_laws(pre.space.as_operator(), check_mode::exhaustive_mode());
  json doc = report.to_json();
  CHECK(doc["operator"] == "kripke-pre");
  CHECK(doc["mode"] == "exhaustive");
  CHECK(doc["laws"]["additive"]["status"] == "fails");
  CHECK(doc["laws"]["grounded"]["status"] == "holds");
  CHECK_FALSE(doc["laws"]["grounded"].contains("witness"));
}

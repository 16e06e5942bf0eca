#include <catch2/catch_amalgamated.hpp>

#include "tichain/transition.hpp"

using namespace tichain;

namespace {
const RuleSet& chain() {
  static RuleSet rs = builtin_chain_ruleset();
  return rs;
}
BasisState st(const std::string& glyphs) { return state_from_glyphs(glyphs); }
}  // namespace

TEST_CASE("single steps") {
  // rule 7 entangles the fresh qubit into both rhs sites
  auto next = step_forward(chain(), st("< ^^ U1 W >"));
  REQUIRE(next.has_value());
  CHECK(to_glyphs(*next) == "< e1 =>1 W >");

  // no forward rule: ^ needs a U to its right
  CHECK_FALSE(step_forward(chain(), st("< e0 ^ E0 >")).has_value());

  // step_backward inverts step_forward
  auto back = step_backward(chain(), st("< e1 =>1 W >"));
  REQUIRE(back.has_value());
  CHECK(to_glyphs(*back) == "< ^^ U1 W >");

  CHECK_THROWS_AS(step_forward(chain(), st("< <- ->0 >")), precondition_error);
}

TEST_CASE("forward/backward inverse over every well-formed state, n<=5") {
  for (int n = 2; n <= 5; ++n) {
    auto basis = enumerate_chain_basis(chain(), n, ChainFilter::AllWellFormed);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      BasisState s = basis.state(i);
      if (auto f = step_forward(chain(), s)) {
        auto b = step_backward(chain(), *f);
        REQUIRE(b.has_value());
        REQUIRE(*b == s);
      }
      if (auto b = step_backward(chain(), s)) {
        auto f = step_forward(chain(), *b);
        REQUIRE(f.has_value());
        REQUIRE(*f == s);
      }
    }
  }
  SUCCEED();
}

TEST_CASE("good paths have (n-1)(n-2)/2 states") {
  CHECK(path_count_formula(5) == 6);
  CHECK(path_count_formula(7) == 15);
  CHECK(path_count_formula(9) == 28);
  CHECK_THROWS_AS(path_count_formula(4), precondition_error);
  CHECK_THROWS_AS(path_count_formula(3), precondition_error);

  for (int n : {5, 7, 9, 11}) {
    auto p = extract_path(chain(), make_good_start(n));
    CHECK(p.length() == path_count_formula(n));
    CHECK(p.good_start);
    CHECK_FALSE(p.contains_illegal);
  }
}

TEST_CASE("the n=7 path visits the two-round configuration sequence") {
  const std::vector<std::string> expected = {
      "< ^^ U0 U0 W W >", "< e0 =>0 U0 W W >", "< e0 u0 =>0 W W >", "< e0 u0 w =>0 W >",
      "< e0 u0 w w =>0 >", "< e0 u0 w w v0 >", "< e0 u0 w <- E0 >", "< e0 u0 <- W E0 >",
      "< e0 <- U0 W E0 >", "< e0 ^ U0 W E0 >", "< e0 e0 ->0 W E0 >", "< e0 e0 w ->0 E0 >",
      "< e0 e0 w v0 E0 >", "< e0 e0 <- E0 E0 >", "< e0 e0 ^ E0 E0 >"};
  auto p = extract_path(chain(), make_good_start(7, {0, 0}));
  REQUIRE(p.length() == 15);
  for (int i = 0; i < 15; ++i) CHECK(to_glyphs(p.states[i]) == expected[i]);
}

TEST_CASE("states without a control form isolated nodes") {
  auto p = extract_path(chain(), st("e0 w"));
  CHECK(p.length() == 1);
  CHECK(classify_path(p) == PathClass::Unbracketed);
}

TEST_CASE("path classification") {
  auto good = extract_path(chain(), make_good_start(5, {0}));
  CHECK(classify_path(good) == PathClass::Good);

  // bracketed with more E than e evolves through an illegal pair
  auto bad = extract_path(chain(), st("< ->0 E0 >"));
  CHECK(classify_path(bad) == PathClass::IllegalContaining);
}

TEST_CASE("classification matches balanced+consistent on every bracketed state, n=5") {
  auto basis = enumerate_chain_basis(chain(), 5, ChainFilter::BracketedWellFormed);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    BasisState s = basis.state(i);
    auto p = extract_path(chain(), s);
    bool good = classify_path(p) == PathClass::Good;
    bool bc = is_balanced(s, chain()) && is_consistent(s, chain());
    if (good != bc) {
      CAPTURE(to_glyphs(s));
      REQUIRE(good == bc);
    }
    REQUIRE(p.length() <= 25);
  }
  SUCCEED();
}

TEST_CASE("potential pairs") {
  auto p0 = potential(st("< ^^ U0 W >"), chain());
  CHECK(p0.x == 0);
  CHECK(p0.y == 5);
  auto p1 = potential(st("< e0 =>0 W >"), chain());
  CHECK(p1.x == 1);
  CHECK(p1.y == 0);

  // strictly increasing along the full n=7 path
  auto path = extract_path(chain(), make_good_start(7));
  for (int i = 1; i < path.length(); ++i) {
    REQUIRE(potential(path.states[i - 1], chain()) < potential(path.states[i], chain()));
  }
}

TEST_CASE("potential increases under every forward step, exhaustive n<=5") {
  for (int n = 2; n <= 5; ++n) {
    auto basis = enumerate_chain_basis(chain(), n, ChainFilter::AllWellFormed);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      BasisState s = basis.state(i);
      if (auto f = step_forward(chain(), s))
        REQUIRE(potential(s, chain()) < potential(*f, chain()));
    }
  }
  SUCCEED();
}

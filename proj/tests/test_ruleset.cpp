#include <catch2/catch_amalgamated.hpp>

#include "tichain/rulespec.hpp"
#include "tichain/transition.hpp"

using namespace tichain;

TEST_CASE("site alphabet has 14 tags and 21 standard-basis states") {
  auto rs = builtin_chain_ruleset();
  REQUIRE(rs.symbols.size() == kNumTags);
  int total = 0;
  int controls = 0;
  for (const auto& s : rs.symbols) {
    total += s.arity;
    if (s.control) ++controls;
    bool two_state = s.tag == Tag::E || s.tag == Tag::e || s.tag == Tag::U || s.tag == Tag::u ||
                     s.tag == Tag::RArrow || s.tag == Tag::RRArrow || s.tag == Tag::Down;
    REQUIRE(s.arity == (two_state ? 2 : 1));
  }
  REQUIRE(total == kNumSiteStates);
  REQUIRE(controls == 6);
}

TEST_CASE("chain rule set: 9 schemas, entangle/transfer placement") {
  auto rs = builtin_chain_ruleset();
  REQUIRE(rs.schema_count() == 9);
  for (const auto& r : rs.transitions) {
    CAPTURE(r.schema);
    bool entangle = r.schema == 6 || r.schema == 7;
    bool transfer = r.schema == 3;
    REQUIRE((r.action == QubitAction::Entangle) == entangle);
    REQUIRE((r.action == QubitAction::TransferRight) == transfer);
    // exactly one control symbol per side (compile() enforces it; spot check)
    REQUIRE((is_control(r.lhs[0]) != is_control(r.lhs[1])));
    REQUIRE((is_control(r.rhs[0]) != is_control(r.rhs[1])));
  }
}

TEST_CASE("illegal-pair items: control pairs, qubit-consistency pairs") {
  auto rs = builtin_chain_ruleset();
  // item 3: (control)(control)
  auto items = rs.illegal_items(code_of(Tag::LArrow), code_of(Tag::RArrow, 0));
  REQUIRE(std::count(items.begin(), items.end(), 3) == 1);
  // item 13: e_0 ->_1 and e_1 ->_0, but not the matching combinations
  REQUIRE(rs.illegal_items(code_of(Tag::e, 0), code_of(Tag::RArrow, 1)) ==
          std::vector<int>{13});
  REQUIRE(rs.illegal_items(code_of(Tag::e, 1), code_of(Tag::RArrow, 0)) ==
          std::vector<int>{13});
  REQUIRE(rs.illegal_items(code_of(Tag::e, 0), code_of(Tag::RArrow, 0)).empty());
  // item 14 for the double arrow
  REQUIRE(rs.illegal_items(code_of(Tag::e, 1), code_of(Tag::RRArrow, 0)) ==
          std::vector<int>{14});
}

TEST_CASE("cycle rule set: > < legal, ^^ > and < W illegal") {
  auto cyc = builtin_cycle_ruleset();
  REQUIRE(cyc.illegal_items(code_of(Tag::RightEnd), code_of(Tag::LeftEnd)).empty());
  auto i15 = cyc.illegal_items(code_of(Tag::UUp), code_of(Tag::RightEnd));
  REQUIRE(std::count(i15.begin(), i15.end(), 15) == 1);
  auto i16 = cyc.illegal_items(code_of(Tag::LeftEnd), code_of(Tag::W));
  REQUIRE(std::count(i16.begin(), i16.end(), 16) == 1);
  // < ^^ and < e stay legal
  REQUIRE(cyc.illegal_items(code_of(Tag::LeftEnd), code_of(Tag::UUp)).empty());
  REQUIRE(cyc.illegal_items(code_of(Tag::LeftEnd), code_of(Tag::e, 0)).empty());
  // chain still forbids > < via item 1
  auto chain = builtin_chain_ruleset();
  auto i1 = chain.illegal_items(code_of(Tag::RightEnd), code_of(Tag::LeftEnd));
  REQUIRE(std::count(i1.begin(), i1.end(), 1) == 1);
}

TEST_CASE("rule expansion: carry keeps bits, entangle copies, transfer moves") {
  auto rs = builtin_chain_ruleset();
  // carry, schema 1: ->_x U_y  ->  u_y ->_x
  int id = rs.forward_rule(code_of(Tag::RArrow, 1), code_of(Tag::U, 0));
  REQUIRE(id >= 0);
  REQUIRE(rs.concrete(id).rhs_a == code_of(Tag::u, 0));
  REQUIRE(rs.concrete(id).rhs_b == code_of(Tag::RArrow, 1));
  // entangle, schema 7: ^^ U_x -> e_x =>_x
  id = rs.forward_rule(code_of(Tag::UUp), code_of(Tag::U, 1));
  REQUIRE(id >= 0);
  REQUIRE(rs.concrete(id).rhs_a == code_of(Tag::e, 1));
  REQUIRE(rs.concrete(id).rhs_b == code_of(Tag::RRArrow, 1));
  // transfer, schema 3: w v_x -> <- E_x
  id = rs.forward_rule(code_of(Tag::w), code_of(Tag::Down, 0));
  REQUIRE(id >= 0);
  REQUIRE(rs.concrete(id).rhs_a == code_of(Tag::LArrow));
  REQUIRE(rs.concrete(id).rhs_b == code_of(Tag::E, 0));
}

TEST_CASE("bundled rule files reproduce the builtins") {
  std::string dir = TICHAIN_DATA_DIR;
  auto chain = parse_ruleset_file(dir + "/chain.rules");
  REQUIRE(semantically_equal(chain, builtin_chain_ruleset()));
  auto cycle = parse_ruleset_file(dir + "/cycle.rules");
  REQUIRE(semantically_equal(cycle, builtin_cycle_ruleset()));
}

TEST_CASE("print/parse round trip is the identity") {
  for (auto rs : {builtin_chain_ruleset(), builtin_cycle_ruleset()}) {
    auto again = parse_ruleset(print_ruleset(rs));
    REQUIRE(semantically_equal(rs, again));
    // strong identity including schema annotations
    REQUIRE(print_ruleset(again) == print_ruleset(rs));
  }
}

TEST_CASE("parser rejects rules without a control symbol, with line info") {
  std::string text =
      "symbol W arity=1\n"
      "rule W W -> W W action=carry\n";
  try {
    parse_ruleset(text);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    REQUIRE(e.line == 2);
    REQUIRE(std::string(e.what()).find("no control symbol") != std::string::npos);
  }
}

TEST_CASE("parser rejects undeclared symbols") {
  std::string text =
      "symbol W arity=1\n"
      "symbol R_ARROW arity=2 control\n"
      "illegal W Q item=1\n";
  REQUIRE_THROWS_AS(parse_ruleset(text), parse_error);
  std::string text2 =
      "symbol W arity=1\n"
      "rule R_ARROW W -> W R_ARROW action=carry\n";
  REQUIRE_THROWS_AS(parse_ruleset(text2), parse_error);
}

TEST_CASE("validate_determinism: clean at n=5, catches duplicated lhs") {
  auto rs = builtin_chain_ruleset();
  auto rep = validate_determinism(rs, 5);
  REQUIRE(rep.ok());
  REQUIRE(rep.states_checked > 0);

  // duplicate schema-1 lhs with a different rhs: -> U -> w ->
  auto broken = builtin_chain_ruleset();
  broken.transitions.push_back(
      {{Tag::RArrow, Tag::U}, {Tag::w, Tag::RArrow}, QubitAction::Carry, 10});
  broken.compile();
  auto rep2 = validate_determinism(broken, 4);
  REQUIRE_FALSE(rep2.ok());
  // the report lists a state containing the duplicated lhs pair
  bool found = false;
  for (const auto& s : rep2.violations)
    if (to_glyphs(s).find("->") != std::string::npos) found = true;
  REQUIRE(found);
}

TEST_CASE("validate_determinism flags a state-level double match") {
  // two rules with distinct lhs pairs that overlap on a three-site window:
  // a U -> u a  and  U b -> b U cannot both fire deterministically on a U b.
  std::string text =
      "symbol U arity=2\n"
      "symbol u arity=2\n"
      "symbol W arity=1\n"
      "symbol R_ARROW arity=2 control\n"
      "symbol L_ARROW arity=1 control\n"
      "rule R_ARROW U -> u R_ARROW action=carry\n"
      "rule U L_ARROW -> L_ARROW U action=carry\n";
  auto rs = parse_ruleset(text);
  auto rep = validate_determinism(rs, 4);
  REQUIRE_FALSE(rep.ok());
}

#include <catch2/catch_amalgamated.hpp>

#include "tichain/entanglement.hpp"

using namespace tichain;

namespace {
const RuleSet& chain() {
  static RuleSet rs = builtin_chain_ruleset();
  return rs;
}
const RuleSet& cycle() {
  static RuleSet rs = builtin_cycle_ruleset();
  return rs;
}
std::shared_ptr<const BasisIndex> bracketed(int n) {
  return std::make_shared<const BasisIndex>(
      enumerate_chain_basis(chain(), n, ChainFilter::BracketedWellFormed));
}
}  // namespace

TEST_CASE("H_trans on the n=5 good path is the half-corner tridiagonal") {
  auto basis = bracketed(5);
  auto ht = build_term(TermKind::Trans, chain(), *basis);
  REQUIRE(ht.is_symmetric());

  auto path = extract_path(chain(), make_good_start(5, {0}));
  REQUIRE(path.length() == 6);
  std::vector<std::size_t> idx;
  for (const auto& s : path.states) idx.push_back(*basis->index_of(s));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      double expect = 0;
      if (i == j) expect = (i == 0 || i == 5) ? 0.5 : 1.0;
      if (std::abs(i - j) == 1) expect = -0.5;
      REQUIRE(ht.entry(idx[i], idx[j]) == Catch::Approx(expect).margin(1e-15));
    }
}

TEST_CASE("H_legal puts weight on illegal states, none on legal ones") {
  auto basis = bracketed(5);
  auto hl = build_term(TermKind::Legal, chain(), *basis);
  auto bad = *basis->index_of(state_from_glyphs("< e0 ->1 W >"));
  REQUIRE(hl.entry(bad, bad) >= 1.0);
  auto good = *basis->index_of(make_good_start(5, {0}));
  REQUIRE(hl.entry(good, good) == 0.0);
}

TEST_CASE("H_init expectation: 1 on U_-, 0 on U_+") {
  auto basis = bracketed(5);
  auto hi = build_term(TermKind::Init, chain(), *basis);
  auto u0 = static_cast<std::uint32_t>(*basis->index_of(make_good_start(5, {0})));
  auto u1 = static_cast<std::uint32_t>(*basis->index_of(make_good_start(5, {1})));
  const double r = 1.0 / std::sqrt(2.0);
  StateVector minus(basis, {{u0, r}, {u1, -r}});
  StateVector plus(basis, {{u0, r}, {u1, r}});
  CHECK(expectation(hi, minus) == Catch::Approx(1.0).margin(1e-12));
  CHECK(expectation(hi, plus) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("H_bracket gives every bracketed basis vector weight n-2") {
  auto basis = bracketed(7);
  auto hb = build_term(TermKind::Bracket, chain(), *basis);
  for (std::size_t i = 0; i < basis->size(); i += 211) REQUIRE(hb.entry(i, i) == 5.0);
}

TEST_CASE("boundary term penalizes exactly the unbracketed ends") {
  auto all = std::make_shared<const BasisIndex>(
      enumerate_chain_basis(chain(), 4, ChainFilter::AllWellFormed));
  auto hb = build_term(TermKind::Boundary, chain(), *all);
  auto at = [&](const std::string& g) {
    auto i = *all->index_of(state_from_glyphs(g));
    return hb.entry(i, i);
  };
  CHECK(at("< ^^ U0 >") == 0.0);
  CHECK(at("e0 u0 w w") == 2.0);
  CHECK(at("< e0 u0 w") == 1.0);
}

TEST_CASE("five projector kinds are positive semidefinite at n=5") {
  auto basis = bracketed(5);
  for (auto kind : {TermKind::Trans, TermKind::Legal, TermKind::Init, TermKind::Bracket,
                    TermKind::Boundary}) {
    auto op = build_term(kind, chain(), *basis);
    REQUIRE(op.is_symmetric());
    auto r = lowest_eigenpairs(op, 1, {}, SolveMethod::Dense);
    CAPTURE(term_name(kind));
    REQUIRE(r.lambda0 >= -1e-9);
  }
}

TEST_CASE("assemble_chain variants are exact weighted sums") {
  auto basis = bracketed(5);
  auto core = assemble_chain(chain(), 5, ChainVariant::Core, *basis);
  auto ub = assemble_chain(chain(), 5, ChainVariant::UniformBracket, *basis);
  auto ff = assemble_chain(chain(), 5, ChainVariant::FrustrationFree, *basis);
  auto ht = build_term(TermKind::Trans, chain(), *basis);
  auto hl = build_term(TermKind::Legal, chain(), *basis);
  auto hi = build_term(TermKind::Init, chain(), *basis);
  auto hb = build_term(TermKind::Bracket, chain(), *basis);
  auto hbd = build_term(TermKind::Boundary, chain(), *basis);
  for (std::size_t i = 0; i < basis->size(); i += 17)
    for (std::size_t j : {i, (i + 1) % basis->size(), (i + 100) % basis->size()}) {
      double t = ht.entry(i, j), l = hl.entry(i, j), ini = hi.entry(i, j);
      REQUIRE(core.entry(i, j) == t + l + ini);
      REQUIRE(ub.entry(i, j) == 3 * (t + l + ini) + hb.entry(i, j));
      REQUIRE(ff.entry(i, j) == t + l + ini + hbd.entry(i, j));
    }
}

TEST_CASE("assembly rejects a basis that is not closed under the rules") {
  // the good start state alone: rule 7 maps it outside
  std::vector<BasisState> states{make_good_start(5, {0})};
  auto tiny = std::make_shared<const BasisIndex>(
      BasisIndex::from_states(5, Topology::Chain, "tiny", states));
  CHECK_THROWS_WITH(build_term(TermKind::Trans, chain(), *tiny),
                    Catch::Matchers::ContainsSubstring("not closed"));
}

TEST_CASE("apply: linearity, zero vector, path-block closure") {
  auto basis = bracketed(5);
  auto ht = build_term(TermKind::Trans, chain(), *basis);
  StateVector zero(basis, {});
  CHECK(apply(ht, zero).support_size() == 0);

  auto phi = construct_phi_x(chain(), 5, {0}, basis);
  auto out = apply(ht, phi);
  // support never leaves the path block
  std::set<std::uint32_t> path_support;
  for (auto& [i, a] : phi.amplitudes()) path_support.insert(i);
  for (auto& [i, a] : out.amplitudes()) {
    if (std::abs(a) > 1e-14) REQUIRE(path_support.count(i) == 1);
  }
}

TEST_CASE("cycle operator on the psi support: energies and the size-term dip") {
  // the 144-state support of psi_0 at (n=5, t=2) is closed under every term
  auto psi = construct_cycle_state(cycle(), 5, 2, CycleWhich::psi(0));
  auto basis = psi.basis_ptr();
  REQUIRE(psi.support_size() == 144);
  REQUIRE(psi.norm() == Catch::Approx(1.0).margin(1e-12));

  // the size term telescopes in expectation but not pointwise: per segment
  // its diagonal is -1 + 2*[turning control], so ||H_size psi||^2 = 2 exactly
  auto hsize = build_term(TermKind::Size, cycle(), *basis, 5);
  CHECK(expectation(hsize, psi) == Catch::Approx(0.0).margin(1e-12));
  CHECK(apply(hsize, psi).norm() == Catch::Approx(std::sqrt(2.0)).margin(1e-12));

  // the weighted chain part annihilates psi exactly
  const long long p = 214336;
  OperatorWeights w{p, 5};
  auto h = assemble_cycle(cycle(), w, *basis);
  REQUIRE(h.is_symmetric());
  auto hs = apply(hsize, psi);
  auto full = apply(h, psi);
  double chain_part2 = full.dot(full) - 2 * full.dot(hs) + hs.dot(hs);
  CHECK(std::sqrt(std::max(0.0, chain_part2)) < 1e-9);
  CHECK(expectation(h, psi) == Catch::Approx(0.0).margin(1e-9));

  // psi's component is this whole 144-state block; its true ground state dips
  // O(1/p) below zero and stays essentially parallel to psi
  auto r = lowest_eigenpairs(h, 2, {}, SolveMethod::Dense);
  CHECK(r.lambda0 < 0.0);
  CHECK(r.lambda0 > -1e-3);
  StateVector v0(basis, [&] {
    std::vector<std::pair<std::uint32_t, double>> a;
    for (std::size_t i = 0; i < h.dim(); ++i)
      a.emplace_back(static_cast<std::uint32_t>(i), r.vectors[0][i]);
    return a;
  }());
  CHECK(std::abs(v0.dot(psi)) > 1.0 - 1e-6);
}

TEST_CASE("H_size weights are exact rationals") {
  OperatorWeights w{1, 5};
  CHECK(w.turn_weight_halves() == 2);  // T_5/(5-2) = 6/3 = (5-1)/2
  OperatorWeights w9{1, 9};
  CHECK(w9.turn_weight_halves() == 4);
  // all-W cycle state: H_size expectation = N/n exactly
  BasisState allw;
  allw.topology = Topology::Cycle;
  for (int i = 0; i < 10; ++i) allw.sites.push_back({Tag::W, -1});
  auto b = std::make_shared<const BasisIndex>(
      BasisIndex::from_states(10, Topology::Cycle, "allw", {allw}));
  auto hsize = build_term(TermKind::Size, cycle(), *b, 5);
  CHECK(hsize.entry(0, 0) == 2.0);
}

TEST_CASE("operator norm bound dominates the extreme eigenvalues") {
  auto basis = bracketed(5);
  auto core = assemble_chain(chain(), 5, ChainVariant::Core, *basis);
  auto r = lowest_eigenpairs(core, 1, {}, SolveMethod::Dense);
  REQUIRE(core.norm_bound() >= std::abs(r.lambda0));
  REQUIRE(core.norm_bound() > 0);
}

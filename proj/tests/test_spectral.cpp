#include <catch2/catch_amalgamated.hpp>

#include "tichain/entanglement.hpp"

using namespace tichain;

namespace {
const RuleSet& chain() {
  static RuleSet rs = builtin_chain_ruleset();
  return rs;
}
std::shared_ptr<const BasisIndex> bracketed(int n) {
  return std::make_shared<const BasisIndex>(
      enumerate_chain_basis(chain(), n, ChainFilter::BracketedWellFormed));
}

// ad-hoc diagonal operator over a throwaway basis
SparseOperator diag_op(const BasisIndex& basis, const std::vector<double>& d) {
  SparseOperator::Builder b(basis, "diag", 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const long long den = 1LL << 40;
    b.scratch.emplace_back(static_cast<std::uint32_t>(i),
                           static_cast<long long>(std::llround(d[i] * den)));
    b.commit_row(i, den, 0.0);
  }
  return std::move(b.op);
}

std::shared_ptr<const BasisIndex> throwaway_basis(int count) {
  std::vector<BasisState> states;
  for (int i = 0; i < count; ++i) {
    BasisState s;
    s.sites.push_back({Tag::e, static_cast<std::int8_t>(i % 2)});
    s.sites.push_back({Tag::u, static_cast<std::int8_t>((i / 2) % 2)});
    s.sites.push_back({Tag::w, -1});
    s.sites.push_back(state_of(i % kNumSiteStates));
    states.push_back(s);
  }
  return std::make_shared<const BasisIndex>(
      BasisIndex::from_states(4, Topology::Chain, "throwaway", states));
}
}  // namespace

TEST_CASE("diagonal test operators") {
  auto basis = throwaway_basis(3);
  auto op = diag_op(*basis, {2.0, 0.0, 1.0});
  auto r = lowest_eigenpairs(op, 2, {}, SolveMethod::Dense);
  CHECK(r.lambda0 == Catch::Approx(0.0).margin(1e-14));
  CHECK(r.lambda1 == Catch::Approx(1.0).margin(1e-14));

  auto basis2 = throwaway_basis(2);
  auto g = spectral_gap(diag_op(*basis2, {3.0, 0.0}));
  CHECK(g.gap == Catch::Approx(3.0));
  CHECK(g.normalized_gap == Catch::Approx(1.0));  // norm bound 3
}

TEST_CASE("dense, pure-iterative and component routes agree on the n=5 core") {
  auto basis = bracketed(5);
  auto core = assemble_chain(chain(), 5, ChainVariant::Core, *basis);

  auto dense = lowest_eigenpairs(core, 4, {}, SolveMethod::Dense);
  auto iter = lowest_eigenpairs(core, 4, {}, SolveMethod::Iterative);
  SolverOptions opts;
  opts.dense_threshold = 1;  // force the component route
  auto comp = lowest_eigenpairs(core, 4, opts, SolveMethod::Auto);

  for (int i = 0; i < 4; ++i) {
    CHECK(iter.eigenvalues[i] == Catch::Approx(dense.eigenvalues[i]).margin(1e-8));
    CHECK(comp.eigenvalues[i] == Catch::Approx(dense.eigenvalues[i]).margin(1e-8));
  }
  CHECK(dense.lambda0 == Catch::Approx(0.0).margin(1e-9));
  CHECK(dense.lambda1 == Catch::Approx(0.03407417).margin(1e-6));
  CHECK(dense.degeneracy == 1);
  for (double r : iter.residuals) CHECK(r < 1e-8);
}

TEST_CASE("even-n cores are gapped away from zero") {
  auto basis = bracketed(4);
  auto core = assemble_chain(chain(), 4, ChainVariant::Core, *basis);
  auto r = lowest_eigenpairs(core, 1, {}, SolveMethod::Dense);
  CHECK(r.lambda0 == Catch::Approx(0.1339746).margin(1e-6));
}

TEST_CASE("deterministic under a fixed seed") {
  auto basis = bracketed(5);
  auto core = assemble_chain(chain(), 5, ChainVariant::Core, *basis);
  SolverOptions opts;
  opts.seed = 7;
  auto a = lowest_eigenpairs(core, 2, opts, SolveMethod::Iterative);
  auto b = lowest_eigenpairs(core, 2, opts, SolveMethod::Iterative);
  REQUIRE(a.eigenvalues == b.eigenvalues);
  REQUIRE(a.vectors == b.vectors);
}

TEST_CASE("null space dimension with margin enforcement") {
  auto basis = bracketed(5);
  auto core = assemble_chain(chain(), 5, ChainVariant::Core, *basis);
  CHECK(null_space_dimension(core, 1e-9) == 1);

  auto b4 = bracketed(4);
  auto core4 = assemble_chain(chain(), 4, ChainVariant::Core, *b4);
  CHECK(null_space_dimension(core4, 1e-9) == 0);

  // no clean cluster: an eigenvalue sits inside the 10x margin
  auto tb = throwaway_basis(3);
  auto op = diag_op(*tb, {0.0, 5e-9, 1.0});
  CHECK_THROWS_WITH(null_space_dimension(op, 1e-9),
                    Catch::Matchers::ContainsSubstring("zero cluster"));
}

TEST_CASE("uniform path superposition annihilates H_trans + H_legal") {
  for (int n : {5, 7}) {
    auto basis = bracketed(n);
    auto ht = build_term(TermKind::Trans, chain(), *basis);
    auto hl = build_term(TermKind::Legal, chain(), *basis);
    auto phi = construct_phi_x(chain(), n, std::vector<int>((n - 3) / 2, 1), basis);
    auto r1 = apply(ht, phi);
    auto r2 = apply(hl, phi);
    double norm2 = r1.dot(r1) + 2 * r1.dot(r2) + r2.dot(r2);
    CHECK(std::sqrt(std::max(0.0, norm2)) < 1e-12);
  }
}

TEST_CASE("verify_path_block") {
  auto basis = bracketed(5);
  auto ht = build_term(TermKind::Trans, chain(), *basis);
  auto good = extract_path(chain(), make_good_start(5, {1}));
  CHECK(verify_path_block(ht, good));

  // isolated state: 1x1 zero block
  auto iso = extract_path(chain(), state_from_glyphs("< ^^ W W >"));
  REQUIRE(iso.length() == 1);
  CHECK(verify_path_block(ht, iso));

  // the legality term does not have the tridiagonal form
  auto hl = build_term(TermKind::Legal, chain(), *basis);
  CHECK_FALSE(verify_path_block(hl, good));
}

TEST_CASE("component splitting matches the blocks of the operator") {
  auto basis = bracketed(5);
  auto ht = build_term(TermKind::Trans, chain(), *basis);
  auto blocks = detail::split_components(ht);
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.dim();
  REQUIRE(total == ht.dim());
  // the good path with qubits 0 is one block of size 6
  auto path = extract_path(chain(), make_good_start(5, {0}));
  auto i0 = *basis->index_of(path.states[0]);
  bool found = false;
  for (const auto& b : blocks)
    if (std::find(b.rows.begin(), b.rows.end(), i0) != b.rows.end()) {
      REQUIRE(b.dim() == 6);
      found = true;
    }
  REQUIRE(found);
}

TEST_CASE("gap sequence decreases over n=5,7 and normalization divides by the bound") {
  auto b5 = bracketed(5);
  auto c5 = assemble_chain(chain(), 5, ChainVariant::Core, *b5);
  auto g5 = spectral_gap(c5);
  auto b7 = bracketed(7);
  auto c7 = assemble_chain(chain(), 7, ChainVariant::Core, *b7);
  auto g7 = spectral_gap(c7, {}, SolveMethod::Auto);
  CHECK(g5.gap > g7.gap);
  CHECK(g7.gap > 0);
  CHECK(g5.normalized_gap == Catch::Approx(g5.gap / c5.norm_bound()));
}

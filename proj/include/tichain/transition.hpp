#pragma once

// Deterministic forward/backward evolution in the state graph, path
// extraction and classification, and the monotone potential that bounds path
// lengths.

#include "tichain/configspace.hpp"

namespace tichain {

// ---------------------------------------------------------------------------
// Single steps
// ---------------------------------------------------------------------------

namespace detail {

// Applies the unique matching rule at some pair position. Returns the number
// of applicable (position, rule) matches; result holds the last one.
template <bool Forward>
inline int scan_rules(const RuleSet& rs, const BasisState& s, BasisState* result) {
  int matches = 0;
  for_each_adjacent(s.size(), s.topology, [&](int i, int j) {
    int a = code_of(s.sites[i]), b = code_of(s.sites[j]);
    const auto& ids = Forward ? rs.forward_rules(a, b) : rs.backward_rules(a, b);
    for (int id : ids) {
      ++matches;
      if (result) {
        const ConcreteRule& r = rs.concrete(id);
        *result = s;
        result->sites[i] = state_of(Forward ? r.rhs_a : r.lhs_a);
        result->sites[j] = state_of(Forward ? r.rhs_b : r.lhs_b);
      }
    }
  });
  return matches;
}

}  // namespace detail

// Unique successor under the transition rules, or nullopt if no rule applies.
// A state matching two rules signals a broken rule set and throws.
inline std::optional<BasisState> step_forward(const RuleSet& rs, const BasisState& s) {
  if (!is_well_formed(s, rs)) throw precondition_error("step_forward: state not well-formed");
  BasisState next;
  int k = detail::scan_rules<true>(rs, s, &next);
  if (k > 1)
    throw std::runtime_error("rule set is non-deterministic on state " + to_glyphs(s));
  if (k == 0) return std::nullopt;
  return next;
}

inline std::optional<BasisState> step_backward(const RuleSet& rs, const BasisState& s) {
  if (!is_well_formed(s, rs)) throw precondition_error("step_backward: state not well-formed");
  BasisState prev;
  int k = detail::scan_rules<false>(rs, s, &prev);
  if (k > 1)
    throw std::runtime_error("rule set is non-deterministic on state " + to_glyphs(s));
  if (k == 0) return std::nullopt;
  return prev;
}

// ---------------------------------------------------------------------------
// Potential
// ---------------------------------------------------------------------------

// Ordered pair that strictly increases under every forward transition:
// x counts e/E sites; y depends on the control type.
struct Potential {
  int x = 0;
  int y = 0;
  friend bool operator==(const Potential&, const Potential&) = default;
  friend auto operator<=>(const Potential& a, const Potential& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }
};

inline Potential potential(const BasisState& s, const RuleSet& rs) {
  if (!is_well_formed(s, rs)) throw precondition_error("potential: state not well-formed");
  const int n = s.size();
  Potential p;
  int control_pos = -1;
  Tag control = Tag::E;
  for (int i = 0; i < n; ++i) {
    Tag t = s.sites[i].tag;
    if (t == Tag::e || t == Tag::E) ++p.x;
    if (is_control(t)) {
      control_pos = i;
      control = t;
    }
  }
  if (control_pos < 0) return p;  // isolated node, y = 0
  switch (control) {
    case Tag::Up:
    case Tag::UUp:
    case Tag::Down:
      p.y = n;
      break;
    case Tag::RArrow:
    case Tag::RRArrow:
      for (int i = 0; i < control_pos; ++i)
        if (s.sites[i].tag == Tag::u || s.sites[i].tag == Tag::w) ++p.y;
      break;
    case Tag::LArrow:
      for (int i = control_pos + 1; i < n; ++i)
        if (s.sites[i].tag == Tag::U || s.sites[i].tag == Tag::W) ++p.y;
      break;
    default:
      break;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

// Maximal orbit of a state under the deterministic rules.
struct Path {
  std::vector<BasisState> states;
  bool good_start = false;        // first state has configuration < ^^ U^m W^m >
  bool contains_illegal = false;  // some state has an illegal pair
  bool bracketed = false;

  int length() const { return static_cast<int>(states.size()); }
};

inline Path extract_path(const RuleSet& rs, const BasisState& seed) {
  const int n = seed.size();
  const int cap = n * n + 1;  // longer would contradict the potential bound
  Path p;
  std::vector<BasisState> back;
  BasisState cur = seed;
  for (int k = 0;; ++k) {
    if (k > cap)
      throw std::runtime_error("path exceeds n^2+1 states; potential bound violated");
    auto prev = step_backward(rs, cur);
    if (!prev) break;
    cur = *prev;
    back.push_back(cur);
  }
  p.states.assign(back.rbegin(), back.rend());
  p.states.push_back(seed);
  cur = seed;
  for (int k = 0;; ++k) {
    if (p.length() > cap)
      throw std::runtime_error("path exceeds n^2+1 states; potential bound violated");
    auto next = step_forward(rs, cur);
    if (!next) break;
    cur = *next;
    p.states.push_back(cur);
  }
  p.good_start = is_good_start(p.states.front());
  p.bracketed = seed.topology == Topology::Chain && is_bracketed(seed);
  for (const auto& s : p.states)
    if (!is_legal(s, rs).empty()) {
      p.contains_illegal = true;
      break;
    }
  return p;
}

enum class PathClass { Good, IllegalContaining, Unbracketed };

inline std::string_view path_class_name(PathClass c) {
  switch (c) {
    case PathClass::Good: return "good";
    case PathClass::IllegalContaining: return "illegal-containing";
    case PathClass::Unbracketed: return "unbracketed";
  }
  return "?";
}

// Trichotomy over maximal paths: unbracketed, or containing an illegal state,
// or starting at a good start state with every state legal.
inline PathClass classify_path(const Path& p) {
  if (!p.bracketed) return PathClass::Unbracketed;
  if (p.good_start && !p.contains_illegal) return PathClass::Good;
  if (p.contains_illegal) return PathClass::IllegalContaining;
  throw std::runtime_error(
      "bracketed path with no illegal state does not start at a good start state: " +
      to_glyphs(p.states.front()));
}

// (n-1)(n-2)/2: the number of configurations on the good path.
inline long long path_count_formula(int n) {
  if (n < 5 || n % 2 == 0) throw precondition_error("path count formula needs odd n >= 5");
  return static_cast<long long>(n - 1) * (n - 2) / 2;
}

// ---------------------------------------------------------------------------
// Determinism validation
// ---------------------------------------------------------------------------

struct DeterminismReport {
  long long states_checked = 0;
  std::vector<BasisState> violations;  // states with two applicable rules one way
  bool ok() const { return violations.empty(); }
};

// Exhaustively checks that every well-formed basis state on n sites has at
// most one applicable rule in each direction.
inline DeterminismReport validate_determinism(const RuleSet& rs, int n,
                                              std::size_t budget = kDefaultEnumerationBudget) {
  BasisIndex basis = enumerate_chain_basis(rs, n, ChainFilter::AllWellFormed, budget);
  DeterminismReport rep;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    BasisState s = basis.state(i);
    ++rep.states_checked;
    if (detail::scan_rules<true>(rs, s, nullptr) > 1 ||
        detail::scan_rules<false>(rs, s, nullptr) > 1)
      rep.violations.push_back(s);
  }
  return rep;
}

}  // namespace tichain

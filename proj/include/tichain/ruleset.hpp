#pragma once

// Site alphabet, transition rules and illegal pairs for the 21-state chain,
// stored as data so the evolution/Hamiltonian engine is rule-driven.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tichain {

// ---------------------------------------------------------------------------
// Site alphabet
// ---------------------------------------------------------------------------

enum class Tag : std::uint8_t {
  E = 0,       // entangled, right half
  e,           // entangled, left half
  U,           // unentangled qubit
  u,           // unentangled qubit, swept
  W,           // waiting
  w,           // waiting, swept
  RArrow,      // right-moving control
  RRArrow,     // right-moving control, first iteration
  LArrow,      // left-moving control
  Up,          // left-turn control
  UUp,         // left-turn control, first iteration
  Down,        // right-turn control
  LeftEnd,     // left delimiter
  RightEnd,    // right delimiter
};

inline constexpr int kNumTags = 14;
inline constexpr int kNumSiteStates = 21;

namespace detail {
inline constexpr std::array<int, kNumTags> kArity = {2, 2, 2, 2, 1, 1,
                                                     2, 2, 1, 1, 1, 2, 1, 1};
inline constexpr std::array<bool, kNumTags> kControl = {
    false, false, false, false, false, false,
    true,  true,  true,  true,  true,  true, false, false};
inline constexpr std::array<std::string_view, kNumTags> kTagName = {
    "E", "e", "U", "u", "W", "w", "R_ARROW", "RR_ARROW",
    "L_ARROW", "UP", "UUP", "DOWN", "LEFT_END", "RIGHT_END"};
inline constexpr std::array<std::string_view, kNumTags> kTagGlyph = {
    "E", "e", "U", "u", "W", "w", "->", "=>", "<-", "^", "^^", "v", "<", ">"};

constexpr std::array<int, kNumTags> make_code_base() {
  std::array<int, kNumTags> base{};
  int c = 0;
  for (int t = 0; t < kNumTags; ++t) {
    base[t] = c;
    c += kArity[t];
  }
  return base;
}
inline constexpr std::array<int, kNumTags> kCodeBase = make_code_base();
}  // namespace detail

inline constexpr int arity(Tag t) { return detail::kArity[static_cast<int>(t)]; }
inline constexpr bool is_control(Tag t) { return detail::kControl[static_cast<int>(t)]; }
inline constexpr bool is_lower(Tag t) { return t == Tag::e || t == Tag::u || t == Tag::w; }
inline constexpr bool is_upper(Tag t) { return t == Tag::E || t == Tag::U || t == Tag::W; }
inline std::string_view tag_name(Tag t) { return detail::kTagName[static_cast<int>(t)]; }
inline std::string_view tag_glyph(Tag t) { return detail::kTagGlyph[static_cast<int>(t)]; }

inline std::optional<Tag> tag_from_name(std::string_view s) {
  for (int t = 0; t < kNumTags; ++t)
    if (detail::kTagName[t] == s) return static_cast<Tag>(t);
  return std::nullopt;
}

// A symbol together with its qubit content description.
struct SiteSymbol {
  Tag tag;
  int arity;
  bool control;
};

// One of the 21 standard-basis site states. bit is -1 for 1-state symbols.
struct SiteState {
  Tag tag;
  std::int8_t bit;  // -1, 0 or 1

  friend bool operator==(const SiteState&, const SiteState&) = default;
  friend auto operator<=>(const SiteState&, const SiteState&) = default;
};

// Fixed dense code in [0, 21), ordered by Tag then bit.
inline constexpr int code_of(Tag t, int bit = -1) {
  return detail::kCodeBase[static_cast<int>(t)] + (bit > 0 ? 1 : 0);
}
inline constexpr int code_of(SiteState s) { return code_of(s.tag, s.bit); }

namespace detail {
constexpr std::array<SiteState, kNumSiteStates> make_states() {
  std::array<SiteState, kNumSiteStates> st{};
  int c = 0;
  for (int t = 0; t < kNumTags; ++t) {
    Tag tag = static_cast<Tag>(t);
    if (kArity[t] == 2) {
      st[c++] = SiteState{tag, 0};
      st[c++] = SiteState{tag, 1};
    } else {
      st[c++] = SiteState{tag, -1};
    }
  }
  return st;
}
inline constexpr std::array<SiteState, kNumSiteStates> kStates = make_states();
}  // namespace detail

inline constexpr SiteState state_of(int code) { return detail::kStates[code]; }
inline constexpr Tag tag_of(int code) { return detail::kStates[code].tag; }
inline constexpr int bit_of(int code) { return detail::kStates[code].bit; }

// Glyph form, e.g. "<", "e0", "=>1", "^^". Used in basis exports and path dumps.
inline std::string state_glyph(SiteState s) {
  std::string g{tag_glyph(s.tag)};
  if (s.bit >= 0) g += static_cast<char>('0' + s.bit);
  return g;
}
inline std::optional<SiteState> state_from_glyph(std::string_view g) {
  for (int c = 0; c < kNumSiteStates; ++c) {
    SiteState s = state_of(c);
    if (state_glyph(s) == g) return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Transition rules
// ---------------------------------------------------------------------------

enum class QubitAction : std::uint8_t {
  Carry,          // control bit follows the control, spectator bit stays put
  Entangle,       // fresh bit read from the 2-state lhs site, written to both rhs sites
  TransferLeft,   // control bit moves to the left rhs site
  TransferRight,  // control bit moves to the right rhs site
};

inline std::string_view action_name(QubitAction a) {
  switch (a) {
    case QubitAction::Carry: return "carry";
    case QubitAction::Entangle: return "entangle";
    case QubitAction::TransferLeft: return "transfer:left";
    case QubitAction::TransferRight: return "transfer:right";
  }
  return "?";
}

// Symbol-level rule schema; expanded over qubit values on demand.
struct TransitionRule {
  std::array<Tag, 2> lhs;
  std::array<Tag, 2> rhs;
  QubitAction action;
  int schema;  // grouping index used in reports
};

// ---------------------------------------------------------------------------
// Illegal pairs
// ---------------------------------------------------------------------------

// One side of an illegal-pair pattern: a symbol class, a symbol (summed over
// qubit values), or a single concrete site state.
struct SidePattern {
  enum class Kind : std::uint8_t { Any, Lower, Upper, Control, Symbol, SymbolBit };
  Kind kind;
  Tag tag;   // Symbol / SymbolBit only
  int bit;   // SymbolBit only

  static SidePattern any() { return {Kind::Any, Tag::E, -1}; }
  static SidePattern lower() { return {Kind::Lower, Tag::E, -1}; }
  static SidePattern upper() { return {Kind::Upper, Tag::E, -1}; }
  static SidePattern control() { return {Kind::Control, Tag::E, -1}; }
  static SidePattern sym(Tag t) { return {Kind::Symbol, t, -1}; }
  static SidePattern sym_bit(Tag t, int b) { return {Kind::SymbolBit, t, b}; }

  bool matches(int code) const {
    Tag t = tag_of(code);
    switch (kind) {
      case Kind::Any: return true;
      case Kind::Lower: return is_lower(t);
      case Kind::Upper: return is_upper(t);
      case Kind::Control: return is_control(t);
      case Kind::Symbol: return t == tag;
      case Kind::SymbolBit: return t == tag && bit_of(code) == bit;
    }
    return false;
  }
  friend bool operator==(const SidePattern&, const SidePattern&) = default;
};

struct IllegalPair {
  SidePattern left;
  SidePattern right;
  int item;  // 1..14 chain, 15..16 cycle additions
};

// ---------------------------------------------------------------------------
// RuleSet and compiled tables
// ---------------------------------------------------------------------------

struct ConcreteRule {
  int lhs_a, lhs_b;  // site-state codes
  int rhs_a, rhs_b;
  int schema;
};

class RuleSet {
 public:
  std::vector<SiteSymbol> symbols;
  std::vector<TransitionRule> transitions;
  std::vector<IllegalPair> illegal_pairs;
  std::string name;

  // Expands schemas and patterns into code-level lookup tables.
  void compile() {
    for (auto& v : fwd_) v.clear();
    for (auto& v : bwd_) v.clear();
    concrete_.clear();
    for (const auto& r : transitions) expand_rule(r);
    for (auto& v : items_) v.clear();
    wf_ok_.fill(true);
    for (const auto& p : illegal_pairs)
      for (int a = 0; a < kNumSiteStates; ++a)
        for (int b = 0; b < kNumSiteStates; ++b)
          if (p.left.matches(a) && p.right.matches(b)) {
            items_[a * kNumSiteStates + b].push_back(p.item);
            if (p.item <= 8) wf_ok_[a * kNumSiteStates + b] = false;
          }
    // patterns within one item may overlap on a pair; that is a single
    // violation, not two
    for (auto& v : items_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    compiled_ = true;
  }

  bool compiled() const { return compiled_; }

  // Every concrete rule whose lhs / rhs is the code pair (a,b). A valid rule
  // set has at most one of each, but duplicates are representable so that
  // validate_determinism can report them.
  const std::vector<int>& forward_rules(int a, int b) const {
    return fwd_[a * kNumSiteStates + b];
  }
  const std::vector<int>& backward_rules(int a, int b) const {
    return bwd_[a * kNumSiteStates + b];
  }
  // Unique match or -1; throws if the pair matches several rules.
  int forward_rule(int a, int b) const { return unique_id(fwd_[a * kNumSiteStates + b]); }
  int backward_rule(int a, int b) const { return unique_id(bwd_[a * kNumSiteStates + b]); }
  const ConcreteRule& concrete(int id) const { return concrete_[id]; }
  const std::vector<ConcreteRule>& concrete_rules() const { return concrete_; }

  // Item numbers of every illegal pair matching the adjacent code pair (a,b).
  const std::vector<int>& illegal_items(int a, int b) const {
    return items_[a * kNumSiteStates + b];
  }
  // Pair admissible under the well-formedness items (1..8).
  bool wf_pair(int a, int b) const { return wf_ok_[a * kNumSiteStates + b]; }

  int schema_count() const {
    int mx = 0;
    for (const auto& r : transitions) mx = std::max(mx, r.schema);
    return mx;
  }

  // Semantic equality: same alphabet, same concrete rule expansion and the
  // same item-annotated illegal-pair expansion. Schema grouping and the
  // pattern spelling are presentation only.
  friend bool semantically_equal(const RuleSet& x, const RuleSet& y) {
    if (x.symbols.size() != y.symbols.size()) return false;
    for (std::size_t i = 0; i < x.symbols.size(); ++i) {
      const auto &a = x.symbols[i], &b = y.symbols[i];
      if (a.tag != b.tag || a.arity != b.arity || a.control != b.control) return false;
    }
    auto key = [](const ConcreteRule& r) {
      return std::array<int, 4>{r.lhs_a, r.lhs_b, r.rhs_a, r.rhs_b};
    };
    std::vector<std::array<int, 4>> rx, ry;
    for (const auto& r : x.concrete_) rx.push_back(key(r));
    for (const auto& r : y.concrete_) ry.push_back(key(r));
    std::sort(rx.begin(), rx.end());
    std::sort(ry.begin(), ry.end());
    if (rx != ry) return false;
    for (int a = 0; a < kNumSiteStates; ++a)
      for (int b = 0; b < kNumSiteStates; ++b) {
        auto ia = x.illegal_items(a, b), ib = y.illegal_items(a, b);
        std::sort(ia.begin(), ia.end());
        std::sort(ib.begin(), ib.end());
        if (ia != ib) return false;
      }
    return true;
  }

 private:
  void expand_rule(const TransitionRule& r) {
    const Tag la = r.lhs[0], lb = r.lhs[1], ra = r.rhs[0], rb = r.rhs[1];
    const bool ctrl_left_lhs = is_control(la);
    const bool ctrl_left_rhs = is_control(ra);
    if (ctrl_left_lhs == is_control(lb))
      throw std::invalid_argument("rule lhs must contain exactly one control symbol");
    if (ctrl_left_rhs == is_control(rb))
      throw std::invalid_argument("rule rhs must contain exactly one control symbol");

    for (int ba = (arity(la) == 2 ? 0 : -1); ba <= (arity(la) == 2 ? 1 : -1); ++ba)
      for (int bb = (arity(lb) == 2 ? 0 : -1); bb <= (arity(lb) == 2 ? 1 : -1); ++bb) {
        int ctrl_bit = ctrl_left_lhs ? ba : bb;
        int spec_bit = ctrl_left_lhs ? bb : ba;
        int out_a = -1, out_b = -1;
        switch (r.action) {
          case QubitAction::Carry:
            out_a = ctrl_left_rhs ? ctrl_bit : spec_bit;
            out_b = ctrl_left_rhs ? spec_bit : ctrl_bit;
            break;
          case QubitAction::Entangle: {
            // fresh bit read from the 2-state non-control lhs site
            int fresh = ctrl_left_lhs ? bb : ba;
            out_a = fresh;
            out_b = fresh;
            break;
          }
          case QubitAction::TransferLeft:
            out_a = ctrl_bit;
            out_b = -1;
            break;
          case QubitAction::TransferRight:
            out_a = -1;
            out_b = ctrl_bit;
            break;
        }
        if (arity(ra) == 1) out_a = -1;
        if (arity(rb) == 1) out_b = -1;
        ConcreteRule c{code_of(la, ba), code_of(lb, bb),
                       code_of(ra, out_a), code_of(rb, out_b), r.schema};
        int id = static_cast<int>(concrete_.size());
        concrete_.push_back(c);
        fwd_[c.lhs_a * kNumSiteStates + c.lhs_b].push_back(id);
        bwd_[c.rhs_a * kNumSiteStates + c.rhs_b].push_back(id);
      }
  }

  static int unique_id(const std::vector<int>& ids) {
    if (ids.empty()) return -1;
    if (ids.size() > 1)
      throw std::runtime_error("pair matches more than one transition rule");
    return ids.front();
  }

  bool compiled_ = false;
  std::vector<ConcreteRule> concrete_;
  std::array<std::vector<int>, kNumSiteStates * kNumSiteStates> fwd_{};
  std::array<std::vector<int>, kNumSiteStates * kNumSiteStates> bwd_{};
  std::array<std::vector<int>, kNumSiteStates * kNumSiteStates> items_{};
  std::array<bool, kNumSiteStates * kNumSiteStates> wf_ok_{};
};

// ---------------------------------------------------------------------------
// Built-in rule sets
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<SiteSymbol> full_alphabet() {
  std::vector<SiteSymbol> v;
  for (int t = 0; t < kNumTags; ++t) {
    Tag tag = static_cast<Tag>(t);
    v.push_back({tag, arity(tag), is_control(tag)});
  }
  return v;
}

inline std::vector<TransitionRule> chain_transitions() {
  using T = Tag;
  using A = QubitAction;
  return {
      // 1: sweep right past U and W
      {{T::RArrow, T::U}, {T::u, T::RArrow}, A::Carry, 1},
      {{T::RArrow, T::W}, {T::w, T::RArrow}, A::Carry, 1},
      // 2: turn when an entangled site is reached on the right
      {{T::RArrow, T::E}, {T::Down, T::E}, A::Carry, 2},
      // 3: start moving left, depositing the control qubit
      {{T::w, T::Down}, {T::LArrow, T::E}, A::TransferRight, 3},
      // 4: sweep left past w and u
      {{T::w, T::LArrow}, {T::LArrow, T::W}, A::Carry, 4},
      {{T::u, T::LArrow}, {T::LArrow, T::U}, A::Carry, 4},
      // 5: turn when an entangled site is reached on the left
      {{T::e, T::LArrow}, {T::e, T::Up}, A::Carry, 5},
      // 6: start moving right, creating an entangled pair
      {{T::Up, T::U}, {T::e, T::RArrow}, A::Entangle, 6},
      // 7: first-iteration variant of 6
      {{T::UUp, T::U}, {T::e, T::RRArrow}, A::Entangle, 7},
      // 8: first-iteration sweep right
      {{T::RRArrow, T::U}, {T::u, T::RRArrow}, A::Carry, 8},
      {{T::RRArrow, T::W}, {T::w, T::RRArrow}, A::Carry, 8},
      // 9: first-iteration turn at the right delimiter
      {{T::RRArrow, T::RightEnd}, {T::Down, T::RightEnd}, A::Carry, 9},
  };
}

// Illegal pairs, items 1-14. Items 10-12 also outlaw every way a control can
// sit directly against a delimiter with nothing left to act on (for example
// < ^^ W W > or < -> E >): such configurations form short fully-legal orbits
// that never reach a good start state and would show up as spurious zero
// modes. None of those pairs can occur on a good path: -> / => / <- / v
// always have a lowercase site on their left, <- and ^ always have U, W or E
// on their right, and ^^ is always followed by U.
inline std::vector<IllegalPair> chain_illegal_pairs() {
  using T = Tag;
  using P = SidePattern;
  std::vector<IllegalPair> v;
  auto add = [&v](SidePattern l, SidePattern r, int item) { v.push_back({l, r, item}); };
  // 1: delimiters only at the ends
  add(P::sym(T::RightEnd), P::any(), 1);
  add(P::any(), P::sym(T::LeftEnd), 1);
  // 2: lower case before control before upper case
  add(P::upper(), P::lower(), 2);
  add(P::control(), P::lower(), 2);
  add(P::upper(), P::control(), 2);
  // 3: at most one control site
  add(P::control(), P::control(), 3);
  // 4: lower/left-end buffered from upper/right-end by a control
  for (Tag l : {T::e, T::u, T::w, T::LeftEnd})
    for (Tag r : {T::E, T::U, T::W, T::RightEnd}) add(P::sym(l), P::sym(r), 4);
  // 5: e before u and w
  add(P::sym(T::w), P::sym(T::e), 5);
  add(P::sym(T::u), P::sym(T::e), 5);
  // 6: U and W before E
  add(P::sym(T::E), P::sym(T::W), 6);
  add(P::sym(T::E), P::sym(T::U), 6);
  // 7: up-turns only at the left end of the middle section
  add(P::sym(T::u), P::sym(T::Up), 7);
  add(P::sym(T::u), P::sym(T::UUp), 7);
  add(P::sym(T::w), P::sym(T::Up), 7);
  add(P::sym(T::w), P::sym(T::UUp), 7);
  // 8: down-turn only at the right end of the middle section
  add(P::sym(T::Down), P::sym(T::U), 8);
  add(P::sym(T::Down), P::sym(T::W), 8);
  // 9: u/U before w/W
  add(P::sym(T::w), P::sym(T::u), 9);
  add(P::sym(T::W), P::sym(T::U), 9);
  // 10: initial-configuration checks; plus stranded left-turn controls at the
  // right delimiter
  add(P::sym(T::RRArrow), P::sym(T::E), 10);
  add(P::sym(T::RArrow), P::sym(T::RightEnd), 10);
  add(P::sym(T::LArrow), P::sym(T::RightEnd), 10);
  add(P::sym(T::Up), P::sym(T::RightEnd), 10);
  // 11: initial-configuration checks; plus stranded controls at the left
  // delimiter
  add(P::sym(T::LeftEnd), P::sym(T::Up), 11);
  add(P::sym(T::e), P::sym(T::UUp), 11);
  add(P::sym(T::UUp), P::sym(T::E), 11);
  add(P::sym(T::LeftEnd), P::sym(T::RArrow), 11);
  add(P::sym(T::LeftEnd), P::sym(T::RRArrow), 11);
  add(P::sym(T::LeftEnd), P::sym(T::LArrow), 11);
  add(P::sym(T::LeftEnd), P::sym(T::Down), 11);
  // 12: u/U count must match w/W count; ^^ W is the first-iteration analogue
  // of ^ W
  add(P::sym(T::Up), P::sym(T::W), 12);
  add(P::sym(T::u), P::sym(T::Down), 12);
  add(P::sym(T::e), P::sym(T::Down), 12);
  add(P::sym(T::UUp), P::sym(T::W), 12);
  // 13/14: entangled pairs must agree bitwise
  add(P::sym_bit(T::e, 0), P::sym_bit(T::RArrow, 1), 13);
  add(P::sym_bit(T::e, 1), P::sym_bit(T::RArrow, 0), 13);
  add(P::sym_bit(T::e, 0), P::sym_bit(T::RRArrow, 1), 14);
  add(P::sym_bit(T::e, 1), P::sym_bit(T::RRArrow, 0), 14);
  return v;
}

}  // namespace detail

// The paper's rule set for the finite chain: 9 transition-rule schemas and
// illegal-pair items 1-14.
inline RuleSet builtin_chain_ruleset() {
  RuleSet rs;
  rs.name = "chain";
  rs.symbols = detail::full_alphabet();
  rs.transitions = detail::chain_transitions();
  rs.illegal_pairs = detail::chain_illegal_pairs();
  rs.compile();
  return rs;
}

// Cycle variant: the pair > < becomes legal (so delimiters tile the cycle into
// segments) and items 15-16 outlaw segments shorter than four sites.
inline RuleSet builtin_cycle_ruleset() {
  using T = Tag;
  using P = SidePattern;
  RuleSet rs;
  rs.name = "cycle";
  rs.symbols = detail::full_alphabet();
  rs.transitions = detail::chain_transitions();
  for (const auto& p : detail::chain_illegal_pairs()) {
    if (p.item == 1) continue;
    rs.illegal_pairs.push_back(p);
  }
  // item 1 with > < carved out
  for (int t = 0; t < kNumTags; ++t) {
    Tag tag = static_cast<Tag>(t);
    if (tag != T::LeftEnd) rs.illegal_pairs.push_back({P::sym(T::RightEnd), P::sym(tag), 1});
    if (tag != T::RightEnd) rs.illegal_pairs.push_back({P::sym(tag), P::sym(T::LeftEnd), 1});
  }
  // 15: ^^ may not touch the right delimiter
  rs.illegal_pairs.push_back({P::sym(T::UUp), P::sym(T::RightEnd), 15});
  // 16: < may only be followed by ^^ or e
  for (int t = 0; t < kNumTags; ++t) {
    Tag tag = static_cast<Tag>(t);
    if (tag != T::UUp && tag != T::e)
      rs.illegal_pairs.push_back({P::sym(T::LeftEnd), P::sym(tag), 16});
  }
  rs.compile();
  return rs;
}

}  // namespace tichain

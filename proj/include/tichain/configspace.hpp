#pragma once

// Configurations, standard-basis states, the legality predicates and the
// chain/cycle subspace enumerations.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "tichain/ruleset.hpp"

namespace tichain {

enum class Topology : std::uint8_t { Chain, Cycle };

struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

struct Configuration {
  std::vector<Tag> sites;
  Topology topology = Topology::Chain;

  int size() const { return static_cast<int>(sites.size()); }
};

struct BasisState {
  std::vector<SiteState> sites;
  Topology topology = Topology::Chain;

  int size() const { return static_cast<int>(sites.size()); }
  Configuration configuration() const {
    Configuration c;
    c.topology = topology;
    c.sites.reserve(sites.size());
    for (auto s : sites) c.sites.push_back(s.tag);
    return c;
  }
  friend bool operator==(const BasisState&, const BasisState&) = default;
};

// Dense 5-bit-per-site packing, site 0 in the most significant bits so that
// (w0, w1) order is the lexicographic state order. Holds up to 24 sites.
struct Packed {
  std::uint64_t w0 = 0, w1 = 0;

  static constexpr int kMaxSites = 24;

  int site(int i) const {
    if (i < 12) return static_cast<int>((w0 >> ((11 - i) * 5)) & 0x1f);
    return static_cast<int>((w1 >> ((23 - i) * 5)) & 0x1f);
  }
  void set_site(int i, int code) {
    if (i < 12) {
      int sh = (11 - i) * 5;
      w0 = (w0 & ~(0x1fULL << sh)) | (static_cast<std::uint64_t>(code) << sh);
    } else {
      int sh = (23 - i) * 5;
      w1 = (w1 & ~(0x1fULL << sh)) | (static_cast<std::uint64_t>(code) << sh);
    }
  }
  friend bool operator==(const Packed&, const Packed&) = default;
  friend auto operator<=>(const Packed& a, const Packed& b) {
    if (auto c = a.w0 <=> b.w0; c != 0) return c;
    return a.w1 <=> b.w1;
  }
};

inline Packed pack(const BasisState& s) {
  if (s.size() > Packed::kMaxSites) throw std::invalid_argument("state too long to pack");
  Packed p;
  for (int i = 0; i < s.size(); ++i) p.set_site(i, code_of(s.sites[i]));
  return p;
}
inline BasisState unpack(const Packed& p, int n, Topology topo) {
  BasisState s;
  s.topology = topo;
  s.sites.reserve(n);
  for (int i = 0; i < n; ++i) s.sites.push_back(state_of(p.site(i)));
  return s;
}

// Whitespace-separated glyphs, e.g. "< ^^ U0 W >".
inline std::string to_glyphs(const BasisState& s) {
  std::string out;
  for (int i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += state_glyph(s.sites[i]);
  }
  return out;
}
inline std::string to_glyphs(const Configuration& c) {
  std::string out;
  for (int i = 0; i < c.size(); ++i) {
    if (i) out += ' ';
    out += tag_glyph(c.sites[i]);
  }
  return out;
}
inline BasisState state_from_glyphs(const std::string& text, Topology topo = Topology::Chain) {
  BasisState s;
  s.topology = topo;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    auto st = state_from_glyph(tok);
    if (!st) throw std::invalid_argument("unknown site glyph '" + tok + "'");
    s.sites.push_back(*st);
  }
  if (s.sites.empty()) throw std::invalid_argument("empty state");
  return s;
}

// Contiguous run of sites; on a cycle it may wrap past the last site.
struct Region {
  int start = 0;
  int length = 0;

  std::vector<int> positions(int system_size) const {
    if (length < 1 || length > system_size) throw precondition_error("bad region length");
    std::vector<int> out(length);
    for (int k = 0; k < length; ++k) out[k] = (start + k) % system_size;
    return out;
  }
};

// Construction parameters: n = 2m+3 sites per chain/segment, t segments.
struct Params {
  int n = 0;
  int t = 1;

  int m() const {
    if (n < 5 || n % 2 == 0) throw precondition_error("n must be odd and >= 5");
    return (n - 3) / 2;
  }
  int cycle_sites() const { return n * t; }
};

// The state with configuration < ^^ U^m W^m > and the U qubits set to x.
inline BasisState make_good_start(int n, const std::vector<int>& x = {}) {
  if (n < 5 || n % 2 == 0) throw precondition_error("good start state needs odd n >= 5");
  int m = (n - 3) / 2;
  if (!x.empty() && static_cast<int>(x.size()) != m)
    throw precondition_error("qubit vector must have length m = (n-3)/2");
  BasisState s;
  s.topology = Topology::Chain;
  s.sites.push_back({Tag::LeftEnd, -1});
  s.sites.push_back({Tag::UUp, -1});
  for (int i = 0; i < m; ++i)
    s.sites.push_back({Tag::U, static_cast<std::int8_t>(x.empty() ? 0 : x[i])});
  for (int i = 0; i < m; ++i) s.sites.push_back({Tag::W, -1});
  s.sites.push_back({Tag::RightEnd, -1});
  return s;
}

inline bool is_good_start(const BasisState& s) {
  int n = s.size();
  if (n < 5 || n % 2 == 0 || s.topology != Topology::Chain) return false;
  int m = (n - 3) / 2;
  if (s.sites[0].tag != Tag::LeftEnd || s.sites[1].tag != Tag::UUp) return false;
  for (int i = 0; i < m; ++i)
    if (s.sites[2 + i].tag != Tag::U) return false;
  for (int i = 0; i < m; ++i)
    if (s.sites[2 + m + i].tag != Tag::W) return false;
  return s.sites[n - 1].tag == Tag::RightEnd;
}

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

namespace detail {
template <typename F>
void for_each_adjacent(int n, Topology topo, F&& f) {
  for (int i = 0; i + 1 < n; ++i) f(i, i + 1);
  if (topo == Topology::Cycle && n > 1) f(n - 1, 0);
}
}  // namespace detail

// Free of illegal-pair items 1..8. Patterns in that range match on symbols,
// so the check is configuration-level.
inline bool is_well_formed(const Configuration& c, const RuleSet& rs) {
  if (c.size() < 1) throw precondition_error("empty configuration");
  bool ok = true;
  detail::for_each_adjacent(c.size(), c.topology, [&](int i, int j) {
    int a = code_of(c.sites[i], arity(c.sites[i]) == 2 ? 0 : -1);
    int b = code_of(c.sites[j], arity(c.sites[j]) == 2 ? 0 : -1);
    if (!rs.wf_pair(a, b)) ok = false;
  });
  return ok;
}
inline bool is_well_formed(const BasisState& s, const RuleSet& rs) {
  return is_well_formed(s.configuration(), rs);
}

struct Violation {
  int position;  // index of the pair's left site
  int item;
  friend bool operator==(const Violation&, const Violation&) = default;
};

// Every illegal pair occurring in s, as (position, item number).
inline std::vector<Violation> is_legal(const BasisState& s, const RuleSet& rs) {
  std::vector<Violation> out;
  detail::for_each_adjacent(s.size(), s.topology, [&](int i, int j) {
    int a = code_of(s.sites[i]), b = code_of(s.sites[j]);
    for (int item : rs.illegal_items(a, b)) out.push_back({i, item});
  });
  return out;
}

inline bool is_bracketed(const BasisState& s) {
  if (s.topology != Topology::Chain) throw precondition_error("bracketed is a chain predicate");
  return s.sites.front().tag == Tag::LeftEnd && s.sites.back().tag == Tag::RightEnd;
}

namespace detail {
struct SiteCounts {
  int e = 0, E = 0, uU = 0, wW = 0;
  int control_pos = -1;
  Tag control = Tag::E;
  int controls = 0;
};
inline SiteCounts count_sites(const BasisState& s) {
  SiteCounts c;
  for (int i = 0; i < s.size(); ++i) {
    Tag t = s.sites[i].tag;
    if (t == Tag::e) ++c.e;
    if (t == Tag::E) ++c.E;
    if (t == Tag::u || t == Tag::U) ++c.uU;
    if (t == Tag::w || t == Tag::W) ++c.wW;
    if (is_control(t)) {
      ++c.controls;
      c.control_pos = i;
      c.control = t;
    }
  }
  return c;
}
}  // namespace detail

// The counting conditions that hold exactly on good-path states.
inline bool is_balanced(const BasisState& s, const RuleSet& rs) {
  if (!is_bracketed(s) || !is_well_formed(s, rs))
    throw precondition_error("balanced requires a bracketed well-formed state");
  // 1: every w/W strictly right of every u/U
  int last_uU = -1, first_wW = s.size();
  for (int i = 0; i < s.size(); ++i) {
    Tag t = s.sites[i].tag;
    if (t == Tag::u || t == Tag::U) last_uU = i;
    if ((t == Tag::w || t == Tag::W) && first_wW == s.size()) first_wW = i;
  }
  if (last_uU >= 0 && first_wW < s.size() && last_uU > first_wW) return false;

  auto c = detail::count_sites(s);
  if (c.controls != 1) return false;
  switch (c.control) {
    case Tag::RRArrow:
    case Tag::RArrow:
    case Tag::Down:
      // 2: one more e than E, one fewer u/U than w/W
      if (c.e != c.E + 1 || c.uU + 1 != c.wW) return false;
      break;
    case Tag::UUp:
    case Tag::Up:
    case Tag::LArrow:
      // 3: matched counts
      if (c.e != c.E || c.uU != c.wW) return false;
      break;
    default:
      return false;
  }
  // 4: => exactly one e, -> at least two
  if (c.control == Tag::RRArrow && c.e != 1) return false;
  if (c.control == Tag::RArrow && c.e < 2) return false;
  // 5: ^^ no e, ^ and <- at least one
  if (c.control == Tag::UUp && c.e != 0) return false;
  if ((c.control == Tag::Up || c.control == Tag::LArrow) && c.e < 1) return false;
  return true;
}

// Entangled qubit pairs agree: the i-th E from the right matches the i-th e
// from the left, and a qubit-carrying control matches the rightmost e.
inline bool is_consistent(const BasisState& s, const RuleSet& rs) {
  if (!is_balanced(s, rs)) throw precondition_error("consistent requires a balanced state");
  std::vector<int> e_bits, E_bits;
  int rightmost_e = -1;
  for (int i = 0; i < s.size(); ++i) {
    if (s.sites[i].tag == Tag::e) {
      e_bits.push_back(s.sites[i].bit);
      rightmost_e = s.sites[i].bit;
    }
    if (s.sites[i].tag == Tag::E) E_bits.push_back(s.sites[i].bit);
  }
  for (std::size_t i = 0; i < E_bits.size(); ++i)
    if (E_bits[E_bits.size() - 1 - i] != e_bits[i]) return false;
  auto c = detail::count_sites(s);
  if (c.control == Tag::RArrow || c.control == Tag::RRArrow || c.control == Tag::Down) {
    if (rightmost_e >= 0 && s.sites[c.control_pos].bit != rightmost_e) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Basis enumeration
// ---------------------------------------------------------------------------

enum class ChainFilter { AllWellFormed, BracketedWellFormed };

inline constexpr std::size_t kDefaultEnumerationBudget = 20'000'000;

// Sorted, duplicate-free list of enumerated basis states with a bijective
// index. Lookup is by binary search over the packed form.
class BasisIndex {
 public:
  BasisIndex() = default;
  BasisIndex(int n, Topology topo, std::string filter, std::vector<Packed> states)
      : n_(n), topology_(topo), filter_(std::move(filter)), states_(std::move(states)) {
    std::sort(states_.begin(), states_.end());
    states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
  }

  int sites() const { return n_; }
  Topology topology() const { return topology_; }
  const std::string& filter() const { return filter_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<Packed>& packed_states() const { return states_; }
  const Packed& packed(std::size_t i) const { return states_[i]; }
  BasisState state(std::size_t i) const { return unpack(states_[i], n_, topology_); }

  std::optional<std::size_t> index_of(const Packed& p) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), p);
    if (it == states_.end() || !(*it == p)) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
  }
  std::optional<std::size_t> index_of(const BasisState& s) const { return index_of(pack(s)); }

  static BasisIndex from_states(int n, Topology topo, std::string filter,
                                const std::vector<BasisState>& states) {
    std::vector<Packed> p;
    p.reserve(states.size());
    for (const auto& s : states) p.push_back(pack(s));
    return BasisIndex(n, topo, std::move(filter), std::move(p));
  }

 private:
  int n_ = 0;
  Topology topology_ = Topology::Chain;
  std::string filter_;
  std::vector<Packed> states_;
};

namespace detail {

inline bool is_delimiter_code(int c) {
  Tag t = tag_of(c);
  return t == Tag::LeftEnd || t == Tag::RightEnd;
}

// Transfer-matrix count of well-formed chain states, exact. Used to enforce
// the enumeration budget before any state is materialized. Bracketed states
// carry delimiters exactly at the two ends.
inline std::size_t count_chain_states(const RuleSet& rs, int n, ChainFilter filter) {
  const bool bracketed = filter == ChainFilter::BracketedWellFormed;
  std::vector<std::size_t> cur(kNumSiteStates, 0);
  for (int c = 0; c < kNumSiteStates; ++c)
    cur[c] = bracketed ? (tag_of(c) == Tag::LeftEnd ? 1 : 0) : 1;
  for (int len = 2; len <= n; ++len) {
    std::vector<std::size_t> next(kNumSiteStates, 0);
    for (int b = 0; b < kNumSiteStates; ++b) {
      if (bracketed && len < n && is_delimiter_code(b)) continue;
      if (bracketed && len == n && tag_of(b) != Tag::RightEnd) continue;
      for (int a = 0; a < kNumSiteStates; ++a)
        if (cur[a] && rs.wf_pair(a, b)) next[b] += cur[a];
    }
    cur = std::move(next);
  }
  std::size_t total = 0;
  for (int c = 0; c < kNumSiteStates; ++c) total += cur[c];
  if (bracketed && n == 1) return 0;
  return total;
}

inline void dfs_chain(const RuleSet& rs, int n, ChainFilter filter, std::vector<Packed>& out) {
  const bool bracketed = filter == ChainFilter::BracketedWellFormed;
  if (bracketed && n < 2) return;
  std::vector<int> stack(n);
  Packed p;
  // DFS in code order emits states already in lexicographic order
  int depth = 0;
  stack[0] = -1;
  while (depth >= 0) {
    int c = ++stack[depth];
    if (c >= kNumSiteStates) {
      --depth;
      continue;
    }
    if (bracketed) {
      if (depth == 0 && tag_of(c) != Tag::LeftEnd) continue;
      if (depth == n - 1 && tag_of(c) != Tag::RightEnd) continue;
      if (depth > 0 && depth < n - 1 && is_delimiter_code(c)) continue;
    }
    if (depth > 0 && !rs.wf_pair(p.site(depth - 1), c)) continue;
    p.set_site(depth, c);
    if (depth == n - 1) {
      out.push_back(p);
      continue;
    }
    ++depth;
    stack[depth] = -1;
  }
}

}  // namespace detail

// Every well-formed chain basis state of n sites, optionally restricted to
// bracketed ones. Deterministic lexicographic order.
inline BasisIndex enumerate_chain_basis(const RuleSet& rs, int n, ChainFilter filter,
                                        std::size_t budget = kDefaultEnumerationBudget) {
  if (n < 1 || n > Packed::kMaxSites) throw precondition_error("site count out of range");
  std::size_t count = detail::count_chain_states(rs, n, filter);
  if (count > budget)
    throw budget_exceeded("chain basis at n=" + std::to_string(n) + " has " +
                          std::to_string(count) + " states, budget " + std::to_string(budget));
  std::vector<Packed> out;
  out.reserve(count);
  detail::dfs_chain(rs, n, filter, out);
  return BasisIndex(n, Topology::Chain,
                    filter == ChainFilter::BracketedWellFormed ? "bracketed-well-formed"
                                                               : "all-well-formed",
                    std::move(out));
}

namespace detail {

// Cyclically well-formed states with no delimiter site (single-letter runs
// and u/w or U/W mixtures survive the wraparound constraints).
inline void dfs_segmentless(const RuleSet& rs, int n, std::vector<Packed>& out) {
  std::vector<int> stack(n);
  Packed p;
  int depth = 0;
  stack[0] = -1;
  auto delimiter = [](int c) {
    return tag_of(c) == Tag::LeftEnd || tag_of(c) == Tag::RightEnd;
  };
  while (depth >= 0) {
    int c = ++stack[depth];
    if (c >= kNumSiteStates) {
      --depth;
      continue;
    }
    if (delimiter(c)) continue;
    if (depth > 0 && !rs.wf_pair(p.site(depth - 1), c)) continue;
    p.set_site(depth, c);
    if (depth == n - 1) {
      if (rs.wf_pair(c, p.site(0))) out.push_back(p);
      continue;
    }
    ++depth;
    stack[depth] = -1;
  }
}

// trace of the well-formed-pair adjacency over non-delimiter codes: exact
// segmentless count (each state has a fixed starting index, so rotations are
// distinct and the trace counts each exactly once).
inline std::size_t count_segmentless(const RuleSet& rs, int n) {
  constexpr int K = kNumSiteStates;
  std::size_t total = 0;
  for (int c0 = 0; c0 < K; ++c0) {
    if (is_delimiter_code(c0)) continue;
    std::vector<std::size_t> cur(K, 0);
    cur[c0] = 1;
    for (int step = 1; step < n; ++step) {
      std::vector<std::size_t> next(K, 0);
      for (int a = 0; a < K; ++a) {
        if (!cur[a]) continue;
        for (int b = 0; b < K; ++b) {
          if (is_delimiter_code(b)) continue;
          if (rs.wf_pair(a, b)) next[b] += cur[a];
        }
      }
      cur = std::move(next);
    }
    if (n == 1) {
      if (rs.wf_pair(c0, c0)) ++total;
      continue;
    }
    for (int a = 0; a < K; ++a)
      if (cur[a] && rs.wf_pair(a, c0)) total += cur[a];
  }
  return total;
}

// All sets of left-delimiter positions whose circular gaps are all at least
// min_segment. Each set determines one segment layout.
inline void cycle_layouts(int N, int min_segment, std::vector<std::vector<int>>& layouts) {
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int next) {
    for (int p = next; p < N; ++p) {
      if (!cur.empty() && p - cur.back() < min_segment) continue;
      cur.push_back(p);
      int wrap = N - cur.back() + cur.front();
      if (wrap >= min_segment) layouts.push_back(cur);
      rec(p + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace detail

// Well-formed cycle states: every > is followed by <, every maximal < ... >
// segment of length >= min_segment is a well-formed bracketed chain, plus the
// segmentless all-lowercase / all-uppercase states.
inline BasisIndex enumerate_cycle_basis(const RuleSet& rs, int N,
                                        std::size_t budget = kDefaultEnumerationBudget,
                                        int min_segment = 4) {
  if (N < 1 || N > Packed::kMaxSites) throw precondition_error("site count out of range");
  std::vector<std::vector<int>> layouts;
  detail::cycle_layouts(N, min_segment, layouts);

  // count first
  std::map<int, std::size_t> seg_count;
  auto count_of = [&](int l) {
    auto it = seg_count.find(l);
    if (it != seg_count.end()) return it->second;
    std::size_t c = detail::count_chain_states(rs, l, ChainFilter::BracketedWellFormed);
    seg_count[l] = c;
    return c;
  };
  auto over_budget = [&] {
    throw budget_exceeded("cycle basis at N=" + std::to_string(N) + " exceeds budget " +
                          std::to_string(budget));
  };
  std::size_t total = detail::count_segmentless(rs, N);
  for (const auto& lay : layouts) {
    std::size_t prod = 1;
    for (std::size_t k = 0; k < lay.size(); ++k) {
      int len = (k + 1 < lay.size() ? lay[k + 1] : N + lay[0]) - lay[k];
      std::size_t c = count_of(len);
      if (c != 0 && prod > 2 * budget / c) over_budget();
      prod *= c;
    }
    total += prod;
    if (total > budget) over_budget();
  }
  if (total > budget) over_budget();

  std::vector<Packed> out;
  out.reserve(total);
  detail::dfs_segmentless(rs, N, out);

  std::map<int, std::vector<Packed>> seg_states;
  auto states_of = [&](int l) -> const std::vector<Packed>& {
    auto it = seg_states.find(l);
    if (it != seg_states.end()) return it->second;
    std::vector<Packed> v;
    detail::dfs_chain(rs, l, ChainFilter::BracketedWellFormed, v);
    return seg_states.emplace(l, std::move(v)).first->second;
  };

  for (const auto& lay : layouts) {
    std::vector<int> lens(lay.size());
    for (std::size_t k = 0; k < lay.size(); ++k)
      lens[k] = (k + 1 < lay.size() ? lay[k + 1] : N + lay[0]) - lay[k];
    // product over segments, each written at its offset
    std::vector<std::size_t> idx(lay.size(), 0);
    for (;;) {
      Packed p;
      for (std::size_t k = 0; k < lay.size(); ++k) {
        const Packed& seg = states_of(lens[k])[idx[k]];
        for (int q = 0; q < lens[k]; ++q) p.set_site((lay[k] + q) % N, seg.site(q));
      }
      out.push_back(p);
      // odometer
      std::size_t k = 0;
      for (; k < lay.size(); ++k) {
        if (++idx[k] < states_of(lens[k]).size()) break;
        idx[k] = 0;
      }
      if (k == lay.size()) break;
    }
  }
  return BasisIndex(N, Topology::Cycle, "cycle-well-formed", std::move(out));
}

}  // namespace tichain

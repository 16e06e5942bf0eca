#pragma once

// Reference recognizer for well-formed configurations: the three template
// expressions compiled into small NFAs with substring-language matching.
// Deliberately independent of the pair-table implementation in
// configspace.hpp; the verify command and the test suite compare the two.

#include <set>

#include "tichain/configspace.hpp"

namespace tichain::reference {

struct Stage {
  enum Kind { Opt, Star, One } kind;
  std::set<Tag> syms;
};

// NFA state k = "first k stages consumed". Opt/Star stages are skippable.
class TemplateExpr {
 public:
  explicit TemplateExpr(std::vector<Stage> stages) : stages_(std::move(stages)) {}

  // true iff s is a substring of some word matching the template
  bool matches_substring(const std::vector<Tag>& s) const {
    const int K = static_cast<int>(stages_.size());
    std::set<int> cur;
    for (int k = 0; k <= K; ++k) cur.insert(k);  // any prefix may precede s
    for (Tag t : s) {
      std::set<int> next;
      for (int k : cur) {
        for (int j = k; j < K; ++j) {
          const Stage& st = stages_[j];
          if (st.syms.count(t)) {
            if (st.kind == Stage::Star) next.insert(j);
            next.insert(j + 1);
          }
          if (st.kind == Stage::One) break;  // mandatory stage cannot be skipped
        }
      }
      if (next.empty()) return false;
      cur = std::move(next);
    }
    return !cur.empty();  // any suffix may follow
  }

 private:
  std::vector<Stage> stages_;
};

// The three well-formed-configuration templates (eps = empty):
//   (< | eps) e* (u|w)* (-> | <- | =>) (U|W)* E* (> | eps)
//   (< | eps) e* (^ | ^^) (U|W)* E* (> | eps)
//   (< | eps) e* (u|w)* v E* (> | eps)
inline const std::vector<TemplateExpr>& expressions() {
  using K = Stage::Kind;
  static const std::vector<TemplateExpr> exprs = [] {
    auto L = Stage{K::Opt, {Tag::LeftEnd}};
    auto R = Stage{K::Opt, {Tag::RightEnd}};
    auto e = Stage{K::Star, {Tag::e}};
    auto uw = Stage{K::Star, {Tag::u, Tag::w}};
    auto UW = Stage{K::Star, {Tag::U, Tag::W}};
    auto E = Stage{K::Star, {Tag::E}};
    std::vector<TemplateExpr> v;
    v.emplace_back(std::vector<Stage>{
        L, e, uw, Stage{K::One, {Tag::RArrow, Tag::LArrow, Tag::RRArrow}}, UW, E, R});
    v.emplace_back(std::vector<Stage>{L, e, Stage{K::One, {Tag::Up, Tag::UUp}}, UW, E, R});
    v.emplace_back(std::vector<Stage>{L, e, uw, Stage{K::One, {Tag::Down}}, E, R});
    return v;
  }();
  return exprs;
}

// A nonempty chain configuration is well-formed iff it is a substring of a
// word of one of the three templates.
inline bool well_formed(const std::vector<Tag>& config) {
  for (const auto& ex : expressions())
    if (ex.matches_substring(config)) return true;
  return false;
}

inline bool well_formed(const Configuration& c) {
  return well_formed(c.sites);
}

}  // namespace tichain::reference

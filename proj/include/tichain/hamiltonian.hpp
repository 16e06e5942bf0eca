#pragma once

// Assembles every operator of the construction as a sparse real symmetric
// matrix over an enumerated basis: the transition, legality, initialization,
// bracket, boundary and segment-size terms, plus the weighted chain/cycle
// combinations. Entry values are accumulated as exact integer multiples of
// 1/(2n) and converted to floating point once at the end.

#include <cmath>

#include "tichain/transition.hpp"

namespace tichain {

enum class TermKind { Trans, Legal, Init, Bracket, Boundary, Size };

inline std::string_view term_name(TermKind k) {
  switch (k) {
    case TermKind::Trans: return "trans";
    case TermKind::Legal: return "legal";
    case TermKind::Init: return "init";
    case TermKind::Bracket: return "bracket";
    case TermKind::Boundary: return "boundary";
    case TermKind::Size: return "size";
  }
  return "?";
}

enum class ChainVariant { Core, FrustrationFree, UniformBracket };

inline std::string_view variant_name(ChainVariant v) {
  switch (v) {
    case ChainVariant::Core: return "core";
    case ChainVariant::FrustrationFree: return "frustration_free";
    case ChainVariant::UniformBracket: return "uniform_bracket";
  }
  return "?";
}

// Weights of the cycle combination  chain_weight * (H_trans + H_legal +
// H_init) + H_size. The H_size coefficients are fixed by the segment
// parameter n: per site 1/n, per left delimiter -2, per turning control
// T_n/(n-2) = (n-1)/2 exactly.
struct OperatorWeights {
  long long chain_weight = 1;
  int size_n = 0;  // 0 disables the size term

  // T_n/(n-2) = (n-1)/2, exact for odd n
  long long turn_weight_halves() const {
    if (size_n % 2 == 0) throw precondition_error("size term needs odd n");
    return (size_n - 1) / 2;
  }
};

// ---------------------------------------------------------------------------
// SparseOperator
// ---------------------------------------------------------------------------

class SparseOperator {
 public:
  SparseOperator() = default;

  std::size_t dim() const { return dim_; }
  const BasisIndex* basis() const { return basis_; }
  double norm_bound() const { return norm_bound_; }
  std::string_view kind() const { return kind_; }
  int param_n() const { return param_n_; }

  std::size_t nnz() const { return col_.size(); }
  std::pair<const std::uint32_t*, const double*> row(std::size_t i, std::size_t* len) const {
    *len = row_ptr_[i + 1] - row_ptr_[i];
    return {col_.data() + row_ptr_[i], val_.data() + row_ptr_[i]};
  }
  double entry(std::size_t i, std::size_t j) const {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_[k] == j) return val_[k];
    return 0.0;
  }

  // y = A x, dense buffers
  void apply_dense(const double* x, double* y) const {
    for (std::size_t i = 0; i < dim_; ++i) {
      double acc = 0.0;
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += val_[k] * x[col_[k]];
      y[i] = acc;
    }
  }

  // Hermitian by construction; this verifies it entry-for-entry.
  bool is_symmetric(double tol = 0.0) const {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
        double t = entry(col_[k], i);
        if (std::abs(t - val_[k]) > tol) return false;
      }
    return true;
  }

  struct Builder;

 private:
  std::size_t dim_ = 0;
  const BasisIndex* basis_ = nullptr;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> col_;
  std::vector<double> val_;
  double norm_bound_ = 0.0;
  std::string kind_;
  int param_n_ = 0;
};

struct SparseOperator::Builder {
  SparseOperator op;
  std::vector<std::pair<std::uint32_t, long long>> scratch;

  explicit Builder(const BasisIndex& basis, std::string kind, int param_n) {
    op.dim_ = basis.size();
    op.basis_ = &basis;
    op.kind_ = std::move(kind);
    op.param_n_ = param_n;
    op.row_ptr_.assign(op.dim_ + 1, 0);
    op.col_.reserve(op.dim_ * 3);
    op.val_.reserve(op.dim_ * 3);
  }

  // entries of one row as exact numerators over `den`; sorted, merged,
  // zero-dropped and divided exactly once
  void commit_row(std::size_t i, long long den, double drop_below = 1e-14) {
    std::sort(scratch.begin(), scratch.end());
    double row_abs = 0.0;
    for (std::size_t k = 0; k < scratch.size();) {
      std::uint32_t c = scratch[k].first;
      long long num = 0;
      while (k < scratch.size() && scratch[k].first == c) num += scratch[k++].second;
      double v = static_cast<double>(num) / static_cast<double>(den);
      if (num == 0 || std::abs(v) < drop_below) continue;
      op.col_.push_back(c);
      op.val_.push_back(v);
      row_abs += std::abs(v);
    }
    op.row_ptr_[i + 1] = op.col_.size();
    op.norm_bound_ = std::max(op.norm_bound_, row_abs);
    scratch.clear();
  }
};

// ---------------------------------------------------------------------------
// Term assembly
// ---------------------------------------------------------------------------

namespace detail {

// Per-row contributions with exact numerators over den. `weights[kind]` holds
// the integer numerator each term kind is scaled by (already including den).
struct TermWeights {
  long long den = 2;
  long long trans = 0, legal = 0, init = 0, bracket = 0, boundary = 0;
  // size term: site / delimiter / turning-control numerators
  long long size_site = 0, size_left = 0, size_turn = 0;
};

inline void emit_row(const RuleSet& rs, const BasisIndex& basis, std::size_t i,
                     const TermWeights& w, std::vector<std::pair<std::uint32_t, long long>>& out) {
  const int n = basis.sites();
  const Packed& p = basis.packed(i);
  const Topology topo = basis.topology();
  long long diag = 0;

  auto target_index = [&](int pos, int a, int b, int q) {
    Packed t = p;
    t.set_site(pos, a);
    t.set_site(q, b);
    auto j = basis.index_of(t);
    if (!j)
      throw std::runtime_error("basis not closed: rule application leaves the index at state " +
                               to_glyphs(unpack(p, n, topo)));
    return static_cast<std::uint32_t>(*j);
  };

  const int pairs = (topo == Topology::Cycle) ? n : n - 1;
  for (int pos = 0; pos < pairs; ++pos) {
    const int q = (pos + 1) % n;
    const int a = p.site(pos), b = p.site(q);
    if (w.trans) {
      for (int id : rs.forward_rules(a, b)) {
        const ConcreteRule& r = rs.concrete(id);
        diag += w.trans;  // +1/2 scaled: w.trans carries the half
        out.emplace_back(target_index(pos, r.rhs_a, r.rhs_b, q), -w.trans);
      }
      for (int id : rs.backward_rules(a, b)) {
        const ConcreteRule& r = rs.concrete(id);
        diag += w.trans;
        out.emplace_back(target_index(pos, r.lhs_a, r.lhs_b, q), -w.trans);
      }
    }
    if (w.legal) diag += w.legal * static_cast<long long>(rs.illegal_items(a, b).size());
  }

  long long n_left = 0, n_turn = 0, n_nondelim = 0;
  for (int pos = 0; pos < n; ++pos) {
    const int c = p.site(pos);
    const Tag t = tag_of(c);
    if (w.init && t == Tag::U) {
      diag += w.init;
      Packed f = p;
      f.set_site(pos, code_of(Tag::U, 1 - bit_of(c)));
      auto j = basis.index_of(f);
      if (!j) throw std::runtime_error("basis not closed under the init term");
      out.emplace_back(static_cast<std::uint32_t>(*j), -w.init);
    }
    if (t == Tag::LeftEnd) ++n_left;
    if (t == Tag::Up || t == Tag::UUp || t == Tag::Down) ++n_turn;
    if (t != Tag::LeftEnd && t != Tag::RightEnd) ++n_nondelim;
  }
  if (w.bracket) diag += w.bracket * n_nondelim;
  if (w.boundary) {
    if (topo == Topology::Cycle)
      throw precondition_error("boundary term is chain-only");
    if (tag_of(p.site(0)) != Tag::LeftEnd) diag += w.boundary;
    if (tag_of(p.site(n - 1)) != Tag::RightEnd) diag += w.boundary;
  }
  if (w.size_site) diag += w.size_site * n + w.size_left * n_left + w.size_turn * n_turn;

  if (diag != 0) out.emplace_back(static_cast<std::uint32_t>(i), diag);
}

inline SparseOperator build(const RuleSet& rs, const BasisIndex& basis, const TermWeights& w,
                            std::string kind, int param_n) {
  SparseOperator::Builder b(basis, std::move(kind), param_n);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    emit_row(rs, basis, i, w, b.scratch);
    b.commit_row(i, w.den);
  }
  return std::move(b.op);
}

}  // namespace detail

// One term of the construction over the given basis. The size term needs the
// segment parameter n (its coefficients are 1/n, -2 and (n-1)/2).
inline SparseOperator build_term(TermKind kind, const RuleSet& rs, const BasisIndex& basis,
                                 int size_n = 0) {
  detail::TermWeights w;
  switch (kind) {
    case TermKind::Trans: w.trans = 1; break;            // halves: den=2
    case TermKind::Legal: w.legal = 2; break;
    case TermKind::Init: w.init = 1; break;
    case TermKind::Bracket: w.bracket = 2; break;
    case TermKind::Boundary: w.boundary = 2; break;
    case TermKind::Size: {
      if (size_n < 5 || size_n % 2 == 0)
        throw precondition_error("size term needs odd n >= 5");
      w.den = 2LL * size_n;
      w.size_site = 2;                                             // 1/n
      w.size_left = -4LL * size_n;                                 // -2
      w.size_turn = static_cast<long long>(size_n - 1) * size_n;   // (n-1)/2
      break;
    }
  }
  return detail::build(rs, basis, w, std::string(term_name(kind)), size_n);
}

// Weighted chain combinations:
//   core             = H_trans + H_legal + H_init
//   frustration_free = core + H_boundary
//   uniform_bracket  = 3*core + H_bracket
inline SparseOperator assemble_chain(const RuleSet& rs, int n, ChainVariant variant,
                                     const BasisIndex& basis) {
  if (basis.sites() != n) throw precondition_error("basis size mismatch");
  if (n < 4) throw precondition_error("assemble_chain needs n >= 4");
  detail::TermWeights w;
  switch (variant) {
    case ChainVariant::Core:
      w.trans = 1, w.legal = 2, w.init = 1;
      break;
    case ChainVariant::FrustrationFree:
      w.trans = 1, w.legal = 2, w.init = 1, w.boundary = 2;
      break;
    case ChainVariant::UniformBracket:
      w.trans = 3, w.legal = 6, w.init = 3, w.bracket = 2;
      break;
  }
  return detail::build(rs, basis, w, std::string(variant_name(variant)), n);
}

// Cycle combination  chain_weight * (H_trans + H_legal + H_init) + H_size
// over an enumerate_cycle_basis index. Two-site terms act on every cyclic
// neighbor pair; they vanish on the legal > < junctions by construction.
inline SparseOperator assemble_cycle(const RuleSet& rs, const OperatorWeights& weights,
                                     const BasisIndex& basis) {
  if (basis.topology() != Topology::Cycle)
    throw precondition_error("assemble_cycle needs a cycle basis");
  const int n = weights.size_n;
  if (n < 5 || n % 2 == 0) throw precondition_error("cycle weights need odd n >= 5");
  detail::TermWeights w;
  w.den = 2LL * n;
  w.trans = weights.chain_weight * n;       // chain_weight * 1/2 over den 2n
  w.legal = weights.chain_weight * 2 * n;   // chain_weight * 1
  w.init = weights.chain_weight * n;
  w.size_site = 2;                          // 1/n
  w.size_left = -4LL * n;                   // -2
  w.size_turn = static_cast<long long>(n - 1) * n;  // (n-1)/2
  return detail::build(rs, basis, w, "cycle", n);
}

}  // namespace tichain

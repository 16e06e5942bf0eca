#pragma once

// Ground-state construction (phi_x, phi_g, the cycle states psi_i and Phi),
// support-sparse reduced density matrices, von Neumann entropy (base 2) and
// the good-particle accounting for cycle regions.
//
// Reduced states are never materialized over the full 21^|A| region space;
// their dimension is the number of distinct region restrictions in the
// support. For the cycle states the sweep exploits the segment product
// structure: tracing down a product of segment states splits into per-piece
// factors, and a superposition of rotations reduces to a mixture because the
// complement of every admissible region pins the delimiter layout.

#include <unordered_map>

#include "tichain/spectral.hpp"

namespace tichain {

// ---------------------------------------------------------------------------
// StateVector
// ---------------------------------------------------------------------------

struct CycleStructure {
  int n = 0, t = 0;
  int rotation = 0;  // segment starts at rotation + k*n
  bool phi = false;  // uniform superposition of all n rotations
};

class StateVector {
 public:
  StateVector() = default;
  StateVector(std::shared_ptr<const BasisIndex> basis,
              std::vector<std::pair<std::uint32_t, double>> amps)
      : basis_(std::move(basis)), amps_(std::move(amps)) {
    std::sort(amps_.begin(), amps_.end());
    double s = 0;
    for (auto& [i, a] : amps_) s += a * a;
    norm_ = std::sqrt(s);
  }

  const BasisIndex& basis() const { return *basis_; }
  std::shared_ptr<const BasisIndex> basis_ptr() const { return basis_; }
  const std::vector<std::pair<std::uint32_t, double>>& amplitudes() const { return amps_; }
  double norm() const { return norm_; }
  std::size_t support_size() const { return amps_.size(); }
  int sites() const { return basis_->sites(); }

  const std::optional<CycleStructure>& structure() const { return structure_; }
  void set_structure(CycleStructure s) { structure_ = s; }

  double amplitude(std::uint32_t index) const {
    auto it = std::lower_bound(amps_.begin(), amps_.end(),
                               std::pair<std::uint32_t, double>{index, -1e300});
    if (it != amps_.end() && it->first == index) return it->second;
    return 0.0;
  }

  double dot(const StateVector& other) const {
    double s = 0;
    auto a = amps_.begin();
    auto b = other.amps_.begin();
    while (a != amps_.end() && b != other.amps_.end()) {
      if (a->first < b->first)
        ++a;
      else if (b->first < a->first)
        ++b;
      else
        s += (a++)->second * (b++)->second;
    }
    return s;
  }

 private:
  std::shared_ptr<const BasisIndex> basis_;
  std::vector<std::pair<std::uint32_t, double>> amps_;
  double norm_ = 0;
  std::optional<CycleStructure> structure_;
};

// exact sparse matrix-vector product in deterministic index order
inline StateVector apply(const SparseOperator& op, const StateVector& v) {
  if (op.dim() != v.basis().size()) throw precondition_error("operator/state dimension mismatch");
  std::map<std::uint32_t, double> acc;
  for (const auto& [j, a] : v.amplitudes()) {
    std::size_t len;
    auto [cols, vals] = op.row(j, &len);  // symmetric: row j = column j
    for (std::size_t k = 0; k < len; ++k) acc[cols[k]] += vals[k] * a;
  }
  std::vector<std::pair<std::uint32_t, double>> out;
  out.reserve(acc.size());
  for (auto& [i, x] : acc) out.emplace_back(i, x);
  return StateVector(v.basis_ptr(), std::move(out));
}

inline double expectation(const SparseOperator& op, const StateVector& v) {
  return apply(op, v).dot(v);
}

// ---------------------------------------------------------------------------
// Ground-state construction
// ---------------------------------------------------------------------------

// Uniform superposition over the path seeded from < ^^ U^m W^m > with the U
// qubits set to x. Exact zero mode of H_trans + H_legal.
inline StateVector construct_phi_x(const RuleSet& rs, int n, const std::vector<int>& x,
                                   std::shared_ptr<const BasisIndex> basis) {
  if (n < 5 || n % 2 == 0) throw precondition_error("phi_x needs odd n >= 5");
  auto path = extract_path(rs, make_good_start(n, x));
  double amp = 1.0 / std::sqrt(static_cast<double>(path.length()));
  std::vector<std::pair<std::uint32_t, double>> amps;
  for (const auto& s : path.states) {
    auto i = basis->index_of(s);
    if (!i) throw precondition_error("path state missing from basis");
    amps.emplace_back(static_cast<std::uint32_t>(*i), amp);
  }
  return StateVector(std::move(basis), std::move(amps));
}

namespace detail {
inline void collect_phi_g_states(const RuleSet& rs, int n, std::vector<BasisState>& out,
                                 int min_e_count = -1, int max_e_count = 1 << 30) {
  int m = (n - 3) / 2;
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<int> x(m);
    for (int b = 0; b < m; ++b) x[b] = (mask >> b) & 1;
    auto path = extract_path(rs, make_good_start(n, x));
    for (const auto& s : path.states) {
      int ec = 0;
      for (const auto& site : s.sites)
        if (site.tag == Tag::e) ++ec;
      if (ec >= min_e_count && ec <= max_e_count) out.push_back(s);
    }
  }
}
}  // namespace detail

// phi_g = 2^{-m/2} sum_x phi_x: uniform over all T * 2^m consistent path states.
inline StateVector construct_phi_g(const RuleSet& rs, int n,
                                   std::shared_ptr<const BasisIndex> basis) {
  if (n < 5 || n % 2 == 0) throw precondition_error("phi_g needs odd n >= 5");
  std::vector<BasisState> states;
  detail::collect_phi_g_states(rs, n, states);
  double amp = 1.0 / std::sqrt(static_cast<double>(states.size()));
  std::vector<std::pair<std::uint32_t, double>> amps;
  for (const auto& s : states) {
    auto i = basis->index_of(s);
    if (!i) throw precondition_error("path state missing from basis");
    amps.emplace_back(static_cast<std::uint32_t>(*i), amp);
  }
  return StateVector(std::move(basis), std::move(amps));
}

// Where the good path is split for the entanglement accounting: the first
// state carrying s+1 sites in state e opens the high-entanglement suffix.
struct PathSplit {
  long long T;       // configurations on the path
  long long T2;      // configurations in the suffix
  int s;             // floor((n-3)/4) guaranteed entangled pairs
  double s_bound;    // (n-3)/4
  double c;          // measured T2 / T
};

inline PathSplit path_split(const RuleSet& rs, int n) {
  if (n < 5 || n % 2 == 0) throw precondition_error("path split needs odd n >= 5");
  PathSplit out;
  out.s = (n - 3) / 4;
  out.s_bound = (n - 3) / 4.0;
  auto path = extract_path(rs, make_good_start(n));
  out.T = path.length();
  out.T2 = 0;
  for (const auto& st : path.states) {
    int ec = 0;
    for (const auto& site : st.sites)
      if (site.tag == Tag::e) ++ec;
    if (ec >= out.s + 1) ++out.T2;
  }
  out.c = static_cast<double>(out.T2) / static_cast<double>(out.T);
  return out;
}

// The normalized prefix (phi_1) or suffix (phi_2) component of phi_g under
// the path split above.
enum class PhiComponent { Prefix, Suffix };

inline StateVector construct_phi_component(const RuleSet& rs, int n, PhiComponent which,
                                           std::shared_ptr<const BasisIndex> basis) {
  auto split = path_split(rs, n);
  std::vector<BasisState> states;
  if (which == PhiComponent::Suffix)
    detail::collect_phi_g_states(rs, n, states, split.s + 1);
  else
    detail::collect_phi_g_states(rs, n, states, -1, split.s);
  double amp = 1.0 / std::sqrt(static_cast<double>(states.size()));
  std::vector<std::pair<std::uint32_t, double>> amps;
  for (const auto& s : states) {
    auto i = basis->index_of(s);
    if (!i) throw precondition_error("path state missing from basis");
    amps.emplace_back(static_cast<std::uint32_t>(*i), amp);
  }
  return StateVector(std::move(basis), std::move(amps));
}

// psi_i (rotation i of t copies of phi_g^n) or Phi (uniform over rotations)
// on a cycle of n*t sites. If no basis is supplied, a support-only index is
// built, which is how the larger cycles are handled.
struct CycleWhich {
  int rotation = 0;
  bool phi = false;
  static CycleWhich psi(int i) { return {i, false}; }
  static CycleWhich Phi() { return {0, true}; }
};

inline StateVector construct_cycle_state(const RuleSet& rs, int n, int t, CycleWhich which,
                                         std::shared_ptr<const BasisIndex> basis = nullptr) {
  if (n < 5 || n % 2 == 0) throw precondition_error("cycle states need odd n >= 5");
  if (t < 2) throw precondition_error("cycle states need t >= 2");
  const int N = n * t;
  if (!which.phi && (which.rotation < 0 || which.rotation >= n))
    throw precondition_error("rotation index out of range");

  std::vector<BasisState> seg_states;
  detail::collect_phi_g_states(rs, n, seg_states);
  const std::size_t S = seg_states.size();

  std::vector<int> rotations;
  if (which.phi)
    for (int i = 0; i < n; ++i) rotations.push_back(i);
  else
    rotations.push_back(which.rotation);

  std::vector<BasisState> support;
  std::vector<std::size_t> odo(t, 0);
  for (int rot : rotations) {
    odo.assign(t, 0);
    for (;;) {
      BasisState s;
      s.topology = Topology::Cycle;
      s.sites.assign(N, SiteState{Tag::W, -1});
      for (int seg = 0; seg < t; ++seg) {
        const BasisState& part = seg_states[odo[seg]];
        for (int q = 0; q < n; ++q) s.sites[(rot + seg * n + q) % N] = part.sites[q];
      }
      support.push_back(std::move(s));
      int seg = 0;
      for (; seg < t; ++seg) {
        if (++odo[seg] < S) break;
        odo[seg] = 0;
      }
      if (seg == t) break;
    }
  }

  if (!basis) basis = std::make_shared<const BasisIndex>(
      BasisIndex::from_states(N, Topology::Cycle, "cycle-state-support", support));

  double amp = 1.0 / std::sqrt(static_cast<double>(std::pow(static_cast<double>(S), t)) *
                               (which.phi ? n : 1));
  std::vector<std::pair<std::uint32_t, double>> amps;
  amps.reserve(support.size());
  for (const auto& s : support) {
    auto i = basis->index_of(s);
    if (!i) throw precondition_error("cycle support state missing from basis");
    amps.emplace_back(static_cast<std::uint32_t>(*i), amp);
  }
  StateVector v(std::move(basis), std::move(amps));
  v.set_structure(CycleStructure{n, t, which.rotation, which.phi});
  return v;
}

// ---------------------------------------------------------------------------
// Reduced density matrices and entropy
// ---------------------------------------------------------------------------

struct DensityMatrix {
  Eigen::MatrixXd rho;
  std::vector<Packed> labels;  // region restriction labelling each row/column
  double trace = 0;

  int dim() const { return static_cast<int>(rho.rows()); }
};

namespace detail {

struct PackedHash {
  std::size_t operator()(const Packed& p) const {
    std::uint64_t h = p.w0 * 0x9e3779b97f4a7c15ULL;
    h ^= p.w1 + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

inline Packed subset_key(const Packed& full, const std::vector<int>& positions) {
  Packed out;
  for (std::size_t k = 0; k < positions.size(); ++k) out.set_site(static_cast<int>(k),
                                                                  full.site(positions[k]));
  return out;
}

// support split into groups sharing the complement restriction
struct SplitSupport {
  std::vector<Packed> keep_labels;
  // per complement group: (keep-label index, amplitude)
  std::vector<std::vector<std::pair<int, double>>> groups;
};

inline SplitSupport split_support(const StateVector& v, const std::vector<int>& keep) {
  const int n = v.sites();
  std::vector<int> comp;
  std::vector<bool> in_keep(n, false);
  for (int p : keep) in_keep[p] = true;
  for (int p = 0; p < n; ++p)
    if (!in_keep[p]) comp.push_back(p);

  SplitSupport out;
  std::unordered_map<Packed, int, PackedHash> keep_idx;
  std::unordered_map<Packed, int, PackedHash> comp_idx;
  for (const auto& [i, a] : v.amplitudes()) {
    const Packed& full = v.basis().packed(i);
    Packed kk = subset_key(full, keep);
    Packed ck = subset_key(full, comp);
    auto [kit, kfresh] = keep_idx.try_emplace(kk, static_cast<int>(out.keep_labels.size()));
    if (kfresh) out.keep_labels.push_back(kk);
    auto [cit, cfresh] = comp_idx.try_emplace(ck, static_cast<int>(out.groups.size()));
    if (cfresh) out.groups.emplace_back();
    out.groups[cit->second].emplace_back(kit->second, a);
  }
  return out;
}

}  // namespace detail

// Partial trace over the complement of `positions`. The matrix dimension is
// the number of distinct restrictions of the support to the region.
inline DensityMatrix reduced_density(const StateVector& v, const std::vector<int>& positions) {
  if (positions.empty()) throw precondition_error("empty region");
  auto split = detail::split_support(v, positions);
  const int d = static_cast<int>(split.keep_labels.size());
  if (d > 6000)
    throw precondition_error("reduced density dimension " + std::to_string(d) +
                             " too large to materialize; use entropy_sweep");
  DensityMatrix dm;
  dm.labels = std::move(split.keep_labels);
  dm.rho = Eigen::MatrixXd::Zero(d, d);
  for (const auto& g : split.groups)
    for (auto [i, a] : g)
      for (auto [j, b] : g) dm.rho(i, j) += a * b;
  dm.trace = dm.rho.trace();
  return dm;
}

inline DensityMatrix reduced_density(const StateVector& v, const Region& region) {
  return reduced_density(v, region.positions(v.sites()));
}

// Von Neumann entropy in bits; eigenvalues below 1e-14 are excluded.
inline double entropy(const DensityMatrix& dm) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dm.rho, Eigen::EigenvaluesOnly);
  double S = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double l = es.eigenvalues()(i);
    if (l > 1e-14) S -= l * std::log2(l);
  }
  return S;
}

namespace detail {

inline double entropy_of(const std::vector<double>& eigenvalues) {
  double S = 0;
  for (double l : eigenvalues)
    if (l > 1e-14) S -= l * std::log2(l);
  return S;
}

// spectrum of the reduced state on `keep`, computed on the cheaper side
// (a pure state has equal entropy on a region and its complement)
inline std::vector<double> subset_spectrum(const StateVector& v, std::vector<int> keep) {
  const int n = v.sites();
  if (static_cast<int>(keep.size()) > n / 2) {
    std::vector<bool> in_keep(n, false);
    for (int p : keep) in_keep[p] = true;
    std::vector<int> comp;
    for (int p = 0; p < n; ++p)
      if (!in_keep[p]) comp.push_back(p);
    if (!comp.empty()) keep = std::move(comp);
  }
  auto split = split_support(v, keep);
  const int d = static_cast<int>(split.keep_labels.size());
  if (d > 6000) throw precondition_error("reduced spectrum dimension too large");
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(d, d);
  for (const auto& g : split.groups)
    for (auto [i, a] : g)
      for (auto [j, b] : g) rho(i, j) += a * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

// Eigendecomposition of the reduced state of the n-site chain ground state on
// an arbitrary site subset; factors of the cycle product states.
struct PieceFactor {
  std::vector<double> values;                 // eigenvalues > 1e-14
  std::vector<std::vector<double>> vectors;   // matching eigenvectors
  std::vector<Packed> labels;                 // subset restriction per row
};

inline PieceFactor piece_factor(const StateVector& chain_state, const std::vector<int>& subset) {
  PieceFactor out;
  if (subset.empty()) {
    out.values = {1.0};
    out.vectors = {{1.0}};
    out.labels = {Packed{}};
    return out;
  }
  auto split = split_support(chain_state, subset);
  const int d = static_cast<int>(split.keep_labels.size());
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(d, d);
  for (const auto& g : split.groups)
    for (auto [i, a] : g)
      for (auto [j, b] : g) rho(i, j) += a * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho);
  out.labels = std::move(split.keep_labels);
  for (int i = 0; i < d; ++i) {
    double l = es.eigenvalues()(i);
    if (l <= 1e-14) continue;
    out.values.push_back(l);
    out.vectors.emplace_back(es.eigenvectors().col(i).data(),
                             es.eigenvectors().col(i).data() + d);
  }
  return out;
}

}  // namespace detail

// Good particles of a region for psi_i: sites sitting in the first or last
// quarter of their segment (positions p with 2 <= p <= n/4 or
// 3n/4 <= p <= n-1, 1-indexed) whose entangled partner, the (n+1-p)-th
// particle of the same segment, lies outside the region.
inline int good_particle_count(int n, int t, int rotation, const std::vector<int>& region) {
  const int N = n * t;
  std::vector<bool> in_region(N, false);
  for (int p : region) in_region[p % N] = true;
  int count = 0;
  for (int p0 : region) {
    int offset = ((p0 - rotation) % n + n) % n;  // 0-indexed position in its segment
    int p = offset + 1;
    bool near_edge = (p >= 2 && 4 * p <= n) || (4 * p >= 3 * n && p <= n - 1);
    if (!near_edge) continue;
    int partner_offset = n - p;  // (n+1-p)-th particle, 0-indexed
    int partner = ((p0 - offset + partner_offset) % N + N) % N;
    if (!in_region[partner]) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Entropy sweeps
// ---------------------------------------------------------------------------

struct EntropyReport {
  Region region;
  double entropy_bits = 0;
  double s_bound = 0;   // (n-3)/4
  double c_split = 0;   // measured high-entanglement path fraction
  int good_count = -1;  // cycle psi states only
};

namespace detail {

// Exact entropy of Phi on a region: the complement of the computation side
// contains a full n-window, so the rotations contribute an orthogonal
// mixture of segment products; the spectrum is that of a small Gram matrix.
class CycleEntropyEngine {
 public:
  CycleEntropyEngine(const RuleSet& rs, int n, int t) : n_(n), t_(t), N_(n * t) {
    std::vector<BasisState> seg;
    collect_phi_g_states(rs, n, seg);
    chain_ = std::make_shared<const BasisIndex>(
        BasisIndex::from_states(n, Topology::Chain, "phi-g-support", seg));
    double amp = 1.0 / std::sqrt(static_cast<double>(seg.size()));
    std::vector<std::pair<std::uint32_t, double>> amps;
    for (const auto& s : seg)
      amps.emplace_back(static_cast<std::uint32_t>(*chain_->index_of(s)), amp);
    phi_ = StateVector(chain_, std::move(amps));
  }

  // pieces of `positions` within each of the t segments of a rotation
  std::vector<std::vector<int>> pieces(int rotation, const std::vector<int>& positions) const {
    std::vector<std::vector<int>> out(t_);
    for (int p0 : positions) {
      int rel = ((p0 - rotation) % N_ + N_) % N_;
      out[rel / n_].push_back(rel % n_);
    }
    for (auto& v : out) std::sort(v.begin(), v.end());
    return out;
  }

  double psi_entropy(int rotation, const std::vector<int>& positions) {
    double S = 0;
    for (auto& piece : pieces(rotation, positions))
      S += entropy_of(factor(piece).values);
    return S;
  }

  double phi_entropy(const std::vector<int>& positions) {
    // compute on the side whose complement still spans a full segment: the
    // complement then pins every rotation's delimiter layout, so the
    // rotations mix without interference
    std::vector<int> side = positions;
    if (N_ - static_cast<int>(positions.size()) < n_) {
      std::vector<bool> in(N_, false);
      for (int p : positions) in[p] = true;
      side.clear();
      for (int p = 0; p < N_; ++p)
        if (!in[p]) side.push_back(p);
      if (side.empty()) return 0.0;  // whole cycle, pure state
    }
    if (N_ - static_cast<int>(side.size()) < n_)
      throw precondition_error("phi entropy needs a region or complement of at least n sites");

    // columns of W: per rotation, kron of the per-segment factor columns
    struct Col {
      std::vector<std::pair<Packed, double>> entries;  // (side restriction, value)
      double weight;                                   // sqrt(p_a q_b / n)
    };
    std::vector<Col> cols;
    for (int rot = 0; rot < n_; ++rot) {
      auto pcs = pieces(rot, side);
      // side slots per segment, ordered like the sorted piece positions
      std::vector<std::vector<std::pair<int, int>>> slot_pairs(t_);  // (rel%n, slot)
      for (std::size_t k = 0; k < side.size(); ++k) {
        int rel = ((side[k] - rot) % N_ + N_) % N_;
        slot_pairs[rel / n_].emplace_back(rel % n_, static_cast<int>(k));
      }
      std::vector<std::vector<int>> side_slots(t_);
      for (int seg = 0; seg < t_; ++seg) {
        std::sort(slot_pairs[seg].begin(), slot_pairs[seg].end());
        for (auto& [rel, slot] : slot_pairs[seg]) side_slots[seg].push_back(slot);
      }
      std::vector<const PieceFactor*> fs;
      for (auto& piece : pcs) fs.push_back(&factor(piece));
      // odometer over the rank of each factor
      std::vector<std::size_t> odo(t_, 0);
      for (;;) {
        Col c;
        c.weight = 1.0 / std::sqrt(static_cast<double>(n_));
        for (int seg = 0; seg < t_; ++seg) c.weight *= std::sqrt(fs[seg]->values[odo[seg]]);
        // entries: product over segments of the factor eigenvector entries
        c.entries.emplace_back(Packed{}, 1.0);
        for (int seg = 0; seg < t_; ++seg) {
          const PieceFactor& f = *fs[seg];
          const auto& vec = f.vectors[odo[seg]];
          std::vector<std::pair<Packed, double>> next;
          next.reserve(c.entries.size() * f.labels.size());
          for (const auto& [key, val] : c.entries)
            for (std::size_t r = 0; r < f.labels.size(); ++r) {
              if (std::abs(vec[r]) < 1e-15) continue;
              Packed merged = key;
              for (std::size_t q = 0; q < side_slots[seg].size(); ++q)
                merged.set_site(side_slots[seg][q],
                                f.labels[r].site(static_cast<int>(q)));
              next.emplace_back(merged, val * vec[r]);
            }
          c.entries = std::move(next);
        }
        cols.push_back(std::move(c));
        int seg = 0;
        for (; seg < t_; ++seg) {
          if (++odo[seg] < fs[seg]->values.size()) break;
          odo[seg] = 0;
        }
        if (seg == t_) break;
      }
    }
    // Gram matrix of the weighted columns
    const int R = static_cast<int>(cols.size());
    std::unordered_map<Packed, std::vector<std::pair<int, double>>, PackedHash> by_key;
    for (int ci = 0; ci < R; ++ci)
      for (const auto& [key, val] : cols[ci].entries)
        by_key[key].emplace_back(ci, val * cols[ci].weight);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(R, R);
    for (const auto& [key, lst] : by_key)
      for (auto [ci, vi] : lst)
        for (auto [cj, vj] : lst) G(ci, cj) += vi * vj;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
    return entropy_of(ev);
  }

 private:
  const detail::PieceFactor& factor(const std::vector<int>& piece) {
    Packed key;
    key.set_site(0, static_cast<int>(piece.size()));
    for (std::size_t k = 0; k < piece.size(); ++k)
      key.set_site(static_cast<int>(k) + 1, piece[k]);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, piece_factor(phi_, piece)).first->second;
  }

  int n_, t_, N_;
  std::shared_ptr<const BasisIndex> chain_;
  StateVector phi_;
  std::unordered_map<Packed, PieceFactor, PackedHash> cache_;
};

}  // namespace detail

// Chain: left-anchored regions [0, r) for every requested size r (the cut
// traces out the rightmost n-r sites). Cycle: every start position at every
// size. Cycle ground states use the exact product/mixture fast paths.
inline std::vector<EntropyReport> entropy_sweep(const RuleSet& rs, const StateVector& v,
                                                const std::vector<int>& sizes) {
  std::vector<EntropyReport> out;
  const int n = v.sites();
  if (v.basis().topology() == Topology::Chain) {
    auto split = path_split(rs, n);
    for (int r : sizes) {
      if (r < 1 || r > n) throw precondition_error("region size out of range");
      EntropyReport rep;
      rep.region = {0, r};
      if (r == n) {
        rep.entropy_bits = 0.0;  // pure state
      } else {
        std::vector<int> keep(r);
        for (int i = 0; i < r; ++i) keep[i] = i;
        rep.entropy_bits = detail::entropy_of(detail::subset_spectrum(v, keep));
      }
      rep.s_bound = split.s_bound;
      rep.c_split = split.c;
      out.push_back(rep);
    }
    return out;
  }

  // cycle
  if (!v.structure())
    throw precondition_error("cycle entropy sweep needs a structured cycle state");
  const auto& st = *v.structure();
  detail::CycleEntropyEngine engine(rs, st.n, st.t);
  auto split = path_split(rs, st.n);
  for (int r : sizes) {
    if (r < 1 || r > n) throw precondition_error("region size out of range");
    for (int start = 0; start < n; ++start) {
      EntropyReport rep;
      rep.region = {start, r};
      auto pos = rep.region.positions(n);
      if (r == n)
        rep.entropy_bits = 0.0;
      else if (st.phi)
        rep.entropy_bits = engine.phi_entropy(pos);
      else
        rep.entropy_bits = engine.psi_entropy(st.rotation, pos);
      rep.s_bound = split.s_bound;
      rep.c_split = split.c;
      if (!st.phi) rep.good_count = good_particle_count(st.n, st.t, st.rotation, pos);
      out.push_back(rep);
    }
  }
  return out;
}

}  // namespace tichain

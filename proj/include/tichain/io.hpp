#pragma once

// File formats: basis exports (glyph lines), operator exports (coordinate
// triplets), spectral JSON records, entropy CSV rows and path dumps.

#include <iomanip>
#include <nlohmann/json.hpp>
#include <ostream>

#include "tichain/entanglement.hpp"

namespace tichain {

inline void export_basis(const BasisIndex& basis, std::ostream& out) {
  out << "# n=" << basis.sites() << " filter=" << basis.filter() << " count=" << basis.size()
      << "\n";
  for (std::size_t i = 0; i < basis.size(); ++i) out << to_glyphs(basis.state(i)) << "\n";
}

inline void export_operator(const SparseOperator& op, std::ostream& out) {
  out << "# dim=" << op.dim() << " kind=" << op.kind() << " n=" << op.param_n() << "\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < op.dim(); ++i) {
    std::size_t len;
    auto [cols, vals] = op.row(i, &len);
    for (std::size_t k = 0; k < len; ++k)
      out << i << " " << cols[k] << " " << vals[k] << "\n";
  }
}

// one state per line with the potential pair appended
inline void dump_path(const RuleSet& rs, const Path& p, std::ostream& out) {
  for (const auto& s : p.states) {
    auto pot = potential(s, rs);
    out << to_glyphs(s) << "   (" << pot.x << "," << pot.y << ")\n";
  }
}

struct SpectralRecord {
  std::string kind;
  int n = 0, t = 0;
  std::string variant;
  std::size_t dim = 0;
  SpectralResult result;
};

inline nlohmann::json to_json(const SpectralRecord& r) {
  nlohmann::json j;
  j["kind"] = r.kind;
  j["n"] = r.n;
  j["t"] = r.t;
  j["variant"] = r.variant;
  j["dim"] = r.dim;
  j["lambda0"] = r.result.lambda0;
  j["lambda1"] = r.result.lambda1;
  j["gap"] = r.result.gap;
  j["normalized_gap"] = r.result.normalized_gap;
  j["degeneracy"] = r.result.degeneracy;
  j["residuals"] = r.result.residuals;
  j["iterations"] = r.result.iterations;
  j["wall_ms"] = r.result.wall_ms;
  return j;
}

inline constexpr std::string_view kEntropyCsvHeader =
    "n,t,state,region_start,region_len,entropy_bits,s_bound,c_split,good_count";

inline void write_entropy_csv_row(std::ostream& out, int n, int t, const std::string& state,
                                  const EntropyReport& rep) {
  out << n << "," << t << "," << state << "," << rep.region.start << "," << rep.region.length
      << "," << std::setprecision(12) << rep.entropy_bits << "," << rep.s_bound << ","
      << rep.c_split << ",";
  if (rep.good_count >= 0) out << rep.good_count;
  out << "\n";
}

}  // namespace tichain

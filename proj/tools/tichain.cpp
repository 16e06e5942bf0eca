// Batch frontend: verification suites, spectrum scans and entropy sweeps.
// Subcommands: verify, spectrum, entropy, path, rules, export.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "tichain/io.hpp"
#include "tichain/reference.hpp"
#include "tichain/rulespec.hpp"

using namespace tichain;
namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  std::vector<int> ns;
  int t = 2;
  bool cycle = false;
  std::string rules_path;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  std::string out_dir;
  std::size_t budget = kDefaultEnumerationBudget;

  RuleSet load_rules() const {
    if (!rules_path.empty()) return parse_ruleset_file(rules_path);
    return cycle ? builtin_cycle_ruleset() : builtin_chain_ruleset();
  }
  std::ostream& open(std::ofstream& f, const std::string& name, std::ostream& fallback) const {
    if (out_dir.empty()) return fallback;
    fs::create_directories(out_dir);
    f.open(fs::path(out_dir) / name);
    if (!f) throw std::runtime_error("cannot open output file " + name);
    return f;
  }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--n", o.ns, "chain lengths / segment parameter (comma separated)")
      ->delimiter(',')
      ->required();
  cmd->add_option("--t", o.t, "number of segments on the cycle");
  cmd->add_flag("--cycle", o.cycle, "work on the cycle of n*t sites");
  cmd->add_option("--rules", o.rules_path, "rule-spec file (default: built-in set)");
  cmd->add_option("--tol", o.tol, "solver/acceptance tolerance");
  cmd->add_option("--seed", o.seed, "seed for solver start vectors");
  cmd->add_option("--out", o.out_dir, "output directory (default: stdout)");
  cmd->add_option("--budget", o.budget, "enumeration budget in states");
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const CommonOpts& o) {
  RuleSet rs = o.load_rules();
  nlohmann::json report;
  report["suites"] = nlohmann::json::array();
  bool all_ok = true;

  auto suite = [&](const std::string& name, int n, bool ok, const std::string& detail) {
    nlohmann::json s;
    s["name"] = name;
    s["n"] = n;
    s["passed"] = ok;
    if (!detail.empty()) s["detail"] = detail;
    report["suites"].push_back(s);
    all_ok = all_ok && ok;
    std::cerr << (ok ? "pass" : "FAIL") << "  " << name << " (n=" << n << ")"
              << (detail.empty() ? "" : ": " + detail) << "\n";
  };

  for (int n : o.ns) {
    // determinism: at most one rule each way on every well-formed state
    auto det = validate_determinism(rs, n, o.budget);
    suite("determinism", n, det.ok(),
          det.ok() ? std::to_string(det.states_checked) + " states"
                   : "violating state " + to_glyphs(det.violations.front()));

    // well-formedness against the reference recognizer
    {
      bool ok = true;
      std::string detail;
      if (n <= 5) {
        long long total = 1;
        for (int i = 0; i < n; ++i) total *= kNumSiteStates;
        for (long long x = 0; x < total && ok; ++x) {
          long long v = x;
          BasisState s;
          for (int i = 0; i < n; ++i) {
            s.sites.push_back(state_of(static_cast<int>(v % kNumSiteStates)));
            v /= kNumSiteStates;
          }
          if (is_well_formed(s, rs) != reference::well_formed(s.configuration())) {
            ok = false;
            detail = "disagreement on " + to_glyphs(s);
          }
        }
        if (ok) detail = std::to_string(total) + " states scanned";
      } else {
        auto basis = enumerate_chain_basis(rs, n, ChainFilter::AllWellFormed, o.budget);
        for (std::size_t i = 0; i < basis.size() && ok; ++i)
          if (!reference::well_formed(basis.state(i).configuration())) {
            ok = false;
            detail = "enumerated state rejected: " + to_glyphs(basis.state(i));
          }
        std::mt19937_64 rng(o.seed);
        for (int trial = 0; trial < 200000 && ok; ++trial) {
          BasisState s;
          for (int i = 0; i < n; ++i)
            s.sites.push_back(state_of(static_cast<int>(rng() % kNumSiteStates)));
          if (is_well_formed(s, rs) != reference::well_formed(s.configuration())) {
            ok = false;
            detail = "disagreement on " + to_glyphs(s);
          }
        }
        if (ok) detail = "enumerated + sampled states agree";
      }
      suite("well-formedness-oracle", n, ok, detail);
    }

    // path classification: good <=> balanced and consistent; K <= n^2;
    // even n admits no good path; odd n good path has T states
    {
      bool ok = true;
      std::string detail;
      auto basis = enumerate_chain_basis(rs, n, ChainFilter::BracketedWellFormed, o.budget);
      long long good_paths = 0;
      for (std::size_t i = 0; i < basis.size() && ok; ++i) {
        BasisState s = basis.state(i);
        Path p = extract_path(rs, s);
        if (p.length() > n * n) {
          ok = false;
          detail = "path longer than n^2 from " + to_glyphs(s);
          break;
        }
        bool good = classify_path(p) == PathClass::Good;
        if (good && p.states.front() == s) ++good_paths;
        bool bc = is_balanced(s, rs) && is_consistent(s, rs);
        if (good != bc) {
          ok = false;
          detail = "classification mismatch on " + to_glyphs(s);
        }
      }
      if (ok && n % 2 == 0 && good_paths != 0) {
        ok = false;
        detail = "even n has a good path";
      }
      if (ok && n % 2 == 1 && n >= 5) {
        int m = (n - 3) / 2;
        if (good_paths != (1LL << m)) {
          ok = false;
          detail = "expected 2^m good paths, found " + std::to_string(good_paths);
        }
        auto p = extract_path(rs, make_good_start(n));
        if (p.length() != path_count_formula(n)) {
          ok = false;
          detail = "good path length " + std::to_string(p.length());
        }
      }
      suite("path-classification", n, ok, detail);
    }

    // potential monotonicity + step inverse over every well-formed state
    {
      bool ok = true;
      std::string detail;
      auto basis = enumerate_chain_basis(rs, n, ChainFilter::AllWellFormed, o.budget);
      for (std::size_t i = 0; i < basis.size() && ok; ++i) {
        BasisState s = basis.state(i);
        if (auto f = step_forward(rs, s)) {
          if (!(potential(s, rs) < potential(*f, rs))) {
            ok = false;
            detail = "potential not increasing at " + to_glyphs(s);
          }
          auto b = step_backward(rs, *f);
          if (!b || !(*b == s)) {
            ok = false;
            detail = "backward does not invert forward at " + to_glyphs(s);
          }
        }
      }
      suite("potential-monotonicity", n, ok, detail);
    }
  }

  report["ok"] = all_ok;
  std::ofstream f;
  CommonOpts tmp = o;
  std::ostream& out = tmp.open(f, "verify.json", std::cout);
  out << report.dump(2) << "\n";
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

int cmd_spectrum(const CommonOpts& o, const std::string& variant, bool gap_scan, int k,
                 long long p_weight) {
  RuleSet rs = o.load_rules();
  SolverOptions opts;
  opts.tol = o.tol;
  opts.seed = o.seed;
  nlohmann::json records = nlohmann::json::array();
  bool ok = true;
  std::vector<std::pair<int, double>> gaps;

  for (int n : o.ns) {
    SpectralRecord rec;
    rec.n = n;
    rec.t = o.cycle ? o.t : 1;
    rec.variant = o.cycle ? "cycle" : variant;
    rec.kind = o.cycle ? "cycle" : "chain";
    try {
      if (o.cycle) {
        RuleSet cyc = o.rules_path.empty() ? builtin_cycle_ruleset() : rs;
        auto basis = enumerate_cycle_basis(cyc, n * o.t, o.budget);
        OperatorWeights w;
        w.size_n = n;
        w.chain_weight = p_weight > 0 ? p_weight : default_cycle_weight(cyc, n, opts, o.budget);
        auto op = assemble_cycle(cyc, w, basis);
        rec.dim = op.dim();
        opts.keep_vectors = op.dim() < 200000;
        rec.result = lowest_eigenpairs(op, k, opts);
      } else {
        ChainVariant v = ChainVariant::Core;
        if (variant == "frustration_free") v = ChainVariant::FrustrationFree;
        else if (variant == "uniform_bracket") v = ChainVariant::UniformBracket;
        else if (variant != "core") throw precondition_error("unknown variant " + variant);
        auto filter = v == ChainVariant::Core ? ChainFilter::BracketedWellFormed
                                              : ChainFilter::AllWellFormed;
        auto basis = enumerate_chain_basis(rs, n, filter, o.budget);
        auto op = assemble_chain(rs, n, v, basis);
        rec.dim = op.dim();
        opts.keep_vectors = op.dim() < 200000;
        rec.result = lowest_eigenpairs(op, k, opts);
      }
      gaps.emplace_back(n, rec.result.normalized_gap);
      records.push_back(to_json(rec));
    } catch (const std::exception& e) {
      ok = false;
      nlohmann::json bad;
      bad["n"] = n;
      bad["error"] = e.what();
      records.push_back(bad);
    }
  }

  nlohmann::json out_json;
  out_json["records"] = records;
  if (gap_scan && gaps.size() >= 2) {
    bool decreasing = true, positive = true;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      positive = positive && gaps[i].second > 0;
      if (i) decreasing = decreasing && gaps[i].second < gaps[i - 1].second;
    }
    // least-squares slope of log(gap) vs log(n)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [n, g] : gaps) {
      double x = std::log(n), y = std::log(std::max(g, 1e-300));
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    double m = gaps.size();
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out_json["gap_scan"] = {{"positive", positive},
                            {"strictly_decreasing", decreasing},
                            {"loglog_slope", slope},
                            {"slope_in_envelope", slope >= -8.0 && slope <= 0.0}};
    ok = ok && positive && decreasing && slope >= -8.0 && slope <= 0.0;
  }
  std::ofstream f;
  CommonOpts tmp = o;
  std::ostream& out = tmp.open(f, "spectrum.json", std::cout);
  out << out_json.dump(2) << "\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// entropy
// ---------------------------------------------------------------------------

int cmd_entropy(const CommonOpts& o, const std::string& state,
                const std::vector<int>& requested_sizes) {
  RuleSet rs = o.load_rules();
  std::ofstream f;
  CommonOpts tmp = o;
  std::ostream& out = tmp.open(f, "entropy.csv", std::cout);
  out << kEntropyCsvHeader << "\n";
  bool ok = true;
  for (int n : o.ns) {
    std::vector<int> sizes = requested_sizes;
    StateVector v;
    int t = o.cycle ? o.t : 1;
    if (o.cycle) {
      RuleSet cyc = o.rules_path.empty() ? builtin_cycle_ruleset() : rs;
      if (state == "Phi")
        v = construct_cycle_state(cyc, n, o.t, CycleWhich::Phi());
      else if (state.starts_with("psi:"))
        v = construct_cycle_state(cyc, n, o.t, CycleWhich::psi(std::stoi(state.substr(4))));
      else
        throw precondition_error("cycle states are Phi or psi:<i>");
      if (sizes.empty())
        for (int r = 1; r <= (n - 1) * o.t; ++r) sizes.push_back(r);
    } else {
      auto basis = std::make_shared<const BasisIndex>(
          enumerate_chain_basis(rs, n, ChainFilter::BracketedWellFormed, o.budget));
      if (state == "phi_g")
        v = construct_phi_g(rs, n, basis);
      else if (state.starts_with("phi_x:")) {
        std::vector<int> bits;
        for (char c : state.substr(6)) bits.push_back(c - '0');
        v = construct_phi_x(rs, n, bits, basis);
      } else
        throw precondition_error("chain states are phi_g or phi_x:<bits>");
      if (sizes.empty())
        for (int r = 1; r <= n; ++r) sizes.push_back(r);
    }
    RuleSet active = o.cycle && o.rules_path.empty() ? builtin_cycle_ruleset() : rs;
    auto reports = entropy_sweep(active, v, sizes);
    double min_S = 1e300, sum_S = 0;
    for (const auto& rep : reports) {
      write_entropy_csv_row(out, n, t, state, rep);
      min_S = std::min(min_S, rep.entropy_bits);
      sum_S += rep.entropy_bits;
    }
    std::cerr << "n=" << n << " t=" << t << " state=" << state << " regions=" << reports.size()
              << " min=" << min_S << " mean=" << sum_S / reports.size() << "\n";
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// path / rules / export
// ---------------------------------------------------------------------------

int cmd_path(const CommonOpts& o, const std::string& bits, const std::string& from) {
  RuleSet rs = o.load_rules();
  for (int n : o.ns) {
    BasisState seed;
    if (!from.empty()) {
      seed = state_from_glyphs(from);
    } else {
      std::vector<int> x;
      for (char c : bits) x.push_back(c - '0');
      if (!x.empty() && static_cast<int>(x.size()) != (n - 3) / 2)
        throw precondition_error("qubit string must have length (n-3)/2");
      seed = make_good_start(n, x);
    }
    auto p = extract_path(rs, seed);
    std::cout << "# n=" << n << " K=" << p.length() << " class="
              << path_class_name(classify_path(p)) << "\n";
    dump_path(rs, p, std::cout);
  }
  return 0;
}

int cmd_rules(const std::string& print_name, const std::string& check_path) {
  if (!print_name.empty()) {
    if (print_name == "chain")
      std::cout << print_ruleset(builtin_chain_ruleset());
    else if (print_name == "cycle")
      std::cout << print_ruleset(builtin_cycle_ruleset());
    else
      throw precondition_error("unknown built-in rule set " + print_name);
    return 0;
  }
  if (!check_path.empty()) {
    auto rs = parse_ruleset_file(check_path);
    auto again = parse_ruleset(print_ruleset(rs));
    bool round_trip = semantically_equal(rs, again);
    std::cout << "symbols=" << rs.symbols.size() << " rules=" << rs.transitions.size()
              << " schemas=" << rs.schema_count() << " pairs=" << rs.illegal_pairs.size()
              << " round_trip=" << (round_trip ? "ok" : "BROKEN") << "\n";
    return round_trip ? 0 : 1;
  }
  throw precondition_error("rules needs --print or --check");
}

int cmd_export(const CommonOpts& o, const std::string& what, const std::string& filter) {
  RuleSet rs = o.load_rules();
  std::ofstream f;
  CommonOpts tmp = o;
  for (int n : o.ns) {
    if (o.cycle) {
      RuleSet cyc = o.rules_path.empty() ? builtin_cycle_ruleset() : rs;
      auto basis = enumerate_cycle_basis(cyc, n * o.t, o.budget);
      if (what == "basis") {
        std::ostream& out = tmp.open(f, "basis_cycle_" + std::to_string(n * o.t) + ".txt",
                                     std::cout);
        export_basis(basis, out);
      } else {
        throw precondition_error("cycle export supports basis only");
      }
      continue;
    }
    auto cf = filter == "all" ? ChainFilter::AllWellFormed : ChainFilter::BracketedWellFormed;
    auto basis = enumerate_chain_basis(rs, n, cf, o.budget);
    if (what == "basis") {
      std::ostream& out = tmp.open(f, "basis_" + std::to_string(n) + ".txt", std::cout);
      export_basis(basis, out);
    } else {
      TermKind kind;
      if (what == "trans") kind = TermKind::Trans;
      else if (what == "legal") kind = TermKind::Legal;
      else if (what == "init") kind = TermKind::Init;
      else if (what == "bracket") kind = TermKind::Bracket;
      else if (what == "boundary") kind = TermKind::Boundary;
      else throw precondition_error("unknown export " + what);
      auto op = build_term(kind, rs, basis);
      std::ostream& out = tmp.open(f, what + "_" + std::to_string(n) + ".txt", std::cout);
      export_operator(op, out);
    }
    if (f.is_open()) f.close();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transition-rule chain toolkit"};
  app.set_config("--config", "", "flat key=value config file; flags override");
  app.require_subcommand(1);

  CommonOpts vo, so, eo, po, xo;
  std::string variant = "core", state = "phi_g", bits, from;
  std::vector<int> sizes;
  bool gap_scan = false;
  int k = 6;
  long long p_weight = 0;
  std::string rules_print, rules_check, export_what = "basis", export_filter = "bracketed";

  auto* verify = app.add_subcommand("verify", "run the lemma verification suites");
  add_common(verify, vo);

  auto* spectrum = app.add_subcommand("spectrum", "ground energies, gaps, degeneracies");
  add_common(spectrum, so);
  spectrum->add_option("--variant", variant, "core | frustration_free | uniform_bracket");
  spectrum->add_flag("--gap-scan", gap_scan, "fit the log-log gap envelope over --n");
  spectrum->add_option("--k", k, "number of eigenvalues");
  spectrum->add_option("--p-weight", p_weight, "override the cycle chain weight p(n)");

  auto* entropy = app.add_subcommand("entropy", "entanglement entropy sweeps (CSV)");
  add_common(entropy, eo);
  entropy->add_option("--state", state, "phi_g | phi_x:<bits> | psi:<i> | Phi");
  entropy->add_option("--region-len", sizes, "region sizes (default: all)")->delimiter(',');

  auto* path = app.add_subcommand("path", "dump the orbit of a state with potentials");
  add_common(path, po);
  path->add_option("--x", bits, "U qubit bits of the good start state");
  path->add_option("--from", from, "seed state in glyph notation");

  auto* rules = app.add_subcommand("rules", "print or check rule-spec files");
  rules->add_option("--print", rules_print, "print a built-in set: chain | cycle");
  rules->add_option("--check", rules_check, "parse a rule file and verify the round trip");

  auto* exp = app.add_subcommand("export", "export bases and operators");
  add_common(exp, xo);
  exp->add_option("--what", export_what, "basis | trans | legal | init | bracket | boundary");
  exp->add_option("--filter", export_filter, "bracketed | all");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cmd_verify(vo);
    if (spectrum->parsed()) return cmd_spectrum(so, variant, gap_scan, k, p_weight);
    if (entropy->parsed()) return cmd_entropy(eo, state, sizes);
    if (path->parsed()) return cmd_path(po, bits, from);
    if (rules->parsed()) return cmd_rules(rules_print, rules_check);
    if (exp->parsed()) return cmd_export(xo, export_what, export_filter);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#pragma once

// Line-oriented text format for rule sets:
//
//   symbol <tag> arity=<1|2> [control]
//   rule <a> <b> -> <c> <d> action=<carry|entangle|transfer:left|transfer:right> [schema=<k>]
//   illegal <a> <b> item=<k>
//
// <a>, <b> are symbol tags, tag_bit literals (e_0) or the class names
// ANY, LOWER, UPPER, CONTROL. '#' starts a comment.

#include <cctype>
#include <fstream>
#include <sstream>

#include "tichain/ruleset.hpp"

namespace tichain {

struct parse_error : std::runtime_error {
  int line, column;
  parse_error(const std::string& msg, int line_, int col_)
      : std::runtime_error("line " + std::to_string(line_) + ", column " +
                           std::to_string(col_) + ": " + msg),
        line(line_),
        column(col_) {}
};

namespace detail {

struct Token {
  std::string text;
  int column;
};

inline std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i + 1)});
    i = j;
  }
  return out;
}

inline SidePattern parse_side(const Token& tok, const RuleSet& rs, int lineno) {
  const std::string& s = tok.text;
  if (s == "ANY") return SidePattern::any();
  if (s == "LOWER") return SidePattern::lower();
  if (s == "UPPER") return SidePattern::upper();
  if (s == "CONTROL") return SidePattern::control();
  auto declared = [&rs](Tag t) {
    for (const auto& sym : rs.symbols)
      if (sym.tag == t) return true;
    return false;
  };
  if (auto t = tag_from_name(s)) {
    if (!declared(*t)) throw parse_error("undeclared symbol '" + s + "'", lineno, tok.column);
    return SidePattern::sym(*t);
  }
  // tag_bit literal
  auto us = s.rfind('_');
  if (us != std::string::npos && us + 2 == s.size() && (s[us + 1] == '0' || s[us + 1] == '1')) {
    if (auto t = tag_from_name(s.substr(0, us))) {
      if (!declared(*t))
        throw parse_error("undeclared symbol '" + s.substr(0, us) + "'", lineno, tok.column);
      if (arity(*t) != 2)
        throw parse_error("symbol '" + s.substr(0, us) + "' has no qubit", lineno, tok.column);
      return SidePattern::sym_bit(*t, s[us + 1] - '0');
    }
  }
  throw parse_error("undeclared symbol '" + s + "'", lineno, tok.column);
}

inline Tag parse_tag(const Token& tok, const RuleSet& rs, int lineno) {
  auto t = tag_from_name(tok.text);
  if (!t) throw parse_error("undeclared symbol '" + tok.text + "'", lineno, tok.column);
  for (const auto& sym : rs.symbols)
    if (sym.tag == *t) return *t;
  throw parse_error("undeclared symbol '" + tok.text + "'", lineno, tok.column);
}

}  // namespace detail

inline RuleSet parse_ruleset(const std::string& text) {
  RuleSet rs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int rule_ordinal = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0].text;

    if (kw == "symbol") {
      if (toks.size() < 3) throw parse_error("expected: symbol <tag> arity=<1|2>", lineno, 1);
      auto t = tag_from_name(toks[1].text);
      if (!t) throw parse_error("unknown tag '" + toks[1].text + "'", lineno, toks[1].column);
      for (const auto& sym : rs.symbols)
        if (sym.tag == *t)
          throw parse_error("duplicate symbol '" + toks[1].text + "'", lineno, toks[1].column);
      SiteSymbol sym{*t, 0, false};
      for (std::size_t i = 2; i < toks.size(); ++i) {
        if (toks[i].text == "arity=1")
          sym.arity = 1;
        else if (toks[i].text == "arity=2")
          sym.arity = 2;
        else if (toks[i].text == "control")
          sym.control = true;
        else
          throw parse_error("unexpected token '" + toks[i].text + "'", lineno, toks[i].column);
      }
      if (sym.arity == 0) throw parse_error("missing arity", lineno, toks[1].column);
      if (sym.arity != arity(*t) || sym.control != is_control(*t))
        throw parse_error("symbol '" + toks[1].text + "' redeclares fixed arity or control",
                          lineno, toks[1].column);
      rs.symbols.push_back(sym);
    } else if (kw == "rule") {
      if (toks.size() < 7 || toks[3].text != "->")
        throw parse_error("expected: rule <a> <b> -> <c> <d> action=<...>", lineno, 1);
      TransitionRule r;
      r.lhs = {detail::parse_tag(toks[1], rs, lineno), detail::parse_tag(toks[2], rs, lineno)};
      r.rhs = {detail::parse_tag(toks[4], rs, lineno), detail::parse_tag(toks[5], rs, lineno)};
      if (is_control(r.lhs[0]) == is_control(r.lhs[1]))
        throw parse_error(is_control(r.lhs[0]) ? "rule lhs has two control symbols"
                                               : "rule lhs has no control symbol",
                          lineno, toks[1].column);
      if (is_control(r.rhs[0]) == is_control(r.rhs[1]))
        throw parse_error(is_control(r.rhs[0]) ? "rule rhs has two control symbols"
                                               : "rule rhs has no control symbol",
                          lineno, toks[4].column);
      r.schema = ++rule_ordinal;
      bool have_action = false;
      for (std::size_t i = 6; i < toks.size(); ++i) {
        const std::string& a = toks[i].text;
        if (a == "action=carry")
          r.action = QubitAction::Carry, have_action = true;
        else if (a == "action=entangle")
          r.action = QubitAction::Entangle, have_action = true;
        else if (a == "action=transfer:left")
          r.action = QubitAction::TransferLeft, have_action = true;
        else if (a == "action=transfer:right")
          r.action = QubitAction::TransferRight, have_action = true;
        else if (a.starts_with("schema="))
          r.schema = std::stoi(a.substr(7));
        else
          throw parse_error("unexpected token '" + a + "'", lineno, toks[i].column);
      }
      if (!have_action) throw parse_error("missing action=", lineno, 1);
      rs.transitions.push_back(r);
    } else if (kw == "illegal") {
      if (toks.size() != 4 || !toks[3].text.starts_with("item="))
        throw parse_error("expected: illegal <a> <b> item=<k>", lineno, 1);
      IllegalPair p;
      p.left = detail::parse_side(toks[1], rs, lineno);
      p.right = detail::parse_side(toks[2], rs, lineno);
      p.item = std::stoi(toks[3].text.substr(5));
      rs.illegal_pairs.push_back(p);
    } else {
      throw parse_error("unknown directive '" + kw + "'", lineno, toks[0].column);
    }
  }
  rs.compile();
  return rs;
}

inline RuleSet parse_ruleset_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open rule file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  RuleSet rs = parse_ruleset(ss.str());
  auto slash = path.find_last_of('/');
  rs.name = (slash == std::string::npos) ? path : path.substr(slash + 1);
  return rs;
}

namespace detail {
inline std::string side_text(const SidePattern& p) {
  using K = SidePattern::Kind;
  switch (p.kind) {
    case K::Any: return "ANY";
    case K::Lower: return "LOWER";
    case K::Upper: return "UPPER";
    case K::Control: return "CONTROL";
    case K::Symbol: return std::string(tag_name(p.tag));
    case K::SymbolBit: return std::string(tag_name(p.tag)) + "_" + std::to_string(p.bit);
  }
  return "?";
}
}  // namespace detail

// Inverse of parse_ruleset: parse_ruleset(print_ruleset(rs)) reproduces rs.
inline std::string print_ruleset(const RuleSet& rs) {
  std::ostringstream out;
  for (const auto& s : rs.symbols) {
    out << "symbol " << tag_name(s.tag) << " arity=" << s.arity;
    if (s.control) out << " control";
    out << "\n";
  }
  for (const auto& r : rs.transitions) {
    out << "rule " << tag_name(r.lhs[0]) << " " << tag_name(r.lhs[1]) << " -> "
        << tag_name(r.rhs[0]) << " " << tag_name(r.rhs[1]) << " action=" << action_name(r.action)
        << " schema=" << r.schema << "\n";
  }
  for (const auto& p : rs.illegal_pairs) {
    out << "illegal " << detail::side_text(p.left) << " " << detail::side_text(p.right)
        << " item=" << p.item << "\n";
  }
  return out.str();
}

}  // namespace tichain

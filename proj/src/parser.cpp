#include "crn/parser.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace crn {

namespace {

struct LineCursor {
  const std::string& text;
  std::size_t line_no;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw ParseError(line_no, at + 1, what);
  }
  [[noreturn]] void fail(const std::string& what) const { fail(what, pos); }

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool consume(const std::string& tok) {
    skip_ws();
    if (text.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    if (pos >= text.size() || !(std::isalpha(text[pos]) || text[pos] == '_'))
      fail("expected identifier");
    while (pos < text.size() && (std::isalnum(text[pos]) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }
  std::string number_token() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    bool any = false;
    while (pos < text.size() &&
           (std::isdigit(text[pos]) || text[pos] == '.' || text[pos] == '/')) {
      ++pos;
      any = true;
    }
    if (!any) fail("expected number", start);
    return text.substr(start, pos - start);
  }
};

struct Builder {
  std::vector<std::string> species;
  std::map<std::string, std::size_t> species_index;
  std::map<std::string, Rational> params;
  std::vector<Reaction> reactions;

  std::size_t intern(const std::string& name) {
    auto it = species_index.find(name);
    if (it != species_index.end()) return it->second;
    std::size_t id = species.size();
    species.push_back(name);
    species_index.emplace(name, id);
    return id;
  }
};

// Parsed side as (species name -> coefficient); interned later so that
// first-appearance order is source first, then target.
std::vector<std::pair<std::string, int>> parse_side(LineCursor& c) {
  std::vector<std::pair<std::string, int>> terms;
  c.skip_ws();
  // '0' denotes the empty complex, but only when it stands alone.
  if (c.peek() == '0') {
    std::size_t save = c.pos;
    ++c.pos;
    c.skip_ws();
    char nxt = c.pos < c.text.size() ? c.text[c.pos] : '\0';
    if (nxt != '+' && !std::isalnum(nxt) && nxt != '_') return terms;
    c.pos = save;
  }
  while (true) {
    c.skip_ws();
    int coeff = 1;
    if (c.pos < c.text.size() && std::isdigit(c.text[c.pos])) {
      std::size_t start = c.pos;
      long long v = 0;
      while (c.pos < c.text.size() && std::isdigit(c.text[c.pos])) {
        v = v * 10 + (c.text[c.pos] - '0');
        if (v > 1000000) c.fail("stoichiometric coefficient too large", start);
        ++c.pos;
      }
      coeff = static_cast<int>(v);
      if (coeff == 0) c.fail("zero stoichiometric coefficient", start);
    }
    terms.emplace_back(c.ident(), coeff);
    if (!c.consume("+")) break;
  }
  return terms;
}

Rational parse_rate(LineCursor& c, Builder& b) {
  c.skip_ws();
  std::size_t at = c.pos;
  if (c.pos < c.text.size() && (std::isalpha(c.text[c.pos]) || c.text[c.pos] == '_')) {
    std::string name = c.ident();
    auto it = b.params.find(name);
    if (it == b.params.end()) c.fail("unknown parameter '" + name + "'", at);
    return it->second;
  }
  std::string tok = c.number_token();
  Rational r;
  try {
    r = parse_rational(tok);
  } catch (const std::exception& e) {
    c.fail(e.what(), at);
  }
  return r;
}

MultiIndex side_to_index(const std::vector<std::pair<std::string, int>>& terms,
                         Builder& b) {
  // First pass interned the names already; here species count is final.
  MultiIndex m(b.species.size());
  for (const auto& [name, coeff] : terms) m[b.species_index.at(name)] += coeff;
  return m;
}

}  // namespace

ReactionNetwork parse_network(const std::string& text) {
  Builder b;
  struct PendingReaction {
    std::vector<std::pair<std::string, int>> source, target;
    Rational rate;
    std::size_t line_no, col;
  };
  std::vector<PendingReaction> pending;

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::size_t hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    LineCursor c{line, line_no};
    if (c.eof()) continue;

    // param lines
    std::size_t save = c.pos;
    if (std::isalpha(c.peek())) {
      std::size_t before = c.pos;
      std::string word = c.ident();
      if (word == "param" && c.peek() != '=') {
        std::string name = c.ident();
        if (!c.consume("=")) c.fail("expected '=' in param line");
        std::size_t at = c.pos;
        std::string tok = c.number_token();
        try {
          b.params[name] = parse_rational(tok);
        } catch (const std::exception& e) {
          c.fail(e.what(), at);
        }
        if (!c.eof()) c.fail("trailing characters after param");
        continue;
      }
      c.pos = before;
    }
    c.pos = save;

    std::size_t rxn_col = c.pos;
    auto lhs = parse_side(c);
    bool reversible;
    if (c.consume("<->"))
      reversible = true;
    else if (c.consume("->"))
      reversible = false;
    else
      c.fail("expected '->' or '<->'");
    auto rhs = parse_side(c);
    if (!c.consume("@")) c.fail("expected '@' before rate");
    c.skip_ws();
    std::size_t rate_col = c.pos;
    Rational fwd = parse_rate(c, b);
    Rational rev;
    std::size_t rev_col = c.pos;
    if (reversible) {
      if (!c.consume(",")) c.fail("reversible reaction needs two rates");
      c.skip_ws();
      rev_col = c.pos;
      rev = parse_rate(c, b);
    } else if (c.consume(",")) {
      c.fail("single-arrow reaction takes one rate");
    }
    if (!c.eof()) c.fail("trailing characters after reaction");
    if (fwd <= 0) throw ParseError(line_no, rate_col + 1, "nonpositive rate");
    if (reversible && rev <= 0)
      throw ParseError(line_no, rev_col + 1, "nonpositive rate");

    // Intern species in appearance order: source side then target side.
    for (const auto& [name, coeff] : lhs) b.intern(name);
    for (const auto& [name, coeff] : rhs) b.intern(name);
    pending.push_back({lhs, rhs, fwd, line_no, rxn_col + 1});
    if (reversible) pending.push_back({rhs, lhs, rev, line_no, rxn_col + 1});
  }

  ReactionNetwork net;
  net.species = b.species;
  for (const auto& p : pending) {
    Reaction r{side_to_index(p.source, b), side_to_index(p.target, b), p.rate};
    if (r.source == r.target)
      throw ParseError(p.line_no, p.col,
                       "reaction does not change any species (a_j = b_j)");
    net.reactions.push_back(std::move(r));
  }
  net.validate();
  return net;
}

std::string format_network(const ReactionNetwork& net) {
  std::ostringstream out;
  auto side = [&](const MultiIndex& m) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!s.empty()) s += " + ";
      if (m[i] != 1) s += std::to_string(m[i]) + " ";
      s += net.species[i];
    }
    return s.empty() ? std::string("0") : s;
  };
  for (const auto& r : net.reactions)
    out << side(r.source) << " -> " << side(r.target) << " @ "
        << rational_to_string(r.rate) << "\n";
  return out.str();
}

}  // namespace crn

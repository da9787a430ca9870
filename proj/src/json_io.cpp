#include "crn/json_io.hpp"

namespace crn {

namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw SchemaError(std::string("missing key '") + key + "'");
  return j.at(key);
}

Json integer_to_json(const Integer& x) { return Json(x.str()); }

Integer integer_from_json(const Json& j) {
  if (!j.is_string()) throw SchemaError("integer must be a decimal string");
  std::string s = j.get<std::string>();
  std::size_t start = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (start == s.size()) throw SchemaError("bad integer literal '" + s + "'");
  for (std::size_t i = start; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9')
      throw SchemaError("bad integer literal '" + s + "'");
  // cpp_int's string constructor would read a leading 0 as an octal prefix
  std::size_t first = s.find_first_not_of('0', start);
  if (first == std::string::npos) return 0;
  std::string canon = (start ? s.substr(0, 1) : "") + s.substr(first);
  return Integer(canon);
}

Json multi_index_to_json(const MultiIndex& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) a.push_back(m[i]);
  return a;
}

MultiIndex multi_index_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("multi-index must be an array");
  std::vector<int> e;
  for (const auto& v : j) e.push_back(v.get<int>());
  return MultiIndex(std::move(e));
}

}  // namespace

Json rational_to_json(const Rational& x) {
  return Json{{"den", denominator(x).str()}, {"num", numerator(x).str()}};
}

Rational rational_from_json(const Json& j) {
  Integer num = integer_from_json(need(j, "num"));
  Integer den = integer_from_json(need(j, "den"));
  if (den == 0) throw SchemaError("zero denominator");
  return Rational(num, den);
}

Json network_to_json(const ReactionNetwork& net) {
  Json reactions = Json::array();
  for (const auto& r : net.reactions)
    reactions.push_back(Json{{"rate", rational_to_json(r.rate)},
                             {"source", multi_index_to_json(r.source)},
                             {"target", multi_index_to_json(r.target)}});
  return Json{{"reactions", reactions}, {"species", net.species}};
}

ReactionNetwork network_from_json(const Json& j) {
  ReactionNetwork net;
  net.species = need(j, "species").get<std::vector<std::string>>();
  for (const auto& r : need(j, "reactions"))
    net.reactions.push_back({multi_index_from_json(need(r, "source")),
                             multi_index_from_json(need(r, "target")),
                             rational_from_json(need(r, "rate"))});
  net.validate();
  return net;
}

Json stoich_to_json(const StoichMatrix& g) {
  Json data = Json::array();
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = 0; j < g.cols; ++j)
      data.push_back(std::to_string(g.entries[i][j]));
  return Json{{"cols", g.cols}, {"data", data}, {"rows", g.rows}};
}

StoichMatrix stoich_from_json(const Json& j) {
  StoichMatrix g;
  g.rows = need(j, "rows").get<std::size_t>();
  g.cols = need(j, "cols").get<std::size_t>();
  const Json& data = need(j, "data");
  if (data.size() != g.rows * g.cols) throw SchemaError("matrix size mismatch");
  g.entries.assign(g.rows, std::vector<int>(g.cols));
  std::size_t idx = 0;
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t c = 0; c < g.cols; ++c)
      g.entries[i][c] = integer_from_json(data[idx++]).convert_to<int>();
  return g;
}

Json conservation_to_json(const ConservationBasis& b) {
  Json rows = Json::array();
  for (const auto& row : b.rows) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(integer_to_json(x));
    rows.push_back(r);
  }
  return Json{{"exact", b.exact},
              {"gamma_rank", b.gamma_rank},
              {"nonnegative", b.nonnegative},
              {"rows", rows}};
}

ConservationBasis conservation_from_json(const Json& j) {
  ConservationBasis b;
  b.exact = need(j, "exact").get<bool>();
  b.gamma_rank = need(j, "gamma_rank").get<std::size_t>();
  b.nonnegative = need(j, "nonnegative").get<bool>();
  for (const auto& row : need(j, "rows")) {
    std::vector<Integer> r;
    for (const auto& x : row) r.push_back(integer_from_json(x));
    b.rows.push_back(std::move(r));
  }
  return b;
}

Json moment_system_to_json(const LinearMomentSystem& sys) {
  Json basis = Json::array();
  for (const auto& u : sys.basis.indices) basis.push_back(multi_index_to_json(u));
  Json a = Json::array();
  for (const auto& row : sys.A)
    for (const auto& x : row) a.push_back(rational_to_json(x));
  Json b = Json::array();
  for (const auto& x : sys.b) b.push_back(rational_to_json(x));
  return Json{{"A", a},
              {"b", b},
              {"basis", basis},
              {"includes_constant", sys.basis.includes_constant},
              {"order", sys.basis.indices.size()}};
}

LinearMomentSystem moment_system_from_json(const Json& j) {
  LinearMomentSystem sys;
  for (const auto& u : need(j, "basis"))
    sys.basis.indices.push_back(multi_index_from_json(u));
  sys.basis.includes_constant = need(j, "includes_constant").get<bool>();
  std::size_t n = sys.basis.indices.size();
  const Json& a = need(j, "A");
  if (a.size() != n * n) throw SchemaError("A size mismatch");
  sys.A.assign(n, RatVector(n));
  std::size_t idx = 0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) sys.A[r][c] = rational_from_json(a[idx++]);
  const Json& b = need(j, "b");
  if (b.size() != n) throw SchemaError("b size mismatch");
  for (const auto& x : b) sys.b.push_back(rational_from_json(x));
  return sys;
}

Json partition_table_to_json(const PartitionTable& t) {
  Json a = Json::array();
  for (const auto& row : t.basis()) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(integer_to_json(x));
    a.push_back(r);
  }
  Json lambda = Json::array();
  for (const auto& l : t.lambda()) lambda.push_back(rational_to_json(l));
  Json memo = Json::array();
  for (const auto& [beta, z] : t.memo())
    memo.push_back(Json{{"beta", beta}, {"z", rational_to_json(z)}});
  return Json{{"basis", a}, {"lambda", lambda}, {"memo", memo}};
}

PartitionTable partition_table_from_json(const Json& j) {
  std::vector<std::vector<Integer>> a;
  for (const auto& row : need(j, "basis")) {
    std::vector<Integer> r;
    for (const auto& x : row) r.push_back(integer_from_json(x));
    a.push_back(std::move(r));
  }
  std::vector<Rational> lambda;
  for (const auto& l : need(j, "lambda")) lambda.push_back(rational_from_json(l));
  PartitionTable t(std::move(a), std::move(lambda));
  for (const auto& entry : need(j, "memo")) {
    auto beta = need(entry, "beta").get<std::vector<long long>>();
    Rational expected = rational_from_json(need(entry, "z"));
    if (t.z(beta) != expected)
      throw SchemaError("memoized Z value disagrees with recomputation");
  }
  return t;
}

Json distribution_to_json(const ConditionalDistributionT<Rational>& d) {
  Json support = Json::array();
  for (const auto& k : d.support) support.push_back(k);
  Json probs = Json::array();
  for (const auto& p : d.probabilities) probs.push_back(rational_to_json(p));
  return Json{{"probabilities", probs},
              {"species", d.species},
              {"support", support}};
}

Json ffn_to_json(const FfnResult& f) {
  if (!f.ok()) return Json{{"ffn", false}, {"reason", f.reason}};
  const auto& c = *f.certificate;
  return Json{{"degradations", c.degradation_set},
              {"ffn", true},
              {"n_layers", c.n_layers},
              {"reaction_layers", c.reaction_layer},
              {"species_layers", c.species_layer}};
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace crn

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "crn/cbn.hpp"
#include "crn/json_io.hpp"
#include "crn/moments.hpp"
#include "crn/parser.hpp"
#include "crn/ssa.hpp"

using namespace crn;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

// Exit-code contract
constexpr int kOk = 0;
constexpr int kParseError = 2;
constexpr int kCapExceeded = 3;
constexpr int kNoCertificate = 4;
constexpr int kEmptyFiber = 5;
constexpr int kCompareFailed = 6;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CrnError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// "p/q (~0.75)" rendering for text reports
std::string render(const Rational& x) {
  std::ostringstream ss;
  ss << rational_to_string(x);
  if (denominator(x) != 1) {
    ss.setf(std::ios::fmtflags(0), std::ios::floatfield);
    ss.precision(12);
    ss << " (~" << to_double(x) << ")";
  }
  return ss.str();
}

std::string fmt_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

std::vector<long long> parse_ll_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

MultiIndex parse_multi_index(const std::string& text) {
  auto ll = parse_ll_list(text);
  std::vector<int> e;
  for (auto v : ll) e.push_back(static_cast<int>(v));
  return MultiIndex(std::move(e));
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_rational(tok));
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CRN_SEED"))
    return std::strtoull(env, nullptr, 0);
  return 0;
}

Json report_head(const std::string& input_text, std::uint64_t seed,
                 Json config) {
  return Json{{"version", kVersion},
              {"input_fnv1a", hex64(fnv1a(input_text))},
              {"rng", CounterRng::name()},
              {"seed", seed},
              {"config", std::move(config)}};
}

struct ConserveSpec {
  std::vector<Integer> law;
  Integer beta;
  std::size_t eliminated = 0;
};

// "--conserve 1,1,0=10": law row and class value; the eliminated species is
// the last one with a unit coefficient.
ConserveSpec parse_conserve(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos)
    throw CrnError("--conserve expects law=beta, e.g. 1,1,0=10");
  ConserveSpec spec;
  for (auto v : parse_ll_list(text.substr(0, eq))) spec.law.push_back(v);
  spec.beta = Integer(std::stoll(text.substr(eq + 1)));
  bool found = false;
  for (std::size_t i = 0; i < spec.law.size(); ++i)
    if (spec.law[i] == 1) {
      spec.eliminated = i;
      found = true;
    }
  if (!found) throw CrnError("--conserve law needs a unit coefficient");
  return spec;
}

int cmd_analyze(const std::string& input, const std::string& out) {
  std::string text = read_file(input);
  auto net = parse_network(text);
  auto gamma = stoichiometry(net);
  auto basis = conservation_basis(gamma);
  auto info = complexes(net);
  auto classes = linkage_classes(net);
  bool wr = weak_reversibility(net);
  long long d = deficiency(net);
  auto ffn = ffn_certificate(net);

  Json report = report_head(text, 0, Json{{"command", "analyze"}});
  report["network"] = network_to_json(net);
  report["stoichiometry"] = stoich_to_json(gamma);
  report["conservation"] = conservation_to_json(basis);
  report["n_complexes"] = info.complexes.size();
  report["n_linkage_classes"] = classes.size();
  report["weakly_reversible"] = wr;
  report["deficiency"] = d;
  report["ffn"] = ffn_to_json(ffn);
  write_file(fs::path(out) / "analysis.json", dump_canonical(report));

  std::cout << "species: " << net.n_species()
            << "  reactions: " << net.n_reactions()
            << "  complexes: " << info.complexes.size()
            << "  linkage classes: " << classes.size() << "\n"
            << "weakly reversible: " << (wr ? "yes" : "no")
            << "  deficiency: " << d << "\n";
  if (ffn.ok()) {
    std::cout << "feedforward: yes, layers:";
    for (std::size_t i = 0; i < net.n_species(); ++i)
      std::cout << " " << net.species[i] << "="
                << ffn.certificate->species_layer[i];
    std::cout << "\n";
  } else {
    std::cout << "feedforward: no (" << ffn.reason << ")\n";
  }
  std::cout << "conservation laws: " << basis.size() << "\n";
  return kOk;
}

int cmd_moments(const std::string& input, const std::string& out,
                const std::vector<std::string>& target_args,
                const std::string& conserve_arg, std::size_t cap,
                const std::vector<double>& times,
                const std::string& init_arg) {
  std::string text = read_file(input);
  auto net = parse_network(text);
  PropensityNetwork pnet;
  Json config{{"command", "moments"},
              {"targets", target_args},
              {"cap", cap}};
  if (!conserve_arg.empty()) {
    auto spec = parse_conserve(conserve_arg);
    pnet = reduce_by_conservation(net, spec.law, spec.beta, spec.eliminated);
    config["conserve"] = conserve_arg;
  } else {
    pnet = to_propensity_network(net);
  }
  std::vector<MultiIndex> targets;
  for (const auto& t : target_args) targets.push_back(parse_multi_index(t));

  auto res = closure(pnet, targets, cap);
  if (res.cap_exceeded) {
    std::cerr << "closure exceeded cap " << cap << "; frontier ("
              << res.frontier.size() << " indices):";
    for (std::size_t i = 0; i < res.frontier.size() && i < 8; ++i)
      std::cerr << " " << res.frontier[i].str();
    std::cerr << "\n";
    return kCapExceeded;
  }
  auto sys = assemble(pnet, res.basis);

  Json report = report_head(text, 0, config);
  report["system"] = moment_system_to_json(sys);
  std::cout << "moment basis (" << sys.basis.size() << "):";
  for (const auto& u : sys.basis.indices) std::cout << " " << u.str();
  std::cout << "\n";
  for (std::size_t i = 0; i < sys.basis.size(); ++i) {
    std::cout << "A[" << i << "]:";
    for (const auto& x : sys.A[i]) std::cout << " " << render(x);
    std::cout << "   b[" << i << "]: " << render(sys.b[i]) << "\n";
  }

  if (!times.empty()) {
    std::vector<double> x0(sys.basis.size(), 0.0);
    if (!init_arg.empty()) {
      auto k0 = parse_ll_list(init_arg);
      for (std::size_t i = 0; i < sys.basis.size(); ++i) {
        double v = 1.0;
        const auto& u = sys.basis.indices[i];
        for (std::size_t s = 0; s < u.size(); ++s)
          for (int t = 0; t < u[s]; ++t) v *= static_cast<double>(k0.at(s));
        x0[i] = v;
      }
    }
    auto vals = transient(sys, x0, times);
    Json traj = Json::array();
    for (std::size_t t = 0; t < times.size(); ++t) {
      Json row{{"time", times[t]}, {"values", vals[t]}};
      traj.push_back(row);
      std::cout << "t=" << times[t] << ":";
      for (double v : vals[t]) std::cout << " " << fmt_double(v);
      std::cout << "\n";
    }
    report["transient"] = traj;
  } else {
    auto ss = steady_state(sys);
    Json values = Json::array();
    for (const auto& v : ss.values) values.push_back(rational_to_json(v));
    report["steady_state"] = Json{{"unique", ss.unique}, {"values", values}};
    if (!ss.unique) {
      Json null_basis = Json::array();
      for (const auto& dir : ss.nullspace) {
        Json row = Json::array();
        for (const auto& v : dir) row.push_back(rational_to_json(v));
        null_basis.push_back(row);
      }
      report["steady_state"]["nullspace"] = null_basis;
    }
    std::cout << "steady state" << (ss.unique ? "" : " (non-unique)") << ":";
    for (const auto& v : ss.values) std::cout << " " << render(v);
    std::cout << "\n";
  }
  write_file(fs::path(out) / "moments.json", dump_canonical(report));
  return kOk;
}

template <typename S>
Json distribution_json(const ConditionalDistributionT<S>& dist);

template <>
Json distribution_json(const ConditionalDistributionT<Rational>& dist) {
  return distribution_to_json(dist);
}

template <>
Json distribution_json(const ConditionalDistributionT<double>& dist) {
  Json support = Json::array();
  for (const auto& k : dist.support) support.push_back(k);
  return Json{{"probabilities", dist.probabilities},
              {"species", dist.species},
              {"support", support}};
}

template <typename S>
int cbn_report(const std::string& text, const std::string& out,
               const ReactionNetwork& net, const ConservationBasis& basis,
               const std::vector<S>& lambda,
               const std::vector<long long>& beta, Json config) {
  PartitionTableT<S> table(basis.rows, lambda);
  Json report = report_head(text, 0, std::move(config));
  {
    Json l = Json::array();
    for (const auto& v : lambda) {
      if constexpr (std::is_same_v<S, Rational>)
        l.push_back(rational_to_json(v));
      else
        l.push_back(v);
    }
    report["lambda"] = l;
  }

  // Z table over the box beta' <= beta
  std::ostringstream csv;
  std::size_t m = basis.size();
  for (std::size_t i = 0; i < m; ++i) csv << "beta_" << (i + 1) << ",";
  csv << "z_exact,z_float\n";
  std::vector<long long> cursor(m, 0);
  bool done = false;
  while (!done) {
    S z = table.z(cursor);
    for (auto v : cursor) csv << v << ",";
    if constexpr (std::is_same_v<S, Rational>)
      csv << rational_to_string(z) << "," << fmt_double(to_double(z)) << "\n";
    else
      csv << "," << fmt_double(z) << "\n";
    std::size_t i = 0;
    while (i < m && ++cursor[i] > beta[i]) cursor[i++] = 0;
    done = i == m;
  }
  write_file(fs::path(out) / "z_table.csv", csv.str());

  S z = table.z(beta);
  if constexpr (std::is_same_v<S, Rational>)
    std::cout << "Z(beta) = " << render(z) << "\n";
  else
    std::cout << "Z(beta) = " << fmt_double(z) << "\n";

  auto dist = table.stationary_distribution(beta);  // throws on empty fiber
  report["distribution"] = distribution_json(dist);

  Json moments = Json::array();
  for (auto j : table.constrained_species()) {
    auto cm = table.conditional_moments(beta, j);
    Json entry{{"species", net.species[j]}};
    if constexpr (std::is_same_v<S, Rational>) {
      entry["mean"] = rational_to_json(cm.mean);
      entry["variance"] = rational_to_json(cm.variance);
      std::cout << net.species[j] << ": mean " << render(cm.mean)
                << ", variance " << render(cm.variance) << "\n";
    } else {
      entry["mean"] = cm.mean;
      entry["variance"] = cm.variance;
      std::cout << net.species[j] << ": mean " << fmt_double(cm.mean)
                << ", variance " << fmt_double(cm.variance) << "\n";
    }
    moments.push_back(entry);
  }
  report["conditional_moments"] = moments;
  for (auto j : table.unconstrained_species())
    std::cout << net.species[j] << ": Poisson marginal\n";
  write_file(fs::path(out) / "cbn.json", dump_canonical(report));
  return kOk;
}

int cmd_cbn(const std::string& input, const std::string& out,
            const std::string& beta_arg, const std::string& lambda_arg) {
  std::string text = read_file(input);
  auto net = parse_network(text);
  auto basis = conservation_basis(stoichiometry(net));
  auto beta = parse_ll_list(beta_arg);
  if (beta.size() != basis.size())
    throw CrnError("--beta needs one value per conservation law (" +
                   std::to_string(basis.size()) + ")");
  Json config{{"command", "cbn"}, {"beta", beta_arg}};

  if (!lambda_arg.empty()) {
    auto lambda = parse_rational_list(lambda_arg);
    config["lambda"] = lambda_arg;
    auto check = verify_complex_balance(net, lambda);
    if (!check.balanced) {
      std::cerr << "given lambda is not complex-balanced (worst complex "
                << check.worst_complex << ")\n";
      return kNoCertificate;
    }
    return cbn_report<Rational>(text, out, net, basis, lambda, beta,
                                std::move(config));
  }
  auto eq = solve_complex_balance(net);
  if (!eq) {
    std::cerr << "no complex-balanced equilibrium found\n";
    return kNoCertificate;
  }
  return cbn_report<double>(text, out, net, basis, eq->lambda, beta,
                            std::move(config));
}

int cmd_simulate(const std::string& input, const std::string& out,
                 const std::string& init_arg, double horizon,
                 std::size_t trajectories, std::uint64_t seed,
                 std::size_t threads) {
  std::string text = read_file(input);
  auto net = parse_network(text);
  std::vector<long long> k0(net.n_species(), 0);
  if (!init_arg.empty()) k0 = parse_ll_list(init_arg);
  if (horizon <= 0) horizon = default_horizon(net);

  auto ens = ssa_ensemble(net, k0, {horizon}, trajectories, seed, threads);
  std::ostringstream csv;
  csv << "trajectory,time";
  for (const auto& s : net.species) csv << "," << s;
  csv << "\n";
  for (std::size_t tr = 0; tr < ens.samples.size(); ++tr)
    for (std::size_t ti = 0; ti < ens.sample_times.size(); ++ti) {
      csv << tr << "," << ens.sample_times[ti];
      for (auto v : ens.samples[tr][ti]) csv << "," << v;
      csv << "\n";
    }
  write_file(fs::path(out) / "ensemble.csv", csv.str());

  Json config{{"command", "simulate"},
              {"horizon", horizon},
              {"trajectories", trajectories}};
  Json report = report_head(text, seed, std::move(config));
  Json means = Json::array();
  std::cout << "t=" << horizon << " means:";
  for (std::size_t s = 0; s < net.n_species(); ++s) {
    MultiIndex u(net.n_species());
    u[s] = 1;
    auto est = estimate_moment(ens, u, 0);
    means.push_back(Json{{"mean", est.value},
                         {"se", est.standard_error},
                         {"species", net.species[s]}});
    std::cout << " " << net.species[s] << "=" << est.value << "(se "
              << est.standard_error << ")";
  }
  std::cout << "\n";
  report["estimates"] = means;
  write_file(fs::path(out) / "ensemble.json", dump_canonical(report));
  return kOk;
}

int cmd_compare(const std::string& input, const std::string& out,
                const std::vector<std::string>& target_args,
                const std::string& conserve_arg, const std::string& lambda_arg,
                const std::string& beta_arg, const std::string& init_arg,
                double horizon, std::size_t trajectories, std::uint64_t seed,
                std::size_t threads) {
  std::string text = read_file(input);
  auto net = parse_network(text);
  if (horizon <= 0) horizon = default_horizon(net);
  bool all_ok = true;
  Json config{{"command", "compare"},
              {"horizon", horizon},
              {"trajectories", trajectories}};
  Json report = report_head(text, seed, config);
  Json checks = Json::array();

  auto record = [&](const std::string& label, double analytic, double est,
                    double se) {
    double tol = 3 * se + 1e-9;
    bool ok = std::abs(analytic - est) <= tol;
    all_ok = all_ok && ok;
    checks.push_back(Json{{"analytic", analytic},
                          {"estimate", est},
                          {"label", label},
                          {"pass", ok},
                          {"se", se}});
    std::cout << (ok ? "pass" : "FAIL") << "  " << label << ": analytic "
              << analytic << ", ensemble " << est << " (se " << se << ")\n";
  };

  if (!lambda_arg.empty()) {
    // product-form conditional means vs long-run ensemble means
    auto basis = conservation_basis(stoichiometry(net));
    auto lambda = parse_rational_list(lambda_arg);
    auto beta = parse_ll_list(beta_arg);
    PartitionTable table(basis.rows, lambda);
    std::vector<long long> k0;
    if (!init_arg.empty()) {
      k0 = parse_ll_list(init_arg);
    } else {
      auto fiber = table.enumerate_fiber(beta);
      if (fiber.empty()) throw EmptyFiberError("empty fiber");
      k0.assign(net.n_species(), 0);
      for (std::size_t t = 0; t < table.constrained_species().size(); ++t)
        k0[table.constrained_species()[t]] = fiber.front()[t];
    }
    auto ens = ssa_ensemble(net, k0, {horizon}, trajectories, seed, threads);
    for (auto j : table.constrained_species()) {
      auto cm = table.conditional_moments(beta, j);
      MultiIndex u(net.n_species());
      u[j] = 1;
      auto est = estimate_moment(ens, u, 0);
      record("E[" + net.species[j] + "]", to_double(cm.mean), est.value,
             est.standard_error);
    }
  } else {
    PropensityNetwork pnet;
    std::vector<long long> k0(net.n_species(), 0);
    std::optional<ConserveSpec> spec;
    if (!conserve_arg.empty()) {
      spec = parse_conserve(conserve_arg);
      pnet = reduce_by_conservation(net, spec->law, spec->beta, spec->eliminated);
    } else {
      pnet = to_propensity_network(net);
    }
    std::vector<MultiIndex> targets;
    for (const auto& t : target_args) targets.push_back(parse_multi_index(t));
    auto res = closure(pnet, targets);
    if (res.cap_exceeded) return kCapExceeded;
    auto ss = steady_state(assemble(pnet, res.basis));

    if (!init_arg.empty()) {
      k0 = parse_ll_list(init_arg);
    } else if (spec) {
      // start the SSA on the requested conservation class
      k0[spec->eliminated] = spec->beta.convert_to<long long>();
    }
    auto ens = ssa_ensemble(net, k0, {horizon}, trajectories, seed, threads);
    for (std::size_t i = 0; i < res.basis.size(); ++i) {
      // reduced-space moment indices map back by skipping the eliminated
      // species column
      MultiIndex u(net.n_species());
      std::size_t src = 0;
      for (std::size_t s = 0; s < net.n_species(); ++s) {
        if (spec && s == spec->eliminated) continue;
        u[s] = res.basis.indices[i][src++];
      }
      auto est = estimate_moment(ens, u, 0);
      record("E[" + res.basis.indices[i].str() + "]",
             to_double(ss.values[i]), est.value, est.standard_error);
    }
  }
  report["checks"] = checks;
  report["pass"] = all_ok;
  write_file(fs::path(out) / "compare.json", dump_canonical(report));
  return all_ok ? kOk : kCompareFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mass-action reaction network analyzer"};
  app.require_subcommand(1);

  std::string input, out = ".", conserve, lambda_arg, beta_arg, init_arg;
  std::vector<std::string> targets;
  std::vector<double> times;
  std::size_t cap = 10000, trajectories = 10000, threads = 1;
  double horizon = 0;
  std::uint64_t seed = default_seed();

  auto* analyze = app.add_subcommand("analyze", "structural analysis");
  analyze->add_option("input", input)->required();
  analyze->add_option("--out", out);

  auto* moments = app.add_subcommand("moments", "moment closure and solve");
  moments->add_option("input", input)->required();
  moments->add_option("--out", out);
  moments->add_option("--target", targets)->required();
  moments->add_option("--conserve", conserve);
  moments->add_option("--cap", cap);
  moments->add_option("--times", times);
  moments->add_option("--init", init_arg);

  auto* cbn = app.add_subcommand("cbn", "complex balance and partition function");
  cbn->add_option("input", input)->required();
  cbn->add_option("--out", out);
  cbn->add_option("--beta", beta_arg)->required();
  cbn->add_option("--lambda", lambda_arg);

  auto* simulate = app.add_subcommand("simulate", "SSA ensemble");
  simulate->add_option("input", input)->required();
  simulate->add_option("--out", out);
  simulate->add_option("--init", init_arg);
  simulate->add_option("--horizon", horizon);
  simulate->add_option("--trajectories", trajectories);
  simulate->add_option("--seed", seed);
  simulate->add_option("--threads", threads);

  auto* compare = app.add_subcommand("compare", "analytic vs SSA at 3 SE");
  compare->add_option("input", input)->required();
  compare->add_option("--out", out);
  compare->add_option("--target", targets);
  compare->add_option("--conserve", conserve);
  compare->add_option("--lambda", lambda_arg);
  compare->add_option("--beta", beta_arg);
  compare->add_option("--init", init_arg);
  compare->add_option("--horizon", horizon);
  compare->add_option("--trajectories", trajectories);
  compare->add_option("--seed", seed);
  compare->add_option("--threads", threads);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(input, out);
    if (app.got_subcommand(moments))
      return cmd_moments(input, out, targets, conserve, cap, times, init_arg);
    if (app.got_subcommand(cbn)) return cmd_cbn(input, out, beta_arg, lambda_arg);
    if (app.got_subcommand(simulate))
      return cmd_simulate(input, out, init_arg, horizon, trajectories, seed,
                          threads);
    if (app.got_subcommand(compare))
      return cmd_compare(input, out, targets, conserve, lambda_arg, beta_arg,
                         init_arg, horizon, trajectories, seed, threads);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const EmptyFiberError& e) {
    std::cerr << "empty fiber: " << e.what() << "\n";
    return kEmptyFiber;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}

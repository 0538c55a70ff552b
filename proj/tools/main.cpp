#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "anticyc/compgraph/graph.hpp"
#include "anticyc/error.hpp"
#include "anticyc/exactalg/fitting.hpp"
#include "pipeline.hpp"

using namespace anticyc;
using namespace anticyc::app;
using exactalg::Integer;
using exactalg::IntMatrix;
using exactalg::to_string;
namespace fs = std::filesystem;

namespace {

Integer parse_integer(const std::string& s, const std::string& what) {
  try {
    return Integer(s);
  } catch (const std::invalid_argument&) {
    throw UsageError("cli", what + " must be an integer, got '" + s + "'");
  }
}

Integer next_prime(const Integer& q) {
  Integer r;
  mpz_nextprime(r.get_mpz_t(), q.get_mpz_t());
  return r;
}

Integer json_integer(const nlohmann::json& v) {
  if (v.is_number_integer()) return Integer(v.get<long>());
  if (v.is_string()) return parse_integer(v.get<std::string>(), "matrix entry");
  throw UsageError("cli", "expected an integer, got " + v.dump());
}

// Dense with explicit dimensions.
nlohmann::json matrix_json(const IntMatrix& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) row.push_back(to_string(M(i, j)));
    rows.push_back(row);
  }
  return {{"rows", M.rows()}, {"cols", M.cols()}, {"entries", rows}};
}

// Either {"entries": [[...]]} or a bare array of rows.
IntMatrix matrix_from_json(const nlohmann::json& j) {
  const auto& rows = j.is_object() ? j.at("entries") : j;
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) throw UsageError("cli", "a matrix is an array of rows");
  IntMatrix M(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != M.cols()) throw UsageError("cli", "matrix rows have different lengths");
    for (std::size_t j = 0; j < M.cols(); ++j) M(i, j) = json_integer(rows[i][j]);
  }
  return M;
}

void emit(const nlohmann::json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << dump(j);
    return;
  }
  std::ofstream f(out);
  if (!f) throw DataMissingError("cli", "cannot write " + out);
  f << dump(j);
}

std::vector<long> parse_primes(const std::string& list) {
  std::vector<long> out;
  std::stringstream ss(list);
  for (std::string tok; std::getline(ss, tok, ',');) {
    long l = parse_integer(tok, "prime").get_si();
    if (!exactalg::is_prime(l)) throw UsageError("cli", tok + " is not prime");
    out.push_back(l);
  }
  return out;
}

// f from a fixture file, or the first rational cuspidal system of the
// maximal order of discriminant N-, with a_l for every l <= bound.
brandtforms::EigenSystem form_for(const std::string& fixture, const Integer& N_minus, const Integer& p, long n,
                                  long bound) {
  if (!fixture.empty()) return load_fixture(fixture);
  auto O = base_order(N_minus, 1);
  auto q = Integer(2);
  while (exactalg::mod(N_minus, q) == 0) q = next_prime(q);
  auto systems = brandtforms::eigensystems_mod(quatarith::ideal_class_set(O, q), hecke_primes(N_minus, p, bound), p, n);
  return select_form(systems, std::nullopt);
}

int cmd_lfun(PipelineConfig config, const std::string& config_file, const std::string& out_dir) {
  if (!config_file.empty()) {
    auto cache_dir = config.cache_dir;
    config = PipelineConfig::from_json(read_json(config_file));
    if (cache_dir) config.cache_dir = cache_dir;
  }
  ClassSetCache cache(config.cache_dir);
  auto start = std::chrono::steady_clock::now();
  auto r = run_lfun(config, cache);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  fs::path out(out_dir);
  fs::create_directories(out);
  auto write = [&](const char* name, const nlohmann::json& j) {
    std::ofstream f(out / name);
    if (!f) throw DataMissingError("cli", "cannot write " + (out / name).string());
    f << dump(j);
  };
  write("L_phi.json", r.L_phi);
  write("L_p.json", r.L_p);
  write("mu_report.json", r.mu_report);
  write("certificate.json", r.certificate);
  std::cout << r.table;
  std::cout << "distribution relation: " << (r.certificate["distribution_relation"] ? "verified" : "FAILED")
            << ", ray independence: " << (r.certificate["ray_independent"] ? "verified" : "FAILED") << '\n';
  std::cerr << std::fixed << std::setprecision(2) << "wrote " << out.string() << " in " << seconds << "s (cache hits "
            << cache.hits() << ")\n";
  return 0;
}

int cmd_brandt(const std::string& disc, const std::string& level, const std::string& primes, const std::string& out) {
  auto D = parse_integer(disc, "--disc"), N = parse_integer(level, "--level");
  auto O = base_order(D, N);
  Integer q = 2;
  while (exactalg::mod(D * N, q) == 0) q = next_prime(q);
  auto cs = quatarith::ideal_class_set(O, q);
  std::cout << "classes " << cs.size() << ", mass " << to_string(cs.mass()) << '\n';
  nlohmann::json j{{"disc", to_string(D)}, {"level", to_string(N)}, {"classes", cs.size()},
                   {"mass", to_string(cs.mass())}, {"unit_orders", nlohmann::json::array()}};
  for (std::size_t i = 0; i < cs.size(); ++i) j["unit_orders"].push_back(cs[i].units.size());
  for (auto [l, B] : brandtforms::hecke_family(cs, parse_primes(primes))) {
    j["operators"][std::to_string(l)] = matrix_json(B);
    std::cout << "T_" << l << ":";
    for (std::size_t r = 0; r < B.rows(); ++r) {
      std::cout << (r ? " |" : "");
      for (std::size_t c = 0; c < B.cols(); ++c) std::cout << ' ' << B(r, c);
    }
    std::cout << '\n';
  }
  emit(j, out);
  return 0;
}

int cmd_admissible(const std::string& fixture, const std::string& N_minus, const std::string& K, const std::string& p,
                   long n, long bound, const std::string& out) {
  auto Nm = parse_integer(N_minus, "--N-minus"), dK = parse_integer(K, "--K"), P = parse_integer(p, "--p");
  auto f = form_for(fixture, Nm, P, n, std::max(bound, 13L));
  auto certs = admraise::search_admissible(f, dK, P, n, Nm, bound);
  nlohmann::json j = nlohmann::json::array();
  std::cout << std::left << std::setw(6) << "v" << std::setw(6) << "eps" << std::setw(8) << "a_v" << "v_p(v+1-eps a_v)\n";
  for (const auto& c : certs) {
    std::cout << std::setw(6) << c.v << std::setw(6) << (c.epsilon > 0 ? "+1" : "-1") << std::setw(8) << c.a_v
              << c.congruence_valuation << '\n';
    j.push_back(c.to_json());
  }
  emit(j, out);
  return 0;
}

int cmd_raise(const std::string& fixture, const std::string& N_minus, const std::string& K, const std::string& p,
              long n, long v1, long v2, long samples, const std::string& out) {
  auto Nm = parse_integer(N_minus, "--N-minus"), dK = parse_integer(K, "--K"), P = parse_integer(p, "--p");
  auto f = form_for(fixture, Nm, P, n, std::max({samples, v1, v2}));
  auto certify = [&](long v) {
    auto a = admraise::is_n_admissible(v, f, dK, P, n, Nm);
    if (!a) throw ConfigurationError("admraise", std::to_string(v) + " is not admissible: " + a.reason);
    return *a.cert;
  };
  std::vector<long> sample_primes;
  for (long l : exactalg::primes_up_to(samples)) sample_primes.push_back(l);
  auto pair = admraise::raise_level_search(f, certify(v1), certify(v2), Nm, sample_primes);
  std::cout << "found g on disc " << pair.disc << " with eps = (" << pair.eps1 << ", " << pair.eps2
            << "), congruent mod " << to_string(P) << "^" << n << " at " << pair.compared.size() << " primes\n";
  emit(pair.to_json(), out);
  return 0;
}

int cmd_compgroup(const std::string& graph_file, const std::string& divisor, const std::string& out) {
  auto G = compgraph::LengthGraph::from_json(read_json(graph_file));
  nlohmann::json j{{"graph", G.to_json()}, {"components", nlohmann::json::array()}};
  std::size_t c = 0;
  for (const auto& Phi : compgraph::component_groups(G)) {
    auto H = G.component(c);
    auto X = compgraph::character_group(H);
    std::cout << "component " << c << ": Phi = " << Phi.shape().to_string() << ", rank X = " << X.rank() << '\n';
    j["components"].push_back({{"phi", Phi.shape().to_string()},
                               {"character_rank", X.rank()},
                               {"monodromy", matrix_json(Phi.gram())},
                               {"raynaud_exact", compgraph::raynaud_exact(H, X)},
                               {"edixhoven", compgraph::edixhoven_check(H).to_json()}});
    ++c;
  }
  if (!divisor.empty()) {
    auto Phi = compgraph::component_group(G);
    std::vector<compgraph::ReducedPoint> D;
    std::stringstream ss(divisor);
    for (std::string tok; std::getline(ss, tok, ',');) {
      auto colon = tok.find(':');
      if (colon == std::string::npos) throw UsageError("cli", "divisor terms are vertex:coefficient");
      auto v = parse_integer(tok.substr(0, colon), "vertex").get_ui();
      D.push_back({v, std::nullopt, parse_integer(tok.substr(colon + 1), "coefficient")});
    }
    auto cls = compgraph::specialize_divisor(G, Phi, D);
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& x : cls) coords.push_back(to_string(x));
    std::cout << "class of divisor: " << coords.dump() << " in " << Phi.shape().to_string() << '\n';
    j["divisor_class"] = coords;
  }
  emit(j, out);
  return 0;
}

int cmd_fitting(const std::string& file, const std::string& p, long n, const std::string& L_file,
                const std::string& character, const std::string& out) {
  auto doc = read_json(file);
  auto M = matrix_from_json(doc.is_object() && doc.contains("presentation") ? doc.at("presentation") : doc);
  exactalg::PrimePowerRing R(parse_integer(p, "--p"), n);
  auto f = exactalg::fitting_exponent(M, R);
  auto shape = exactalg::cokernel_shape(M);
  nlohmann::json j{{"module", shape.to_string()}, {"vanishes_mod_pn", f.vanishes_mod_pn}};
  j["exponent"] = f.exponent ? nlohmann::json(*f.exponent) : nlohmann::json(nullptr);
  std::cout << "module " << shape.to_string() << ", Fitting ideal "
            << (f.exponent ? "(p^" + std::to_string(*f.exponent) + ")" : std::string("0"))
            << (f.vanishes_mod_pn ? ", zero mod p^n" : "") << '\n';
  if (!L_file.empty()) {
    auto L = exactalg::GroupRingElement::from_json(read_json(L_file));
    exactalg::Character rho;
    if (!character.empty()) {
      auto comma = character.find(',');
      if (comma == std::string::npos) throw UsageError("cli", "--character takes k,exponent");
      rho = {static_cast<unsigned>(parse_integer(character.substr(0, comma), "k").get_ui()),
             parse_integer(character.substr(comma + 1), "exponent")};
    }
    auto r = exactalg::inequality_check(M, L, rho);
    j["inequality"] = {{"s", r.s ? nlohmann::json(*r.s) : nlohmann::json(nullptr)},
                       {"t", r.t},
                       {"two_t", r.two_t},
                       {"precision_cap", r.precision_cap},
                       {"status", exactalg::to_string(r.inequality)},
                       {"in_fitting", r.in_fitting}};
    std::cout << "s = " << (r.s ? std::to_string(*r.s) : "inf") << ", 2t = " << r.two_t << ": s <= 2t "
              << exactalg::to_string(r.inequality) << ", phi(L L*) " << (r.in_fitting ? "in" : "not in")
              << " the Fitting ideal\n";
  }
  emit(j, out);
  return 0;
}

int cmd_selftest() {
  auto results = run_acceptance([](const CriterionResult& r) { std::cout << format_result(r) << std::endl; });
  std::size_t passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  return passed == results.size() ? 0 : static_cast<int>(ErrorKind::invariant_violation);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anticyclotomic p-adic L-functions from definite quaternion algebras"};
  app.require_subcommand(1);
  std::string out;

  PipelineConfig config;
  std::string config_file, out_dir = "lfun_out", Np = "1", Nm = "11", P = "5", K = "-3", fixture, cache_dir;
  auto* lfun = app.add_subcommand("lfun", "Compute L_phi, L_p and the mu report");
  lfun->add_option("--config", config_file, "JSON config (replaces the other flags except --cache-dir)");
  lfun->add_option("--N-plus", Np);
  lfun->add_option("--N-minus", Nm);
  lfun->add_option("--p", P);
  lfun->add_option("--n", config.n);
  lfun->add_option("--m-max", config.m_max);
  lfun->add_option("--K", K, "discriminant of K");
  lfun->add_option("--fixture", fixture, "eigensystem fixture selecting the form");
  lfun->add_option("--cache-dir", cache_dir);
  lfun->add_option("--sample-bound", config.sample_bound);
  lfun->add_option("--out", out_dir, "output directory");

  std::string disc, level = "1", primes = "2,3,5,7";
  auto* brandt = app.add_subcommand("brandt", "Class set and Brandt matrices");
  brandt->add_option("--disc", disc)->required();
  brandt->add_option("--level", level);
  brandt->add_option("--primes", primes, "comma-separated");
  brandt->add_option("--out", out);

  long n = 1, bound = 25, v1 = 0, v2 = 0, samples = 50;
  auto* adm = app.add_subcommand("admissible", "Search for n-admissible primes");
  adm->add_option("--fixture", fixture, "eigensystem fixture (default: computed from N-)");
  adm->add_option("--N-minus", Nm);
  adm->add_option("--K", K);
  adm->add_option("--p", P);
  adm->add_option("--n", n);
  adm->add_option("--bound", bound);
  adm->add_option("--out", out);

  auto* raise = app.add_subcommand("raise", "Level raising at two admissible primes");
  raise->add_option("--fixture", fixture);
  raise->add_option("--N-minus", Nm);
  raise->add_option("--K", K);
  raise->add_option("--p", P);
  raise->add_option("--n", n);
  raise->add_option("--v1", v1)->required();
  raise->add_option("--v2", v2)->required();
  raise->add_option("--sample-bound", samples);
  raise->add_option("--out", out);

  std::string graph, divisor;
  auto* comp = app.add_subcommand("compgroup", "Component groups of a dual graph");
  comp->add_option("--graph", graph)->required();
  comp->add_option("--divisor", divisor, "vertex:coefficient,...");
  comp->add_option("--out", out);

  std::string presentation, L_file, character;
  auto* fit = app.add_subcommand("fitting", "Fitting ideal and the s <= 2t report");
  fit->add_option("--presentation", presentation)->required();
  fit->add_option("--p", P);
  fit->add_option("--n", n);
  fit->add_option("--L", L_file, "group ring element");
  fit->add_option("--character", character, "k,exponent");
  fit->add_option("--out", out);

  auto* self = app.add_subcommand("selftest", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::usage);
  }

  try {
    if (*lfun) {
      config.N_plus = parse_integer(Np, "--N-plus");
      config.N_minus = parse_integer(Nm, "--N-minus");
      config.p = parse_integer(P, "--p");
      config.disc_K = parse_integer(K, "--K");
      if (!fixture.empty()) config.fixture = fixture;
      if (!cache_dir.empty()) config.cache_dir = cache_dir;
      return cmd_lfun(config, config_file, out_dir);
    }
    if (*brandt) return cmd_brandt(disc, level, primes, out);
    if (*adm) return cmd_admissible(fixture, Nm, K, P, n, bound, out);
    if (*raise) return cmd_raise(fixture, Nm, K, P, n, v1, v2, samples, out);
    if (*comp) return cmd_compgroup(graph, divisor, out);
    if (*fit) return cmd_fitting(presentation, P, n, L_file, character, out);
    if (*self) return cmd_selftest();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::invariant_violation);
  }
  return 0;
}

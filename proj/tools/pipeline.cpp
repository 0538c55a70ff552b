#include "pipeline.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "anticyc/error.hpp"

namespace anticyc::app {

namespace fs = std::filesystem;
using exactalg::kronecker;
using exactalg::to_string;

namespace {

Integer parse_integer(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_number_integer()) return Integer(v.get<long>());
  if (v.is_string()) return Integer(v.get<std::string>());
  throw UsageError("cli", std::string("config field ") + key + " must be an integer");
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
  PipelineConfig c;
  if (j.contains("N_plus")) c.N_plus = parse_integer(j, "N_plus");
  if (j.contains("N_minus")) c.N_minus = parse_integer(j, "N_minus");
  if (j.contains("p")) c.p = parse_integer(j, "p");
  if (j.contains("n")) c.n = j.at("n").get<long>();
  if (j.contains("m_max")) c.m_max = j.at("m_max").get<unsigned>();
  if (j.contains("K")) c.disc_K = parse_integer(j, "K");
  if (j.contains("fixture")) c.fixture = j.at("fixture").get<std::string>();
  if (j.contains("cache_dir")) c.cache_dir = j.at("cache_dir").get<std::string>();
  if (j.contains("sample_bound")) c.sample_bound = j.at("sample_bound").get<long>();
  return c;
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json j{{"N_plus", to_string(N_plus)}, {"N_minus", to_string(N_minus)}, {"p", to_string(p)},
                   {"n", n},                      {"m_max", m_max},                {"K", to_string(disc_K)},
                   {"sample_bound", sample_bound}};
  if (fixture) j["fixture"] = fixture->string();
  return j;
}

void PipelineConfig::validate() const {
  if (n < 1) throw UsageError("cli", "n must be positive");
  if (N_plus < 1 || N_minus < 2) throw ConfigurationError("cli", "N+ must be positive and N- at least 2");
  if (!exactalg::is_prime(p) || p == 2) throw ConfigurationError("cli", "p must be an odd prime");
  if (disc_K >= 0) throw ConfigurationError("cli", "K must be imaginary quadratic");
  if (exactalg::gcd(N_plus, N_minus) != 1) throw ConfigurationError("cli", "N+ and N- must be coprime");
  if (exactalg::gcd(p, N_plus * N_minus) != 1) throw ConfigurationError("cli", "p must not divide N+ N-");
  if (!exactalg::is_squarefree(N_minus))
    throw ConfigurationError("cli", "factorization rule: N- must be squarefree");
  auto minus = exactalg::prime_divisors(N_minus);
  if (minus.size() % 2 == 0)
    throw ConfigurationError("cli", "factorization rule: N- must have an odd number of prime factors");
  for (const auto& q : minus)
    if (kronecker(disc_K, q) != -1)
      throw ConfigurationError("cli", "factorization rule: the prime " + to_string(q) +
                                          " of N- must be inert in K");
  for (const auto& q : exactalg::prime_divisors(N_plus))
    if (kronecker(disc_K, q) != 1)
      throw ConfigurationError("cli", "factorization rule: the prime " + to_string(q) +
                                          " of N+ must split in K");
  if (kronecker(disc_K, p) == 1) throw ConfigurationError("cli", "factorization rule: p must not split in K");
  if (sample_bound < 2) throw UsageError("cli", "sample bound must be at least 2");
}

ClassSetCache::ClassSetCache(std::optional<fs::path> dir) : dir_(std::move(dir)) {
  if (dir_) fs::create_directories(*dir_);
}

quatarith::ClassSet ClassSetCache::get(const quatarith::QuaternionOrder& O, const Integer& p, std::size_t max_classes) {
  if (!dir_) return quatarith::ideal_class_set(O, p, max_classes);
  const fs::path file = *dir_ / ("classes_D" + to_string(O.discriminant()) + "_N" + to_string(O.level()) + "_p" +
                                 to_string(p) + ".json");
  nlohmann::json entries = nlohmann::json::array();
  if (fs::exists(file)) {
    entries = read_json(file);
    for (const auto& e : entries) {
      auto cs = quatarith::ClassSet::from_json(e);
      if (cs.order().lattice() == O.lattice() && cs.algebra() == O.algebra()) {
        ++hits_;
        return cs;
      }
    }
  }
  auto cs = quatarith::ideal_class_set(O, p, max_classes);
  entries.push_back(cs.to_json());
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << dump(entries);
  }
  fs::rename(tmp, file);
  return cs;
}

quatarith::QuaternionOrder base_order(const Integer& N_minus, const Integer& N_plus) {
  auto O = quatarith::maximal_order(quatarith::algebra_from_discriminant(N_minus));
  return N_plus == 1 ? O : quatarith::eichler_order(O, N_plus);
}

std::vector<long> hecke_primes(const Integer& level, const Integer& p, long bound) {
  std::vector<long> out;
  for (long l : exactalg::primes_up_to(bound))
    if (exactalg::mod(level, Integer(l)) != 0) out.push_back(l);
  if (std::find(out.begin(), out.end(), p.get_si()) == out.end()) {
    out.push_back(p.get_si());
    std::sort(out.begin(), out.end());
  }
  return out;
}

brandtforms::EigenSystem select_form(const std::vector<brandtforms::EigenSystem>& systems,
                                     const std::optional<brandtforms::EigenSystem>& fixture) {
  for (const auto& s : systems) {
    if (brandtforms::is_exact_eisenstein(s) || s.provenance != brandtforms::Provenance::rational) continue;
    if (!fixture) return s;
    bool match = true;
    for (const auto& [l, a] : fixture->a)
      if (s.a.count(l) && exactalg::mod(s.a.at(l) - a, s.modulus()) != 0) match = false;
    if (match) return s;
  }
  throw DataMissingError("cli", fixture ? "no computed eigensystem matches the fixture"
                                        : "the base order carries no rational cuspidal eigensystem");
}

brandtforms::EigenSystem load_fixture(const fs::path& path) { return brandtforms::EigenSystem::from_json(read_json(path)); }

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataMissingError("cli", "cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("cli", path.string() + ": " + e.what());
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

LfunResult run_lfun(const PipelineConfig& config, ClassSetCache& cache) {
  config.validate();
  const Integer level = config.N_plus * config.N_minus;
  auto O = base_order(config.N_minus, config.N_plus);
  auto eo = quatarith::order_with_embedding(cache.get(O, config.p), config.disc_K, 1);
  brandtforms::QuotientGraph G(cache.get(eo.order, config.p));

  std::optional<brandtforms::EigenSystem> fixture;
  if (config.fixture) fixture = load_fixture(*config.fixture);
  auto primes = hecke_primes(level, config.p, std::min<long>(config.sample_bound, 13));
  auto f = select_form(brandtforms::eigensystems_mod(G.classes(), primes, config.p, config.n), fixture);
  auto Phi = padicL::from_eigenform(brandtforms::edge_eigenform(G, f, config.n));

  auto T = toruscm::build_torus(eo.order, eo.embedding, config.p, config.m_max + 2);
  toruscm::EdgeClassifier C(T, G);
  padicL::Measure least(C, Phi, bttree::TieBreak::least);
  padicL::Measure greatest(C, Phi, bttree::TieBreak::greatest);

  LfunResult out;
  out.L_phi = nlohmann::json::array();
  out.L_p = nlohmann::json::array();
  bool distribution = true, additivity = true, ray_independent = true;
  std::vector<padicL::LFunctionElement> levels;
  for (unsigned m = 0; m <= config.m_max + 1; ++m) levels.push_back(padicL::full_Lp(least, m));
  for (unsigned m = 0; m <= config.m_max; ++m) {
    distribution = distribution && exactalg::project_level(levels[m + 1].L_phi, m) == levels[m].L_phi;
    ray_independent = ray_independent && padicL::full_Lp(greatest, m).L_p == levels[m].L_p;
    for (const auto& sigma : T.quotient(m + 1)) {
      Integer sum = 0;
      for (const auto& tau : T.subquotient(m + 1, m + 2)) sum += least.theta(T.mul(sigma, tau), m + 1);
      additivity = additivity && least.ring().reduce(sum) == least.theta(sigma, m);
    }
    out.L_phi.push_back(levels[m].L_phi.to_json());
    out.L_p.push_back(levels[m].L_p.to_json());
  }
  if (!distribution || !additivity)
    throw InvariantViolation("padicL", "the distribution relation fails for the computed measure");
  if (!ray_independent) throw InvariantViolation("padicL", "L_p depends on the choice of ray");

  auto report = padicL::mu_two_nu_check(Phi, levels[config.m_max]);
  out.mu_report = report.to_json();
  out.mu_report["m"] = config.m_max;
  out.mu_report["anomaly"] = !report.equality;
  out.mu_report["alpha"] = to_string(Phi.alpha);
  out.certificate = {{"config", config.to_json()},
                     {"distribution_relation", distribution},
                     {"theta_additivity", additivity},
                     {"ray_independent", ray_independent},
                     {"classes", G.vertex_count()},
                     {"edge_classes", G.edge_count()},
                     {"form", f.to_json()}};

  std::ostringstream t;
  t << std::left << std::setw(4) << "m" << std::setw(8) << "mu(L)" << std::setw(8) << "mu(Lp)" << "L_p coefficients\n";
  for (unsigned m = 0; m <= config.m_max; ++m) {
    t << std::setw(4) << m << std::setw(8) << exactalg::mu_invariant(levels[m].L_phi) << std::setw(8)
      << exactalg::mu_invariant(levels[m].L_p);
    for (const auto& c : levels[m].L_p.coeffs()) t << ' ' << c;
    t << '\n';
  }
  t << "nu = " << report.nu << ", mu(L_p) = " << report.mu_L_p << (report.equality ? " = " : " != ") << "min(2 nu, n)"
    << (report.equality ? "" : "  [anomaly: theorem-conditional, not accepted silently]") << '\n';
  out.table = t.str();
  return out;
}

}  // namespace anticyc::app

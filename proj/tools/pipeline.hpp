#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "anticyc/admraise/admissible.hpp"
#include "anticyc/padicL/lfunction.hpp"
#include "json.hpp"

namespace anticyc::app {

using exactalg::Integer;

struct PipelineConfig {
  Integer N_plus = 1;
  Integer N_minus = 11;
  Integer p = 5;
  long n = 1;
  unsigned m_max = 2;
  Integer disc_K = -3;
  std::optional<std::filesystem::path> fixture;
  std::optional<std::filesystem::path> cache_dir;
  long sample_bound = 50;

  static PipelineConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// ConfigurationError naming the violated factorization rule.
  void validate() const;
};

/// Class sets keyed by (disc, level, p) on disk; several orders of the same
/// discriminant and level share one file. Entries are written once and
/// re-validated (mass and neighbor links) when read back.
class ClassSetCache {
 public:
  explicit ClassSetCache(std::optional<std::filesystem::path> dir);
  quatarith::ClassSet get(const quatarith::QuaternionOrder& O, const Integer& p, std::size_t max_classes = 400);
  std::size_t hits() const noexcept { return hits_; }

 private:
  std::optional<std::filesystem::path> dir_;
  std::size_t hits_ = 0;
};

/// The order of discriminant N- and level N+ (maximal when N+ = 1).
quatarith::QuaternionOrder base_order(const Integer& N_minus, const Integer& N_plus);

/// Primes l <= bound not dividing the level, plus p.
std::vector<long> hecke_primes(const Integer& level, const Integer& p, long bound);

/// The form f: the fixture when one is given, otherwise the first rational
/// non-Eisenstein system of the base order, with exact data.
brandtforms::EigenSystem select_form(const std::vector<brandtforms::EigenSystem>& systems,
                                     const std::optional<brandtforms::EigenSystem>& fixture);

struct LfunResult {
  nlohmann::json L_phi;  // per level
  nlohmann::json L_p;
  nlohmann::json mu_report;
  nlohmann::json certificate;  // distribution relation and ray independence
  std::string table;
};
LfunResult run_lfun(const PipelineConfig& config, ClassSetCache& cache);

brandtforms::EigenSystem load_fixture(const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);
/// Deterministic rendering used for every artifact.
std::string dump(const nlohmann::json& j);

}  // namespace anticyc::app

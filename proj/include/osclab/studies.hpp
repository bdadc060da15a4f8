#ifndef OSCLAB_STUDIES_HPP
#define OSCLAB_STUDIES_HPP

#include <cstdint>
#include <string>

#include "json.hpp"
#include "osclab/bumps.hpp"
#include "osclab/gridop.hpp"
#include "osclab/kernel.hpp"
#include "osclab/profiles.hpp"

namespace osclab {

/// A fully-resolved run configuration: user JSON merged over the built-in
/// defaults. Every study reads from here, and every output embosses the
/// configuration hash so artifacts are traceable to their inputs.
class RunConfig {
 public:
  static nlohmann::json defaults();
  static RunConfig from_json(const nlohmann::json& user);
  static RunConfig from_file(const std::string& path);

  const nlohmann::json& json() const { return cfg_; }
  std::string config_hash() const;

  RadialProfile profile() const;
  KernelOmega kernel() const;
  OperatorParams params() const;
  AdmissibilityCertificate certificate() const;
  EpsilonConstants epsilons(const AdmissibilityCertificate& cert) const;
  MlOptions ml_options() const;

  std::uint64_t seed() const { return cfg_.at("seed").get<std::uint64_t>(); }
  int threads() const { return cfg_.at("threads").get<int>(); }
  std::string out_dir() const { return cfg_.at("out").get<std::string>(); }
  double tol() const { return cfg_.at("tol").get<double>(); }

  /// Apply a dotted-path override like "alpha=0.3" or "lemma.n_configs=50".
  void override_value(const std::string& key_path, const std::string& value);

 private:
  explicit RunConfig(nlohmann::json cfg) : cfg_(std::move(cfg)) {}
  nlohmann::json cfg_;
};

/// Exit code semantics shared by the CLI and the C API:
/// 0 pass, 1 usage/parse, 2 inadmissible profile, 3 acceptance failure,
/// 4 quadrature budget exceeded.
struct StudyResult {
  int exit_code = 0;
  nlohmann::json summary;
};

StudyResult run_profile_check(const RunConfig& cfg);
StudyResult run_lemma_check(const RunConfig& cfg);
StudyResult run_multiplier(const RunConfig& cfg);
StudyResult run_decay(const RunConfig& cfg);
StudyResult run_sobolev_envelope(const RunConfig& cfg);
StudyResult run_apply(const RunConfig& cfg);
StudyResult run_sweep(const RunConfig& cfg);

/// Dispatch by command name ("profile-check", "lemma-check", "multiplier",
/// "decay", "sobolev-envelope", "apply", "sweep"). Errors are mapped to the
/// exit codes above; the summary carries diagnostics either way.
StudyResult run_command(const std::string& command, const RunConfig& cfg);

}  // namespace osclab

#endif

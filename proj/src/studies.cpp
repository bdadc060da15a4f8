#include "osclab/studies.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "osclab/io.hpp"
#include "osclab/multiplier.hpp"
#include "osclab/parallel.hpp"
#include "osclab/phase.hpp"
#include "osclab/rng.hpp"

namespace osclab {

namespace {

nlohmann::json default_probes() {
  return nlohmann::json::array({{0.0, 0.0, 0.0},
                                {0.25, 0.0, 0.0},
                                {0.0, 0.5, 0.25},
                                {-0.5, 0.25, 0.0},
                                {0.75, -0.25, 0.5},
                                {0.0, 0.0, -0.75},
                                {1.0, 0.5, 0.0},
                                {-0.25, -0.5, 0.75}});
}

Frequency freq_from(const nlohmann::json& v) {
  Frequency xi;
  xi.xi_prime = {v.at(0).get<double>(), v.at(1).get<double>()};
  xi.xi_last = v.at(2).get<double>();
  return xi;
}

/// Shared CSV header: configuration hash plus the constants every artifact
/// must carry.
void stamp(CsvWriter& csv, const RunConfig& cfg, const AdmissibilityCertificate* cert,
           const EpsilonConstants* eps) {
  csv.meta("config_hash", cfg.config_hash());
  csv.meta("seed", std::to_string(cfg.seed()));
  csv.meta("alpha", cfg.json().at("alpha").get<double>());
  csv.meta("beta", cfg.json().at("beta").get<double>());
  if (cert) {
    csv.meta("k1_hat", cert->k1_hat);
    csv.meta("k2_hat", cert->k2_hat);
    csv.meta("k3_hat", cert->k3_hat);
  }
  if (eps) {
    csv.meta("epsilon", eps->epsilon);
    csv.meta("epsilon1", eps->epsilon1);
    csv.meta("epsilon2", eps->epsilon2);
  }
}

nlohmann::json base_summary(const RunConfig& cfg) {
  return {{"config_hash", cfg.config_hash()}, {"seed", cfg.seed()}};
}

Frequency draw_frequency(Rng& rng, double xi_max) {
  double mag = rng.log_uniform(1.0, xi_max);
  auto dir = rng.unit_sphere();
  Frequency xi;
  xi.xi_prime = {mag * dir[0], mag * dir[1]};
  xi.xi_last = mag * dir[2];
  return xi;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir()) / name).string();
}

}  // namespace

nlohmann::json RunConfig::defaults() {
  return {
      {"profile", {{"kind", "monomial"}, {"gamma", 3.0}}},
      {"kernel", {{"harmonics", {{{"k", 1}, {"a", 1.0}, {"b", 0.0}}}}}},
      {"n", 2},
      {"alpha", 0.25},
      {"beta", 1.0},
      {"epsilon_safety", 0.5},
      {"tol", 1e-6},
      {"skip_tol", 2e-7},
      {"panel_cap", 4194304},
      {"seed", 12345},
      {"threads", 0},
      {"out", "out"},
      {"certify", {{"r_min", 1e-3}, {"r_max", 1e3}, {"n_samples", 10000}}},
      {"grid", {{"dims", {64, 64, 64}}, {"box_length", 16.0}}},
      {"lemma",
       {{"n_configs", 200},
        {"grid", {101, 101}},
        {"xi_max", 1e6},
        {"l_abs_max", 10},
        {"epsilon_scale", 1.0},
        {"classify_configs", 100},
        {"n_check", 9}}},
      {"multiplier",
       {{"axis", {0.0, 0.45, -0.45, 1.6, -1.6, 5.5, -5.5, 19.0, -19.0, 65.0}},
        {"tols", {1e-6, 1e-7}},
        {"l_window", {-8, 20}},
        {"stability_rel", 0.01},
        {"xi_zero_l_abs", 6}}},
      {"decay",
       {{"l_pos", {1, 10}},
        {"l_neg", {-10, -1}},
        {"slack", 10.0},
        {"frequencies_pos",
         {{1.0, 0.0, 1.0}, {2.0, -1.0, 0.5}, {0.5, 0.5, -2.0}, {3.0, 0.0, 0.0}, {1.0, 2.0, 4.0}}},
        {"frequencies_neg",
         {{1.0, 0.0, 0.0}, {2.0, -1.0, 0.0}, {0.5, 0.5, 0.0}, {3.0, 0.0, 0.0}, {1.0, 2.0, 0.0}}}}},
      {"envelope",
       {{"xi_min", 10.0},
        {"xi_max", 1e4},
        {"n_per_group", 13},
        {"slack", 10.0},
        {"radial_angle", 0.4},
        {"axial_xi_prime", 2.0}}},
      {"apply",
       {{"r_inner", 0.25},
        {"r_outer", 4.0},
        {"gaussian_width", 1.0},
        {"probes", default_probes()},
        {"quad_density", 32},
        {"rel_tol", 5e-2},
        {"smoke", true}}},
      {"sweep",
       {{"p_list", {1.5, 2.0, 3.0}},
        {"n_family", 20},
        {"l_window", {-6, 8}},
        {"grid", {{"dims", {32, 32, 32}}, {"box_length", 16.0}}},
        {"slack", 10.0},
        {"l1",
         {{"l_range", {0, 8}},
          {"grid", {{"dims", {24, 24, 24}}, {"box_length", 12.0}}},
          {"width", 2.5},
          {"n_family", 3}}},
        {"ladder",
         {{"dims", {32, 32, 4096}},
          {"box_length", 4.0},
          {"width", 1.0},
          {"carrier_exponents", {0, 1, 2, 3, 4, 5, 6, 7, 8}},
          {"direction", {0.0, 0.0, 1.0}},
          {"rel_threshold", 1e-4}}}}},
  };
}

RunConfig RunConfig::from_json(const nlohmann::json& user) {
  require(user.is_object() || user.is_null(), errc::parse_error,
          "run config must be a JSON object");
  nlohmann::json merged = defaults();
  if (user.is_object()) merged.merge_patch(user);
  return RunConfig(std::move(merged));
}

RunConfig RunConfig::from_file(const std::string& path) {
  nlohmann::json user = nlohmann::json::parse(read_text_file(path), nullptr, false);
  require(!user.is_discarded(), errc::parse_error, "config file is not valid JSON: " + path);
  return from_json(user);
}

std::string RunConfig::config_hash() const { return content_hash_hex(canonical_dump(cfg_)); }

RadialProfile RunConfig::profile() const { return RadialProfile::from_json(cfg_.at("profile")); }

KernelOmega RunConfig::kernel() const { return KernelOmega::from_json(cfg_.at("kernel")); }

OperatorParams RunConfig::params() const {
  return OperatorParams(cfg_.at("n").get<int>(), cfg_.at("alpha").get<double>(),
                        cfg_.at("beta").get<double>());
}

AdmissibilityCertificate RunConfig::certificate() const {
  const auto& c = cfg_.at("certify");
  return certify_admissibility(profile(), c.at("r_min").get<double>(),
                               c.at("r_max").get<double>(), c.at("n_samples").get<long>());
}

EpsilonConstants RunConfig::epsilons(const AdmissibilityCertificate& cert) const {
  return compute_epsilons(cert.k2_hat, cert.k3_hat, cfg_.at("beta").get<double>(),
                          cfg_.at("epsilon_safety").get<double>());
}

MlOptions RunConfig::ml_options() const {
  MlOptions opts;
  opts.tol = cfg_.at("tol").get<double>();
  opts.skip_tol = cfg_.at("skip_tol").get<double>();
  opts.panel_cap = cfg_.at("panel_cap").get<long>();
  return opts;
}

void RunConfig::override_value(const std::string& key_path, const std::string& value) {
  auto eq = key_path.find('=');
  std::string path = key_path, val = value;
  if (eq != std::string::npos && value.empty()) {
    path = key_path.substr(0, eq);
    val = key_path.substr(eq + 1);
  }
  std::string pointer = "/";
  for (char c : path) pointer += (c == '.') ? '/' : c;
  nlohmann::json parsed = nlohmann::json::parse(val, nullptr, false);
  if (parsed.is_discarded()) parsed = val;
  try {
    cfg_[nlohmann::json::json_pointer(pointer)] = parsed;
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, std::string("bad override \"") + key_path + "\": " + e.what());
  }
}

StudyResult run_profile_check(const RunConfig& cfg) {
  AdmissibilityCertificate cert = cfg.certificate();
  nlohmann::json j = cert.to_json();
  j["config_hash"] = cfg.config_hash();
  j["profile"] = cfg.json().at("profile");
  if (cert.admissible()) {
    EpsilonConstants eps = cfg.epsilons(cert);
    j["epsilons"] = eps.to_json();
  }
  write_json_file(out_path(cfg, "certificate.json"), j);
  StudyResult res;
  res.summary = j;
  res.exit_code = cert.admissible() ? 0 : 2;
  return res;
}

StudyResult run_lemma_check(const RunConfig& cfg) {
  const auto& lc = cfg.json().at("lemma");
  long n_configs = lc.at("n_configs").get<long>();
  require(n_configs >= 1, errc::invalid_argument, "lemma.n_configs must be at least 1");
  long n_classify = lc.at("classify_configs").get<long>();
  int n_r = lc.at("grid").at(0).get<int>(), n_theta = lc.at("grid").at(1).get<int>();
  double xi_max = lc.at("xi_max").get<double>();
  int l_abs = lc.at("l_abs_max").get<int>();

  AdmissibilityCertificate cert = cfg.certificate();
  if (!cert.admissible()) return {2, {{"error", "profile is not admissible"}}};
  EpsilonConstants eps = cfg.epsilons(cert);
  eps.epsilon *= lc.at("epsilon_scale").get<double>();
  RadialProfile profile = cfg.profile();
  OperatorParams params = cfg.params();

  Rng rng(cfg.seed());
  struct Draw {
    Frequency xi;
    int l;
  };
  std::vector<Draw> draws(n_configs);
  for (auto& d : draws) {
    d.xi = draw_frequency(rng, xi_max);
    d.l = int(rng.uniform_int(-l_abs, l_abs));
  }
  std::vector<LemmaReport> reports(n_configs);
  parallel_for(std::size_t(n_configs), cfg.threads(), [&](std::size_t i) {
    reports[i] = check_lemma_lower_bound(params, profile, draws[i].xi, draws[i].l, eps, n_r, n_theta);
  });

  long n_pass = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  {
    CsvWriter csv(out_path(cfg, "lemma_check.csv"),
                  {"idx", "xi1", "xi2", "xi_last", "l", "lambda", "epsilon", "min_ratio",
                   "worst_r", "worst_theta", "pass"});
    stamp(csv, cfg, &cert, &eps);
    for (long i = 0; i < n_configs; ++i) {
      const auto& r = reports[i];
      csv.field(i)
          .field(draws[i].xi.xi_prime[0])
          .field(draws[i].xi.xi_prime[1])
          .field(draws[i].xi.xi_last)
          .field(long(draws[i].l))
          .field(r.lambda)
          .field(r.epsilon)
          .field(r.min_ratio)
          .field(r.worst_r)
          .field(r.worst_theta)
          .field(long(r.pass));
      csv.end_row();
      n_pass += r.pass;
      min_ratio = std::min(min_ratio, r.min_ratio);
    }
  }

  // Patch classification sweep: one random patch per drawn configuration.
  long n_trivial = 0;
  std::map<std::string, long> histogram;
  {
    CsvWriter csv(out_path(cfg, "classify.csv"),
                  {"idx", "xi1", "xi2", "xi_last", "l", "j1", "j2", "case"});
    stamp(csv, cfg, &cert, &eps);
    int n_check = lc.at("n_check").get<int>();
    for (long i = 0; i < n_classify; ++i) {
      Frequency xi = draw_frequency(rng, xi_max);
      int l = int(rng.uniform_int(-l_abs, l_abs));
      double r = rng.uniform(0.5, 2.0);
      double theta = rng.uniform(0.0, pi);
      PatchIndex j = patch_at(eps, r, theta);
      CaseTag tag = classify_patch(params, profile, xi, l, j, eps, n_check);
      ++histogram[to_string(tag)];
      if (tag == CaseTag::trivial_bound) ++n_trivial;
      csv.field(i)
          .field(xi.xi_prime[0])
          .field(xi.xi_prime[1])
          .field(xi.xi_last)
          .field(long(l))
          .field(j.j1)
          .field(j.j2)
          .field(std::string(to_string(tag)));
      csv.end_row();
    }
  }

  StudyResult res;
  res.summary = base_summary(cfg);
  res.summary["lemma"] = {{"n_configs", n_configs},
                          {"n_pass", n_pass},
                          {"min_ratio", min_ratio},
                          {"epsilon", eps.epsilon}};
  nlohmann::json hist;
  for (const auto& [k, v] : histogram) hist[k] = v;
  res.summary["classify"] = {{"n_configs", n_classify}, {"n_trivial", n_trivial},
                             {"histogram", hist}};
  write_json_file(out_path(cfg, "lemma_summary.json"), res.summary);
  res.exit_code = (n_pass == n_configs && n_trivial == 0) ? 0 : 3;
  return res;
}

StudyResult run_multiplier(const RunConfig& cfg) {
  const auto& mc = cfg.json().at("multiplier");
  std::vector<double> axis = mc.at("axis").get<std::vector<double>>();
  std::vector<double> tols = mc.at("tols").get<std::vector<double>>();
  int l_lo = mc.at("l_window").at(0).get<int>(), l_hi = mc.at("l_window").at(1).get<int>();
  require(!axis.empty() && !tols.empty(), errc::invalid_argument, "empty multiplier lattice");

  AdmissibilityCertificate cert = cfg.certificate();
  if (!cert.admissible()) return {2, {{"error", "profile is not admissible"}}};
  EpsilonConstants eps = cfg.epsilons(cert);
  RadialProfile profile = cfg.profile();
  KernelOmega omega = cfg.kernel();
  OperatorParams params = cfg.params();

  std::vector<Frequency> lattice;
  for (double a : axis)
    for (double b : axis)
      for (double c : axis) {
        Frequency xi;
        xi.xi_prime = {a, b};
        xi.xi_last = c;
        lattice.push_back(xi);
      }

  CsvWriter csv(out_path(cfg, "multiplier.csv"),
                {"xi1", "xi2", "xi_last", "l", "re_ml", "im_ml", "abs_ml", "lambda", "tol",
                 "panels"});
  stamp(csv, cfg, &cert, &eps);

  std::vector<double> max_abs(tols.size(), 0.0), max_tail(tols.size(), 0.0);
  for (std::size_t t = 0; t < tols.size(); ++t) {
    MlOptions opts = cfg.ml_options();
    opts.tol = tols[t];
    std::vector<MTotalResult> totals(lattice.size());
    parallel_for(lattice.size(), cfg.threads(), [&](std::size_t i) {
      totals[i] = m_total(params, profile, omega, lattice[i], l_lo, l_hi, opts);
    });
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      const Frequency& xi = lattice[i];
      for (std::size_t p = 0; p < totals[i].pieces.size(); ++p) {
        const MlEval& piece = totals[i].pieces[p];
        csv.field(xi.xi_prime[0])
            .field(xi.xi_prime[1])
            .field(xi.xi_last)
            .field(long(l_lo) + long(p))
            .field(piece.value.real())
            .field(piece.value.imag())
            .field(std::abs(piece.value))
            .field(piece.lambda)
            .field(tols[t])
            .field(piece.panels);
        csv.end_row();
      }
      max_abs[t] = std::max(max_abs[t], std::abs(totals[i].value));
      max_tail[t] = std::max(max_tail[t], totals[i].tail_bound);
    }
  }

  double rel_change = 0.0;
  for (std::size_t t = 1; t < tols.size(); ++t)
    rel_change = std::max(rel_change, std::abs(max_abs[t] - max_abs[t - 1]) /
                                          std::max(max_abs[t], 1e-300));

  // Vanishing at xi = 0 through real quadrature of the polar form.
  int l_zero = mc.at("xi_zero_l_abs").get<int>();
  MlOptions zopts = cfg.ml_options();
  zopts.tol = 1e-8;
  zopts.method = MlOptions::Method::polar2d;
  double xi0_max = 0.0;
  for (int l = -l_zero; l <= l_zero; ++l)
    xi0_max = std::max(xi0_max, std::abs(m_l(params, profile, omega, Frequency{}, l, zopts).value));

  double stability_rel = mc.at("stability_rel").get<double>();
  bool pass = rel_change <= stability_rel && std::isfinite(max_abs.back()) &&
              xi0_max <= 10.0 * zopts.tol;

  StudyResult res;
  res.summary = base_summary(cfg);
  res.summary["max_abs_m_total"] = max_abs;
  res.summary["max_tail_bound"] = max_tail;
  res.summary["tols"] = tols;
  res.summary["rel_change"] = rel_change;
  res.summary["xi_zero_max_abs_ml"] = xi0_max;
  res.summary["pass"] = pass;
  write_json_file(out_path(cfg, "multiplier_summary.json"), res.summary);
  res.exit_code = pass ? 0 : 3;
  return res;
}

StudyResult run_decay(const RunConfig& cfg) {
  const auto& dc = cfg.json().at("decay");
  AdmissibilityCertificate cert = cfg.certificate();
  if (!cert.admissible()) return {2, {{"error", "profile is not admissible"}}};
  EpsilonConstants eps = cfg.epsilons(cert);
  RadialProfile profile = cfg.profile();
  KernelOmega omega = cfg.kernel();
  OperatorParams params = cfg.params();
  MlOptions opts = cfg.ml_options();
  double slack = dc.at("slack").get<double>();

  CsvWriter csv(out_path(cfg, "decay.csv"),
                {"xi1", "xi2", "xi_last", "l", "re_ml", "im_ml", "abs_ml", "lambda", "tol",
                 "panels"});
  stamp(csv, cfg, &cert, &eps);

  nlohmann::json fits = nlohmann::json::array();
  bool pass = true;
  auto run_window = [&](const nlohmann::json& freqs, int l0, int l1, const char* label) {
    for (const auto& fj : freqs) {
      Frequency xi = freq_from(fj);
      DecayFit fit = decay_fit(params, profile, omega, xi, l0, l1, opts);
      for (int l = l0; l <= l1; ++l) {
        MlEval piece = m_l(params, profile, omega, xi, l, opts);
        csv.field(xi.xi_prime[0])
            .field(xi.xi_prime[1])
            .field(xi.xi_last)
            .field(long(l))
            .field(piece.value.real())
            .field(piece.value.imag())
            .field(std::abs(piece.value))
            .field(piece.lambda)
            .field(opts.tol)
            .field(piece.panels);
        csv.end_row();
      }
      nlohmann::json f = fit.to_json();
      f["xi"] = fj;
      f["window"] = label;
      fits.push_back(f);
      pass = pass && fit.max_ratio_excess <= slack;
    }
  };
  run_window(dc.at("frequencies_pos"), dc.at("l_pos").at(0).get<int>(),
             dc.at("l_pos").at(1).get<int>(), "positive");
  run_window(dc.at("frequencies_neg"), dc.at("l_neg").at(0).get<int>(),
             dc.at("l_neg").at(1).get<int>(), "negative");

  StudyResult res;
  res.summary = base_summary(cfg);
  res.summary["fits"] = fits;
  res.summary["slack"] = slack;
  res.summary["pass"] = pass;
  write_json_file(out_path(cfg, "decay_summary.json"), res.summary);
  res.exit_code = pass ? 0 : 3;
  return res;
}

StudyResult run_sobolev_envelope(const RunConfig& cfg) {
  const auto& ec = cfg.json().at("envelope");
  AdmissibilityCertificate cert = cfg.certificate();
  if (!cert.admissible()) return {2, {{"error", "profile is not admissible"}}};
  EpsilonConstants eps = cfg.epsilons(cert);
  RadialProfile profile = cfg.profile();
  KernelOmega omega = cfg.kernel();
  OperatorParams params = cfg.params();
  MlOptions opts = cfg.ml_options();

  double xi_min = ec.at("xi_min").get<double>(), xi_max = ec.at("xi_max").get<double>();
  int n = ec.at("n_per_group").get<int>();
  double angle = ec.at("radial_angle").get<double>();
  double off = ec.at("axial_xi_prime").get<double>();
  double slack = ec.at("slack").get<double>();
  require(n >= 2 && xi_min > off, errc::invalid_argument, "bad envelope sampling parameters");

  std::vector<Frequency> samples;
  for (int i = 0; i < n; ++i) {
    double mag = xi_min * std::pow(xi_max / xi_min, double(i) / double(n - 1));
    Frequency radial;
    radial.xi_prime = {mag * std::cos(angle), mag * std::sin(angle)};
    radial.xi_last = 0.0;
    samples.push_back(radial);
    Frequency axial;
    axial.xi_prime = {off, 0.0};
    axial.xi_last = std::sqrt(mag * mag - off * off);
    samples.push_back(axial);
  }

  EnvelopeResult env = sobolev_envelope(params, profile, cert.k3_hat, omega, samples, opts);

  CsvWriter csv(out_path(cfg, "envelope.csv"),
                {"group", "xi1", "xi2", "xi_last", "xi_norm", "abs_m", "tail_bound", "bound_rhs"});
  stamp(csv, cfg, &cert, &eps);
  for (const EnvelopeGroup* g : {&env.radial, &env.axial}) {
    for (const auto& s : g->samples) {
      csv.field(g->name)
          .field(s.xi.xi_prime[0])
          .field(s.xi.xi_prime[1])
          .field(s.xi.xi_last)
          .field(s.xi_norm)
          .field(s.abs_m)
          .field(s.tail_bound)
          .field(g->bound_constant * std::pow(s.xi_norm, g->predicted_exponent));
      csv.end_row();
    }
  }

  bool pass = env.radial.pass(slack) && env.axial.pass(slack);
  StudyResult res;
  res.summary = base_summary(cfg);
  for (const EnvelopeGroup* g : {&env.radial, &env.axial}) {
    res.summary[g->name] = {{"predicted_exponent", g->predicted_exponent},
                            {"fitted_exponent", g->fitted_exponent},
                            {"bound_constant", g->bound_constant},
                            {"max_ratio_vs_bound", g->max_ratio_vs_bound},
                            {"n_samples", g->samples.size()}};
  }
  res.summary["slack"] = slack;
  res.summary["pass"] = pass;
  write_json_file(out_path(cfg, "envelope_summary.json"), res.summary);
  res.exit_code = pass ? 0 : 3;
  return res;
}

namespace {

struct ProbeComparison {
  double max_rel = 0.0;
  nlohmann::json rows = nlohmann::json::array();
};

ProbeComparison compare_at_probes(const GridFunction& spectral,
                                  const std::vector<std::array<double, 3>>& probes,
                                  const std::vector<cplx>& direct) {
  ProbeComparison out;
  double dmax = 0.0;
  for (const cplx& d : direct) dmax = std::max(dmax, std::abs(d));
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const auto& x = probes[p];
    std::array<long, 3> idx;
    for (int a = 0; a < 3; ++a) {
      double pos = (x[a] + 0.5 * spectral.box_length()) / spectral.spacing(a);
      idx[a] = long(std::llround(pos));
      require(std::abs(pos - double(idx[a])) < 1e-9, errc::invalid_argument,
              "probe points must be grid points");
    }
    cplx s = spectral.samples()[spectral.index(idx[0], idx[1], idx[2])];
    double rel = std::abs(s - direct[p]) / std::max(dmax, 1e-300);
    out.max_rel = std::max(out.max_rel, rel);
    out.rows.push_back({{"x", x},
                        {"spectral", {s.real(), s.imag()}},
                        {"direct", {direct[p].real(), direct[p].imag()}},
                        {"rel", rel}});
  }
  return out;
}

}  // namespace

StudyResult run_apply(const RunConfig& cfg) {
  const auto& ac = cfg.json().at("apply");
  AdmissibilityCertificate cert = cfg.certificate();
  if (!cert.admissible()) return {2, {{"error", "profile is not admissible"}}};
  EpsilonConstants eps = cfg.epsilons(cert);
  RadialProfile profile = cfg.profile();
  KernelOmega omega = cfg.kernel();
  OperatorParams params = cfg.params();
  MlOptions opts = cfg.ml_options();
  opts.tol = std::min(opts.tol, 1e-7);

  double r_inner = ac.at("r_inner").get<double>(), r_outer = ac.at("r_outer").get<double>();
  auto [l_lo, l_hi] = window_for_truncation(r_inner, r_outer);
  double width = ac.at("gaussian_width").get<double>();
  int quad_density = ac.at("quad_density").get<int>();
  double rel_tol = ac.at("rel_tol").get<double>();

  std::vector<std::array<double, 3>> probes;
  for (const auto& pj : ac.at("probes"))
    probes.push_back({pj.at(0).get<double>(), pj.at(1).get<double>(), pj.at(2).get<double>()});

  auto dims_j = cfg.json().at("grid").at("dims");
  std::array<long, 3> dims{dims_j.at(0).get<long>(), dims_j.at(1).get<long>(),
                           dims_j.at(2).get<long>()};
  double box = cfg.json().at("grid").at("box_length").get<double>();

  // Full-table spectral path on the configured grid.
  TableConfig tc;
  tc.l_min = l_lo;
  tc.l_max = l_hi;
  tc.ml = opts;
  tc.threads = cfg.threads();
  tc.cache_path = out_path(cfg, "cache/oscm_" + cfg.config_hash().substr(0, 16) + ".bin");
  auto table = build_multiplier_table(params, profile, omega, dims, box, tc);

  double inv_w2 = 1.0 / (width * width);
  auto f3 = [&](double x, double y, double z) -> cplx {
    return std::exp(-pi * (x * x + y * y + z * z) * inv_w2);
  };
  GridFunction f(dims, box);
  f.fill(f3);
  SpectralDiagnostics diag;
  GridFunction rf = apply_spectral(f, *table, &diag);
  std::vector<cplx> direct = apply_direct(f3, probes, params, profile, omega, l_lo, l_hi,
                                          quad_density, opts.panel_cap);
  ProbeComparison main_cmp = compare_at_probes(rf, probes, direct);

  {
    CsvWriter csv(out_path(cfg, "apply.csv"),
                  {"x1", "x2", "x3", "re_spectral", "im_spectral", "re_direct", "im_direct",
                   "rel"});
    stamp(csv, cfg, &cert, &eps);
    for (const auto& row : main_cmp.rows) {
      csv.field(row.at("x").at(0).get<double>())
          .field(row.at("x").at(1).get<double>())
          .field(row.at("x").at(2).get<double>())
          .field(row.at("spectral").at(0).get<double>())
          .field(row.at("spectral").at(1).get<double>())
          .field(row.at("direct").at(0).get<double>())
          .field(row.at("direct").at(1).get<double>())
          .field(row.at("rel").get<double>());
      csv.end_row();
    }
  }

  // Reduced smoke run (x2-invariant data) at two resolutions: the
  // discretization error must shrink when the grid is refined.
  bool smoke_ok = true;
  nlohmann::json smoke_json;
  if (ac.at("smoke").get<bool>()) {
    auto f2 = [&](double x, double, double z) -> cplx {
      return std::exp(-pi * (x * x + z * z) * inv_w2);
    };
    std::vector<std::array<double, 3>> smoke_probes = {
        {0.0, 0.0, 0.0}, {0.5, 0.0, 0.25}, {-0.75, 0.0, 0.5}, {1.0, 0.0, -0.5}};
    std::vector<cplx> smoke_direct = apply_direct(f2, smoke_probes, params, profile, omega, l_lo,
                                                  l_hi, quad_density, opts.panel_cap);
    std::array<double, 2> rels{};
    for (int level = 0; level < 2; ++level) {
      long n = dims[0] << level;
      GridFunction g({n, 8, n}, box);
      g.fill(f2);
      GridFunction rg = apply_spectral_masked(g, params, profile, omega, l_lo, l_hi, opts, 1e-10,
                                              cfg.threads());
      rels[level] = compare_at_probes(rg, smoke_probes, smoke_direct).max_rel;
    }
    smoke_ok = rels[1] <= rels[0];
    smoke_json = {{"rel_coarse", rels[0]}, {"rel_fine", rels[1]}, {"decreases", smoke_ok}};
  }

  bool pass = main_cmp.max_rel <= rel_tol && smoke_ok;
  StudyResult res;
  res.summary = base_summary(cfg);
  res.summary["max_rel"] = main_cmp.max_rel;
  res.summary["rel_tol"] = rel_tol;
  res.summary["leakage"] = diag.leakage;
  res.summary["table_hash"] = table->content_hash;
  res.summary["table_max_abs"] = table->max_abs;
  res.summary["smoke"] = smoke_json;
  res.summary["pass"] = pass;
  write_json_file(out_path(cfg, "apply_summary.json"), res.summary);
  res.exit_code = pass ? 0 : 3;
  return res;
}

StudyResult run_sweep(const RunConfig& cfg) {
  const auto& sc = cfg.json().at("sweep");
  std::vector<double> p_list = sc.at("p_list").get<std::vector<double>>();
  for (double p : p_list)
    require(p >= 1.05 && p <= 16.0, errc::invalid_argument, "p values must lie in [1.05, 16]");
  double slack = sc.at("slack").get<double>();

  AdmissibilityCertificate cert = cfg.certificate();
  if (!cert.admissible()) return {2, {{"error", "profile is not admissible"}}};
  EpsilonConstants eps = cfg.epsilons(cert);
  RadialProfile profile = cfg.profile();
  KernelOmega omega = cfg.kernel();
  OperatorParams params = cfg.params();
  MlOptions opts = cfg.ml_options();
  Rng rng(cfg.seed());

  StudyResult res;
  res.summary = base_summary(cfg);
  bool pass = true;

  // L^p ratios over a family of modulated Gaussians.
  {
    auto dims_j = sc.at("grid").at("dims");
    std::array<long, 3> dims{dims_j.at(0).get<long>(), dims_j.at(1).get<long>(),
                             dims_j.at(2).get<long>()};
    double box = sc.at("grid").at("box_length").get<double>();
    TableConfig tc;
    tc.l_min = sc.at("l_window").at(0).get<int>();
    tc.l_max = sc.at("l_window").at(1).get<int>();
    tc.ml = opts;
    tc.threads = cfg.threads();
    tc.cache_path = out_path(cfg, "cache/oscm_sweep_" + cfg.config_hash().substr(0, 16) + ".bin");
    auto table = build_multiplier_table(params, profile, omega, dims, box, tc);

    int n_family = sc.at("n_family").get<int>();
    std::map<double, double> max_ratio;
    bool plancherel_ok = true;
    CsvWriter csv(out_path(cfg, "lp_sweep.csv"), {"family_idx", "p", "ratio"});
    stamp(csv, cfg, &cert, &eps);
    for (int i = 0; i < n_family; ++i) {
      double w = rng.uniform(2.0, 3.0);
      std::array<double, 3> carrier{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8),
                                    rng.uniform(-0.8, 0.8)};
      std::array<double, 3> center{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                                   rng.uniform(-2.0, 2.0)};
      GridFunction f = modulated_gaussian(dims, box, w, carrier, center);
      GridFunction rf = apply_spectral(f, *table);
      double f2 = lp_norm(f, 2.0), rf2 = lp_norm(rf, 2.0);
      plancherel_ok = plancherel_ok && rf2 <= table->max_abs * f2 * (1.0 + 1e-10);
      for (double p : p_list) {
        double ratio = lp_norm(rf, p) / lp_norm(f, p);
        max_ratio[p] = std::max(max_ratio[p], ratio);
        csv.field(long(i)).field(p).field(ratio);
        csv.end_row();
      }
    }
    double ratio2 = max_ratio.count(2.0) ? max_ratio[2.0]
                                         : table->max_abs;  // p = 2 controlled by Plancherel
    bool lp_ok = true;
    for (const auto& [p, r] : max_ratio) lp_ok = lp_ok && r <= slack * ratio2;
    pass = pass && lp_ok && plancherel_ok;
    nlohmann::json ratios;
    for (const auto& [p, r] : max_ratio) ratios[format_double(p)] = r;
    res.summary["lp"] = {{"max_ratio", ratios},
                         {"ratio_p2", ratio2},
                         {"plancherel_ok", plancherel_ok},
                         {"table_max_abs", table->max_abs},
                         {"pass", lp_ok && plancherel_ok}};
  }

  // Dyadic-piece L1 ratios: ||R_l f||_1 <= C 2^(alpha l) ||f||_1.
  {
    const auto& l1 = sc.at("l1");
    auto dims_j = l1.at("grid").at("dims");
    std::array<long, 3> dims{dims_j.at(0).get<long>(), dims_j.at(1).get<long>(),
                             dims_j.at(2).get<long>()};
    double box = l1.at("grid").at("box_length").get<double>();
    int l0 = l1.at("l_range").at(0).get<int>(), l1v = l1.at("l_range").at(1).get<int>();
    double w = l1.at("width").get<double>();
    int n_family = l1.at("n_family").get<int>();

    std::vector<GridFunction> family;
    for (int i = 0; i < n_family; ++i) {
      std::array<double, 3> carrier{rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4),
                                    rng.uniform(-0.4, 0.4)};
      family.push_back(modulated_gaussian(dims, box, w, carrier));
    }
    CsvWriter csv(out_path(cfg, "l1_dyadic.csv"), {"l", "ratio"});
    stamp(csv, cfg, &cert, &eps);
    std::vector<double> ratios;
    for (int l = l0; l <= l1v; ++l) {
      TableConfig tc;
      tc.l_min = l;
      tc.l_max = l;
      tc.ml = opts;
      tc.threads = cfg.threads();
      auto table = build_multiplier_table(params, profile, omega, dims, box, tc);
      double ratio = 0.0;
      for (const GridFunction& f : family) {
        GridFunction rf = apply_spectral(f, *table);
        ratio = std::max(ratio, lp_norm(rf, 1.0) /
                                    (std::pow(2.0, params.alpha * l) * lp_norm(f, 1.0)));
      }
      ratios.push_back(ratio);
      csv.field(long(l)).field(ratio);
      csv.end_row();
    }
    double base = ratios.front();
    double mx = *std::max_element(ratios.begin(), ratios.end());
    bool l1_ok = mx <= slack * base;
    pass = pass && l1_ok;
    res.summary["l1_dyadic"] = {{"ratios", ratios}, {"base", base}, {"pass", l1_ok}};
  }

  // Smoothing ladder at the certified order.
  {
    const auto& lad = sc.at("ladder");
    auto dims_j = lad.at("dims");
    std::array<long, 3> dims{dims_j.at(0).get<long>(), dims_j.at(1).get<long>(),
                             dims_j.at(2).get<long>()};
    double box = lad.at("box_length").get<double>();
    double w = lad.at("width").get<double>();
    auto dir_j = lad.at("direction");
    std::array<double, 3> dir{dir_j.at(0).get<double>(), dir_j.at(1).get<double>(),
                              dir_j.at(2).get<double>()};
    std::vector<double> carriers;
    for (const auto& e : lad.at("carrier_exponents"))
      carriers.push_back(std::pow(2.0, e.get<double>()));
    double s = params.smoothing_order(cert.k3_hat);
    SmoothingLadderResult ladder = sobolev_smoothing_check(
        params, profile, omega, dims, box, w, carriers, dir, s, opts,
        lad.at("rel_threshold").get<double>(), slack, cfg.threads());
    CsvWriter csv(out_path(cfg, "smoothing_ladder.csv"), {"carrier", "ratio"});
    stamp(csv, cfg, &cert, &eps);
    for (std::size_t i = 0; i < ladder.carriers.size(); ++i) {
      csv.field(ladder.carriers[i]).field(ladder.ratios[i]);
      csv.end_row();
    }
    pass = pass && ladder.pass;
    res.summary["ladder"] = {{"s", s},
                             {"carriers", ladder.carriers},
                             {"ratios", ladder.ratios},
                             {"pass", ladder.pass}};
  }

  res.summary["pass"] = pass;
  write_json_file(out_path(cfg, "sweep_summary.json"), res.summary);
  res.exit_code = pass ? 0 : 3;
  return res;
}

StudyResult run_command(const std::string& command, const RunConfig& cfg) {
  try {
    if (command == "profile-check") return run_profile_check(cfg);
    if (command == "lemma-check") return run_lemma_check(cfg);
    if (command == "multiplier") return run_multiplier(cfg);
    if (command == "decay") return run_decay(cfg);
    if (command == "sobolev-envelope") return run_sobolev_envelope(cfg);
    if (command == "apply") return run_apply(cfg);
    if (command == "sweep") return run_sweep(cfg);
    return {1, {{"error", "unknown command \"" + command + "\""}}};
  } catch (const Error& e) {
    int code = 1;
    if (e.code() == errc::budget_exceeded) code = 4;
    return {code, {{"error", e.what()}}};
  } catch (const std::exception& e) {
    return {1, {{"error", e.what()}}};
  }
}

}  // namespace osclab

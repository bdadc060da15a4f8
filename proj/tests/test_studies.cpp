#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "osclab/io.hpp"
#include "osclab/studies.hpp"

using namespace osclab;

namespace {

std::string tmp_dir(const char* name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

}  // namespace

TEST_CASE("config merge and overrides") {
  RunConfig cfg = RunConfig::from_json({{"alpha", 0.4}});
  CHECK(cfg.json().at("alpha").get<double>() == doctest::Approx(0.4));
  CHECK(cfg.json().at("beta").get<double>() == doctest::Approx(1.0));  // default survives
  std::string h1 = cfg.config_hash();
  cfg.override_value("lemma.n_configs=7", "");
  CHECK(cfg.json().at("lemma").at("n_configs").get<int>() == 7);
  CHECK(cfg.config_hash() != h1);
  cfg.override_value("profile.kind", "exp_sinh");
  CHECK(cfg.json().at("profile").at("kind").get<std::string>() == "exp_sinh");

  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::array({1, 2})), Error);
}

TEST_CASE("config hash is stable and content-sensitive") {
  RunConfig a = RunConfig::from_json({});
  RunConfig b = RunConfig::from_json({});
  CHECK(a.config_hash() == b.config_hash());
  RunConfig c = RunConfig::from_json({{"seed", 999}});
  CHECK(a.config_hash() != c.config_hash());
  CHECK(a.config_hash().size() == 64);
}

TEST_CASE("profile-check writes a certificate and reports admissibility") {
  std::string out = tmp_dir("osclab_study_pc");
  RunConfig cfg = RunConfig::from_json({{"out", out}, {"certify", {{"n_samples", 2000}}}});
  StudyResult res = run_profile_check(cfg);
  CHECK(res.exit_code == 0);
  CHECK(res.summary.at("k1_hat").get<double>() == doctest::Approx(2.0));
  CHECK(std::filesystem::exists(out + "/certificate.json"));

  RunConfig bad = RunConfig::from_json(
      {{"out", out}, {"profile", {{"kind", "monomial"}, {"gamma", 0.5}}}});
  CHECK(run_profile_check(bad).exit_code == 2);
}

TEST_CASE("lemma study: inflated threshold trips the failure exit") {
  std::string out = tmp_dir("osclab_study_lemma");
  nlohmann::json base = {{"out", out},
                         {"certify", {{"n_samples", 2000}}},
                         {"lemma",
                          {{"n_configs", 10}, {"classify_configs", 5}, {"grid", {31, 31}}}}};
  StudyResult ok = run_command("lemma-check", RunConfig::from_json(base));
  CHECK(ok.exit_code == 0);

  base["lemma"]["epsilon_scale"] = 10.0;
  StudyResult broken = run_command("lemma-check", RunConfig::from_json(base));
  CHECK(broken.exit_code == 3);
}

TEST_CASE("runner maps argument errors to exit 1") {
  std::string out = tmp_dir("osclab_study_err");
  nlohmann::json j = {{"out", out}, {"lemma", {{"n_configs", 0}}}};
  CHECK(run_command("lemma-check", RunConfig::from_json(j)).exit_code == 1);
  CHECK(run_command("unknown-study", RunConfig::from_json({{"out", out}})).exit_code == 1);

  nlohmann::json sweep_bad = {{"out", out}, {"sweep", {{"p_list", {0.5}}}}};
  CHECK(run_command("sweep", RunConfig::from_json(sweep_bad)).exit_code == 1);
}

TEST_CASE("decay study on a reduced window is deterministic byte-for-byte") {
  nlohmann::json small = {
      {"tol", 1e-7},
      {"certify", {{"n_samples", 2000}}},
      {"decay",
       {{"l_pos", {1, 6}},
        {"l_neg", {-6, -1}},
        {"frequencies_pos", {{1.0, 0.0, 1.0}}},
        {"frequencies_neg", {{1.0, 0.0, 0.0}}}}}};

  std::string out1 = tmp_dir("osclab_decay_a");
  std::string out2 = tmp_dir("osclab_decay_b");
  small["out"] = out1;
  StudyResult r1 = run_command("decay", RunConfig::from_json(small));
  small["out"] = out2;
  StudyResult r2 = run_command("decay", RunConfig::from_json(small));
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(read_text_file(out1 + "/decay.csv") == read_text_file(out2 + "/decay.csv"));
  // Different seed leaves deterministic outputs but a changed hash line.
  small["out"] = out1;
  small["seed"] = 777;
  run_command("decay", RunConfig::from_json(small));
  CHECK(read_text_file(out1 + "/decay.csv") != read_text_file(out2 + "/decay.csv"));
}

TEST_CASE("csv writer format") {
  std::string out = tmp_dir("osclab_csv");
  {
    CsvWriter csv(out + "/t.csv", {"a", "b"});
    csv.meta("key", "value");
    csv.field(1.5).field(long(2));
    csv.end_row();
  }
  std::string text = read_text_file(out + "/t.csv");
  CHECK(text == "# key=value\na,b\n1.5,2\n");
}

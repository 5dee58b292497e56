#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "epu/error.hpp"
#include "epu/pipeline.hpp"
#include "epu/synth.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / ("epu_pipeline_test_" + std::to_string(::getpid()));
    fs::remove_all(root_);
    epu::SynthSpec spec;
    for (epu::Month m(2015, 1); m <= epu::Month(2016, 12); m = m.next()) spec.months.push_back(m);
    spec.base_docs_per_month = 80;
    spec.shock_months = {{epu::Month(2015, 6), 0.5}, {epu::Month(2016, 2), 1.0}};
    epu::write_synthetic(root_ / "syn", epu::generate_synthetic(spec));
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  static epu::RunConfig config(const std::string& out) {
    epu::RunConfig c;
    c.corpus = root_ / "syn" / "corpus.jsonl";
    c.embeddings = root_ / "syn" / "embeddings.txt";
    c.keywords = root_ / "syn" / "keywords.txt";
    c.targets = root_ / "syn" / "quarterly_wui.csv";
    c.output_dir = root_ / out;
    c.prune.min_tf = 10;
    c.kmax = 4;
    return c;
  }

  static inline fs::path root_;
};

}  // namespace

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(epu::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(epu::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_F(PipelineTest, AllWritesFourSeriesAndManifest) {
  auto r = epu::run_pipeline(config("all"), epu::Pipeline::All);
  ASSERT_EQ(r.exit_code, 0) << r.message;
  for (const char* f : {"epu.csv", "bbd.csv", "braun.csv", "wui.csv", "mse_curve.csv", "manifest.json"})
    EXPECT_TRUE(fs::exists(root_ / "all" / f)) << f;
  auto m = nlohmann::json::parse(slurp(root_ / "all" / "manifest.json"));
  EXPECT_EQ(m["status"], "ok");
  EXPECT_EQ(m["config_hash"].get<std::string>().size(), 64u);
  EXPECT_EQ(m["inputs"]["corpus"]["sha256"], epu::sha256_file(root_ / "syn" / "corpus.jsonl"));
  EXPECT_GE(m["stages"].size(), 5u);
  for (const auto& s : m["stages"]) EXPECT_GE(s["seconds"].get<double>(), 0.0);
  EXPECT_EQ(slurp(root_ / "all" / "epu.csv").substr(0, 24), "month,value,stage,label\n");
}

TEST_F(PipelineTest, RerunIsByteIdentical) {
  auto a = config("rerun_a");
  auto b = config("rerun_b");
  b.threads = 3;
  ASSERT_EQ(epu::run_pipeline(a, epu::Pipeline::All).exit_code, 0);
  ASSERT_EQ(epu::run_pipeline(b, epu::Pipeline::All).exit_code, 0);
  for (const char* f : {"epu.csv", "bbd.csv", "braun.csv", "wui.csv", "mse_curve.csv"})
    EXPECT_EQ(slurp(root_ / "rerun_a" / f), slurp(root_ / "rerun_b" / f)) << f;
}

TEST_F(PipelineTest, InvalidTMinFailsBeforeWork) {
  auto c = config("bad_tmin");
  c.t_min = 1.5;
  EXPECT_THROW(c.validate(epu::Pipeline::Epu), epu::ConfigError);
  auto r = epu::run_pipeline(c, epu::Pipeline::Epu);
  EXPECT_NE(r.exit_code, 0);
  EXPECT_EQ(r.failed_stage, "config");
  EXPECT_FALSE(fs::exists(root_ / "bad_tmin" / "epu.csv"));
  EXPECT_FALSE(fs::exists(root_ / "bad_tmin" / "epu.csv.partial"));
  auto m = nlohmann::json::parse(slurp(root_ / "bad_tmin" / "manifest.json"));
  EXPECT_EQ(m["failed_stage"], "config");
  EXPECT_EQ(m["stages"].size(), 1u);
}

TEST_F(PipelineTest, ConfigValidation) {
  auto c = config("v");
  c.seeds[1] = "";
  EXPECT_THROW(c.validate(epu::Pipeline::Epu), epu::ConfigError);
  c = config("v");
  c.embeddings = root_ / "missing.txt";
  EXPECT_THROW(c.validate(epu::Pipeline::Epu), epu::ConfigError);
  EXPECT_NO_THROW(c.validate(epu::Pipeline::Bbd));
  c = config("v");
  c.date_from = epu::Month(2016, 1);
  c.date_to = epu::Month(2015, 1);
  EXPECT_THROW(c.validate(epu::Pipeline::Bbd), epu::ConfigError);
}

TEST_F(PipelineTest, StageFailureLeavesPartialsAndNamesStage) {
  auto c = config("fail");
  c.prune.min_tf = 1000000000;  // empties the WUI vocabulary
  auto r = epu::run_pipeline(c, epu::Pipeline::All);
  EXPECT_NE(r.exit_code, 0);
  EXPECT_EQ(r.failed_stage, "wui");
  EXPECT_TRUE(fs::exists(root_ / "fail" / "epu.csv.partial"));
  EXPECT_FALSE(fs::exists(root_ / "fail" / "epu.csv"));
  auto m = nlohmann::json::parse(slurp(root_ / "fail" / "manifest.json"));
  EXPECT_EQ(m["status"], "failed");
  EXPECT_EQ(m["failed_stage"], "wui");
}

TEST_F(PipelineTest, DateRangeRestrictsSeries) {
  auto c = config("range");
  c.date_from = epu::Month(2015, 4);
  c.date_to = epu::Month(2016, 3);
  ASSERT_EQ(epu::run_pipeline(c, epu::Pipeline::Bbd).exit_code, 0);
  auto s = epu::read_series_csv(root_ / "range" / "bbd.csv");
  EXPECT_EQ(s.values.size(), 12u);
  EXPECT_EQ(s.values.begin()->first, epu::Month(2015, 4));
}

TEST(ScoreDump, Format) {
  epu::Corpus c;
  c.documents.resize(1);
  c.documents[0].id = "d1";
  std::vector<epu::DocumentScore> scores{{{1, 1, 1}, 1.25}};
  std::ostringstream out;
  epu::write_score_dump(out, c, scores);
  EXPECT_EQ(out.str(), "doc_id,alpha,beta,gamma,score\nd1,1,1,1,1.25\n");
}

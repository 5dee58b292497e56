#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "epu/baselines.hpp"
#include "epu/corpus.hpp"
#include "epu/embeddings.hpp"
#include "epu/pls.hpp"
#include "epu/scoring.hpp"
#include "epu/series.hpp"

namespace epu {

struct EpuOptions {
  std::array<std::string, 3> seeds{"economy", "policy", "uncertainty"};
  double t_min = kDefaultTMin;
  std::optional<MonthRange> range;
  StandardizeOptions standardize;
  int threads = 0;
};

struct EpuResult {
  std::vector<DocumentScore> scores;  // indexed like corpus.documents
  MonthlySeries normalized;
  MonthlySeries standardized;
};

/// Scores every document, sums per month, divides by the monthly article
/// count and standardizes.
EpuResult compute_epu_index(const Corpus& corpus, const EmbeddingTable& table, const EpuOptions& options);

/// CSV `doc_id,alpha,beta,gamma,score`.
void write_score_dump(std::ostream& out, const Corpus& corpus, const std::vector<DocumentScore>& scores);

enum class Pipeline { Epu, Bbd, Braun, Wui, All };
std::optional<Pipeline> parse_pipeline(std::string_view s);

struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path embeddings;
  std::filesystem::path keywords;
  std::filesystem::path targets;  // quarterly WUI CSV
  std::filesystem::path stop_words;
  std::filesystem::path output_dir = "out";
  std::array<std::string, 3> seeds{"economy", "policy", "uncertainty"};
  double t_min = kDefaultTMin;
  std::optional<Month> date_from;
  std::optional<Month> date_to;  // inclusive
  PruneConfig prune;
  int kmax = 15;
  MseMode mse = MseMode::LeaveOneOut;
  bool scale_x = false;
  BraunOptions braun;
  std::uint64_t seed = 42;
  int threads = 0;

  /// Throws ConfigError for out-of-range values or missing inputs that the
  /// selected pipeline needs.
  void validate(Pipeline which) const;

  /// Flat "key = value" lines in a fixed order; hashed into the manifest.
  std::string serialize() const;

  IngestOptions ingest_options() const;
  std::optional<MonthRange> month_range() const;
};

struct RunResult {
  int exit_code = 0;
  std::string failed_stage;
  std::string message;
  std::vector<std::filesystem::path> outputs;
  std::filesystem::path manifest;
};

/// Runs the requested pipelines and writes series CSVs plus manifest.json into
/// config.output_dir. Series are written as "<name>.partial" and renamed only
/// when every stage succeeds. The manifest is written on failure too.
RunResult run_pipeline(const RunConfig& config, Pipeline which);

/// Hex SHA-256 of a file's bytes, or of a string.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view data);

}  // namespace epu

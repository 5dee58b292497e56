#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "epu/month.hpp"
#include "epu/tokenizer.hpp"

namespace epu {

struct Document {
  std::string id;
  UnixSeconds published_at = 0;
  std::string title;
  std::string body;
  std::string topic;  // optional topic label, empty when the source has none
  std::vector<std::string> tokens;

  Month month() const { return month_of(published_at); }
};

/// Counts over a corpus. Merging is associative and commutative, so partial
/// stats from any partitioning of the documents combine to the same result.
struct CorpusStats {
  std::uint64_t total_docs = 0;
  std::unordered_map<std::string, std::uint64_t> doc_freq;
  std::unordered_map<std::string, std::uint64_t> term_freq;
  std::map<Month, std::uint64_t> docs_per_month;

  void add(const Document& doc);
  void merge(const CorpusStats& other);

  bool operator==(const CorpusStats&) const = default;
};

CorpusStats compute_stats(std::span<const Document> docs, int threads = 0);

struct Corpus {
  std::vector<Document> documents;
  CorpusStats stats;
};

struct Diagnostic {
  std::size_t line = 0;  // 1-based; 0 when not tied to a line
  std::string message;
};

struct IngestOptions {
  TokenizerConfig tokenizer;
  std::optional<UnixSeconds> from;  // inclusive
  std::optional<UnixSeconds> to;    // exclusive
  int threads = 0;                  // 0 = OpenMP default
};

struct IngestResult {
  Corpus corpus;
  std::size_t rejected = 0;
  std::vector<Diagnostic> diagnostics;
};

/// Parses one JSON-lines record ({"id","published_at","title","body"[,"topic"]
/// [,"tokens"]}). Returns nullopt and fills `error` for malformed input.
std::optional<Document> parse_record(std::string_view line, std::string* error = nullptr);

/// Serializes a document as one JSON line (no trailing newline).
std::string to_record(const Document& doc, bool with_tokens);

/// Reads line-delimited records. Malformed lines, out-of-range timestamps and
/// duplicate ids (first occurrence wins) are rejected with a diagnostic.
IngestResult ingest(std::istream& in, const IngestOptions& options = {});

/// Throws IoError when the file cannot be opened.
IngestResult ingest_file(const std::filesystem::path& path, const IngestOptions& options = {});

/// Document store layout: <dir>/documents.jsonl (records with tokens) and
/// <dir>/stats.json.
void write_store(const std::filesystem::path& dir, const Corpus& corpus);
Corpus load_store(const std::filesystem::path& dir);

/// Accepts either a store directory or a raw records file.
Corpus load_corpus(const std::filesystem::path& path, const IngestOptions& options = {});

std::string stats_to_json(const CorpusStats& stats);

struct PruneConfig {
  double max_df_ratio = 0.6;
  std::uint64_t min_tf = 9000;
};

/// Words with doc_freq/total_docs <= max_df_ratio and term_freq >= min_tf,
/// sorted. Throws ConfigError when max_df_ratio is outside (0, 1].
std::vector<std::string> prune_vocabulary(const CorpusStats& stats, const PruneConfig& config);

}  // namespace epu

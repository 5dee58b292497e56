#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "epu/baselines.hpp"
#include "epu/corpus.hpp"
#include "epu/embeddings.hpp"
#include "epu/month.hpp"

namespace epu {

/// Word pools of the synthetic language. Concept-near words have a planted
/// cosine in [near_min_sim, near_max_sim] to their seed; weak words sit in
/// [weak_min_sim, weak_max_sim], below the default gate.
struct SynthVocabulary {
  std::array<std::string, 3> seeds{"economy", "policy", "uncertainty"};
  int near_words_per_concept = 12;
  int weak_words_per_concept = 6;
  int background_words = 2000;
  double near_min_sim = 0.55;
  double near_max_sim = 0.95;
  double weak_min_sim = 0.2;
  double weak_max_sim = 0.45;
  double seed_word_weight = 0.5;  // chance a concept mention uses the seed word itself
};

struct SynthSpec {
  std::vector<Month> months;
  int base_docs_per_month = 200;
  std::map<Month, double> shock_months;  // intensity in [0, 1]
  SynthVocabulary vocabulary;
  std::uint64_t seed = 42;

  int doc_length = 50;               // mean tokens per document
  double dense_fraction = 0.25;      // concept-dense share of a month at intensity 1
  double base_dense_rate = 0.0;      // concept-dense share at intensity 0
  double single_mention_rate = 0.3;  // filler docs naming one concept
  double near_miss_rate = 0.1;       // filler docs naming two concepts plus a weak third
  double uncertainty_emphasis = 3.0; // amplitude of the monthly repetition path of the uncertainty seed
  double wui_scale = 0.01;
  double wui_noise = 0.05;           // relative noise on quarterly WUI targets
  int embedding_dim = 32;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

/// Reads a JSON spec: {"months": ["2015-01", ...]} or {"start": "2015-01",
/// "end": "2018-12"}, "shock_months": {"2016-03": 1.0}, plus any SynthSpec
/// field by name.
SynthSpec parse_synth_spec(const std::string& json_text);
SynthSpec load_synth_spec(const std::filesystem::path& path);

struct MonthTruth {
  double intensity = 0.0;
  int total_docs = 0;
  int dense_docs = 0;              // planted concept-dense documents
  double uncertainty_count = 0.0;  // occurrences of the uncertainty seed word
};

struct SynthCorpus {
  std::vector<Document> documents;  // untokenized records
  std::map<Month, MonthTruth> truth;
  std::map<Quarter, double> quarterly_wui;
  EmbeddingTable embeddings;
  KeywordSets keywords;
  std::array<std::vector<std::string>, 3> near_words;
  std::array<std::vector<std::string>, 3> weak_words;
};

/// Deterministic for a fixed spec, including the seed.
SynthCorpus generate_synthetic(const SynthSpec& spec);

/// Writes corpus.jsonl, shocks.csv, monthly_truth.csv, quarterly_wui.csv,
/// embeddings.txt and keywords.txt into `dir`.
void write_synthetic(const std::filesystem::path& dir, const SynthCorpus& synth);

}  // namespace epu

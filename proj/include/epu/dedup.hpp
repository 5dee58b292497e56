#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "epu/corpus.hpp"
#include "epu/series.hpp"

namespace epu {

using Shingle = std::vector<std::string>;

/// Contiguous k-token grams. Documents shorter than k give the empty set.
std::set<Shingle> shingles(std::span<const std::string> tokens, std::size_t k);

/// 64-bit fingerprints of the k-grams, sorted and unique.
std::vector<std::uint64_t> shingle_hashes(std::span<const std::string> tokens, std::size_t k);

struct MinHashSignature {
  std::string doc_id;
  std::vector<std::uint64_t> values;  // length num_hashes
  bool empty = false;                 // no shingles: matches nothing
};

/// values[i] = min over shingles of hash_i(shingle). hash_i is a 64-bit
/// mixer salted per index from `seed`.
MinHashSignature signature(std::span<const std::uint64_t> shingle_set, std::size_t num_hashes, std::uint64_t seed,
                           std::string doc_id = {});

/// Fraction of equal signature positions; 0 when either side is empty.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

/// |A ∩ B| / |A ∪ B| on sorted unique sets; 0 for two empty sets.
double jaccard(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
double jaccard(const std::set<Shingle>& a, const std::set<Shingle>& b);

struct DedupConfig {
  std::size_t shingle_size = 3;
  std::size_t num_hashes = 256;
  std::size_t bands = 32;
  std::size_t rows_per_band = 8;
  double threshold = 0.8;
  std::uint64_t seed = 42;
  int threads = 0;

  /// Throws ConfigError unless bands × rows_per_band == num_hashes etc.
  void validate() const;
};

struct DuplicateGroup {
  std::vector<std::size_t> members;  // document indices, earliest first (ties by id)
  std::size_t representative = 0;    // == members.front()
};

struct DedupResult {
  std::vector<DuplicateGroup> groups;  // ordered by representative
  std::size_t candidate_pairs = 0;
  std::vector<std::pair<std::size_t, std::size_t>> verified_pairs;
};

/// Serial reference signature kernel, kept for testing and benchmarking.
std::vector<MinHashSignature> signatures_serial(std::span<const Document> docs, const DedupConfig& config);
/// OpenMP signature kernel; identical output to the serial one.
std::vector<MinHashSignature> signatures(std::span<const Document> docs, const DedupConfig& config);

/// LSH banding proposes candidates; each candidate is verified with exact
/// Jaccard on the k-gram sets, so every reported pair has Jaccard ≥ threshold.
/// Groups are connected components of the verified pairs.
DedupResult find_near_duplicates(std::span<const Document> docs, const DedupConfig& config);

/// Monthly count of distinct events: documents containing any filter term,
/// with each near-duplicate group counted once at its representative's month.
MonthlySeries dedup_event_counts(const Corpus& corpus, const std::unordered_set<std::string>& filter_terms,
                                 const DedupConfig& config);

}  // namespace epu

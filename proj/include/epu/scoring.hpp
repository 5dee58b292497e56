#pragma once

#include <span>
#include <string>
#include <vector>

#include "epu/corpus.hpp"
#include "epu/embeddings.hpp"
#include "epu/triangle.hpp"

namespace epu {

inline constexpr double kDefaultTMin = 0.5;

struct DocumentScore {
  ConceptTriple triple;
  double score = 0.0;

  bool operator==(const DocumentScore&) const = default;
};

/// Reference path: nearest word per concept by direct cosine, gate, then the
/// triangle area.
DocumentScore score_tokens(std::span<const std::string> tokens, const ConceptVectors& concepts,
                           const EmbeddingTable& table, double t_min);

inline DocumentScore score_document(const Document& doc, const ConceptVectors& concepts,
                                    const EmbeddingTable& table, double t_min) {
  return score_tokens(doc.tokens, concepts, table, t_min);
}

/// Similarity of every table word to the three concepts, computed once.
/// Values are bit-identical to what the reference path computes per token.
class ConceptSimilarityIndex {
 public:
  ConceptSimilarityIndex(const EmbeddingTable& table, const ConceptVectors& concepts, int threads = 0);

  DocumentScore score(std::span<const std::string> tokens, double t_min) const;

  const EmbeddingTable& table() const { return *table_; }
  double similarity(std::size_t word_id, Concept c) const {
    return sims_[word_id * 3 + static_cast<std::size_t>(c)];
  }

 private:
  const EmbeddingTable* table_;
  std::vector<double> sims_;
};

/// Serial reference kernel. Kept for testing and benchmarking.
std::vector<DocumentScore> score_documents_serial(std::span<const Document> docs, const ConceptVectors& concepts,
                                                  const EmbeddingTable& table, double t_min);

/// OpenMP kernel over documents. Output is indexed like the input, so the
/// result does not depend on the thread count.
std::vector<DocumentScore> score_documents(std::span<const Document> docs, const ConceptSimilarityIndex& index,
                                           double t_min, int threads = 0);

}  // namespace epu

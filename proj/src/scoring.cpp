#include "epu/scoring.hpp"

#include <omp.h>

#include <cstdint>

#include "epu/error.hpp"

namespace epu {

DocumentScore score_tokens(std::span<const std::string> tokens, const ConceptVectors& concepts,
                           const EmbeddingTable& table, double t_min) {
  std::array<double, 3> gated{};
  for (auto c : kConcepts) {
    auto nearest = nearest_concept_word(tokens, concepts[c], table);
    gated[static_cast<std::size_t>(c)] = nearest ? gate(nearest->similarity, t_min) : 0.0;
  }
  DocumentScore out;
  out.triple = {gated[0], gated[1], gated[2]};
  out.score = epu_score(out.triple);
  return out;
}

ConceptSimilarityIndex::ConceptSimilarityIndex(const EmbeddingTable& table, const ConceptVectors& concepts,
                                               int threads)
    : table_(&table), sims_(table.size() * 3) {
  for (auto c : kConcepts)
    if (concepts[c].size() != table.dim()) throw NumericError("concept vector dimension mismatch");
  const auto n = static_cast<std::int64_t>(table.size());
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nthreads) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    auto id = static_cast<std::size_t>(i);
    for (auto c : kConcepts) sims_[id * 3 + static_cast<std::size_t>(c)] = cosine(table.vector(id), concepts[c]);
  }
}

DocumentScore ConceptSimilarityIndex::score(std::span<const std::string> tokens, double t_min) const {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::array<std::size_t, 3> best{kNone, kNone, kNone};
  for (const auto& token : tokens) {
    auto id = table_->find(token);
    if (!id) continue;
    for (std::size_t c = 0; c < 3; ++c) {
      if (best[c] == kNone) {
        best[c] = *id;
        continue;
      }
      double s = sims_[*id * 3 + c], b = sims_[best[c] * 3 + c];
      if (s > b || (s == b && table_->word(*id) < table_->word(best[c]))) best[c] = *id;
    }
  }
  std::array<double, 3> gated{};
  for (std::size_t c = 0; c < 3; ++c) gated[c] = best[c] == kNone ? 0.0 : gate(sims_[best[c] * 3 + c], t_min);
  DocumentScore out;
  out.triple = {gated[0], gated[1], gated[2]};
  out.score = epu_score(out.triple);
  return out;
}

std::vector<DocumentScore> score_documents_serial(std::span<const Document> docs, const ConceptVectors& concepts,
                                                  const EmbeddingTable& table, double t_min) {
  std::vector<DocumentScore> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) out.push_back(score_document(doc, concepts, table, t_min));
  return out;
}

std::vector<DocumentScore> score_documents(std::span<const Document> docs, const ConceptSimilarityIndex& index,
                                           double t_min, int threads) {
  std::vector<DocumentScore> out(docs.size());
  const auto n = static_cast<std::int64_t>(docs.size());
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 1024)
  for (std::int64_t i = 0; i < n; ++i) {
    auto idx = static_cast<std::size_t>(i);
    out[idx] = index.score(docs[idx].tokens, t_min);
  }
  return out;
}

}  // namespace epu

#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "epu/corpus.hpp"

namespace epu {

/// Dense word vectors stored row-major in one contiguous buffer. Immutable
/// after loading; any number of threads may query it concurrently.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  /// Returns false (and stores nothing) when the word is already present.
  /// Throws NumericError on a wrong-length or non-finite vector.
  bool add(std::string word, std::span<const double> values);

  std::optional<std::size_t> find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word).has_value(); }

  const std::string& word(std::size_t id) const { return words_[id]; }
  std::span<const double> vector(std::size_t id) const {
    return {data_.data() + id * dim_, dim_};
  }
  /// Throws Error when the word is absent.
  std::span<const double> vector(std::string_view word) const;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
};

struct EmbeddingLoadResult {
  EmbeddingTable table;
  std::size_t rejected = 0;
  std::vector<Diagnostic> diagnostics;
};

/// Text vector format: "<word> f1 ... fd" per line, optionally preceded by a
/// "<vocab_size> <dim>" header. The header (or else the first row) fixes the
/// dimension. Rows of the wrong arity, unparseable or non-finite rows and
/// zero-norm vectors are skipped with a diagnostic; duplicate words keep the
/// first row. Throws IoError for a missing file and Error when the header and
/// the first row disagree on the dimension.
EmbeddingLoadResult load_embeddings(std::istream& in);
EmbeddingLoadResult load_embeddings(const std::filesystem::path& path);

void write_embeddings(std::ostream& out, const EmbeddingTable& table);

/// Σuᵢvᵢ / (‖u‖‖v‖), clamped to [-1, 1]. Throws NumericError on a zero-norm
/// operand or mismatched dimensions.
double cosine(std::span<const double> u, std::span<const double> v);

enum class Concept { Economy = 0, Policy = 1, Uncertainty = 2 };
inline constexpr std::array<Concept, 3> kConcepts{Concept::Economy, Concept::Policy, Concept::Uncertainty};
inline constexpr std::array<std::string_view, 3> kDefaultSeeds{"economy", "policy", "uncertainty"};

struct ConceptVectors {
  std::array<std::vector<double>, 3> vectors;
  std::array<std::string, 3> source_words;

  std::span<const double> operator[](Concept c) const { return vectors[static_cast<std::size_t>(c)]; }
};

/// Looks up the three seed words. Throws ConfigError when a seed is missing.
ConceptVectors make_concepts(const EmbeddingTable& table, const std::array<std::string, 3>& seeds);

struct NearestWord {
  std::string word;
  double similarity = 0.0;
};

/// The in-vocabulary token most similar to `concept`; out-of-vocabulary tokens
/// are skipped and ties go to the lexicographically smallest word.
std::optional<NearestWord> nearest_concept_word(std::span<const std::string> tokens,
                                                std::span<const double> concept_vector,
                                                const EmbeddingTable& table);

/// similarity if similarity >= t_min, else 0.
constexpr double gate(double similarity, double t_min) { return similarity >= t_min ? similarity : 0.0; }

}  // namespace epu

#include "epu/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "epu/error.hpp"

namespace epu {

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ConfigError("embedding dimension must be positive");
}

bool EmbeddingTable::add(std::string word, std::span<const double> values) {
  if (values.size() != dim_)
    throw NumericError("vector for '" + word + "' has " + std::to_string(values.size()) +
                       " components, expected " + std::to_string(dim_));
  for (double x : values)
    if (!std::isfinite(x)) throw NumericError("non-finite component in vector for '" + word + "'");
  if (index_.contains(word)) return false;
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), values.begin(), values.end());
  return true;
}

std::optional<std::size_t> EmbeddingTable::find(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingTable::vector(std::string_view word) const {
  auto id = find(word);
  if (!id) throw Error("word not in embedding table: " + std::string(word));
  return vector(*id);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool parse_size(std::string_view s, std::size_t& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

EmbeddingLoadResult load_embeddings(std::istream& in) {
  EmbeddingLoadResult result;
  std::size_t dim = 0;
  bool header_dim = false;
  std::size_t line_no = 0;
  std::vector<double> values;
  auto reject = [&](std::string msg) {
    ++result.rejected;
    result.diagnostics.push_back({line_no, std::move(msg)});
  };

  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.empty()) continue;

    if (line_no == 1 && fields.size() == 2) {
      std::size_t count = 0, d = 0;
      if (parse_size(fields[0], count) && parse_size(fields[1], d) && d > 0) {
        dim = d;
        header_dim = true;
        result.table = EmbeddingTable(dim);
        continue;
      }
    }
    if (dim == 0) {
      if (fields.size() < 2) {
        reject("row has no vector components");
        continue;
      }
      dim = fields.size() - 1;
      result.table = EmbeddingTable(dim);
    } else if (header_dim && result.table.empty() && result.rejected == 0 && fields.size() - 1 != dim) {
      throw Error("line " + std::to_string(line_no) + ": first row has " + std::to_string(fields.size() - 1) +
                  " components but the header declares dimension " + std::to_string(dim));
    }
    if (fields.size() - 1 != dim) {
      reject("expected " + std::to_string(dim) + " components, found " + std::to_string(fields.size() - 1));
      continue;
    }
    values.assign(dim, 0.0);
    bool ok = true;
    double norm2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      auto f = fields[k + 1];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), values[k]);
      if (ec != std::errc() || p != f.data() + f.size() || !std::isfinite(values[k])) {
        ok = false;
        break;
      }
      norm2 += values[k] * values[k];
    }
    std::string word(fields[0]);
    if (!ok) {
      reject("unparseable or non-finite component for '" + word + "'");
      continue;
    }
    if (norm2 == 0.0) {
      result.diagnostics.push_back({line_no, "zero-norm vector for '" + word + "' excluded"});
      continue;
    }
    if (!result.table.add(word, values))
      result.diagnostics.push_back({line_no, "duplicate word '" + word + "', keeping first"});
  }
  if (dim == 0) throw Error("embedding file contains no vectors");
  return result;
}

EmbeddingLoadResult load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path.string());
  return load_embeddings(in);
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
  out << table.size() << ' ' << table.dim() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.word(i);
    for (double x : table.vector(i)) {
      auto r = std::to_chars(buf, buf + sizeof buf, x);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf));
    }
    out << '\n';
  }
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw NumericError("cosine: dimension mismatch");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw NumericError("cosine: zero-norm vector");
  double c = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(c, -1.0, 1.0);
}

ConceptVectors make_concepts(const EmbeddingTable& table, const std::array<std::string, 3>& seeds) {
  ConceptVectors cv;
  for (std::size_t i = 0; i < 3; ++i) {
    auto id = table.find(seeds[i]);
    if (!id) throw ConfigError("seed word '" + seeds[i] + "' is not in the embedding table");
    auto v = table.vector(*id);
    cv.vectors[i].assign(v.begin(), v.end());
    cv.source_words[i] = seeds[i];
  }
  return cv;
}

std::optional<NearestWord> nearest_concept_word(std::span<const std::string> tokens,
                                                std::span<const double> concept_vector,
                                                const EmbeddingTable& table) {
  std::optional<NearestWord> best;
  for (const auto& token : tokens) {
    auto id = table.find(token);
    if (!id) continue;
    double sim = cosine(table.vector(*id), concept_vector);
    if (!best || sim > best->similarity || (sim == best->similarity && token < best->word))
      best = NearestWord{token, sim};
  }
  return best;
}

}  // namespace epu

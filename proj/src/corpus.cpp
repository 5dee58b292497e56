#include "epu/corpus.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <unordered_set>

#include "epu/error.hpp"

namespace epu {

using nlohmann::json;

void CorpusStats::add(const Document& doc) {
  ++total_docs;
  ++docs_per_month[doc.month()];
  std::unordered_set<std::string_view> seen;
  seen.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) {
    ++term_freq[t];
    if (seen.insert(t).second) ++doc_freq[t];
  }
}

void CorpusStats::merge(const CorpusStats& other) {
  total_docs += other.total_docs;
  for (const auto& [w, c] : other.doc_freq) doc_freq[w] += c;
  for (const auto& [w, c] : other.term_freq) term_freq[w] += c;
  for (const auto& [m, c] : other.docs_per_month) docs_per_month[m] += c;
}

CorpusStats compute_stats(std::span<const Document> docs, int threads) {
  int nthreads = threads > 0 ? threads : omp_get_max_threads();
  std::vector<CorpusStats> partial(static_cast<std::size_t>(nthreads));
  const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for num_threads(nthreads) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    partial[static_cast<std::size_t>(omp_get_thread_num())].add(docs[static_cast<std::size_t>(i)]);
  }
  CorpusStats total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

std::optional<Document> parse_record(std::string_view line, std::string* error) {
  auto fail = [&](std::string msg) -> std::optional<Document> {
    if (error) *error = std::move(msg);
    return std::nullopt;
  };
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return fail("not a JSON object");
  Document doc;
  for (const char* key : {"id", "published_at", "title", "body"}) {
    if (!j.contains(key) || !j[key].is_string()) return fail(std::string("missing string field '") + key + "'");
  }
  doc.id = j["id"].get<std::string>();
  if (doc.id.empty()) return fail("empty id");
  auto ts = parse_iso8601(j["published_at"].get<std::string>());
  if (!ts) return fail("unparseable published_at '" + j["published_at"].get<std::string>() + "'");
  doc.published_at = *ts;
  doc.title = j["title"].get<std::string>();
  doc.body = j["body"].get<std::string>();
  if (j.contains("topic") && j["topic"].is_string()) doc.topic = j["topic"].get<std::string>();
  if (j.contains("tokens")) {
    if (!j["tokens"].is_array()) return fail("'tokens' is not an array");
    for (const auto& t : j["tokens"]) {
      if (!t.is_string() || t.get_ref<const std::string&>().empty()) return fail("invalid token");
      doc.tokens.push_back(t.get<std::string>());
    }
  }
  return doc;
}

std::string to_record(const Document& doc, bool with_tokens) {
  json j;
  j["id"] = doc.id;
  j["published_at"] = format_iso8601(doc.published_at);
  j["title"] = doc.title;
  j["body"] = doc.body;
  if (!doc.topic.empty()) j["topic"] = doc.topic;
  if (with_tokens) j["tokens"] = doc.tokens;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

IngestResult ingest(std::istream& in, const IngestOptions& options) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }

  const auto n = static_cast<std::int64_t>(lines.size());
  std::vector<std::optional<Document>> parsed(lines.size());
  std::vector<std::string> errors(lines.size());
  int nthreads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) {
    auto idx = static_cast<std::size_t>(i);
    if (lines[idx].find_first_not_of(" \t") == std::string::npos) continue;
    auto doc = parse_record(lines[idx], &errors[idx]);
    if (doc && doc->tokens.empty()) doc->tokens = tokenize(doc->title + "\n" + doc->body, options.tokenizer);
    parsed[idx] = std::move(doc);
  }

  IngestResult result;
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    auto reject = [&](std::string msg) {
      ++result.rejected;
      result.diagnostics.push_back({i + 1, std::move(msg)});
    };
    if (!parsed[i]) {
      if (!errors[i].empty()) reject(errors[i]);
      continue;
    }
    Document& doc = *parsed[i];
    if ((options.from && doc.published_at < *options.from) || (options.to && doc.published_at >= *options.to)) {
      reject("published_at outside corpus date range");
      continue;
    }
    if (!ids.insert(doc.id).second) {
      reject("duplicate id '" + doc.id + "'");
      continue;
    }
    result.corpus.documents.push_back(std::move(doc));
  }
  result.corpus.stats = compute_stats(result.corpus.documents, options.threads);
  return result;
}

IngestResult ingest_file(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input: " + path.string());
  return ingest(in, options);
}

std::string stats_to_json(const CorpusStats& stats) {
  json j;
  j["total_docs"] = stats.total_docs;
  json months = json::object();
  for (const auto& [m, c] : stats.docs_per_month) months[m.str()] = c;
  j["docs_per_month"] = months;
  // std::map keeps keys sorted so the file is deterministic
  j["doc_freq"] = std::map<std::string, std::uint64_t>(stats.doc_freq.begin(), stats.doc_freq.end());
  j["term_freq"] = std::map<std::string, std::uint64_t>(stats.term_freq.begin(), stats.term_freq.end());
  return j.dump(1);
}

void write_store(const std::filesystem::path& dir, const Corpus& corpus) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "documents.jsonl", std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / "documents.jsonl").string());
    for (const auto& doc : corpus.documents) out << to_record(doc, true) << '\n';
  }
  std::ofstream out(dir / "stats.json", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "stats.json").string());
  out << stats_to_json(corpus.stats) << '\n';
}

Corpus load_store(const std::filesystem::path& dir) {
  auto path = dir / "documents.jsonl";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open document store: " + path.string());
  Corpus corpus;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    std::string err;
    auto doc = parse_record(line, &err);
    if (!doc) throw Error(path.string() + ":" + std::to_string(line_no) + ": " + err);
    corpus.documents.push_back(std::move(*doc));
  }
  corpus.stats = compute_stats(corpus.documents);
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, const IngestOptions& options) {
  if (std::filesystem::is_directory(path)) {
    if (std::filesystem::exists(path / "documents.jsonl")) return load_store(path);
    if (std::filesystem::exists(path / "corpus.jsonl")) return ingest_file(path / "corpus.jsonl", options).corpus;
    throw IoError("no documents.jsonl or corpus.jsonl in " + path.string());
  }
  return ingest_file(path, options).corpus;
}

std::vector<std::string> prune_vocabulary(const CorpusStats& stats, const PruneConfig& config) {
  if (!(config.max_df_ratio > 0.0 && config.max_df_ratio <= 1.0))
    throw ConfigError("max_df_ratio must lie in (0, 1]");
  std::vector<std::string> vocab;
  if (stats.total_docs == 0) return vocab;
  const double total = static_cast<double>(stats.total_docs);
  for (const auto& [word, df] : stats.doc_freq) {
    auto tf_it = stats.term_freq.find(word);
    std::uint64_t tf = tf_it == stats.term_freq.end() ? 0 : tf_it->second;
    if (static_cast<double>(df) / total <= config.max_df_ratio && tf >= config.min_tf) vocab.push_back(word);
  }
  std::sort(vocab.begin(), vocab.end());
  return vocab;
}

}  // namespace epu

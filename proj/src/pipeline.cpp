#include "epu/pipeline.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "epu/error.hpp"
#include "epu/wui.hpp"

namespace epu {

EpuResult compute_epu_index(const Corpus& corpus, const EmbeddingTable& table, const EpuOptions& options) {
  if (!(options.t_min > 0.0 && options.t_min <= 1.0)) throw ConfigError("t_min must lie in (0, 1]");
  auto concepts = make_concepts(table, options.seeds);
  ConceptSimilarityIndex index(table, concepts, options.threads);
  EpuResult result;
  result.scores = score_documents(corpus.documents, index, options.t_min, options.threads);

  MonthlyAccumulator acc;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i)
    if (result.scores[i].score != 0.0) acc.add(corpus.documents[i].month(), result.scores[i].score);
  result.normalized = aggregate_monthly(acc, corpus.stats, "epu", options.range);
  result.standardized = standardize(result.normalized, options.standardize);
  return result;
}

void write_score_dump(std::ostream& out, const Corpus& corpus, const std::vector<DocumentScore>& scores) {
  out << "doc_id,alpha,beta,gamma,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto& s = scores[i];
    out << corpus.documents[i].id << ',' << format_double(s.triple.alpha) << ',' << format_double(s.triple.beta) << ','
        << format_double(s.triple.gamma) << ',' << format_double(s.score) << '\n';
  }
}

std::optional<Pipeline> parse_pipeline(std::string_view s) {
  if (s == "epu") return Pipeline::Epu;
  if (s == "bbd") return Pipeline::Bbd;
  if (s == "braun") return Pipeline::Braun;
  if (s == "wui") return Pipeline::Wui;
  if (s == "all") return Pipeline::All;
  return std::nullopt;
}

namespace {

bool wants(Pipeline which, Pipeline p) { return which == Pipeline::All || which == p; }

void require_file(const std::filesystem::path& p, const char* what) {
  if (p.empty()) throw ConfigError(std::string(what) + " path is required");
  if (!std::filesystem::exists(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
}

}  // namespace

void RunConfig::validate(Pipeline which) const {
  if (!(t_min > 0.0 && t_min <= 1.0)) throw ConfigError("t_min must lie in (0, 1], got " + format_double(t_min));
  for (const auto& s : seeds)
    if (s.empty()) throw ConfigError("exactly three non-empty seed words are required");
  if (!(prune.max_df_ratio > 0.0 && prune.max_df_ratio <= 1.0)) throw ConfigError("max_df_ratio must lie in (0, 1]");
  if (kmax < 1) throw ConfigError("kmax must be at least 1");
  if (threads < 0) throw ConfigError("threads must be non-negative");
  if (date_from && date_to && *date_to < *date_from) throw ConfigError("date range is empty");
  if (output_dir.empty()) throw ConfigError("output directory is required");
  require_file(corpus, "corpus");
  if (wants(which, Pipeline::Epu)) require_file(embeddings, "embeddings");
  if (wants(which, Pipeline::Bbd) || wants(which, Pipeline::Braun)) require_file(keywords, "keywords");
  if (wants(which, Pipeline::Wui)) require_file(targets, "targets");
  if (!stop_words.empty()) require_file(stop_words, "stop-word list");
}

std::string RunConfig::serialize() const {
  std::ostringstream o;
  o << "corpus = " << corpus.string() << '\n'
    << "embeddings = " << embeddings.string() << '\n'
    << "keywords = " << keywords.string() << '\n'
    << "targets = " << targets.string() << '\n'
    << "stop-words = " << stop_words.string() << '\n'
    << "out = " << output_dir.string() << '\n'
    << "seeds = " << seeds[0] << ',' << seeds[1] << ',' << seeds[2] << '\n'
    << "tmin = " << format_double(t_min) << '\n'
    << "from = " << (date_from ? date_from->str() : "") << '\n'
    << "to = " << (date_to ? date_to->str() : "") << '\n'
    << "max-df = " << format_double(prune.max_df_ratio) << '\n'
    << "min-tf = " << prune.min_tf << '\n'
    << "kmax = " << kmax << '\n'
    << "mse = " << (mse == MseMode::LeaveOneOut ? "loo" : "training") << '\n'
    << "scale-x = " << (scale_x ? "true" : "false") << '\n'
    << "braun-mode = " << (braun.mode == BraunOptions::Mode::Product ? "product" : "joint") << '\n'
    << "econ-filter = " << (braun.econ_filter.kind == EconFilter::Kind::Topic ? "topic" : "keywords") << '\n'
    << "normalize = " << (braun.normalize ? "true" : "false") << '\n'
    << "seed = " << seed << '\n';
  return o.str();
}

IngestOptions RunConfig::ingest_options() const {
  IngestOptions opts;
  opts.threads = threads;
  if (!stop_words.empty()) opts.tokenizer.stop_words = load_word_list(stop_words.string());
  auto start_of = [](Month m) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-01", m.year(), m.month());
    return *parse_iso8601(buf);
  };
  if (date_from) opts.from = start_of(*date_from);
  if (date_to) opts.to = start_of(date_to->next());
  return opts;
}

std::optional<MonthRange> RunConfig::month_range() const {
  if (date_from && date_to) return MonthRange{*date_from, *date_to};
  return std::nullopt;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char hx[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(hx, sizeof hx, "%02x", md[i]);
    hex += hx;
  }
  return hex;
}

namespace {

std::string input_digest(const std::filesystem::path& p) {
  if (std::filesystem::is_directory(p)) {
    for (const char* name : {"documents.jsonl", "corpus.jsonl"})
      if (std::filesystem::exists(p / name)) return sha256_file(p / name);
    return "";
  }
  return sha256_file(p);
}

}  // namespace

RunResult run_pipeline(const RunConfig& config, Pipeline which) {
  using clock = std::chrono::steady_clock;
  RunResult result;
  nlohmann::json manifest;
  manifest["tool"] = "epu";
  manifest["version"] = "1.0.0";
  manifest["compiler"] = __VERSION__;
  manifest["config"] = config.serialize();
  manifest["config_hash"] = sha256_hex(config.serialize());
  manifest["stages"] = nlohmann::json::array();
  manifest["inputs"] = nlohmann::json::object();

  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pending;  // partial → final
  std::string stage = "config";
  auto t_stage = clock::now();
  auto finish_stage = [&](const std::string& status) {
    double secs = std::chrono::duration<double>(clock::now() - t_stage).count();
    manifest["stages"].push_back({{"name", stage}, {"seconds", secs}, {"status", status}});
  };
  auto begin = [&](std::string name) {
    finish_stage("ok");
    stage = std::move(name);
    t_stage = clock::now();
  };
  auto write_series = [&](const std::string& name, const MonthlySeries& s) {
    auto final_path = config.output_dir / (name + ".csv");
    auto partial = final_path;
    partial += ".partial";
    write_series_csv(partial, s);
    pending.emplace_back(partial, final_path);
  };

  try {
    config.validate(which);
    std::filesystem::create_directories(config.output_dir);
    for (const auto& [key, path] : {std::pair{"corpus", config.corpus}, std::pair{"embeddings", config.embeddings},
                                    std::pair{"keywords", config.keywords}, std::pair{"targets", config.targets}})
      if (!path.empty() && std::filesystem::exists(path)) manifest["inputs"][key] = {{"path", path.string()}, {"sha256", input_digest(path)}};

    begin("load-corpus");
    Corpus corpus = load_corpus(config.corpus, config.ingest_options());
    manifest["documents"] = corpus.stats.total_docs;

    if (wants(which, Pipeline::Epu)) {
      begin("load-embeddings");
      auto loaded = load_embeddings(config.embeddings);
      begin("epu");
      EpuOptions opts;
      opts.seeds = config.seeds;
      opts.t_min = config.t_min;
      opts.range = config.month_range();
      opts.threads = config.threads;
      auto epu = compute_epu_index(corpus, loaded.table, opts);
      write_series("epu", epu.standardized);
    }
    if (wants(which, Pipeline::Bbd) || wants(which, Pipeline::Braun)) {
      begin("load-keywords");
      auto sets = load_keywords(config.keywords);
      if (wants(which, Pipeline::Bbd)) {
        begin("bbd");
        write_series("bbd", bbd_index(corpus, sets, config.threads));
      }
      if (wants(which, Pipeline::Braun)) {
        begin("braun");
        write_series("braun", braun_index(corpus, sets, config.braun, config.threads));
      }
    }
    if (wants(which, Pipeline::Wui)) {
      begin("wui");
      WuiConfig wc;
      wc.prune = config.prune;
      wc.kmax = config.kmax;
      wc.mse = config.mse;
      wc.pls.scale_x = config.scale_x;
      wc.range = config.month_range();
      wc.threads = config.threads;
      auto est = estimate_monthly_wui(corpus, read_quarterly_csv(config.targets), wc);
      write_series("wui", est.standardized);
      auto curve_final = config.output_dir / "mse_curve.csv";
      auto curve_partial = curve_final;
      curve_partial += ".partial";
      std::ofstream curve(curve_partial, std::ios::binary);
      curve << "k,mse\n";
      for (const auto& [k, mse] : est.selection.mse_curve) curve << k << ',' << format_double(mse) << '\n';
      pending.emplace_back(curve_partial, curve_final);
      manifest["wui_components"] = est.selection.best_k;
    }
    finish_stage("ok");
    for (const auto& [partial, final_path] : pending) {
      std::filesystem::rename(partial, final_path);
      result.outputs.push_back(final_path);
    }
    manifest["status"] = "ok";
  } catch (const std::exception& e) {
    finish_stage("failed");
    result.exit_code = dynamic_cast<const ConfigError*>(&e) ? 2 : 1;
    result.failed_stage = stage;
    result.message = e.what();
    manifest["status"] = "failed";
    manifest["failed_stage"] = stage;
    manifest["error"] = e.what();
    for (const auto& [partial, final_path] : pending) result.outputs.push_back(partial);
  }

  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& p : result.outputs) outputs.push_back(p.filename().string());
  manifest["outputs"] = outputs;
  try {
    std::filesystem::create_directories(config.output_dir);
    result.manifest = config.output_dir / "manifest.json";
    std::ofstream(result.manifest, std::ios::binary) << manifest.dump(2) << '\n';
  } catch (const std::exception&) {
    result.manifest.clear();
  }
  return result;
}

}  // namespace epu

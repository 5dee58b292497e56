// epu: command-line entry point for ingest, synthetic generation, index
// construction, baselines, WUI estimation, deduplication and analysis.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "epu/analysis.hpp"
#include "epu/baselines.hpp"
#include "epu/corpus.hpp"
#include "epu/dedup.hpp"
#include "epu/embeddings.hpp"
#include "epu/error.hpp"
#include "epu/pipeline.hpp"
#include "epu/synth.hpp"
#include "epu/wui.hpp"

namespace fs = std::filesystem;

namespace {

struct Globals {
  epu::RunConfig run;
  std::vector<std::string> seeds{"economy", "policy", "uncertainty"};
  std::string from;
  std::string to;
  std::string mse = "loo";
  bool verbose = false;
  CLI::Option* seed_opt = nullptr;
};

std::array<std::string, 3> seed_triple(const std::vector<std::string>& words) {
  if (words.size() != 3)
    throw epu::ConfigError("exactly three seed words are required, got " + std::to_string(words.size()));
  return {words[0], words[1], words[2]};
}

std::optional<epu::Month> parse_month_flag(const std::string& text, const char* name) {
  if (text.empty()) return std::nullopt;
  auto m = epu::Month::parse(text);
  if (!m) throw epu::ConfigError(std::string("--") + name + " expects YYYY-MM, got '" + text + "'");
  return m;
}

// Folds string-typed flags into the RunConfig.
void finalize(Globals& g) {
  g.run.seeds = seed_triple(g.seeds);
  g.run.date_from = parse_month_flag(g.from, "from");
  g.run.date_to = parse_month_flag(g.to, "to");
  if (g.mse == "loo") {
    g.run.mse = epu::MseMode::LeaveOneOut;
  } else if (g.mse == "training") {
    g.run.mse = epu::MseMode::Training;
  } else {
    throw epu::ConfigError("--mse expects loo or training");
  }
}

void print_diagnostics(const std::vector<epu::Diagnostic>& diags, bool verbose, std::size_t rejected) {
  if (rejected > 0) std::cerr << "rejected " << rejected << " record(s)\n";
  if (!verbose) return;
  for (const auto& d : diags) std::cerr << "line " << d.line << ": " << d.message << '\n';
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw epu::IoError("cannot write " + path.string());
  return out;
}

epu::Corpus load_input_corpus(const Globals& g) {
  if (g.run.corpus.empty()) throw epu::ConfigError("--corpus is required");
  auto corpus = epu::load_corpus(g.run.corpus, g.run.ingest_options());
  if (g.verbose) std::cerr << "loaded " << corpus.documents.size() << " documents\n";
  return corpus;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedding-based economic policy uncertainty index toolkit"};
  app.set_config("--config", "", "Flat key = value file mirroring the long flags");
  app.require_subcommand(1);

  Globals g;
  auto& r = g.run;
  app.add_option("--threads", r.threads, "Worker threads (0 = all cores)");
  g.seed_opt = app.add_option("--seed", r.seed, "Root random seed");
  app.add_flag("--verbose,-v", g.verbose, "Print diagnostics to stderr");
  app.add_option("--corpus", r.corpus, "Corpus store directory or JSONL file");
  app.add_option("--embeddings", r.embeddings, "Word-vector text file");
  app.add_option("--keywords", r.keywords, "Keyword-set file with [economy]/[policy]/[uncertainty]");
  app.add_option("--targets", r.targets, "Quarterly WUI CSV (quarter,value)");
  app.add_option("--stop-words", r.stop_words, "Stop-word list, one per line");
  app.add_option("--out", r.output_dir, "Output file or directory");
  app.add_option("--seeds", g.seeds, "Concept seed words: economy,policy,uncertainty")->delimiter(',');
  app.add_option("--tmin", r.t_min, "Similarity gate threshold");
  app.add_option("--from", g.from, "First month (YYYY-MM)");
  app.add_option("--to", g.to, "Last month (YYYY-MM), inclusive");
  app.add_option("--max-df", r.prune.max_df_ratio, "Drop terms in more than this share of documents");
  app.add_option("--min-tf", r.prune.min_tf, "Drop terms with fewer total occurrences");
  app.add_option("--kmax", r.kmax, "Largest PLS component count tried");
  app.add_option("--mse", g.mse, "Component selection error: loo or training");
  app.add_flag("--scale-x", r.scale_x, "Scale PLS predictors to unit variance");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse JSONL records into a document store")->fallthrough();
  std::string ingest_input;
  ingest->add_option("--input", ingest_input, "JSONL records")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted shocks")->fallthrough();
  std::string synth_spec;
  synth->add_option("--spec", synth_spec, "JSON generator spec")->required();

  // index
  auto* index = app.add_subcommand("index", "Build the embedding-based index")->fallthrough();
  std::string dump_scores;
  std::string index_stage = "standardized";
  index->add_option("--dump-scores", dump_scores, "Per-document CSV doc_id,alpha,beta,gamma,score");
  index->add_option("--stage", index_stage, "normalized or standardized");

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Keyword-count baseline indices")->fallthrough();
  baseline->require_subcommand(1);
  auto* bbd = baseline->add_subcommand("bbd", "Three-group keyword match index")->fallthrough();
  auto* braun = baseline->add_subcommand("braun", "Uncertainty × economic-policy count index")->fallthrough();
  std::string econ_filter = "keywords";
  std::string braun_mode = "product";
  std::vector<std::string> topics;
  braun->add_option("--econ-filter", econ_filter, "topic or keywords");
  braun->add_option("--mode", braun_mode, "product or joint");
  braun->add_option("--topics", topics, "Topic labels counted as economic news");
  braun->add_flag("--normalize", r.braun.normalize, "Divide by monthly totals");

  // wui
  auto* wui = app.add_subcommand("wui", "Monthly WUI estimate via PLS regression")->fallthrough();

  // dedup
  auto* dedup = app.add_subcommand("dedup", "Near-duplicate detection with MinHash LSH")->fallthrough();
  epu::DedupConfig dcfg;
  dedup->add_option("--threshold", dcfg.threshold, "Exact Jaccard threshold");
  dedup->add_option("--shingle", dcfg.shingle_size, "Tokens per shingle");
  dedup->add_option("--hashes", dcfg.num_hashes, "Signature length");
  dedup->add_option("--bands", dcfg.bands, "LSH bands");
  dedup->add_option("--rows", dcfg.rows_per_band, "Rows per band");
  auto* dcount = dedup->add_subcommand("count", "Monthly deduplicated event counts")->fallthrough();
  std::string filter_terms;
  dcount->add_option("--filter-terms", filter_terms, "Terms that mark an event mention")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Correlation and clustering of series")->fallthrough();
  analyze->require_subcommand(1);
  auto* corr = analyze->add_subcommand("corr", "Pairwise correlation matrix")->fallthrough();
  std::vector<std::string> series_files;
  std::string pairs_out;
  corr->add_option("--series", series_files, "Series CSV files")->required();
  corr->add_option("--pairs", pairs_out, "Also write a,b,r,p,level,n");
  auto* cluster = analyze->add_subcommand("cluster", "Hierarchical clustering on 1 - r")->fallthrough();
  std::string matrix_file;
  std::string linkage = "average";
  cluster->add_option("--matrix", matrix_file, "Correlation matrix CSV")->required();
  cluster->add_option("--linkage", linkage, "average, single or complete");

  // run
  auto* run = app.add_subcommand("run", "Run pipelines and write series plus manifest.json")->fallthrough();
  std::string which = "all";
  run->add_option("pipeline", which, "epu, bbd, braun, wui or all");

  CLI11_PARSE(app, argc, argv);

  try {
    finalize(g);
    dcfg.seed = r.seed;
    dcfg.threads = r.threads;

    if (*ingest) {
      auto result = epu::ingest_file(ingest_input, r.ingest_options());
      print_diagnostics(result.diagnostics, g.verbose, result.rejected);
      epu::write_store(r.output_dir, result.corpus);
      std::cerr << "stored " << result.corpus.documents.size() << " documents in " << r.output_dir.string() << '\n';
      return 0;
    }

    if (*synth) {
      auto spec = epu::load_synth_spec(synth_spec);
      if (g.seed_opt->count() > 0) spec.seed = r.seed;
      auto corpus = epu::generate_synthetic(spec);
      epu::write_synthetic(r.output_dir, corpus);
      std::cerr << "wrote " << corpus.documents.size() << " synthetic documents to " << r.output_dir.string() << '\n';
      return 0;
    }

    if (*index) {
      auto corpus = load_input_corpus(g);
      if (r.embeddings.empty()) throw epu::ConfigError("--embeddings is required");
      auto loaded = epu::load_embeddings(r.embeddings);
      print_diagnostics(loaded.diagnostics, g.verbose, loaded.rejected);
      epu::EpuOptions opts;
      opts.seeds = r.seeds;
      opts.t_min = r.t_min;
      opts.range = r.month_range();
      opts.threads = r.threads;
      auto result = epu::compute_epu_index(corpus, loaded.table, opts);
      auto stage = epu::parse_stage(index_stage);
      if (!stage || *stage == epu::Stage::Raw) throw epu::ConfigError("--stage expects normalized or standardized");
      auto out = open_out(r.output_dir);
      epu::write_series_csv(out, *stage == epu::Stage::Normalized ? result.normalized : result.standardized);
      if (!dump_scores.empty()) {
        auto dump = open_out(dump_scores);
        epu::write_score_dump(dump, corpus, result.scores);
      }
      return 0;
    }

    if (*baseline) {
      auto corpus = load_input_corpus(g);
      if (r.keywords.empty()) throw epu::ConfigError("--keywords is required");
      auto sets = epu::load_keywords(r.keywords);
      epu::MonthlySeries series;
      if (*bbd) {
        series = epu::bbd_index(corpus, sets, r.threads);
      } else {
        if (econ_filter == "topic") {
          r.braun.econ_filter.kind = epu::EconFilter::Kind::Topic;
        } else if (econ_filter != "keywords") {
          throw epu::ConfigError("--econ-filter expects topic or keywords");
        }
        if (!topics.empty()) r.braun.econ_filter.topics = {topics.begin(), topics.end()};
        if (braun_mode == "joint") {
          r.braun.mode = epu::BraunOptions::Mode::Joint;
        } else if (braun_mode != "product") {
          throw epu::ConfigError("--mode expects product or joint");
        }
        series = epu::braun_index(corpus, sets, r.braun, r.threads);
      }
      auto out = open_out(r.output_dir);
      epu::write_series_csv(out, series);
      return 0;
    }

    if (*wui) {
      auto corpus = load_input_corpus(g);
      if (r.targets.empty()) throw epu::ConfigError("--targets is required");
      epu::WuiConfig wc;
      wc.prune = r.prune;
      wc.kmax = r.kmax;
      wc.mse = r.mse;
      wc.pls.scale_x = r.scale_x;
      wc.range = r.month_range();
      wc.threads = r.threads;
      auto est = epu::estimate_monthly_wui(corpus, epu::read_quarterly_csv(r.targets), wc);
      for (const auto& w : est.warnings) std::cerr << "warning: " << w.message << '\n';
      if (g.verbose) std::cerr << "selected " << est.selection.best_k << " component(s)\n";
      auto out = open_out(r.output_dir);
      epu::write_series_csv(out, est.standardized);
      auto curve = open_out(r.output_dir.parent_path() / "mse_curve.csv");
      curve << "k,mse\n";
      for (const auto& [k, mse] : est.selection.mse_curve) curve << k << ',' << epu::format_double(mse) << '\n';
      return 0;
    }

    if (*dedup) {
      dcfg.validate();
      auto corpus = load_input_corpus(g);
      auto out = open_out(r.output_dir);
      if (*dcount) {
        auto terms = epu::load_word_list(filter_terms);
        epu::write_series_csv(out, epu::dedup_event_counts(corpus, terms, dcfg));
        return 0;
      }
      auto result = epu::find_near_duplicates(corpus.documents, dcfg);
      out << "group_id,doc_id,representative\n";
      for (std::size_t gi = 0; gi < result.groups.size(); ++gi) {
        const auto& grp = result.groups[gi];
        const auto& rep = corpus.documents[grp.representative].id;
        for (auto m : grp.members) out << gi << ',' << corpus.documents[m].id << ',' << rep << '\n';
      }
      if (g.verbose)
        std::cerr << result.candidate_pairs << " candidate pairs, " << result.verified_pairs.size() << " verified, "
                  << result.groups.size() << " groups\n";
      return 0;
    }

    if (*analyze) {
      if (*corr) {
        std::vector<epu::MonthlySeries> series;
        for (const auto& f : series_files) series.push_back(epu::read_series_csv(fs::path(f)));
        auto m = epu::correlation_matrix(series);
        auto out = open_out(r.output_dir);
        epu::write_matrix_csv(out, m);
        if (!pairs_out.empty()) {
          auto pairs = open_out(pairs_out);
          epu::write_pairs_csv(pairs, m);
        }
        return 0;
      }
      auto link = epu::parse_linkage(linkage);
      if (!link) throw epu::ConfigError("--linkage expects average, single or complete");
      auto dendro = epu::hcluster(epu::read_matrix_csv(fs::path(matrix_file)), *link);
      auto out = open_out(r.output_dir);
      out << dendro.to_json() << '\n';
      return 0;
    }

    if (*run) {
      auto p = epu::parse_pipeline(which);
      if (!p) throw epu::ConfigError("pipeline must be epu, bbd, braun, wui or all");
      auto result = epu::run_pipeline(r, *p);
      if (result.exit_code != 0) {
        std::cerr << "stage " << result.failed_stage << " failed: " << result.message << '\n';
      } else if (g.verbose) {
        for (const auto& o : result.outputs) std::cerr << "wrote " << o.string() << '\n';
      }
      return result.exit_code;
    }
  } catch (const epu::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

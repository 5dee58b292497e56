#include "epu/baselines.hpp"

#include <omp.h>

#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

#include "epu/error.hpp"
#include "epu/tokenizer.hpp"

namespace epu {

KeywordSets parse_keywords(std::istream& in) {
  KeywordSets sets;
  std::unordered_set<std::string>* current = nullptr;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    auto trimmed = line.substr(start, line.find_last_not_of(" \t") - start + 1);
    if (trimmed.front() == '[' && trimmed.back() == ']') {
      auto name = trimmed.substr(1, trimmed.size() - 2);
      if (name == "economy")
        current = &sets.economy;
      else if (name == "policy")
        current = &sets.policy;
      else if (name == "uncertainty")
        current = &sets.uncertainty;
      else
        throw ConfigError("keyword file line " + std::to_string(line_no) + ": unknown section [" + name + "]");
      continue;
    }
    if (!current) throw ConfigError("keyword file line " + std::to_string(line_no) + ": term outside a section");
    // multi-token entries are split; a term must match a single token
    for (auto& t : tokenize(trimmed)) current->insert(std::move(t));
  }
  if (sets.economy.empty() || sets.policy.empty() || sets.uncertainty.empty())
    throw ConfigError("keyword file must define non-empty economy, policy and uncertainty groups");
  return sets;
}

KeywordSets load_keywords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open keyword file: " + path.string());
  return parse_keywords(in);
}

namespace {

bool intersects(std::span<const std::string> tokens, const std::unordered_set<std::string>& set) {
  for (const auto& t : tokens)
    if (set.contains(t)) return true;
  return false;
}

using MonthCounts = std::map<Month, std::uint64_t>;

// Counts per month of documents for which pred(doc) holds. Integer counts
// merge exactly, so the result is independent of the thread count.
template <typename Pred>
MonthCounts count_monthly(const Corpus& corpus, Pred pred, int threads) {
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  std::vector<MonthCounts> partial(static_cast<std::size_t>(nthreads));
  const auto n = static_cast<std::int64_t>(corpus.documents.size());
#pragma omp parallel for num_threads(nthreads) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& doc = corpus.documents[static_cast<std::size_t>(i)];
    if (pred(doc)) ++partial[static_cast<std::size_t>(omp_get_thread_num())][doc.month()];
  }
  MonthCounts total;
  for (const auto& p : partial)
    for (const auto& [m, c] : p) total[m] += c;
  return total;
}

MonthlySeries series_over_range(const CorpusStats& stats, std::string label, Stage stage,
                                const std::function<double(Month, std::uint64_t)>& value) {
  MonthlySeries series;
  series.label = std::move(label);
  series.stage = stage;
  auto range = stats_range(stats);
  if (!range) return series;
  for (Month m : range->months()) {
    auto it = stats.docs_per_month.find(m);
    if (it == stats.docs_per_month.end() || it->second == 0) {
      series.values[m] = std::nullopt;
    } else {
      series.values[m] = value(m, it->second);
    }
  }
  return series;
}

std::uint64_t lookup(const MonthCounts& counts, Month m) {
  auto it = counts.find(m);
  return it == counts.end() ? 0 : it->second;
}

}  // namespace

bool bbd_match(std::span<const std::string> tokens, const KeywordSets& sets) {
  return intersects(tokens, sets.economy) && intersects(tokens, sets.policy) && intersects(tokens, sets.uncertainty);
}

MonthlySeries bbd_raw(const Corpus& corpus, const KeywordSets& sets, int threads) {
  auto matches = count_monthly(corpus, [&](const Document& d) { return bbd_match(d.tokens, sets); }, threads);
  return series_over_range(corpus.stats, "bbd", Stage::Normalized, [&](Month m, std::uint64_t total) {
    return static_cast<double>(lookup(matches, m)) / static_cast<double>(total);
  });
}

MonthlySeries bbd_index(const Corpus& corpus, const KeywordSets& sets, int threads) {
  return standardize(bbd_raw(corpus, sets, threads));
}

MonthlySeries braun_raw(const Corpus& corpus, const KeywordSets& sets, const BraunOptions& options, int threads) {
  auto is_economic = [&](const Document& d) {
    if (options.econ_filter.kind == EconFilter::Kind::Topic) return options.econ_filter.topics.contains(d.topic);
    return intersects(d.tokens, sets.economy);
  };
  auto is_uncertain = [&](const Document& d) { return intersects(d.tokens, sets.uncertainty); };
  auto is_econ_policy = [&](const Document& d) { return is_economic(d) && intersects(d.tokens, sets.policy); };

  const Stage stage = options.normalize ? Stage::Normalized : Stage::Raw;
  if (options.mode == BraunOptions::Mode::Joint) {
    auto joint = count_monthly(corpus, [&](const Document& d) { return is_uncertain(d) && is_econ_policy(d); },
                               threads);
    return series_over_range(corpus.stats, "braun", stage, [&](Month m, std::uint64_t total) {
      double v = static_cast<double>(lookup(joint, m));
      return options.normalize ? v / static_cast<double>(total) : v;
    });
  }
  auto uncertain = count_monthly(corpus, is_uncertain, threads);
  auto econ_policy = count_monthly(corpus, is_econ_policy, threads);
  return series_over_range(corpus.stats, "braun", stage, [&](Month m, std::uint64_t total) {
    double v = static_cast<double>(lookup(uncertain, m)) * static_cast<double>(lookup(econ_policy, m));
    return options.normalize ? v / (static_cast<double>(total) * static_cast<double>(total)) : v;
  });
}

MonthlySeries braun_index(const Corpus& corpus, const KeywordSets& sets, const BraunOptions& options, int threads) {
  return standardize(braun_raw(corpus, sets, options, threads));
}

}  // namespace epu

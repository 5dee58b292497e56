#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_set>

#include "epu/corpus.hpp"
#include "epu/series.hpp"

namespace epu {

/// Economy, policy and uncertainty term groups, normalized by the corpus
/// tokenizer.
struct KeywordSets {
  std::unordered_set<std::string> economy;
  std::unordered_set<std::string> policy;
  std::unordered_set<std::string> uncertainty;
};

/// Plain-text file with "[economy]", "[policy]" and "[uncertainty]" section
/// headers and one term per line. Throws IoError / ConfigError (unknown
/// section, empty group).
KeywordSets load_keywords(const std::filesystem::path& path);
KeywordSets parse_keywords(std::istream& in);

/// True iff the tokens intersect all three groups.
bool bbd_match(std::span<const std::string> tokens, const KeywordSets& sets);

/// Monthly match count / monthly article total (stage normalized).
MonthlySeries bbd_raw(const Corpus& corpus, const KeywordSets& sets, int threads = 0);
/// bbd_raw, standardized.
MonthlySeries bbd_index(const Corpus& corpus, const KeywordSets& sets, int threads = 0);

/// Which articles count as economic news.
struct EconFilter {
  enum class Kind { Topic, Keywords } kind = Kind::Keywords;
  std::unordered_set<std::string> topics{"economy", "financial"};
};

struct BraunOptions {
  enum class Mode {
    Product,  // (#uncertainty docs) × (#economic docs with policy terms)
    Joint,    // #docs that are both
  } mode = Mode::Product;
  EconFilter econ_filter;
  bool normalize = false;  // divide by total² (Product) or total (Joint)
};

/// Raw monthly Braun values (stage raw, or normalized when options.normalize).
MonthlySeries braun_raw(const Corpus& corpus, const KeywordSets& sets, const BraunOptions& options = {},
                        int threads = 0);
MonthlySeries braun_index(const Corpus& corpus, const KeywordSets& sets, const BraunOptions& options = {},
                          int threads = 0);

}  // namespace epu

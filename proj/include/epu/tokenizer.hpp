#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace epu {

struct TokenizerConfig {
  std::unordered_set<std::string> stop_words;
};

/// Default tokenizer: splits on Unicode whitespace and punctuation, lowercases
/// (ASCII, Latin-1, Greek, Cyrillic), drops stop words. Order is preserved.
/// Bytes that are not valid UTF-8 act as separators.
std::vector<std::string> tokenize(std::string_view raw_text, const TokenizerConfig& config = {});

/// Reads a stop-word list, one word per line; '#' starts a comment line.
std::unordered_set<std::string> load_word_list(const std::string& path);

}  // namespace epu

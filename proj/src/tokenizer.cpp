#include "epu/tokenizer.hpp"

#include <fstream>

#include "epu/error.hpp"

namespace epu {

namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one code point starting at text[pos]; advances pos.
char32_t decode_utf8(std::string_view text, std::size_t& pos) {
  auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return kInvalid;
  }
  if (pos + extra >= text.size()) {
    ++pos;
    return kInvalid;
  }
  for (int i = 1; i <= extra; ++i) {
    unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += extra + 1;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_separator(char32_t c) {
  if (c == kInvalid) return true;
  if (c < 0x80) {
    // ASCII: everything that is not a letter or digit separates.
    return !((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'));
  }
  // Unicode White_Space
  if (c == 0x85 || c == 0xA0 || c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 ||
      c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000)
    return true;
  // Latin-1 punctuation and symbols
  if ((c >= 0xA1 && c <= 0xBF) || c == 0xD7 || c == 0xF7) return true;
  // General Punctuation (ZWNJ/ZWJ are word-internal in Persian and Arabic scripts)
  if (c >= 0x2010 && c <= 0x206F) return c != 0x200C && c != 0x200D;
  // Arabic-script punctuation
  if (c == 0x060C || c == 0x061B || c == 0x061F || (c >= 0x066A && c <= 0x066D) || c == 0x06D4)
    return true;
  // CJK symbols and punctuation, fullwidth ASCII punctuation
  if (c >= 0x3001 && c <= 0x303F) return true;
  if ((c >= 0xFF01 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20)) return true;
  return false;
}

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 0x20;
  if (c < 0x80) return c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view raw_text, const TokenizerConfig& config) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    if (config.stop_words.empty() || !config.stop_words.contains(current))
      tokens.push_back(std::move(current));
    current.clear();
  };
  std::size_t pos = 0;
  while (pos < raw_text.size()) {
    unsigned char b = static_cast<unsigned char>(raw_text[pos]);
    if (b < 0x80) {
      ++pos;
      if (is_separator(b)) {
        flush();
      } else {
        current.push_back(static_cast<char>(b >= 'A' && b <= 'Z' ? b + 0x20 : b));
      }
      continue;
    }
    char32_t cp = decode_utf8(raw_text, pos);
    if (is_separator(cp)) {
      flush();
    } else {
      encode_utf8(to_lower(cp), current);
    }
  }
  flush();
  return tokens;
}

std::unordered_set<std::string> load_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open word list: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    for (auto& t : tokenize(line)) words.insert(std::move(t));
  }
  return words;
}

}  // namespace epu

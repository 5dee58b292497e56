#include "epu/month.hpp"

#include <chrono>
#include <cstdio>

namespace epu {

namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t width, int& out) {
  if (pos + width > text.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::string Month::str() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year(), month());
  return buf;
}

std::optional<Month> Month::parse(std::string_view text) {
  int y = 0, m = 0;
  if (text.size() != 7 || text[4] != '-') return std::nullopt;
  if (!read_int(text, 0, 4, y) || !read_int(text, 5, 2, m)) return std::nullopt;
  if (m < 1 || m > 12) return std::nullopt;
  return Month(y, m);
}

std::string Quarter::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-Q%d", year, q);
  return buf;
}

std::optional<Quarter> Quarter::parse(std::string_view text) {
  int y = 0, q = 0;
  if (text.size() != 7 || text[4] != '-' || (text[5] != 'Q' && text[5] != 'q'))
    return std::nullopt;
  if (!read_int(text, 0, 4, y) || !read_int(text, 6, 1, q)) return std::nullopt;
  if (q < 1 || q > 4) return std::nullopt;
  return Quarter{y, q};
}

std::optional<UnixSeconds> parse_iso8601(std::string_view text) {
  using namespace std::chrono;
  int y = 0, mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!read_int(text, 0, 4, y) || !read_int(text, 5, 2, mo) || !read_int(text, 8, 2, d))
    return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;

  std::size_t pos = 10;
  long offset = 0;
  if (pos < text.size()) {
    if (text[pos] != 'T' && text[pos] != ' ') return std::nullopt;
    ++pos;
    if (!read_int(text, pos, 2, hh) || pos + 2 >= text.size() || text[pos + 2] != ':' ||
        !read_int(text, pos + 3, 2, mm))
      return std::nullopt;
    pos += 5;
    if (pos < text.size() && text[pos] == ':') {
      if (!read_int(text, pos + 1, 2, ss)) return std::nullopt;
      pos += 3;
      if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) return std::nullopt;
      }
    }
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    if (pos < text.size()) {
      char c = text[pos];
      if (c == 'Z' || c == 'z') {
        ++pos;
      } else if (c == '+' || c == '-') {
        int oh = 0, om = 0;
        if (!read_int(text, pos + 1, 2, oh)) return std::nullopt;
        std::size_t mpos = pos + 3;
        if (mpos < text.size() && text[mpos] == ':') ++mpos;
        if (!read_int(text, mpos, 2, om)) return std::nullopt;
        if (oh > 23 || om > 59) return std::nullopt;
        offset = (c == '+' ? 1 : -1) * (oh * 3600L + om * 60L);
        pos = mpos + 2;
      } else {
        return std::nullopt;
      }
    }
    if (pos != text.size()) return std::nullopt;
  }
  auto days_since = sys_days{ymd}.time_since_epoch().count();
  return static_cast<UnixSeconds>(days_since) * 86400 + hh * 3600L + mm * 60L + ss - offset;
}

std::string format_iso8601(UnixSeconds t) {
  using namespace std::chrono;
  auto day_count = t >= 0 ? t / 86400 : (t - 86399) / 86400;
  auto secs = t - day_count * 86400;
  year_month_day ymd{sys_days{days{day_count}}};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(secs / 3600), static_cast<long long>((secs / 60) % 60),
                static_cast<long long>(secs % 60));
  return buf;
}

Month month_of(UnixSeconds t) {
  using namespace std::chrono;
  auto day_count = t >= 0 ? t / 86400 : (t - 86399) / 86400;
  year_month_day ymd{sys_days{days{day_count}}};
  return Month(static_cast<int>(ymd.year()), static_cast<int>(static_cast<unsigned>(ymd.month())));
}

}  // namespace epu

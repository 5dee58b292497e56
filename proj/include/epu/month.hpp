#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace epu {

/// UTC calendar month. Ordered and hashable through its linear index.
class Month {
 public:
  constexpr Month() = default;
  constexpr Month(int year, int month) : index_(year * 12 + (month - 1)) {}

  static constexpr Month from_index(int index) {
    Month m;
    m.index_ = index;
    return m;
  }

  constexpr int year() const { return index_ >= 0 ? index_ / 12 : (index_ - 11) / 12; }
  constexpr int month() const { return index_ - year() * 12 + 1; }
  constexpr int quarter() const { return (month() - 1) / 3 + 1; }
  constexpr int index() const { return index_; }

  constexpr Month next() const { return from_index(index_ + 1); }
  constexpr int operator-(Month other) const { return index_ - other.index_; }

  constexpr auto operator<=>(const Month&) const = default;

  /// "YYYY-MM"
  std::string str() const;
  static std::optional<Month> parse(std::string_view text);

 private:
  int index_ = 0;
};

/// Calendar quarter, "YYYY-Q#".
struct Quarter {
  int year = 0;
  int q = 1;

  constexpr int index() const { return year * 4 + (q - 1); }
  constexpr Month first_month() const { return Month(year, (q - 1) * 3 + 1); }
  static constexpr Quarter of(Month m) { return Quarter{m.year(), m.quarter()}; }
  constexpr auto operator<=>(const Quarter&) const = default;

  std::string str() const;
  static std::optional<Quarter> parse(std::string_view text);
};

/// Seconds since the Unix epoch, UTC.
using UnixSeconds = std::int64_t;

/// Parses ISO-8601 date-times: "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS[.fff]]"
/// with an optional "Z" or "+HH:MM"/"-HH:MM" offset. A missing offset means
/// UTC. Returns nullopt on any malformed or out-of-range field.
std::optional<UnixSeconds> parse_iso8601(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_iso8601(UnixSeconds t);

Month month_of(UnixSeconds t);

}  // namespace epu

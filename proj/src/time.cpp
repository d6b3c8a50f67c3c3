#include "fmros/util/time.hpp"

#include <array>
#include <charconv>

namespace fmros {

namespace {

bool parse_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  const char* first = s.data() + pos;
  auto res = std::from_chars(first, first + len, out);
  return res.ec == std::errc{} && res.ptr == first + len;
}

}  // namespace

std::optional<UtcSeconds> parse_iso8601(std::string_view text) {
  // Trim surrounding whitespace.
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r' || text.back() == '\t'))
    text.remove_suffix(1);

  int y = 0, mo = 0, d = 0, hh = 0, mi = 0, ss = 0;
  if (!parse_int(text, 0, 4, y) || text.size() < 10) return std::nullopt;
  if (text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!parse_int(text, 5, 2, mo) || !parse_int(text, 8, 2, d)) return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;

  std::size_t pos = 10;
  if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
    if (!parse_int(text, pos + 1, 2, hh)) return std::nullopt;
    if (pos + 3 >= text.size() || text[pos + 3] != ':') return std::nullopt;
    if (!parse_int(text, pos + 4, 2, mi)) return std::nullopt;
    pos += 6;
    if (pos < text.size() && text[pos] == ':') {
      if (!parse_int(text, pos + 1, 2, ss)) return std::nullopt;
      pos += 3;
      if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      }
    }
    if (hh > 23 || mi > 59 || ss > 60) return std::nullopt;
  }
  if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) ++pos;
  if (pos != text.size()) return std::nullopt;

  return timeutil::from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d), hh, mi, ss);
}

std::string format_iso8601(UtcSeconds t) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t rem = t % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --days;
  }
  const auto cd = timeutil::civil_from_days(days);
  const int hh = static_cast<int>(rem / 3600);
  const int mi = static_cast<int>(rem / 60 % 60);
  const int ss = static_cast<int>(rem % 60);

  std::array<char, 24> buf{};
  char* p = buf.data();
  auto put = [&p](int value, int width) {
    for (int i = width - 1; i >= 0; --i) {
      p[i] = static_cast<char>('0' + value % 10);
      value /= 10;
    }
    p += width;
  };
  put(cd.year, 4);
  *p++ = '-';
  put(static_cast<int>(cd.month), 2);
  *p++ = '-';
  put(static_cast<int>(cd.day), 2);
  *p++ = 'T';
  put(hh, 2);
  *p++ = ':';
  put(mi, 2);
  *p++ = ':';
  put(ss, 2);
  *p++ = 'Z';
  return std::string(buf.data(), p);
}

}  // namespace fmros

#include "nsub/ids.hpp"

#include <chrono>
#include <cmath>

#include "nsub/errors.hpp"

namespace nsub {

bool is_valid_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong encodings, surrogates, out of range
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
        (extra == 3 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

}  // namespace

EntityId::EntityId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw Error(ErrorCode::MalformedId, "entity id is empty");
  for (char c : value_) {
    if (is_space(c) || static_cast<unsigned char>(c) < 0x20) {
      throw Error(ErrorCode::MalformedId, "entity id '" + value_ + "' contains whitespace");
    }
  }
  if (value_.front() == '@') {
    throw Error(ErrorCode::MalformedId, "entity id '" + value_ + "' uses the reserved '@' prefix");
  }
  if (!is_valid_utf8(value_)) throw Error(ErrorCode::MalformedId, "entity id is not valid UTF-8");
}

RegimeId::RegimeId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw Error(ErrorCode::MalformedId, "regime id is empty");
  for (char c : value_) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '.' || c == '+' || c == '-';
    if (!ok) throw Error(ErrorCode::MalformedId, "regime id '" + value_ + "' has invalid characters");
  }
}

Timestamp::Timestamp(std::string text, std::int64_t seconds, std::int32_t nanos)
    : text_(std::move(text)), seconds_(seconds), nanos_(nanos) {}

Timestamp Timestamp::parse(std::string_view text) {
  auto fail = [&]() -> Timestamp {
    throw Error(ErrorCode::MalformedValue,
                "'" + std::string(text) + "' is not an RFC 3339 UTC timestamp");
  };
  // YYYY-MM-DDTHH:MM:SS[.f{1,9}]Z
  if (text.size() < 20) return fail();
  auto digits = [&](std::size_t pos, std::size_t n, int& out) {
    out = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const char c = text[pos + k];
      if (c < '0' || c > '9') return false;
      out = out * 10 + (c - '0');
    }
    return true;
  };
  int year, month, day, hour, minute, second;
  if (!digits(0, 4, year) || text[4] != '-' || !digits(5, 2, month) || text[7] != '-' ||
      !digits(8, 2, day) || text[10] != 'T' || !digits(11, 2, hour) || text[13] != ':' ||
      !digits(14, 2, minute) || text[16] != ':' || !digits(17, 2, second)) {
    return fail();
  }
  std::size_t pos = 19;
  std::int32_t nanos = 0;
  if (text[pos] == '.') {
    ++pos;
    std::size_t n = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (++n > 9) return fail();
      nanos = nanos * 10 + (text[pos] - '0');
      ++pos;
    }
    if (n == 0) return fail();
    for (std::size_t k = n; k < 9; ++k) nanos *= 10;
  }
  if (pos + 1 != text.size() || text[pos] != 'Z') return fail();
  if (hour > 23 || minute > 59 || second > 59) return fail();

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return fail();
  const auto days = sys_days{ymd}.time_since_epoch().count();
  const std::int64_t seconds =
      static_cast<std::int64_t>(days) * 86400 + hour * 3600 + minute * 60 + second;
  return Timestamp(std::string(text), seconds, nanos);
}

std::strong_ordering operator<=>(const Timestamp& a, const Timestamp& b) {
  if (auto c = a.seconds_ <=> b.seconds_; c != 0) return c;
  if (auto c = a.nanos_ <=> b.nanos_; c != 0) return c;
  return a.text_ <=> b.text_;
}

void validate_value(const AttributeValue& value) {
  if (const auto* d = std::get_if<double>(&value); d && !std::isfinite(*d)) {
    throw Error(ErrorCode::MalformedValue, "decimal values must be finite");
  }
  if (const auto* s = std::get_if<std::string>(&value); s && !is_valid_utf8(*s)) {
    throw Error(ErrorCode::MalformedValue, "string value is not valid UTF-8");
  }
}

std::string_view value_kind(const AttributeValue& value) {
  switch (value.index()) {
    case 0: return "string";
    case 1: return "integer";
    case 2: return "decimal";
    case 3: return "boolean";
    default: return "timestamp";
  }
}

}  // namespace nsub

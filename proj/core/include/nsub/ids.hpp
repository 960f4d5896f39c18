#pragma once

// Value types shared by every module: identifiers, timestamps and the
// scalar attribute values entities and annotations carry.

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>

namespace nsub {

bool is_valid_utf8(std::string_view text);

/// Caller-supplied opaque identity key. Non-empty, valid UTF-8, no
/// whitespace. A leading '@' is reserved for edge ids.
class EntityId {
 public:
  explicit EntityId(std::string value);

  const std::string& str() const noexcept { return value_; }

  friend auto operator<=>(const EntityId&, const EntityId&) = default;

 private:
  std::string value_;
};

/// Names an identity-and-persistence regime. The default schema uses K1..K6;
/// custom schemas may declare others. Restricted to [A-Za-z0-9_.+-].
class RegimeId {
 public:
  explicit RegimeId(std::string value);

  const std::string& str() const noexcept { return value_; }

  friend auto operator<=>(const RegimeId&, const RegimeId&) = default;

 private:
  std::string value_;
};

namespace regimes {
inline const RegimeId K1{"K1"};
inline const RegimeId K2{"K2"};
inline const RegimeId K3{"K3"};
inline const RegimeId K4{"K4"};
inline const RegimeId K5{"K5"};
inline const RegimeId K6{"K6"};
}  // namespace regimes

/// RFC 3339 UTC instant, e.g. "2024-01-05T00:00:00Z" or with up to nine
/// fractional digits. Keeps the original spelling; ordered by instant first.
class Timestamp {
 public:
  static Timestamp parse(std::string_view text);

  const std::string& str() const noexcept { return text_; }
  std::int64_t epoch_seconds() const noexcept { return seconds_; }
  std::int32_t nanos() const noexcept { return nanos_; }

  friend std::strong_ordering operator<=>(const Timestamp& a, const Timestamp& b);
  friend bool operator==(const Timestamp& a, const Timestamp& b) {
    return a.text_ == b.text_;
  }

 private:
  Timestamp(std::string text, std::int64_t seconds, std::int32_t nanos);

  std::string text_;
  std::int64_t seconds_;
  std::int32_t nanos_;
};

using AttributeValue = std::variant<std::string, std::int64_t, double, bool, Timestamp>;

/// Throws MalformedValue for non-finite decimals or invalid UTF-8.
void validate_value(const AttributeValue& value);

std::string_view value_kind(const AttributeValue& value);

}  // namespace nsub

template <>
struct std::hash<nsub::EntityId> {
  std::size_t operator()(const nsub::EntityId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

template <>
struct std::hash<nsub::RegimeId> {
  std::size_t operator()(const nsub::RegimeId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

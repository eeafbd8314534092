#include "surfkit/wizard/value.hpp"

#include "surfkit/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <tuple>

namespace surfkit::wizard {
namespace {

constexpr std::array<UnitInfo, 10> kUnits{{
    {"mm", Dimension::Length, 1e-3},
    {"cm", Dimension::Length, 1e-2},
    {"m", Dimension::Length, 1.0},
    {"um", Dimension::Length, 1e-6},
    {"N", Dimension::Force, 1.0},
    {"kN", Dimension::Force, 1e3},
    {"deg", Dimension::Angle, 1.0},
    {"rpm", Dimension::RotationalSpeed, 1.0},
    {"m/s", Dimension::Speed, 1.0},
    {"mm/s", Dimension::Speed, 1e-3},
}};

bool iequal(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

std::optional<UnitInfo> find_unit(std::string_view token) {
  for (const auto& u : kUnits) {
    if (iequal(u.symbol, token)) return u;
  }
  return std::nullopt;
}

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::Length: return "length";
    case Dimension::Force: return "force";
    case Dimension::Angle: return "angle";
    case Dimension::RotationalSpeed: return "rotational speed";
    case Dimension::Speed: return "speed";
  }
  return "length";
}

Quantity parse_quantity(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  const std::string_view t = trim(text);
  std::string_view num = t;
  if (!num.empty() && num.front() == '+') num.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
  if (ec != std::errc() || ptr == num.data() || !std::isfinite(value))
    throw Error(Errc::ParseError, "expected a number in '" + std::string(text) + "'");
  const std::string_view unit_token = trim(std::string_view(ptr, static_cast<std::size_t>(num.data() + num.size() - ptr)));
  if (unit_token.empty()) throw Error(Errc::ParseError, "missing unit in '" + std::string(text) + "'");
  const auto unit = find_unit(unit_token);
  if (!unit) throw Error(Errc::ParseError, "unknown unit '" + std::string(unit_token) + "'");
  Quantity q;
  q.value = value;
  q.unit = std::string(unit->symbol);
  q.canonical = value * unit->to_canonical;
  q.dimension = unit->dimension;
  return q;
}

Value Value::symbol(std::string name) {
  Value v;
  v.kind_ = Kind::Symbol;
  v.text_ = std::move(name);
  return v;
}

Value Value::string(std::string text) {
  Value v;
  v.kind_ = Kind::String;
  v.text_ = std::move(text);
  return v;
}

Value Value::number(double n) {
  Value v;
  v.kind_ = Kind::Number;
  v.number_ = n;
  return v;
}

Value Value::quantity(Quantity q) {
  Value v;
  v.kind_ = Kind::Quantity;
  v.number_ = q.canonical;
  v.quantity_ = std::move(q);
  return v;
}

Value Value::boolean(bool b) {
  Value v;
  v.kind_ = Kind::Boolean;
  v.boolean_ = b;
  return v;
}

std::optional<double> Value::numeric() const {
  if (kind_ == Kind::Number || kind_ == Kind::Quantity) return number_;
  return std::nullopt;
}

std::string Value::to_kb() const {
  switch (kind_) {
    case Kind::Symbol: return text_;
    case Kind::String: {
      std::string out = "\"";
      for (char c : text_) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      return out + "\"";
    }
    case Kind::Number: return format_number(number_);
    case Kind::Quantity: return format_number(quantity_.value) + "~" + quantity_.unit;
    case Kind::Boolean: return boolean_ ? "true" : "false";
  }
  return text_;
}

std::string Value::display() const {
  switch (kind_) {
    case Kind::Symbol:
    case Kind::String: return text_;
    case Kind::Number: return format_number(number_);
    case Kind::Quantity: return format_number(quantity_.value) + " " + quantity_.unit;
    case Kind::Boolean: return boolean_ ? "yes" : "no";
  }
  return text_;
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Value::Kind::Symbol:
    case Value::Kind::String: return a.text_ == b.text_;
    case Value::Kind::Number: return a.number_ == b.number_;
    case Value::Kind::Quantity: return a.quantity_.value == b.quantity_.value && a.quantity_.unit == b.quantity_.unit;
    case Value::Kind::Boolean: return a.boolean_ == b.boolean_;
  }
  return false;
}

bool operator<(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  switch (a.kind_) {
    case Value::Kind::Symbol:
    case Value::Kind::String: return a.text_ < b.text_;
    case Value::Kind::Number: return a.number_ < b.number_;
    case Value::Kind::Quantity:
      return std::tie(a.quantity_.value, a.quantity_.unit) < std::tie(b.quantity_.value, b.quantity_.unit);
    case Value::Kind::Boolean: return a.boolean_ < b.boolean_;
  }
  return false;
}

nlohmann::json to_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Symbol: return {{"symbol", v.text()}};
    case Value::Kind::String: return {{"string", v.text()}};
    case Value::Kind::Number: return {{"number", v.number()}};
    case Value::Kind::Quantity:
      return {{"quantity", {{"value", v.quantity().value}, {"unit", v.quantity().unit}, {"si", v.quantity().canonical}}}};
    case Value::Kind::Boolean: return {{"bool", v.boolean()}};
  }
  return nullptr;
}

Value value_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("symbol")) return Value::symbol(j["symbol"].get<std::string>());
    if (j.contains("string")) return Value::string(j["string"].get<std::string>());
    if (j.contains("number")) return Value::number(j["number"].get<double>());
    if (j.contains("bool")) return Value::boolean(j["bool"].get<bool>());
    if (j.contains("quantity")) {
      const auto& q = j["quantity"];
      const auto unit = find_unit(q.at("unit").get<std::string>());
      if (!unit) throw Error(Errc::ParseError, "unknown unit in stored quantity");
      Quantity out;
      out.value = q.at("value").get<double>();
      out.unit = std::string(unit->symbol);
      out.canonical = out.value * unit->to_canonical;
      out.dimension = unit->dimension;
      return Value::quantity(out);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed value: ") + e.what());
  }
  throw Error(Errc::ParseError, "malformed value: " + j.dump());
}

}  // namespace surfkit::wizard

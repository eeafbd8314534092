#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace surfkit::wizard {

enum class Dimension { Length, Force, Angle, RotationalSpeed, Speed };

struct UnitInfo {
  std::string_view symbol;
  Dimension dimension;
  double to_canonical;  // canonical units: m, N, deg, rpm, m/s
};

/// Case-insensitive lookup in the unit table (mm, cm, m, um, N, kN, deg,
/// rpm, m/s, mm/s).
std::optional<UnitInfo> find_unit(std::string_view token);
std::string_view dimension_name(Dimension d);

struct Quantity {
  double value = 0.0;
  std::string unit;      // as declared, normalized to the table spelling
  double canonical = 0.0;
  Dimension dimension = Dimension::Length;
};

/// "<number> <unit>" with optional whitespace. Word numerals, missing
/// numbers and unknown units raise ParseError.
Quantity parse_quantity(std::string_view text);

/// Symbol, string, plain number, quantity or boolean.
class Value {
 public:
  enum class Kind { Symbol, String, Number, Quantity, Boolean };

  static Value symbol(std::string name);
  static Value string(std::string text);
  static Value number(double v);
  static Value quantity(Quantity q);
  static Value boolean(bool b);

  Kind kind() const { return kind_; }
  bool is_symbol() const { return kind_ == Kind::Symbol; }
  const std::string& text() const { return text_; }  // symbol name or string
  double number() const { return number_; }           // canonical for quantities
  const Quantity& quantity() const { return quantity_; }
  bool boolean() const { return boolean_; }

  /// Numeric view: plain numbers and quantities (canonical value).
  std::optional<double> numeric() const;

  /// KB syntax: bare symbol, quoted string, 5e-4~m, true.
  std::string to_kb() const;
  /// Human form used in prompts: "0.5 mm", "Sanding", "yes".
  std::string display() const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator<(const Value& a, const Value& b);

 private:
  Kind kind_ = Kind::Symbol;
  std::string text_;
  double number_ = 0.0;
  Quantity quantity_;
  bool boolean_ = false;
};

nlohmann::json to_json(const Value& v);
/// Throws ParseError.
Value value_from_json(const nlohmann::json& j);

}  // namespace surfkit::wizard

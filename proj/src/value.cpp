#include "panelscope/value.hpp"

#include <cmath>
#include <cstdio>

namespace panelscope {

std::string_view to_string(ColumnType type) noexcept {
  switch (type) {
    case ColumnType::Integer: return "integer";
    case ColumnType::Real: return "real";
    case ColumnType::Text: return "text";
    case ColumnType::Boolean: return "boolean";
  }
  return "unknown";
}

std::optional<double> as_real(const Cell& c) noexcept {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* b = std::get_if<bool>(&c)) return *b ? 1.0 : 0.0;
  return std::nullopt;
}

bool cells_equal(const Cell& a, const Cell& b) noexcept {
  const bool a_num = std::holds_alternative<std::int64_t>(a) || std::holds_alternative<double>(a);
  const bool b_num = std::holds_alternative<std::int64_t>(b) || std::holds_alternative<double>(b);
  if (a_num && b_num) return *as_real(a) == *as_real(b);
  return a == b;
}

ColumnType cell_type(const Cell& c) noexcept {
  switch (c.index()) {
    case 1: return ColumnType::Integer;
    case 3: return ColumnType::Text;
    case 4: return ColumnType::Boolean;
    default: return ColumnType::Real;
  }
}

std::string format_real(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_real(d); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace panelscope

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace panelscope {

enum class ColumnType { Integer, Real, Text, Boolean };

std::string_view to_string(ColumnType type) noexcept;

/// One table cell. `std::monostate` is a missing value.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string, bool>;

inline bool is_missing(const Cell& c) noexcept {
  return std::holds_alternative<std::monostate>(c);
}

/// Numeric view of a cell: integers and reals convert, booleans map to 0/1,
/// missing and text yield nullopt.
std::optional<double> as_real(const Cell& c) noexcept;

/// Exact equality between cells; integer and real cells compare numerically.
bool cells_equal(const Cell& a, const Cell& b) noexcept;

/// Type a cell would naturally carry (Real for missing).
ColumnType cell_type(const Cell& c) noexcept;

/// Rendering used by CSV output: reals keep at most six fractional digits with
/// trailing zeros trimmed, booleans are true/false, missing is empty.
std::string format_cell(const Cell& c);
std::string format_real(double v);

struct Column {
  std::string name;
  ColumnType type = ColumnType::Real;
  std::vector<Cell> cells;

  bool is_numeric() const noexcept {
    return type == ColumnType::Integer || type == ColumnType::Real;
  }
};

}  // namespace panelscope

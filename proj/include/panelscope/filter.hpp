#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "panelscope/feature_table.hpp"

namespace panelscope {

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

/// Right-hand side `max(col)` / `min(col)`: the column aggregate over the table.
struct Aggregate {
  enum class Kind { Max, Min } kind;
  std::string column;
};

/// `<column> <op> <literal>`, where the literal is a number, true/false, a
/// bare or quoted word, or an aggregate.
struct FilterExpr {
  std::string column;
  CompareOp op = CompareOp::Eq;
  std::variant<double, bool, std::string, Aggregate> rhs;
};

/// Throws InvalidArgument on malformed text.
FilterExpr parse_filter(std::string_view text);

/// Rows of `table` satisfying `expr`, in table order. Rows whose cell is
/// missing never match. Throws UnknownColumn or TypeMismatch.
std::vector<std::size_t> matching_rows(const FeatureTable& table, const FilterExpr& expr);

}  // namespace panelscope

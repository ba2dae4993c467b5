#include "panelscope/filter.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include "panelscope/error.hpp"

namespace panelscope {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_ident(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

template <typename T>
bool compare(CompareOp op, const T& a, const T& b) {
  switch (op) {
    case CompareOp::Eq: return a == b;
    case CompareOp::Ne: return a != b;
    case CompareOp::Lt: return a < b;
    case CompareOp::Le: return a <= b;
    case CompareOp::Gt: return a > b;
    case CompareOp::Ge: return a >= b;
  }
  return false;
}

}  // namespace

FilterExpr parse_filter(std::string_view text) {
  static constexpr std::pair<std::string_view, CompareOp> kOps[] = {
      {"==", CompareOp::Eq}, {"!=", CompareOp::Ne}, {"<=", CompareOp::Le},
      {">=", CompareOp::Ge}, {"<", CompareOp::Lt},  {">", CompareOp::Gt}};
  const auto bad = [&](const std::string& why) {
    return Error(ErrorCode::InvalidArgument,
                 "bad filter '" + std::string(text) + "': " + why);
  };

  std::size_t pos = std::string_view::npos;
  std::string_view op_text;
  CompareOp op = CompareOp::Eq;
  for (const auto& [tok, o] : kOps) {
    const auto p = text.find(tok);
    if (p != std::string_view::npos && (pos == std::string_view::npos || p < pos)) {
      pos = p;
      op_text = tok;
      op = o;
    }
  }
  if (pos == std::string_view::npos) throw bad("expected one of == != < <= > >=");

  FilterExpr expr;
  expr.op = op;
  expr.column = std::string(trim(text.substr(0, pos)));
  if (!is_ident(expr.column)) throw bad("left side must be a column name");
  const auto rhs = trim(text.substr(pos + op_text.size()));
  if (rhs.empty()) throw bad("missing right side");

  if (rhs.size() >= 2 && (rhs.front() == '"' || rhs.front() == '\'') &&
      rhs.back() == rhs.front()) {
    expr.rhs = std::string(rhs.substr(1, rhs.size() - 2));
    return expr;
  }
  for (const auto& [name, kind] : {std::pair{std::string_view("max("), Aggregate::Kind::Max},
                                   std::pair{std::string_view("min("), Aggregate::Kind::Min}}) {
    if (rhs.substr(0, name.size()) == name) {
      if (rhs.back() != ')') throw bad("unclosed aggregate");
      const auto col = trim(rhs.substr(name.size(), rhs.size() - name.size() - 1));
      if (!is_ident(col)) throw bad("aggregate needs a column name");
      expr.rhs = Aggregate{kind, std::string(col)};
      return expr;
    }
  }
  if (rhs == "true" || rhs == "TRUE") {
    expr.rhs = true;
    return expr;
  }
  if (rhs == "false" || rhs == "FALSE") {
    expr.rhs = false;
    return expr;
  }
  double number = 0;
  const auto* begin = rhs.data() + (rhs.front() == '+' ? 1 : 0);
  const auto [ptr, ec] = std::from_chars(begin, rhs.data() + rhs.size(), number);
  if (ec == std::errc() && ptr == rhs.data() + rhs.size()) {
    expr.rhs = number;
    return expr;
  }
  if (!is_ident(rhs)) throw bad("unrecognised literal");
  expr.rhs = std::string(rhs);
  return expr;
}

std::vector<std::size_t> matching_rows(const FeatureTable& table, const FilterExpr& expr) {
  const Column& col = table.column(expr.column);
  std::vector<std::size_t> rows;

  if (const auto* s = std::get_if<std::string>(&expr.rhs)) {
    if (col.type != ColumnType::Text) {
      throw Error(ErrorCode::TypeMismatch, "column '" + expr.column + "' is not text");
    }
    for (std::size_t i = 0; i < col.cells.size(); ++i) {
      const auto* v = std::get_if<std::string>(&col.cells[i]);
      if (v && compare(expr.op, *v, *s)) rows.push_back(i);
    }
    return rows;
  }

  if (const auto* b = std::get_if<bool>(&expr.rhs)) {
    if (expr.op != CompareOp::Eq && expr.op != CompareOp::Ne) {
      throw Error(ErrorCode::InvalidArgument, "booleans only support == and !=");
    }
    // Real 0/1 columns (the composite set's flags) compare as booleans too.
    if (col.type == ColumnType::Text) {
      throw Error(ErrorCode::TypeMismatch, "column '" + expr.column + "' is text");
    }
    for (std::size_t i = 0; i < col.cells.size(); ++i) {
      const auto v = as_real(col.cells[i]);
      if (v && compare(expr.op, *v != 0.0, *b)) rows.push_back(i);
    }
    return rows;
  }

  double target = 0;
  if (const auto* d = std::get_if<double>(&expr.rhs)) {
    target = *d;
  } else {
    const auto& agg = std::get<Aggregate>(expr.rhs);
    std::optional<double> best;
    for (const auto& v : table.numeric(agg.column)) {
      if (!v) continue;
      if (!best || (agg.kind == Aggregate::Kind::Max ? *v > *best : *v < *best)) best = v;
    }
    if (!best) return rows;
    target = *best;
  }
  const auto values = table.numeric(expr.column);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] && compare(expr.op, *values[i], target)) rows.push_back(i);
  }
  return rows;
}

}  // namespace panelscope

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "panelscope/error.hpp"
#include "panelscope/features.hpp"
#include "panelscope/panel.hpp"
#include "support.hpp"

using namespace panelscope;
using testkit::make_panel;
using testkit::Row;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no panelscope::Error thrown";
  return ErrorCode::InvalidArgument;
}

PanelTable from_records(const std::vector<Record>& records) {
  return build_panel(std::span<const Record>(records), {"country", "year", true});
}

}  // namespace

TEST(BuildPanel, SingleRow) {
  const auto t = from_records({{{"country", "A"}, {"year", std::int64_t{1990}}, {"h", 170.0}}});
  EXPECT_EQ(t.n_keys(), 1u);
  EXPECT_EQ(t.rows(), 1u);
  EXPECT_EQ(t.index_type(), ColumnType::Integer);
  EXPECT_TRUE(cells_equal(t.cell("year", 0), std::int64_t{1990}));
  EXPECT_TRUE(cells_equal(t.cell("h", 0), 170.0));
}

TEST(BuildPanel, DuplicateKeyIndexNamesTheRepeat) {
  const std::vector<Record> records{
      {{"country", "A"}, {"year", std::int64_t{1990}}, {"h", 170.0}},
      {{"country", "B"}, {"year", std::int64_t{1990}}, {"h", 160.0}},
      {{"country", "A"}, {"year", std::int64_t{1990}}, {"h", 171.0}}};
  try {
    from_records(records);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateKeyIndex);
    ASSERT_TRUE(e.record().has_value());
    EXPECT_EQ(*e.record(), 2u);
  }
}

TEST(BuildPanel, SortsByKeyThenIndex) {
  const auto t = make_panel({{"b", 2, 1}, {"a", 3, 2}, {"b", 1, 3}, {"a", 1, 4}});
  EXPECT_EQ(t.keys(), (std::vector<std::string>{"a", "a", "b", "b"}));
  EXPECT_EQ(t.index(), (std::vector<double>{1, 3, 1, 2}));
  EXPECT_EQ(t.values("y", t.groups()[1]), (std::vector<double>{3, 1}));
}

TEST(BuildPanel, KeysCompareAsExactStrings) {
  const auto t = make_panel({{"a", 1, 1}, {"A", 1, 1}, {"a ", 1, 1}});
  EXPECT_EQ(t.n_keys(), 3u);
}

TEST(BuildPanel, Errors) {
  Column key{"id", ColumnType::Text, {Cell{"a"}, Cell{"b"}}};
  Column idx{"t", ColumnType::Integer, {Cell{std::int64_t{1}}, Cell{std::int64_t{2}}}};
  Column text_idx{"t", ColumnType::Text, {Cell{"x"}, Cell{"y"}}};
  Column short_col{"y", ColumnType::Real, {Cell{1.0}}};
  Column missing_key{"id", ColumnType::Text, {Cell{"a"}, Cell{}}};

  EXPECT_EQ(code_of([&] { build_panel({key, idx}, {"id", "nope", true}); }),
            ErrorCode::MissingColumn);
  EXPECT_EQ(code_of([&] { build_panel({key, idx}, {"id", "id", true}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { build_panel({key, idx, short_col}, {"id", "t", true}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { build_panel({key, text_idx}, {"id", "t", true}); }),
            ErrorCode::TypeMismatch);
  EXPECT_EQ(code_of([&] { build_panel({missing_key, idx}, {"id", "t", true}); }),
            ErrorCode::MissingKeyOrIndex);
  EXPECT_EQ(code_of([&] {
              build_panel({Column{"id", ColumnType::Text, {}}, Column{"t", ColumnType::Integer, {}}},
                          {"id", "t", true});
            }),
            ErrorCode::EmptyTable);
  const std::vector<Record> lacking{{{"country", "A"}}};
  EXPECT_EQ(code_of([&] { from_records(lacking); }), ErrorCode::MissingColumn);
}

TEST(BuildPanel, AcceptedInputHasNoDuplicatePairs) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> k(0, 5), t(0, 9);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Row> rows;
    std::set<std::pair<std::string, double>> pairs;
    const int n = 1 + trial % 20;
    for (int i = 0; i < n; ++i) {
      rows.push_back({"k" + std::to_string(k(rng)), double(t(rng)), 0});
      pairs.insert({rows.back().key, rows.back().index});
    }
    const bool has_dup = pairs.size() != rows.size();
    bool threw = false;
    try {
      make_panel(rows);
    } catch (const Error& e) {
      threw = e.code() == ErrorCode::DuplicateKeyIndex;
    }
    EXPECT_EQ(threw, has_dup);
  }
}

TEST(IndexRegular, Examples) {
  EXPECT_TRUE(index_regular(make_panel({{"a", 0, 0}, {"a", 1, 0}, {"b", 2, 0}, {"b", 3, 0}})));
  EXPECT_FALSE(index_regular(make_panel({{"a", 0, 0}, {"a", 1, 0}, {"b", 3, 0}})));
  EXPECT_THROW(index_regular(make_panel({{"a", 0, 0}, {"b", 0, 0}})), Error);
}

TEST(IndexRegular, MatchesSingleDistinctGapRule) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> t(0, 12);
  for (int trial = 0; trial < 500; ++trial) {
    std::set<int> idx;
    const int n = 2 + trial % 6;
    while (static_cast<int>(idx.size()) < n) idx.insert(t(rng));
    std::vector<Row> rows;
    for (int i : idx) rows.push_back({"k", double(i), 0});
    std::set<int> gaps;
    for (auto it = std::next(idx.begin()); it != idx.end(); ++it) gaps.insert(*it - *std::prev(it));
    EXPECT_EQ(index_regular(make_panel(rows)), gaps.size() == 1);
  }
}

TEST(IndexSummary, Examples) {
  const auto single = index_summary(make_panel({{"a", 5, 0}, {"b", 5, 1}}));
  EXPECT_EQ(single.min, 5);
  EXPECT_EQ(single.q25, 5);
  EXPECT_EQ(single.max, 5);

  const auto s = index_summary(make_panel({{"a", 0, 0}, {"a", 10, 0}, {"b", 20, 0}, {"b", 10, 0}}));
  EXPECT_DOUBLE_EQ(s.min, 0);
  EXPECT_DOUBLE_EQ(s.q25, 5);
  EXPECT_DOUBLE_EQ(s.median, 10);
  EXPECT_DOUBLE_EQ(s.mean, 10);
  EXPECT_DOUBLE_EQ(s.q75, 15);
  EXPECT_DOUBLE_EQ(s.max, 20);
}

TEST(NObs, CountsAndAddNObs) {
  const auto t = make_panel({{"a", 1, 0}, {"a", 2, 0}, {"a", 3, 0}, {"b", 1, 0}});
  const auto counts = n_obs(t);
  EXPECT_TRUE(cells_equal(counts.column("n_obs").cells[0], std::int64_t{3}));
  EXPECT_TRUE(cells_equal(counts.column("n_obs").cells[1], std::int64_t{1}));

  const auto with = add_n_obs(t);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_TRUE(cells_equal(with.cell("n_obs", r), std::int64_t{3}));
  EXPECT_THROW(add_n_obs(with), Error);

  const auto back = with.without_column("n_obs");
  EXPECT_EQ(back.column_names(), t.column_names());
  EXPECT_EQ(back.keys(), t.keys());
  EXPECT_EQ(back.index(), t.index());
}

TEST(NObs, SumEqualsRows) {
  const auto t = testkit::heights();
  const auto counts = n_obs(t);
  std::int64_t total = 0;
  for (const auto& c : counts.column("n_obs").cells) total += std::get<std::int64_t>(c);
  EXPECT_EQ(static_cast<std::size_t>(total), t.rows());
}

TEST(FilterKeys, AlwaysTrueIsIdentity) {
  const auto t = make_panel({{"a", 1, 0}, {"b", 1, 0}, {"b", 2, 5}});
  const auto f = filter_keys(t, n_obs(t), [](const FeatureRow&) { return true; });
  EXPECT_EQ(f.keys(), t.keys());
  EXPECT_EQ(f.index(), t.index());
}

TEST(JoinFeatures, OneOfThreeKeys) {
  const auto t = make_panel({{"a", 1, 0}, {"b", 1, 0}, {"b", 2, 5}, {"c", 1, 1}});
  const auto feats = testkit::make_features({"b"}, "score", {9.5});
  const auto j = join_features(feats, t);
  EXPECT_EQ(j.rows(), 2u);
  EXPECT_EQ(j.n_keys(), 1u);
  EXPECT_EQ(j.column_names(), (std::vector<std::string>{"id", "t", "score", "y"}));
  EXPECT_TRUE(cells_equal(j.cell("score", 1), 9.5));
}

TEST(JoinFeatures, UnknownKeyIsMismatch) {
  const auto t = make_panel({{"a", 1, 0}});
  EXPECT_EQ(code_of([&] { join_features(testkit::make_features({"z"}, "s", {1}), t); }),
            ErrorCode::KeyMismatch);
}

TEST(JoinFeatures, AllKeysPreservesRowsAndIsConstantPerKey) {
  const auto t = testkit::heights_min5();
  const auto feats = compute_features(t, "height_cm", feature_set_three_num());
  const auto j = join_features(feats, t);
  EXPECT_EQ(j.rows(), t.rows());
  EXPECT_EQ(j.rows(), 1406u);
  for (const auto& g : j.groups()) {
    for (const char* col : {"min", "med", "max"}) {
      std::set<std::string> distinct;
      for (std::size_t r = g.begin; r < g.end; ++r) distinct.insert(format_cell(j.cell(col, r)));
      EXPECT_EQ(distinct.size(), 1u) << g.key << " " << col;
    }
  }
}

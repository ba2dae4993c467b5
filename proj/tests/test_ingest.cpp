#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "panelscope/csv.hpp"
#include "panelscope/error.hpp"
#include "panelscope/features.hpp"
#include "panelscope/sampling.hpp"
#include "panelscope/svg.hpp"
#include "support.hpp"

using namespace panelscope;
namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

IngestConfig config_for(const std::string& key = "country", const std::string& index = "year") {
  IngestConfig c;
  c.key_col = key;
  c.index_col = index;
  return c;
}

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "panelscope_tests";
  fs::create_directories(dir);
  return dir / name;
}

struct SvgStats {
  int panels = 0;
  std::vector<std::string> polyline_keys;
  std::vector<std::size_t> vertex_counts;
  std::set<std::string> yranges;
};

void walk(const pt::ptree& node, SvgStats& s) {
  for (const auto& [name, child] : node) {
    if (name == "g" && child.get<std::string>("<xmlattr>.class", "") == "panel") {
      ++s.panels;
      s.yranges.insert(child.get<std::string>("<xmlattr>.data-ymin") + "/" +
                       child.get<std::string>("<xmlattr>.data-ymax"));
    }
    if (name == "polyline") {
      s.polyline_keys.push_back(child.get<std::string>("<xmlattr>.data-key"));
      std::istringstream pts(child.get<std::string>("<xmlattr>.points"));
      std::size_t n = 0;
      for (std::string p; pts >> p;) ++n;
      s.vertex_counts.push_back(n);
    }
    if (name != "<xmlattr>") walk(child, s);
  }
}

SvgStats parse_svg(const std::string& svg) {
  std::istringstream in(svg);
  pt::ptree tree;
  pt::read_xml(in, tree);
  SvgStats s;
  walk(tree, s);
  return s;
}

}  // namespace

TEST(ReadPanelCsv, Fixture) {
  const auto t = testkit::heights();
  EXPECT_EQ(t.n_keys(), 144u);
  EXPECT_EQ(t.column_names(),
            (std::vector<std::string>{"country", "year", "height_cm", "continent"}));
  EXPECT_EQ(t.index_type(), ColumnType::Integer);
  EXPECT_EQ(t.column("height_cm").type, ColumnType::Real);
  EXPECT_EQ(t.column("continent").type, ColumnType::Text);
}

TEST(ReadPanelCsv, HeaderOnlyIsEmptyTable) {
  try {
    parse_panel_csv("country,year,height_cm\n", config_for());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyTable);
  }
}

TEST(ReadPanelCsv, DuplicateRowReportsLine) {
  const std::string text =
      "country,year,height_cm\n"
      "A,1990,170\n"
      "\n"
      "B,1990,160\n"
      "A,1990,171\n";
  try {
    parse_panel_csv(text, config_for());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateKeyIndex);
    ASSERT_TRUE(e.line().has_value());
    EXPECT_EQ(*e.line(), 5u);
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
  }
}

TEST(ReadPanelCsv, MissingFileAndColumn) {
  auto c = config_for();
  c.path = "/nonexistent/heights.csv";
  try {
    read_panel_csv(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
  }
  try {
    parse_panel_csv("country,when\nA,1\n", config_for());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingColumn);
  }
}

TEST(ReadPanelCsv, QuotingNaDelimiterAndTypes) {
  auto c = config_for("id", "t");
  c.delimiter = ';';
  c.na_tokens = {"", "NA", "-"};
  const std::string text =
      "id;t;v;ok;note\r\n"
      "\"Cote d'Ivoire\";1;1.5;true;\"a;b\"\r\n"
      "\"Cote d'Ivoire\";2;-;false;\"say \"\"hi\"\"\"\r\n"
      "007;1;NA;;\"two\nlines\"\r\n";
  const auto t = parse_panel_csv(text, c);
  EXPECT_EQ(t.n_keys(), 2u);
  ASSERT_NE(t.find_key("007"), nullptr);
  EXPECT_EQ(t.column("v").type, ColumnType::Real);
  EXPECT_EQ(t.column("ok").type, ColumnType::Boolean);
  const auto* g = t.find_key("Cote d'Ivoire");
  ASSERT_NE(g, nullptr);
  EXPECT_TRUE(is_missing(t.cell("v", g->begin + 1)));
  EXPECT_TRUE(cells_equal(t.cell("note", g->begin + 1), std::string("say \"hi\"")));
  EXPECT_TRUE(cells_equal(t.cell("note", t.find_key("007")->begin), std::string("two\nlines")));
}

TEST(ParseDelimited, Errors) {
  try {
    parse_delimited("a,b\n1,2\n3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_EQ(*e.line(), 3u);
  }
  try {
    parse_delimited("a,b\n1,\"open\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_EQ(*e.line(), 2u);
  }
  EXPECT_THROW(parse_delimited(""), Error);
}

TEST(WriteTableCsv, FiveNumLineCount) {
  const auto f = compute_features(testkit::heights_min5(), "height_cm", feature_set_five_num());
  const auto path = temp_file("five.csv");
  write_table_csv(f, path);
  const auto text = read_text(path);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 120);
  EXPECT_EQ(text.substr(0, text.find('\n')), "country,min,q25,med,q75,max");
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(WriteTableCsv, EmptyNearestKeysIsHeaderOnly) {
  EXPECT_EQ(to_csv(NearestKeys{}), "key,value,stat,stat_value,stat_diff\n");
}

TEST(WriteTableCsv, AllocationRoundTrip) {
  const auto alloc = allocate_facet_sample(testkit::heights_min5(), 3, 12, 1);
  const auto back = parse_allocation_csv(to_csv(alloc));
  EXPECT_EQ(back.n_facets, 12);
  ASSERT_EQ(back.assignments.size(), alloc.assignments.size());
  for (std::size_t i = 0; i < back.assignments.size(); ++i) {
    EXPECT_EQ(back.assignments[i].key, alloc.assignments[i].key);
    EXPECT_EQ(back.assignments[i].facet, alloc.assignments[i].facet);
  }
  EXPECT_THROW(parse_allocation_csv("key,facet\nA,zero\n"), Error);
}

TEST(WriteTableCsv, FeatureRoundTripWithinTolerance) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> keys;
    Column a{"a", ColumnType::Real, {}};
    Column b{"b", ColumnType::Real, {}};
    for (int i = 0; i < 1 + trial; ++i) {
      keys.push_back(i % 3 == 0 ? "k, \"" + std::to_string(i) + "\"" : "k" + std::to_string(i));
      a.cells.emplace_back(u(rng));
      if (i % 4 == 1) {
        b.cells.emplace_back();
      } else {
        b.cells.emplace_back(u(rng) * 1e-3);
      }
    }
    FeatureTable t("id", keys);
    t.add_column(a);
    t.add_column(b);
    const auto back = parse_feature_csv(to_csv(t));
    ASSERT_EQ(back.keys(), t.keys());
    for (const char* col : {"a", "b"}) {
      const auto x = t.numeric(col);
      const auto y = back.numeric(col);
      ASSERT_EQ(x.size(), y.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        ASSERT_EQ(x[i].has_value(), y[i].has_value());
        if (x[i]) EXPECT_NEAR(*x[i], *y[i], 1e-6);
      }
    }
  }
}

TEST(WriteTableCsv, PanelRoundTrip) {
  const auto t = testkit::heights();
  auto c = config_for();
  const auto back = parse_panel_csv(to_csv(t), c);
  EXPECT_EQ(back.keys(), t.keys());
  EXPECT_EQ(back.index(), t.index());
  const auto x = t.numeric("height_cm"), y = back.numeric("height_cm");
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(*x[i], *y[i], 1e-6);
}

TEST(RenderFacets, DefaultFacetSample) {
  const auto t = testkit::heights_min5();
  const auto alloc = allocate_facet_sample(t, 3, 12, 2020);
  PlotSpec spec;
  spec.y_col = "height_cm";
  const auto s = parse_svg(render_facets_svg(t, alloc, spec));
  EXPECT_EQ(s.panels, 12);
  EXPECT_EQ(s.polyline_keys.size(), 36u);
  EXPECT_EQ(s.yranges.size(), 1u);
}

TEST(RenderFacets, StrataDrawsEachKeyOnce) {
  const auto t = testkit::heights_min5();
  const auto alloc = stratify_keys(t, 12, Along{"year"}, 1);
  PlotSpec spec;
  spec.y_col = "height_cm";
  spec.title = "Heights <by> start & \"year\"";
  spec.x_breaks = {1750, 1850, 1950};
  spec.highlight = {"Denmark"};
  const auto s = parse_svg(render_facets_svg(t, alloc, spec));
  EXPECT_EQ(s.panels, 12);
  EXPECT_EQ(s.polyline_keys.size(), 119u);
  EXPECT_EQ(std::set<std::string>(s.polyline_keys.begin(), s.polyline_keys.end()).size(), 119u);
  EXPECT_EQ(s.yranges.size(), 1u);
  EXPECT_NE(std::find(s.polyline_keys.begin(), s.polyline_keys.end(), "Cote d'Ivoire"),
            s.polyline_keys.end());
}

TEST(RenderFacets, SingleTwoVertexLine) {
  const auto t = testkit::make_panel({{"only", 1, 2}, {"only", 2, 3}});
  KeyAllocation alloc;
  alloc.n_facets = 1;
  alloc.assignments = {{"only", 1}};
  PlotSpec spec;
  spec.y_col = "y";
  const auto path = temp_file("one.svg");
  render_facets(t, alloc, spec, path);
  const auto s = parse_svg(read_text(path));
  EXPECT_EQ(s.panels, 1);
  ASSERT_EQ(s.vertex_counts.size(), 1u);
  EXPECT_EQ(s.vertex_counts[0], 2u);
}

TEST(RenderFacets, Errors) {
  const auto t = testkit::make_panel({{"only", 1, 2}});
  KeyAllocation alloc;
  alloc.n_facets = 1;
  alloc.assignments = {{"ghost", 1}};
  PlotSpec spec;
  spec.y_col = "y";
  try {
    render_facets_svg(t, alloc, spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KeyMismatch);
  }
  alloc.assignments = {{"only", 1}};
  try {
    render_facets(t, alloc, spec, "/nonexistent/dir/out.svg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
  spec.y_col = "nope";
  EXPECT_THROW(render_facets_svg(t, alloc, spec), Error);
}

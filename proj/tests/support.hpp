#pragma once

#include <string>
#include <vector>

#include "panelscope/csv.hpp"
#include "panelscope/panel.hpp"

namespace panelscope::testkit {

inline std::string fixture_path() { return PANELSCOPE_FIXTURE; }

inline PanelTable heights() {
  IngestConfig config;
  config.path = fixture_path();
  config.key_col = "country";
  config.index_col = "year";
  return read_panel_csv(config);
}

/// Keys with at least five observations, as in the worked examples.
inline PanelTable heights_min5() {
  const PanelTable all = heights();
  return filter_keys(all, n_obs(all), [](const FeatureRow& row) {
    return std::get<std::int64_t>(row["n_obs"]) >= 5;
  });
}

/// One (key, index, value) triple per row.
struct Row {
  std::string key;
  double index;
  double value;
};

inline PanelTable make_panel(const std::vector<Row>& rows) {
  Column key{"id", ColumnType::Text, {}};
  Column index{"t", ColumnType::Real, {}};
  Column value{"y", ColumnType::Real, {}};
  for (const auto& r : rows) {
    key.cells.emplace_back(r.key);
    index.cells.emplace_back(r.index);
    value.cells.emplace_back(r.value);
  }
  return build_panel({key, index, value}, {"id", "t", true});
}

inline FeatureTable make_features(const std::vector<std::string>& keys, const std::string& name,
                                  const std::vector<double>& values) {
  FeatureTable t("id", keys);
  Column c{name, ColumnType::Real, {}};
  for (double v : values) c.cells.emplace_back(v);
  t.add_column(std::move(c));
  return t;
}

}  // namespace panelscope::testkit

#include "panelscope/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "panelscope/csv.hpp"
#include "panelscope/error.hpp"
#include "panelscope/features.hpp"
#include "panelscope/filter.hpp"
#include "panelscope/nearness.hpp"
#include "panelscope/panel.hpp"
#include "panelscope/sampling.hpp"
#include "panelscope/svg.hpp"

namespace panelscope::cli {

namespace {

/// A flag value that parsed but makes no sense for the data; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string input;
  std::string key;
  std::string index;
  bool regular = true;
  std::uint64_t seed = kDefaultSeed;
  std::string output;
  int min_obs = 0;
  char delimiter = ',';
  std::vector<std::string> na{"", "NA"};
};

struct FeaturesArgs {
  std::string var;
  std::string set;
  std::vector<std::string> scalars;
  std::string filter;
  bool join = false;
};

struct SampleArgs {
  std::optional<std::size_t> size;
  std::optional<double> frac;
  int n_per_facet = 3;
  int n_facets = 12;
};

struct StrataArgs {
  int n_strata = 12;
  std::string along;
  bool descending = false;
  std::string along_summary = "first";
};

struct NearArgs {
  std::string var;
  std::string stats = "five_num";
  std::optional<int> top;
};

struct SlopeArgs {
  std::string response;
  std::string predictor;
  bool center = false;
  bool per_key = false;
};

struct PlotArgs {
  std::string y;
  std::string x;
  std::string allocation;
  std::string mode = "facet";
  SampleArgs facet;
  StrataArgs strata;
  int width = 960;
  int height = 720;
  int cols = 4;
  std::string title;
  std::vector<double> breaks;
  std::vector<std::string> highlight;
  std::string stroke = "#2b2b2b";
};

void require_column(const PanelTable& table, const std::string& name, const char* flag) {
  if (name != table.index_column() && !table.has_column(name)) {
    throw UsageError(std::string(flag) + ": no column '" + name + "' in input");
  }
}

PanelTable load(const Globals& g) {
  IngestConfig config;
  config.path = g.input;
  config.key_col = g.key;
  config.index_col = g.index;
  config.regular = g.regular;
  config.delimiter = g.delimiter;
  config.na_tokens = g.na;
  const std::string text = read_text(config.path);
  const auto header_end = text.find('\n');
  const auto header = parse_delimited(text.substr(0, header_end), config.delimiter).header;
  for (const auto& [flag, name] : {std::pair{"--key", g.key}, std::pair{"--index", g.index}}) {
    if (std::find(header.begin(), header.end(), name) == header.end()) {
      throw UsageError(std::string(flag) + ": no column '" + name + "' in input");
    }
  }
  PanelTable table;
  try {
    table = parse_panel_csv(text, config);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::TypeMismatch) throw UsageError("--index: " + e.detail());
    throw;
  }
  if (g.min_obs > 0) {
    const FeatureTable counts = n_obs(table);
    table = filter_keys(table, counts, [&](const FeatureRow& row) {
      return std::get<std::int64_t>(row["n_obs"]) >= g.min_obs;
    });
    if (table.empty()) {
      throw Error(ErrorCode::EmptyTable, "no key has at least " + std::to_string(g.min_obs) +
                                             " observations");
    }
  }
  return table;
}

AlongSummary parse_along_summary(const std::string& s) {
  if (s == "mean") return AlongSummary::Mean;
  if (s == "median") return AlongSummary::Median;
  return AlongSummary::First;
}

KeyAllocation strata_allocation(const PanelTable& table, const StrataArgs& a, std::uint64_t seed) {
  std::optional<Along> along;
  if (!a.along.empty()) {
    require_column(table, a.along, "--along");
    along = Along{a.along, a.descending, parse_along_summary(a.along_summary)};
  } else if (a.descending) {
    throw UsageError("--descending needs --along");
  }
  if (static_cast<std::size_t>(a.n_strata) > table.n_keys()) {
    throw UsageError("--n-strata: " + std::to_string(a.n_strata) + " strata for " +
                     std::to_string(table.n_keys()) + " keys");
  }
  return stratify_keys(table, a.n_strata, along, seed);
}

KeyAllocation facet_allocation(const PanelTable& table, const SampleArgs& a, std::uint64_t seed) {
  const auto needed = static_cast<std::size_t>(a.n_per_facet) * static_cast<std::size_t>(a.n_facets);
  if (needed > table.n_keys()) {
    throw UsageError("--n-per-facet x --n-facets: " + std::to_string(needed) + " keys needed, " +
                     std::to_string(table.n_keys()) + " available");
  }
  return allocate_facet_sample(table, a.n_per_facet, a.n_facets, seed);
}

class Runner {
 public:
  Runner(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {}

  /// Writes `data` to --output (or stdout) and reports `summary`.
  void emit(const std::string& data, const std::string& summary) {
    if (g_.output.empty()) {
      out_ << data;
      err_ << summary << '\n';
    } else {
      write_text(g_.output, data);
      out_ << summary << " -> " << g_.output << '\n';
    }
  }

  void summary() {
    const PanelTable table = load(g_);
    const bool regular = index_regular(table);
    const IndexSummary s = index_summary(table);
    const FeatureTable counts = n_obs(table);
    std::map<std::int64_t, std::size_t> tally;
    for (const auto& c : counts.column("n_obs").cells) ++tally[std::get<std::int64_t>(c)];

    std::ostringstream line;
    line << "keys=" << table.n_keys() << " rows=" << table.rows()
         << " regular=" << (regular ? "true" : "false") << " index_summary=" << format_real(s.min)
         << ',' << format_real(s.q25) << ',' << format_real(s.median) << ','
         << format_real(s.mean) << ',' << format_real(s.q75) << ',' << format_real(s.max);
    if (g_.output.empty()) {
      out_ << line.str() << '\n';
      return;
    }
    std::string csv = "n_obs,n_keys\n";
    for (const auto& [n, k] : tally) csv += std::to_string(n) + ',' + std::to_string(k) + '\n';
    write_text(g_.output, csv);
    out_ << line.str() << " -> " << g_.output << '\n';
  }

  void features(const FeaturesArgs& a) {
    const PanelTable table = load(g_);
    require_column(table, a.var, "--var");
    std::vector<FeatureEntry> entries;
    if (!a.set.empty() || a.scalars.empty()) {
      const auto set = feature_set_by_name(a.set.empty() ? "five_num" : a.set);
      entries = set.entries();
    }
    for (const auto& name : a.scalars) entries.push_back(scalar_feature_by_name(name));
    FeatureSet set;
    try {
      set = FeatureSet(std::move(entries));
    } catch (const Error& e) {
      throw UsageError("--feature: " + e.detail());
    }
    FeatureTable feats = compute_features(table, a.var, set);

    if (!a.filter.empty()) {
      FilterExpr expr;
      try {
        expr = parse_filter(a.filter);
      } catch (const Error& e) {
        throw UsageError("--filter: " + e.detail());
      }
      if (!feats.has_column(expr.column)) {
        throw UsageError("--filter: no feature column '" + expr.column + "'");
      }
      const auto rows = matching_rows(feats, expr);
      feats = feats.select_rows(rows);
    }
    if (a.join) {
      const PanelTable joined = join_features(feats, table);
      emit(to_csv(joined), "features: joined " + std::to_string(feats.size()) + " keys, " +
                               std::to_string(joined.rows()) + " rows");
      return;
    }
    emit(to_csv(feats), "features: " + std::to_string(feats.size()) + " keys x " +
                            std::to_string(feats.columns().size()) + " features");
  }

  void sample(const SampleArgs& a) {
    const PanelTable table = load(g_);
    if (a.size || a.frac) {
      PanelTable picked;
      if (a.size) {
        if (*a.size > table.n_keys()) {
          throw UsageError("--size: " + std::to_string(*a.size) + " exceeds " +
                           std::to_string(table.n_keys()) + " keys");
        }
        picked = sample_n_keys(table, *a.size, g_.seed);
      } else {
        picked = sample_frac_keys(table, *a.frac, g_.seed);
      }
      emit(to_csv(picked), "sample: " + std::to_string(picked.n_keys()) + " keys, " +
                               std::to_string(picked.rows()) + " rows (seed " +
                               std::to_string(g_.seed) + ")");
      return;
    }
    const KeyAllocation alloc = facet_allocation(table, a, g_.seed);
    emit(to_csv(alloc), "sample: " + std::to_string(alloc.assignments.size()) + " keys in " +
                            std::to_string(alloc.n_facets) + " facets (seed " +
                            std::to_string(g_.seed) + ")");
  }

  void strata(const StrataArgs& a) {
    const PanelTable table = load(g_);
    const KeyAllocation alloc = strata_allocation(table, a, g_.seed);
    emit(to_csv(alloc), "strata: " + std::to_string(alloc.assignments.size()) + " keys in " +
                            std::to_string(alloc.n_facets) + " strata");
  }

  void near(const NearArgs& a) {
    const PanelTable table = load(g_);
    require_column(table, a.var, "--var");
    FeatureTable values;
    try {
      values = per_key_constant(table, a.var);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidArgument) throw UsageError("--var: " + e.detail());
      throw;
    }
    if (a.top) {
      if (*a.top == 0 || static_cast<std::size_t>(std::abs(*a.top)) > values.size()) {
        throw UsageError("--top: " + std::to_string(*a.top) + " for " +
                         std::to_string(values.size()) + " keys");
      }
      const FeatureTable top = top_n_keys(values, a.var, *a.top);
      emit(to_csv(top), "near: top " + std::to_string(*a.top) + " -> " +
                            std::to_string(top.size()) + " keys");
      return;
    }
    const NearestKeys rows = keys_near(values, a.var, feature_set_by_name(a.stats));
    emit(to_csv(rows, table.key_column(), a.var),
         "near: " + std::to_string(rows.size()) + " rows for " + a.var);
  }

  void slope(const SlopeArgs& a) {
    const PanelTable table = load(g_);
    require_column(table, a.response, "--response");
    const std::string predictor = a.predictor.empty() ? table.index_column() : a.predictor;
    require_column(table, predictor, "--predictor");
    const FitOptions options{a.center};
    if (a.per_key) {
      std::vector<std::string> degenerate;
      const FeatureTable slopes = key_slope(table, a.response, predictor, &degenerate, options);
      emit(to_csv(slopes), "slope: " + std::to_string(slopes.size()) + " keys fitted, " +
                               std::to_string(degenerate.size()) + " degenerate");
      return;
    }
    const FitResult fit = fit_keys(table, a.response, predictor, options);
    const std::unordered_set<std::string> skip(fit.degenerate.begin(), fit.degenerate.end());
    const PanelTable fitted =
        table.select_keys([&](std::string_view k) { return skip.count(std::string(k)) == 0; });
    if (fitted.empty()) throw Error(ErrorCode::EmptyTable, "no key has two distinct predictor values");
    const PanelTable augmented = augment_fit(fitted, fit.fits);
    emit(to_csv(augmented), "slope: " + std::to_string(fit.fits.size()) + " keys fitted, " +
                                std::to_string(fit.degenerate.size()) + " degenerate");
  }

  void plot(const PlotArgs& a) {
    const PanelTable table = load(g_);
    require_column(table, a.y, "--y");
    if (!a.x.empty()) require_column(table, a.x, "--x");
    KeyAllocation alloc;
    if (!a.allocation.empty()) {
      alloc = read_allocation_csv(a.allocation);
    } else if (a.mode == "strata") {
      alloc = strata_allocation(table, a.strata, g_.seed);
    } else {
      alloc = facet_allocation(table, a.facet, g_.seed);
    }
    PlotSpec spec;
    spec.y_col = a.y;
    spec.x_col = a.x;
    spec.width_px = a.width;
    spec.height_px = a.height;
    spec.n_cols = a.cols;
    spec.title = a.title;
    spec.x_breaks = a.breaks;
    spec.highlight = a.highlight;
    spec.stroke = a.stroke;
    const std::string svg = render_facets_svg(table, alloc, spec);
    emit(svg, "plot: " + std::to_string(alloc.n_facets) + " panels, " +
                  std::to_string(alloc.assignments.size()) + " lines");
  }

 private:
  const Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
};

bool is_usage_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::SizeExceedsKeys:
    case ErrorCode::FracOutOfRange:
    case ErrorCode::TooManyStrata:
    case ErrorCode::NotEnoughKeys:
    case ErrorCode::NOutOfRange:
    case ErrorCode::UnknownColumn:
      return true;
    default:
      return false;
  }
}

void add_facet_options(CLI::App* cmd, SampleArgs& a) {
  cmd->add_option("--n-per-facet", a.n_per_facet, "Keys per facet")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--n-facets", a.n_facets, "Number of facets")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_strata_options(CLI::App* cmd, StrataArgs& a) {
  cmd->add_option("--n-strata", a.n_strata, "Number of strata")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--along", a.along, "Order keys by a per-key summary of this column");
  cmd->add_flag("--descending", a.descending, "Largest summaries in the first stratum");
  cmd->add_option("--along-summary", a.along_summary, "Per-key summary used by --along")
      ->check(CLI::IsMember({"first", "mean", "median"}))
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explore longitudinal data: per-key features, key sampling and faceted plots",
               "panelscope"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  app.add_option("--input", g.input, "Long-format delimited file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--key", g.key, "Key column")->required();
  app.add_option("--index", g.index, "Index column")->required();
  app.add_option("--regular", g.regular, "Declare the index regular (true|false)")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")
      ->envname("PANELSCOPE_SEED")
      ->capture_default_str();
  app.add_option("-o,--output", g.output, "Output file (default: standard output)");
  app.add_option("--min-obs", g.min_obs, "Drop keys with fewer observations")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--delimiter", g.delimiter, "Field delimiter")->capture_default_str();
  app.add_option("--na", g.na, "Tokens read as missing (default: empty and NA)");

  auto* summary_cmd = app.add_subcommand("summary", "Index regularity, index summary, n_obs tally");

  FeaturesArgs fa;
  auto* features_cmd = app.add_subcommand("features", "Per-key features of one variable");
  features_cmd->add_option("--var", fa.var, "Variable to summarise")->required();
  features_cmd->add_option("--set", fa.set, "Feature set")
      ->check(CLI::IsMember({"three_num", "five_num", "ranges", "spread", "monotonic",
                             "diff_summary", "brolgar", "all"}));
  features_cmd->add_option("--feature", fa.scalars, "Extra single-value feature (repeatable)")
      ->check(CLI::IsMember({"min", "max", "median", "mean", "var", "sd", "first", "last",
                             "increasing", "decreasing", "unvarying", "monotonic", "n_obs"}));
  features_cmd->add_option("--filter", fa.filter, "Keep keys matching '<col> <op> <value>'");
  features_cmd->add_flag("--join", fa.join, "Write the panel rows of the kept keys with features");

  SampleArgs sa;
  auto* sample_cmd = app.add_subcommand("sample", "Sample keys, or allocate keys to facets");
  auto* size_opt = sample_cmd->add_option("--size", sa.size, "Number of keys to keep")
                       ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--frac", sa.frac, "Fraction of keys to keep")
      ->check(CLI::Range(0.0, 1.0))
      ->excludes(size_opt);
  add_facet_options(sample_cmd, sa);

  StrataArgs sta;
  auto* strata_cmd = app.add_subcommand("strata", "Split all keys into strata");
  add_strata_options(strata_cmd, sta);

  NearArgs na;
  auto* near_cmd = app.add_subcommand("near", "Keys nearest to summaries of a per-key value");
  near_cmd->add_option("--var", na.var, "Per-key constant column, e.g. rss")->required();
  near_cmd->add_option("--stats", na.stats, "Feature set of target statistics")
      ->check(CLI::IsMember({"three_num", "five_num", "ranges", "spread"}))
      ->capture_default_str();
  near_cmd->add_option("--top", na.top, "Keep the N largest (or -N smallest) keys instead");

  SlopeArgs sla;
  auto* slope_cmd = app.add_subcommand("slope", "Per-key least-squares line");
  slope_cmd->add_option("--response", sla.response, "Response column")->required();
  slope_cmd->add_option("--predictor", sla.predictor, "Predictor column (default: index)");
  slope_cmd->add_flag("--center", sla.center, "Subtract the smallest predictor value first");
  slope_cmd->add_flag("--per-key", sla.per_key, "Write intercept and slope per key");

  PlotArgs pa;
  auto* plot_cmd = app.add_subcommand("plot", "Faceted line plot as SVG");
  plot_cmd->add_option("--y", pa.y, "Vertical variable")->required();
  plot_cmd->add_option("--x", pa.x, "Horizontal variable (default: index)");
  auto* alloc_opt =
      plot_cmd->add_option("--allocation", pa.allocation, "Key,facet CSV from sample/strata")
          ->check(CLI::ExistingFile);
  plot_cmd->add_option("--mode", pa.mode, "Allocation when --allocation is absent")
      ->check(CLI::IsMember({"facet", "strata"}))
      ->excludes(alloc_opt)
      ->capture_default_str();
  add_facet_options(plot_cmd, pa.facet);
  add_strata_options(plot_cmd, pa.strata);
  plot_cmd->add_option("--width", pa.width)->check(CLI::PositiveNumber)->capture_default_str();
  plot_cmd->add_option("--height", pa.height)->check(CLI::PositiveNumber)->capture_default_str();
  plot_cmd->add_option("--cols", pa.cols, "Facets per row")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  plot_cmd->add_option("--title", pa.title);
  plot_cmd->add_option("--breaks", pa.breaks, "Explicit x tick positions");
  plot_cmd->add_option("--highlight", pa.highlight, "Keys drawn in colour over grey lines");
  plot_cmd->add_option("--stroke", pa.stroke, "Line colour")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsageError;
  }

  Runner runner(g, out, err);
  try {
    if (summary_cmd->parsed()) runner.summary();
    if (features_cmd->parsed()) runner.features(fa);
    if (sample_cmd->parsed()) runner.sample(sa);
    if (strata_cmd->parsed()) runner.strata(sta);
    if (near_cmd->parsed()) runner.near(na);
    if (slope_cmd->parsed()) runner.slope(sla);
    if (plot_cmd->parsed()) runner.plot(pa);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_usage_code(e.code()) ? kExitUsageError : kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace panelscope::cli

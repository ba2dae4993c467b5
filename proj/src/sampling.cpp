#include "panelscope/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "panelscope/error.hpp"
#include "panelscope/features.hpp"

namespace panelscope {

std::uint64_t KeyRng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "empty range for a random draw");
  // Reject the incomplete top bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::optional<int> KeyAllocation::facet_of(std::string_view key) const {
  for (const auto& a : assignments) {
    if (a.key == key) return a.facet;
  }
  return std::nullopt;
}

std::vector<std::string> KeyAllocation::keys_in(int facet) const {
  std::vector<std::string> out;
  for (const auto& a : assignments) {
    if (a.facet == facet) out.push_back(a.key);
  }
  return out;
}

std::vector<std::size_t> KeyAllocation::facet_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(n_facets, 0)), 0);
  for (const auto& a : assignments) ++sizes.at(static_cast<std::size_t>(a.facet - 1));
  return sizes;
}

namespace {

std::vector<std::string> all_keys(const PanelTable& table) {
  std::vector<std::string> keys;
  keys.reserve(table.n_keys());
  for (const auto& g : table.groups()) keys.push_back(g.key);
  return keys;
}

// Cuts `keys` into n contiguous runs, the first (size % n) runs one longer.
KeyAllocation deal(const std::vector<std::string>& keys, int n, std::uint64_t seed) {
  KeyAllocation alloc;
  alloc.n_facets = n;
  alloc.seed = seed;
  const std::size_t base = keys.size() / static_cast<std::size_t>(n);
  const std::size_t extra = keys.size() % static_cast<std::size_t>(n);
  std::size_t at = 0;
  for (int f = 1; f <= n; ++f) {
    const std::size_t len = base + (static_cast<std::size_t>(f - 1) < extra ? 1 : 0);
    for (std::size_t i = 0; i < len; ++i) alloc.assignments.push_back({keys[at++], f});
  }
  return alloc;
}

}  // namespace

std::vector<std::string> sample_keys(const PanelTable& table, std::size_t size,
                                     std::uint64_t seed) {
  if (size > table.n_keys()) {
    throw Error(ErrorCode::SizeExceedsKeys, "cannot sample " + std::to_string(size) +
                                                " keys from " + std::to_string(table.n_keys()));
  }
  std::vector<std::size_t> order(table.n_keys());
  std::iota(order.begin(), order.end(), std::size_t{0});
  KeyRng rng(seed);
  rng.shuffle(order);
  order.resize(size);
  std::sort(order.begin(), order.end());
  std::vector<std::string> keys;
  keys.reserve(size);
  for (auto i : order) keys.push_back(table.groups()[i].key);
  return keys;
}

PanelTable sample_n_keys(const PanelTable& table, std::size_t size, std::uint64_t seed) {
  const auto keys = sample_keys(table, size, seed);
  const std::unordered_set<std::string_view> chosen(keys.begin(), keys.end());
  return table.select_keys([&](std::string_view k) { return chosen.count(k) > 0; });
}

PanelTable sample_frac_keys(const PanelTable& table, double frac, std::uint64_t seed) {
  if (!(frac > 0.0 && frac <= 1.0)) {
    throw Error(ErrorCode::FracOutOfRange, "fraction must lie in (0, 1]");
  }
  const auto n = static_cast<double>(table.n_keys());
  const auto size = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(frac * n)));
  return sample_n_keys(table, std::min(size, table.n_keys()), seed);
}

std::vector<double> along_summaries(const PanelTable& table, const Along& along) {
  (void)table.numeric(along.column);
  std::vector<double> out;
  out.reserve(table.n_keys());
  for (const auto& g : table.groups()) {
    const auto v = table.values(along.column, g);
    if (v.empty()) {
      throw Error(ErrorCode::AllMissingForKey,
                  "key '" + g.key + "' has no '" + along.column + "' values to order by");
    }
    switch (along.summary) {
      case AlongSummary::First: out.push_back(v.front()); break;
      case AlongSummary::Mean: out.push_back(mean(v)); break;
      case AlongSummary::Median: out.push_back(feat_five_num(v).med); break;
    }
  }
  return out;
}

KeyAllocation stratify_keys(const PanelTable& table, int n_strata,
                            const std::optional<Along>& along, std::uint64_t seed) {
  if (n_strata < 1) throw Error(ErrorCode::InvalidArgument, "n_strata must be positive");
  if (static_cast<std::size_t>(n_strata) > table.n_keys()) {
    throw Error(ErrorCode::TooManyStrata, std::to_string(n_strata) + " strata for " +
                                              std::to_string(table.n_keys()) + " keys");
  }
  auto keys = all_keys(table);
  if (!along) {
    KeyRng rng(seed);
    rng.shuffle(keys);
    return deal(keys, n_strata, seed);
  }
  const auto summary = along_summaries(table, *along);
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return along->descending ? summary[a] > summary[b] : summary[a] < summary[b];
  });
  std::vector<std::string> ordered;
  ordered.reserve(keys.size());
  for (auto i : order) ordered.push_back(keys[i]);
  return deal(ordered, n_strata, seed);
}

KeyAllocation allocate_facet_sample(const PanelTable& table, int n_per_facet, int n_facets,
                                    std::uint64_t seed) {
  if (n_per_facet < 1 || n_facets < 1) {
    throw Error(ErrorCode::InvalidArgument, "facet counts must be positive");
  }
  const auto wanted = static_cast<std::size_t>(n_per_facet) * static_cast<std::size_t>(n_facets);
  if (wanted > table.n_keys()) {
    throw Error(ErrorCode::NotEnoughKeys, std::to_string(n_facets) + " facets of " +
                                              std::to_string(n_per_facet) + " need " +
                                              std::to_string(wanted) + " keys, table has " +
                                              std::to_string(table.n_keys()));
  }
  auto keys = all_keys(table);
  KeyRng rng(seed);
  rng.shuffle(keys);
  keys.resize(wanted);
  return deal(keys, n_facets, seed);
}

}  // namespace panelscope

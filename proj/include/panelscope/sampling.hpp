#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "panelscope/panel.hpp"

namespace panelscope {

/// Seeded source of randomness for key sampling.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
/// derives bounded integers by rejection so that a seed yields the same draws
/// on every platform and standard library.
class KeyRng {
 public:
  explicit KeyRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// key -> facet assignment. Facets are numbered 1..n_facets.
struct KeyAllocation {
  struct Assignment {
    std::string key;
    int facet = 0;
  };

  /// Ordered by facet, then by position within the facet.
  std::vector<Assignment> assignments;
  int n_facets = 0;
  std::uint64_t seed = 0;

  std::optional<int> facet_of(std::string_view key) const;
  std::vector<std::string> keys_in(int facet) const;
  std::vector<std::size_t> facet_sizes() const;
};

enum class AlongSummary { First, Mean, Median };

/// Orders keys into strata by a per-key summary of `column`.
struct Along {
  std::string column;
  bool descending = false;
  AlongSummary summary = AlongSummary::First;
};

/// Keys drawn uniformly without replacement, in storage order.
std::vector<std::string> sample_keys(const PanelTable& table, std::size_t size,
                                     std::uint64_t seed);

/// All rows of `size` uniformly sampled keys. Throws SizeExceedsKeys.
PanelTable sample_n_keys(const PanelTable& table, std::size_t size, std::uint64_t seed);

/// sample_n_keys with size = max(1, round(frac * n_keys)). Throws FracOutOfRange.
PanelTable sample_frac_keys(const PanelTable& table, double frac, std::uint64_t seed);

/// Deals every key into n_strata strata whose sizes differ by at most one,
/// earlier strata taking the remainder. Without `along` the keys are shuffled
/// first; with it they are sorted (stably) by their summary and cut into
/// contiguous runs.
///
/// Throws TooManyStrata, UnknownColumn, TypeMismatch, AllMissingForKey.
KeyAllocation stratify_keys(const PanelTable& table, int n_strata,
                            const std::optional<Along>& along, std::uint64_t seed);

/// Samples n_per_facet * n_facets keys and assigns exactly n_per_facet to each
/// facet. Throws NotEnoughKeys.
KeyAllocation allocate_facet_sample(const PanelTable& table, int n_per_facet, int n_facets,
                                    std::uint64_t seed);

/// Per-key along summary, in storage order of the keys.
std::vector<double> along_summaries(const PanelTable& table, const Along& along);

}  // namespace panelscope

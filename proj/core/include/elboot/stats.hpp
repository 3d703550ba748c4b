// Copyright 2026 The elboot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ELBOOT_STATS_HPP_
#define ELBOOT_STATS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elboot/workflow.hpp"

namespace elboot {

// Exact non-negative fraction. Counts stay integral; only display rounds.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  // Percentage rounded half-up to one decimal, e.g. 466/1000 -> "46.6".
  std::string percent() const;
  // Tenths of a percent after half-up rounding (466/1000 -> 466).
  std::int64_t percent_tenths() const;

  // Value equality (cross-multiplied).
  friend bool operator==(const Ratio &a, const Ratio &b) {
    return a.num * b.den == b.num * a.den;
  }
};

// Half-up rounding of num/den * 100 to one decimal. den must be positive.
std::string format_percent(std::int64_t num, std::int64_t den);

struct CoverageReport {
  std::int64_t total = 0;
  std::int64_t model_labeled = 0;   // ModelAccepted
  std::int64_t search_labeled = 0;  // SearchAccepted
  std::int64_t unlabeled = 0;
  std::int64_t wapis_overlap = 0;   // ModelAccepted with overlap
  std::int64_t wapis_total = 0;     // wapis_overlap + search_labeled
  bool final = true;                // false for mid-run snapshots

  Ratio share(std::int64_t count) const { return Ratio{count, total > 0 ? total : 1}; }
  Ratio model_share() const { return share(model_labeled); }
  Ratio search_share() const { return share(search_labeled); }
  Ratio unlabeled_share() const { return share(unlabeled); }
  Ratio coverage_share() const { return share(model_labeled + search_labeled); }
  Ratio overlap_share() const { return share(wapis_overlap); }
  Ratio wapis_share() const { return share(wapis_total); }
};

// Throws NotFinalizedError unless the store is finalized.
CoverageReport coverage(const Store &store);

// Mid-run view: records not yet terminal are counted as unlabeled and the
// report is marked non-final.
CoverageReport provisional_coverage(const Store &store);

// model_labeled / (model_labeled + search_labeled); nullopt when nothing is
// labeled.
std::optional<Ratio> model_accuracy(const CoverageReport &report);

enum class Dimension {
  kLabelLanguage,
  kSubcategory,
  kNeType,
  kMorphTag,
  kUnlabeledCategory,
  kUnlabeledFactor,
};

enum class Measure {
  kCoverageShare,     // labeled / total within each key
  kCompositionShare,  // key count / population
};

std::string_view to_string(Dimension d);
std::string_view to_string(Measure m);
// Throw InputError on unknown names.
Dimension parse_dimension(std::string_view name);
Measure parse_measure(std::string_view name);

enum class LabelSource { kAny, kModel, kSearch };

struct BreakdownOptions {
  // Rows below `threshold` are folded into "other" when collapse_small is set.
  std::int64_t threshold = 5;
  bool collapse_small = false;
  // Which labels the label_language dimension counts.
  LabelSource label_source = LabelSource::kAny;
  // Subcategories whose coverage is known to be inflated (pseudonymised
  // names matching single-letter wiki pages).
  std::set<std::string> skew_subcategories{"adjudications"};
};

struct BreakdownRow {
  std::string key;
  std::int64_t count = 0;
  Ratio share;
  std::int64_t model = 0;
  std::int64_t search = 0;
  std::int64_t unlabeled = 0;
  bool skew_warning = false;
};

// Morph-tag rows count words (tokens inside mentions); all other dimensions
// count mentions. Unlabeled-factor rows share the unlabeled-mention
// denominator and may overlap, since one mention can carry several factors.
// Rows are sorted by count descending, then key. Throws NotFinalizedError
// and, for combinations without a meaning (e.g. coverage of
// label_language), InputError.
std::vector<BreakdownRow> breakdown(const Store &store, Dimension dimension,
                                    Measure measure, const BreakdownOptions &options = {});

enum class RenderFormat { kTsv, kJsonLines, kPlotData };
RenderFormat parse_render_format(std::string_view name);

void render(const CoverageReport &report, RenderFormat format, std::ostream &out);
void render(std::span<const BreakdownRow> rows, RenderFormat format, std::ostream &out);

}  // namespace elboot

#endif  // ELBOOT_STATS_HPP_

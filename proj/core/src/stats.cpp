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

#include "elboot/stats.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "elboot/error.hpp"

namespace elboot {

using nlohmann::json;

std::int64_t Ratio::percent_tenths() const {
  if (den <= 0) throw InputError("ratio with non-positive denominator");
  return (num * 2000 + den) / (2 * den);
}

std::string Ratio::percent() const {
  const std::int64_t tenths = percent_tenths();
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

std::string format_percent(std::int64_t num, std::int64_t den) {
  return Ratio{num, den}.percent();
}

namespace {

CoverageReport count(const Store &store, bool final) {
  CoverageReport r;
  r.final = final;
  for (const WorkflowRecord &rec : store.records()) {
    ++r.total;
    switch (rec.state) {
      case WorkflowState::kModelAccepted:
        ++r.model_labeled;
        if (rec.overlap.value_or(false)) ++r.wapis_overlap;
        break;
      case WorkflowState::kSearchAccepted:
        ++r.search_labeled;
        break;
      default:
        ++r.unlabeled;
        break;
    }
  }
  r.wapis_total = r.wapis_overlap + r.search_labeled;
  return r;
}

void require_finalized(const Store &store) {
  if (!store.finalized()) throw NotFinalizedError("store is not finalized");
}

struct Tally {
  std::int64_t count = 0;
  std::int64_t model = 0;
  std::int64_t search = 0;
  std::int64_t unlabeled = 0;

  void add(WorkflowState state) {
    ++count;
    if (state == WorkflowState::kModelAccepted) {
      ++model;
    } else if (state == WorkflowState::kSearchAccepted) {
      ++search;
    } else {
      ++unlabeled;
    }
  }
};

bool label_matches(const WorkflowRecord &r, LabelSource source) {
  switch (source) {
    case LabelSource::kAny:
      return r.label() != nullptr;
    case LabelSource::kModel:
      return r.correct_wiki.has_value();
    case LabelSource::kSearch:
      return r.suggestion_wiki.has_value();
  }
  return false;
}

}  // namespace

CoverageReport coverage(const Store &store) {
  require_finalized(store);
  return count(store, true);
}

CoverageReport provisional_coverage(const Store &store) {
  return count(store, store.finalized());
}

std::optional<Ratio> model_accuracy(const CoverageReport &report) {
  const std::int64_t labeled = report.model_labeled + report.search_labeled;
  if (labeled == 0) return std::nullopt;
  return Ratio{report.model_labeled, labeled};
}

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::kLabelLanguage:
      return "label_language";
    case Dimension::kSubcategory:
      return "subcategory";
    case Dimension::kNeType:
      return "ne_type";
    case Dimension::kMorphTag:
      return "morph_tag";
    case Dimension::kUnlabeledCategory:
      return "unlabeled_category";
    case Dimension::kUnlabeledFactor:
      return "unlabeled_factor";
  }
  return "?";
}

std::string_view to_string(Measure m) {
  return m == Measure::kCoverageShare ? "coverage_share" : "composition_share";
}

Dimension parse_dimension(std::string_view name) {
  for (Dimension d : {Dimension::kLabelLanguage, Dimension::kSubcategory, Dimension::kNeType,
                      Dimension::kMorphTag, Dimension::kUnlabeledCategory,
                      Dimension::kUnlabeledFactor}) {
    if (to_string(d) == name) return d;
  }
  throw InputError("unknown dimension '" + std::string(name) + "'");
}

Measure parse_measure(std::string_view name) {
  if (name == "coverage_share") return Measure::kCoverageShare;
  if (name == "composition_share") return Measure::kCompositionShare;
  throw InputError("unknown measure '" + std::string(name) + "'");
}

RenderFormat parse_render_format(std::string_view name) {
  if (name == "tsv") return RenderFormat::kTsv;
  if (name == "json-lines") return RenderFormat::kJsonLines;
  if (name == "plot-data") return RenderFormat::kPlotData;
  throw InputError("unknown render format '" + std::string(name) + "'");
}

std::vector<BreakdownRow> breakdown(const Store &store, Dimension dimension,
                                    Measure measure, const BreakdownOptions &options) {
  require_finalized(store);
  const bool composition_only = dimension == Dimension::kLabelLanguage ||
                                dimension == Dimension::kUnlabeledCategory ||
                                dimension == Dimension::kUnlabeledFactor;
  if (composition_only && measure == Measure::kCoverageShare) {
    throw InputError(std::string(to_string(dimension)) + " supports composition_share only");
  }

  std::map<std::string, Tally> tallies;
  std::int64_t population = 0;
  for (const WorkflowRecord &r : store.records()) {
    switch (dimension) {
      case Dimension::kLabelLanguage:
        if (!label_matches(r, options.label_source)) break;
        ++population;
        tallies[r.label()->language].add(r.state);
        break;
      case Dimension::kSubcategory:
        ++population;
        tallies[r.mention.subcategory].add(r.state);
        break;
      case Dimension::kNeType:
        ++population;
        tallies[std::string(to_string(r.mention.ne_type))].add(r.state);
        break;
      case Dimension::kMorphTag:
        for (const auto &tag : r.mention.morph_tags) {
          ++population;
          tallies[tag ? *tag : "(none)"].add(r.state);
        }
        break;
      case Dimension::kUnlabeledCategory:
        if (r.state != WorkflowState::kUnlabeled) break;
        ++population;
        tallies[r.unlabeled_tag ? std::string(to_string(r.unlabeled_tag->category))
                                : "untagged"]
            .add(r.state);
        break;
      case Dimension::kUnlabeledFactor:
        if (r.state != WorkflowState::kUnlabeled) break;
        ++population;
        if (!r.unlabeled_tag) {
          tallies["untagged"].add(r.state);
        } else if (r.unlabeled_tag->factors.empty()) {
          tallies[std::string(to_string(UnlabeledFactor::kNone))].add(r.state);
        } else {
          for (UnlabeledFactor f : r.unlabeled_tag->factors) {
            tallies[std::string(to_string(f))].add(r.state);
          }
        }
        break;
    }
  }

  auto make_row = [&](std::string key, const Tally &t) {
    BreakdownRow row;
    row.key = std::move(key);
    row.count = t.count;
    row.model = t.model;
    row.search = t.search;
    row.unlabeled = t.unlabeled;
    row.share = measure == Measure::kCoverageShare
                    ? Ratio{t.model + t.search, t.count > 0 ? t.count : 1}
                    : Ratio{t.count, population > 0 ? population : 1};
    row.skew_warning = dimension == Dimension::kSubcategory &&
                       options.skew_subcategories.count(row.key) > 0;
    return row;
  };

  std::vector<BreakdownRow> rows;
  Tally other;
  for (const auto &[key, t] : tallies) {
    if (options.collapse_small && t.count < options.threshold) {
      other.count += t.count;
      other.model += t.model;
      other.search += t.search;
      other.unlabeled += t.unlabeled;
      continue;
    }
    rows.push_back(make_row(key, t));
  }
  std::sort(rows.begin(), rows.end(), [](const BreakdownRow &a, const BreakdownRow &b) {
    if (a.count != b.count) return a.count > b.count;
    return a.key < b.key;
  });
  if (other.count > 0) rows.push_back(make_row("other", other));
  return rows;
}

namespace {

struct Metric {
  const char *name;
  std::int64_t count;
  std::int64_t den;
};

std::vector<Metric> metrics(const CoverageReport &r) {
  const std::int64_t total = r.total > 0 ? r.total : 1;
  std::vector<Metric> m = {
      {"total", r.total, total},
      {"model_labeled", r.model_labeled, total},
      {"search_labeled", r.search_labeled, total},
      {"unlabeled", r.unlabeled, total},
      {"coverage", r.model_labeled + r.search_labeled, total},
      {"wapis_overlap", r.wapis_overlap, total},
      {"wapis_total", r.wapis_total, total},
  };
  auto acc = model_accuracy(r);
  m.push_back({"model_accuracy", acc ? acc->num : 0, acc ? acc->den : 0});
  return m;
}

std::string display(std::int64_t num, std::int64_t den) {
  return den > 0 ? format_percent(num, den) : "NA";
}

}  // namespace

void render(const CoverageReport &report, RenderFormat format, std::ostream &out) {
  const auto rows = metrics(report);
  switch (format) {
    case RenderFormat::kTsv:
      out << "metric\tcount\tdenominator\tpercent\n";
      for (const Metric &m : rows) {
        out << m.name << '\t' << m.count << '\t' << m.den << '\t' << display(m.count, m.den)
            << '\n';
      }
      break;
    case RenderFormat::kJsonLines:
      for (const Metric &m : rows) {
        json j{{"metric", m.name},
               {"count", m.count},
               {"denominator", m.den},
               {"percent", display(m.count, m.den)},
               {"final", report.final}};
        out << j.dump() << '\n';
      }
      break;
    case RenderFormat::kPlotData:
      out << "key\tvalue\n";
      for (const Metric &m : rows) {
        if (std::string_view(m.name) == "total") continue;
        out << m.name << '\t' << display(m.count, m.den) << '\n';
      }
      break;
  }
}

void render(std::span<const BreakdownRow> rows, RenderFormat format, std::ostream &out) {
  switch (format) {
    case RenderFormat::kTsv:
      out << "key\tcount\tdenominator\tshare\tmodel\tsearch\tunlabeled\tskew_warning\n";
      for (const BreakdownRow &r : rows) {
        out << r.key << '\t' << r.count << '\t' << r.share.den << '\t' << r.share.percent()
            << '\t' << r.model << '\t' << r.search << '\t' << r.unlabeled << '\t'
            << (r.skew_warning ? "1" : "0") << '\n';
      }
      break;
    case RenderFormat::kJsonLines:
      for (const BreakdownRow &r : rows) {
        json j{{"key", r.key},
               {"count", r.count},
               {"denominator", r.share.den},
               {"share", r.share.percent()},
               {"model", r.model},
               {"search", r.search},
               {"unlabeled", r.unlabeled},
               {"skew_warning", r.skew_warning}};
        out << j.dump() << '\n';
      }
      break;
    case RenderFormat::kPlotData:
      out << "key\tvalue\n";
      for (const BreakdownRow &r : rows) out << r.key << '\t' << r.share.percent() << '\n';
      break;
  }
}

}  // namespace elboot

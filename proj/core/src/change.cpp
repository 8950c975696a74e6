#include "railtap/change.hpp"

#include <numeric>
#include <ostream>

#include "railtap/error.hpp"

namespace railtap {

std::string period_label(const UsageTemplate& tpl) {
  if (tpl.months.empty()) return "?";
  if (tpl.months.size() == 1) return format_year_month(tpl.months.front());
  return format_year_month(tpl.months.front()) + ".." +
         format_year_month(tpl.months.back());
}

ChangeReport diff_templates(const UsageTemplate& a, const UsageTemplate& b,
                            DistanceKind kind, double shape_threshold,
                            double volume_threshold) {
  if (shape_threshold < 0 || volume_threshold < 0) {
    throw Error(Errc::BAD_CONFIG, "change thresholds must be non-negative");
  }
  if (a.station != b.station || a.direction != b.direction ||
      a.day_class != b.day_class) {
    throw Error(Errc::INCOMPATIBLE_TEMPLATES,
                "templates must describe the same station, direction, and "
                "day class");
  }
  if (a.config != b.config || a.bins() != b.bins()) {
    throw Error(Errc::INCOMPATIBLE_TEMPLATES,
                "templates must share one bin config");
  }
  double total_a =
      std::accumulate(a.mean_counts.begin(), a.mean_counts.end(), 0.0);
  double total_b =
      std::accumulate(b.mean_counts.begin(), b.mean_counts.end(), 0.0);
  if (total_a <= 0.0 || total_b <= 0.0) {
    throw Error(Errc::ZERO_TOTAL, "cannot diff an all-zero template");
  }

  ChangeReport report;
  report.station = a.station;
  report.direction = a.direction;
  report.day_class = a.day_class;
  report.period_a = period_label(a);
  report.period_b = period_label(b);
  report.shape_distance = distance(normalized_shares(a.mean_counts),
                                   normalized_shares(b.mean_counts), kind);
  report.volume_ratio = total_b / total_a;
  report.per_bin_delta.resize(a.mean_counts.size());
  for (std::size_t i = 0; i < report.per_bin_delta.size(); ++i) {
    report.per_bin_delta[i] = b.mean_counts[i] - a.mean_counts[i];
  }
  report.changed = report.shape_distance > shape_threshold ||
                   std::abs(std::log(report.volume_ratio)) > volume_threshold;
  return report;
}

std::vector<ChangePairResult> change_matrix(
    const std::map<std::string, UsageTemplate>& templates_by_period,
    DistanceKind kind, double shape_threshold, double volume_threshold) {
  if (templates_by_period.size() < 2) {
    throw Error(Errc::INSUFFICIENT_INPUT,
                "a change sweep needs at least two periods");
  }
  std::vector<ChangePairResult> out;
  auto it = templates_by_period.begin();
  auto prev = it++;
  for (; it != templates_by_period.end(); prev = it++) {
    ChangePairResult pair;
    pair.period_a = prev->first;
    pair.period_b = it->first;
    try {
      ChangeReport report = diff_templates(prev->second, it->second, kind,
                                           shape_threshold, volume_threshold);
      report.period_a = prev->first;
      report.period_b = it->first;
      pair.report = std::move(report);
    } catch (const Error& e) {
      pair.error = e.what();
    }
    out.push_back(std::move(pair));
  }
  return out;
}

void write_changes_csv(std::ostream& out,
                       std::span<const ChangeReport> reports) {
  std::size_t bins = reports.empty() ? 0 : reports.front().per_bin_delta.size();
  out << "station,direction,day_class,period_a,period_b,shape_distance,"
         "volume_ratio,changed";
  for (std::size_t i = 0; i < bins; ++i) out << ",d" << i;
  out << '\n';
  for (const auto& r : reports) {
    if (r.per_bin_delta.size() != bins) {
      throw Error(Errc::INCOMPATIBLE_TEMPLATES,
                  "change reports in one file must share a bin count");
    }
    out << r.station.id << ',' << to_token(r.direction) << ','
        << to_token(r.day_class) << ',' << r.period_a << ',' << r.period_b
        << ',' << format_double_exact(r.shape_distance) << ','
        << format_double_exact(r.volume_ratio) << ','
        << (r.changed ? "true" : "false");
    for (double d : r.per_bin_delta) out << ',' << format_double_exact(d);
    out << '\n';
  }
}

}  // namespace railtap

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "railtap/binning.hpp"
#include "railtap/change.hpp"
#include "railtap/classifier.hpp"
#include "railtap/error.hpp"
#include "railtap/ingest.hpp"
#include "railtap/similarity.hpp"
#include "railtap/svg.hpp"
#include "railtap/synth.hpp"
#include "railtap/templates.hpp"

namespace fs = std::filesystem;
using namespace railtap;

namespace {

// Exit contract: 0 success, 1 usage/config error, 2 data error,
// 3 change detected under --fail-on-change.
int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::BAD_CONFIG:
    case Errc::INCOMPATIBLE_CONFIG:
    case Errc::INCOMPATIBLE_TEMPLATES:
      return 1;
    default:
      return 2;
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(Errc::IO_ERROR, "cannot create output directory " + dir);
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IO_ERROR, "cannot write " + path.string());
  }
  out << content;
  out.flush();
  if (!out) {
    throw Error(Errc::IO_ERROR, "write failure in " + path.string());
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IO_ERROR, "cannot open " + path);
  }
  return in;
}

DistanceKind parse_distance(const std::string& token) {
  auto kind = distance_kind_from_token(token);
  if (!kind) {
    throw Error(Errc::BAD_CONFIG, "unknown distance kind", token);
  }
  return *kind;
}

YearMonth parse_month_arg(const std::string& token) {
  auto ym = parse_year_month(token);
  if (!ym) {
    throw Error(Errc::BAD_CONFIG, "expected YYYY-MM month", token);
  }
  return *ym;
}

YearMonth next_month(YearMonth ym) {
  return ym + std::chrono::months{1};
}

// ---------------------------------------------------------------------------
// profile

struct ProfileArgs {
  std::vector<std::string> files;
  std::string out;
  int bin_width = 60;
  bool lenient = false;
};

int run_profile(const ProfileArgs& args) {
  BinConfig config{args.bin_width};
  config.bins();
  ensure_dir(args.out);
  ParseMode mode = args.lenient ? ParseMode::LENIENT : ParseMode::STRICT;

  bool any_failed = false;
  for (const std::string& path : args.files) {
    try {
      StationFile file = StationFile::from_path(path);
      ProfileAccumulator acc(config);
      IngestStats stats = parse_file(
          file, mode, [&](const ValidationRecord& rec) { acc.add(rec); });
      std::vector<DayProfile> profiles = acc.profiles();

      std::cout << "== " << path << '\n' << stats.to_report();
      for (Direction dir : {Direction::ENTRY, Direction::EXIT}) {
        std::vector<DayProfile> part;
        for (const auto& p : profiles) {
          if (p.direction == dir) part.push_back(p);
        }
        if (part.empty()) continue;
        fs::path out_path =
            fs::path(args.out) / (file.station.id + "_" +
                                  format_year_month(file.year_month) + "_" +
                                  std::string(to_token(dir)) +
                                  "_profiles.csv");
        std::ostringstream csv;
        write_profiles_csv(csv, part, config);
        write_file(out_path, csv.str());
        std::cout << "wrote " << out_path.string() << '\n';
      }
    } catch (const Error& e) {
      std::cerr << "error: " << path << ": " << e.what() << '\n';
      any_failed = true;
    }
  }
  return any_failed ? 2 : 0;
}

// ---------------------------------------------------------------------------
// template

struct TemplateArgs {
  std::vector<std::string> files;
  std::string out;
  std::string calendar;
  std::string distance = "L2";
  int min_support = -1;
  double tau = -1;
  std::string matrix_dir;
};

int run_template(const TemplateArgs& args) {
  CalendarPolicy policy;
  if (!args.calendar.empty()) policy = load_calendar_policy(args.calendar);
  if (args.min_support >= 0) policy.min_support = args.min_support;
  if (args.tau >= 0) policy.tau = args.tau;
  policy.validate();
  DistanceKind kind = parse_distance(args.distance);
  ensure_dir(args.out);
  if (!args.matrix_dir.empty()) ensure_dir(args.matrix_dir);

  std::vector<DayProfile> profiles;
  for (const std::string& path : args.files) {
    std::ifstream in = open_input(path);
    std::vector<DayProfile> part = read_profiles_csv(in, path);
    profiles.insert(profiles.end(), part.begin(), part.end());
  }
  if (profiles.empty()) {
    throw Error(Errc::INSUFFICIENT_INPUT, "no day profiles in input");
  }

  // Each profile lands in its coarse group and its weekday group.
  using Key = std::tuple<std::string, Direction, DayClass>;
  std::map<Key, std::vector<DayProfile>> groups;
  for (const auto& p : profiles) {
    DayClassification c = classify_day(p.date, policy);
    groups[{p.station.id, p.direction, c.coarse}].push_back(p);
    groups[{p.station.id, p.direction, c.weekday}].push_back(p);
  }

  std::ostringstream report;
  report << "station,direction,day_class,support,coherence,coherent\n";
  for (const auto& [key, group] : groups) {
    const auto& [station, direction, day_class] = key;
    UsageTemplate tpl = extract_template(group, day_class, policy, kind);
    fs::path out_path =
        fs::path(args.out) / (station + "_" +
                              std::string(to_token(direction)) + "_" +
                              std::string(to_token(day_class)) +
                              "_template.csv");
    std::ostringstream csv;
    write_template_csv(csv, tpl);
    write_file(out_path, csv.str());
    std::cout << "wrote " << out_path.string() << '\n';

    report << station << ',' << to_token(direction) << ','
           << to_token(day_class) << ',' << tpl.support << ','
           << format_double_exact(tpl.coherence) << ','
           << (tpl.coherent ? "true" : "false") << '\n';
    if (!tpl.coherent) {
      std::cerr << "warning: incoherent group " << station << ' '
                << to_token(direction) << ' ' << to_token(day_class)
                << " (support " << tpl.support << ", coherence "
                << format_double_exact(tpl.coherence) << ")\n";
    }

    if (!args.matrix_dir.empty() && group.size() >= 2) {
      SimilarityMatrix matrix = pairwise_matrix(group, kind, true);
      fs::path mpath =
          fs::path(args.matrix_dir) / (station + "_" +
                                       std::string(to_token(direction)) + "_" +
                                       std::string(to_token(day_class)) +
                                       "_matrix.csv");
      std::ostringstream mcsv;
      write_matrix_csv(mcsv, matrix);
      write_file(mpath, mcsv.str());
      std::cout << "wrote " << mpath.string() << '\n';
    }
  }
  fs::path report_path = fs::path(args.out) / "coherence_report.csv";
  write_file(report_path, report.str());
  std::cout << "wrote " << report_path.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyArgs {
  std::vector<std::string> files;
  std::string out;
  std::string windows;
  double peak_frac = -1;
  double dip_frac = -1;
};

int run_classify(const ClassifyArgs& args) {
  WindowConfig cfg;
  if (!args.windows.empty()) cfg = load_window_config(args.windows);
  if (args.peak_frac >= 0) cfg.peak_height_frac = args.peak_frac;
  if (args.dip_frac >= 0) cfg.dip_frac = args.dip_frac;
  cfg.validate();
  ensure_dir(args.out);

  using Slot = std::pair<Direction, DayClass>;
  std::map<std::string, std::map<Slot, UsageTemplate>> stations;
  for (const std::string& path : args.files) {
    std::ifstream in = open_input(path);
    UsageTemplate tpl = read_template_csv(in, path);
    if (tpl.day_class != DayClass::WORKDAY &&
        tpl.day_class != DayClass::WEEKEND) {
      std::cerr << "note: ignoring per-weekday template " << path << '\n';
      continue;
    }
    Slot slot{tpl.direction, tpl.day_class};
    auto [it, inserted] =
        stations[tpl.station.id].try_emplace(slot, std::move(tpl));
    if (!inserted) {
      throw Error(Errc::INCOMPATIBLE_TEMPLATES,
                  "duplicate template for station " + it->second.station.id,
                  path);
    }
  }
  if (stations.empty()) {
    throw Error(Errc::INSUFFICIENT_INPUT, "no usable templates in input");
  }

  auto pick = [](const std::map<Slot, UsageTemplate>& slots, Direction d,
                 DayClass c) -> std::optional<UsageTemplate> {
    auto it = slots.find({d, c});
    if (it == slots.end()) return std::nullopt;
    return it->second;
  };

  std::vector<StationClassification> results;
  for (const auto& [station, slots] : stations) {
    auto entry_w = pick(slots, Direction::ENTRY, DayClass::WORKDAY);
    auto exit_w = pick(slots, Direction::EXIT, DayClass::WORKDAY);
    auto entry_e = pick(slots, Direction::ENTRY, DayClass::WEEKEND);
    auto exit_e = pick(slots, Direction::EXIT, DayClass::WEEKEND);
    if (entry_w && exit_w) {
      results.push_back(
          classify_station(entry_w, exit_w, entry_e, exit_e, cfg));
    } else {
      // Labels for whatever exists; no archetype without the workday pair.
      StationClassification c;
      c.station.id = station;
      c.archetype = Archetype::UNCLASSIFIED;
      for (const auto& [slot, tpl] : slots) {
        ClassifiedGroup g;
        g.direction = slot.first;
        g.day_class = slot.second;
        g.peaks = find_peaks(tpl, cfg);
        g.labels = label_template(tpl, cfg);
        c.groups.push_back(std::move(g));
      }
      results.push_back(std::move(c));
      std::cerr << "warning: station " << station
                << " lacks a workday entry/exit template pair; UNCLASSIFIED\n";
    }
  }

  std::ostringstream csv;
  write_classification_csv(csv, results);
  fs::path out_path = fs::path(args.out) / "classification.csv";
  write_file(out_path, csv.str());
  for (const auto& r : results) std::cout << format_classification_text(r);
  std::cout << "wrote " << out_path.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// diff

struct DiffArgs {
  std::vector<std::string> a_files;
  std::vector<std::string> b_files;
  std::string out;
  std::string distance = "L2";
  double shape_threshold = kDefaultShapeThreshold;
  double volume_threshold = kDefaultVolumeThreshold;
  bool fail_on_change = false;
};

int run_diff(const DiffArgs& args) {
  DistanceKind kind = parse_distance(args.distance);
  if (args.shape_threshold < 0 || args.volume_threshold < 0) {
    throw Error(Errc::BAD_CONFIG, "change thresholds must be non-negative");
  }
  ensure_dir(args.out);

  using Key = std::tuple<std::string, Direction, DayClass>;
  auto load_side = [](const std::vector<std::string>& files,
                      std::string_view side) {
    std::map<Key, UsageTemplate> out;
    for (const std::string& path : files) {
      std::ifstream in = open_input(path);
      UsageTemplate tpl = read_template_csv(in, path);
      Key key{tpl.station.id, tpl.direction, tpl.day_class};
      if (!out.emplace(key, std::move(tpl)).second) {
        throw Error(Errc::INCOMPATIBLE_TEMPLATES,
                    "duplicate template in period " + std::string(side), path);
      }
    }
    return out;
  };
  std::map<Key, UsageTemplate> side_a = load_side(args.a_files, "a");
  std::map<Key, UsageTemplate> side_b = load_side(args.b_files, "b");

  std::vector<ChangeReport> reports;
  bool any_changed = false;
  for (const auto& [key, tpl_a] : side_a) {
    auto it = side_b.find(key);
    if (it == side_b.end()) {
      std::cerr << "warning: " << std::get<0>(key) << ' '
                << to_token(std::get<1>(key)) << ' '
                << to_token(std::get<2>(key)) << " missing in period b\n";
      continue;
    }
    ChangeReport report =
        diff_templates(tpl_a, it->second, kind, args.shape_threshold,
                       args.volume_threshold);
    any_changed = any_changed || report.changed;
    std::cout << report.station.id << ' ' << to_token(report.direction) << ' '
              << to_token(report.day_class) << ": "
              << (report.changed ? "CHANGED" : "unchanged") << " shape="
              << format_double_exact(report.shape_distance) << " volume_ratio="
              << format_double_exact(report.volume_ratio) << '\n';
    reports.push_back(std::move(report));
  }
  for (const auto& [key, tpl_b] : side_b) {
    if (!side_a.count(key)) {
      std::cerr << "warning: " << std::get<0>(key) << ' '
                << to_token(std::get<1>(key)) << ' '
                << to_token(std::get<2>(key)) << " missing in period a\n";
    }
  }
  if (reports.empty()) {
    throw Error(Errc::INSUFFICIENT_INPUT, "no comparable template pairs");
  }

  std::ostringstream csv;
  write_changes_csv(csv, reports);
  fs::path out_path = fs::path(args.out) / "changes.csv";
  write_file(out_path, csv.str());
  std::cout << "wrote " << out_path.string() << '\n';
  return any_changed && args.fail_on_change ? 3 : 0;
}

// ---------------------------------------------------------------------------
// plot

struct PlotArgs {
  std::vector<std::string> files;
  std::string out;
};

int run_plot(const PlotArgs& args) {
  ensure_dir(args.out);
  for (const std::string& path : args.files) {
    std::ifstream probe = open_input(path);
    std::string first_line;
    std::getline(probe, first_line);
    probe.close();

    std::size_t written = 0;
    if (!first_line.empty() && first_line[0] == '#') {
      std::ifstream in = open_input(path);
      UsageTemplate tpl = read_template_csv(in, path);
      SeriesPlot plot;
      plot.title = tpl.station.id + " " + std::string(to_token(tpl.direction)) +
                   " " + std::string(to_token(tpl.day_class)) + " template";
      plot.bin_width_minutes = tpl.config.bin_width_minutes;
      plot.values = tpl.mean_counts;
      fs::path out_path =
          fs::path(args.out) / (tpl.station.id + "_" +
                                std::string(to_token(tpl.direction)) + "_" +
                                std::string(to_token(tpl.day_class)) + ".svg");
      write_file(out_path, render_bar_svg(plot));
      std::cout << "wrote " << out_path.string() << '\n';
      ++written;
    } else {
      std::ifstream in = open_input(path);
      std::vector<DayProfile> profiles = read_profiles_csv(in, path);
      for (const auto& p : profiles) {
        SeriesPlot plot;
        plot.title = p.station.id + " " + format_date(p.date) + " " +
                     std::string(to_token(p.direction));
        plot.bin_width_minutes = p.bin_width_minutes;
        plot.values.assign(p.counts.begin(), p.counts.end());
        fs::path out_path =
            fs::path(args.out) / (p.station.id + "_" + format_date(p.date) +
                                  "_" + std::string(to_token(p.direction)) +
                                  ".svg");
        write_file(out_path, render_bar_svg(plot));
        std::cout << "wrote " << out_path.string() << '\n';
        ++written;
      }
      if (written == 0) {
        throw Error(Errc::INSUFFICIENT_INPUT, path + ": no series to plot");
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string out;
  std::string scenario_file;
  std::vector<std::string> names;
  std::vector<std::string> months;
  std::string from;
  int count = 0;
  long long seed = -1;
  std::string calendar;
  std::string dump;
  bool no_emission = false;
};

int run_synth(const SynthArgs& args) {
  std::vector<StationScenario> scenarios = args.scenario_file.empty()
                                               ? canonical_scenarios()
                                               : load_scenarios(args.scenario_file);
  if (!args.names.empty()) {
    std::vector<StationScenario> picked;
    for (const std::string& name : args.names) {
      bool found = false;
      for (const auto& s : scenarios) {
        if (s.name == name) {
          picked.push_back(s);
          found = true;
          break;
        }
      }
      if (!found) {
        throw Error(Errc::BAD_CONFIG, "unknown scenario", name);
      }
    }
    scenarios = std::move(picked);
  }

  if (!args.dump.empty()) {
    std::ostringstream text;
    write_scenarios(text, scenarios);
    write_file(args.dump, text.str());
    std::cout << "wrote " << args.dump << '\n';
    return 0;
  }

  std::vector<YearMonth> months;
  for (const std::string& m : args.months) {
    months.push_back(parse_month_arg(m));
  }
  if (!args.from.empty()) {
    if (args.count < 1) {
      throw Error(Errc::BAD_CONFIG, "--count must be >= 1 with --from");
    }
    YearMonth ym = parse_month_arg(args.from);
    for (int i = 0; i < args.count; ++i, ym = next_month(ym)) {
      months.push_back(ym);
    }
  }
  if (months.empty()) {
    throw Error(Errc::BAD_CONFIG,
                "no months requested; use --month or --from/--count");
  }

  if (args.seed >= 0) {
    for (auto& s : scenarios) s.seed = std::uint64_t(args.seed);
  }
  CalendarPolicy policy;
  if (!args.calendar.empty()) policy = load_calendar_policy(args.calendar);

  ensure_dir(args.out);
  for (const auto& scenario : scenarios) {
    for (YearMonth ym : months) {
      GeneratedFile file = generate_month_file(scenario, ym, args.out, policy);
      std::cout << "wrote " << file.path << " (" << file.log.total_rows
                << " rows)\n";
      if (!args.no_emission) {
        std::ostringstream csv;
        write_emission_csv(csv, file.log);
        fs::path epath =
            fs::path(args.out) / (scenario.station.id + "_" +
                                  format_year_month(ym) + "_emission.csv");
        write_file(epath, csv.str());
        std::cout << "wrote " << epath.string() << '\n';
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"turn per-station validation logs into usage profiles, "
               "templates, classifications, and change reports"};
  app.require_subcommand(1);

  ProfileArgs profile_args;
  CLI::App* profile = app.add_subcommand(
      "profile", "bin validation CSVs into day profiles");
  profile->add_option("files", profile_args.files, "station-month CSV files")
      ->required();
  profile->add_option("-o,--out", profile_args.out, "output directory")
      ->required();
  profile->add_option("--bin-width", profile_args.bin_width,
                      "bin width in minutes (must divide 1440)");
  profile->add_flag("--lenient", profile_args.lenient,
                    "skip malformed rows instead of aborting");

  TemplateArgs template_args;
  CLI::App* tmpl = app.add_subcommand(
      "template", "extract day-class usage templates from profiles");
  tmpl->add_option("files", template_args.files, "profile CSV files")
      ->required();
  tmpl->add_option("-o,--out", template_args.out, "output directory")
      ->required();
  tmpl->add_option("--calendar", template_args.calendar,
                   "calendar policy file (holidays, tau, min_support)");
  tmpl->add_option("--distance", template_args.distance,
                   "distance kind: L2, L1, COSINE, PEARSON");
  tmpl->add_option("--min-support", template_args.min_support,
                   "override minimum group size");
  tmpl->add_option("--tau", template_args.tau,
                   "override coherence threshold");
  tmpl->add_option("--matrix-dir", template_args.matrix_dir,
                   "also write per-group pairwise distance matrices here");

  ClassifyArgs classify_args;
  CLI::App* classify = app.add_subcommand(
      "classify", "label template morphology and station archetypes");
  classify->add_option("files", classify_args.files, "template CSV files")
      ->required();
  classify->add_option("-o,--out", classify_args.out, "output directory")
      ->required();
  classify->add_option("--windows", classify_args.windows,
                       "window config file");
  classify->add_option("--peak-frac", classify_args.peak_frac,
                       "override peak height fraction");
  classify->add_option("--dip-frac", classify_args.dip_frac,
                       "override midday dip fraction");

  DiffArgs diff_args;
  CLI::App* diff = app.add_subcommand(
      "diff", "compare templates between two periods");
  diff->add_option("-a,--period-a", diff_args.a_files,
                   "template CSVs for the earlier period")
      ->required();
  diff->add_option("-b,--period-b", diff_args.b_files,
                   "template CSVs for the later period")
      ->required();
  diff->add_option("-o,--out", diff_args.out, "output directory")->required();
  diff->add_option("--distance", diff_args.distance,
                   "distance kind: L2, L1, COSINE, PEARSON");
  diff->add_option("--shape-threshold", diff_args.shape_threshold,
                   "normalized shape distance threshold");
  diff->add_option("--volume-threshold", diff_args.volume_threshold,
                   "|ln volume ratio| threshold");
  diff->add_flag("--fail-on-change", diff_args.fail_on_change,
                 "exit 3 when any pair changed");

  PlotArgs plot_args;
  CLI::App* plot = app.add_subcommand(
      "plot", "render profile or template CSVs as SVG bar charts");
  plot->add_option("files", plot_args.files, "profile or template CSV files")
      ->required();
  plot->add_option("-o,--out", plot_args.out, "output directory")->required();

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "generate synthetic station-month validation CSVs");
  synth->add_option("-o,--out", synth_args.out, "output directory");
  synth->add_option("--scenarios", synth_args.scenario_file,
                    "scenario config file (default: built-in scenarios)");
  synth->add_option("--scenario", synth_args.names,
                    "pick scenarios by name (repeatable)");
  synth->add_option("--month", synth_args.months,
                    "month to generate, YYYY-MM (repeatable)");
  synth->add_option("--from", synth_args.from, "first month of a sweep");
  synth->add_option("--count", synth_args.count, "sweep length in months");
  synth->add_option("--seed", synth_args.seed, "override scenario seeds");
  synth->add_option("--calendar", synth_args.calendar,
                    "calendar policy file for day classes");
  synth->add_option("--dump-scenarios", synth_args.dump,
                    "write the scenario definitions to this file and exit");
  synth->add_flag("--no-emission", synth_args.no_emission,
                  "skip the per-month emission CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (profile->parsed()) return run_profile(profile_args);
    if (tmpl->parsed()) return run_template(template_args);
    if (classify->parsed()) return run_classify(classify_args);
    if (diff->parsed()) return run_diff(diff_args);
    if (plot->parsed()) return run_plot(plot_args);
    if (synth->parsed()) {
      if (synth_args.out.empty() && synth_args.dump.empty()) {
        throw Error(Errc::BAD_CONFIG, "synth needs --out or --dump-scenarios");
      }
      return run_synth(synth_args);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "helpers.hpp"
#include "railtap/binning.hpp"
#include "railtap/synth.hpp"
#include "railtap/templates.hpp"

using namespace railtap;
using namespace railtap::test;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the installed binary with stdout/stderr captured to files in `dir`.
CliResult run_cli(const TempDir& dir, const std::vector<std::string>& args) {
  static std::atomic<unsigned> invocation{0};
  unsigned id = invocation.fetch_add(1);
  std::string out_path = dir.file("cli_out_" + std::to_string(id) + ".txt");
  std::string err_path = dir.file("cli_err_" + std::to_string(id) + ".txt");

  std::string cmd = "'" RAILTAP_CLI_PATH "'";
  for (const std::string& a : args) cmd += " '" + a + "'";
  cmd += " >'" + out_path + "' 2>'" + err_path + "'";

  int status = std::system(cmd.c_str());
  CliResult r;
  if (status >= 0 && WIFEXITED(status)) r.code = WEXITSTATUS(status);
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  return r;
}

StationScenario probe_scenario() {
  StationScenario s;
  s.name = "PROBE";
  s.station.id = "PROBE";
  s.config = BinConfig{360};
  s.seed = 42;
  s.workday_entry = {30, 60, 45, 15};
  s.workday_exit = {10, 40, 70, 30};
  s.weekend_entry = {20, 50, 40, 10};
  s.weekend_exit = {15, 35, 55, 20};
  s.metadata_mix.fare_class.weights = {{"FULL", 0.8}, {"DISCOUNT", 0.2}};
  s.metadata_mix.benefit_type.weights = {{"FEDERAL", 0.7}, {"REGIONAL", 0.3}};
  s.metadata_mix.ticket_type.weights = {{"ONE_WAY", 0.6}, {"SUBSCRIPTION", 0.4}};
  s.metadata_mix.media.weights = {{"SMARTCARD", 0.9}, {"PAPER", 0.1}};
  s.counterpart_stations.weights = {{"HUB_A", 0.65}, {"HUB_B", 0.35}};
  return s;
}

std::string write_scenario_file(const TempDir& dir) {
  auto s = probe_scenario();
  std::ostringstream text;
  write_scenarios(text, {&s, 1});
  return write_file(dir.file("probe.ini"), text.str());
}

UsageTemplate probe_template(std::vector<double> means, Direction dir,
                             DayClass cls = DayClass::WORKDAY) {
  UsageTemplate t;
  t.station.id = "PROBE";
  t.direction = dir;
  t.day_class = cls;
  t.config = BinConfig{int(1440 / means.size())};
  t.std_counts.assign(means.size(), 1.0);
  t.mean_counts = std::move(means);
  t.support = 5;
  t.coherence = 0.05;
  t.coherent = true;
  t.months = {railtap::test::month(2018, 3)};
  return t;
}

std::string write_template_file(const TempDir& dir, const std::string& name,
                                const UsageTemplate& tpl) {
  std::ostringstream csv;
  write_template_csv(csv, tpl);
  return write_file(dir.file(name), csv.str());
}

std::size_t count_files(const std::filesystem::path& dir,
                        const std::string& suffix) {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.size() >= suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      ++n;
    }
  }
  return n;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("no subcommand is a usage error; --help succeeds") {
  TempDir dir("cli");
  CHECK(run_cli(dir, {}).code == 1);

  auto help = run_cli(dir, {"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("profile") != std::string::npos);
  CHECK(help.out.find("synth") != std::string::npos);
}

TEST_CASE("synth writes deterministic station months under --out") {
  TempDir dir("cli");
  std::string scenarios = write_scenario_file(dir);

  auto first = run_cli(dir, {"synth", "--scenarios", scenarios, "--month",
                             "2018-03", "--out", dir.file("gen_a")});
  REQUIRE(first.code == 0);
  CHECK(std::filesystem::exists(dir.file("gen_a/PROBE_2018-03.csv")));
  CHECK(std::filesystem::exists(dir.file("gen_a/PROBE_2018-03_emission.csv")));
  CHECK(first.out.find("wrote") != std::string::npos);

  auto second = run_cli(dir, {"synth", "--scenarios", scenarios, "--month",
                              "2018-03", "--out", dir.file("gen_b")});
  REQUIRE(second.code == 0);
  CHECK(read_file(dir.file("gen_a/PROBE_2018-03.csv")) ==
        read_file(dir.file("gen_b/PROBE_2018-03.csv")));
}

TEST_CASE("synth sweeps months and can skip emission files") {
  TempDir dir("cli");
  std::string scenarios = write_scenario_file(dir);

  auto r = run_cli(dir, {"synth", "--scenarios", scenarios, "--from", "2018-11",
                         "--count", "3", "--no-emission", "--out",
                         dir.file("gen")});
  REQUIRE(r.code == 0);
  CHECK(std::filesystem::exists(dir.file("gen/PROBE_2018-11.csv")));
  CHECK(std::filesystem::exists(dir.file("gen/PROBE_2018-12.csv")));
  CHECK(std::filesystem::exists(dir.file("gen/PROBE_2019-01.csv")));
  CHECK(count_files(dir.file("gen"), "_emission.csv") == 0);
}

TEST_CASE("synth rejects unknown scenarios, bad months, and missing --out") {
  TempDir dir("cli");
  std::string scenarios = write_scenario_file(dir);

  CHECK(run_cli(dir, {"synth", "--scenarios", scenarios, "--scenario", "NOPE",
                      "--month", "2018-03", "--out", dir.file("g1")})
            .code == 1);
  CHECK(run_cli(dir, {"synth", "--scenarios", scenarios, "--month", "2018-13",
                      "--out", dir.file("g2")})
            .code == 1);
  CHECK(run_cli(dir, {"synth", "--scenarios", scenarios, "--month", "2018-03"})
            .code == 1);
  CHECK(run_cli(dir, {"synth", "--scenarios", scenarios, "--out", dir.file("g3")})
            .code == 1);
}

TEST_CASE("synth --dump-scenarios round-trips the built-in set") {
  TempDir dir("cli");
  std::string dump = dir.file("canon.ini");
  auto r = run_cli(dir, {"synth", "--dump-scenarios", dump});
  REQUIRE(r.code == 0);

  auto parsed = load_scenarios(dump);
  REQUIRE(parsed.size() == 4);
  CHECK(parsed[0].name == "OUTSIDE_COMMUTER");
  CHECK(parsed[3].name == "INSIDE_WEEKEND");
  // Nothing was generated.
  CHECK(count_files(dir.path(), ".csv") == 0);
}

TEST_CASE("profile turns a station month into per-direction day profiles") {
  TempDir dir("cli");
  auto generated =
      generate_month_file(probe_scenario(), month(2018, 3), dir.str());

  auto r = run_cli(dir, {"profile", generated.path, "--bin-width", "360",
                         "--out", dir.file("profiles")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("rows_read") != std::string::npos);

  std::string entry_path = dir.file("profiles/PROBE_2018-03_ENTRY_profiles.csv");
  std::string exit_path = dir.file("profiles/PROBE_2018-03_EXIT_profiles.csv");
  REQUIRE(std::filesystem::exists(entry_path));
  REQUIRE(std::filesystem::exists(exit_path));

  // Day totals reconcile with what the generator reported emitting.
  std::ifstream in(entry_path);
  auto profiles = read_profiles_csv(in, entry_path);
  CHECK(profiles.size() == 31);
  for (const auto& p : profiles) {
    const EmissionCell* cell = generated.log.find(p.date, Direction::ENTRY);
    REQUIRE(cell != nullptr);
    CHECK(p.counts == cell->bin_counts);
  }
}

TEST_CASE("profile fails with exit 2 on unreadable or malformed input") {
  TempDir dir("cli");
  auto missing = run_cli(dir, {"profile", dir.file("GHOST_2018-03.csv"),
                               "--out", dir.file("p1")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("error") != std::string::npos);

  write_file(dir.file("S1_2018-03.csv"), "not,the,right,header\n1,2,3,4\n");
  auto malformed = run_cli(dir, {"profile", dir.file("S1_2018-03.csv"),
                                 "--out", dir.file("p2")});
  CHECK(malformed.code == 2);

  // Missing the required file list is a usage error instead.
  CHECK(run_cli(dir, {"profile", "--out", dir.file("p3")}).code == 1);
}

TEST_CASE("template extracts coarse and per-weekday templates with a report") {
  TempDir dir("cli");
  auto generated =
      generate_month_file(probe_scenario(), month(2018, 3), dir.str());
  REQUIRE(run_cli(dir, {"profile", generated.path, "--bin-width", "360",
                        "--out", dir.file("profiles")})
              .code == 0);

  auto r = run_cli(dir, {"template",
                         dir.file("profiles/PROBE_2018-03_ENTRY_profiles.csv"),
                         dir.file("profiles/PROBE_2018-03_EXIT_profiles.csv"),
                         "--out", dir.file("templates"), "--matrix-dir",
                         dir.file("matrices")});
  REQUIRE(r.code == 0);

  for (const char* name :
       {"PROBE_ENTRY_WORKDAY_template.csv", "PROBE_ENTRY_WEEKEND_template.csv",
        "PROBE_EXIT_WORKDAY_template.csv", "PROBE_EXIT_WEEKEND_template.csv",
        "PROBE_ENTRY_MONDAY_template.csv", "coherence_report.csv"}) {
    CHECK(std::filesystem::exists(dir.file(std::string("templates/") + name)));
  }

  // 2 coarse + 7 weekday classes per direction.
  std::string report = read_file(dir.file("templates/coherence_report.csv"));
  CHECK(std::count(report.begin(), report.end(), '\n') == 19);
  CHECK(report.rfind("station,direction,day_class,support,coherence,coherent",
                     0) == 0);

  // Pairwise matrices accompany every multi-profile group.
  CHECK(count_files(dir.file("matrices"), "_matrix.csv") == 18);

  // The workday template reads back with the right support.
  std::ifstream in(dir.file("templates/PROBE_ENTRY_WORKDAY_template.csv"));
  UsageTemplate tpl = read_template_csv(in, "workday");
  CHECK(tpl.support == 22);
  CHECK(tpl.day_class == DayClass::WORKDAY);
  CHECK(tpl.months == std::vector<YearMonth>{month(2018, 3)});
}

TEST_CASE("template rejects mixed bin widths across inputs") {
  TempDir dir("cli");
  auto p60 = make_profile("S1", date(2018, 3, 5), Direction::ENTRY,
                          sparse_counts(60, {{8, 10}}), 60);
  auto p30 = make_profile("S1", date(2018, 3, 6), Direction::ENTRY,
                          sparse_counts(30, {{16, 10}}), 30);
  {
    std::ostringstream csv;
    std::vector<DayProfile> one{p60};
    write_profiles_csv(csv, one);
    write_file(dir.file("a.csv"), csv.str());
  }
  {
    std::ostringstream csv;
    std::vector<DayProfile> one{p30};
    write_profiles_csv(csv, one);
    write_file(dir.file("b.csv"), csv.str());
  }
  auto r = run_cli(dir, {"template", dir.file("a.csv"), dir.file("b.csv"),
                         "--min-support", "1", "--out", dir.file("t")});
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("classify labels stations from template files") {
  TempDir dir("cli");
  write_template_file(dir, "entry.csv",
                      probe_template({30, 60, 45, 15}, Direction::ENTRY));
  write_template_file(dir, "exit.csv",
                      probe_template({10, 40, 70, 30}, Direction::EXIT));

  auto r = run_cli(dir, {"classify", dir.file("entry.csv"), dir.file("exit.csv"),
                         "--out", dir.file("cls")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("COMMUTER_ORIGIN") != std::string::npos);

  std::string csv = read_file(dir.file("cls/classification.csv"));
  CHECK(csv.find("PROBE,COMMUTER_ORIGIN,ENTRY,WORKDAY") != std::string::npos);
  CHECK(csv.find("MORNING_PEAK") != std::string::npos);
}

TEST_CASE("classify rejects duplicate slots and tolerates missing pairs") {
  TempDir dir("cli");
  write_template_file(dir, "entry.csv",
                      probe_template({30, 60, 45, 15}, Direction::ENTRY));
  write_template_file(dir, "entry2.csv",
                      probe_template({35, 55, 40, 20}, Direction::ENTRY));

  auto dup = run_cli(dir, {"classify", dir.file("entry.csv"),
                           dir.file("entry2.csv"), "--out", dir.file("c1")});
  CHECK(dup.code == 1);

  auto lone = run_cli(dir, {"classify", dir.file("entry.csv"), "--out",
                            dir.file("c2")});
  REQUIRE(lone.code == 0);
  CHECK(lone.err.find("lacks a workday entry/exit template pair") !=
        std::string::npos);
  CHECK(read_file(dir.file("c2/classification.csv"))
            .find("UNCLASSIFIED") != std::string::npos);
}

TEST_CASE("diff reports changes and honors --fail-on-change") {
  TempDir dir("cli");
  write_template_file(dir, "a.csv",
                      probe_template({30, 60, 45, 15}, Direction::ENTRY));
  write_template_file(dir, "b_same.csv",
                      probe_template({30, 60, 45, 15}, Direction::ENTRY));
  write_template_file(dir, "b_double.csv",
                      probe_template({60, 120, 90, 30}, Direction::ENTRY));

  auto same = run_cli(dir, {"diff", "-a", dir.file("a.csv"), "-b",
                            dir.file("b_same.csv"), "--out", dir.file("d1")});
  REQUIRE(same.code == 0);
  CHECK(same.out.find("unchanged") != std::string::npos);
  CHECK(read_file(dir.file("d1/changes.csv")).find("false") !=
        std::string::npos);

  auto changed = run_cli(dir, {"diff", "-a", dir.file("a.csv"), "-b",
                               dir.file("b_double.csv"), "--out",
                               dir.file("d2")});
  REQUIRE(changed.code == 0);
  CHECK(changed.out.find("CHANGED") != std::string::npos);

  auto failing = run_cli(dir, {"diff", "-a", dir.file("a.csv"), "-b",
                               dir.file("b_double.csv"), "--fail-on-change",
                               "--out", dir.file("d3")});
  CHECK(failing.code == 3);
}

TEST_CASE("diff rejects incompatible template pairs with exit 1") {
  TempDir dir("cli");
  write_template_file(dir, "a.csv",
                      probe_template({30, 60, 45, 15}, Direction::ENTRY));
  write_template_file(
      dir, "b.csv",
      probe_template(std::vector<double>(24, 10.0), Direction::ENTRY));

  auto r = run_cli(dir, {"diff", "-a", dir.file("a.csv"), "-b",
                         dir.file("b.csv"), "--out", dir.file("d")});
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("plot renders templates and day profiles to SVG") {
  TempDir dir("cli");
  write_template_file(dir, "tpl.csv",
                      probe_template({30, 60, 45, 15}, Direction::ENTRY));

  auto t = run_cli(dir, {"plot", dir.file("tpl.csv"), "--out", dir.file("svg")});
  REQUIRE(t.code == 0);
  std::string svg = read_file(dir.file("svg/PROBE_ENTRY_WORKDAY.svg"));
  CHECK(svg.rfind("<svg ", 0) == 0);

  std::vector<DayProfile> days{
      make_profile("PROBE", date(2018, 3, 1), Direction::ENTRY,
                   {10, 20, 30, 5}, 360),
      make_profile("PROBE", date(2018, 3, 2), Direction::ENTRY,
                   {12, 18, 28, 6}, 360),
  };
  std::ostringstream csv;
  write_profiles_csv(csv, days);
  write_file(dir.file("days.csv"), csv.str());

  auto p = run_cli(dir, {"plot", dir.file("days.csv"), "--out",
                         dir.file("svg2")});
  REQUIRE(p.code == 0);
  CHECK(std::filesystem::exists(dir.file("svg2/PROBE_2018-03-01_ENTRY.svg")));
  CHECK(std::filesystem::exists(dir.file("svg2/PROBE_2018-03-02_ENTRY.svg")));
  CHECK(count_files(dir.file("svg2"), ".svg") == 2);

  // A profile CSV with no data rows cannot be plotted.
  std::ostringstream empty_csv;
  write_profiles_csv(empty_csv, {}, BinConfig{360});
  write_file(dir.file("empty.csv"), empty_csv.str());
  CHECK(run_cli(dir, {"plot", dir.file("empty.csv"), "--out",
                      dir.file("svg3")})
            .code == 2);
}

TEST_SUITE_END();

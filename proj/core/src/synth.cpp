#include "railtap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "railtap/config.hpp"
#include "railtap/error.hpp"
#include "railtap/ingest.hpp"

namespace railtap {
namespace {

bool plain_mix_token(std::string_view s) {
  if (!StationId::valid_token(s)) return false;
  // ':' separates token from weight in the scenario file syntax.
  return s.find(':') == std::string_view::npos;
}

/// Cumulative-weight lookup table for one categorical mix.
struct Sampler {
  std::vector<std::string> tokens;
  std::vector<double> cumulative;

  explicit Sampler(const CategoricalMix& mix) {
    double sum = 0;
    for (const auto& [token, weight] : mix.weights) {
      sum += weight;
      tokens.push_back(token);
      cumulative.push_back(sum);
    }
  }

  const std::string& sample(Rng& rng) const {
    return tokens[rng.categorical(cumulative)];
  }
};

void require_vector(const std::vector<double>& v, int bins,
                    std::string_view what) {
  if (int(v.size()) != bins) {
    throw Error(Errc::BAD_CONFIG,
                std::string(what) + " must have " + std::to_string(bins) +
                    " entries, got " + std::to_string(v.size()));
  }
  for (double x : v) {
    if (!std::isfinite(x) || x < 0) {
      throw Error(Errc::BAD_CONFIG,
                  std::string(what) + " entries must be finite and >= 0");
    }
  }
}

}  // namespace

void CategoricalMix::validate(std::string_view what) const {
  if (weights.empty()) {
    throw Error(Errc::BAD_CONFIG, std::string(what) + " mix is empty");
  }
  double sum = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto& [token, weight] = weights[i];
    if (!plain_mix_token(token)) {
      throw Error(Errc::BAD_CONFIG,
                  std::string(what) + " mix has a malformed token", token);
    }
    if (!(weight > 0) || !std::isfinite(weight)) {
      throw Error(Errc::BAD_CONFIG,
                  std::string(what) + " weights must be positive", token);
    }
    for (std::size_t j = i + 1; j < weights.size(); ++j) {
      if (weights[j].first == token) {
        throw Error(Errc::BAD_CONFIG,
                    std::string(what) + " mix repeats a token", token);
      }
    }
    sum += weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(Errc::BAD_CONFIG,
                std::string(what) + " weights must sum to 1, got " +
                    format_double_exact(sum));
  }
}

bool CategoricalMix::has_token(std::string_view token) const {
  for (const auto& [t, w] : weights) {
    if (t == token) return true;
  }
  return false;
}

double CategoricalMix::weight_of(std::string_view token) const {
  for (const auto& [t, w] : weights) {
    if (t == token) return w;
  }
  return 0.0;
}

void StationScenario::validate() const {
  if (!StationId::valid_token(name) || name.find('[') != std::string::npos ||
      name.find(']') != std::string::npos) {
    throw Error(Errc::BAD_CONFIG, "scenario name is not a plain token", name);
  }
  if (!StationId::valid_token(station.id)) {
    throw Error(Errc::BAD_STATION_TOKEN, "malformed scenario station",
                station.id);
  }
  int bins = config.bins();
  require_vector(workday_entry, bins, "workday_entry");
  require_vector(workday_exit, bins, "workday_exit");
  require_vector(weekend_entry, bins, "weekend_entry");
  require_vector(weekend_exit, bins, "weekend_exit");

  metadata_mix.fare_class.validate("fare_class");
  for (const auto& [token, weight] : metadata_mix.fare_class.weights) {
    if (!fare_class_from_token(token)) {
      throw Error(Errc::BAD_FARE_CLASS, "unknown fare class in mix", token);
    }
  }
  if (metadata_mix.fare_class.weight_of("DISCOUNT") > 0) {
    metadata_mix.benefit_type.validate("benefit_type");
  } else if (!metadata_mix.benefit_type.weights.empty()) {
    metadata_mix.benefit_type.validate("benefit_type");
  }
  metadata_mix.ticket_type.validate("ticket_type");
  metadata_mix.media.validate("media");
  for (const auto& [token, weight] : metadata_mix.media.weights) {
    if (!media_from_token(token)) {
      throw Error(Errc::BAD_MEDIA, "unknown media in mix", token);
    }
  }
  counterpart_stations.validate("counterparts");
  for (const auto& [token, weight] : counterpart_stations.weights) {
    if (token == station.id) {
      throw Error(Errc::BAD_CONFIG,
                  "counterpart must differ from the scenario station", token);
    }
  }
}

std::uint64_t EmissionCell::total() const {
  return std::accumulate(bin_counts.begin(), bin_counts.end(),
                         std::uint64_t{0});
}

const EmissionCell* EmissionLog::find(Date date, Direction direction) const {
  for (const auto& cell : cells) {
    if (cell.date == date && cell.direction == direction) return &cell;
  }
  return nullptr;
}

double Rng::uniform01() {
  return double(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  return engine_() % n;
}

std::uint64_t Rng::poisson(double lambda) {
  if (!(lambda > 0)) return 0;
  // Count unit-exponential arrivals before time lambda; exact for any rate
  // and identical on every standard-conforming mt19937_64.
  std::uint64_t k = 0;
  double t = 0;
  while (true) {
    double u = 1.0 - uniform01();  // (0, 1]
    t += -std::log(u);
    if (t >= lambda) return k;
    ++k;
  }
}

std::size_t Rng::categorical(std::span<const double> cumulative) {
  double x = uniform01() * cumulative.back();
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (x < cumulative[i]) return i;
  }
  return cumulative.size() - 1;
}

std::uint64_t month_seed(std::uint64_t scenario_seed, YearMonth ym) {
  std::uint64_t key = std::uint64_t(std::int64_t(int(ym.year()))) * 100 +
                      unsigned(ym.month());
  std::uint64_t z = scenario_seed ^ (key * 0x9E3779B97F4A7C15ULL);
  // splitmix64 finalizer
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

EmissionLog generate_month_stream(const StationScenario& scenario,
                                  YearMonth ym, std::ostream& out,
                                  const CalendarPolicy& policy) {
  scenario.validate();
  Rng rng(month_seed(scenario.seed, ym));
  int bins = scenario.config.bins();
  int width = scenario.config.bin_width_minutes;

  Sampler fare(scenario.metadata_mix.fare_class);
  Sampler benefit(scenario.metadata_mix.benefit_type);
  Sampler ticket(scenario.metadata_mix.ticket_type);
  Sampler media(scenario.metadata_mix.media);
  Sampler counterpart(scenario.counterpart_stations);

  EmissionLog log;
  out << kIngestHeader << '\n';
  unsigned days = days_in_month(ym);
  std::vector<ValidationRecord> day_records;
  for (unsigned day = 1; day <= days; ++day) {
    Date date = date_at(ym, day);
    bool workday = classify_day(date, policy).is_workday();
    day_records.clear();
    for (Direction dir : {Direction::ENTRY, Direction::EXIT}) {
      const std::vector<double>& means =
          workday ? (dir == Direction::ENTRY ? scenario.workday_entry
                                             : scenario.workday_exit)
                  : (dir == Direction::ENTRY ? scenario.weekend_entry
                                             : scenario.weekend_exit);
      EmissionCell cell;
      cell.date = date;
      cell.direction = dir;
      cell.bin_counts.assign(std::size_t(bins), 0);
      for (int b = 0; b < bins; ++b) {
        std::uint64_t k = rng.poisson(means[std::size_t(b)]);
        cell.bin_counts[std::size_t(b)] = k;
        for (std::uint64_t r = 0; r < k; ++r) {
          ValidationRecord rec;
          std::uint64_t offset = rng.below(std::uint64_t(width) * 60);
          int sod = b * width * 60 + int(offset);
          rec.timestamp.date = date;
          rec.timestamp.hour = sod / 3600;
          rec.timestamp.minute = (sod / 60) % 60;
          rec.timestamp.second = sod % 60;
          rec.timestamp.has_seconds = true;
          rec.direction = dir;
          const std::string& fare_token = fare.sample(rng);
          rec.fare_class = *fare_class_from_token(fare_token);
          ++log.fare_hist[fare_token];
          if (rec.fare_class == FareClass::DISCOUNT) {
            rec.benefit_type = benefit.sample(rng);
            ++log.benefit_hist[rec.benefit_type];
          }
          rec.ticket_type = ticket.sample(rng);
          ++log.ticket_hist[rec.ticket_type];
          const std::string& media_token = media.sample(rng);
          rec.media = *media_from_token(media_token);
          ++log.media_hist[media_token];
          const std::string& other = counterpart.sample(rng);
          ++log.counterpart_hist[other];
          if (dir == Direction::ENTRY) {
            rec.origin_station = scenario.station;
            rec.dest_station.id = other;
          } else {
            rec.origin_station.id = other;
            rec.dest_station = scenario.station;
          }
          day_records.push_back(std::move(rec));
        }
      }
      log.total_rows += cell.total();
      log.cells.push_back(std::move(cell));
    }
    std::stable_sort(day_records.begin(), day_records.end(),
                     [](const ValidationRecord& a, const ValidationRecord& b) {
                       return a.timestamp.second_of_day() <
                              b.timestamp.second_of_day();
                     });
    for (const auto& rec : day_records) {
      out << serialize_record(rec) << '\n';
    }
  }
  return log;
}

GeneratedMonth generate_month(const StationScenario& scenario, YearMonth ym,
                              const CalendarPolicy& policy) {
  std::ostringstream out;
  EmissionLog log = generate_month_stream(scenario, ym, out, policy);
  return GeneratedMonth{out.str(), std::move(log)};
}

GeneratedFile generate_month_file(const StationScenario& scenario,
                                  YearMonth ym, const std::string& dir,
                                  const CalendarPolicy& policy) {
  std::filesystem::path path =
      std::filesystem::path(dir) / StationFile::file_name(scenario.station, ym);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IO_ERROR, "cannot write " + path.string());
  }
  EmissionLog log = generate_month_stream(scenario, ym, out, policy);
  out.flush();
  if (!out) {
    throw Error(Errc::IO_ERROR, "write failure in " + path.string());
  }
  return GeneratedFile{path.string(), std::move(log)};
}

void write_emission_csv(std::ostream& out, const EmissionLog& log) {
  out << "date,direction,count\n";
  for (const auto& cell : log.cells) {
    out << format_date(cell.date) << ',' << to_token(cell.direction) << ','
        << cell.total() << '\n';
  }
}

namespace {

CategoricalMix parse_mix(std::string_view value, std::string_view context) {
  CategoricalMix mix;
  for (const std::string& item : parse_token_list(value)) {
    std::size_t colon = item.rfind(':');
    if (colon == std::string::npos) {
      throw Error(Errc::BAD_CONFIG,
                  std::string(context) + " entries must be TOKEN:WEIGHT",
                  item);
    }
    std::string token = item.substr(0, colon);
    double weight = parse_config_double(item.substr(colon + 1), context);
    mix.weights.emplace_back(std::move(token), weight);
  }
  return mix;
}

std::string format_mix(const CategoricalMix& mix) {
  std::string out;
  for (std::size_t i = 0; i < mix.weights.size(); ++i) {
    if (i) out += ',';
    out += mix.weights[i].first;
    out += ':';
    out += format_double_exact(mix.weights[i].second);
  }
  return out;
}

std::string format_vector(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double_exact(v[i]);
  }
  return out;
}

StationScenario scenario_from_section(const ConfigSection& section,
                                      std::string_view origin) {
  StationScenario s;
  s.name = section.name;
  for (const auto& [key, value] : section.entries) {
    if (key == "station") {
      s.station.id = value;
    } else if (key == "bin_width") {
      s.config.bin_width_minutes = int(parse_config_int(value, key));
    } else if (key == "seed") {
      long long seed = parse_config_int(value, key);
      if (seed < 0) {
        throw Error(Errc::BAD_CONFIG, "seed must be non-negative", value);
      }
      s.seed = std::uint64_t(seed);
    } else if (key == "workday_entry") {
      s.workday_entry = parse_double_list(value, key);
    } else if (key == "workday_exit") {
      s.workday_exit = parse_double_list(value, key);
    } else if (key == "weekend_entry") {
      s.weekend_entry = parse_double_list(value, key);
    } else if (key == "weekend_exit") {
      s.weekend_exit = parse_double_list(value, key);
    } else if (key == "fare_class") {
      s.metadata_mix.fare_class = parse_mix(value, key);
    } else if (key == "benefit_type") {
      s.metadata_mix.benefit_type = parse_mix(value, key);
    } else if (key == "ticket_type") {
      s.metadata_mix.ticket_type = parse_mix(value, key);
    } else if (key == "media") {
      s.metadata_mix.media = parse_mix(value, key);
    } else if (key == "counterparts") {
      s.counterpart_stations = parse_mix(value, key);
    } else {
      throw Error(Errc::BAD_CONFIG,
                  std::string(origin) + ": unknown key in [" + section.name +
                      "]",
                  key);
    }
  }
  for (std::string_view required :
       {"station", "bin_width", "seed", "workday_entry", "workday_exit",
        "weekend_entry", "weekend_exit", "fare_class", "ticket_type", "media",
        "counterparts"}) {
    if (!section.has(required)) {
      throw Error(Errc::BAD_CONFIG,
                  std::string(origin) + ": [" + section.name +
                      "] is missing key " + std::string(required));
    }
  }
  s.validate();
  return s;
}

}  // namespace

std::vector<StationScenario> parse_scenarios(std::string_view text,
                                             std::string_view origin) {
  ConfigFile file = parse_config_text(text, origin);
  if (!file.preamble().entries.empty()) {
    throw Error(Errc::BAD_CONFIG,
                std::string(origin) +
                    ": scenario keys must live inside a [name] section",
                file.preamble().entries.front().first);
  }
  std::vector<StationScenario> out;
  for (std::size_t i = 1; i < file.sections.size(); ++i) {
    out.push_back(scenario_from_section(file.sections[i], origin));
  }
  if (out.empty()) {
    throw Error(Errc::BAD_CONFIG,
                std::string(origin) + ": no scenario sections found");
  }
  return out;
}

std::vector<StationScenario> load_scenarios(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IO_ERROR, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenarios(buf.str(), path);
}

void write_scenarios(std::ostream& out,
                     std::span<const StationScenario> scenarios) {
  bool first = true;
  for (const auto& s : scenarios) {
    s.validate();
    if (!first) out << '\n';
    first = false;
    out << '[' << s.name << "]\n";
    out << "station = " << s.station.id << '\n';
    out << "bin_width = " << s.config.bin_width_minutes << '\n';
    out << "seed = " << s.seed << '\n';
    out << "workday_entry = " << format_vector(s.workday_entry) << '\n';
    out << "workday_exit = " << format_vector(s.workday_exit) << '\n';
    out << "weekend_entry = " << format_vector(s.weekend_entry) << '\n';
    out << "weekend_exit = " << format_vector(s.weekend_exit) << '\n';
    out << "fare_class = " << format_mix(s.metadata_mix.fare_class) << '\n';
    if (!s.metadata_mix.benefit_type.weights.empty()) {
      out << "benefit_type = " << format_mix(s.metadata_mix.benefit_type)
          << '\n';
    }
    out << "ticket_type = " << format_mix(s.metadata_mix.ticket_type) << '\n';
    out << "media = " << format_mix(s.metadata_mix.media) << '\n';
    out << "counterparts = " << format_mix(s.counterpart_stations) << '\n';
  }
}

namespace {

MetadataMix standard_mix() {
  MetadataMix mix;
  mix.fare_class.weights = {{"FULL", 0.8}, {"DISCOUNT", 0.2}};
  mix.benefit_type.weights = {{"FEDERAL", 0.6}, {"RZD", 0.3}, {"REGIONAL", 0.1}};
  mix.ticket_type.weights = {
      {"ONE_WAY", 0.55}, {"ROUND_TRIP", 0.2}, {"SUBSCRIPTION", 0.25}};
  mix.media.weights = {{"SMARTCARD", 0.85}, {"PAPER", 0.15}};
  return mix;
}

std::vector<double> scaled(const std::vector<double>& v, double c) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * c;
  return out;
}

}  // namespace

std::vector<StationScenario> canonical_scenarios() {
  std::vector<StationScenario> out;

  StationScenario commuter;
  commuter.name = "OUTSIDE_COMMUTER";
  commuter.station.id = "OUTSIDE_COMMUTER";
  commuter.config = BinConfig{60};
  commuter.seed = 101;
  commuter.workday_entry = {2,    1,    1,   2,   30,  250, 1500, 1350,
                            300,  150,  120, 115, 95,  90,  110,  140,
                            180,  240,  210, 150, 90,  60,  30,   10};
  commuter.workday_exit = {1,   1,   1,   1,    5,    40,  120, 180,
                           150, 100, 90,  95,   85,   80,  100, 160,
                           300, 700, 1500, 1300, 500, 200, 80,  20};
  commuter.weekend_entry = {2,   1,   1,   1,   10,  60,  200, 350,
                            500, 560, 520, 480, 460, 440, 420, 400,
                            380, 330, 260, 180, 100, 50,  20,  5};
  commuter.weekend_exit = {1,   1,   1,   1,   5,   30,  150, 400,
                           520, 420, 300, 260, 250, 260, 290, 340,
                           420, 560, 620, 540, 380, 220, 100, 30};
  commuter.metadata_mix = standard_mix();
  commuter.counterpart_stations.weights = {{"CITY_TERMINAL", 0.7},
                                           {"RING_7", 0.3}};
  out.push_back(commuter);

  StationScenario hub;
  hub.name = "INSIDE_HUB";
  hub.station.id = "INSIDE_HUB";
  hub.config = BinConfig{60};
  hub.seed = 202;
  hub.workday_entry = {3,   2,   1,    1,    5,   60,  400, 1400,
                       1100, 400, 250, 180,  90,  60,  250, 500,
                       900, 1350, 1200, 600, 300, 150, 70,  20};
  hub.workday_exit = {2,   1,    1,    1,   8,   90,  700, 1600,
                      1300, 500, 280,  200, 100, 80,  260, 480,
                      800, 1250, 1100, 550, 280, 140, 60,  15};
  hub.weekend_entry = {2,   1,   1,   1,   4,   50,  350, 1300,
                       1000, 500, 420, 400, 390, 380, 370, 350,
                       300, 240, 180, 120, 70,  40,  20,  8};
  hub.weekend_exit = {2,   1,   1,   1,   5,   40,  300, 1200,
                      950, 480, 400, 380, 370, 360, 350, 330,
                      280, 220, 160, 110, 60,  35,  15,  6};
  hub.metadata_mix = standard_mix();
  hub.counterpart_stations.weights = {{"SUBURB_3", 0.6}, {"SUBURB_9", 0.4}};
  out.push_back(hub);

  StationScenario outside_weekend;
  outside_weekend.name = "OUTSIDE_WEEKEND";
  outside_weekend.station.id = "OUTSIDE_WEEKEND";
  outside_weekend.config = BinConfig{60};
  outside_weekend.seed = 303;
  outside_weekend.workday_entry = scaled(commuter.workday_entry, 0.8);
  outside_weekend.workday_exit = scaled(commuter.workday_exit, 0.8);
  outside_weekend.weekend_entry = {1,   1,   1,   1,   8,   50,  150, 280,
                                   420, 480, 470, 460, 450, 445, 440, 430,
                                   410, 380, 330, 260, 170, 90,  30,  8};
  outside_weekend.weekend_exit = {1,   1,   1,   1,   4,   25,  120, 330,
                                  430, 350, 280, 250, 245, 250, 280, 330,
                                  400, 490, 530, 470, 340, 210, 90,  25};
  outside_weekend.metadata_mix = standard_mix();
  outside_weekend.counterpart_stations.weights = {{"CITY_TERMINAL", 0.7},
                                                  {"RING_7", 0.3}};
  out.push_back(outside_weekend);

  StationScenario inside_weekend;
  inside_weekend.name = "INSIDE_WEEKEND";
  inside_weekend.station.id = "INSIDE_WEEKEND";
  inside_weekend.config = BinConfig{60};
  inside_weekend.seed = 404;
  inside_weekend.workday_entry = scaled(hub.workday_entry, 0.9);
  inside_weekend.workday_exit = scaled(hub.workday_exit, 0.9);
  inside_weekend.weekend_entry = scaled(hub.weekend_entry, 0.9);
  inside_weekend.weekend_exit = scaled(hub.weekend_exit, 0.9);
  inside_weekend.metadata_mix = standard_mix();
  inside_weekend.counterpart_stations.weights = {{"SUBURB_3", 0.6},
                                                 {"SUBURB_9", 0.4}};
  out.push_back(inside_weekend);

  return out;
}

}  // namespace railtap

#include "railtap/binning.hpp"

#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "railtap/error.hpp"

namespace railtap {

int BinConfig::bins() const {
  if (bin_width_minutes <= 0 || 1440 % bin_width_minutes != 0) {
    throw Error(Errc::BAD_CONFIG,
                "bin width must divide 1440 minutes, got " +
                    std::to_string(bin_width_minutes));
  }
  return 1440 / bin_width_minutes;
}

int bin_index(const Timestamp& ts, const BinConfig& config) {
  config.bins();
  return ts.minute_of_day() / config.bin_width_minutes;
}

std::uint64_t DayProfile::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

ProfileAccumulator::ProfileAccumulator(BinConfig config) : config_(config) {
  config_.bins();
}

void ProfileAccumulator::add(const ValidationRecord& record) {
  Key key{tap_station(record).id, std::chrono::sys_days{record.timestamp.date},
          record.direction};
  std::vector<std::uint64_t>* counts = last_counts_;
  if (!counts || key != last_key_) {
    auto [it, inserted] = cells_.try_emplace(key);
    if (inserted) it->second.assign(std::size_t(config_.bins()), 0);
    counts = &it->second;
    last_counts_ = counts;
    last_key_ = std::move(key);
  }
  (*counts)[std::size_t(record.timestamp.minute_of_day() /
                        config_.bin_width_minutes)] += 1;
}

std::vector<DayProfile> ProfileAccumulator::profiles() const {
  std::vector<DayProfile> out;
  out.reserve(cells_.size());
  for (const auto& [key, counts] : cells_) {
    DayProfile p;
    p.station.id = std::get<0>(key);
    p.date = Date{std::get<1>(key)};
    p.direction = std::get<2>(key);
    p.bin_width_minutes = config_.bin_width_minutes;
    p.counts = counts;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<DayProfile> bin_records(std::span<const ValidationRecord> records,
                                    BinConfig config) {
  ProfileAccumulator acc(config);
  for (const auto& r : records) acc.add(r);
  return acc.profiles();
}

std::vector<double> normalize_profile(const DayProfile& profile) {
  std::uint64_t total = profile.total();
  if (total == 0) {
    throw Error(Errc::ZERO_TOTAL, "cannot normalize an all-zero profile");
  }
  std::vector<double> out(profile.counts.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = double(profile.counts[i]) / double(total);
  }
  return out;
}

std::vector<double> normalized_shares(std::span<const double> values) {
  double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (total == 0.0) {
    throw Error(Errc::ZERO_TOTAL, "cannot normalize an all-zero vector");
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values[i] / total;
  return out;
}

DayProfile rebin(const DayProfile& profile, int new_width_minutes) {
  BinConfig target{new_width_minutes};
  int new_bins = target.bins();
  if (new_width_minutes % profile.bin_width_minutes != 0) {
    throw Error(Errc::INCOMPATIBLE_CONFIG,
                "new width " + std::to_string(new_width_minutes) +
                    " is not a multiple of " +
                    std::to_string(profile.bin_width_minutes));
  }
  int group = new_width_minutes / profile.bin_width_minutes;
  DayProfile out;
  out.station = profile.station;
  out.date = profile.date;
  out.direction = profile.direction;
  out.bin_width_minutes = new_width_minutes;
  out.counts.assign(std::size_t(new_bins), 0);
  for (std::size_t i = 0; i < profile.counts.size(); ++i) {
    out.counts[i / std::size_t(group)] += profile.counts[i];
  }
  return out;
}

void write_profiles_csv(std::ostream& out, std::span<const DayProfile> profiles,
                        BinConfig config) {
  int bins = config.bins();
  out << "station,date,direction,bin_width";
  for (int i = 0; i < bins; ++i) out << ",c" << i;
  out << '\n';
  for (const auto& p : profiles) {
    if (p.bin_width_minutes != config.bin_width_minutes ||
        p.bins() != bins) {
      throw Error(Errc::INCOMPATIBLE_CONFIG,
                  "profile bin width " + std::to_string(p.bin_width_minutes) +
                      " does not match file width " +
                      std::to_string(config.bin_width_minutes));
    }
    out << p.station.id << ',' << format_date(p.date) << ','
        << to_token(p.direction) << ',' << p.bin_width_minutes;
    for (std::uint64_t c : p.counts) out << ',' << c;
    out << '\n';
  }
}

void write_profiles_csv(std::ostream& out,
                        std::span<const DayProfile> profiles) {
  if (profiles.empty()) {
    throw Error(Errc::INCOMPATIBLE_CONFIG,
                "cannot infer bin width from an empty profile set");
  }
  write_profiles_csv(out, profiles,
                     BinConfig{profiles.front().bin_width_minutes});
}

std::vector<DayProfile> read_profiles_csv(std::istream& in,
                                          std::string_view origin) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::BAD_HEADER, std::string(origin) + ": missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  constexpr std::string_view prefix = "station,date,direction,bin_width";
  if (line.substr(0, prefix.size()) != prefix) {
    throw Error(Errc::BAD_HEADER, std::string(origin) + ": unexpected header",
                line);
  }
  int bins = 0;
  {
    std::string_view rest = std::string_view(line).substr(prefix.size());
    while (!rest.empty()) {
      if (rest.substr(0, 2) != ",c") {
        throw Error(Errc::BAD_HEADER,
                    std::string(origin) + ": unexpected header", line);
      }
      rest.remove_prefix(2);
      std::size_t i = 0;
      while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') ++i;
      if (i == 0 ||
          std::stol(std::string(rest.substr(0, i))) != long(bins)) {
        throw Error(Errc::BAD_HEADER,
                    std::string(origin) + ": unexpected header", line);
      }
      rest.remove_prefix(i);
      ++bins;
    }
  }
  if (bins == 0) {
    throw Error(Errc::BAD_HEADER, std::string(origin) + ": header has no bins",
                line);
  }

  std::vector<DayProfile> out;
  std::uint64_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string where = std::string(origin) + " row " + std::to_string(row);
    std::vector<std::string_view> fields;
    std::string_view view = line;
    std::size_t start = 0;
    while (start <= view.size()) {
      std::size_t comma = view.find(',', start);
      fields.push_back(comma == std::string_view::npos
                           ? view.substr(start)
                           : view.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != std::size_t(4 + bins)) {
      throw Error(Errc::BAD_FIELD_COUNT,
                  where + ": expected " + std::to_string(4 + bins) +
                      " fields, got " + std::to_string(fields.size()));
    }
    DayProfile p;
    if (!StationId::valid_token(fields[0])) {
      throw Error(Errc::BAD_STATION_TOKEN, where + ": malformed station",
                  std::string(fields[0]));
    }
    p.station.id = std::string(fields[0]);
    auto date = parse_date(fields[1]);
    if (!date) {
      throw Error(Errc::BAD_TIMESTAMP, where + ": unparseable date",
                  std::string(fields[1]));
    }
    p.date = *date;
    auto dir = direction_from_token(fields[2]);
    if (!dir) {
      throw Error(Errc::BAD_DIRECTION, where + ": unknown direction",
                  std::string(fields[2]));
    }
    p.direction = *dir;
    long long width = 0;
    try {
      width = std::stoll(std::string(fields[3]));
    } catch (...) {
      throw Error(Errc::BAD_CONFIG, where + ": unparseable bin width",
                  std::string(fields[3]));
    }
    if (width <= 0 || 1440 % width != 0 || 1440 / width != bins) {
      throw Error(Errc::INCOMPATIBLE_CONFIG,
                  where + ": bin width " + std::to_string(width) +
                      " does not match header bin count " +
                      std::to_string(bins));
    }
    p.bin_width_minutes = int(width);
    p.counts.reserve(std::size_t(bins));
    for (int i = 0; i < bins; ++i) {
      std::string_view f = fields[std::size_t(4 + i)];
      std::uint64_t c = 0;
      if (f.empty()) {
        throw Error(Errc::BAD_FIELD_COUNT, where + ": empty count field");
      }
      for (char ch : f) {
        if (ch < '0' || ch > '9') {
          throw Error(Errc::BAD_CONFIG, where + ": unparseable count",
                      std::string(f));
        }
        c = c * 10 + std::uint64_t(ch - '0');
      }
      p.counts.push_back(c);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace railtap

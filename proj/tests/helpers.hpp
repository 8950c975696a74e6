#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "railtap/binning.hpp"
#include "railtap/dates.hpp"
#include "railtap/error.hpp"
#include "railtap/record.hpp"

namespace railtap::test {

/// Fresh directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    auto pid = std::to_string(
        std::chrono::steady_clock::now().time_since_epoch().count());
    path_ = std::filesystem::temp_directory_path() /
            ("railtap_" + tag + "_" + pid + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline std::string write_file(const std::string& path,
                              const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Date date(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m},
              std::chrono::day{d}};
}

inline YearMonth month(int y, unsigned m) {
  return YearMonth{std::chrono::year{y}, std::chrono::month{m}};
}

inline DayProfile make_profile(const std::string& station, Date day,
                               Direction dir,
                               std::vector<std::uint64_t> counts,
                               int bin_width = 60) {
  DayProfile p;
  p.station.id = station;
  p.date = day;
  p.direction = dir;
  p.bin_width_minutes = bin_width;
  p.counts = std::move(counts);
  return p;
}

/// Counts vector of the right length for the width, zero except given bins.
inline std::vector<std::uint64_t> sparse_counts(
    int bin_width, std::initializer_list<std::pair<int, std::uint64_t>> bins) {
  std::vector<std::uint64_t> counts(std::size_t(1440 / bin_width), 0);
  for (auto [index, value] : bins) counts[std::size_t(index)] = value;
  return counts;
}

}  // namespace railtap::test

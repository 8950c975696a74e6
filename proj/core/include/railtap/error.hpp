#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace railtap {

/// Error categories raised by the library. Each maps 1:1 to a violated
/// contract; parsers additionally use them as per-row rejection reasons.
enum class Errc {
  // I/O and file structure
  IO_ERROR,
  BAD_HEADER,
  BAD_FILE_NAME,
  // per-row record validation
  BAD_FIELD_COUNT,
  BAD_TIMESTAMP,
  OUT_OF_MONTH,
  STATION_MISMATCH,
  BAD_DIRECTION,
  BAD_FARE_CLASS,
  BAD_MEDIA,
  BENEFIT_FARE_CONFLICT,
  BAD_STATION_TOKEN,
  UNKNOWN_TICKET_TYPE,
  UNKNOWN_BENEFIT_TYPE,
  // vector math
  DIMENSION_MISMATCH,
  ZERO_VECTOR,
  DEGENERATE_VARIANCE,
  ZERO_TOTAL,
  // aggregation / templates
  INCOMPATIBLE_CONFIG,
  INSUFFICIENT_SUPPORT,
  DAY_CLASS_MISMATCH,
  // change detection
  INCOMPATIBLE_TEMPLATES,
  // classification
  INSUFFICIENT_INPUT,
  // configuration files and option validation
  BAD_CONFIG,
};

std::string_view errc_name(Errc code);

/// Single exception type for all domain errors. `code()` identifies the
/// violated contract, `token()` carries the offending input token when one
/// exists (empty otherwise).
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Error(Errc code, std::string message, std::string token)
      : std::runtime_error(std::move(message)),
        code_(code),
        token_(std::move(token)) {}

  Errc code() const noexcept { return code_; }
  const std::string& token() const noexcept { return token_; }

 private:
  Errc code_;
  std::string token_;
};

}  // namespace railtap

#include "railtap/error.hpp"

namespace railtap {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::IO_ERROR: return "io_error";
    case Errc::BAD_HEADER: return "bad_header";
    case Errc::BAD_FILE_NAME: return "bad_file_name";
    case Errc::BAD_FIELD_COUNT: return "bad_field_count";
    case Errc::BAD_TIMESTAMP: return "bad_timestamp";
    case Errc::OUT_OF_MONTH: return "out_of_month";
    case Errc::STATION_MISMATCH: return "station_mismatch";
    case Errc::BAD_DIRECTION: return "bad_direction";
    case Errc::BAD_FARE_CLASS: return "bad_fare_class";
    case Errc::BAD_MEDIA: return "bad_media";
    case Errc::BENEFIT_FARE_CONFLICT: return "benefit_fare_conflict";
    case Errc::BAD_STATION_TOKEN: return "bad_station_token";
    case Errc::UNKNOWN_TICKET_TYPE: return "unknown_ticket_type";
    case Errc::UNKNOWN_BENEFIT_TYPE: return "unknown_benefit_type";
    case Errc::DIMENSION_MISMATCH: return "dimension_mismatch";
    case Errc::ZERO_VECTOR: return "zero_vector";
    case Errc::DEGENERATE_VARIANCE: return "degenerate_variance";
    case Errc::ZERO_TOTAL: return "zero_total";
    case Errc::INCOMPATIBLE_CONFIG: return "incompatible_config";
    case Errc::INSUFFICIENT_SUPPORT: return "insufficient_support";
    case Errc::DAY_CLASS_MISMATCH: return "day_class_mismatch";
    case Errc::INCOMPATIBLE_TEMPLATES: return "incompatible_templates";
    case Errc::INSUFFICIENT_INPUT: return "insufficient_input";
    case Errc::BAD_CONFIG: return "bad_config";
  }
  return "unknown";
}

}  // namespace railtap

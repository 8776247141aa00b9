#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace moodcam {

enum class errc {
  missing_channel,
  out_of_range,
  non_monotonic_time,
  invalid_layout,
  degenerate_eye,
  degenerate_vector,
  dimension_mismatch,
  insufficient_data,
  too_few_frames,
  zero_dt,
  empty_session,
  schema_mismatch,
  empty_day,
  empty_node,
  empty_training,
  single_class,
  too_few_minority,
  length_mismatch,
  too_few_groups,
  too_few_participants,
  single_class_training,
  empty_schema,
  invalid_config,
  config_error,
  data_error,
  io_error,
};

constexpr std::string_view to_string(errc code) {
  switch (code) {
    case errc::missing_channel: return "MissingChannel";
    case errc::out_of_range: return "OutOfRange";
    case errc::non_monotonic_time: return "NonMonotonicTime";
    case errc::invalid_layout: return "InvalidLayout";
    case errc::degenerate_eye: return "DegenerateEye";
    case errc::degenerate_vector: return "DegenerateVector";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::insufficient_data: return "InsufficientData";
    case errc::too_few_frames: return "TooFewFrames";
    case errc::zero_dt: return "ZeroDt";
    case errc::empty_session: return "EmptySession";
    case errc::schema_mismatch: return "SchemaMismatch";
    case errc::empty_day: return "EmptyDay";
    case errc::empty_node: return "EmptyNode";
    case errc::empty_training: return "EmptyTraining";
    case errc::single_class: return "SingleClass";
    case errc::too_few_minority: return "TooFewMinority";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::too_few_groups: return "TooFewGroups";
    case errc::too_few_participants: return "TooFewParticipants";
    case errc::single_class_training: return "SingleClassTraining";
    case errc::empty_schema: return "EmptySchema";
    case errc::invalid_config: return "InvalidConfig";
    case errc::config_error: return "ConfigError";
    case errc::data_error: return "DataError";
    case errc::io_error: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class error : public std::runtime_error {
public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

}  // namespace moodcam

#pragma once

#include <filesystem>
#include <iosfwd>

#include "tinsim/oracle.hpp"

namespace tinsim {

/// Binary layout: 8-byte magic "TINSIMR1", little-endian uint64 header length,
/// UTF-8 JSON header (schema version, record settings, channel list), then each
/// channel as consecutive little-endian float64 values in header order.
void write_record_binary(std::ostream& out, const TimeSeriesRecord& record);
void write_record_binary(const std::filesystem::path& path, const TimeSeriesRecord& record);

/// Throws std::runtime_error on a malformed or truncated file.
TimeSeriesRecord read_record_binary(std::istream& in);
TimeSeriesRecord read_record_binary(const std::filesystem::path& path);

/// One row per sample: time_s, x<i>_m..., detuning, intensity, phase_m.
void write_record_csv(std::ostream& out, const TimeSeriesRecord& record);
void write_record_csv(const std::filesystem::path& path, const TimeSeriesRecord& record);

}  // namespace tinsim

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mobimpute/evaluation.hpp"
#include "mobimpute/features.hpp"
#include "mobimpute/trace.hpp"

namespace mobimpute::io {

/// Parse a GPS CSV: header `timestamp,latitude,longitude[,accuracy]`;
/// timestamps ISO-8601 or epoch seconds (auto-detected). Rows with
/// out-of-bounds coordinates are skipped.
std::vector<GpsRecord> read_gps_csv(const std::filesystem::path& path);
std::vector<GpsRecord> parse_gps_csv(const std::string& content);

void write_gps_csv(const std::filesystem::path& path, std::span<const GpsRecord> records);

/// Event CSV: kind,x,y,t,dx,dy,dt,observed (fixed decimal formatting so
/// identical runs produce identical bytes).
void write_event_csv(const std::filesystem::path& path, std::span<const Event> events);
std::vector<Event> read_event_csv(const std::filesystem::path& path);

void write_feature_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, DailyFeatureVector>>& rows,
                       bool with_intervals);

void write_error_table_csv(const std::filesystem::path& path, const ErrorTable& table);
void write_error_table_json(const std::filesystem::path& path, const ErrorTable& table);

/// Geolife directory tree: Data/<user>/Trajectory/*.plt. Returns one record
/// sequence per .plt file, sorted by path.
std::vector<std::pair<std::string, std::vector<GpsRecord>>> read_plt_tree(
    const std::filesystem::path& root);

std::string format_double(double v);

}  // namespace mobimpute::io

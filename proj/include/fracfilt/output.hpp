#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fracfilt/evolve.hpp"

namespace fracfilt {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Rows (t, x, value), time-major.
Table trajectory_table(const Trajectory& traj);

/// CSV whose first line is "# fracfilt config: <json>", then the header.
std::string render_csv(const Table& table, const nlohmann::json& config);
void write_csv(const std::string& path, const Table& table, const nlohmann::json& config);

/// Pretty JSON with a trailing newline.
void write_json(const std::string& path, const nlohmann::json& doc);

/// Creates the directory (and parents) if needed; throws on failure.
void ensure_directory(const std::string& dir);

/// Version string of the library.
const char* version();

}  // namespace fracfilt

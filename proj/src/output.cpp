#include "fracfilt/output.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracfilt {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Table trajectory_table(const Trajectory& traj) {
  Table t;
  t.columns = {"t", "x", "value"};
  for (std::size_t i = 0; i < traj.fields.size(); ++i) {
    const auto nodes = traj.fields[i].basis().nodes();
    const auto values = traj.fields[i].values();
    for (std::size_t j = 0; j < values.size(); ++j) t.rows.push_back({traj.times[i], nodes[j], values[j]});
  }
  return t;
}

std::string render_csv(const Table& table, const nlohmann::json& config) {
  std::ostringstream os;
  os << "# fracfilt config: " << config.dump() << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
    os << '\n';
  }
  return os.str();
}

void write_csv(const std::string& path, const Table& table, const nlohmann::json& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << render_csv(table, config);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir + "': " + ec.message());
}

const char* version() { return "0.1.0"; }

}  // namespace fracfilt

#include "levymc/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "levymc/error.hpp"

namespace levymc {

namespace {

std::string real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json json_real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::ordered_json to_json(const McResult& r) {
  return {{"gamma_or_n", json_real(r.gamma_or_n)},
          {"estimate", json_real(r.estimate)},
          {"stderr", json_real(r.std_error)},
          {"bias_bound", json_real(r.bias_bound)},
          {"paths", r.paths},
          {"mean_skeleton_points", json_real(r.mean_skeleton_points)},
          {"depth_breaches", r.depth_breaches},
          {"wall_seconds", json_real(r.wall_seconds)},
          {"seed", r.seed}};
}

}  // namespace

std::string csv_row(const McResult& r) {
  std::ostringstream os;
  os << real(r.gamma_or_n) << ',' << real(r.estimate) << ',' << real(r.std_error) << ','
     << real(r.bias_bound) << ',' << r.paths << ',' << real(r.mean_skeleton_points) << ','
     << r.depth_breaches << ',' << real(r.wall_seconds) << ',' << r.seed;
  return os.str();
}

std::string csv_slope_row(double slope) { return "slope," + real(slope) + ",,,,,,,"; }

std::string json_result(const McResult& r) { return to_json(r).dump(2); }

std::string json_sweep(const SweepResult& sweep) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const McResult& r : sweep.rows) rows.push_back(to_json(r));
  return nlohmann::ordered_json{{"rows", rows},
                        {"slope", json_real(sweep.slope)},
                        {"reference", json_real(sweep.reference)}}
      .dump(2);
}

std::string csv_document(const std::vector<std::string>& rows) {
  std::string out = std::string(kSchemaLine) + "\n" + kCsvHeader + "\n";
  for (const std::string& row : rows) out += row + "\n";
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw std::runtime_error("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

namespace {

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void require_schema(const std::string& path, const std::string& existing) {
  std::istringstream lines(existing);
  std::string schema, header;
  std::getline(lines, schema);
  std::getline(lines, header);
  if (schema != kSchemaLine || header != kCsvHeader) {
    throw DomainError("output file " + path + " is not a schema=1 result table");
  }
}

}  // namespace

void check_output_target(const std::string& path, bool csv) {
  namespace fs = std::filesystem;
  if (path.empty()) throw DomainError("output path is empty");
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw DomainError("output directory " + dir.string() + " does not exist");
  if (fs::is_directory(target, ec)) throw DomainError("output path " + path + " is a directory");
  if (csv) {
    const std::string existing = read_all(path);
    if (!existing.empty()) require_schema(path, existing);
  }
}

void append_csv(const std::string& path, const std::vector<std::string>& rows) {
  std::string existing = read_all(path);
  if (existing.empty()) {
    write_atomic(path, csv_document(rows));
    return;
  }
  require_schema(path, existing);
  if (existing.back() != '\n') existing += '\n';
  for (const std::string& row : rows) existing += row + "\n";
  write_atomic(path, existing);
}

}  // namespace levymc

#include "hermite/runner/report.hpp"

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hermite/error.hpp"
#include "hermite/runner/numbers.hpp"
#include "json.hpp"

namespace hermite::runner {

double ExperimentReport::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return v;
  throw ValidationError("report has no summary value '" + key + "'");
}

namespace {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < length; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

// Length-prefixed fields, so no separator can collide with content.
void field(std::string& out, const std::string& s) {
  out += std::to_string(s.size());
  out += ':';
  out += s;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

std::string compute_content_hash(const ExperimentReport& r) {
  std::string text;
  field(text, kToolName);
  field(text, r.experiment);
  for (const auto& [k, v] : r.semantic_config) {
    field(text, k);
    field(text, v);
  }
  field(text, "columns");
  for (const auto& c : r.columns) field(text, c);
  field(text, "rows");
  for (const auto& row : r.rows) {
    field(text, std::to_string(row.size()));
    for (double v : row) field(text, format_number(v));
  }
  field(text, "summary");
  for (const auto& [k, v] : r.summary) {
    field(text, k);
    field(text, format_number(v));
  }
  field(text, "series");
  for (const auto& s : r.series) {
    field(text, s.name);
    for (const auto& [x, y] : s.points) {
      field(text, format_number(x));
      field(text, format_number(y));
    }
  }
  return sha256_hex(text);
}

void seal(ExperimentReport& r) { r.content_hash = compute_content_hash(r); }

std::string to_csv(const ExperimentReport& r) {
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_cell(r.columns[i]);
  }
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ExperimentReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = r.version;
  j["experiment"] = r.experiment;
  j["content_hash"] = r.content_hash;
  j["config"] = ordered_json::object();
  for (const auto& [k, v] : r.config) j["config"][k] = v;
  j["hashed_config"] = ordered_json::object();
  for (const auto& [k, v] : r.semantic_config) j["hashed_config"][k] = v;
  j["columns"] = r.columns;
  j["rows"] = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json cells = ordered_json::array();
    for (double v : row) cells.push_back(format_number(v));
    j["rows"].push_back(cells);
  }
  j["summary"] = ordered_json::array();
  for (const auto& [k, v] : r.summary) j["summary"].push_back({k, format_number(v)});
  j["series"] = ordered_json::array();
  for (const auto& s : r.series) {
    ordered_json points = ordered_json::array();
    for (const auto& [x, y] : s.points) points.push_back({format_number(x), format_number(y)});
    j["series"].push_back({{"name", s.name}, {"points", points}});
  }
  return j.dump(2) + "\n";
}

ExperimentReport from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("report JSON: ") + e.what());
  }
  try {
    ExperimentReport r;
    r.experiment = j.at("experiment").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.content_hash = j.at("content_hash").get<std::string>();
    for (const auto& [k, v] : j.at("config").items()) r.config[k] = v.get<std::string>();
    for (const auto& [k, v] : j.at("hashed_config").items()) r.semantic_config[k] = v.get<std::string>();
    r.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows")) {
      std::vector<double> values;
      for (const auto& cell : row) values.push_back(parse_number(cell.get<std::string>(), "report row"));
      r.rows.push_back(std::move(values));
    }
    for (const auto& entry : j.at("summary"))
      r.summary.emplace_back(entry.at(0).get<std::string>(),
                             parse_number(entry.at(1).get<std::string>(), "report summary"));
    for (const auto& s : j.at("series")) {
      Series series;
      series.name = s.at("name").get<std::string>();
      for (const auto& p : s.at("points"))
        series.points.emplace_back(parse_number(p.at(0).get<std::string>(), "report series"),
                                   parse_number(p.at(1).get<std::string>(), "report series"));
      r.series.push_back(std::move(series));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("report JSON: ") + e.what());
  }
}

std::string to_plot_data(const Series& s) {
  std::string out = "# " + s.name + "\n";
  for (const auto& [x, y] : s.points) out += format_number(x) + " " + format_number(y) + "\n";
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::vector<std::string> write_report(const ExperimentReport& r, const std::string& dir, const std::string& format) {
  if (format != "csv" && format != "json") throw ValidationError("format must be csv or json");
  std::filesystem::path base(dir);
  std::error_code ec;
  std::filesystem::create_directories(base, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::string> written;
  const auto main = base / (r.experiment + "." + format);
  write_file(main, format == "csv" ? to_csv(r) : to_json(r));
  written.push_back(main.string());
  for (const auto& s : r.series) {
    const auto path = base / (r.experiment + "_" + s.name + ".dat");
    write_file(path, to_plot_data(s));
    written.push_back(path.string());
  }
  return written;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace hermite::runner

#include "scidebt/util.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "scidebt/error.hpp"

namespace scidebt {

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::uint64_t from_hex(std::string_view hex) {
  if (hex.empty() || hex.size() > 16) fail(ErrorCode::parse, "bad hex value '" + std::string(hex) + "'");
  std::uint64_t v = 0;
  for (char c : hex) {
    v <<= 4;
    if (c >= '0' && c <= '9') v |= static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f') v |= static_cast<std::uint64_t>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') v |= static_cast<std::uint64_t>(c - 'A' + 10);
    else fail(ErrorCode::parse, "bad hex value '" + std::string(hex) + "'");
  }
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::io, "write to '" + path.string() + "' failed");
}

void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, std::size_t)>& on_line) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "' for reading");
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    on_line(line, number);
  }
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::vector<json> rows;
  for_each_line(path, [&](std::string_view line, std::size_t number) {
    rows.push_back(parse_json(line, path.string() + ":" + std::to_string(number)));
  });
  return rows;
}

namespace {
void emit_jsonl(const std::filesystem::path& path, std::span<const json> rows,
                std::ios::openmode mode) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | mode);
  if (!out) fail(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  for (const auto& row : rows) out << row.dump() << '\n';
  if (!out) fail(ErrorCode::io, "write to '" + path.string() + "' failed");
}
}  // namespace

void write_jsonl(const std::filesystem::path& path, std::span<const json> rows) {
  emit_jsonl(path, rows, std::ios::trunc);
}

void append_jsonl(const std::filesystem::path& path, std::span<const json> rows) {
  emit_jsonl(path, rows, std::ios::app);
}

json parse_json(std::string_view text, std::string_view context) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse, std::string(context) + ": invalid JSON: " + e.what());
  }
}

const json& require_field(const json& obj, std::string_view field, std::string_view context) {
  if (!obj.is_object()) fail(ErrorCode::parse, std::string(context) + ": expected a JSON object");
  auto it = obj.find(field);
  if (it == obj.end()) {
    fail(ErrorCode::parse, std::string(context) + ": missing field '" + std::string(field) + "'");
  }
  return *it;
}

std::string require_string(const json& obj, std::string_view field, std::string_view context) {
  const json& v = require_field(obj, field, context);
  if (!v.is_string()) {
    fail(ErrorCode::parse,
         std::string(context) + ": field '" + std::string(field) + "' must be a string");
  }
  return v.get<std::string>();
}

std::int64_t require_int(const json& obj, std::string_view field, std::string_view context) {
  const json& v = require_field(obj, field, context);
  if (!v.is_number_integer()) {
    fail(ErrorCode::parse,
         std::string(context) + ": field '" + std::string(field) + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

std::string optional_string(const json& obj, std::string_view field, std::string_view context) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) {
    fail(ErrorCode::parse,
         std::string(context) + ": field '" + std::string(field) + "' must be a string");
  }
  return it->get<std::string>();
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string csv_cell(std::string_view raw) {
  if (raw.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(raw);
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace scidebt

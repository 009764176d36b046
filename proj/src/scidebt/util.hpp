#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace scidebt {

using json = nlohmann::json;

// FNV-1a over the exact bytes. Seedless, so hashes agree across machines.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t value);
std::uint64_t from_hex(std::string_view hex);

// Portable seeded generator. std::uniform_int_distribution and std::shuffle
// are implementation-defined, so bounded draws and shuffles live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Calls `on_line` for every non-blank line; the second argument is the
// 1-based line number for error messages.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, std::size_t)>& on_line);

std::vector<json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, std::span<const json> rows);
void append_jsonl(const std::filesystem::path& path, std::span<const json> rows);

json parse_json(std::string_view text, std::string_view context);

// Checked JSON field accessors; failures raise Error(parse) naming the field.
const json& require_field(const json& obj, std::string_view field, std::string_view context);
std::string require_string(const json& obj, std::string_view field, std::string_view context);
std::int64_t require_int(const json& obj, std::string_view field, std::string_view context);
std::string optional_string(const json& obj, std::string_view field, std::string_view context);

std::string format_fixed(double value, int decimals);

// Escapes a CSV cell when it contains separators or quotes.
std::string csv_cell(std::string_view raw);

}  // namespace scidebt

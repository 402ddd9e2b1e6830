#pragma once

// Output records shared by every subcommand, and their JSON / CSV / table
// renderings. Exact integers and rationals travel as decimal strings; reals
// as shortest round-trip decimals.

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "binomcensus/nt.hpp"

namespace binomcensus::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitOracleMismatch = 3;

enum class Format { kTable, kJson, kCsv };

Format parse_format(std::string_view s);

struct OutputRecord {
  std::string command;
  Json params = Json::object();
  Json results = Json::object();
  Json margins = Json::array();
  Json flags = Json::object();
  double wall_time_s = 0.0;

  Json to_json() const;
  static OutputRecord from_json(const Json& j);
};

/// Shortest decimal that round-trips to the same double.
std::string format_real(double v);
/// JSON number for finite v, null otherwise.
Json real(double v);
Json exact(const BigInt& v);
Json exact(std::uint64_t v);
Json exact(const Rational& v);

/// Parses a non-negative integer written as digits or digits 'e' digits
/// ("1000", "1e9", "25e2"). Non-integral mantissas, signs and overflow throw
/// InvalidInput.
std::uint64_t parse_count(std::string_view text);

std::string render_json(const OutputRecord& rec);
/// One header line plus one line per row: `results.rows` when present,
/// otherwise a single row of the flattened results and margins.
std::string render_csv(const OutputRecord& rec);
std::string render_table(const OutputRecord& rec);
std::string render(const OutputRecord& rec, Format format);

}  // namespace binomcensus::cli

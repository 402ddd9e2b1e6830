#include "cli/record.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

#include "binomcensus/errors.hpp"

namespace binomcensus::cli {

namespace {

std::string scalar_text(const Json& v) {
  switch (v.type()) {
    case Json::value_t::null:
      return "";
    case Json::value_t::string:
      return v.get<std::string>();
    case Json::value_t::boolean:
      return v.get<bool>() ? "true" : "false";
    case Json::value_t::number_float:
      return format_real(v.get<double>());
    case Json::value_t::number_integer:
      return std::to_string(v.get<std::int64_t>());
    case Json::value_t::number_unsigned:
      return std::to_string(v.get<std::uint64_t>());
    default:
      return v.dump();
  }
}

void flatten(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  auto key = [&](const std::string& k) { return prefix.empty() ? k : prefix + "." + k; };
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) flatten(it.value(), key(it.key()), out);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      // Margins are keyed by name so columns stay stable across runs.
      const Json& e = v[i];
      const std::string k = e.is_object() && e.contains("name") ? e["name"].get<std::string>() : std::to_string(i);
      flatten(e, key(k), out);
    }
  } else {
    out.emplace_back(prefix, scalar_text(v));
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(cells[i]);
  }
  return line + "\n";
}

void table_lines(const Json& v, int indent, std::ostringstream& os) {
  for (auto it = v.begin(); it != v.end(); ++it) {
    os << std::string(static_cast<std::size_t>(indent), ' ') << it.key() << ":";
    if (it->is_object()) {
      os << "\n";
      table_lines(*it, indent + 2, os);
    } else if (it->is_array()) {
      os << "\n";
      for (std::size_t i = 0; i < it->size(); ++i) {
        const Json& e = (*it)[i];
        if (e.is_object()) {
          os << std::string(static_cast<std::size_t>(indent + 2), ' ') << "[" << i << "]\n";
          table_lines(e, indent + 4, os);
        } else {
          os << std::string(static_cast<std::size_t>(indent + 2), ' ') << scalar_text(e) << "\n";
        }
      }
    } else {
      os << " " << scalar_text(*it) << "\n";
    }
  }
}

void grid(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
          std::ostringstream& os) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c)
      os << (c ? "  " : "") << std::left << std::setw(static_cast<int>(width[c])) << cells[c];
    os << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

}  // namespace

Format parse_format(std::string_view s) {
  if (s == "table") return Format::kTable;
  if (s == "json") return Format::kJson;
  if (s == "csv") return Format::kCsv;
  throw InvalidInput("unknown format '" + std::string(s) + "' (expected table, json or csv)");
}

Json OutputRecord::to_json() const {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["params"] = params;
  j["results"] = results;
  j["margins"] = margins;
  j["flags"] = flags;
  j["wall_time_s"] = real(wall_time_s);
  return j;
}

OutputRecord OutputRecord::from_json(const Json& j) {
  if (j.at("schema_version").get<int>() != kSchemaVersion) throw InvalidInput("unsupported schema version");
  OutputRecord r;
  r.command = j.at("command").get<std::string>();
  r.params = j.at("params");
  r.results = j.at("results");
  r.margins = j.at("margins");
  r.flags = j.at("flags");
  r.wall_time_s = j.at("wall_time_s").is_null() ? 0.0 : j.at("wall_time_s").get<double>();
  return r;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json real(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
Json exact(const BigInt& v) { return v.str(); }
Json exact(std::uint64_t v) { return std::to_string(v); }
Json exact(const Rational& v) {
  const BigInt num = boost::multiprecision::numerator(v);
  const BigInt den = boost::multiprecision::denominator(v);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

std::uint64_t parse_count(std::string_view text) {
  const auto fail = [&] { return InvalidInput("expected a non-negative integer like 1000 or 1e9, got '" +
                                              std::string(text) + "'"); };
  const std::size_t e = text.find_first_of("eE");
  const std::string_view mant = text.substr(0, e);
  const std::string_view expo = e == std::string_view::npos ? std::string_view{} : text.substr(e + 1);
  auto digits = [](std::string_view s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
  };
  if (!digits(mant) || (e != std::string_view::npos && !digits(expo))) throw fail();
  std::uint64_t value = 0;
  auto [p, ec] = std::from_chars(mant.data(), mant.data() + mant.size(), value);
  if (ec != std::errc{} || p != mant.data() + mant.size()) throw fail();
  if (!expo.empty()) {
    unsigned k = 0;
    auto [p2, ec2] = std::from_chars(expo.data(), expo.data() + expo.size(), k);
    if (ec2 != std::errc{} || p2 != expo.data() + expo.size()) throw fail();
    for (unsigned i = 0; i < k && value != 0; ++i)
      if (__builtin_mul_overflow(value, std::uint64_t{10}, &value)) throw fail();
  }
  return value;
}

std::string render_json(const OutputRecord& rec) { return rec.to_json().dump(2, ' ', false) + "\n"; }

std::string render_csv(const OutputRecord& rec) {
  std::vector<std::vector<std::pair<std::string, std::string>>> rows;
  if (rec.results.contains("rows") && rec.results["rows"].is_array()) {
    for (const auto& row : rec.results["rows"]) {
      rows.emplace_back();
      flatten(row, "", rows.back());
    }
  } else {
    rows.emplace_back();
    flatten(rec.results, "", rows.back());
    if (!rec.margins.empty()) flatten(rec.margins, "margins", rows.back());
  }
  // Header is the ordered union of keys; missing cells stay empty.
  std::vector<std::string> header;
  std::map<std::string, std::size_t> index;
  for (const auto& row : rows)
    for (const auto& [k, v] : row)
      if (index.emplace(k, header.size()).second) header.push_back(k);
  std::string out = join_csv(header);
  for (const auto& row : rows) {
    std::vector<std::string> cells(header.size());
    for (const auto& [k, v] : row) cells[index[k]] = v;
    out += join_csv(cells);
  }
  return out;
}

std::string render_table(const OutputRecord& rec) {
  std::ostringstream os;
  os << rec.command << "\n";
  Json results = rec.results;
  Json rows;
  if (results.contains("rows")) {
    rows = results["rows"];
    results.erase("rows");
  }
  table_lines(results, 2, os);
  if (rows.is_array() && !rows.empty()) {
    std::vector<std::pair<std::string, std::string>> first;
    flatten(rows[0], "", first);
    std::vector<std::string> header;
    for (const auto& [k, v] : first) header.push_back(k);
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : rows) {
      std::vector<std::pair<std::string, std::string>> flat;
      flatten(row, "", flat);
      std::map<std::string, std::string> m(flat.begin(), flat.end());
      std::vector<std::string> line;
      for (const auto& h : header) line.push_back(m.count(h) ? m[h] : "");
      cells.push_back(std::move(line));
    }
    grid(header, cells, os);
  }
  if (!rec.margins.empty()) {
    os << "  margins (bound - reference):\n";
    std::vector<std::vector<std::string>> cells;
    for (const auto& m : rec.margins) {
      const bool holds = m.value("holds", true);
      const bool asserted = m.value("asserted", true);
      cells.push_back({"    " + scalar_text(m["name"]), scalar_text(m["bound"]), scalar_text(m["reference"]),
                       scalar_text(m["margin"]),
                       holds ? "ok" : (asserted ? "FAILED" : "VIOLATED"), asserted ? "asserted" : "report-only"});
    }
    grid({"    name", "bound", "reference", "margin", "status", "kind"}, cells, os);
  }
  if (!rec.flags.empty()) {
    os << "  flags:\n";
    table_lines(rec.flags, 4, os);
  }
  return os.str();
}

std::string render(const OutputRecord& rec, Format format) {
  switch (format) {
    case Format::kJson:
      return render_json(rec);
    case Format::kCsv:
      return render_csv(rec);
    case Format::kTable:
    default:
      return render_table(rec);
  }
}

}  // namespace binomcensus::cli

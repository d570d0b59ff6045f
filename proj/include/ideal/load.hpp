#pragma once

// File loaders for the documented roll-call interchange schemas.
//
// CSV: header row `legislator_id,party,group,<motion ids...>`; one row per
// legislator; vote cells in {1, 0, NA, ""} (NA and empty both mean Missing).
// JSON: object with `legislators`, `motions`, and a row-major `votes` array
// of 1 / 0 / null.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ideal/data.hpp"
#include "ideal/errors.hpp"

namespace ideal {

enum class DataFormat { csv, json };

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline RollCallMatrix load_roll_calls_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);

  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty file", 1, 1);
  ++lineno;
  auto header = detail::split_csv_line(line);
  if (header.size() < 4 || detail::trim(header[0]) != "legislator_id" ||
      detail::trim(header[1]) != "party" || detail::trim(header[2]) != "group") {
    throw ParseError(
        "header must start with legislator_id,party,group followed by at "
        "least one motion id",
        1, 1);
  }

  RollCallMatrix matrix;
  matrix.m = static_cast<int>(header.size()) - 3;
  for (std::size_t k = 3; k < header.size(); ++k) {
    MotionMeta mo;
    mo.id = detail::trim(header[k]);
    matrix.motions.push_back(std::move(mo));
  }

  std::vector<std::vector<std::int8_t>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError("row has " + std::to_string(fields.size()) +
                           " fields, header has " +
                           std::to_string(header.size()),
                       lineno, 1);
    }
    LegislatorMeta leg;
    leg.id = detail::trim(fields[0]);
    leg.name = leg.id;
    leg.party = detail::trim(fields[1]);
    leg.group = detail::trim(fields[2]);
    matrix.legislators.push_back(std::move(leg));

    std::vector<std::int8_t> row(static_cast<std::size_t>(matrix.m));
    for (int j = 0; j < matrix.m; ++j) {
      const std::string cell = detail::trim(fields[static_cast<std::size_t>(j) + 3]);
      if (cell == "1") row[static_cast<std::size_t>(j)] = 1;
      else if (cell == "0") row[static_cast<std::size_t>(j)] = 0;
      else if (cell == "NA" || cell.empty()) row[static_cast<std::size_t>(j)] = -1;
      else throw ParseError("unrecognized vote cell '" + cell + "'", lineno, j + 4);
    }
    rows.push_back(std::move(row));
  }

  matrix.n = static_cast<int>(rows.size());
  matrix.votes.resize(matrix.n, matrix.m);
  for (int i = 0; i < matrix.n; ++i) {
    for (int j = 0; j < matrix.m; ++j) {
      matrix.votes(i, j) =
          rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  matrix.validate();
  return matrix;
}

inline RollCallMatrix load_roll_calls_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("json: ") + e.what(), 1, static_cast<long>(e.byte));
  }
  if (!doc.is_object() || !doc.contains("legislators") ||
      !doc.contains("motions") || !doc.contains("votes")) {
    throw ValidationError("json document needs legislators, motions, votes");
  }

  RollCallMatrix matrix;
  for (const auto& l : doc["legislators"]) {
    LegislatorMeta leg;
    if (l.is_string()) {
      leg.id = l.get<std::string>();
      leg.name = leg.id;
    } else {
      leg.id = l.value("id", "");
      leg.name = l.value("name", leg.id);
      leg.party = l.value("party", "");
      leg.group = l.value("group", "");
    }
    matrix.legislators.push_back(std::move(leg));
  }
  for (const auto& mo : doc["motions"]) {
    MotionMeta meta;
    if (mo.is_string()) {
      meta.id = mo.get<std::string>();
    } else {
      meta.id = mo.value("id", "");
      meta.label = mo.value("label", "");
      meta.topic = mo.value("topic", "");
      if (mo.contains("sponsor_flag") && !mo["sponsor_flag"].is_null()) {
        meta.sponsor_flag = mo["sponsor_flag"].get<int>();
      }
    }
    matrix.motions.push_back(std::move(meta));
  }
  matrix.n = static_cast<int>(matrix.legislators.size());
  matrix.m = static_cast<int>(matrix.motions.size());

  const auto& votes = doc["votes"];
  if (!votes.is_array() ||
      static_cast<int>(votes.size()) != matrix.n * matrix.m) {
    throw ValidationError("votes array length must equal n*m (row-major)");
  }
  matrix.votes.resize(matrix.n, matrix.m);
  int k = 0;
  for (int i = 0; i < matrix.n; ++i) {
    for (int j = 0; j < matrix.m; ++j, ++k) {
      const auto& v = votes[static_cast<std::size_t>(k)];
      if (v.is_null()) matrix.votes(i, j) = -1;
      else if (v.is_number_integer() && (v == 0 || v == 1)) {
        matrix.votes(i, j) = static_cast<std::int8_t>(v.get<int>());
      } else {
        throw ValidationError("vote entries must be 1, 0, or null");
      }
    }
  }
  matrix.validate();
  return matrix;
}

inline RollCallMatrix load_roll_calls(const std::string& path, DataFormat format) {
  return format == DataFormat::csv ? load_roll_calls_csv(path)
                                   : load_roll_calls_json(path);
}

}  // namespace ideal

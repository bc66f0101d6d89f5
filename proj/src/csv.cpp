#include "matchpoint/csv.hpp"

#include <algorithm>
#include <cctype>

#include "matchpoint/errors.hpp"

namespace matchpoint {

using nlohmann::json;

bool CsvReader::next(std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  record_line_ = line_;
  int ch;
  while ((ch = in_.get()) != EOF) {
    char c = static_cast<char>(ch);
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line_;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == delimiter_) {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      // dropped; the following '\n' ends the record
    } else if (c == '\n') {
      ++line_;
      if (fields.empty() && field.empty()) {
        record_line_ = line_;
        any = false;
        continue;
      }
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string opt_string(const json& j, const char* key, const std::string& fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_string()) throw SchemaError(std::string("/") + key, "expected string");
  return it->get<std::string>();
}

}  // namespace

ColumnMapping ColumnMapping::from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "expected object");
  static const char* kKnown[] = {"match_id", "first_serve", "second_serve", "server",
                                 "server_format", "returner", "side", "side_format",
                                 "delimiter", "years"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw SchemaError("/" + key, "unknown field");
    }
  }
  ColumnMapping m;
  m.match_id = opt_string(j, "match_id", m.match_id);
  m.first_serve = opt_string(j, "first_serve", m.first_serve);
  m.second_serve = opt_string(j, "second_serve", m.second_serve);
  m.server = opt_string(j, "server", m.server);
  m.returner = opt_string(j, "returner", m.returner);
  m.side = opt_string(j, "side", m.side);

  auto sf = opt_string(j, "server_format", "index");
  if (sf == "index") {
    m.server_format = ServerFormat::Index;
  } else if (sf == "name") {
    m.server_format = ServerFormat::Name;
  } else {
    throw SchemaError("/server_format", "expected \"index\" or \"name\"");
  }
  if (m.server_format == ServerFormat::Name && m.returner.empty()) {
    throw SchemaError("/returner", "required when server_format is \"name\"");
  }

  auto side_format = opt_string(j, "side_format", "points");
  if (side_format == "points") {
    m.side_format = SideFormat::Points;
  } else if (side_format == "label") {
    m.side_format = SideFormat::Label;
  } else {
    throw SchemaError("/side_format", "expected \"points\" or \"label\"");
  }

  auto delim = opt_string(j, "delimiter", ",");
  if (delim.size() != 1) throw SchemaError("/delimiter", "expected a single character");
  m.delimiter = delim[0];

  if (auto it = j.find("years"); it != j.end()) {
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_integer() ||
        !(*it)[1].is_number_integer()) {
      throw SchemaError("/years", "expected [first_year, last_year]");
    }
    m.years = std::make_pair((*it)[0].get<int>(), (*it)[1].get<int>());
  }
  return m;
}

json ColumnMapping::to_json() const {
  json j = {{"match_id", match_id},
            {"first_serve", first_serve},
            {"second_serve", second_serve},
            {"server", server},
            {"server_format", server_format == ServerFormat::Index ? "index" : "name"},
            {"side", side},
            {"side_format", side_format == SideFormat::Points ? "points" : "label"},
            {"delimiter", std::string(1, delimiter)}};
  if (!returner.empty()) j["returner"] = returner;
  if (years) j["years"] = {years->first, years->second};
  return j;
}

std::optional<Side> side_from_points(const std::string& pts) {
  auto dash = pts.find('-');
  if (dash == std::string::npos) return std::nullopt;
  auto game_call = [](const std::string& t) -> std::optional<int> {
    std::string u = lower(t);
    if (u == "0") return 0;
    if (u == "15") return 1;
    if (u == "30") return 2;
    if (u == "40") return 3;
    if (u == "ad") return 4;
    return std::nullopt;
  };
  auto number = [](const std::string& t) -> std::optional<int> {
    if (t.empty() || t.size() > 4) return std::nullopt;
    for (char c : t) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    }
    return std::stoi(t);
  };
  std::string a = pts.substr(0, dash);
  std::string b = pts.substr(dash + 1);
  auto ga = game_call(a), gb = game_call(b);
  int played;
  if (ga && gb) {
    played = *ga + *gb;
  } else {
    auto na = number(a), nb = number(b);
    if (!na || !nb) return std::nullopt;
    played = *na + *nb;
  }
  return played % 2 == 0 ? Side::Deuce : Side::Advantage;
}

RallyRowReader::RallyRowReader(std::istream& in, ColumnMapping mapping)
    : mapping_(std::move(mapping)), reader_(in, mapping_.delimiter) {
  std::vector<std::string> header;
  if (!reader_.next(header)) throw SchemaError("", "CSV input has no header row");
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
  width_ = header.size();
  auto column = [&](const std::string& name, const char* field) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw SchemaError(std::string("/") + field, "column \"" + name + "\" not in CSV header");
    }
    return static_cast<int>(it - header.begin());
  };
  match_id_col_ = column(mapping_.match_id, "match_id");
  first_col_ = column(mapping_.first_serve, "first_serve");
  second_col_ = column(mapping_.second_serve, "second_serve");
  server_col_ = column(mapping_.server, "server");
  side_col_ = column(mapping_.side, "side");
  if (mapping_.server_format == ColumnMapping::ServerFormat::Name) {
    returner_col_ = column(mapping_.returner, "returner");
  }
}

RallyRowReader::Status RallyRowReader::next(RallyRow& row) {
  if (!reader_.next(fields_)) return Status::End;
  auto fail = [&](const std::string& why) {
    last_error_ = "line " + std::to_string(reader_.line()) + ": " + why;
    return Status::Unreadable;
  };
  if (fields_.size() != width_) {
    return fail("expected " + std::to_string(width_) + " fields, got " +
                std::to_string(fields_.size()));
  }
  row = RallyRow{};
  row.match_id = fields_[match_id_col_];

  if (mapping_.years) {
    const auto& id = row.match_id;
    if (id.size() < 4 || !std::all_of(id.begin(), id.begin() + 4,
                                      [](unsigned char c) { return std::isdigit(c); })) {
      return fail("match_id without leading year");
    }
    int year = std::stoi(id.substr(0, 4));
    if (year < mapping_.years->first || year > mapping_.years->second) return Status::Filtered;
  }

  if (mapping_.server_format == ColumnMapping::ServerFormat::Index) {
    const auto& id = row.match_id;
    auto last = id.rfind('-');
    auto prev = last == std::string::npos || last == 0 ? std::string::npos : id.rfind('-', last - 1);
    if (prev == std::string::npos) return fail("match_id does not end in two player names");
    std::string p1 = id.substr(prev + 1, last - prev - 1);
    std::string p2 = id.substr(last + 1);
    std::replace(p1.begin(), p1.end(), '_', ' ');
    std::replace(p2.begin(), p2.end(), '_', ' ');
    const auto& svr = fields_[server_col_];
    if (svr == "1") {
      row.server_name = p1;
      row.returner_name = p2;
    } else if (svr == "2") {
      row.server_name = p2;
      row.returner_name = p1;
    } else {
      return fail("server index \"" + svr + "\" is not 1 or 2");
    }
  } else {
    row.server_name = fields_[server_col_];
    row.returner_name = fields_[returner_col_];
  }

  const auto& side = fields_[side_col_];
  if (mapping_.side_format == ColumnMapping::SideFormat::Points) {
    auto s = side_from_points(side);
    if (!s) return fail("unrecognised score \"" + side + "\"");
    row.side = *s;
  } else {
    auto v = lower(side);
    if (v == "deuce" || v == "d") {
      row.side = Side::Deuce;
    } else if (v == "advantage" || v == "ad" || v == "a") {
      row.side = Side::Advantage;
    } else {
      return fail("unrecognised side \"" + side + "\"");
    }
  }

  row.first_serve_string = fields_[first_col_];
  if (!fields_[second_col_].empty()) row.second_serve_string = fields_[second_col_];
  return Status::Row;
}

}  // namespace matchpoint
